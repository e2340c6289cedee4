"""Core tests and core reduction for tree patterns.

A tree is a *core* when no sibling subtree can be mapped (root-path
preserving) into another sibling subtree; equivalently, deleting any
subtree changes what the tree can match.  Cores are the canonical
representatives of homomorphism-equivalence classes: all other members
reduce to them.

Besides the quadratic brute-force test there are two incremental variants
used by the miner: a core test that reuses the stored verdict of the tree
obtained by removing the split node's leftmost subtree, and a constant-time
update for *unavoidable* reducibility (a reducible sibling pair that has
fallen off the rightmost path can never be fixed by further growth).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import MiningInvariantError, OracleCapError
from .homomorphism import embeds
from .pattern import (Code, Token, TreeNode, TreeView, canonical_code,
                      code_to_tree, remove_leftmost_subtree, subtree_code)


@dataclass(frozen=True)
class CoreVerdict:
    """Result of a core test; ``witness`` is the reducing sibling pair
    (DFS node indices) present exactly when the tree is not a core."""

    is_core: bool
    witness: Optional[tuple[int, int]] = None


def _sibling_pairs(view: TreeView):
    """All sibling index pairs (i, j) with i < j, in DFS order of (i, j)."""
    for kids in view.children:
        for a in range(len(kids)):
            for b in range(a + 1, len(kids)):
                yield kids[a], kids[b]


def is_core_bruteforce(code: Code, cap: int = 100) -> CoreVerdict:
    """Check every sibling pair for a mapping in either direction."""
    if len(code) > cap:
        raise OracleCapError(f"pattern has {len(code)} nodes, core cap is {cap}")
    view = TreeView(code)
    subs: dict[int, Code] = {}

    def sub(v):
        if v not in subs:
            subs[v] = subtree_code(code, v, view)
        return subs[v]

    for i, j in sorted(_sibling_pairs(view)):
        if embeds(sub(j), sub(i)) or embeds(sub(i), sub(j)):
            return CoreVerdict(False, (i, j))
    return CoreVerdict(True)


def is_core_incremental(code: Code, trie, view: Optional[TreeView] = None) -> bool:
    """Core test for codes generated by the miner.

    Paths are always cores.  Otherwise the tree minus the split node's
    leftmost subtree was enumerated earlier and sits in the trie with a
    known verdict; when that ancestor is a core, the only reduction the
    search has not already ruled out is the split node's rightmost subtree
    mapping into its leftmost one.
    """
    view = view or TreeView(code)
    s = view.split_node
    if s is None:
        return True
    reduced = remove_leftmost_subtree(code, s, view)
    node = trie.find(reduced)
    if node is None:
        raise MiningInvariantError(f"reduced ancestor missing from trie: {reduced!r}")
    if not node.is_core:
        return False
    kids = view.children[s]
    rightmost = subtree_code(code, kids[-1], view)
    leftmost = subtree_code(code, kids[0], view)
    return not embeds(rightmost, leftmost)


def unavoidably_reducible(code: Code, view: Optional[TreeView] = None) -> bool:
    """True iff some reducing sibling pair lies entirely off the rightmost
    path, so no extension can ever repair it."""
    view = view or TreeView(code)
    on_path = set(view.rightmost_path)
    subs: dict[int, Code] = {}

    def sub(v):
        if v not in subs:
            subs[v] = subtree_code(code, v, view)
        return subs[v]

    for i, j in _sibling_pairs(view):
        if i in on_path or j in on_path:
            continue
        if embeds(sub(j), sub(i)) or embeds(sub(i), sub(j)):
            return True
    return False


def unavoidably_reducible_incremental(parent_is_core: bool,
                                      parent_split_depth: Optional[int],
                                      token: Token) -> bool:
    """Incremental unavoidability update for one extension step.

    The parent is avoidably reducible by miner invariant.  Attaching the
    new node at or above the parent's split node pushes the split node's
    children off the rightmost path; if the parent was not a core, its
    reducing pair lived there and is now beyond repair.  Attaching below
    the split node can never create new unavoidable reducibility: that
    region mirrors a tree stored earlier, and nothing unavoidable is ever
    stored.
    """
    if parent_is_core or parent_split_depth is None:
        return False
    return token.depth <= parent_split_depth + 1


def reduce_to_core(tree: Union[TreeNode, Code]) -> Code:
    """Delete mapped-into sibling subtrees until the tree is a core.

    Deterministic tie-break: always delete the DFS-latest deletable
    subtree, which keeps the lexicographically larger siblings.  Returns
    the canonical code of the result, which stays equivalent to the input.
    """
    if isinstance(tree, Code):
        code = canonical_code(code_to_tree(tree)[0])
    else:
        code = canonical_code(tree)

    while True:
        view = TreeView(code)
        subs: dict[int, Code] = {}

        def sub(v):
            if v not in subs:
                subs[v] = subtree_code(code, v, view)
            return subs[v]

        deletable: set[int] = set()
        for i, j in _sibling_pairs(view):
            if embeds(sub(j), sub(i)):
                deletable.add(j)
            if embeds(sub(i), sub(j)):
                deletable.add(i)
        if not deletable:
            return code
        victim = max(deletable)
        start, end = view.block(victim)
        pruned = Code(code.tokens[:start] + code.tokens[end:])
        code = canonical_code(code_to_tree(pruned)[0])
