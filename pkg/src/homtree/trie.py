"""Prefix tree over codes: per-pattern metadata and the extension index.

Every explored pattern that is frequent and still avoidably reducible is
inserted, core or not: non-core entries are needed both as reduced
ancestors for the incremental core test and as extension sources.  A
node's children are the tokens that extended it into another stored
pattern, which is exactly the candidate set the miner consults instead of
ever testing canonicality explicitly.

Once the depth-first search below a pattern has finished, the storage
rule can be applied lazily: entries whose subtree produced no core are
deleted (``prune_on_backtrack``), which both saves memory and withdraws
extension candidates that provably lead nowhere.
"""

from __future__ import annotations

from typing import Optional

from .errors import MiningInvariantError
from .pattern import Code, Token


class TrieNode:
    __slots__ = ("edge", "parent", "children", "support", "is_core",
                 "has_core_descendant")

    def __init__(self, edge: Optional[Token], parent: Optional["TrieNode"]):
        self.edge = edge
        self.parent = parent
        self.children: dict[Token, TrieNode] = {}
        self.support = 0
        self.is_core = False
        self.has_core_descendant = False


class Trie:
    """Prefix tree keyed by tokens; the sentinel root carries no token."""

    def __init__(self):
        self.root = TrieNode(None, None)
        self.size = 0  # stored codes, sentinel excluded

    def __len__(self):
        return self.size

    def find(self, code: Code) -> Optional[TrieNode]:
        node = self.root
        for t in code:
            node = node.children.get(t)
            if node is None:
                return None
        return node

    def insert(self, code: Code, support: int, is_core: bool) -> None:
        """Record a pattern; every proper prefix must already be present
        (the miner explores in prefix order).  Re-insertion is idempotent."""
        node = self.root
        for t in code.tokens[:-1]:
            node = node.children.get(t)
            if node is None:
                raise MiningInvariantError(
                    f"prefix missing from trie while inserting {code!r}")
        last = code.tokens[-1]
        child = node.children.get(last)
        if child is None:
            child = TrieNode(last, node)
            node.children[last] = child
            self.size += 1
        child.support = support
        child.is_core = is_core
        if is_core:
            walk: Optional[TrieNode] = child
            while walk is not None and not walk.has_core_descendant:
                walk.has_core_descendant = True
                walk = walk.parent

    def children_of(self, code: Code) -> list[Token]:
        """Child tokens of the stored code, in descending token order;
        empty when the code is absent."""
        node = self.find(code)
        if node is None:
            return []
        return sorted(node.children, key=lambda t: t.key, reverse=True)

    def prune_on_backtrack(self, code: Code) -> None:
        """Drop the entry (and newly childless ancestors) once its search
        subtree is complete and produced no core."""
        node = self.find(code)
        if node is None or node.has_core_descendant:
            return
        parent = node.parent
        while parent is not None and node.edge is not None:
            del parent.children[node.edge]
            self.size -= 1
            if parent.children or parent.has_core_descendant:
                break
            node, parent = parent, parent.parent

    def dump(self, labels=None) -> str:
        """Indented listing of the stored codes, trie child order."""
        out: list[str] = []

        def name(t: Token) -> str:
            lbl = labels[t.label] if labels is not None else str(t.label)
            if t.edge_label is not None:
                el = labels[t.edge_label] if labels is not None else str(t.edge_label)
                lbl = f"{el}:{lbl}"
            return f"{t.depth} {lbl}"

        def walk(node: TrieNode, indent: int):
            for t in sorted(node.children, key=lambda t: t.key, reverse=True):
                child = node.children[t]
                flag = " *" if child.is_core else ""
                out.append("  " * indent + name(t) +
                           f" [support={child.support}{flag}]")
                walk(child, indent + 1)

        walk(self.root, 0)
        return "\n".join(out)
