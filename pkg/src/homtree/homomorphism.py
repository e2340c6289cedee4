"""Image sets of tree patterns in a graph.

The image of a pattern node is the set of data nodes it reaches under at
least one full homomorphism of the pattern.  Homomorphisms need not be
injective, which is what makes all of this polynomial: for trees,
per-node consistency propagation is exact.

Two evaluation routes are provided: ``images_from_scratch`` recomputes
every node's image for a standalone code, and ``ImageStack`` maintains
the images of the rightmost-path nodes incrementally while the miner
grows and shrinks the pattern, with an undo log so backtracking restores
earlier states exactly.  ``iso_support`` is the deliberately exponential
injective counterpart used as a reference.
"""

from __future__ import annotations

import enum
from typing import Optional

from .errors import ConfigError, MiningInvariantError, OracleCapError
from .graph import Graph
from .pattern import Code, Token, TreeView


class SupportMode(enum.Enum):
    """How root images are counted: distinct nodes, or distinct transactions."""

    NETWORK = "network"
    TRANSACTIONAL = "transactional"


def _successors(g: Graph, v: int, label: int, edge_label,
                edge_mode: bool) -> list[int]:
    if edge_mode:
        return g.successors_with_edge_label(v, edge_label, label)
    return g.successors_with_label(v, label)


def images_from_scratch(code: Code, g: Graph,
                        edge_mode: bool = False) -> list[set[int]]:
    """Exact image of every pattern node, indexed by code position.

    Pass one walks the nodes bottom-up and keeps the data nodes whose
    subtree can be matched below them; pass two walks top-down and keeps
    only data nodes reachable from a surviving parent image.  Together
    they are exact for trees because sibling subtrees impose no mutual
    (injectivity) constraints.
    """
    view = TreeView(code)
    n = len(code)
    down: list[set[int]] = [set()] * n
    for v in range(n - 1, -1, -1):
        keep = set()
        for w in g.nodes_with_label(code[v].label):
            ok = True
            for c in view.children[v]:
                succ = _successors(g, w, code[c].label, code[c].edge_label, edge_mode)
                if down[c].isdisjoint(succ):
                    ok = False
                    break
            if ok:
                keep.add(w)
        down[v] = keep

    img: list[set[int]] = [set()] * n
    img[0] = set(down[0])
    for v in range(1, n):
        p = view.parent[v]
        found = set()
        for u in img[p]:
            for w in _successors(g, u, code[v].label, code[v].edge_label, edge_mode):
                if w in down[v]:
                    found.add(w)
        img[v] = found
    return img


def count_support(root_image, g: Graph, mode: SupportMode) -> int:
    if mode is SupportMode.TRANSACTIONAL:
        if g.txn is None:
            raise ConfigError("transactional support requires transaction ids")
        return len({g.txn[v] for v in root_image})
    return len(root_image)


def support(code: Code, g: Graph, mode: SupportMode = SupportMode.NETWORK,
            edge_mode: bool = False) -> int:
    """Support of a pattern: size of the root image (or its transaction count)."""
    return count_support(images_from_scratch(code, g, edge_mode)[0], g, mode)


class _Frame:
    __slots__ = ("token", "image", "left_sib_image")

    def __init__(self, token: Token, image: set[int],
                 left_sib_image: Optional[frozenset[int]] = None):
        self.token = token
        self.image = image
        self.left_sib_image = left_sib_image


class ImageStack:
    """Rightmost-path images with undo, owned by one depth-first search.

    ``extend`` accepts the next token of the growing code.  Frames deeper
    than the new node's parent belong to nodes that leave the rightmost
    path but stay in the pattern, so they are dropped *without* undoing
    the pruning they caused earlier; ``backtrack`` (which removes the
    token from the pattern) restores them exactly.

    Frame i always holds the exact image of the rightmost-path node at
    depth i for the pattern grown so far.
    """

    def __init__(self, g: Graph, mode: SupportMode = SupportMode.NETWORK,
                 edge_mode: bool = False):
        self.g = g
        self.mode = mode
        self.edge_mode = edge_mode
        self.frames: list[_Frame] = []
        self._undo: list[tuple[list[_Frame], list[tuple[int, set[int]]]]] = []

    def __len__(self):
        return len(self.frames)

    @property
    def depth(self) -> int:
        return len(self.frames) - 1

    @property
    def root_image(self) -> set[int]:
        return self.frames[0].image

    def images(self) -> list[set[int]]:
        return [f.image for f in self.frames]

    def support(self) -> int:
        if not self.frames:
            return 0
        return count_support(self.frames[0].image, self.g, self.mode)

    def last_dropped(self) -> list[_Frame]:
        """Frames dropped by the most recent extend (for search-time pruning)."""
        if not self._undo:
            return []
        return self._undo[-1][0]

    def extend(self, token: Token) -> int:
        """Push the image of a new rightmost node, re-prune ancestors
        bottom-up, and return the new support."""
        d = token.depth
        if d > len(self.frames):
            raise MiningInvariantError(
                f"cannot extend at depth {d} with {len(self.frames)} frames")
        dropped = self.frames[d:]
        del self.frames[d:]

        if d == 0:
            image = set(self.g.nodes_with_label(token.label))
        else:
            image = set()
            for u in self.frames[d - 1].image:
                image.update(_successors(self.g, u, token.label,
                                         token.edge_label, self.edge_mode))

        left_sib = None
        if dropped and dropped[0].token.label == token.label \
                and dropped[0].token.edge_label == token.edge_label:
            left_sib = frozenset(dropped[0].image)
        self.frames.append(_Frame(token, image, left_sib))

        removals: list[tuple[int, set[int]]] = []
        for i in range(d - 1, -1, -1):
            child = self.frames[i + 1]
            lbl, el = child.token.label, child.token.edge_label
            removed = {u for u in self.frames[i].image
                       if child.image.isdisjoint(
                           _successors(self.g, u, lbl, el, self.edge_mode))}
            if not removed:
                break  # nothing changed here, nothing can change above
            self.frames[i].image -= removed
            removals.append((i, removed))

        self._undo.append((dropped, removals))
        return self.support()

    def backtrack(self) -> None:
        """Undo the most recent extend exactly."""
        if not self._undo:
            raise MiningInvariantError("backtrack on an empty undo log")
        dropped, removals = self._undo.pop()
        self.frames.pop()
        for i, removed in removals:
            self.frames[i].image |= removed
        self.frames.extend(dropped)


def _child_table(code: Code):
    view = TreeView(code)
    return view.children


def embeds(a: Code, b: Code) -> bool:
    """Root-preserving homomorphism test: can ``a`` be mapped into ``b``?

    Bottom-up with memoization: node u of ``a`` maps to node w of ``b``
    iff their labels (and edge labels) agree and every child of u maps to
    some child of w.  Reusing one target child for several pattern
    children is allowed, which is exactly what non-injectivity means.
    """
    ca, cb = _child_table(a), _child_table(b)
    memo: dict[tuple[int, int], bool] = {}

    def can(u: int, w: int) -> bool:
        key = (u, w)
        got = memo.get(key)
        if got is not None:
            return got
        ta, tb = a[u], b[w]
        if ta.label != tb.label or ta.edge_label != tb.edge_label:
            ok = False
        else:
            ok = all(any(can(cu, cw) for cw in cb[w]) for cu in ca[u])
        memo[key] = ok
        return ok

    return can(0, 0)


def iso_support(code: Code, g: Graph, mode: SupportMode = SupportMode.NETWORK,
                cap: int = 12, edge_mode: bool = False) -> int:
    """Support under *injective* root-preserving mappings.

    Plain backtracking over the pattern nodes in code order; exponential
    by nature and capped, meant as a reference measure rather than a
    production path.
    """
    if len(code) > cap:
        raise OracleCapError(
            f"pattern has {len(code)} nodes, isomorphism cap is {cap}")
    view = TreeView(code)
    n = len(code)
    roots = set()

    def match(i: int, assign: list[int], used: set[int]) -> bool:
        if i == n:
            return True
        p = assign[view.parent[i]]
        for w in _successors(g, p, code[i].label, code[i].edge_label, edge_mode):
            if w in used:
                continue
            assign[i] = w
            used.add(w)
            if match(i + 1, assign, used):
                used.discard(w)
                return True
            used.discard(w)
        return False

    for r in g.nodes_with_label(code[0].label):
        assign = [-1] * n
        assign[0] = r
        if match(1, assign, {r}):
            roots.add(r)
    return count_support(roots, g, mode)
