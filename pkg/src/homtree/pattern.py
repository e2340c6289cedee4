"""Canonical depth/label codes for rooted unordered trees.

A rooted ordered tree is written as the sequence of its nodes in
depth-first order, each node contributing one token holding its depth and
label (plus the label of the edge from its parent, when edge labels are
mined).  Among all orderings of an unordered tree the *canonical* code is
the lexicographically greatest one; a tree is in canonical form exactly
when every node's child subtrees appear in non-increasing code order.

Token order: a deeper token is greater; at equal depth the edge label
decides (absent sorts lowest), then the node label; a proper prefix sorts
below its extensions.  With this order the miner's depth-first output is
already sorted.

Node indices used throughout the package are depth-first positions in the
code, so the i-th token describes node i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence


@dataclass(frozen=True)
class Token:
    """One (depth, label) entry of a code; edge_label only in edge-label mode."""

    depth: int
    label: int
    edge_label: Optional[int] = None

    @property
    def key(self) -> tuple[int, int, int]:
        el = -1 if self.edge_label is None else self.edge_label
        return (self.depth, el, self.label)

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key


class Code:
    """Immutable token sequence representing a rooted ordered tree.

    Construction validates structure: the first token has depth 0 and no
    edge label, and every later token's depth is between 1 and the previous
    depth plus one.
    """

    __slots__ = ("tokens", "_key")

    def __init__(self, tokens: Iterable[Token]):
        tokens = tuple(tokens)
        if not tokens:
            raise ValueError("a code needs at least one token")
        if tokens[0].depth != 0 or tokens[0].edge_label is not None:
            raise ValueError(f"root token must be (0, label): {tokens[0]}")
        prev = 0
        for t in tokens[1:]:
            if not 1 <= t.depth <= prev + 1:
                raise ValueError(f"depth jump {prev} -> {t.depth} is not allowed")
            prev = t.depth
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "_key", tuple(t.key for t in tokens))

    def __setattr__(self, name, value):
        raise AttributeError("Code is immutable")

    def __len__(self):
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, i) -> Token:
        return self.tokens[i]

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Code) and self.tokens == other.tokens

    def __hash__(self):
        return hash(self.tokens)

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key

    def child(self, token: Token) -> "Code":
        """The code extended by one token."""
        return Code(self.tokens + (token,))

    def prefix(self, n: int) -> "Code":
        return Code(self.tokens[:n])

    @property
    def is_path(self) -> bool:
        """True when the tree is a single root-to-leaf chain."""
        return all(t.depth == i for i, t in enumerate(self.tokens))

    @property
    def last_depth(self) -> int:
        return self.tokens[-1].depth

    def __repr__(self):
        body = " ".join(f"{t.depth}:{t.label}" +
                        ("" if t.edge_label is None else f"/{t.edge_label}")
                        for t in self.tokens)
        return f"Code({body})"


def compare(a: Code, b: Code) -> int:
    """Lexicographic comparison: -1, 0 or 1."""
    if a.key < b.key:
        return -1
    if a.key > b.key:
        return 1
    return 0


class TreeView:
    """Decoded structural view of a code.

    parent[i] is the node index of i's parent (None for the root),
    children[i] the child indices in code order, rightmost_path the node
    indices from the root to the last node, and split_node the shallowest
    rightmost-path node with at least two children (None for a pure path).
    block(i) gives the contiguous token range [i, end) of i's subtree.
    """

    __slots__ = ("code", "parent", "children", "rightmost_path", "_block_end")

    def __init__(self, code: Code):
        self.code = code
        n = len(code)
        parent: list[Optional[int]] = [None] * n
        children: list[list[int]] = [[] for _ in range(n)]
        chain: list[int] = []  # current rightmost chain, one node per depth
        for i, t in enumerate(code):
            del chain[t.depth:]
            if t.depth > 0:
                parent[i] = chain[-1]
                children[chain[-1]].append(i)
            chain.append(i)
        self.parent = parent
        self.children = children
        self.rightmost_path = chain  # survivors of the loop = path to last node

        end = [n] * n
        stack: list[int] = []
        for i, t in enumerate(code):
            while stack and code[stack[-1]].depth >= t.depth:
                end[stack.pop()] = i
            stack.append(i)
        self._block_end = end

    def block(self, v: int) -> tuple[int, int]:
        """Token index range [start, end) of v's subtree."""
        return v, self._block_end[v]

    def block_tokens(self, v: int) -> tuple[Token, ...]:
        s, e = self.block(v)
        return self.code.tokens[s:e]

    @property
    def split_node(self) -> Optional[int]:
        for v in self.rightmost_path:
            if len(self.children[v]) >= 2:
                return v
        return None

    def depth(self, v: int) -> int:
        return self.code[v].depth


def decode(code: Code) -> TreeView:
    return TreeView(code)


def split_node(code: Code) -> Optional[int]:
    """Shallowest rightmost-path node with >= 2 children; None for a path."""
    return TreeView(code).split_node


def subtree_code(code: Code, v: int, view: Optional[TreeView] = None) -> Code:
    """Code of the subtree anchored at v: the root path to v plus all of
    v's descendants, depths preserved."""
    view = view or TreeView(code)
    path = []
    p = view.parent[v]
    while p is not None:
        path.append(code[p])
        p = view.parent[p]
    path.reverse()
    return Code(tuple(path) + view.block_tokens(v))


def remove_leftmost_subtree(code: Code, s: int,
                            view: Optional[TreeView] = None) -> Code:
    """Delete the token block of s's first child subtree."""
    view = view or TreeView(code)
    kids = view.children[s]
    if len(kids) < 2:
        raise ValueError(f"node {s} has fewer than two children")
    start, end = view.block(kids[0])
    return Code(code.tokens[:start] + code.tokens[end:])


def is_canonical(code: Code, view: Optional[TreeView] = None) -> bool:
    """True iff every pair of sibling subtrees is in non-increasing code order.

    Consecutive siblings suffice: the order is total, so pairwise order is
    transitive.  Sibling blocks start at equal depth, which makes absolute
    token sequences directly comparable.
    """
    view = view or TreeView(code)
    for kids in view.children:
        for a, b in zip(kids, kids[1:]):
            ka = tuple(t.key for t in view.block_tokens(a))
            kb = tuple(t.key for t in view.block_tokens(b))
            if ka < kb:
                return False
    return True


class TreeNode:
    """Mutable rooted tree used as input to encoding and rewriting steps.

    ``edge_label`` is the label of the edge from the parent (None at the
    root and in the default, edge-label-free mode).
    """

    __slots__ = ("label", "children", "edge_label")

    def __init__(self, label: int, children: Optional[list["TreeNode"]] = None,
                 edge_label: Optional[int] = None):
        self.label = label
        self.children = children if children is not None else []
        self.edge_label = edge_label

    def copy(self) -> "TreeNode":
        return TreeNode(self.label, [c.copy() for c in self.children], self.edge_label)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def __repr__(self):
        return f"TreeNode({self.label}, {self.children!r})"


def canonical_code(tree: TreeNode) -> Code:
    """Maximal code over all child orderings of an unordered tree."""

    def rel(node: TreeNode, edge_label) -> list[Token]:
        subs = sorted((rel(c, c.edge_label) for c in node.children),
                      key=lambda toks: tuple(t.key for t in toks),
                      reverse=True)
        out = [Token(0, node.label, edge_label)]
        for sub in subs:
            out.extend(Token(t.depth + 1, t.label, t.edge_label) for t in sub)
        return out

    return Code(rel(tree, None))


def code_to_tree(code: Code) -> list[TreeNode]:
    """Materialize a code as TreeNodes; returns all nodes in code order
    (element 0 is the root)."""
    nodes = [TreeNode(t.label, edge_label=t.edge_label) for t in code]
    chain: list[int] = []
    for i, t in enumerate(code):
        del chain[t.depth:]
        if t.depth > 0:
            nodes[chain[-1]].children.append(nodes[i])
        chain.append(i)
    return nodes


def root_path_codes(code: Code, view: Optional[TreeView] = None) -> list[Code]:
    """The root-path pattern of every node, as standalone path codes."""
    view = view or TreeView(code)
    out = []
    for v in range(len(code)):
        path = [code[v]]
        p = view.parent[v]
        while p is not None:
            path.append(code[p])
            p = view.parent[p]
        path.reverse()
        out.append(Code(path))
    return out


def render_code(code: Code, labels: Sequence[str]) -> str:
    """Text form: space-separated depth/label alternation, e.g. "0 a 1 b".

    In edge-label mode every non-root token renders as depth, edge label,
    node label (three fields).
    """
    parts = []
    for t in code:
        parts.append(str(t.depth))
        if t.edge_label is not None:
            parts.append(labels[t.edge_label])
        parts.append(labels[t.label])
    return " ".join(parts)


def parse_code(text: str, label_ids: Mapping[str, int],
               edge_labels: bool = False) -> Code:
    """Inverse of render_code. ``label_ids`` maps label strings to ids."""
    fields = text.split()
    tokens = []
    i = 0
    while i < len(fields):
        depth = int(fields[i])
        if edge_labels and depth > 0:
            if i + 2 >= len(fields):
                raise ValueError(f"truncated code text: {text!r}")
            tokens.append(Token(depth, label_ids[fields[i + 2]],
                                label_ids[fields[i + 1]]))
            i += 3
        else:
            if i + 1 >= len(fields):
                raise ValueError(f"truncated code text: {text!r}")
            tokens.append(Token(depth, label_ids[fields[i + 1]]))
            i += 2
    return Code(tokens)
