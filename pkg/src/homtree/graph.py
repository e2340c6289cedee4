"""Immutable labeled directed graph with label-indexed adjacency.

The graph text format is line oriented:

    v <id> <label>          declare a node
    e <src> <dst> [<elabel>] declare a directed edge (optional edge label)
    t <id> <txn>            assign a transaction id to a node
    # ...                   comment; blank lines are ignored

Node lines must precede the edge and transaction lines that refer to them.
Node ids in the file may be arbitrary non-negative integers; internally
they are renumbered densely in declaration order.

Labels are interned to dense integer ids in first-occurrence order, with
one twist: labels declared as *property labels* always receive the lowest
ids (in their own first-occurrence order).  Under the pattern ordering
used by the miner, low ids sort last among siblings, which places property
children on the rightmost path where constraint pruning can see them.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import DuplicateNodeError, GraphFormatError, UnknownNodeError


class Graph:
    """Labeled directed multigraph, immutable after construction.

    Attributes:
    - labels: label id -> label string.
    - node_labels: node id -> label id.
    - out_edges: node id -> list of (successor, edge label id or None),
      in declaration order, parallel edges preserved.
    - txn: node id -> transaction id, or None when the data is one network.
    - property_label_ids: ids of the labels declared as property labels.

    The label index used by the matcher collapses parallel edges: for each
    node it maps a successor *node* label to the sorted, deduplicated list
    of successors carrying that label.
    """

    def __init__(self, labels, node_labels, out_edges, txn=None,
                 property_label_ids=frozenset()):
        self.labels: list[str] = list(labels)
        self.label_ids: dict[str, int] = {s: i for i, s in enumerate(self.labels)}
        self.node_labels: list[int] = list(node_labels)
        self.out_edges: list[list[tuple[int, Optional[int]]]] = [list(es) for es in out_edges]
        self.txn: Optional[list[int]] = list(txn) if txn is not None else None
        self.property_label_ids = frozenset(property_label_ids)

        n = len(self.node_labels)
        self._label_index: list[dict[int, list[int]]] = [dict() for _ in range(n)]
        self._edge_label_index: list[dict[tuple[Optional[int], int], list[int]]] = \
            [dict() for _ in range(n)]
        for v, edges in enumerate(self.out_edges):
            plain: dict[int, set[int]] = {}
            keyed: dict[tuple[Optional[int], int], set[int]] = {}
            for w, el in edges:
                wl = self.node_labels[w]
                plain.setdefault(wl, set()).add(w)
                keyed.setdefault((el, wl), set()).add(w)
            self._label_index[v] = {k: sorted(s) for k, s in plain.items()}
            self._edge_label_index[v] = {k: sorted(s) for k, s in keyed.items()}

        self._nodes_by_label: dict[int, list[int]] = {}
        for v, lbl in enumerate(self.node_labels):
            self._nodes_by_label.setdefault(lbl, []).append(v)

        self._cyclic: Optional[bool] = None

    # -- basic accessors ----------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self.node_labels)

    @property
    def num_labels(self) -> int:
        return len(self.labels)

    def label_id(self, name: str) -> int:
        return self.label_ids[name]

    def nodes_with_label(self, label: int) -> list[int]:
        """All node ids carrying ``label``, ascending."""
        return self._nodes_by_label.get(label, [])

    def successors_with_label(self, v: int, label: int) -> list[int]:
        """Successors of ``v`` whose node label is ``label``, ascending, deduplicated."""
        return self._label_index[v].get(label, [])

    def successors_with_edge_label(self, v, edge_label, label) -> list[int]:
        """Like successors_with_label but also filtered by the edge label."""
        return self._edge_label_index[v].get((edge_label, label), [])

    def edge_token_pairs(self) -> list[tuple[Optional[int], int]]:
        """Distinct (edge label, successor node label) pairs occurring in the data."""
        pairs = set()
        for idx in self._edge_label_index:
            pairs.update(idx.keys())
        return sorted(pairs, key=lambda p: (-1 if p[0] is None else p[0], p[1]))

    @property
    def is_cyclic(self) -> bool:
        """Whether the graph contains a directed cycle (computed once, cached)."""
        if self._cyclic is None:
            self._cyclic = self._detect_cycle()
        return self._cyclic

    def _detect_cycle(self):
        # Iterative three-color DFS; self-loops and back edges both count.
        WHITE, GRAY, BLACK = 0, 1, 2
        color = [WHITE] * self.num_nodes
        for start in range(self.num_nodes):
            if color[start] != WHITE:
                continue
            stack = [(start, iter(self.out_edges[start]))]
            color[start] = GRAY
            while stack:
                v, it = stack[-1]
                advanced = False
                for w, _ in it:
                    if color[w] == GRAY:
                        return True
                    if color[w] == WHITE:
                        color[w] = GRAY
                        stack.append((w, iter(self.out_edges[w])))
                        advanced = True
                        break
                if not advanced:
                    color[v] = BLACK
                    stack.pop()
        return False

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (dump_graph(self) == dump_graph(other)
                and self.property_label_names() == other.property_label_names())

    def __hash__(self):  # pragma: no cover - graphs are not meant to be dict keys
        return hash(dump_graph(self))

    def property_label_names(self) -> frozenset[str]:
        return frozenset(self.labels[i] for i in self.property_label_ids)

    def __repr__(self):
        edges = sum(len(es) for es in self.out_edges)
        return f"Graph(nodes={self.num_nodes}, edges={edges}, labels={self.num_labels})"


def load_graph(source: str | Iterable[str],
               property_labels: Optional[Iterable[str]] = None) -> Graph:
    """Parse the line-oriented graph format into a Graph.

    ``source`` is a string or an iterable of lines.  ``property_labels``
    names the labels that should receive the lowest ids.  Errors carry the
    1-based line number of the offending line.
    """
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in source]
    prop_set = frozenset(property_labels) if property_labels else frozenset()

    node_ids: dict[str, int] = {}       # file id -> dense id
    node_label_names: list[str] = []
    edges: list[tuple[int, int, Optional[str]]] = []
    txns: dict[int, int] = {}
    label_seq: list[str] = []           # first-occurrence order, nodes and edges
    seen_labels: set[str] = set()

    def intern_name(name):
        if name not in seen_labels:
            seen_labels.add(name)
            label_seq.append(name)

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "v":
            if len(parts) != 3:
                raise GraphFormatError(f"malformed node line: {raw!r}", lineno)
            file_id, label = parts[1], parts[2]
            if file_id in node_ids:
                raise DuplicateNodeError(f"duplicate node id {file_id}", lineno)
            node_ids[file_id] = len(node_label_names)
            node_label_names.append(label)
            intern_name(label)
        elif kind == "e":
            if len(parts) not in (3, 4):
                raise GraphFormatError(f"malformed edge line: {raw!r}", lineno)
            for endpoint in parts[1:3]:
                if endpoint not in node_ids:
                    raise UnknownNodeError(
                        f"edge refers to undeclared node {endpoint}", lineno)
            elabel = parts[3] if len(parts) == 4 else None
            if elabel is not None:
                intern_name(elabel)
            edges.append((node_ids[parts[1]], node_ids[parts[2]], elabel))
        elif kind == "t":
            if len(parts) != 3:
                raise GraphFormatError(f"malformed transaction line: {raw!r}", lineno)
            if parts[1] not in node_ids:
                raise UnknownNodeError(
                    f"transaction refers to undeclared node {parts[1]}", lineno)
            try:
                txns[node_ids[parts[1]]] = int(parts[2])
            except ValueError:
                raise GraphFormatError(
                    f"transaction id must be an integer: {raw!r}", lineno) from None
        else:
            raise GraphFormatError(f"unrecognized line: {raw!r}", lineno)

    # Property labels first (their own first-occurrence order), then the rest.
    ordered = [s for s in label_seq if s in prop_set] + \
              [s for s in label_seq if s not in prop_set]
    ids = {s: i for i, s in enumerate(ordered)}

    node_labels = [ids[s] for s in node_label_names]
    out_edges: list[list[tuple[int, Optional[int]]]] = [[] for _ in node_labels]
    for src, dst, elabel in edges:
        out_edges[src].append((dst, ids[elabel] if elabel is not None else None))

    txn = None
    if txns:
        missing = [v for v in range(len(node_labels)) if v not in txns]
        if missing:
            raise GraphFormatError(
                f"transaction lines present but node {missing[0]} has no transaction")
        txn = [txns[v] for v in range(len(node_labels))]

    return Graph(ordered, node_labels, out_edges, txn,
                 property_label_ids=frozenset(ids[s] for s in ordered if s in prop_set))


def dump_graph(g: Graph) -> str:
    """Serialize to the text format; loading the result reproduces ``g``."""
    out = []
    for v, lbl in enumerate(g.node_labels):
        out.append(f"v {v} {g.labels[lbl]}")
    if g.txn is not None:
        for v, t in enumerate(g.txn):
            out.append(f"t {v} {t}")
    for v, edges in enumerate(g.out_edges):
        for w, el in edges:
            if el is None:
                out.append(f"e {v} {w}")
            else:
                out.append(f"e {v} {w} {g.labels[el]}")
    return "\n".join(out) + "\n"


def successors_with_label(g: Graph, v: int, label: int) -> Sequence[int]:
    """Module-level alias of Graph.successors_with_label."""
    return g.successors_with_label(v, label)
