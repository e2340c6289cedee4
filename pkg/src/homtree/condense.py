"""Closed and maximal pattern filtering by post-processing.

Specializing a tree pattern under homomorphism is not just adding nodes:
*merging* two equal-labeled siblings (one node inheriting both subtrees)
also makes a pattern strictly more demanding while leaving its root-path
set unchanged.  Closedness and maximality are therefore judged against
the neighborhood of one-node extensions plus all sibling merges.

Generalization marking works backwards: every pattern marks the patterns
obtained from it by removing one leaf (core-reduced) as non-closed /
non-maximal.  Merges, and for maximality also candidate extensions, are
evaluated directly against the graph when the mined set does not contain
them, which keeps the result independent of any search-time pruning.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .constraints import ConstraintConfig, PathConstraint, check_path
from .coreness import reduce_to_core
from .graph import Graph
from .homomorphism import count_support, images_from_scratch
from .pattern import (Code, TreeView, canonical_code, code_to_tree,
                      root_path_codes)


class PatternSet:
    """The outcome of a completed mining run: code -> support, plus the
    configuration it was mined under."""

    def __init__(self, cfg: ConstraintConfig,
                 items: Optional[Iterable[tuple[Code, int]]] = None):
        self.cfg = cfg
        self.supports: dict[Code, int] = dict(items or ())

    def __len__(self):
        return len(self.supports)

    def __contains__(self, code: Code) -> bool:
        return code in self.supports

    def __iter__(self):
        return iter(sorted(self.supports, key=lambda c: c.key))

    def get(self, code: Code) -> Optional[int]:
        return self.supports.get(code)

    def items(self) -> list[tuple[Code, int]]:
        return sorted(self.supports.items(), key=lambda kv: kv[0].key)

    def subset(self, codes) -> "PatternSet":
        return PatternSet(self.cfg,
                          ((c, s) for c, s in self.supports.items() if c in codes))


def merge_siblings(code: Code, v1: int, v2: int) -> Code:
    """Replace two equal-labeled siblings by one node carrying both
    subtrees, reduce to the core, and return the canonical code."""
    view = TreeView(code)
    if view.parent[v1] != view.parent[v2] or view.parent[v1] is None:
        raise ValueError(f"nodes {v1} and {v2} are not siblings")
    t1, t2 = code[v1], code[v2]
    if t1.label != t2.label or t1.edge_label != t2.edge_label:
        raise ValueError("only equal-labeled siblings can be merged")
    nodes = code_to_tree(code)
    parent = nodes[view.parent[v1]]
    merged = nodes[v1]
    merged.children = merged.children + nodes[v2].children
    parent.children.remove(nodes[v2])
    return reduce_to_core(nodes[0])


def sibling_merge_pairs(code: Code, view: Optional[TreeView] = None):
    """All sibling index pairs eligible for merging."""
    view = view or TreeView(code)
    for kids in view.children:
        for a in range(len(kids)):
            for b in range(a + 1, len(kids)):
                i, j = kids[a], kids[b]
                if code[i].label == code[j].label and \
                        code[i].edge_label == code[j].edge_label:
                    yield i, j


def leaf_removal_generalizations(code: Code) -> set[Code]:
    """Distinct core-reduced patterns obtained by deleting one non-root leaf."""
    view = TreeView(code)
    out = set()
    for v in range(1, len(code)):
        if view.children[v]:
            continue
        start, end = view.block(v)
        shrunk = Code(code.tokens[:start] + code.tokens[end:])
        out.add(reduce_to_core(shrunk))
    return out


def _evaluate_support(code: Code, g: Graph, cfg: ConstraintConfig) -> int:
    return count_support(images_from_scratch(code, g, cfg.edge_labels)[0],
                         g, cfg.support_mode)


def _satisfies_constraints(code: Code, g: Graph, cfg: ConstraintConfig,
                           supp: Optional[int] = None) -> bool:
    """Full constraint check for a specialization candidate outside the
    mined set (support, size, and all root-paths)."""
    if supp is None:
        supp = _evaluate_support(code, g, cfg)
    if supp < cfg.min_support:
        return False
    if cfg.max_size is not None and len(code) > cfg.max_size:
        return False
    if cfg.max_depth is not None or cfg.path_constraint is not PathConstraint.NONE:
        for path in set(root_path_codes(code)):
            if not check_path(path, images_from_scratch(path, g, cfg.edge_labels), cfg):
                return False
    return True


def one_node_extensions(code: Code, g: Graph,
                        edge_mode: bool = False) -> set[Code]:
    """Canonical codes of every tree obtained by adding one child (any
    occurring label) under any node, excluding trees equivalent to the input."""
    if edge_mode:
        pairs = g.edge_token_pairs()
    else:
        pairs = [(None, lbl) for lbl in range(g.num_labels)]
    out = set()
    for v in range(len(code)):
        for el, lbl in pairs:
            nodes = code_to_tree(code)
            from .pattern import TreeNode
            nodes[v].children.append(TreeNode(lbl, edge_label=el))
            ext = canonical_code(nodes[0])
            if reduce_to_core(ext) != code:
                out.add(ext)
    return out


def filter_closed(ps: PatternSet, g: Graph) -> PatternSet:
    """Patterns with no equal-support specialization.

    A pattern is discarded when a mined extension of it has the same
    support (detected by leaf-removal marking from the extension side) or
    when one of its sibling merges does (merge support evaluated directly
    when the merge was not itself mined).
    """
    cfg = ps.cfg
    closed = set(ps.supports)
    for code, supp in ps.items():
        for gen in leaf_removal_generalizations(code):
            if ps.get(gen) == supp:
                closed.discard(gen)
        for v1, v2 in sibling_merge_pairs(code):
            merged = merge_siblings(code, v1, v2)
            if merged == code:
                continue
            msupp = ps.get(merged)
            if msupp is None:
                msupp = _evaluate_support(merged, g, cfg)
            if msupp == supp:
                closed.discard(code)
                break
    return ps.subset(closed)


def filter_maximal(ps: PatternSet, g: Graph,
                   evaluate_missing: bool = True) -> PatternSet:
    """Patterns with no specialization satisfying the mining constraints.

    Mined extensions disqualify their generalizations via leaf-removal
    marking; sibling merges are always evaluated.  With
    ``evaluate_missing`` (the default) surviving patterns additionally
    have their one-node extensions evaluated directly against the graph,
    so patterns kept out of the mined set by search-time pruning cannot
    fake maximality.
    """
    cfg = ps.cfg
    maximal = set(ps.supports)
    for code, _supp in ps.items():
        for gen in leaf_removal_generalizations(code):
            if gen in ps:
                maximal.discard(gen)
        if code not in maximal:
            continue
        for v1, v2 in sibling_merge_pairs(code):
            merged = merge_siblings(code, v1, v2)
            if merged == code:
                continue
            if merged in ps or _satisfies_constraints(merged, g, cfg):
                maximal.discard(code)
                break
    if evaluate_missing:
        for code in list(maximal):
            for ext in one_node_extensions(code, g, cfg.edge_labels):
                if ext in ps or _satisfies_constraints(ext, g, cfg):
                    maximal.discard(code)
                    break
    return ps.subset(maximal)
