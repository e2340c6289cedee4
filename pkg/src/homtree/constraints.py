"""Anti-monotone constraints: support, size, path-based, property-label.

Path-based constraints are conjunctions over all root-paths of a tree, so
the miner only checks them while the growing pattern still *is* a path;
every other path entering a tree later was validated when it was grown as
a path itself.  The additional-cover constraint (the default) requires
each new path node to reach at least one data node outside the union of
its ancestors' images, which caps accepted paths at the number of data
nodes and thereby keeps mining on cyclic graphs finite.

The property-label constraint declares a set of "property" labels and
accepts only trees whose every non-property node is described by at least
one property child.  A non-property node that falls off the rightmost
path without such a child can never gain one, which yields the
corresponding unavoidable-violation prune.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import AbstractSet, Optional, Sequence

from .errors import ConfigError
from .graph import Graph
from .homomorphism import SupportMode
from .pattern import Code, TreeView


class PathConstraint(enum.Enum):
    NONE = "none"
    COVER = "cover"
    UNIQUE_LABELS = "labels"


@dataclass(frozen=True)
class ConstraintConfig:
    """Everything the miner prunes on.

    ``max_depth`` counts nodes on a root-path; ``max_size`` counts pattern
    nodes.  ``property_labels`` holds label ids.
    """

    min_support: int = 1
    support_mode: SupportMode = SupportMode.NETWORK
    max_size: Optional[int] = None
    max_depth: Optional[int] = None
    path_constraint: PathConstraint = PathConstraint.COVER
    property_labels: Optional[frozenset[int]] = None
    edge_labels: bool = False

    def __post_init__(self):
        if self.min_support < 1:
            raise ConfigError(f"min_support must be >= 1, got {self.min_support}")


def validate_config(cfg: ConstraintConfig, g: Graph) -> None:
    """Reject configurations that cannot run safely on ``g``.

    On cyclic data, without a size or depth cap, only the cover or
    unique-labels path constraints guarantee that mining terminates.
    """
    if cfg.support_mode is SupportMode.TRANSACTIONAL and g.txn is None:
        raise ConfigError("transactional mode needs `t` lines in the graph file")
    if (g.is_cyclic and cfg.max_size is None and cfg.max_depth is None
            and cfg.path_constraint not in (PathConstraint.COVER,
                                            PathConstraint.UNIQUE_LABELS)):
        raise ConfigError(
            "the graph is cyclic: set --max-size/--max-depth or use the "
            "cover or labels path constraint, otherwise mining cannot terminate")


def check_path(code: Code, images: Sequence[AbstractSet[int]],
               cfg: ConstraintConfig) -> bool:
    """Evaluate the path constraints on a path pattern.

    ``images`` are the node images of the path, root first (the miner
    passes its rightmost-path frames, which for a path pattern are exactly
    the per-node images).
    """
    if not code.is_path:
        raise ValueError("check_path is only defined on path patterns")
    n = len(code)
    if cfg.max_depth is not None and n > cfg.max_depth:
        return False
    if cfg.path_constraint is PathConstraint.COVER:
        if n > 1:
            union: set[int] = set()
            for img in images[:-1]:
                union |= img
            if set(images[-1]) <= union:
                return False
        elif not images[0]:
            return False
    elif cfg.path_constraint is PathConstraint.UNIQUE_LABELS:
        labels = [t.label for t in code]
        if len(set(labels)) != n:
            return False
    return True


def _lacks_property_child(code: Code, view: TreeView, v: int,
                          pset: AbstractSet[int]) -> bool:
    if code[v].label in pset:
        return False  # property nodes describe others, they need no describer
    return not any(code[c].label in pset for c in view.children[v])


def violates_property_label_unavoidably(code: Code, pset: AbstractSet[int],
                                        view: Optional[TreeView] = None) -> bool:
    """True iff a non-property node off the rightmost path has no property
    child.  Off-path nodes never gain children, so every extension of such
    a tree fails the constraint too."""
    view = view or TreeView(code)
    on_path = set(view.rightmost_path)
    return any(_lacks_property_child(code, view, v, pset)
               for v in range(len(code)) if v not in on_path)


def satisfies_property_label(code: Code, pset: AbstractSet[int],
                             view: Optional[TreeView] = None) -> bool:
    """Final filter: every non-property node has at least one property child."""
    view = view or TreeView(code)
    return not any(_lacks_property_child(code, view, v, pset)
                   for v in range(len(code)))
