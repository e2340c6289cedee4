"""Depth-first enumeration of frequent core tree patterns.

The engine grows codes token by token along the rightmost path, keeping
support incremental (ImageStack), coreness incremental (via the trie),
and reducibility incremental (split-node rule).  Extension candidates for
a non-path pattern are read off the trie under the code obtained by
removing the split node's leftmost subtree; a pattern that is still a
path additionally tries every label one level below its deepest node.
Because the trie only ever contains codes enumerated earlier, generated
candidates are canonical by construction and no explicit canonicality
check is needed (debug mode asserts it anyway).

Patterns are emitted as they are found; depth-first order coincides with
increasing code order, so the stream is sorted.  ``mine_naive`` is the
independent reference: it enumerates every structurally valid code,
filters by explicit canonicality and from-scratch constraint checks, and
keeps brute-force cores.  The two must agree exactly.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .constraints import (ConstraintConfig, check_path,
                          satisfies_property_label, validate_config,
                          violates_property_label_unavoidably)
from .coreness import (is_core_bruteforce, is_core_incremental,
                       unavoidably_reducible,
                       unavoidably_reducible_incremental)
from .errors import ConfigError
from .graph import Graph
from .homomorphism import ImageStack, count_support, images_from_scratch
from .pattern import (Code, Token, TreeView, is_canonical,
                      remove_leftmost_subtree, root_path_codes)
from .trie import Trie


@dataclass(frozen=True)
class DelayRow:
    """Candidates considered between consecutive outputs, with the running
    theoretical bound (stored patterns + alphabet size, times max pattern size)."""

    index: int
    candidates: int
    bound: int


@dataclass
class MineCounters:
    """Instrumentation for one mining run."""

    num_labels: int = 0
    candidates_total: int = 0
    candidates_since_output: int = 0
    outputs: int = 0
    max_pattern_size: int = 0
    rows: list[DelayRow] = field(default_factory=list)

    def bound(self, trie_size: int) -> int:
        return (trie_size + self.num_labels) * max(1, self.max_pattern_size)


def delay_report(counters: MineCounters) -> list[DelayRow]:
    """One row per output pattern."""
    return list(counters.rows)


class _SearchFrame:
    __slots__ = ("code", "is_core", "split_depth", "tokens", "idx")

    def __init__(self, code, is_core, split_depth, tokens):
        self.code = code
        self.is_core = is_core
        self.split_depth = split_depth
        self.tokens = tokens
        self.idx = 0


def _fresh_pairs(g: Graph, cfg: ConstraintConfig):
    if cfg.edge_labels:
        return g.edge_token_pairs()
    return [(None, lbl) for lbl in range(g.num_labels)]


def mine(g: Graph, cfg: ConstraintConfig, *, debug: bool = False,
         trie_prune: bool = True, prune_non_maximal: bool = False,
         seed_labels: Optional[Iterable[int]] = None,
         counters: Optional[MineCounters] = None,
         trie: Optional[Trie] = None) -> Iterator[tuple[Code, int]]:
    """Stream every frequent canonical core pattern with its support,
    in increasing code order, each exactly once.

    ``debug`` cross-checks each step against the from-scratch oracles
    (exact but slow).  ``trie_prune`` controls the lazy storage rule;
    ``prune_non_maximal`` enables the search-time pruning that is only
    sound when the caller wants maximal patterns.
    """
    validate_config(cfg, g)
    counters = counters if counters is not None else MineCounters()
    counters.num_labels = g.num_labels
    trie = trie if trie is not None else Trie()
    img = ImageStack(g, cfg.support_mode, cfg.edge_labels)
    pset = cfg.property_labels
    fresh = _fresh_pairs(g, cfg)
    seeds = sorted(seed_labels) if seed_labels is not None else range(g.num_labels)
    seed_iter = iter(seeds)
    stack: list[_SearchFrame] = []

    while True:
        if stack:
            frame = stack[-1]
            if frame.idx >= len(frame.tokens):
                if trie_prune:
                    trie.prune_on_backtrack(frame.code)
                img.backtrack()
                stack.pop()
                continue
            token = frame.tokens[frame.idx]
            frame.idx += 1
            parent = frame
        else:
            seed = next(seed_iter, None)
            if seed is None:
                return
            token = Token(0, seed)
            parent = None

        counters.candidates_total += 1
        counters.candidates_since_output += 1
        code = parent.code.child(token) if parent is not None else Code([token])
        counters.max_pattern_size = max(counters.max_pattern_size, len(code))

        supp = img.extend(token)
        if debug:
            scratch = images_from_scratch(code, g, cfg.edge_labels)
            assert img.root_image == scratch[0], \
                f"incremental root image diverged on {code!r}"

        ok = supp >= cfg.min_support
        if ok and cfg.max_size is not None:
            ok = len(code) <= cfg.max_size
        path = code.is_path
        if ok and path:
            ok = check_path(code, img.images(), cfg)
        if ok and parent is not None:
            ok = not unavoidably_reducible_incremental(
                parent.is_core, parent.split_depth, token)
        view = None
        if ok and pset is not None:
            view = TreeView(code)
            ok = not violates_property_label_unavoidably(code, pset, view)
        if ok and prune_non_maximal:
            ok = not _maximality_prune(img)
        if not ok:
            img.backtrack()
            continue

        view = view if view is not None else TreeView(code)
        core = True if path else is_core_incremental(code, trie, view)
        if debug:
            assert is_canonical(code, view), f"non-canonical candidate {code!r}"
            assert not unavoidably_reducible(code, view), \
                f"unavoidably reducible candidate slipped through: {code!r}"
            assert core == is_core_bruteforce(code).is_core, \
                f"incremental core verdict diverged on {code!r}"

        trie.insert(code, supp, core)
        if core and (pset is None or satisfies_property_label(code, pset, view)):
            counters.outputs += 1
            counters.rows.append(DelayRow(counters.outputs,
                                          counters.candidates_since_output,
                                          counters.bound(len(trie))))
            counters.candidates_since_output = 0
            yield code, supp

        split = view.split_node
        if split is None:
            tokens = _path_candidates(code, trie, fresh)
            split_depth = None
        else:
            reduced = remove_leftmost_subtree(code, split, view)
            limit = code.last_depth + 1
            tokens = [t for t in reversed(trie.children_of(reduced))
                      if t.depth <= limit]
            split_depth = code[split].depth
        stack.append(_SearchFrame(code, core, split_depth, tokens))


def _path_candidates(code: Code, trie: Trie, fresh) -> list[Token]:
    """Extensions of a path: every trie child of every strict prefix
    (each prefix acts as the split node once), plus a fresh node one level
    below the deepest node, merged and deduplicated in increasing order."""
    cand: set[Token] = set()
    for length in range(1, len(code)):
        cand.update(trie.children_of(code.prefix(length)))
    d = code.last_depth + 1
    for el, lbl in fresh:
        cand.add(Token(d, lbl, el))
    limit = code.last_depth + 1
    return sorted((t for t in cand if t.depth <= limit), key=lambda t: t.key)


def _maximality_prune(img: ImageStack) -> bool:
    """Search-time pruning for maximal mining.

    A rightmost-path node whose image is contained in the image its
    equal-labeled left sibling had when that sibling left the rightmost
    path can have all future growth re-attached under the sibling,
    yielding a more specific pattern with no less support.  The converse
    containment prunes too, but only for nodes whose subtree just froze
    (they left the rightmost path on this extension).
    """
    for f in img.frames[1:]:
        if f.left_sib_image is not None and f.image <= f.left_sib_image:
            return True
    for f in img.last_dropped():
        if f.left_sib_image is not None and f.image >= f.left_sib_image:
            return True
    return False


def mine_to_list(g: Graph, cfg: ConstraintConfig, **kwargs) -> list[tuple[Code, int]]:
    return list(mine(g, cfg, **kwargs))


def mine_naive(g: Graph, cfg: ConstraintConfig) -> list[tuple[Code, int]]:
    """Reference miner: enumerate every structurally valid code with every
    label at every allowed depth, prune by explicit canonicality and
    from-scratch constraint evaluation, output brute-force cores.

    Needs ``max_size``: without the reducibility pruning of the real
    engine, bounded size is what makes exhaustive enumeration finite.
    """
    validate_config(cfg, g)
    if cfg.max_size is None:
        raise ConfigError("the reference miner requires max_size")
    pset = cfg.property_labels
    fresh = _fresh_pairs(g, cfg)
    results: list[tuple[Code, int]] = []

    def passes(code: Code) -> tuple[bool, int]:
        imgs = images_from_scratch(code, g, cfg.edge_labels)
        supp = count_support(imgs[0], g, cfg.support_mode)
        if supp < cfg.min_support or len(code) > cfg.max_size:
            return False, supp
        # Ancestor calls already validated the other root-paths.
        new_path = root_path_codes(code)[len(code) - 1]
        if not check_path(new_path, images_from_scratch(
                new_path, g, cfg.edge_labels), cfg):
            return False, supp
        return True, supp

    def grow(code: Code) -> None:
        if not is_canonical(code):
            return
        ok, supp = passes(code)
        if not ok:
            return
        if is_core_bruteforce(code).is_core and \
                (pset is None or satisfies_property_label(code, pset)):
            results.append((code, supp))
        if len(code) == cfg.max_size:
            return
        for depth in range(1, code.last_depth + 2):
            for el, lbl in fresh:
                grow(code.child(Token(depth, lbl, el)))

    for seed in range(g.num_labels):
        grow(Code([Token(0, seed)]))
    return results


def _mine_shard(g: Graph, cfg: ConstraintConfig, seed: int) -> list[tuple[Code, int]]:
    return mine_to_list(g, cfg, seed_labels=[seed])


def mine_sharded(g: Graph, cfg: ConstraintConfig, jobs: int = 1,
                 **kwargs) -> list[tuple[Code, int]]:
    """Root-label sharding: each shard owns its trie and image stack, the
    graph is shared read-only, and the merged output is re-sorted so the
    result is identical to a sequential run."""
    if jobs <= 1:
        return mine_to_list(g, cfg, **kwargs)
    results: list[tuple[Code, int]] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_mine_shard, g, cfg, seed)
                   for seed in range(g.num_labels)]
        for fut in futures:
            results.extend(fut.result())
    results.sort(key=lambda item: item[0].key)
    return results
