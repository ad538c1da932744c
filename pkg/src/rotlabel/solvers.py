"""Exact oracles and a greedy baseline on the conflict graph.

Two independent exact implementations (branch-and-bound and exhaustive
bitmask enumeration) back every derived value in the test suite, so a bug in
one cannot silently corrupt both.  Ties between maximum selections break
toward the lexicographically smallest index set so results are reproducible.
"""

from __future__ import annotations

from .geometry import DEFAULT_FP_TOLERANCE
from .instance import (
    AnchorModel,
    ConflictGraph,
    Instance,
    Labeling,
    ModelMismatchError,
    build_conflict_graph,
    normalize_for_solving,
)

EXACT_SOLVER_CAP = 30
BRUTEFORCE_CAP = 20


class SolverCapError(ValueError):
    """Instance larger than the configured exact-solver cap."""


def _lex_smaller_mask(a: int, b: int) -> bool:
    # As sorted index tuples, a < b iff the smallest differing vertex is in a.
    diff = a ^ b
    return bool(diff & -diff & a)


def exact_mis_bruteforce(graph: ConflictGraph, cap: int = BRUTEFORCE_CAP) -> frozenset[int]:
    """Maximum independent set by exhaustive bitmask enumeration.

    Independence of each mask is derived from the mask without its lowest
    vertex, so the whole table costs O(2^n).
    """
    n = graph.n
    if n > cap:
        raise SolverCapError(f"brute force capped at n={cap}, got {n}")
    if n == 0:
        return frozenset()
    adj = graph.neighbor_masks()
    indep = bytearray(1 << n)
    indep[0] = 1
    best_mask = 0
    best_count = 0
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        if indep[rest] and (adj[low.bit_length() - 1] & rest) == 0:
            indep[mask] = 1
            count = mask.bit_count()
            if count > best_count or (
                count == best_count and _lex_smaller_mask(mask, best_mask)
            ):
                best_count = count
                best_mask = mask
    return frozenset(i for i in range(n) if best_mask >> i & 1)


def _greedy_mask(adj: list[int], n: int) -> int:
    sel = 0
    for v in range(n):
        if adj[v] & sel == 0:
            sel |= 1 << v
    return sel


def _optimum_size(adj: list[int], n: int) -> int:
    best = _greedy_mask(adj, n).bit_count()
    full = (1 << n) - 1

    def search(cand: int, size: int) -> None:
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if cand == 0:
            best = size
            return
        low = cand & -cand
        v = low.bit_length() - 1
        search(cand & ~adj[v] & ~low, size + 1)
        search(cand ^ low, size)

    search(full, 0)
    return best


def _lex_witness(adj: list[int], n: int, target: int) -> int:
    """First depth-first completion of the target size, scanning vertices in
    ascending order with include-before-exclude; that order visits maximum
    sets lexicographically, so the first hit is the smallest."""

    def extend(cand: int, need: int) -> int | None:
        if need == 0:
            return 0
        if cand.bit_count() < need:
            return None
        low = cand & -cand
        v = low.bit_length() - 1
        sub = extend(cand & ~adj[v] & ~low, need - 1)
        if sub is not None:
            return sub | low
        return extend(cand ^ low, need)

    mask = extend((1 << n) - 1, target)
    if mask is None:
        raise AssertionError("optimum size not realisable; solver bug")
    return mask


def exact_mris(
    instance: Instance,
    cap: int = EXACT_SOLVER_CAP,
    fp_tolerance: float = DEFAULT_FP_TOLERANCE,
) -> Labeling:
    """Maximum proper labeling by branch-and-bound on the conflict graph.

    Accepts any model (two-position and sliding instances are normalized
    losslessly first).  Deterministic: among maximum selections it returns
    the lexicographically smallest index set.
    """
    if instance.n > cap:
        raise SolverCapError(f"exact solver capped at n={cap}, got {instance.n}")
    if instance.n == 0:
        return Labeling(frozenset())
    norm, choices = normalize_for_solving(instance)
    graph = build_conflict_graph(norm, fp_tolerance=fp_tolerance)
    adj = graph.neighbor_masks()
    opt = _optimum_size(adj, graph.n)
    mask = _lex_witness(adj, graph.n, opt)
    selected = frozenset(i for i in range(graph.n) if mask >> i & 1)
    anchor_choice = {i: choices[i] for i in selected} if choices is not None else {}
    return Labeling(selected, anchor_choice)


def greedy_baseline(
    instance: Instance, fp_tolerance: float = DEFAULT_FP_TOLERANCE
) -> Labeling:
    """Scan labels by ascending sweep radius (ties by index) and keep each
    label compatible with everything already kept.  Always proper."""
    if instance.model not in (AnchorModel.ONE_P, AnchorModel.FIXED_POSITION):
        raise ModelMismatchError("greedy baseline needs a normalized instance (1p or fp)")
    graph = build_conflict_graph(instance, fp_tolerance=fp_tolerance)
    adj = graph.neighbor_masks()
    order = sorted(range(instance.n), key=lambda i: (instance.labels[i].max_reach, i))
    sel = 0
    for v in order:
        if adj[v] & sel == 0:
            sel |= 1 << v
    return Labeling(frozenset(i for i in range(instance.n) if sel >> i & 1))
