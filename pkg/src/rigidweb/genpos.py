"""General position of subspace pairs and of whole systems.

A system is in general position when every independent pair of admissible
expressions evaluates to a pair in general position.  Independence forbids
repeated variables, so only multilinear expressions on disjoint variable sets
matter.  Two exact procedures decide this:

``lattice`` (default)
    For each variable subset S, the set of distinct subspaces produced by
    multilinear expressions on exactly S is built from the sets for the two
    blocks of every split of S (sum and intersection of one value from each
    side).  Every independent pair is one of those splits, so the pair check
    happens while building.  Work scales with distinct subspaces rather than
    with the super-exponential expression count.

``enumerate``
    Walks every canonical multilinear expression pair explicitly.  Slow but
    independent of the lattice bookkeeping; kept as an oracle.

Witnesses are deterministic: subsets are visited by size then lexicographic
order, splits by the mask of the block holding the smallest index, and values
in first-discovery order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from rigidweb.errors import BudgetExceeded
from rigidweb.expr import (
    Expr,
    Meet,
    Sum,
    Var,
    enumerate_multilinear,
    evaluate,
    is_independent_pair,
    to_text,
)
from rigidweb.linalg import Subspace, SubspaceSystem, intersect, random_system, subspace_sum, sum_dim
from rigidweb.rng import stream

__all__ = [
    "GenPosVerdict",
    "Witness",
    "DEFAULT_GENPOS_BUDGET",
    "pair_in_general_position",
    "system_in_general_position",
    "pure_pairs_in_general_position",
    "pairs_in_general_position",
    "system_in_general_position_at_dims_generic",
]

DEFAULT_GENPOS_BUDGET = 8


@dataclass(frozen=True)
class Witness:
    p: Expr
    q: Expr
    dim_p: int
    dim_q: int
    dim_sum: int
    expected: int

    @property
    def dim_meet(self) -> int:
        return self.dim_p + self.dim_q - self.dim_sum

    def to_json(self) -> dict:
        return {
            "P": to_text(self.p),
            "Q": to_text(self.q),
            "dim_sum": self.dim_sum,
            "expected": self.expected,
        }


@dataclass(frozen=True)
class GenPosVerdict:
    in_general_position: bool
    witness: Witness | None = None

    def __post_init__(self):
        if self.in_general_position == (self.witness is not None):
            raise ValueError("a witness must be present exactly when the verdict is negative")

    def __bool__(self):
        return self.in_general_position

    def to_json(self) -> dict:
        return {
            "general_position": self.in_general_position,
            "witness": self.witness.to_json() if self.witness else None,
        }


def pair_in_general_position(a: Subspace, b: Subspace) -> bool:
    return sum_dim(a, b) == min(a.n, a.dim + b.dim)


def _check(p: Expr, a: Subspace, q: Expr, b: Subspace) -> Witness | None:
    s = sum_dim(a, b)
    expected = min(a.n, a.dim + b.dim)
    if s == expected:
        return None
    return Witness(p, q, a.dim, b.dim, s, expected)


def _subsets(s: int):
    """Nonempty subsets of range(s) as bitmasks: by size, then lexicographic."""
    for k in range(1, s + 1):
        for combo in combinations(range(s), k):
            mask = 0
            for i in combo:
                mask |= 1 << i
            yield mask


def _splits(mask: int):
    """Unordered splits (a, b) of ``mask``; ``a`` holds the lowest set bit."""
    low = mask & -mask
    rest = mask ^ low
    # enumerate submasks of rest in increasing order
    sub = 0
    out = []
    while True:
        a = low | sub
        b = mask ^ a
        if b:
            out.append((a, b))
        if sub == rest:
            break
        sub = (sub - rest) & rest
    return out


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _budget_check(s: int, budget: int | None):
    if budget is not None and s > budget:
        raise BudgetExceeded(
            f"general-position check on {s} members exceeds the budget of {budget}; "
            "raise the budget explicitly"
        )


def system_in_general_position(
    system: SubspaceSystem,
    budget: int | None = DEFAULT_GENPOS_BUDGET,
    method: str = "lattice",
) -> GenPosVerdict:
    s = len(system)
    _budget_check(s, budget)
    if method == "lattice":
        return _lattice(system)
    if method == "enumerate":
        return _enumerate(system)
    raise ValueError(f"unknown method {method!r}")


def _lattice(system: SubspaceSystem) -> GenPosVerdict:
    s = len(system)
    n = system.n
    full_mask = (1 << s) - 1
    # values[mask]: {subspace: first expression found}, insertion ordered
    values: dict[int, dict[Subspace, Expr]] = {}
    for mask in _subsets(s):
        if mask & (mask - 1) == 0:
            i = mask.bit_length() - 1
            values[mask] = {system[i]: Var(i + 1)}
            continue
        need_values = mask != full_mask
        found: dict[Subspace, Expr] = {}
        for a, b in _splits(mask):
            for u, eu in values[a].items():
                for w, ew in values[b].items():
                    ds = sum_dim(u, w)
                    expected = min(n, u.dim + w.dim)
                    if ds != expected:
                        return GenPosVerdict(False, Witness(eu, ew, u.dim, w.dim, ds, expected))
                    if not need_values:
                        continue
                    sm = _sum_with_dim(u, w, ds)
                    if sm not in found:
                        found[sm] = Sum.of(eu, ew)
                    mt = _meet_with_dim(u, w, u.dim + w.dim - ds)
                    if mt not in found:
                        found[mt] = Meet.of(eu, ew)
        if need_values:
            values[mask] = found
    return GenPosVerdict(True)


def _sum_with_dim(u: Subspace, w: Subspace, d: int) -> Subspace:
    if d == u.dim:
        return u
    if d == w.dim:
        return w
    if d == u.n:
        return Subspace.full(u.n)
    return subspace_sum(u, w)


def _meet_with_dim(u: Subspace, w: Subspace, d: int) -> Subspace:
    if d == 0:
        return Subspace.zero(u.n)
    if d == u.dim:
        return u
    if d == w.dim:
        return w
    return intersect(u, w)


def _enumerate(system: SubspaceSystem) -> GenPosVerdict:
    s = len(system)
    cache: dict = {}
    exprs: dict[int, list] = {}
    for mask in _subsets(s):
        exprs[mask] = enumerate_multilinear([i + 1 for i in _bits(mask)], budget=s)
    for mask in _subsets(s):
        for a, b in _splits(mask):
            for p in exprs[a]:
                u = evaluate(p, system, cache)
                for q in exprs[b]:
                    w = evaluate(q, system, cache)
                    wit = _check(p, u, q, w)
                    if wit:
                        return GenPosVerdict(False, wit)
    return GenPosVerdict(True)


def pairs_in_general_position(system: SubspaceSystem, exprs: Iterable[Expr]) -> GenPosVerdict:
    """Check only independent pairs drawn from ``exprs``, their subexpressions, and the atoms.

    A bounded stand-in for the full check when the system is too large to
    enumerate; the pairs are checked in sorted order.
    """
    pool = {Var(i + 1) for i in range(len(system))}
    for e in exprs:
        pool.update(e.subexpressions())
    ordered = sorted(pool)
    cache: dict = {}
    for i, p in enumerate(ordered):
        u = evaluate(p, system, cache)
        for q in ordered[i + 1:]:
            if not is_independent_pair(p, q):
                continue
            wit = _check(p, u, q, evaluate(q, system, cache))
            if wit:
                return GenPosVerdict(False, wit)
    return GenPosVerdict(True)


def pure_pairs_in_general_position(system: SubspaceSystem) -> GenPosVerdict:
    """Check only pairs whose sides are pure sums or pure intersections of atoms."""
    s = len(system)
    pure: dict[int, list[Expr]] = {}
    for mask in _subsets(s):
        atoms = [Var(i + 1) for i in _bits(mask)]
        pure[mask] = atoms if len(atoms) == 1 else [Sum.of(*atoms), Meet.of(*atoms)]
    cache: dict = {}
    for mask in _subsets(s):
        for a, b in _splits(mask):
            for p in pure[a]:
                u = evaluate(p, system, cache)
                for q in pure[b]:
                    wit = _check(p, u, q, evaluate(q, system, cache))
                    if wit:
                        return GenPosVerdict(False, wit)
    return GenPosVerdict(True)


def system_in_general_position_at_dims_generic(
    n: int,
    dims: Sequence[int],
    trials: int = 10,
    seed: int = 0,
    budget: int | None = DEFAULT_GENPOS_BUDGET,
) -> bool:
    """True iff some seeded random system with these dimensions is in general position."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    _budget_check(len(dims), budget)
    rng = stream(seed, "genpos_generic")
    for _ in range(trials):
        system = random_system(n, dims, rng.getrandbits(64))
        if system_in_general_position(system, budget=budget):
            return True
    return False
