"""n-rigid dimension tuples: certificates, verification, construction, search.

A certificate for target index ``i`` is a pair of expression lists
``P = (P_1..P_K)``, ``Q = (Q_1..Q_L)`` and index sets ``I_1..I_{K-1}`` such
that on every system E in general position with the given dimensions:

1. ``E_i`` lies in ``Pt_1``, the sum of all ``P_j`` with ``j != 1``;
2. ``C^n`` is the direct sum of the ``P_k``;
3. for each ``k < K``, ``Pt_k + sum(Q_l for l in I_k)`` and
   ``Pt_{k+1} + sum(Q_l for l in I_k)`` are all of ``C^n``, while
   ``Pt_k & Q_l`` and ``Pt_{k+1} & Q_l`` vanish for every ``l in I_k``.

Generic verification samples seeded random rational systems.  The conditions
are rank equalities, so a single generic instance is already strong evidence
and a failure at any instance in general position is conclusive for it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from rigidweb.errors import (
    BudgetExceeded,
    ConstructionError,
    DimensionMismatch,
    InputError,
    SamplingError,
    SemanticError,
    VariableOutOfRange,
)
from rigidweb.expr import Expr, Meet, Sum, Var, enumerate_multilinear, evaluate, parse, to_text
from rigidweb.genpos import (
    DEFAULT_GENPOS_BUDGET,
    pairs_in_general_position,
    system_in_general_position,
)
from rigidweb.linalg import Subspace, SubspaceSystem, random_system, subspace_sum, sum_dim
from rigidweb.rng import stream

__all__ = [
    "Certificate",
    "RigidityVerdict",
    "p_tilde",
    "verify_certificate",
    "verify_certificate_generic",
    "cert_lines",
    "cert_hyperplanes",
    "find_splitting",
    "splitting_size",
    "n_bound",
    "build_certificate",
    "search_certificate",
]

CONDITIONS = ("cond1", "cond2", "cond3-sum", "cond3-meet", "not-general-position")


@dataclass(frozen=True)
class Certificate:
    n: int
    dims: tuple
    target: int
    P: tuple
    Q: tuple
    I: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "P", tuple(self.P))
        object.__setattr__(self, "Q", tuple(self.Q))
        object.__setattr__(self, "I", tuple(tuple(sorted(set(x))) for x in self.I))
        s = len(self.dims)
        if len(self.P) < 2:
            raise SemanticError("a certificate needs at least two P expressions")
        if len(self.Q) < 1:
            raise SemanticError("a certificate needs at least one Q expression")
        if len(self.I) != len(self.P) - 1:
            raise SemanticError(f"need {len(self.P) - 1} index sets I_k, got {len(self.I)}")
        for ik in self.I:
            if not ik:
                raise SemanticError("index sets I_k must be nonempty")
            if not all(1 <= l <= len(self.Q) for l in ik):
                raise SemanticError(f"index set {list(ik)} refers outside Q_1..Q_{len(self.Q)}")
        if not 1 <= self.target <= s:
            raise VariableOutOfRange(f"target {self.target} outside 1..{s}")
        for e in self.P + self.Q:
            if max(e.variables) > s:
                raise VariableOutOfRange(f"expression {to_text(e)} uses a variable beyond X{s}")

    @property
    def s(self) -> int:
        return len(self.dims)

    @property
    def K(self) -> int:
        return len(self.P)

    @property
    def L(self) -> int:
        return len(self.Q)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dims": list(self.dims),
            "target": self.target,
            "P": [to_text(e) for e in self.P],
            "Q": [to_text(e) for e in self.Q],
            "I": [list(x) for x in self.I],
        }

    @classmethod
    def from_json(cls, data) -> "Certificate":
        if not isinstance(data, dict):
            raise InputError("certificate must be a JSON object")
        missing = [k for k in ("n", "dims", "target", "P", "Q", "I") if k not in data]
        if missing:
            raise InputError(f"certificate is missing {', '.join(missing)}")
        dims = data["dims"]
        if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
            raise InputError('"dims" must be a list of integers')
        s = len(dims)
        return cls(
            n=data["n"],
            dims=tuple(dims),
            target=data["target"],
            P=tuple(parse(t, s) for t in data["P"]),
            Q=tuple(parse(t, s) for t in data["Q"]),
            I=tuple(tuple(x) for x in data["I"]),
        )


@dataclass(frozen=True)
class RigidityVerdict:
    holds: bool
    failed_condition: str | None = None
    detail: dict = field(default_factory=dict)
    trials: int = 1
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failure_tags: tuple = ()

    def __post_init__(self):
        if self.holds == (self.failed_condition is not None):
            raise ValueError("failed_condition must be present exactly when the verdict fails")
        if self.failed_condition is not None and self.failed_condition not in CONDITIONS:
            raise ValueError(f"unknown condition tag {self.failed_condition!r}")

    def __bool__(self):
        return self.holds

    def summary(self) -> str:
        state = "HOLDS" if self.holds else f"FAILS ({self.failed_condition})"
        ran = self.trials - self.skipped
        return f"{state} ({self.passed}/{ran}, {self.skipped} skipped)"

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "failed_condition": self.failed_condition,
            "detail": self.detail,
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "failure_tags": dict(self.failure_tags),
        }


def p_tilde(P: Sequence[Expr], k: int, system: SubspaceSystem, cache: dict | None = None) -> Subspace:
    """Sum of the evaluations of all ``P_j`` with ``j != k`` (1-based ``k``)."""
    if len(P) < 2:
        raise SemanticError("need at least two P expressions")
    if not 1 <= k <= len(P):
        raise IndexError(f"k={k} outside 1..{len(P)}")
    if cache is None:
        cache = {}
    vals = [evaluate(e, system, cache) for j, e in enumerate(P, 1) if j != k]
    return subspace_sum(*vals)


def _genpos_ok(cert: Certificate, system: SubspaceSystem, genpos: str, budget):
    if genpos == "skip":
        return None
    if genpos == "auto":
        genpos = "full" if budget is None or len(system) <= budget else "restricted"
    if genpos == "full":
        v = system_in_general_position(system, budget=budget)
    elif genpos == "restricted":
        v = pairs_in_general_position(system, cert.P + cert.Q)
    else:
        raise ValueError(f"unknown genpos mode {genpos!r}")
    return v


def verify_certificate(
    cert: Certificate,
    system: SubspaceSystem,
    genpos: str = "auto",
    budget: int | None = DEFAULT_GENPOS_BUDGET,
) -> RigidityVerdict:
    """Check the three conditions on one system.

    ``genpos`` selects the general-position precheck: ``"full"`` (exhaustive,
    subject to ``budget``), ``"restricted"`` (only pairs built from the
    certificate's own expressions), ``"auto"`` (full when within budget) or
    ``"skip"``.
    """
    if system.n != cert.n or system.dims != cert.dims:
        raise DimensionMismatch(
            f"system has n={system.n}, dims={system.dims}; certificate expects "
            f"n={cert.n}, dims={cert.dims}"
        )
    n = cert.n
    gp = _genpos_ok(cert, system, genpos, budget)
    if gp is not None and not gp:
        return _fail("not-general-position", gp.witness.to_json())

    cache: dict = {}
    P = [evaluate(e, system, cache) for e in cert.P]
    Q = [evaluate(e, system, cache) for e in cert.Q]
    K = len(P)
    tildes = [subspace_sum(*[P[j] for j in range(K) if j != k]) for k in range(K)]

    target = system[cert.target - 1]
    if not tildes[0].contains(target):
        return _fail("cond1", {"dim_E_target": target.dim, "dim_Pt1": tildes[0].dim})

    running = Subspace.zero(n)
    for k, part in enumerate(P, 1):
        nxt = running + part
        if nxt.dim != running.dim + part.dim:
            return _fail("cond2", {"k": k, "dim_before": running.dim, "dim_part": part.dim, "dim_after": nxt.dim})
        running = nxt
    if running.dim != n:
        return _fail("cond2", {"total_dim": running.dim, "n": n})

    for k in range(1, K):
        ik = cert.I[k - 1]
        qsum = subspace_sum(*[Q[l - 1] for l in ik])
        for kk in (k, k + 1):
            d = sum_dim(tildes[kk - 1], qsum)
            if d != n:
                return _fail("cond3-sum", {"k": k, "tilde": kk, "dim_sum": d})
        for l in ik:
            for kk in (k, k + 1):
                d = tildes[kk - 1].dim + Q[l - 1].dim - sum_dim(tildes[kk - 1], Q[l - 1])
                if d:
                    return _fail("cond3-meet", {"k": k, "tilde": kk, "l": l, "dim_meet": d})
    return RigidityVerdict(True, passed=1)


def _fail(tag: str, detail: dict) -> RigidityVerdict:
    return RigidityVerdict(False, tag, detail, failed=1, failure_tags=((tag, 1),))


def verify_certificate_generic(
    cert: Certificate,
    trials: int = 100,
    seed: int = 0,
    genpos: str = "auto",
    budget: int | None = DEFAULT_GENPOS_BUDGET,
) -> RigidityVerdict:
    """Verify on ``trials`` seeded random systems; draws not in general position are skipped."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = stream(seed, "verify_generic", cert.n, cert.dims)
    passed = failed = skipped = 0
    tags: Counter = Counter()
    first = None
    for _ in range(trials):
        system = random_system(cert.n, cert.dims, rng.getrandbits(64))
        v = verify_certificate(cert, system, genpos=genpos, budget=budget)
        if v.holds:
            passed += 1
        elif v.failed_condition == "not-general-position":
            skipped += 1
        else:
            failed += 1
            tags[v.failed_condition] += 1
            if first is None:
                first = v
    if skipped == trials:
        raise SamplingError(f"all {trials} random draws failed general position")
    common = dict(trials=trials, passed=passed, failed=failed, skipped=skipped,
                  failure_tags=tuple(sorted(tags.items())))
    if first is None:
        return RigidityVerdict(True, **common)
    return RigidityVerdict(False, first.failed_condition, first.detail, **common)


# ---------------------------------------------------------------------------
# closed-form certificates


def _check_family(n: int, s: int, target: int):
    if n < 2:
        raise SemanticError("ambient dimension must be at least 2")
    if s <= n:
        raise SemanticError(f"no certificate exists for s={s} <= n={n}; at least n+1 members are needed")
    if not 1 <= target <= s:
        raise VariableOutOfRange(f"target {target} outside 1..{s}")


def cert_lines(n: int, s: int, target: int = 1) -> Certificate:
    """Certificate for the all-ones tuple with ``s > n`` lines.

    ``P_2..P_n`` are the target line and ``n - 2`` further lines, ``P_1`` one
    more line and ``Q_1`` another; the target sits among ``P_2..P_n`` so that
    it lies in ``Pt_1``.
    """
    _check_family(n, s, target)
    others = [j for j in range(1, s + 1) if j != target]
    block = [target] + others[: n - 2]
    rest = others[n - 2:]
    q_idx, p_idx = rest[0], rest[1]
    return Certificate(
        n=n,
        dims=(1,) * s,
        target=target,
        P=(Var(p_idx),) + tuple(Var(j) for j in block),
        Q=(Var(q_idx),),
        I=((1,),) * (n - 1),
    )


def cert_hyperplanes(n: int, s: int, target: int = 1) -> Certificate:
    """Certificate for the all-``(n-1)`` tuple with ``s > n`` hyperplanes.

    With ``J`` an n-subset starting at the target, ``P_k`` is the line cut out
    by all hyperplanes of ``J`` except the k-th, so ``P_2..P_n`` all lie in the
    target hyperplane and span it.  ``Q_l`` is the line where the plane
    ``P_l + P_{l+1}`` meets a further hyperplane, and ``I_k = {k}``.
    """
    _check_family(n, s, target)
    others = [j for j in range(1, s + 1) if j != target]
    J = [target] + others[: n - 1]
    fresh = others[n - 1]
    P = tuple(Meet.of(*[Var(j) for j in J if j != J[k]]) for k in range(n))
    Q = tuple(Meet.of(Sum.of(P[l], P[l + 1]), Var(fresh)) for l in range(n - 1))
    return Certificate(
        n=n,
        dims=(n - 1,) * s,
        target=target,
        P=P,
        Q=Q,
        I=tuple((k,) for k in range(1, n)),
    )


# ---------------------------------------------------------------------------
# splittings and the general bound


def splitting_size(n: int) -> int:
    """Members needed for a two-piece splitting: ``n(n-1)/2 + 1``."""
    return n * (n - 1) // 2 + 1


def n_bound(n: int) -> int:
    """``(n + 1)(n(n-1)/2 + 1)``: enough members for every tuple to be rigid."""
    if n < 2:
        raise SemanticError("n must be at least 2")
    return (n + 1) * splitting_size(n)


def find_splitting(
    system: SubspaceSystem,
    indices: Sequence[int] | None = None,
    first: int | None = None,
    check_genpos: bool = True,
    budget: int | None = DEFAULT_GENPOS_BUDGET,
) -> tuple[Expr, Expr]:
    """Two expressions on disjoint variables whose values split C^n nontrivially.

    Uses the members with 1-based ``indices`` (default: all).  A maximal
    direct sum Z of members is built greedily (``first`` tried before the
    rest, which go by decreasing dimension, ties by index).  If Z is all of
    C^n, the first chosen member is split off from the sum of the others.
    Otherwise every remaining member meets Z, the construction recurses on
    those intersections inside Z to get ``Z = W1 (+) W2``, and the answer is
    ``(W1 & W2, Z)`` with the recursive expressions reinterpreted on the
    original members.  The result is always checked before it is returned.
    """
    n = system.n
    if indices is None:
        indices = list(range(1, len(system) + 1))
    indices = list(indices)
    if len(indices) < splitting_size(n):
        raise SemanticError(
            f"{len(indices)} members given; a splitting needs at least {splitting_size(n)}"
        )
    for j in indices:
        if not 1 <= system[j - 1].dim <= n - 1:
            raise SemanticError(f"member X{j} has dimension {system[j - 1].dim}, outside 1..{n - 1}")
    if check_genpos:
        sub = SubspaceSystem(n, tuple(system[j - 1] for j in indices))
        if len(sub) <= (budget if budget is not None else len(sub)):
            v = system_in_general_position(sub, budget=budget)
            if not v:
                raise SemanticError("members are not in general position")

    members = {j: system[j - 1] for j in indices}
    w, z = _split(Subspace.full(n), members, first)
    cache: dict = {}
    wv = evaluate(w, system, cache)
    zv = evaluate(z, system, cache)
    if wv.is_zero() or zv.is_zero() or wv.dim + zv.dim != n or (wv + zv).dim != n:
        raise ConstructionError(
            f"splitting ({to_text(w)}, {to_text(z)}) does not give a nontrivial direct sum"
        )
    return w, z


def _split(ambient: Subspace, members: dict, first) -> tuple[Expr, Expr]:
    order = sorted(members, key=lambda j: (j != first, -members[j].dim, j))
    z = Subspace.zero(ambient.n)
    chosen = []
    for j in order:
        m = members[j]
        if m.is_zero() or m.contains(ambient):
            continue
        nxt = z + m
        if nxt.dim == z.dim + m.dim:
            z = nxt
            chosen.append(j)
    if z == ambient:
        if len(chosen) < 2:
            raise ConstructionError("greedy direct sum used a single member; members degenerate")
        return Var(chosen[0]), Sum.of(*[Var(j) for j in chosen[1:]])
    rest = {j: members[j] & z for j in members if j not in chosen}
    rest = {j: y for j, y in rest.items() if not y.is_zero()}
    if len(rest) < 2:
        raise ConstructionError(
            f"only {len(rest)} members left to split a {z.dim}-dimensional direct sum"
        )
    w1, w2 = _split(z, rest, None)
    return Meet.of(w1, w2), Sum.of(*[Var(j) for j in chosen])


def _side_dims(system, pair, cache):
    return tuple(evaluate(e, system, cache).dim for e in pair)


def build_certificate(
    n: int,
    dims: Sequence[int],
    target: int = 1,
    seed: int = 0,
    trials: int = 100,
    genpos: str = "auto",
    budget: int | None = DEFAULT_GENPOS_BUDGET,
) -> Certificate:
    """Assemble a two-piece certificate from ``n + 1`` independent splittings.

    Members are grouped into ``n + 1`` blocks of ``n(n-1)/2 + 1`` (the block
    holding the target comes first); each block is split on a seeded generic
    instance.  The target's block supplies ``P_1, P_2`` (``P_2`` the side
    containing the target), the smaller side of every other block becomes a
    ``Q_l``, and ``I_1`` collects the ``Q_l`` needed for condition 3.  The
    result is verified generically and returned only if it holds.
    """
    dims = tuple(dims)
    s = len(dims)
    bound = n_bound(n)
    if s < bound:
        raise SemanticError(f"{s} members given; the construction needs at least N({n}) = {bound}")
    if not all(1 <= d <= n - 1 for d in dims):
        raise SemanticError(f"member dimensions must lie in 1..{n - 1}")
    if not 1 <= target <= s:
        raise VariableOutOfRange(f"target {target} outside 1..{s}")
    size = splitting_size(n)
    order = [target] + [j for j in range(1, s + 1) if j != target]
    blocks = [order[b * size:(b + 1) * size] for b in range(n + 1)]

    rng = stream(seed, "build_certificate", n, dims, target)
    last = None
    for _ in range(5):
        system = random_system(n, dims, rng.getrandbits(64))
        try:
            cert = _assemble(system, dims, target, blocks)
        except ConstructionError as exc:
            last = exc
            continue
        verdict = verify_certificate_generic(cert, trials=trials, seed=rng.getrandbits(64),
                                             genpos=genpos, budget=budget)
        if verdict.holds:
            return cert
        last = ConstructionError("assembled certificate failed generic verification", verdict)
    raise last


def _assemble(system, dims, target, blocks) -> Certificate:
    n = system.n
    cache: dict = {}
    head = find_splitting(system, blocks[0], first=target, check_genpos=False)
    if target in head[0].var_set:
        p2, p1 = head
    else:
        p1, p2 = head
    P = [evaluate(p1, system, cache), evaluate(p2, system, cache)]
    m = min(P[0].dim, P[1].dim)
    Q_exprs = []
    for blk in blocks[1:]:
        w, u = find_splitting(system, blk, check_genpos=False)
        dw, du = _side_dims(system, (w, u), cache)
        Q_exprs.append(w if dw <= du else u)
    chosen = []
    qsum = Subspace.zero(n)
    for l, q in enumerate(Q_exprs, 1):
        qv = evaluate(q, system, cache)
        if qv.dim > m:
            continue
        if any(not (pk & qv).is_zero() for pk in P):
            continue
        chosen.append(l)
        qsum = qsum + qv
        if all((pk + qsum).is_full() for pk in P):
            break
    else:
        raise ConstructionError("the Q pieces cannot complete both P pieces to C^n")
    return Certificate(
        n=n, dims=dims, target=target, P=(p1, p2), Q=tuple(Q_exprs), I=(tuple(chosen),)
    )


# ---------------------------------------------------------------------------
# bounded search


def search_certificate(
    n: int,
    dims: Sequence[int],
    target: int = 1,
    depth: int = 3,
    seed: int = 0,
    trials: int = 20,
    max_nodes: int = 1_000_000,
) -> Certificate | None:
    """Exhaustive search over certificates built from multilinear expressions.

    Candidate expressions are all canonical multilinear expressions of depth
    at most ``depth`` on nonempty variable subsets.  The search runs on one
    seeded instance in general position, where conditions 1-3 are exact
    rank tests; a hit is then confirmed by generic verification.  Returning
    ``None`` means no certificate exists within these bounds: the instance is
    in general position, so any true certificate would have to pass there.
    """
    dims = tuple(dims)
    s = len(dims)
    if s > 5:
        raise BudgetExceeded(f"certificate search is limited to s <= 5 members, got {s}")
    if not 1 <= target <= s:
        raise VariableOutOfRange(f"target {target} outside 1..{s}")
    rng = stream(seed, "search_certificate", n, dims, target)
    for _ in range(20):
        system = random_system(n, dims, rng.getrandbits(64))
        if system_in_general_position(system, budget=None):
            break
    else:
        raise SamplingError("no random instance in general position")

    cache: dict = {}
    cands: dict[Subspace, Expr] = {}
    for k in range(1, s + 1):
        for subset in _subsets_of(range(1, s + 1), k):
            for e in enumerate_multilinear(subset):
                if e.depth > depth:
                    continue
                v = evaluate(e, system, cache)
                if not v.is_zero() and v not in cands:
                    cands[v] = e
    values = list(cands)
    full = Subspace.full(n)
    target_space = system[target - 1]
    nodes = 0

    def cond3(parts):
        K = len(parts)
        tildes = [subspace_sum(*[parts[j] for j in range(K) if j != k]) for k in range(K)]
        if not tildes[0].contains(target_space):
            return None
        Q_used: list[Subspace] = []
        I = []
        for k in range(K - 1):
            a, b = tildes[k], tildes[k + 1]
            good = [v for v in values if (a & v).is_zero() and (b & v).is_zero()]
            picked = []
            acc = Subspace.zero(n)
            for v in good:
                if (a + acc).is_full() and (b + acc).is_full():
                    break
                nxt = acc + v
                if nxt != acc:
                    picked.append(v)
                    acc = nxt
            if not ((a + acc).is_full() and (b + acc).is_full()):
                return None
            ik = []
            for v in picked:
                if v not in Q_used:
                    Q_used.append(v)
                ik.append(Q_used.index(v) + 1)
            I.append(tuple(ik))
        return Q_used, I

    def dfs(parts, acc):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"certificate search visited more than {max_nodes} nodes")
        if acc == full:
            if len(parts) < 2:
                return None
            found = cond3(parts)
            if found is None:
                return None
            Q_used, I = found
            cert = Certificate(n=n, dims=dims, target=target,
                               P=tuple(cands[p] for p in parts),
                               Q=tuple(cands[q] for q in Q_used), I=tuple(I))
            if verify_certificate_generic(cert, trials=trials, seed=rng.getrandbits(64)).holds:
                return cert
            return None
        for v in values:
            if v in parts:
                continue
            nxt = acc + v
            if nxt.dim != acc.dim + v.dim:
                continue
            res = dfs(parts + [v], nxt)
            if res is not None:
                return res
        return None

    return dfs([], Subspace.zero(n))


def _subsets_of(items, k):
    from itertools import combinations

    return combinations(list(items), k)
