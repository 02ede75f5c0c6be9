"""Recover a block-diagonal, Q-preserving linear map from a single block.

Given a certificate and two systems E, E' on which it holds, let ``g`` be any
map of C^n with ``g(P_k(E)) <= P_k(E')`` for every k and
``g(Q_l(E)) <= Q_l(E')`` for every l.  Then each block ``g_k`` determines the
neighbouring blocks, and hence all of ``g``:

for ``l in I_k`` the projection ``pi_kl`` of ``Q_l`` onto ``P_k`` (along the
other parts) is injective, and ``phi_kl = pi_{k+1,l} o pi_kl^{-1}`` carries
``pi_kl(Q_l)`` into ``P_{k+1}``.  Since ``g`` commutes with the projections,
``g_{k+1} = phi_kl(E') o g_k o phi_kl(E)^{-1}`` on ``pi_{k+1,l}(Q_l(E))``, and
these images span ``P_{k+1}(E)``.  ``psi_kl(E')`` (projection onto
``pi_kl(Q_l(E'))`` along a fixed complement) makes the formula defined for
arbitrary blocks; on blocks coming from a valid ``g`` it acts as the identity.

The same works backwards from ``k+1`` to ``k`` with the roles swapped.
"""

from __future__ import annotations

from dataclasses import dataclass

from rigidweb.errors import DegeneracyError, DimensionMismatch, SemanticError
from rigidweb.expr import evaluate
from rigidweb.linalg import (
    LinearMap,
    Matrix,
    Subspace,
    SubspaceSystem,
    direct_sum_projection,
    solve_rows,
)
from rigidweb.rigidity import Certificate, verify_certificate
from rigidweb.rng import stream
from rigidweb.scalar import GR, ZERO

__all__ = [
    "BlockMap",
    "ReconstructionPlan",
    "ConstrainedSample",
    "build_plan",
    "step",
    "phi",
    "block",
    "sample_constrained_map",
]


@dataclass(frozen=True)
class BlockMap:
    k: int
    map: LinearMap


@dataclass(frozen=True)
class _Side:
    """Everything computed from one system: parts, projections, Q values."""

    parts: tuple
    proj: tuple  # LinearMap C^n -> P_k
    Q: tuple


@dataclass(frozen=True)
class _Transfer:
    """Data for moving a block from index ``a`` to index ``b = a +- 1`` (0-based)."""

    a: int
    b: int
    marked: Matrix  # rows e_j: a basis of P_b(E)
    marked_l: tuple  # h(j), 1-based
    sources: Matrix  # rows phi^{-1}(e_j) in P_a(E)
    to_canonical: Matrix  # x with x @ marked == P_b(E).basis
    psi: dict  # l -> (complement coordinates projection, phi over E')


@dataclass(frozen=True)
class ReconstructionPlan:
    cert: Certificate
    E: SubspaceSystem
    E2: SubspaceSystem
    side: _Side
    side2: _Side
    transfers: dict

    @property
    def K(self) -> int:
        return self.cert.K

    @property
    def parts(self):
        return self.side.parts

    @property
    def parts2(self):
        return self.side2.parts

    def projection(self, k: int, l: int, primed: bool = False) -> LinearMap:
        """``pi_kl``: the projection of ``Q_l`` onto ``P_k`` (1-based indices)."""
        sd = self.side2 if primed else self.side
        return sd.proj[k - 1].restrict(sd.Q[l - 1])

    def marked_basis(self, k: int) -> tuple[Matrix, tuple]:
        """Marked basis of ``P_{k+1}(E)`` and its assignment ``h`` (forward step from k)."""
        t = self.transfers[(k - 1, k)]
        return t.marked, t.marked_l


def _side(cert: Certificate, system: SubspaceSystem) -> _Side:
    cache: dict = {}
    parts = tuple(evaluate(e, system, cache) for e in cert.P)
    proj = tuple(direct_sum_projection(parts, k) for k in range(len(parts)))
    Q = tuple(evaluate(e, system, cache) for e in cert.Q)
    return _Side(parts, proj, Q)


def _images(f: LinearMap, rows) -> list:
    return [f.apply(r) for r in rows]


def _build_transfer(side: _Side, side2: _Side, a: int, b: int, ik) -> _Transfer:
    n = side.parts[0].n
    k_lo = min(a, b) + 1
    target = side.parts[b]
    marked, marked_l, sources = [], [], []
    span = Subspace.zero(n)
    for l in ik:
        q = side.Q[l - 1]
        img_a = _images(side.proj[a], q.basis.rows)
        img_b = _images(side.proj[b], q.basis.rows)
        for name, imgs in (("source", img_a), ("target", img_b)):
            if Subspace(n, imgs).dim != q.dim:
                raise DegeneracyError(
                    f"projection of Q_{l} onto the {name} part is not injective (k={k_lo}, l={l})",
                    k=k_lo, l=l,
                )
        # canonical basis of pi_b(Q_l), with matching preimages projected to P_a
        image = Subspace(n, img_b)
        coeff = solve_rows(Matrix(img_b, n), image.basis)
        pre_a = coeff @ Matrix(img_a, n)
        for e, u in zip(image.basis.rows, pre_a.rows):
            nxt = span + Subspace(n, [e])
            if nxt.dim > span.dim:
                span = nxt
                marked.append(e)
                marked_l.append(l)
                sources.append(u)
        if span.dim == target.dim:
            break
    if span != target:
        raise DegeneracyError(
            f"the Q_l with l in I_{k_lo} do not project onto the whole of part {b + 1}",
            k=k_lo,
        )
    marked_m = Matrix(marked, n)
    psi = {l: _psi_data(side2, a, b, l, k_lo) for l in sorted(set(marked_l))}
    return _Transfer(
        a=a,
        b=b,
        marked=marked_m,
        marked_l=tuple(marked_l),
        sources=Matrix(sources, n),
        to_canonical=solve_rows(marked_m, target.basis),
        psi=psi,
    )


def _psi_data(side2: _Side, a: int, b: int, l: int, k_lo: int):
    """Projection of ``P_a(E')`` onto ``pi_a(Q_l(E'))`` and the transfer ``phi`` over E'."""
    n = side2.parts[0].n
    q = side2.Q[l - 1]
    pa = side2.parts[a]
    img_a = _images(side2.proj[a], q.basis.rows)
    img_b = _images(side2.proj[b], q.basis.rows)
    A = Subspace(n, img_a)
    if A.dim != q.dim:
        raise DegeneracyError(
            f"projection of Q_{l}(E') onto part {a + 1} is not injective (k={k_lo}, l={l})",
            k=k_lo, l=l,
        )
    # phi over E': canonical basis of A -> P_b(E')
    coeff = solve_rows(Matrix(img_a, n), A.basis)
    phi2 = LinearMap.from_images(A, side2.parts[b], coeff @ Matrix(img_b, n))
    # complement: coordinate directions of P_a(E') not among the pivots of A
    d = pa.dim
    a_coords = Subspace(d, pa.coords_matrix(A.basis).rows)
    free = [c for c in range(d) if c not in set(a_coords.pivots)]
    units = [[1 if j == c else 0 for j in range(d)] for c in free]
    z_coords = Subspace(d, units)
    if a_coords.dim + z_coords.dim != d:
        raise DegeneracyError(f"complement collapsed (k={k_lo}, l={l})", k=k_lo, l=l)
    proj = direct_sum_projection([a_coords, z_coords], 0)
    return (A, a_coords, proj, phi2)


def build_plan(cert: Certificate, E: SubspaceSystem, E2: SubspaceSystem, check: bool = True) -> ReconstructionPlan:
    """Precompute projections, transfer maps, complements and marked bases.

    With ``check`` the certificate is first verified on both systems; a
    failure there raises ``DegeneracyError`` before any projection is built.
    """
    for name, sysm in (("E", E), ("E'", E2)):
        if sysm.n != cert.n or sysm.dims != cert.dims:
            raise DimensionMismatch(f"system {name} does not match the certificate's dimensions")
        if check:
            v = verify_certificate(cert, sysm)
            if not v.holds:
                raise DegeneracyError(
                    f"certificate does not hold on {name}: {v.failed_condition} {v.detail}",
                    k=v.detail.get("k"), l=v.detail.get("l"),
                )
    side = _side(cert, E)
    side2 = _side(cert, E2)
    transfers = {}
    for k in range(cert.K - 1):
        ik = cert.I[k]
        transfers[(k, k + 1)] = _build_transfer(side, side2, k, k + 1, ik)
        transfers[(k + 1, k)] = _build_transfer(side, side2, k + 1, k, ik)
    return ReconstructionPlan(cert, E, E2, side, side2, transfers)


def _check_block(plan: ReconstructionPlan, g: BlockMap):
    k = g.k
    if not 1 <= k <= plan.K:
        raise IndexError(f"block index {k} outside 1..{plan.K}")
    if g.map.domain != plan.parts[k - 1] or g.map.codomain != plan.parts2[k - 1]:
        raise DimensionMismatch(f"block {k} must map P_{k}(E) to P_{k}(E')")


def step(plan: ReconstructionPlan, k: int, g_k: BlockMap, direction: int = 1) -> BlockMap:
    """Block at ``k + direction`` determined by the block at ``k`` (1-based)."""
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if g_k.k != k:
        raise SemanticError(f"block is for index {g_k.k}, not {k}")
    _check_block(plan, g_k)
    a, b = k - 1, k - 1 + direction
    if not 0 <= b < plan.K:
        raise IndexError(f"no block {b + 1} to step to")
    t = plan.transfers[(a, b)]
    n = plan.cert.n
    pa2 = plan.parts2[a]
    out = []
    for u, l in zip(t.sources.rows, t.marked_l):
        A, a_coords, proj, phi2 = t.psi[l]
        w = g_k.map.apply(u)
        wc = pa2.coords(w)
        kept = proj.apply(wc)
        w_proj = pa2.combine(kept) if pa2.dim else (ZERO,) * n
        out.append(phi2.apply(w_proj))
    images = t.to_canonical @ Matrix(out, n)
    return BlockMap(b + 1, LinearMap.from_images(plan.parts[b], plan.parts2[b], images))


def chain(plan: ReconstructionPlan, k: int, r: int, g_k: BlockMap) -> BlockMap:
    """Block at ``r`` reached from the block at ``k`` through successive steps."""
    cur = g_k
    d = 1 if r >= k else -1
    for j in range(k, r, d):
        cur = step(plan, j, cur, d)
    return cur


def phi(plan: ReconstructionPlan, k: int, g_k: BlockMap) -> LinearMap:
    """The map of C^n whose blocks are all obtained from ``g_k``."""
    blocks = [chain(plan, k, r, g_k) for r in range(1, plan.K + 1)]
    n = plan.cert.n
    rows = []
    for i in range(n):
        e = [GR(1) if j == i else ZERO for j in range(n)]
        acc = [ZERO] * n
        for m, blk in enumerate(blocks):
            piece = plan.side.proj[m].apply(e)
            img = blk.map.apply(piece)
            acc = [x + y for x, y in zip(acc, img)]
        rows.append(acc)
    return LinearMap.from_ambient(Matrix(rows, n))


def block(g: LinearMap, plan: ReconstructionPlan, k: int) -> BlockMap:
    """The k-th block of a map of C^n; raises ``NotContained`` if not block-diagonal there."""
    if not 1 <= k <= plan.K:
        raise IndexError(f"block index {k} outside 1..{plan.K}")
    src = plan.parts[k - 1]
    dst = plan.parts2[k - 1]
    f = g.restrict(src).corestrict(dst)
    return BlockMap(k, f)


@dataclass(frozen=True)
class ConstrainedSample:
    map: LinearMap
    solution_dim: int

    @property
    def degenerate(self) -> bool:
        return self.solution_dim == 0


def constraint_space(cert: Certificate, E: SubspaceSystem, E2: SubspaceSystem) -> Subspace:
    """Solutions ``G`` (flattened row-major, ``v -> v @ G``) of all block and Q constraints."""
    n = cert.n
    cache: dict = {}
    cache2: dict = {}
    pairs = [(evaluate(e, E, cache), evaluate(e, E2, cache2)) for e in cert.P + cert.Q]
    rows = []
    for src, dst in pairs:
        ann = dst.annihilator()
        for p in src.basis.rows:
            for a in ann.basis.rows:
                rows.append([pi * aj for pi in p for aj in a])
    if not rows:
        return Subspace.full(n * n)
    return Subspace(n * n, rows).annihilator()


def sample_constrained_map(
    cert: Certificate, E: SubspaceSystem, E2: SubspaceSystem, seed: int = 0, coeff_range: int = 10
) -> ConstrainedSample:
    """Random map with ``g(P_k(E)) <= P_k(E')`` and ``g(Q_l(E)) <= Q_l(E')`` for all k, l."""
    n = cert.n
    sol = constraint_space(cert, E, E2)
    if sol.dim == 0:
        return ConstrainedSample(LinearMap.from_ambient(Matrix.zeros(n, n)), 0)
    rng = stream(seed, "sample_constrained_map", n)
    while True:
        coeffs = [rng.randint(-coeff_range, coeff_range) for _ in range(sol.dim)]
        if any(coeffs):
            break
    flat = sol.combine(coeffs)
    m = Matrix([flat[i * n:(i + 1) * n] for i in range(n)], n)
    return ConstrainedSample(LinearMap.from_ambient(m), sol.dim)
