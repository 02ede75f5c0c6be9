"""Polynomial defining maps, their Jacobians, and tangent webs at points.

A presentation is a list of polynomial maps ``g_1..g_s`` on C^n.  At a point
z where ``g_i`` has its generic rank, the level set of ``g_i`` through z is
smooth and its tangent space is the kernel of ``d_z g_i``.  Under the
row-vector convention that kernel is the annihilator of the Jacobian's row
space.  Everything here is pointwise and infinitesimal: connectivity of
level sets is not seen.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from rigidweb.errors import InputError, SemanticError, SingularPointError
from rigidweb.genpos import DEFAULT_GENPOS_BUDGET, GenPosVerdict, system_in_general_position
from rigidweb.linalg import Matrix, Subspace, SubspaceSystem
from rigidweb.rigidity import n_bound
from rigidweb.rng import stream
from rigidweb.scalar import GR, ONE, ZERO, GaussianRational, parse_scalar

__all__ = [
    "Poly",
    "PolyMap",
    "Presentation",
    "WebReport",
    "jacobian",
    "tangent_system",
    "web_report",
    "MAX_RANK_SAMPLES",
]

MAX_RANK_SAMPLES = 32


class Poly:
    """Polynomial in ``nvars`` variables: ``{exponent tuple: coefficient}`` without zero terms."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise InputError(f"exponent vector {list(exps)} does not fit {nvars} variables")
            c = GR.coerce(c)
            if c:
                clean[exps] = clean.get(exps, ZERO) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, j: int) -> "Poly":
        """The coordinate ``z_{j+1}`` (0-based ``j``)."""
        return cls(nvars, {tuple(1 if i == j else 0 for i in range(nvars)): ONE})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for exps in sorted(self.terms, reverse=True):
            mono = "*".join(
                f"z{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e
            )
            c = self.terms[exps]
            if not mono:
                out.append(f"({c})")
            elif c == ONE:
                out.append(mono)
            else:
                out.append(f"({c})*{mono}")
        return " + ".join(out)

    def _same(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise SemanticError("polynomials in different numbers of variables")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._same(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, ZERO) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._same(other))

    def __mul__(self, other):
        other = self._same(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, ZERO) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def derivative(self, j: int) -> "Poly":
        terms = {}
        for exps, c in self.terms.items():
            if exps[j]:
                e = list(exps)
                e[j] -= 1
                terms[tuple(e)] = c * exps[j]
        return Poly(self.nvars, terms)

    def __call__(self, z: Sequence) -> GaussianRational:
        if len(z) != self.nvars:
            raise SemanticError(f"point has {len(z)} coordinates, polynomial expects {self.nvars}")
        z = [GR.coerce(x) for x in z]
        acc = ZERO
        for exps, c in self.terms.items():
            t = c
            for x, e in zip(z, exps):
                if e:
                    t = t * x ** e
            acc = acc + t
        return acc

    def to_json(self) -> list:
        return [{"coeff": str(c), "exps": list(e)} for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, nvars: int, data) -> "Poly":
        if not isinstance(data, list):
            raise InputError("a polynomial must be a list of terms")
        terms: dict = {}
        for t in data:
            if not isinstance(t, dict) or "coeff" not in t or "exps" not in t:
                raise InputError('each term needs "coeff" and "exps"')
            exps = t["exps"]
            if not isinstance(exps, list) or not all(isinstance(e, int) and e >= 0 for e in exps):
                raise InputError('"exps" must be a list of non-negative integers')
            if len(exps) != nvars:
                raise InputError(f"exponent vector {exps} does not have length {nvars}")
            key = tuple(exps)
            terms[key] = terms.get(key, ZERO) + parse_scalar(t["coeff"])
        return cls(nvars, terms)


@dataclass(frozen=True)
class PolyMap:
    n_in: int
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        for p in self.components:
            if p.nvars != self.n_in:
                raise SemanticError("component polynomial has the wrong number of variables")

    @property
    def n_out(self) -> int:
        return len(self.components)

    @classmethod
    def coordinates(cls, n: int, idx: Sequence[int] | None = None) -> "PolyMap":
        idx = range(n) if idx is None else idx
        return cls(n, tuple(Poly.var(n, j) for j in idx))

    def __call__(self, z) -> tuple:
        return tuple(p(z) for p in self.components)

    def to_json(self) -> dict:
        return {"n_in": self.n_in, "components": [p.to_json() for p in self.components]}

    @classmethod
    def from_json(cls, data) -> "PolyMap":
        if not isinstance(data, dict) or "n_in" not in data or "components" not in data:
            raise InputError('a polynomial map needs "n_in" and "components"')
        n_in = data["n_in"]
        if not isinstance(n_in, int) or n_in < 1:
            raise InputError('"n_in" must be a positive integer')
        comps = data["components"]
        if not isinstance(comps, list):
            raise InputError('"components" must be a list')
        return cls(n_in, tuple(Poly.from_json(n_in, c) for c in comps))


@dataclass(frozen=True)
class Presentation:
    n: int
    defs: tuple

    def __post_init__(self):
        object.__setattr__(self, "defs", tuple(self.defs))
        if not self.defs:
            raise SemanticError("a presentation needs at least one defining map")
        for g in self.defs:
            if g.n_in != self.n:
                raise SemanticError(f"defining map has {g.n_in} inputs, expected {self.n}")

    def to_json(self) -> dict:
        return {"n": self.n, "defs": [g.to_json() for g in self.defs]}

    @classmethod
    def from_json(cls, data) -> "Presentation":
        if isinstance(data, list):
            defs = tuple(PolyMap.from_json(d) for d in data)
            if not defs:
                raise InputError("empty presentation")
            return cls(defs[0].n_in, defs)
        if not isinstance(data, dict) or "defs" not in data:
            raise InputError('a presentation is a list of maps or an object with "defs"')
        defs = tuple(PolyMap.from_json(d) for d in data["defs"])
        n = data.get("n", defs[0].n_in if defs else 0)
        return cls(n, defs)


def jacobian(p: PolyMap) -> list[list[Poly]]:
    """``J[r][j] = d p_r / d z_j``."""
    return [[c.derivative(j) for j in range(p.n_in)] for c in p.components]


def jacobian_at(p: PolyMap, z: Sequence) -> Matrix:
    jac = jacobian(p)
    return Matrix([[d(z) for d in row] for row in jac], p.n_in)


def _sample_points(n: int, seed, count: int, tag: str = "rank"):
    rng = stream(seed, "web_sample_points", tag, n)
    for _ in range(count):
        yield [GR(Fraction(rng.randint(-60, 60), rng.randint(1, 7))) for _ in range(n)]


def generic_ranks(pres: Presentation, seed=0, samples: int = MAX_RANK_SAMPLES) -> tuple:
    """Maximal Jacobian rank of each defining map over seeded sample points."""
    jacs = [jacobian(g) for g in pres.defs]
    best = [0] * len(jacs)
    for z in _sample_points(pres.n, seed, samples):
        for i, jac in enumerate(jacs):
            if best[i] < min(len(jac), pres.n):
                r = Matrix([[d(z) for d in row] for row in jac], pres.n).rank() if jac else 0
                best[i] = max(best[i], r)
    return tuple(best)


def _coerce_point(pres: Presentation, z) -> list:
    if len(z) != pres.n:
        raise SemanticError(f"point has {len(z)} coordinates, expected {pres.n}")
    return [parse_scalar(x) if isinstance(x, str) else GR.coerce(x) for x in z]


def tangent_system(pres: Presentation, z, seed=0, samples: int = MAX_RANK_SAMPLES) -> SubspaceSystem:
    """Kernels of the differentials at ``z``; raises at points of sub-generic rank."""
    z = _coerce_point(pres, z)
    ranks = generic_ranks(pres, seed, samples)
    members = []
    for i, g in enumerate(pres.defs):
        jz = jacobian_at(g, z) if g.n_out else Matrix.zeros(0, pres.n)
        r = jz.rank()
        if r < ranks[i]:
            raise SingularPointError(
                f"defining map {i + 1} has rank {r} at the point, below its generic rank {ranks[i]}",
                index=i + 1,
            )
        members.append(Subspace(pres.n, jz.rows).annihilator())
    return SubspaceSystem(pres.n, tuple(members))


@dataclass(frozen=True)
class WebReport:
    n: int
    dims: tuple
    general_position: GenPosVerdict
    meets_bound: bool | None
    uniform: bool
    meets_uniform_bound: bool | None
    rigid: bool
    contained_pairs: tuple

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dims": list(self.dims),
            "general_position": self.general_position.to_json(),
            "s": len(self.dims),
            "N": n_bound(self.n) if self.n >= 2 else None,
            "meets_bound": self.meets_bound,
            "uniform": self.uniform,
            "meets_uniform_bound": self.meets_uniform_bound,
            "rigid": self.rigid,
            "contained_pairs": [list(p) for p in self.contained_pairs],
        }


def _contained_pairs(pres: Presentation, seed, samples: int) -> tuple:
    """Pairs (i, j) whose tangent spaces satisfy T_i <= T_j at every regular sample point."""
    s = len(pres.defs)
    ok = {(i, j): True for i in range(s) for j in range(s) if i != j}
    seen = 0
    ranks = generic_ranks(pres, seed, samples)
    for z in _sample_points(pres.n, seed, min(samples, 8), "containment"):
        kernels = []
        for i, g in enumerate(pres.defs):
            jz = jacobian_at(g, z)
            if jz.rank() < ranks[i]:
                break
            kernels.append(Subspace(pres.n, jz.rows).annihilator())
        else:
            seen += 1
            for (i, j) in ok:
                if ok[(i, j)] and not kernels[j].contains(kernels[i]):
                    ok[(i, j)] = False
    if not seen:
        return ()
    return tuple((i + 1, j + 1) for (i, j), v in sorted(ok.items()) if v)


def web_report(
    pres: Presentation,
    z,
    seed=0,
    samples: int = MAX_RANK_SAMPLES,
    budget: int | None = DEFAULT_GENPOS_BUDGET,
) -> WebReport:
    """Tangent dimensions, general position at ``z``, and the rigidity flags.

    ``rigid`` is true when the tangent system is in general position and
    either ``s >= N(n)`` or the tuple is all ones / all ``n - 1`` with
    ``s >= n + 1``.  ``contained_pairs`` lists (i, j) with the tangent space
    of ``g_i`` inside that of ``g_j`` at all regular sample points: a sign
    that ``g_i``'s decomposition is not maximal.
    """
    system = tangent_system(pres, z, seed, samples)
    n = system.n
    dims = system.dims
    s = len(dims)
    gp = system_in_general_position(system, budget=budget)
    meets = s >= n_bound(n) if n >= 2 else None
    uniform = n >= 2 and (all(d == 1 for d in dims) or all(d == n - 1 for d in dims))
    meets_uniform = (s >= n + 1) if uniform else None
    rigid = bool(gp) and bool(meets or meets_uniform)
    return WebReport(
        n=n,
        dims=dims,
        general_position=gp,
        meets_bound=meets,
        uniform=uniform,
        meets_uniform_bound=meets_uniform,
        rigid=rigid,
        contained_pairs=_contained_pairs(pres, seed, samples),
    )
