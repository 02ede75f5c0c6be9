"""Exact linear algebra over the Gaussian rationals.

Convention: vectors are rows and matrices act on the right, ``v -> v @ M``.
A linear map between subspaces stores its action on the canonical bases, so
its matrix has shape ``dim(domain) x dim(codomain)``.

Subspaces keep their canonical basis as primitive Gaussian-integer rows (the
reduced row-echelon rows scaled by their positive-integer pivot), so equality
of subspaces is equality of those integer tuples and the lattice operations
never leave integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence

from rigidweb import kernel
from rigidweb.errors import (
    DimensionMismatch,
    InputError,
    NotContained,
    NotDirectSum,
    SamplingError,
)
from rigidweb.rng import stream
from rigidweb.scalar import ONE, ZERO, GaussianRational, parse_scalar

__all__ = [
    "Matrix",
    "Subspace",
    "LinearMap",
    "SubspaceSystem",
    "canonical_from_spanning",
    "subspace_sum",
    "intersect",
    "intersect_zassenhaus",
    "intersect_annihilator",
    "direct_sum_projection",
    "restrict",
    "random_system",
    "solve_rows",
]

GR = GaussianRational


def _coerce_row(row) -> tuple:
    return tuple(x if isinstance(x, GaussianRational) else GR.coerce(x) for x in row)


def _to_ints(row: Sequence[GaussianRational]) -> list[int]:
    """Scale a row by the lcm of its denominators; returns flat re/im ints."""
    den = 1
    for x in row:
        den = lcm(den, x.triple[2])
    out = []
    for x in row:
        a, b, d = x.triple
        f = den // d
        out.append(a * f)
        out.append(b * f)
    return out


def _from_ints(flat: Sequence[int], den: int = 1) -> tuple:
    return tuple(GR._raw(flat[j], flat[j + 1], den) for j in range(0, len(flat), 2))


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix of Gaussian rationals."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(_coerce_row(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch(f"row of length {len(r)} in a {ncols}-column matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _trusted(cls, rows: tuple, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._trusted(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls._trusted(tuple((ZERO,) * c for _ in range(r)), c)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def transpose(self) -> "Matrix":
        return Matrix._trusted(
            tuple(tuple(self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols)),
            self.nrows,
        )

    T = property(transpose)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().rows
        out = []
        for r in self.rows:
            out.append(tuple(_dot(r, c) for c in cols))
        return Matrix._trusted(tuple(out), other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._trusted(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = GR.coerce(c)
        return Matrix._trusted(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._trusted(tuple(tuple(r[j] for j in idx) for r in self.rows), len(idx))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise DimensionMismatch("hstack needs equal row counts")
        return Matrix._trusted(
            tuple(a + b for a, b in zip(self.rows, other.rows)), self.ncols + other.ncols
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise DimensionMismatch("vstack needs equal column counts")
        return Matrix._trusted(self.rows + other.rows, self.ncols)

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row-echelon form (zero rows dropped) and pivot columns."""
        rows, pivots = kernel.rref([_to_ints(r) for r in self.rows], self.ncols)
        out = tuple(_from_ints(r, r[2 * c]) for r, c in zip(rows, pivots))
        return Matrix._trusted(out, self.ncols), pivots

    def rank(self) -> int:
        return kernel.rank([_to_ints(r) for r in self.rows], self.ncols)

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("only square matrices have inverses")
        red, pivots = self.hstack(Matrix.identity(n)).rref()
        if pivots[:n] != tuple(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return red.columns(range(n, 2 * n))

    def to_json(self) -> list:
        return [[str(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, ncols: int | None = None) -> "Matrix":
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise InputError("matrix must be a list of rows")
        try:
            rows = [[parse_scalar(x) for x in r] for r in data]
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return cls(rows, ncols)


def _dot(a: Sequence[GaussianRational], b: Sequence[GaussianRational]) -> GaussianRational:
    # accumulate over a common denominator instead of normalizing each term
    re = 0
    im = 0
    den = 1
    for x, y in zip(a, b):
        p, q, d = x.triple
        if not (p or q):
            continue
        r, s, e = y.triple
        if not (r or s):
            continue
        de = d * e
        if de == den:
            re += p * r - q * s
            im += p * s + q * r
        else:
            re = re * de + (p * r - q * s) * den
            im = im * de + (p * s + q * r) * den
            den *= de
    return GR._raw(re, im, den)


def solve_rows(a: Matrix, y: Matrix) -> Matrix:
    """Return ``x`` with ``x @ a == y``; ``a`` must have independent rows."""
    r, n = a.shape
    if y.ncols != n:
        raise DimensionMismatch("solve_rows: column counts differ")
    aug = a.hstack(Matrix.identity(r))
    red, pivots = aug.rref()
    if r and (len(pivots) < r or pivots[r - 1] >= n):
        raise NotDirectSum("solve_rows: rows are linearly dependent")
    transform = red.columns(range(n, n + r))
    out = []
    for row in y.rows:
        coeffs = [row[c] for c in pivots[:r]]
        x = tuple(_dot(coeffs, col) for col in transform.transpose().rows)
        out.append(x)
    x = Matrix._trusted(tuple(out), r)
    if x @ a != y:
        raise NotContained("solve_rows: a target row is not in the row space")
    return x


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A linear subspace of C^n in canonical reduced row-echelon form."""

    __slots__ = ("n", "_rows", "_pivots", "_basis")

    def __init__(self, n: int, spanning: Iterable[Iterable] = ()):
        rows = [_coerce_row(r) for r in spanning]
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch(f"vector of length {len(r)} in ambient dimension {n}")
        self._set(n, *kernel.rref([_to_ints(r) for r in rows], n))

    def _set(self, n, rows, pivots):
        self.n = n
        self._rows = rows
        self._pivots = pivots
        self._basis = None

    @classmethod
    def _from_ints(cls, n: int, int_rows) -> "Subspace":
        s = object.__new__(cls)
        s._set(n, *kernel.rref(int_rows, n))
        return s

    @classmethod
    def _canonical(cls, n: int, rows: tuple, pivots: tuple) -> "Subspace":
        s = object.__new__(cls)
        s._set(n, rows, pivots)
        return s

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls._canonical(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        rows = tuple(tuple(1 if j == 2 * i else 0 for j in range(2 * n)) for i in range(n))
        return cls._canonical(n, rows, tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    @property
    def basis(self) -> Matrix:
        """Canonical reduced row-echelon basis (pivot entries equal to 1)."""
        if self._basis is None:
            self._basis = Matrix._trusted(
                tuple(_from_ints(r, r[2 * c]) for r, c in zip(self._rows, self._pivots)),
                self.n,
            )
        return self._basis

    def is_zero(self) -> bool:
        return not self._rows

    def is_full(self) -> bool:
        return len(self._rows) == self.n

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    def __hash__(self):
        return hash((self.n, self._rows))

    def __repr__(self):
        return f"Subspace(n={self.n}, dim={self.dim}, basis={self.basis.to_json()})"

    def _check(self, other: "Subspace"):
        if self.n != other.n:
            raise DimensionMismatch(f"ambient dimensions differ: {self.n} vs {other.n}")

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __ge__(self, other: "Subspace") -> bool:
        return self.contains(other)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim > self.dim:
            return False
        return all(self._contains_int_row(r) for r in other._rows)

    def _contains_int_row(self, row) -> bool:
        # a canonical basis reproduces v from the entries of v at its pivots
        return kernel.rank(list(self._rows) + [list(row)], self.n) == self.dim

    def contains_vector(self, v) -> bool:
        v = _coerce_row(v)
        if len(v) != self.n:
            raise DimensionMismatch("vector length does not match ambient dimension")
        try:
            self.coords(v)
        except NotContained:
            return False
        return True

    def coords(self, v) -> tuple:
        """Coordinates of ``v`` in the canonical basis; raises if ``v`` is outside."""
        v = _coerce_row(v)
        c = tuple(v[p] for p in self._pivots)
        if self.combine(c) != v:
            raise NotContained("vector does not lie in the subspace")
        return c

    def combine(self, coeffs: Sequence) -> tuple:
        """The vector with the given coordinates in the canonical basis."""
        coeffs = _coerce_row(coeffs)
        if len(coeffs) != self.dim:
            raise DimensionMismatch("coordinate count does not match dimension")
        if not self.dim:
            return (ZERO,) * self.n
        return tuple(_dot(coeffs, col) for col in self.basis.transpose().rows)

    def coords_matrix(self, m: Matrix) -> Matrix:
        return Matrix._trusted(tuple(self.coords(r) for r in m.rows), self.dim)

    def annihilator(self) -> "Subspace":
        """``{x : x . b = 0 for every b}`` under the bilinear (not Hermitian) pairing."""
        n = self.n
        piv = self._pivots
        pivset = set(piv)
        free = [c for c in range(n) if c not in pivset]
        den = 1
        for r, c in zip(self._rows, piv):
            den = lcm(den, r[2 * c])
        out = []
        for f in free:
            vec = [0] * (2 * n)
            vec[2 * f] = den
            for r, c in zip(self._rows, piv):
                scale = den // r[2 * c]
                vec[2 * c] = -r[2 * f] * scale
                vec[2 * c + 1] = -r[2 * f + 1] * scale
            out.append(vec)
        return Subspace._from_ints(n, out)

    def to_json(self) -> dict:
        return {"n": self.n, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, data) -> "Subspace":
        if not isinstance(data, dict) or "n" not in data or "basis" not in data:
            raise InputError('subspace must be an object with "n" and "basis"')
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise InputError('"n" must be a non-negative integer')
        m = Matrix.from_json(data["basis"], ncols=n)
        return cls(n, m.rows)


def canonical_from_spanning(n: int, spanning) -> Subspace:
    if isinstance(spanning, Matrix):
        if spanning.ncols != n:
            raise DimensionMismatch(f"spanning matrix has {spanning.ncols} columns, expected {n}")
        spanning = spanning.rows
    return Subspace(n, spanning)


def subspace_sum(a: Subspace, *rest: Subspace) -> Subspace:
    rows = list(a._rows)
    for b in rest:
        a._check(b)
        rows.extend(b._rows)
    return Subspace._from_ints(a.n, rows)


def sum_dim(a: Subspace, b: Subspace) -> int:
    """``dim(a + b)`` without building the canonical sum."""
    a._check(b)
    if a.is_zero() or b.is_full():
        return b.dim
    if b.is_zero() or a.is_full():
        return a.dim
    return kernel.rank(list(a._rows) + list(b._rows), a.n)


def intersect_zassenhaus(a: Subspace, b: Subspace) -> Subspace:
    """Intersection from the echelon form of ``[[A, A], [B, 0]]``."""
    a._check(b)
    n = a.n
    rows = [list(r) + list(r) for r in a._rows]
    rows += [list(r) + [0] * (2 * n) for r in b._rows]
    red, pivots = kernel.rref(rows, 2 * n)
    return Subspace._from_ints(n, [r[2 * n:] for r, c in zip(red, pivots) if c >= n])


def intersect_annihilator(a: Subspace, b: Subspace) -> Subspace:
    """Intersection as the annihilator of ``ann(A) + ann(B)``."""
    a._check(b)
    return subspace_sum(a.annihilator(), b.annihilator()).annihilator()


def intersect(a: Subspace, b: Subspace, *rest: Subspace) -> Subspace:
    out = _intersect2(a, b)
    for c in rest:
        out = _intersect2(out, c)
    return out


def _intersect2(a: Subspace, b: Subspace) -> Subspace:
    a._check(b)
    if a.is_zero() or b.is_full():
        return a
    if b.is_zero() or a.is_full():
        return b
    s = sum_dim(a, b)
    d = a.dim + b.dim - s
    if d == 0:
        return Subspace.zero(a.n)
    if d == a.dim:
        return a
    if d == b.dim:
        return b
    return intersect_zassenhaus(a, b)


# ---------------------------------------------------------------------------
# linear maps


@dataclass(frozen=True)
class LinearMap:
    domain: Subspace
    codomain: Subspace
    action: Matrix

    def __post_init__(self):
        if self.action.shape != (self.domain.dim, self.codomain.dim):
            raise DimensionMismatch(
                f"action of shape {self.action.shape} for a map "
                f"{self.domain.dim} -> {self.codomain.dim}"
            )

    @classmethod
    def identity(cls, sub: Subspace) -> "LinearMap":
        return cls(sub, sub, Matrix.identity(sub.dim))

    @classmethod
    def zero(cls, domain: Subspace, codomain: Subspace) -> "LinearMap":
        return cls(domain, codomain, Matrix.zeros(domain.dim, codomain.dim))

    @classmethod
    def from_ambient(cls, m: Matrix) -> "LinearMap":
        """The map ``v -> v @ m`` on C^n."""
        if m.nrows != m.ncols:
            raise DimensionMismatch("ambient matrix must be square")
        full = Subspace.full(m.nrows)
        return cls(full, full, m)

    @classmethod
    def from_images(cls, domain: Subspace, codomain: Subspace, images: Matrix) -> "LinearMap":
        """Map sending the i-th canonical basis vector of ``domain`` to ``images[i]``."""
        return cls(domain, codomain, codomain.coords_matrix(images))

    def apply(self, v) -> tuple:
        c = self.domain.coords(v)
        if not self.domain.dim:
            return (ZERO,) * self.codomain.n
        w = tuple(_dot(c, col) for col in self.action.transpose().rows)
        return self.codomain.combine(w)

    def images(self) -> Matrix:
        """Images of the domain's canonical basis, as ambient row vectors."""
        if not self.codomain.dim:
            return Matrix.zeros(self.domain.dim, self.codomain.n)
        return self.action @ self.codomain.basis

    def ambient_matrix(self) -> Matrix:
        if not self.domain.is_full():
            raise DimensionMismatch("ambient matrix needs a map defined on all of C^n")
        return self.images()

    def image(self) -> Subspace:
        return Subspace(self.codomain.n, self.images().rows)

    def rank(self) -> int:
        return self.action.rank()

    def is_injective(self) -> bool:
        return self.rank() == self.domain.dim

    def then(self, other: "LinearMap") -> "LinearMap":
        """``other o self``."""
        if not other.domain.contains(self.codomain):
            raise NotContained("codomain is not inside the next map's domain")
        change = other.domain.coords_matrix(self.codomain.basis)
        return LinearMap(self.domain, other.codomain, self.action @ change @ other.action)

    def restrict(self, sub: Subspace) -> "LinearMap":
        if not self.domain.contains(sub):
            raise NotContained("restriction target is not inside the domain")
        return LinearMap(sub, self.codomain, self.domain.coords_matrix(sub.basis) @ self.action)

    def corestrict(self, target: Subspace) -> "LinearMap":
        """Same map with a new codomain that still contains the image."""
        return LinearMap(self.domain, target, target.coords_matrix(self.images()))

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise DimensionMismatch("maps have different domain or codomain")
        return LinearMap(self.domain, self.codomain, self.action + other.action)

    def scale(self, c) -> "LinearMap":
        return LinearMap(self.domain, self.codomain, self.action.scale(c))

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "action": self.action.to_json(),
        }


def restrict(f: LinearMap, sub: Subspace) -> LinearMap:
    return f.restrict(sub)


def direct_sum_projection(parts: Sequence[Subspace], k: int, ambient: Subspace | None = None) -> LinearMap:
    """Projection of ``ambient`` (default C^n) onto ``parts[k]`` along the other parts."""
    if not parts:
        raise NotDirectSum("no parts given")
    n = parts[0].n
    for p in parts:
        parts[0]._check(p)
    if ambient is None:
        ambient = Subspace.full(n)
    if not 0 <= k < len(parts):
        raise IndexError(f"part index {k} out of range")
    total = sum(p.dim for p in parts)
    if total != ambient.dim or not all(ambient.contains(p) for p in parts):
        raise NotDirectSum("parts do not form a direct sum equal to the ambient space")
    stacked = Matrix._trusted(tuple(r for p in parts for r in p.basis.rows), n)
    if total and stacked.rank() != total:
        raise NotDirectSum("parts do not form a direct sum equal to the ambient space")
    start = sum(p.dim for p in parts[:k])
    if not ambient.dim:
        return LinearMap.zero(ambient, parts[k])
    coeffs = solve_rows(stacked, ambient.basis)
    return LinearMap(ambient, parts[k], coeffs.columns(range(start, start + parts[k].dim)))


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class SubspaceSystem:
    n: int
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        for m in self.members:
            if not isinstance(m, Subspace):
                raise TypeError("system members must be Subspace instances")
            if m.n != self.n:
                raise DimensionMismatch(
                    f"member of ambient dimension {m.n} in a system over C^{self.n}"
                )

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.dim for m in self.members)

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    def permuted(self, perm: Sequence[int]) -> "SubspaceSystem":
        """System whose j-th member is ``self[perm[j]]`` (0-based)."""
        return SubspaceSystem(self.n, tuple(self.members[p] for p in perm))

    def to_json(self) -> dict:
        return {"n": self.n, "members": [m.to_json() for m in self.members]}

    @classmethod
    def from_json(cls, data) -> "SubspaceSystem":
        if not isinstance(data, dict) or "n" not in data or "members" not in data:
            raise InputError('system must be an object with "n" and "members"')
        if not isinstance(data["members"], list):
            raise InputError('"members" must be a list')
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise InputError('"n" must be an integer')
        # a member is either {"n", "basis"} or just its list of spanning rows
        members = tuple(
            Subspace.from_json(m) if isinstance(m, dict) else Subspace(n, Matrix.from_json(m, ncols=n).rows)
            for m in data["members"]
        )
        return cls(n, members)


MAX_DRAWS = 1000


def random_subspace(n: int, dim: int, rng, entry_range: int = 100) -> Subspace:
    if not 0 <= dim <= n:
        raise DimensionMismatch(f"dimension {dim} outside 0..{n}")
    if dim == n:
        return Subspace.full(n)
    if dim == 0:
        return Subspace.zero(n)
    for _ in range(MAX_DRAWS):
        rows = [
            [v for _ in range(n) for v in (rng.randint(-entry_range, entry_range), 0)]
            for _ in range(dim)
        ]
        sub = Subspace._from_ints(n, rows)
        if sub.dim == dim:
            return sub
    raise SamplingError(f"no rank-{dim} draw in {MAX_DRAWS} attempts; entry range too small")


def random_system(n: int, dims: Sequence[int], seed: int, entry_range: int = 100) -> SubspaceSystem:
    """Seeded random system; members have small-integer spanning rows."""
    rng = stream(seed, "random_system", n, tuple(dims))
    return SubspaceSystem(n, tuple(random_subspace(n, d, rng, entry_range) for d in dims))
