"""Exact linear algebra over prime fields.

Matrices are immutable tuples of residues.  Subspaces are stored by their
reduced row-echelon basis, so two ``Subspace`` values describe the same set
exactly when they compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch

__all__ = [
    "PrimeModulus",
    "Matrix",
    "Subspace",
    "is_prime",
    "rref",
    "rank",
    "kernel",
    "image",
    "apply",
    "preimage",
    "intersect",
    "sum_spaces",
    "contains",
    "dim",
    "coordinates",
    "restrict",
]

_MR_BASES = (2, 3, 5, 7)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every ``n < 3_215_031_751``."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int = 2

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError(f"modulus must be an int, got {type(self.p).__name__}")
        if not 2 <= self.p < 2**31:
            raise ValueError(f"modulus {self.p} outside [2, 2^31)")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, self.p - 2, self.p)

    def __int__(self) -> int:
        return self.p


def _field(p: PrimeModulus | int) -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else PrimeModulus(p)


# ---------------------------------------------------------------------------
# row reduction on plain lists; every public operation funnels through here


def _rref_rows(rows: Iterable[Sequence[int]], ncols: int, p: int):
    """Return (nonzero rref rows as lists, pivot columns)."""
    work = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        lead = prow[c]
        if lead != 1:
            inv = pow(lead, p - 2, p)
            prow = [x * inv % p for x in prow]
            work[r] = prow
        for i in range(nrows):
            if i != r:
                f = work[i][c]
                if f:
                    work[i] = [(x - f * y) % p for x, y in zip(work[i], prow)]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def _kernel_rows(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis (as rows) of {x : M x = 0} for M given by ``rows``."""
    red, pivots = _rref_rows(rows, ncols, p)
    pivset = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [0] * ncols
        v[j] = 1
        for row, c in zip(red, pivots):
            if row[j]:
                v[c] = (-row[j]) % p
        basis.append(v)
    return basis


def _transpose(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    return [[row[j] for row in rows] for j in range(ncols)]


@dataclass(frozen=True)
class Matrix:
    """Immutable ``nrows x ncols`` matrix over F_p.

    Zero-sized shapes are legal: a ``0 x k`` matrix is the map from F_p^k to
    the zero space.
    """

    nrows: int
    ncols: int
    rows: tuple[tuple[int, ...], ...]
    field: PrimeModulus

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise DimensionMismatch(
                f"row data does not match declared shape {self.nrows}x{self.ncols}"
            )

    # construction -----------------------------------------------------------

    @classmethod
    def from_rows(
        cls, rows: Iterable[Iterable[int]], p: PrimeModulus | int = 2, ncols: int | None = None
    ) -> Matrix:
        fld = _field(p)
        q = fld.p
        data = tuple(tuple(int(x) % q for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise DimensionMismatch("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        return cls(len(data), ncols, data, fld)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, p: PrimeModulus | int = 2) -> Matrix:
        return cls(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)), _field(p))

    @classmethod
    def identity(cls, n: int, p: PrimeModulus | int = 2) -> Matrix:
        return cls(
            n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), _field(p)
        )

    @classmethod
    def from_columns(
        cls, cols: Sequence[Sequence[int]], nrows: int, p: PrimeModulus | int = 2
    ) -> Matrix:
        return cls.from_rows(_transpose(cols, nrows), p, ncols=len(cols))

    # accessors --------------------------------------------------------------

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> tuple[int, ...]:
        """Row-major flat entries."""
        return tuple(x for r in self.rows for x in r)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    @property
    def T(self) -> Matrix:
        return Matrix(
            self.ncols, self.nrows, tuple(map(tuple, _transpose(self.rows, self.ncols))), self.field
        )

    # arithmetic -------------------------------------------------------------

    def _check_field(self, other: Matrix) -> None:
        if self.field != other.field:
            raise DimensionMismatch(f"moduli differ: {self.p} vs {other.p}")

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        p = self.p
        cols = _transpose(other.rows, other.ncols)
        data = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows
        )
        return Matrix(self.nrows, other.ncols, data, self.field)

    def __add__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        p = self.p
        data = tuple(
            tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        )
        return Matrix(self.nrows, self.ncols, data, self.field)

    def __neg__(self) -> Matrix:
        p = self.p
        return Matrix(
            self.nrows, self.ncols, tuple(tuple((-a) % p for a in r) for r in self.rows), self.field
        )

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def apply_vector(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for matrix with {self.ncols} cols")
        p = self.p
        return tuple(sum(a * b for a, b in zip(r, v)) % p for r in self.rows)

    @staticmethod
    def block_diag(a: Matrix, b: Matrix) -> Matrix:
        a._check_field(b)
        rows = [tuple(r) + (0,) * b.ncols for r in a.rows]
        rows += [(0,) * a.ncols + tuple(r) for r in b.rows]
        return Matrix(a.nrows + b.nrows, a.ncols + b.ncols, tuple(rows), a.field)

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols}, p={self.p}, {self.tolist()})"


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form of ``m`` (same shape, zero rows at the bottom) and its rank."""
    red, pivots = _rref_rows(m.rows, m.ncols, m.p)
    r = len(pivots)
    data = [tuple(row) for row in red] + [(0,) * m.ncols] * (m.nrows - r)
    return Matrix(m.nrows, m.ncols, tuple(data), m.field), r


def rank(m: Matrix) -> int:
    return len(_rref_rows(m.rows, m.ncols, m.p)[1])


@dataclass(frozen=True)
class Subspace:
    """Subspace of F_p^ambient_dim held as a canonical RREF row basis.

    Build instances with :meth:`span`, :meth:`zero` or :meth:`full`; the
    constructor itself trusts that ``basis`` is already canonical.
    """

    ambient_dim: int
    basis: Matrix
    pivots: tuple[int, ...]

    @classmethod
    def span(
        cls, vectors: Iterable[Sequence[int]], ambient_dim: int, p: PrimeModulus | int = 2
    ) -> Subspace:
        fld = _field(p)
        q = fld.p
        vecs = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(
                    f"vector of length {len(v)} in ambient space of dimension {ambient_dim}"
                )
            vecs.append([int(x) % q for x in v])
        return cls._from_rows(vecs, ambient_dim, fld)

    @classmethod
    def _from_rows(cls, rows, ambient_dim: int, fld: PrimeModulus) -> Subspace:
        red, pivots = _rref_rows(rows, ambient_dim, fld.p)
        basis = Matrix(len(red), ambient_dim, tuple(tuple(r) for r in red), fld)
        return cls(ambient_dim, basis, tuple(pivots))

    @classmethod
    def zero(cls, ambient_dim: int, p: PrimeModulus | int = 2) -> Subspace:
        fld = _field(p)
        return cls(ambient_dim, Matrix(0, ambient_dim, (), fld), ())

    @classmethod
    def full(cls, ambient_dim: int, p: PrimeModulus | int = 2) -> Subspace:
        fld = _field(p)
        return cls(ambient_dim, Matrix.identity(ambient_dim, fld), tuple(range(ambient_dim)))

    @property
    def field(self) -> PrimeModulus:
        return self.basis.field

    @property
    def p(self) -> int:
        return self.basis.p

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def vectors(self) -> tuple[tuple[int, ...], ...]:
        return self.basis.rows

    def is_zero(self) -> bool:
        return self.basis.nrows == 0

    def is_full(self) -> bool:
        return self.basis.nrows == self.ambient_dim

    def reduce(self, v: Sequence[int]) -> list[int]:
        """Normal form of ``v`` modulo this subspace (zero exactly on members)."""
        p = self.p
        w = [int(x) % p for x in v]
        for row, c in zip(self.basis.rows, self.pivots):
            f = w[c]
            if f:
                w = [(x - f * y) % p for x, y in zip(w, row)]
        return w

    def __contains__(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length differs from ambient dimension")
        return not any(self.reduce(v))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}/{self.ambient_dim}, p={self.p}, {list(map(list, self.vectors))})"


def _check_pair(s1: Subspace, s2: Subspace) -> None:
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}")
    if s1.field != s2.field:
        raise DimensionMismatch(f"moduli differ: {s1.p} vs {s2.p}")


def kernel(m: Matrix) -> Subspace:
    """Null space of ``m`` inside F_p^cols."""
    return Subspace._from_rows(_kernel_rows(m.rows, m.ncols, m.p), m.ncols, m.field)


def image(m: Matrix) -> Subspace:
    """Column space of ``m`` inside F_p^rows."""
    return Subspace._from_rows(_transpose(m.rows, m.ncols), m.nrows, m.field)


def apply(m: Matrix, s: Subspace) -> Subspace:
    """The subspace ``m(s)``."""
    if s.ambient_dim != m.ncols:
        raise DimensionMismatch(f"subspace of F^{s.ambient_dim} fed to a map from F^{m.ncols}")
    if s.field != m.field:
        raise DimensionMismatch(f"moduli differ: {m.p} vs {s.p}")
    return Subspace._from_rows([m.apply_vector(v) for v in s.vectors], m.nrows, m.field)


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """``{x : m x in s}``.

    Solves ``m x - B^T y = 0`` for ``(x, y)`` where ``B`` is the basis of ``s``
    and keeps the ``x`` block.
    """
    if s.ambient_dim != m.nrows:
        raise DimensionMismatch(f"subspace of F^{s.ambient_dim} pulled back along a map into F^{m.nrows}")
    if s.field != m.field:
        raise DimensionMismatch(f"moduli differ: {m.p} vs {s.p}")
    p = m.p
    if s.is_full():
        return Subspace.full(m.ncols, m.field)
    k = s.dim
    bt = s.basis.rows
    system = [
        list(m.rows[i]) + [(-bt[j][i]) % p for j in range(k)] for i in range(m.nrows)
    ]
    sols = _kernel_rows(system, m.ncols + k, p)
    return Subspace._from_rows([v[: m.ncols] for v in sols], m.ncols, m.field)


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """``s1 & s2`` via the kernel of ``[B1^T | -B2^T]``."""
    _check_pair(s1, s2)
    if s1.is_zero() or s2.is_zero():
        return Subspace.zero(s1.ambient_dim, s1.field)
    if s1.is_full():
        return s2
    if s2.is_full():
        return s1
    p = s1.p
    b1, b2 = s1.vectors, s2.vectors
    k1, k2 = len(b1), len(b2)
    system = [
        [b1[j][i] for j in range(k1)] + [(-b2[j][i]) % p for j in range(k2)]
        for i in range(s1.ambient_dim)
    ]
    sols = _kernel_rows(system, k1 + k2, p)
    vecs = []
    for y in sols:
        v = [0] * s1.ambient_dim
        for coef, row in zip(y[:k1], b1):
            if coef:
                v = [(a + coef * b) % p for a, b in zip(v, row)]
        vecs.append(v)
    return Subspace._from_rows(vecs, s1.ambient_dim, s1.field)


def sum_spaces(s1: Subspace, s2: Subspace) -> Subspace:
    """``s1 + s2``."""
    _check_pair(s1, s2)
    if s1.is_zero():
        return s2
    if s2.is_zero():
        return s1
    return Subspace._from_rows(list(s1.vectors) + list(s2.vectors), s1.ambient_dim, s1.field)


def contains(s1: Subspace, s2: Subspace) -> bool:
    """True when ``s2`` is a subset of ``s1``."""
    _check_pair(s1, s2)
    return all(not any(s1.reduce(v)) for v in s2.vectors)


def dim(s: Subspace) -> int:
    return s.dim


def coordinates(s: Subspace, v: Sequence[int]) -> tuple[int, ...]:
    """Coefficients of ``v`` in the canonical basis of ``s``.

    Raises ``ValueError`` when ``v`` is not in ``s``.
    """
    p = s.p
    coords = tuple(int(v[c]) % p for c in s.pivots)
    recon = [0] * s.ambient_dim
    for coef, row in zip(coords, s.vectors):
        if coef:
            recon = [(a + coef * b) % p for a, b in zip(recon, row)]
    if any((a - int(b)) % p for a, b in zip(recon, v)):
        raise ValueError("vector is not in the subspace")
    return coords


def restrict(m: Matrix, source: Subspace, target: Subspace) -> Matrix:
    """Matrix of ``m`` restricted to ``source -> target`` in canonical bases.

    Requires ``m(source)`` to lie inside ``target``.
    """
    if source.ambient_dim != m.ncols or target.ambient_dim != m.nrows:
        raise DimensionMismatch("restriction subspaces do not match the map's shape")
    cols = [coordinates(target, m.apply_vector(v)) for v in source.vectors]
    return Matrix.from_columns(cols, target.dim, m.field)
