"""Persistence modules over F_p, their diagrams and barcodes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Mapping, NamedTuple, Sequence

from .errors import DimensionMismatch, ValidationError
from .linalg import Matrix, PrimeModulus, Subspace, image, intersect, kernel

if TYPE_CHECKING:
    from .ladder import Matching

__all__ = [
    "IntervalKey",
    "IndexedInterval",
    "PersistenceModule",
    "PersistenceDiagram",
    "Barcode",
    "canonical_order",
    "composite",
    "persist_subspace",
    "diagram",
    "barcode",
    "interval_module",
    "zero_module",
    "direct_sum",
    "realize_matching",
]


class IntervalKey(NamedTuple):
    """Closed interval ``[a, b]`` of steps; ``[a, b+1)`` in half-open notation."""

    a: int
    b: int

    def __str__(self) -> str:
        return f"[{self.a},{self.b}]"


class IndexedInterval(NamedTuple):
    """One element ``[a,b]_copy`` of a representation set."""

    key: IntervalKey
    copy: int

    def __str__(self) -> str:
        return f"{self.key}#{self.copy}"


def as_matrix(
    data: Matrix | Sequence[Sequence[int]], nrows: int, ncols: int, fld: PrimeModulus, where: str
) -> Matrix:
    """Coerce nested lists to a matrix of the expected shape.

    Maps with no entries may be written as ``[]`` or as ``nrows`` empty rows.
    """
    if isinstance(data, Matrix):
        return data
    rows = [list(r) for r in data]
    if nrows * ncols == 0 and not any(rows):
        return Matrix.zeros(nrows, ncols, fld)
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        shape = (len(rows), len(rows[0]) if rows else 0)
        raise ValidationError(f"{where} has shape {shape}, expected {(nrows, ncols)}", where)
    for r in rows:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValidationError(f"{where} has a non-integer entry {x!r}", where)
    return Matrix.from_rows(rows, fld, ncols=ncols)


def canonical_order(key: tuple[int, int]) -> tuple[int, int]:
    """Sort key: births ascending, then longer intervals first."""
    return (key[0], -key[1])


@dataclass(frozen=True)
class PersistenceModule:
    """``V_1 -> V_2 -> ... -> V_n`` with ``maps[i-1]`` the matrix of ``f_i``.

    Index 0 and n+1 are virtual zero spaces.
    """

    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]
    field: PrimeModulus
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise ValidationError("dimensions must be non-negative", "dims")
        if len(self.maps) != max(len(self.dims) - 1, 0):
            raise ValidationError(
                f"expected {max(len(self.dims) - 1, 0)} structure maps, got {len(self.maps)}", "maps"
            )
        for i, f in enumerate(self.maps, start=1):
            if f.field != self.field:
                raise DimensionMismatch(f"map f_{i} has modulus {f.p}, module has {self.field.p}")
            if f.shape != (self.dims[i], self.dims[i - 1]):
                raise ValidationError(
                    f"map f_{i} has shape {f.shape}, expected {(self.dims[i], self.dims[i - 1])}",
                    f"maps[{i - 1}]",
                )

    @classmethod
    def build(
        cls, dims: Sequence[int], maps: Sequence[Matrix | Sequence[Sequence[int]]], p: PrimeModulus | int = 2
    ) -> PersistenceModule:
        """Build from dims and maps given as matrices or nested lists."""
        fld = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
        dims = tuple(int(d) for d in dims)
        mats = []
        for i, f in enumerate(maps, start=1):
            if i >= len(dims):
                raise ValidationError(f"{len(maps)} maps for {len(dims)} spaces", "maps")
            mats.append(as_matrix(f, dims[i], dims[i - 1], fld, f"maps[{i - 1}]"))
        return cls(dims, tuple(mats), fld)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def p(self) -> int:
        return self.field.p

    def dim_at(self, i: int) -> int:
        return self.dims[i - 1] if 1 <= i <= self.n else 0

    def structure_map(self, i: int) -> Matrix:
        """``f_i : V_i -> V_{i+1}`` for ``0 <= i <= n`` (zero maps at the ends)."""
        if 1 <= i < self.n:
            return self.maps[i - 1]
        return Matrix.zeros(self.dim_at(i + 1), self.dim_at(i), self.field)

    def is_zero(self) -> bool:
        return not any(self.dims)


def composite(v: PersistenceModule, a: int, b: int) -> Matrix:
    """``f_{a,b} = f_{b-1} o ... o f_a``; identity when ``a == b``."""
    if a > b:
        raise ValueError(f"composite needs a <= b, got a={a}, b={b}")
    if a < 0 or b > v.n + 1:
        raise ValueError(f"indices ({a},{b}) outside [0, {v.n + 1}]")
    key = ("f", a, b)
    hit = v._cache.get(key)
    if hit is not None:
        return hit
    if a == b:
        out = Matrix.identity(v.dim_at(a), v.field)
    elif a == 0 or b == v.n + 1:
        out = Matrix.zeros(v.dim_at(b), v.dim_at(a), v.field)
    else:
        out = v.structure_map(b - 1) @ composite(v, a, b - 1)
    v._cache[key] = out
    return out


def persist_subspace(v: PersistenceModule, a: int, b: int) -> Subspace:
    """``S_{a,b} = f_{a,b}(V_a) & ker f_b``; the zero subspace unless ``1 <= a <= b <= n``."""
    if not 1 <= a <= b <= v.n:
        return Subspace.zero(v.dim_at(b), v.field)
    key = ("S", a, b)
    hit = v._cache.get(key)
    if hit is None:
        hit = intersect(image(composite(v, a, b)), kernel(v.structure_map(b)))
        v._cache[key] = hit
    return hit


class PersistenceDiagram(Mapping[IntervalKey, int]):
    """Multiplicity function on intervals; missing keys read as 0."""

    def __init__(self, n: int, multiplicities: Mapping[tuple[int, int], int] | None = None):
        self.n = n
        self._m = {}
        for k, c in (multiplicities or {}).items():
            if c < 0:
                raise ValidationError(f"negative multiplicity at {tuple(k)}", tuple(k))
            if c:
                self._m[IntervalKey(*k)] = int(c)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self._m.get(IntervalKey(*key), 0)

    def __iter__(self) -> Iterator[IntervalKey]:
        return iter(sorted(self._m, key=canonical_order))

    def __len__(self) -> int:
        return len(self._m)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PersistenceDiagram):
            return self.n == other.n and self.support() == other.support()
        if isinstance(other, Mapping):
            return self.support() == {IntervalKey(*k): c for k, c in other.items() if c}
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def support(self) -> dict[IntervalKey, int]:
        return {k: c for k, c in self._m.items() if c > 0}

    def __add__(self, other: PersistenceDiagram) -> PersistenceDiagram:
        if self.n != other.n:
            raise DimensionMismatch("diagrams of different lengths")
        out = dict(self.support())
        for k, c in other.support().items():
            out[k] = out.get(k, 0) + c
        return PersistenceDiagram(self.n, out)

    def __repr__(self) -> str:
        body = ", ".join(f"({k.a},{k.b}): {c}" for k, c in sorted(self.support().items(), key=lambda kc: canonical_order(kc[0])))
        return f"PersistenceDiagram(n={self.n}, {{{body}}})"


@dataclass(frozen=True)
class Barcode:
    """Multiset of intervals, stored in canonical order with positive multiplicities."""

    entries: tuple[tuple[IntervalKey, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for k, c in self.entries:
            if c <= 0:
                raise ValidationError(f"barcode multiplicity must be positive at {k}", k)
            if k in seen:
                raise ValidationError(f"duplicate interval {k} in barcode", k)
            seen.add(k)

    @classmethod
    def from_counts(cls, counts: Mapping[tuple[int, int], int]) -> Barcode:
        items = [(IntervalKey(*k), int(c)) for k, c in counts.items() if c > 0]
        items.sort(key=lambda kc: canonical_order(kc[0]))
        return cls(tuple(items))

    @property
    def cardinality(self) -> int:
        """Number of intervals counted with multiplicity."""
        return sum(c for _, c in self.entries)

    def as_dict(self) -> dict[IntervalKey, int]:
        return dict(self.entries)

    def representation_set(self) -> list[IndexedInterval]:
        return [IndexedInterval(k, i) for k, c in self.entries for i in range(1, c + 1)]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __str__(self) -> str:
        return "{" + "; ".join(f"{k} x {c}" for k, c in self.entries) + "}"


def diagram(v: PersistenceModule) -> PersistenceDiagram:
    """Interval multiplicities ``dim S_{a,b} - dim S_{a-1,b}`` for ``1 <= a <= b <= n``."""
    out = {}
    for b in range(1, v.n + 1):
        prev = 0  # dim S_{0,b}
        for a in range(1, b + 1):
            cur = persist_subspace(v, a, b).dim
            if cur - prev:
                out[IntervalKey(a, b)] = cur - prev
            prev = cur
    return PersistenceDiagram(v.n, out)


def barcode(d: PersistenceDiagram | Mapping[tuple[int, int], int]) -> Barcode:
    return Barcode.from_counts(d.support() if isinstance(d, PersistenceDiagram) else d)


def interval_module(a: int, b: int, n: int, p: PrimeModulus | int = 2) -> PersistenceModule:
    """``I[a,b]`` of length ``n``: F on ``[a,b]``, identities inside, zero elsewhere."""
    if not 1 <= a <= b <= n:
        raise ValueError(f"interval [{a},{b}] not inside [1,{n}]")
    fld = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
    dims = tuple(int(a <= i <= b) for i in range(1, n + 1))
    maps = []
    for i in range(1, n):
        if a <= i < b:
            maps.append(Matrix.identity(1, fld))
        else:
            maps.append(Matrix.zeros(dims[i], dims[i - 1], fld))
    return PersistenceModule(dims, tuple(maps), fld)


def zero_module(n: int, p: PrimeModulus | int = 2) -> PersistenceModule:
    fld = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
    return PersistenceModule((0,) * n, tuple(Matrix.zeros(0, 0, fld) for _ in range(n - 1)), fld)


def direct_sum(v1: PersistenceModule, v2: PersistenceModule) -> PersistenceModule:
    """Block-diagonal sum; the first summand occupies the leading coordinates."""
    if v1.n != v2.n:
        raise DimensionMismatch(f"lengths differ: {v1.n} vs {v2.n}")
    if v1.field != v2.field:
        raise DimensionMismatch(f"moduli differ: {v1.p} vs {v2.p}")
    dims = tuple(x + y for x, y in zip(v1.dims, v2.dims))
    maps = tuple(Matrix.block_diag(f, g) for f, g in zip(v1.maps, v2.maps))
    return PersistenceModule(dims, maps, v1.field)


def realize_matching(
    m: Matching | Mapping[tuple[int, int, int, int], int],
    dV: PersistenceDiagram,
    dU: PersistenceDiagram,
) -> list[tuple[IndexedInterval, IndexedInterval]]:
    """Turn multiplicities into one concrete partial bijection of representation sets.

    Key pairs are visited in canonical order and each consumes the lowest
    unused copy indices on both sides, so the result is deterministic.
    """
    counts: dict[tuple[IntervalKey, IntervalKey], int] = {}
    for (a, b, a2, b2), c in m.items():
        if c:
            counts[(IntervalKey(a, b), IntervalKey(a2, b2))] = int(c)
    row: dict[IntervalKey, int] = {}
    col: dict[IntervalKey, int] = {}
    for (k, k2), c in counts.items():
        row[k] = row.get(k, 0) + c
        col[k2] = col.get(k2, 0) + c
    for k, s in row.items():
        if s > dV[k]:
            raise ValidationError(f"matching uses {s} copies of {k} but the source diagram has {dV[k]}", k)
    for k, s in col.items():
        if s > dU[k]:
            raise ValidationError(f"matching uses {s} copies of {k} but the target diagram has {dU[k]}", k)

    used_src: dict[IntervalKey, int] = {}
    used_dst: dict[IntervalKey, int] = {}
    pairs = []
    order = sorted(counts, key=lambda kk: canonical_order(kk[0]) + canonical_order(kk[1]))
    for k, k2 in order:
        for _ in range(counts[(k, k2)]):
            i = used_src[k] = used_src.get(k, 0) + 1
            j = used_dst[k2] = used_dst.get(k2, 0) + 1
            pairs.append((IndexedInterval(k, i), IndexedInterval(k2, j)))
    return pairs
