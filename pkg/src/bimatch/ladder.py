"""Morphisms between persistence modules and the matchings they induce.

The induced matching is built from ``chi(a, b, a2, b2)``, the dimension of
the part of ``S^V_{a,b}`` that reaches ``S^U_{a2,b2}`` backwards through the
morphism, by taking finite differences in the two birth indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, NamedTuple, Sequence

from .errors import DimensionMismatch, ValidationError
from .linalg import Matrix, PrimeModulus, Subspace, apply, intersect, kernel, preimage, rank
from .persistence import (
    IntervalKey,
    PersistenceDiagram,
    PersistenceModule,
    as_matrix,
    canonical_order,
    composite,
    diagram,
    direct_sum as module_sum,
    persist_subspace,
)

__all__ = [
    "LadderMorphism",
    "Matching",
    "Violation",
    "validate",
    "direct_sum",
    "chi",
    "elder",
    "induced_matching",
    "identity_morphism",
    "zero_morphism",
    "ladder_from_pattern",
    "INDECOMPOSABLE_TAU2",
]


@dataclass(frozen=True)
class LadderMorphism:
    """Components ``alpha_i : V_i -> U_i`` of a morphism ``V -> U``.

    Construction checks shapes only; commutativity is checked by
    :func:`validate`.
    """

    source: PersistenceModule
    target: PersistenceModule
    components: tuple[Matrix, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        V, U = self.source, self.target
        if V.n != U.n:
            raise DimensionMismatch(f"source has length {V.n}, target has length {U.n}")
        if V.field != U.field:
            raise DimensionMismatch(f"moduli differ: {V.p} vs {U.p}")
        if len(self.components) != V.n:
            raise ValidationError(f"expected {V.n} components, got {len(self.components)}", "alpha")
        for i, A in enumerate(self.components, start=1):
            if A.field != V.field:
                raise DimensionMismatch(f"alpha_{i} has modulus {A.p}, modules have {V.p}")
            if A.shape != (U.dim_at(i), V.dim_at(i)):
                raise ValidationError(
                    f"alpha_{i} has shape {A.shape}, expected {(U.dim_at(i), V.dim_at(i))}",
                    f"alpha[{i - 1}]",
                )

    @classmethod
    def build(
        cls,
        source: PersistenceModule,
        target: PersistenceModule,
        components: Sequence[Matrix | Sequence[Sequence[int]]],
    ) -> LadderMorphism:
        if len(components) != source.n:
            raise ValidationError(f"expected {source.n} components, got {len(components)}", "alpha")
        mats = tuple(
            as_matrix(A, target.dim_at(i), source.dim_at(i), source.field, f"alpha[{i - 1}]")
            for i, A in enumerate(components, start=1)
        )
        return cls(source, target, mats)

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def field(self) -> PrimeModulus:
        return self.source.field

    def component(self, i: int) -> Matrix:
        """``alpha_i``, with zero maps at the virtual indices 0 and n+1."""
        if 1 <= i <= self.n:
            return self.components[i - 1]
        return Matrix.zeros(0, 0, self.field)

    def is_injective(self) -> bool:
        return all(rank(A) == A.ncols for A in self.components)

    def is_surjective(self) -> bool:
        return all(rank(A) == A.nrows for A in self.components)


class Violation(NamedTuple):
    """First non-commuting square: ``alpha_{i+1} f^V_i - f^U_i alpha_i``."""

    square: int
    difference: Matrix

    def __str__(self) -> str:
        return f"square {self.square} does not commute; difference {self.difference.tolist()}"


def validate(alpha: LadderMorphism) -> Violation | None:
    """Return ``None`` when every square commutes, else the first failure."""
    V, U = alpha.source, alpha.target
    for i in range(1, alpha.n):
        left = alpha.components[i] @ V.structure_map(i)
        right = U.structure_map(i) @ alpha.components[i - 1]
        if left != right:
            return Violation(i, left - right)
    return None


def _require_valid(alpha: LadderMorphism) -> None:
    bad = validate(alpha)
    if bad is not None:
        raise ValidationError(str(bad), bad.square)


def identity_morphism(v: PersistenceModule) -> LadderMorphism:
    return LadderMorphism(v, v, tuple(Matrix.identity(d, v.field) for d in v.dims))


def zero_morphism(v: PersistenceModule, u: PersistenceModule) -> LadderMorphism:
    return LadderMorphism(v, u, tuple(Matrix.zeros(x, y, v.field) for x, y in zip(u.dims, v.dims)))


def direct_sum(l1: LadderMorphism, l2: LadderMorphism) -> LadderMorphism:
    if l1.n != l2.n:
        raise DimensionMismatch(f"lengths differ: {l1.n} vs {l2.n}")
    return LadderMorphism(
        module_sum(l1.source, l2.source),
        module_sum(l1.target, l2.target),
        tuple(Matrix.block_diag(x, y) for x, y in zip(l1.components, l2.components)),
    )


class Matching(Mapping[tuple[int, int, int, int], int]):
    """Basis-independent partial matching ``(a, b, a2, b2) -> count``.

    Only positive values are stored; every other key reads as 0.
    """

    def __init__(self, n: int, values: Mapping[tuple[int, int, int, int], int] | None = None):
        self.n = n
        self._v = {tuple(k): int(c) for k, c in (values or {}).items() if c}
        for k, c in self._v.items():
            if c < 0:
                raise ValidationError(f"negative matching value at {k}", k)

    def __getitem__(self, key) -> int:
        return self._v.get(tuple(key), 0)

    def __iter__(self) -> Iterator[tuple[int, int, int, int]]:
        return iter(sorted(self._v, key=lambda k: canonical_order(k[:2]) + canonical_order(k[2:])))

    def __len__(self) -> int:
        return len(self._v)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Mapping):
            return dict(self.items()) == {tuple(k): c for k, c in other.items() if c}
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: Matching) -> Matching:
        out = dict(self._v)
        for k, c in other.items():
            out[k] = out.get(k, 0) + c
        return Matching(max(self.n, other.n), out)

    def row_sum(self, a: int, b: int) -> int:
        return sum(c for k, c in self._v.items() if k[:2] == (a, b))

    def col_sum(self, a2: int, b2: int) -> int:
        return sum(c for k, c in self._v.items() if k[2:] == (a2, b2))

    def bound_violations(self, dV: PersistenceDiagram, dU: PersistenceDiagram) -> list[str]:
        """Describe every key whose row or column sum exceeds the diagram."""
        bad = []
        rows: dict[tuple[int, int], int] = {}
        cols: dict[tuple[int, int], int] = {}
        for k, c in self._v.items():
            rows[k[:2]] = rows.get(k[:2], 0) + c
            cols[k[2:]] = cols.get(k[2:], 0) + c
        for k, s in sorted(rows.items()):
            if s > dV[k]:
                bad.append(f"row {IntervalKey(*k)}: {s} > {dV[k]}")
        for k, s in sorted(cols.items()):
            if s > dU[k]:
                bad.append(f"column {IntervalKey(*k)}: {s} > {dU[k]}")
        return bad

    def __repr__(self) -> str:
        return f"Matching(n={self.n}, {dict(self.items())})"


# -- chi --------------------------------------------------------------------


def _pushed_preimage(alpha: LadderMorphism, a2: int, b2: int, b: int) -> Subspace:
    """``f^V_{b2,b}(alpha_{b2}^{-1}(S^U_{a2,b2}))``; ``a2 == 0`` gives the pushed kernel."""
    key = ("T", a2, b2, b)
    hit = alpha._cache.get(key)
    if hit is None:
        A = alpha.components[b2 - 1]
        if a2 == 0:
            pre = kernel(A)
        else:
            pre = preimage(A, persist_subspace(alpha.target, a2, b2))
        hit = apply(composite(alpha.source, b2, b), pre)
        alpha._cache[key] = hit
    return hit


def chi(alpha: LadderMorphism, a: int, b: int, a2: int, b2: int) -> int:
    """``dim[S^V_{a,b} & f_{b2,b} alpha_{b2}^{-1}(S^U_{a2,b2})] - dim[S^V_{a,b} & f_{b2,b} ker alpha_{b2}]``.

    Zero unless ``1 <= a <= b <= n`` and ``1 <= a2 <= b2 <= b``.
    """
    n = alpha.n
    if not (1 <= a <= b <= n and 1 <= a2 <= b2 <= b):
        return 0
    key = ("X", a, b, a2, b2)
    hit = alpha._cache.get(key)
    if hit is not None:
        return hit
    S = persist_subspace(alpha.source, a, b)
    if S.is_zero():
        val = 0
    else:
        val = intersect(S, _pushed_preimage(alpha, a2, b2, b)).dim - intersect(
            S, _pushed_preimage(alpha, 0, b2, b)
        ).dim
    alpha._cache[key] = val
    return val


def elder(F: Callable[..., int], axes: Sequence[int]) -> Callable[..., int]:
    """Finite difference of ``F`` along each 1-based argument position in ``axes``.

    ``elder(F, [i])(x) = F(x) - F(x with x_i decreased by 1)``; several axes
    compose, giving an inclusion-exclusion sum of ``2**len(axes)`` terms.
    """
    positions = [i - 1 for i in axes]
    if len(set(positions)) != len(positions):
        raise ValueError("repeated axis in elder operator")

    def diff(*x: int) -> int:
        total = 0
        for shifts in itertools.product((0, 1), repeat=len(positions)):
            y = list(x)
            for pos, s in zip(positions, shifts):
                y[pos] -= s
            term = F(*y)
            total += -term if sum(shifts) % 2 else term
        return total

    return diff


def induced_matching(alpha: LadderMorphism) -> Matching:
    """Matching obtained by differencing ``chi`` in both birth indices."""
    _require_valid(alpha)
    key = ("M",)
    hit = alpha._cache.get(key)
    if hit is not None:
        return hit
    n = alpha.n
    m = elder(lambda a, b, a2, b2: chi(alpha, a, b, a2, b2), (1, 3))
    keys = [(a, b) for b in range(1, n + 1) for a in range(1, b + 1)]
    values = {}
    for a, b in keys:
        for a2, b2 in keys:
            c = m(a, b, a2, b2)
            if c:
                values[(a, b, a2, b2)] = c
    out = Matching(n, values)
    alpha._cache[key] = out
    return out


# -- ladder notation ---------------------------------------------------------

# The two non-0/1 tau_2 patterns with their conventional maps: (U, V, alpha).
# Both split over the ff orientation: an automorphism of the 2-dimensional
# middle space moves [1 1] onto a coordinate axis.
INDECOMPOSABLE_TAU2 = {
    "1 2 1 / 0 1 1": (
        ([1, 2, 1], [[[1], [0]], [[0, 1]]]),
        ([0, 1, 1], [[], [[1]]]),
        [[], [[1], [1]], [[1]]],
    ),
    "1 1 0 / 1 2 1": (
        ([1, 1, 0], [[[1]], []]),
        ([1, 2, 1], [[[1], [0]], [[0, 1]]]),
        [[[1]], [[1, 1]], []],
    ),
}


def _normalize_pattern(pattern: str) -> str:
    top, bottom = pattern.split("/")
    return " ".join(top.split()) + " / " + " ".join(bottom.split())


def ladder_from_pattern(pattern: str, p: PrimeModulus | int = 2) -> LadderMorphism:
    """Ladder written as ``"top row / bottom row"`` dimension vectors.

    The top row is the target ``U`` and the bottom row the source ``V``.
    0/1 patterns of any length use identity maps wherever both ends are F
    and zero maps elsewhere; the two non-0/1 ``tau_2`` patterns take their
    maps from :data:`INDECOMPOSABLE_TAU2`.
    """
    fld = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
    norm = _normalize_pattern(pattern)
    if norm in INDECOMPOSABLE_TAU2:
        (udims, umaps), (vdims, vmaps), comps = INDECOMPOSABLE_TAU2[norm]
        U = PersistenceModule.build(udims, umaps, fld)
        V = PersistenceModule.build(vdims, vmaps, fld)
        alpha = LadderMorphism.build(V, U, comps)
    else:
        top, bottom = ([int(x) for x in row.split()] for row in norm.split("/"))
        if len(top) != len(bottom):
            raise ValueError(f"rows of {pattern!r} have different lengths")
        if any(x not in (0, 1) for x in top + bottom):
            raise ValueError(f"{pattern!r} is neither a 0/1 pattern nor a known indecomposable")

        def eye_or_zero(rows: int, cols: int) -> Matrix:
            return Matrix.identity(1, fld) if rows == cols == 1 else Matrix.zeros(rows, cols, fld)

        U = PersistenceModule(
            tuple(top), tuple(eye_or_zero(top[i + 1], top[i]) for i in range(len(top) - 1)), fld
        )
        V = PersistenceModule(
            tuple(bottom), tuple(eye_or_zero(bottom[i + 1], bottom[i]) for i in range(len(bottom) - 1)), fld
        )
        alpha = LadderMorphism(V, U, tuple(eye_or_zero(t, s) for t, s in zip(top, bottom)))
    _require_valid(alpha)
    return alpha


def source_target_diagrams(alpha: LadderMorphism) -> tuple[PersistenceDiagram, PersistenceDiagram]:
    return diagram(alpha.source), diagram(alpha.target)
