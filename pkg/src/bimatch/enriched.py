"""Enriched matchings for a span ``V --alpha--> W <--beta-- U``.

Each pair of intervals ``([a,b], [a2,b2])`` is assigned a barcode: the
intervals ``[c,d]`` of ``W`` along which the two persist together.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import ValidationError
from .ladder import LadderMorphism, Matching, validate
from .linalg import Matrix, Subspace, apply, image, intersect, kernel, restrict
from .persistence import (
    Barcode,
    IntervalKey,
    PersistenceModule,
    canonical_order,
    composite,
    diagram,
    persist_subspace,
)

__all__ = [
    "Span",
    "EnrichedMatching",
    "r_space",
    "l_space",
    "r_space_pushed",
    "l_space_pushed",
    "y_value",
    "enriched_matching",
    "k_module",
    "endpoint_counts",
    "k_endpoint_counts",
]


@dataclass(frozen=True)
class Span:
    """Two morphisms into a shared module ``W``."""

    alpha: LadderMorphism
    beta: LadderMorphism
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.alpha.target != self.beta.target:
            raise ValidationError("alpha and beta must share their target module", "W")
        for name, m in (("alpha", self.alpha), ("beta", self.beta)):
            bad = validate(m)
            if bad is not None:
                raise ValidationError(f"{name}: {bad}", (name, bad.square))

    @property
    def V(self) -> PersistenceModule:
        return self.alpha.source

    @property
    def U(self) -> PersistenceModule:
        return self.beta.source

    @property
    def W(self) -> PersistenceModule:
        return self.alpha.target

    @property
    def n(self) -> int:
        return self.W.n

    def swapped(self) -> Span:
        return Span(self.beta, self.alpha)


class EnrichedMatching(Mapping[tuple[int, int, int, int], Barcode]):
    """``(a, b, a2, b2) -> Barcode``; keys with empty barcodes are omitted."""

    def __init__(self, n: int, values: Mapping[tuple[int, int, int, int], Barcode] | None = None):
        self.n = n
        self._v = {tuple(k): bc for k, bc in (values or {}).items() if bc}

    def __getitem__(self, key) -> Barcode:
        return self._v.get(tuple(key), Barcode())

    def __iter__(self) -> Iterator[tuple[int, int, int, int]]:
        return iter(sorted(self._v, key=lambda k: canonical_order(k[:2]) + canonical_order(k[2:])))

    def __len__(self) -> int:
        return len(self._v)

    def cardinalities(self) -> Matching:
        """The plain matching ``#G(a, b, a2, b2)``."""
        return Matching(self.n, {k: bc.cardinality for k, bc in self._v.items()})

    def __repr__(self) -> str:
        return f"EnrichedMatching(n={self.n}, {{{', '.join(f'{k}: {self._v[k]}' for k in self)}}})"


def _half_space(mor: LadderMorphism, a: int, b: int, d: int) -> Subspace:
    """``mor_d(f_{a,d}(X_a) & ker f_{d,b+1})`` inside ``W_d``."""
    key = ("H", a, b, d)
    hit = mor._cache.get(key)
    if hit is None:
        X = mor.source
        part = intersect(image(composite(X, a, d)), kernel(composite(X, d, b + 1)))
        hit = apply(mor.components[d - 1], part)
        mor._cache[key] = hit
    return hit


def _side_space(span: Span, mor: LadderMorphism, a: int, b: int, c: int, d: int) -> Subspace:
    n = span.n
    if not (1 <= a <= d and 1 <= c <= d and d <= b <= n):
        return Subspace.zero(span.W.dim_at(d), span.W.field)
    S = persist_subspace(span.W, c, d)
    if S.is_zero():
        return S
    return intersect(_half_space(mor, a, b, d), S)


def r_space(span: Span, a: int, b: int, c: int, d: int) -> Subspace:
    """``alpha_d(f^V_{a,d}(V_a) & ker f^V_{d,b+1}) & S^W_{c,d}`` when ``a, c <= d <= b``, else 0."""
    return _side_space(span, span.alpha, a, b, c, d)


def l_space(span: Span, a2: int, b2: int, c: int, d: int) -> Subspace:
    """Same as :func:`r_space` with ``beta`` and ``U`` in place of ``alpha`` and ``V``."""
    return _side_space(span, span.beta, a2, b2, c, d)


def _pushed_side(span: Span, mor: LadderMorphism, a: int, b: int, c: int, d: int) -> Subspace:
    n = span.n
    if not (1 <= a <= d and 1 <= c <= d and d <= b <= n):
        return Subspace.zero(span.W.dim_at(d), span.W.field)
    X = mor.source
    pushed = apply(composite(span.W, a, d) @ mor.components[a - 1], kernel(composite(X, a, b + 1)))
    return intersect(pushed, persist_subspace(span.W, c, d))


def r_space_pushed(span: Span, a: int, b: int, c: int, d: int) -> Subspace:
    """``f^W_{a,d} alpha_a(ker f^V_{a,b+1}) & S^W_{c,d}``; agrees with :func:`r_space`."""
    return _pushed_side(span, span.alpha, a, b, c, d)


def l_space_pushed(span: Span, a2: int, b2: int, c: int, d: int) -> Subspace:
    return _pushed_side(span, span.beta, a2, b2, c, d)


def y_value(span: Span, a: int, b: int, a2: int, b2: int, c: int, d: int) -> int:
    """``dim(R(a,b,c,d) & L(a2,b2,c,d))``."""
    n = span.n
    if not (1 <= c <= d and 1 <= a <= d <= b <= n and 1 <= a2 <= d <= b2 <= n):
        return 0
    key = (a, b, a2, b2, c, d)
    hit = span._cache.get(key)
    if hit is None:
        R = r_space(span, a, b, c, d)
        hit = 0 if R.is_zero() else intersect(R, l_space(span, a2, b2, c, d)).dim
        span._cache[key] = hit
    return hit


_SHIFTS = [s for s in itertools.product((0, 1), repeat=5)]


def _e_value(span: Span, a: int, b: int, a2: int, b2: int, c: int, d: int) -> int:
    total = 0
    for s in _SHIFTS:
        term = y_value(span, a - s[0], b - s[1], a2 - s[2], b2 - s[3], c - s[4], d)
        if term:
            total += -term if sum(s) % 2 else term
    return total


def enriched_matching(span: Span) -> EnrichedMatching:
    """Barcode ``{([c,d], e_{c,d}) : e > 0}`` for every pair of intervals.

    ``e_{c,d}`` is the fivefold finite difference of ``y_value`` in
    ``a, b, a2, b2, c``.  Only right endpoints ``max(a, a2) <= d <= min(b, b2)``
    are kept: below that band the zero branch of ``R``/``L`` makes the
    difference in ``a`` (or ``a2``) pick up terms belonging to smaller births.
    """
    n = span.n
    keys = [(a, b) for b in range(1, n + 1) for a in range(1, b + 1)]
    out = {}
    for a, b in keys:
        for a2, b2 in keys:
            counts = {}
            for d in range(max(a, a2), min(b, b2) + 1):
                for c in range(1, d + 1):
                    e = _e_value(span, a, b, a2, b2, c, d)
                    if e > 0:
                        counts[(c, d)] = e
            if counts:
                out[(a, b, a2, b2)] = Barcode.from_counts(counts)
    return EnrichedMatching(n, out)


def k_module(span: Span) -> tuple[PersistenceModule, LadderMorphism]:
    """Common submodule ``K_i = alpha_i(V_i) & beta_i(U_i)`` of ``W`` and its inclusion."""
    W = span.W
    fld = W.field
    spaces = [
        intersect(image(A), image(B)) for A, B in zip(span.alpha.components, span.beta.components)
    ]
    maps = tuple(restrict(W.structure_map(i), spaces[i - 1], spaces[i]) for i in range(1, W.n))
    K = PersistenceModule(tuple(s.dim for s in spaces), maps, fld)
    incl = LadderMorphism(
        K, W, tuple(Matrix.from_columns(list(s.vectors), s.ambient_dim, fld) for s in spaces)
    )
    return K, incl


def endpoint_counts(g: EnrichedMatching, d: int) -> int:
    """Intervals ``[c, d]`` across all barcodes of ``g``, counted with multiplicity."""
    return sum(e for bc in g.values() for key, e in bc if key.b == d)


def k_endpoint_counts(k: PersistenceModule, d: int) -> int:
    """Intervals of ``k`` ending at ``d``, counted with multiplicity."""
    dk = diagram(k)
    return sum(dk[IntervalKey(c, d)] for c in range(1, d + 1))
