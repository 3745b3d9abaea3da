"""Bauer-Lesnick matchings: factor through the image, then match ordered slices.

A morphism ``alpha = gamma o beta`` factors into a surjection ``beta`` onto
``im alpha`` and an injection ``gamma`` into the target.  ``lambda_beta``
matches intervals sharing a birth index, ``iota_gamma`` those sharing a death
index, and the BL-matching is ``iota_gamma o lambda_beta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import ValidationError
from .ladder import LadderMorphism, Matching, validate
from .linalg import Matrix, coordinates, image, restrict
from .persistence import (
    Barcode,
    IndexedInterval,
    PersistenceDiagram,
    PersistenceModule,
    barcode,
    diagram,
)

__all__ = [
    "IndexedInterval",
    "SetMatching",
    "image_module",
    "iota",
    "lambda_",
    "bl_matching",
]


@dataclass(frozen=True)
class SetMatching:
    """Partial bijection between two representation sets."""

    pairs: tuple[tuple[IndexedInterval, IndexedInterval], ...]

    def __post_init__(self):
        src = [x for x, _ in self.pairs]
        dst = [y for _, y in self.pairs]
        if len(set(src)) != len(src):
            raise ValidationError("an element is matched twice on the source side")
        if len(set(dst)) != len(dst):
            raise ValidationError("an element is matched twice on the target side")

    def __call__(self, x: IndexedInterval) -> IndexedInterval | None:
        return self.as_dict().get(x)

    def __iter__(self) -> Iterator[tuple[IndexedInterval, IndexedInterval]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def as_dict(self) -> dict[IndexedInterval, IndexedInterval]:
        return dict(self.pairs)

    @property
    def domain(self) -> frozenset[IndexedInterval]:
        return frozenset(x for x, _ in self.pairs)

    @property
    def image(self) -> frozenset[IndexedInterval]:
        return frozenset(y for _, y in self.pairs)

    def then(self, other: SetMatching) -> SetMatching:
        """``other o self``: apply ``self`` first."""
        nxt = other.as_dict()
        return SetMatching(tuple((x, nxt[y]) for x, y in self.pairs if y in nxt))

    def counts(self, n: int) -> Matching:
        """Collapse to multiplicities per pair of intervals."""
        out: dict[tuple[int, int, int, int], int] = {}
        for x, y in self.pairs:
            k = (x.key.a, x.key.b, y.key.a, y.key.b)
            out[k] = out.get(k, 0) + 1
        return Matching(n, out)


def image_module(alpha: LadderMorphism) -> tuple[PersistenceModule, LadderMorphism, LadderMorphism]:
    """``im alpha`` in canonical coordinates with the factorisation ``alpha = gamma o beta``."""
    bad = validate(alpha)
    if bad is not None:
        raise ValidationError(str(bad), bad.square)
    U = alpha.target
    fld = alpha.field
    spaces = [image(A) for A in alpha.components]
    maps = tuple(restrict(U.structure_map(i), spaces[i - 1], spaces[i]) for i in range(1, alpha.n))
    im = PersistenceModule(tuple(s.dim for s in spaces), maps, fld)
    beta_comps = tuple(
        Matrix.from_columns([coordinates(s, col) for col in A.columns()], s.dim, fld)
        for A, s in zip(alpha.components, spaces)
    )
    gamma_comps = tuple(Matrix.from_columns(list(s.vectors), s.ambient_dim, fld) for s in spaces)
    beta = LadderMorphism(alpha.source, im, beta_comps)
    gamma = LadderMorphism(im, U, gamma_comps)
    return im, beta, gamma


def _slices(bc: Barcode, by_death: bool) -> dict[int, list[IndexedInterval]]:
    """Representation set grouped by shared death (or birth), in matching order."""
    groups: dict[int, list[IndexedInterval]] = {}
    for x in bc.representation_set():
        groups.setdefault(x.key.b if by_death else x.key.a, []).append(x)
    for items in groups.values():
        if by_death:
            items.sort(key=lambda x: (x.key.a, x.copy))
        else:
            items.sort(key=lambda x: (-x.key.b, x.copy))
    return groups


def _slice_matching(src: Barcode, dst: Barcode, by_death: bool) -> SetMatching:
    a_groups = _slices(src, by_death)
    b_groups = _slices(dst, by_death)
    pairs = []
    for t in sorted(a_groups):
        pairs.extend(zip(a_groups[t], b_groups.get(t, [])))
    return SetMatching(tuple(pairs))


def iota(gamma: LadderMorphism, src: PersistenceDiagram | None = None, dst: PersistenceDiagram | None = None) -> SetMatching:
    """Matching induced by an injective morphism: pair the i-th intervals dying at each ``b``.

    Intervals with the same death are ordered by birth, then copy index.
    """
    if not gamma.is_injective():
        raise ValidationError("iota needs an injective morphism")
    src = diagram(gamma.source) if src is None else src
    dst = diagram(gamma.target) if dst is None else dst
    out = _slice_matching(barcode(src), barcode(dst), by_death=True)
    if len(out) != barcode(src).cardinality:
        raise ValidationError("injective morphism left a source interval unmatched")
    return out


def lambda_(beta: LadderMorphism, src: PersistenceDiagram | None = None, dst: PersistenceDiagram | None = None) -> SetMatching:
    """Matching induced by a surjective morphism: pair the i-th intervals born at each ``a``.

    Intervals with the same birth are ordered longest first, then copy index.
    """
    if not beta.is_surjective():
        raise ValidationError("lambda needs a surjective morphism")
    src = diagram(beta.source) if src is None else src
    dst = diagram(beta.target) if dst is None else dst
    out = _slice_matching(barcode(src), barcode(dst), by_death=False)
    if len(out) != barcode(dst).cardinality:
        raise ValidationError("surjective morphism left a target interval unmatched")
    return out


def bl_matching(alpha: LadderMorphism) -> tuple[SetMatching, Matching]:
    """BL-matching ``sigma = iota_gamma o lambda_beta`` and its multiplicities."""
    im, beta, gamma = image_module(alpha)
    d_im = diagram(im)
    lam = lambda_(beta, diagram(alpha.source), d_im)
    io = iota(gamma, d_im, diagram(alpha.target))
    sigma = lam.then(io)
    return sigma, sigma.counts(alpha.n)
