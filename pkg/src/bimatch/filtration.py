"""Simplicial filtrations, their homology modules, and union filtrations.

Chains of a filtration live in one global coordinate system: the ``k``-simplices
of the final complex, sorted by ``(entry time, vertices)``.  The complex at step
``i`` uses the coordinates of the simplices present by then, so inclusions act
as the identity on coordinates.

For each step the homology basis is canonical: cycles are reduced modulo the
boundary space (kept in reduced row-echelon form) and the resulting normal
forms are put in reduced row-echelon form.  Induced maps push these
representatives forward, reduce modulo the target boundaries and read off
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .enriched import Span
from .errors import ValidationError
from .ladder import LadderMorphism, validate
from .linalg import Matrix, PrimeModulus, Subspace, coordinates, kernel
from .persistence import PersistenceModule

__all__ = [
    "SimplicialFiltration",
    "PartialSimplicialMap",
    "homology_module",
    "induced_morphism",
    "union_filtration",
    "span_from_filtrations",
]

Simplex = tuple[int, ...]


def _faces(s: Simplex) -> list[Simplex]:
    return [s[:i] + s[i + 1:] for i in range(len(s))] if len(s) > 1 else []


@dataclass(frozen=True)
class SimplicialFiltration:
    """Nested simplicial complexes ``K_1 <= ... <= K_n``.

    ``simplices`` maps each simplex (sorted vertex tuple) to its entry time.
    """

    n: int
    simplices: Mapping[Simplex, int]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"filtration length must be a positive integer, got {self.n!r}", "n")
        clean = {}
        for s, t in self.simplices.items():
            s = tuple(s)
            if not s:
                raise ValidationError("empty simplex", s)
            if any(not isinstance(v, int) or v < 0 for v in s):
                raise ValidationError(f"simplex {list(s)}: vertices must be non-negative integers", s)
            if list(s) != sorted(set(s)):
                raise ValidationError(f"simplex {list(s)}: vertices must be sorted and distinct", s)
            if not isinstance(t, int) or not 1 <= t <= self.n:
                raise ValidationError(f"simplex {list(s)}: entry time {t!r} outside 1..{self.n}", s)
            clean[s] = t
        for s, t in clean.items():
            for f in _faces(s):
                if f not in clean:
                    raise ValidationError(f"simplex {list(s)} is missing its face {list(f)}", s)
                if clean[f] > t:
                    raise ValidationError(
                        f"simplex {list(s)} enters at {t} before its face {list(f)} (at {clean[f]})", s
                    )
        object.__setattr__(self, "simplices", dict(sorted(clean.items(), key=lambda kv: (kv[1], len(kv[0]), kv[0]))))

    @classmethod
    def from_list(cls, n: int, simplices: Iterable[tuple[Sequence[int], int]]) -> SimplicialFiltration:
        """Build from ``(vertices, time)`` pairs; repeated simplices are rejected."""
        out: dict[Simplex, int] = {}
        for verts, t in simplices:
            s = tuple(verts)
            if s in out:
                raise ValidationError(f"simplex {list(s)} listed twice", s)
            out[s] = t
        return cls(n, out)

    @property
    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self.simplices if len(s) == 1)

    def at(self, i: int) -> list[Simplex]:
        """Simplices present at step ``i``."""
        return [s for s, t in self.simplices.items() if t <= i]

    def k_simplices(self, k: int) -> list[Simplex]:
        """All ``k``-simplices in global coordinate order."""
        return [s for s, t in sorted(self.simplices.items(), key=lambda kv: (kv[1], kv[0])) if len(s) == k + 1]


def _perm_sign(seq: Sequence[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class _Chains:
    """Global chain coordinates and per-step cycle/boundary data in degree ``k``."""

    def __init__(self, flt: SimplicialFiltration, k: int, fld: PrimeModulus):
        self.flt, self.k, self.fld = flt, k, fld
        self.cells = flt.k_simplices(k)
        self.index = {s: i for i, s in enumerate(self.cells)}
        lower = flt.k_simplices(k - 1) if k > 0 else []
        lower_idx = {s: i for i, s in enumerate(lower)}
        upper = flt.k_simplices(k + 1)
        p = fld.p
        m = len(self.cells)
        self.boundaries: list[Subspace] = []
        self.spaces: list[Subspace] = []
        for i in range(1, flt.n + 1):
            live = [j for j, s in enumerate(self.cells) if flt.simplices[s] <= i]
            # cycles: kernel of the boundary restricted to live k-simplices
            if k > 0 and live:
                rows = [[0] * len(live) for _ in lower]
                for c, j in enumerate(live):
                    s = self.cells[j]
                    for r, f in enumerate(_faces(s)):
                        rows[lower_idx[f]][c] = (-1) ** r % p
                z_local = kernel(Matrix.from_rows(rows, fld, ncols=len(live)))
                cycles = [self._lift(v, live, m) for v in z_local.vectors]
            else:
                cycles = [[int(j == t) for t in range(m)] for j in live]
            bvecs = []
            for s in upper:
                if flt.simplices[s] <= i:
                    v = [0] * m
                    for r, f in enumerate(_faces(s)):
                        v[self.index[f]] = (-1) ** r % p
                    bvecs.append(v)
            B = Subspace.span(bvecs, m, fld)
            self.boundaries.append(B)
            self.spaces.append(Subspace.span([B.reduce(z) for z in cycles], m, fld))

    @staticmethod
    def _lift(v: Sequence[int], live: Sequence[int], m: int) -> list[int]:
        out = [0] * m
        for x, j in zip(v, live):
            out[j] = x
        return out

    def classes(self, i: int) -> Subspace:
        """Canonical normal-form representatives of ``H_k`` at step ``i``."""
        return self.spaces[i - 1]

    def reduce_to(self, i: int, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of cycle ``v`` in the step-``i`` basis."""
        return coordinates(self.spaces[i - 1], self.boundaries[i - 1].reduce(v))


def _chains(flt: SimplicialFiltration, k: int, fld: PrimeModulus) -> _Chains:
    key = ("chains", k, fld.p)
    hit = flt._cache.get(key)
    if hit is None:
        hit = _Chains(flt, k, fld)
        flt._cache[key] = hit
    return hit


def homology_module(flt: SimplicialFiltration, k: int = 0, p: PrimeModulus | int = 2) -> PersistenceModule:
    """``H_k`` of each step with ``F_p`` coefficients and the inclusion-induced maps."""
    if k < 0:
        raise ValidationError(f"homology degree must be non-negative, got {k}", "k")
    fld = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
    key = ("H", k, fld.p)
    hit = flt._cache.get(key)
    if hit is not None:
        return hit
    ch = _chains(flt, k, fld)
    dims = tuple(ch.classes(i).dim for i in range(1, flt.n + 1))
    maps = []
    for i in range(1, flt.n):
        cols = [ch.reduce_to(i + 1, q) for q in ch.classes(i).vectors]
        maps.append(Matrix.from_columns(cols, dims[i], fld))
    out = PersistenceModule(dims, tuple(maps), fld)
    flt._cache[key] = out
    return out


def _check_simplicial(src: SimplicialFiltration, dst: SimplicialFiltration, vmap: Mapping[int, int]) -> None:
    for v in src.vertices:
        if v not in vmap:
            raise ValidationError(f"vertex map is undefined on vertex {v}", v)
    for s, t in src.simplices.items():
        img = tuple(sorted({vmap[v] for v in s}))
        if img not in dst.simplices:
            raise ValidationError(f"simplex {list(s)} maps to {list(img)}, which is not a simplex of the target", s)
        if dst.simplices[img] > t:
            raise ValidationError(
                f"simplex {list(s)} enters at {t} but its image {list(img)} only at {dst.simplices[img]}", s
            )


def _chain_image(s: Simplex, vmap: Mapping[int, int], dst: _Chains, p: int) -> list[int]:
    out = [0] * len(dst.cells)
    img = [vmap[v] for v in s]
    if len(set(img)) == len(img):
        out[dst.index[tuple(sorted(img))]] = _perm_sign(img) % p
    return out


def induced_morphism(
    src: SimplicialFiltration,
    dst: SimplicialFiltration,
    vertex_map: Mapping[int, int],
    k: int = 0,
    p: PrimeModulus | int = 2,
) -> LadderMorphism:
    """Morphism ``H_k(src) -> H_k(dst)`` induced by a level-preserving simplicial vertex map."""
    if src.n != dst.n:
        raise ValidationError(f"filtrations have different lengths {src.n} and {dst.n}", "n")
    _check_simplicial(src, dst, vertex_map)
    fld = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
    V, U = homology_module(src, k, fld), homology_module(dst, k, fld)
    cs, cd = _chains(src, k, fld), _chains(dst, k, fld)
    images = [_chain_image(s, vertex_map, cd, fld.p) for s in cs.cells]
    comps = []
    for i in range(1, src.n + 1):
        cols = []
        for q in cs.classes(i).vectors:
            v = [0] * len(cd.cells)
            for j, x in enumerate(q):
                if x:
                    for t, y in enumerate(images[j]):
                        if y:
                            v[t] = (v[t] + x * y) % fld.p
            cols.append(cd.reduce_to(i, v))
        comps.append(Matrix.from_columns(cols, U.dim_at(i), fld))
    out = LadderMorphism(V, U, tuple(comps))
    bad = validate(out)
    if bad is not None:  # cannot happen for a genuine chain map
        raise ValidationError(f"induced morphism fails to commute: {bad}", bad.square)
    return out


@dataclass(frozen=True)
class PartialSimplicialMap:
    """Injective vertex map from part of one filtration's vertex set into another's."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        src = [a for a, _ in pairs]
        dst = [b for _, b in pairs]
        if len(set(src)) != len(src):
            raise ValidationError("partial map sends a vertex to two targets", "pairs")
        if len(set(dst)) != len(dst):
            raise ValidationError("partial map is not injective", "pairs")
        object.__setattr__(self, "pairs", pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def check(self, src: SimplicialFiltration, dst: SimplicialFiltration) -> None:
        sv, dv = set(src.vertices), set(dst.vertices)
        for a, b in self.pairs:
            if a not in sv:
                raise ValidationError(f"partial map domain vertex {a} is not in the source filtration", a)
            if b not in dv:
                raise ValidationError(f"partial map target vertex {b} is not in the target filtration", b)


def union_filtration(
    fK: SimplicialFiltration, fL: SimplicialFiltration, mu: PartialSimplicialMap
) -> tuple[SimplicialFiltration, dict[int, int], dict[int, int]]:
    """Glue ``fK`` to ``fL`` along ``mu``.

    ``L`` keeps its labels, vertices of ``K`` in the domain of ``mu`` take their
    image's label and the rest get fresh labels in increasing order.  A simplex
    reached from both sides enters at the earlier of the two times.

    Returns the union and the two inclusions as vertex maps.
    """
    if fK.n != fL.n:
        raise ValidationError(f"filtrations have different lengths {fK.n} and {fL.n}", "n")
    mu.check(fK, fL)
    m = mu.as_dict()
    nxt = max(fL.vertices + list(m.values()), default=-1) + 1
    inclK: dict[int, int] = {}
    for v in fK.vertices:
        if v in m:
            inclK[v] = m[v]
        else:
            inclK[v] = nxt
            nxt += 1
    inclL = {v: v for v in fL.vertices}
    times: dict[Simplex, int] = dict(fL.simplices)
    for s, t in fK.simplices.items():
        img = tuple(sorted(inclK[v] for v in s))
        times[img] = min(t, times.get(img, t))
    return SimplicialFiltration(fK.n, times), inclK, inclL


def span_from_filtrations(
    fK: SimplicialFiltration,
    fL: SimplicialFiltration,
    mu: PartialSimplicialMap,
    k: int = 0,
    p: PrimeModulus | int = 2,
) -> Span:
    """``H_k(K) -> H_k(K u_mu L) <- H_k(L)``."""
    union, inclK, inclL = union_filtration(fK, fL, mu)
    return Span(induced_morphism(fK, union, inclK, k, p), induced_morphism(fL, union, inclL, k, p))
