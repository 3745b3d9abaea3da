"""Random generators shared by the test suites."""

from __future__ import annotations

import itertools
import random

from bimatch.enriched import Span
from bimatch.ladder import LadderMorphism
from bimatch.linalg import Matrix, PrimeModulus, kernel
from bimatch.persistence import PersistenceModule


def random_matrix(rng: random.Random, nrows: int, ncols: int, p: int = 2) -> Matrix:
    return Matrix.from_rows([[rng.randrange(p) for _ in range(ncols)] for _ in range(nrows)], p, ncols=ncols)


def random_module(rng: random.Random, n: int, max_dim: int, p: int = 2) -> PersistenceModule:
    dims = [rng.randint(0, max_dim) for _ in range(n)]
    maps = [random_matrix(rng, dims[i + 1], dims[i], p) for i in range(n - 1)]
    return PersistenceModule(tuple(dims), tuple(maps), PrimeModulus(p))


def hom_basis(V: PersistenceModule, U: PersistenceModule) -> list[tuple[Matrix, ...]]:
    """Basis of the space of morphisms ``V -> U``, found as a kernel of the commutativity equations."""
    n, p = V.n, V.p
    offsets, total = [], 0
    for i in range(1, n + 1):
        offsets.append(total)
        total += U.dim_at(i) * V.dim_at(i)

    def var(i, r, c):  # entry (r, c) of alpha_i
        return offsets[i - 1] + r * V.dim_at(i) + c

    rows = []
    for i in range(1, n):
        fV = V.structure_map(i).rows
        fU = U.structure_map(i).rows
        for r in range(U.dim_at(i + 1)):
            for c in range(V.dim_at(i)):
                eq = [0] * total
                for k in range(V.dim_at(i + 1)):
                    eq[var(i + 1, r, k)] = (eq[var(i + 1, r, k)] + fV[k][c]) % p
                for k in range(U.dim_at(i)):
                    eq[var(i, k, c)] = (eq[var(i, k, c)] - fU[r][k]) % p
                rows.append(eq)
    sol = kernel(Matrix.from_rows(rows, p, ncols=total)) if rows else None
    vecs = sol.vectors if sol is not None else [
        tuple(int(j == t) for j in range(total)) for t in range(total)
    ]
    out = []
    for v in vecs:
        comps = []
        for i in range(1, n + 1):
            o, nr, nc = offsets[i - 1], U.dim_at(i), V.dim_at(i)
            comps.append(Matrix.from_rows([list(v[o + r * nc: o + (r + 1) * nc]) for r in range(nr)], p, ncols=nc))
        out.append(tuple(comps))
    return out


def random_morphism_between(rng: random.Random, V: PersistenceModule, U: PersistenceModule) -> LadderMorphism:
    p = V.p
    comps = [Matrix.zeros(U.dim_at(i), V.dim_at(i), p) for i in range(1, V.n + 1)]
    for basis_elt in hom_basis(V, U):
        coeff = rng.randrange(p)
        if coeff:
            for i, m in enumerate(basis_elt):
                comps[i] = comps[i] + Matrix.from_rows([[coeff * x for x in row] for row in m.rows], p, ncols=m.ncols)
    return LadderMorphism(V, U, tuple(comps))


def random_morphism(rng: random.Random, max_n: int = 5, max_dim: int = 4, p: int = 2) -> LadderMorphism:
    n = rng.randint(1, max_n)
    return random_morphism_between(rng, random_module(rng, n, max_dim, p), random_module(rng, n, max_dim, p))


def random_span(rng: random.Random, max_n: int = 4, max_dim: int = 3, p: int = 2) -> Span:
    n = rng.randint(1, max_n)
    W = random_module(rng, n, max_dim, p)
    V = random_module(rng, n, max_dim, p)
    U = random_module(rng, n, max_dim, p)
    return Span(random_morphism_between(rng, V, W), random_morphism_between(rng, U, W))


def random_filtration(rng: random.Random, max_simplices: int = 12, max_n: int = 4):
    """Closed random filtration: each simplex enters no earlier than its faces."""
    from bimatch.filtration import SimplicialFiltration

    n = rng.randint(1, max_n)
    nv = rng.randint(1, 5)
    times: dict[tuple[int, ...], int] = {(v,): rng.randint(1, n) for v in range(nv)}
    candidates = [e for e in itertools.combinations(range(nv), 2)] + [t for t in itertools.combinations(range(nv), 3)]
    rng.shuffle(candidates)
    candidates.sort(key=len)
    for s in candidates:
        if len(times) >= max_simplices:
            break
        faces = [s[:i] + s[i + 1:] for i in range(len(s))]
        if all(f in times for f in faces) and rng.random() < 0.6:
            times[s] = rng.randint(max(times[f] for f in faces), n)
    return SimplicialFiltration(n, times)
