import itertools
import random

import pytest

from bimatch.bl import SetMatching, bl_matching, image_module, iota, lambda_
from bimatch.errors import ValidationError
from bimatch.ladder import LadderMorphism, identity_morphism, induced_matching, zero_morphism
from bimatch.linalg import Matrix, image, rank
from bimatch.persistence import (
    IndexedInterval,
    IntervalKey,
    PersistenceModule,
    barcode,
    diagram,
    interval_module,
)

from helpers import hom_basis, random_module, random_morphism
from test_ladder import ALT_ALPHA, example


def ii(a, b, c=1):
    return IndexedInterval(IntervalKey(a, b), c)


def pairs(s: SetMatching):
    return {(str(x), str(y)) for x, y in s}


def test_running_image():
    im, beta, gamma = image_module(example())
    assert dict(diagram(im).support()) == {(2, 3): 1, (2, 2): 1}
    assert beta.is_surjective() and gamma.is_injective()


def test_running_lambda_iota_sigma():
    alpha = example()
    im, beta, gamma = image_module(alpha)
    lam = lambda_(beta)
    assert lam(ii(2, 3, 1)) == ii(2, 3) and lam(ii(2, 3, 2)) == ii(2, 2) and lam(ii(2, 2)) is None
    io = iota(gamma)
    assert io(ii(2, 2)) == ii(1, 2) and io(ii(2, 3)) == ii(2, 3)
    sigma, m = bl_matching(alpha)
    assert sigma(ii(2, 3, 1)) == ii(2, 3)
    assert sigma(ii(2, 3, 2)) == ii(1, 2)
    assert sigma(ii(2, 2)) is None
    assert m == {(2, 3, 2, 3): 1, (2, 3, 1, 2): 1}


def test_alt_bl_unchanged_but_differs_from_induced():
    alpha = example(ALT_ALPHA)
    _, m = bl_matching(alpha)
    assert m == bl_matching(example())[1]
    assert m != induced_matching(alpha)


def test_running_bl_agrees_with_induced():
    assert bl_matching(example())[1] == induced_matching(example())


def test_interval_morphism_factorisation():
    # I[a,b] -> I[a2,b2] with a2 <= a <= b2 <= b has image I[a,b2]
    n = 4
    for a2, a, b2, b in itertools.product(range(1, n + 1), repeat=4):
        if not (a2 <= a <= b2 <= b):
            continue
        V, U = interval_module(a, b, n), interval_module(a2, b2, n)
        comps = [Matrix.identity(1, 2) if a <= i <= b2 else Matrix.zeros(U.dim_at(i), V.dim_at(i), 2) for i in range(1, n + 1)]
        alpha = LadderMorphism(V, U, tuple(comps))
        im, beta, gamma = image_module(alpha)
        assert dict(diagram(im).support()) == {(a, b2): 1}
        assert pairs(lambda_(beta)) == {(f"[{a},{b}]#1", f"[{a},{b2}]#1")}
        assert pairs(iota(gamma)) == {(f"[{a},{b2}]#1", f"[{a2},{b2}]#1")}


def test_identity_gives_identity_matching():
    rng = random.Random(3)
    for _ in range(20):
        v = random_module(rng, 4, 3)
        ident = identity_morphism(v)
        expected = {(str(x), str(x)) for x in barcode(diagram(v)).representation_set()}
        assert pairs(iota(ident)) == expected
        assert pairs(lambda_(ident)) == expected
        assert pairs(bl_matching(ident)[0]) == expected


def test_zero_morphism():
    rng = random.Random(4)
    for _ in range(10):
        v, u = random_module(rng, 3, 3), random_module(rng, 3, 3)
        sigma, m = bl_matching(zero_morphism(v, u))
        assert len(sigma) == 0 and len(m) == 0
        assert len(diagram(image_module(zero_morphism(v, u))[0])) == 0


def test_injective_alpha_keeps_diagram():
    rng = random.Random(5)
    for _ in range(10):
        v = random_module(rng, 4, 3)
        assert diagram(image_module(identity_morphism(v))[0]) == diagram(v)


def test_factorisation_and_bounds_on_random_morphisms():
    rng = random.Random(8)
    for _ in range(150):
        alpha = random_morphism(rng, 4, 3)
        im, beta, gamma = image_module(alpha)
        for A, B, G in zip(alpha.components, beta.components, gamma.components):
            assert G @ B == A
        assert beta.is_surjective() and gamma.is_injective()
        n_im = barcode(diagram(im)).cardinality
        lam = lambda_(beta)
        assert len(lam) == n_im
        assert len(iota(gamma)) == n_im
        _, m = bl_matching(alpha)
        assert m.bound_violations(diagram(alpha.source), diagram(alpha.target)) == []


def _random_automorphism(rng, V):
    basis = hom_basis(V, V)
    while True:
        comps = [Matrix.zeros(V.dim_at(i), V.dim_at(i), V.p) for i in range(1, V.n + 1)]
        for elt in basis:
            if rng.randrange(2):
                comps = [c + m for c, m in zip(comps, elt)]
        if all(rank(c) == c.nrows for c in comps):
            return LadderMorphism(V, V, tuple(comps))


def test_bl_depends_only_on_image():
    rng = random.Random(10)
    for _ in range(60):
        alpha = random_morphism(rng, 4, 3)
        phi = _random_automorphism(rng, alpha.source)
        other = LadderMorphism(alpha.source, alpha.target, tuple(A @ P for A, P in zip(alpha.components, phi.components)))
        assert [image(A) for A in other.components] == [image(A) for A in alpha.components]
        assert bl_matching(other)[1] == bl_matching(alpha)[1]


def test_iota_and_lambda_reject_wrong_kind():
    v = PersistenceModule.build([2], [])
    u = PersistenceModule.build([1], [])
    proj = LadderMorphism.build(v, u, [[[1, 0]]])
    incl = LadderMorphism.build(u, v, [[[1], [0]]])
    with pytest.raises(ValidationError):
        iota(proj)
    with pytest.raises(ValidationError):
        lambda_(incl)
    assert len(iota(incl)) == 1 and len(lambda_(proj)) == 1


def test_image_module_rejects_invalid_morphism():
    with pytest.raises(ValidationError):
        image_module(example([ALT_ALPHA[0], [[1, 0, 0], [0, 0, 0], [0, 0, 1]], ALT_ALPHA[2]]))


def test_set_matching_rejects_repeats():
    with pytest.raises(ValidationError):
        SetMatching(((ii(1, 2), ii(1, 2)), (ii(1, 2), ii(1, 3))))
    with pytest.raises(ValidationError):
        SetMatching(((ii(1, 2), ii(1, 3)), (ii(1, 2, 2), ii(1, 3))))


def test_set_matching_composition():
    s1 = SetMatching(((ii(1, 2), ii(1, 3)), (ii(2, 2), ii(2, 3))))
    s2 = SetMatching(((ii(1, 3), ii(1, 4)),))
    comp = s1.then(s2)
    assert pairs(comp) == {("[1,2]#1", "[1,4]#1")}
    assert comp.domain == {ii(1, 2)} and comp.image == {ii(1, 4)}
    assert comp.counts(4) == {(1, 2, 1, 4): 1}
