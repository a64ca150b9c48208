import numpy as np
import pytest

from oracles import sympy_factors
from segalhh.bar import (augmentation_equivalence, bar, contraction_violations, diagonal, find_homotopy,
                         lift_through_resolution, structure_violations, twisted_contraction)
from segalhh.bimodule import BimoduleMap, free_bimodule, free_decode, regular
from segalhh.chains import normalized_chains
from segalhh.errors import BudgetExceeded, StructuralError, TruncationError, Unsupported
from segalhh.monoid import corpus, cyclic, symmetric, trivial


def test_sizes_c2():
    R = bar(cyclic(2), regular(cyclic(2)), 2)
    assert R.sizes() == [8, 32, 128]
    assert diagonal(R).simplicial_set.sizes == (8, 32, 128)


def test_trivial_monoid():
    A = trivial()
    R = bar(A, free_bimodule(A, 3), 3)
    assert R.sizes() == [3, 3, 3, 3]
    assert augmentation_equivalence(R, 2).equivalent


def test_sizes_recursive(monoids):
    for A in monoids.values():
        if A.order > 4:
            continue
        R = bar(A, N=2)
        q = A.order
        assert R.sizes() == [q ** 3, q ** 5, q ** 7]


def test_augmentation_coequalizes():
    R = bar(cyclic(2), N=2)
    eps = R.augmentation
    assert R.levels[1].size == 32
    assert np.array_equal(eps[R.aug_faces[1][0]], eps[R.aug_faces[1][1]])


def test_golden_faces_c2():
    # element (1, (0, 1, 1), 0) of P_1; inner (0, 1, 1) has index 3 in P_0
    R = bar(cyclic(2), N=2)
    x = (1 * 8 + 3) * 2 + 0
    assert x == 22
    assert int(R.aug_faces[1][0][x]) == (1 * 2 + 1) * 2 + 1  # (1, 1, 1)
    assert int(R.aug_faces[1][1][x]) == (1 * 2 + 0) * 2 + 0  # (1, 0, 0)
    # s_0 (1, 1, 0) = (1, (0, 1, 0), 0)
    assert int(R.degeneracies[0][0][6]) == (1 * 8 + 2) * 2 + 0
    # the contraction h_0 (x) = (0, x, 0)
    assert int(R.contraction[1][6]) == (0 * 8 + 6) * 2 + 0


def test_golden_degeneracy_level1():
    # s_1 (u, x, v) = (u, s_0 x, v) and s_0 (u, x, v) = (u, (e, x, e), v)
    R = bar(cyclic(2), N=2)
    u, x, v = free_decode(2, 8, np.arange(32))
    assert np.array_equal(R.degeneracies[1][1], (u * 32 + R.degeneracies[0][0][x]) * 2 + v)
    assert np.array_equal(R.degeneracies[1][0], (u * 32 + R.levels[1].generators[x]) * 2 + v)


@pytest.mark.parametrize("name", ["1", "C2", "C3", "C4", "C2xC2", "LZ2+1"])
def test_structure_is_sound(name):
    A = corpus()[name]
    R = bar(A, N=2)
    assert structure_violations(R) == []
    for n, P in enumerate(R.levels):
        for f in R.aug_faces[n]:
            target = R.levels[n - 1] if n else R.target
            assert not BimoduleMap(P, target, f).violations()


def test_s3_level_one():
    R = bar(symmetric(3), N=1)
    assert R.sizes() == [216, 7776]
    assert not contraction_violations(R, R.contraction)


def test_contraction_is_not_equivariant():
    # the contraction is a map of sets: h(a . x) != a . h(x) in general
    R = bar(cyclic(2), N=1)
    P0, P1 = R.levels
    h = R.contraction[1]
    assert not np.array_equal(h[P0.left[1]], P1.left[1][h])


def test_augmentation_equivalence_examples():
    assert augmentation_equivalence(bar(cyclic(2), N=3), 2).equivalent
    assert augmentation_equivalence(bar(cyclic(3), N=2), 1).equivalent


def test_augmentation_degree_limit():
    with pytest.raises(TruncationError):
        augmentation_equivalence(bar(cyclic(2), N=2), 2)


def test_chains_match_sympy():
    X = diagonal(bar(cyclic(2), N=2)).simplicial_set
    C = normalized_chains(X)
    D1 = C.boundary(1).toarray().tolist()
    D2 = C.boundary(2).toarray().tolist()
    f1, f2 = sympy_factors(D1), sympy_factors(D2)
    # H_0 = Z^2 (two points of C2), H_1 = 0
    assert C.ranks[0] - len(f1) == 2
    assert C.ranks[1] - len(f1) - len(f2) == 0
    assert all(x == 1 for x in f1 + f2)


def test_budget():
    with pytest.raises(BudgetExceeded) as exc:
        bar(cyclic(4), N=4)
    assert exc.value.required > 2_000_000


def test_other_monoid_rejected():
    with pytest.raises(StructuralError):
        bar(cyclic(2), regular(cyclic(3)), 1)


def test_lift_of_augmentation_is_identity():
    R = bar(cyclic(2), N=2)
    F = lift_through_resolution(R.augmentation, R, R)
    for n, c in enumerate(F.components):
        assert np.array_equal(c, np.arange(R.levels[n].size))


def test_lift_is_equivariant_lz():
    A = corpus()["LZ2+1"]
    R = bar(A, N=2)
    f0 = R.augmentation  # the centre is trivial, so this is the only map
    F = lift_through_resolution(f0, R, R)
    assert np.array_equal(R.augmentation[F.components[0]], f0)
    for n in range(3):
        assert not BimoduleMap(R.levels[n], R.levels[n], F.components[n]).violations()


def test_lift_of_central_map():
    A = cyclic(3)
    R = bar(A, N=2)
    f0 = A.table[1][R.augmentation]  # multiplication by the central element 1
    F = lift_through_resolution(f0, R, R)
    assert np.array_equal(R.augmentation[F.components[0]], f0)


def test_two_lifts_are_homotopic():
    A = cyclic(2)
    R = bar(A, N=2)
    F1 = lift_through_resolution(R.augmentation, R, R)
    h2 = twisted_contraction(R, 1, 1)
    assert not contraction_violations(R, h2)
    F2 = lift_through_resolution(R.augmentation, R, R, contraction=h2)
    assert not np.array_equal(F1.components[0], F2.components[0])
    H = find_homotopy(F1, F2)
    assert H is not None
    gens = R.levels[1].generators
    assert np.array_equal(R.aug_faces[1][0][H], F2.components[0][R.aug_faces[1][0][gens]])
    assert np.array_equal(R.aug_faces[1][1][H], F1.components[0][R.aug_faces[1][1][gens]])


def test_twisted_contraction_needs_units():
    with pytest.raises(StructuralError):
        twisted_contraction(bar(corpus()["LZ2+1"], N=1), 1, 0)


def test_lift_errors():
    R1, R2 = bar(cyclic(2), N=1), bar(cyclic(2), N=2)
    with pytest.raises(TruncationError):
        lift_through_resolution(R2.augmentation, R2, R1)
    with pytest.raises(Unsupported):
        lift_through_resolution(R1.augmentation, diagonal(R1).bimodule, R1)
    with pytest.raises(Unsupported):
        diagonal(diagonal(R1).bimodule)
