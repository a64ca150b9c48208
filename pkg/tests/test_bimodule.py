from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from segalhh.bimodule import (BimoduleMap, bimodule, check_free_tensor_iso, constant_bimodule, end_is_centre,
                              enumerate_bimodule_maps, extend_from_generators, free_bimodule, one_point, regular,
                              tensor_over_A, unit_iso_left, unit_iso_right)
from segalhh.errors import CheckFailed, StructuralError
from segalhh.monoid import corpus, cyclic, symmetric, trivial

small = st.sampled_from(["1", "C2", "C3", "C2xC2", "LZ2+1"])


def test_free_sizes():
    assert free_bimodule(cyclic(2), 1).size == 4
    assert free_bimodule(cyclic(2), 0).size == 0
    assert free_bimodule(symmetric(3), 2).size == 72


def test_free_generators():
    F = free_bimodule(cyclic(3), 2)
    assert F.generators.tolist() == [(0 * 2 + x) * 3 + 0 for x in range(2)]
    assert not F.violations()


def test_bad_action_rejected():
    A = cyclic(2)
    with pytest.raises(CheckFailed):
        bimodule(A, np.array([[0, 1], [0, 0]]), np.array([[0, 1], [1, 0]]))
    with pytest.raises(StructuralError):
        bimodule(A, np.array([[0, 1]]), np.array([[0, 1], [1, 0]]))


def test_adjunction_exhaustive():
    # maps F(X) -> A versus functions X -> A, for C2 and |X| = 2
    A = cyclic(2)
    F, R = free_bimodule(A, 2), regular(A)
    maps = enumerate_bimodule_maps(F, R)
    assert maps.complete
    assert len(maps.maps) == 2 ** 2
    restricted = {tuple(f[F.generators].tolist()) for f in maps.maps}
    assert restricted == set(product(range(2), repeat=2))
    for f in maps.maps:
        assert np.array_equal(extend_from_generators(F, R, f[F.generators]).mapping, f)


@given(small, st.integers(0, 2), st.integers(0, 2))
def test_tensor_count_matches_oracle(name, nx, ny):
    A = corpus()[name]
    FX, FY = free_bimodule(A, nx), free_bimodule(A, ny)
    T = tensor_over_A(FX, FY)
    expected = oracles.tensor_class_count(FX.right.tolist(), FX.right.tolist(), FY.left.tolist(), FY.right.tolist()) \
        if FX.size and FY.size else 0
    assert T.bimodule.size == expected == A.order ** 3 * nx * ny


def test_tensor_c2_points():
    T = tensor_over_A(free_bimodule(cyclic(2), 1), free_bimodule(cyclic(2), 1))
    assert T.labels.size == 16 and T.bimodule.size == 8


def test_tensor_one_point():
    A = cyclic(3)
    assert tensor_over_A(one_point(A), one_point(A)).bimodule.size == 1


def test_tensor_mismatched_monoids():
    with pytest.raises(StructuralError):
        tensor_over_A(regular(cyclic(2)), regular(cyclic(3)))


@pytest.mark.parametrize("name", sorted(corpus()))
def test_free_tensor_iso(name):
    A = corpus()[name]
    for nx, ny in [(1, 1), (1, 2), (2, 2)]:
        r = check_free_tensor_iso(A, nx, ny)
        assert r.ok and r.size == r.expected_size == A.order ** 3 * nx * ny


def test_free_tensor_iso_s3_size():
    assert check_free_tensor_iso(symmetric(3), 1, 1).size == 216


@pytest.mark.parametrize("name", sorted(corpus()))
def test_unit_isos(name):
    A = corpus()[name]
    for M in (regular(A), free_bimodule(A, 1), free_bimodule(A, 2)):
        assert unit_iso_left(M).ok
        assert unit_iso_right(M).ok


def test_unit_left_c2_point():
    r = unit_iso_left(free_bimodule(cyclic(2), 1))
    assert r.size == 4


@pytest.mark.parametrize("name", sorted(corpus()))
def test_end_matches_oracle(name):
    A = corpus()[name]
    homs = enumerate_bimodule_maps(regular(A), regular(A))
    got = sorted(tuple(f.tolist()) for f in homs.maps)
    if A.order <= 4:
        assert got == sorted(oracles.bimodule_endomorphisms(A.table.tolist()))
    assert len(got) == len(oracles.centre(A.table.tolist()))
    r = end_is_centre(A)
    assert r.ok


def test_bimodule_map_violations():
    A = cyclic(2)
    R = regular(A)
    assert not BimoduleMap(R, R, np.array([1, 0])).violations()
    P = free_bimodule(A, 1)
    assert BimoduleMap(P, R, np.zeros(4, dtype=np.int64)).violations()


def test_constant_bimodule():
    Z = constant_bimodule(regular(trivial()), 2)
    assert Z.underlying.sizes == (1, 1, 1)
    assert not Z.violations()
