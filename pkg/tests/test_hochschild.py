import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from segalhh.bar import bar
from segalhh.errors import BudgetExceeded, StructuralError, TruncationError
from segalhh.hochschild import (centre_comparison, composition_product, context, cross_check, eckmann_hilton_report,
                                evaluate, hh_pi0, mapping_space, solve_csp, tensor_product_pi0)
from segalhh.bimodule import free_bimodule
from segalhh.monoid import corpus, cyclic, relabel, symmetric, trivial

small = ["1", "C2", "C3", "C4", "C2xC2", "LZ2+1"]


@pytest.mark.parametrize("name", small)
def test_map0_matches_oracle(name):
    A = corpus()[name]
    space = mapping_space(bar(A, N=1))
    expected = oracles.mapping_space_points(A.table.tolist())
    assert sorted(g for (g,) in space.levels[0]) == sorted(expected)
    assert space.complete


def test_trivial_is_a_point():
    h = hh_pi0(trivial(), 3)
    assert h.sizes == [1, 1, 1, 1] and h.count == 1 and h.ok


def test_c2_map0():
    ctx = context(cyclic(2), 2)
    assert len(ctx.space.levels[0]) == 2
    assert ctx.unit == ctx.space.index(0, ((0, 1),))


def test_simplicial_set_clean():
    ctx = context(cyclic(3), 3)
    X = ctx.space.simplicial_set
    assert X.sizes == (3, 3, 3, 3)
    assert ctx.components.count == 3


@pytest.mark.parametrize("name", small)
def test_hh_pi0_examples(name):
    A = corpus()[name]
    h = hh_pi0(A, 3)
    assert h.ok, h.checks
    assert h.count == len(oracles.centre(A.table.tolist()))
    assert h.compose_table == h.tensor_table


def test_hh_c4_table():
    h = hh_pi0(cyclic(4), 3)
    assert h.compose_table == [[(i + j) % 4 for j in range(4)] for i in range(4)]


def test_hh_s3_low_truncation():
    h = hh_pi0(symmetric(3), 1)
    assert h.count == 1 and h.ok


def test_unit_law():
    ctx = context(cyclic(3), 2)
    for k in range(3):
        assert composition_product(ctx, ctx.unit, k) == k
        assert composition_product(ctx, k, ctx.unit) == k


def test_identity_tensor_identity():
    ctx = context(cyclic(2), 2)
    u = int(ctx.components.labels[ctx.unit])
    assert tensor_product_pi0(ctx, ctx.unit, ctx.unit) == u


@settings(max_examples=10)
@given(st.permutations(range(3)))
def test_representative_independence(perm):
    # relabelling A changes indices but not the product up to evaluation
    A = relabel(cyclic(3), list(perm))
    h = hh_pi0(A, 2)
    comp = centre_comparison(A, 2, hh=h)
    assert comp.ok
    ev = comp.evaluation
    for i in range(3):
        for j in range(3):
            assert ev[h.compose_table[i][j]] == A.table[ev[i], ev[j]]


@pytest.mark.parametrize("name", ["C4", "C2xC2", "LZ2+1"])
def test_centre_comparison(name):
    A = corpus()[name]
    r = centre_comparison(A, 3)
    assert r.ok, r.checks
    assert sorted(r.evaluation) == r.centre == oracles.centre(A.table.tolist())


def test_centre_comparison_s3():
    r = centre_comparison(symmetric(3), 1)
    assert r.ok and r.evaluation == [0] and r.centre == [0]


def test_pointwise_central():
    A = corpus()["C2xC2"]
    ctx = context(A, 2)
    for k in range(len(ctx.space.levels[0])):
        z = evaluate(ctx, k)
        assert np.array_equal(A.table[z], A.table[:, z])


@pytest.mark.parametrize("name", ["C2", "C3", "LZ2+1"])
def test_eckmann_hilton(name):
    r = eckmann_hilton_report(corpus()[name], 3)
    assert r.ok and r.tables_equal and r.commutative


@pytest.mark.parametrize("name", small)
def test_cross_check(name):
    r = cross_check(corpus()[name], 2)
    assert r.ok, r.reasons
    assert r.direct == r.derived


def test_cross_check_catches_bad_composition(monkeypatch):
    import segalhh.hochschild as hh
    real = hh.composition_product

    def skewed(ctx, f, g):
        k = real(ctx, f, g)
        return (k + 1) % len(ctx.space.levels[0]) if f != ctx.unit and g != ctx.unit else k

    monkeypatch.setattr(hh, "composition_product", skewed)
    r = cross_check(cyclic(3), 2)
    assert not r.ok


def test_bad_budget():
    with pytest.raises(BudgetExceeded):
        context(cyclic(4), 2, budget=3)


def test_mapping_space_needs_degree_one():
    with pytest.raises(TruncationError):
        mapping_space(bar(cyclic(2), N=0))


def test_mapping_space_needs_regular_target():
    with pytest.raises(StructuralError):
        mapping_space(bar(cyclic(2), free_bimodule(cyclic(2), 2), 1))


def test_composition_rejects_non_point():
    ctx = context(cyclic(2), 1)
    with pytest.raises(StructuralError):
        composition_product(ctx, 5, 0)


def test_solve_csp_small():
    # two variables over {0, 1}, not equal
    dom = np.ones((2, 2), dtype=bool)
    bin_ = np.ones((2, 2, 2, 2), dtype=bool)
    ne = ~np.eye(2, dtype=bool)
    bin_[0, 1], bin_[1, 0] = ne, ne
    sols, complete, _ = solve_csp(dom, bin_, 100)
    assert complete and sorted(map(tuple, sols)) == [(0, 1), (1, 0)]
    dom[0, 1] = dom[1, 1] = False
    sols, complete, _ = solve_csp(dom, bin_, 100)
    assert complete and list(sols) == []
