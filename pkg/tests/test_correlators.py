import itertools

import pytest

from lgmirror.exactnum import QQ, Q0, Q1
from lgmirror.mirror import StateSpace
from lgmirror.correlators import (CorrelatorEngine, ClassificationError,
                                  concave_sign)
from lgmirror.catalog import CATALOG

Q = QQ


def engine(text):
    return CorrelatorEngine(StateSpace(text))


def test_line_bundle_degrees_fermat():
    # 4-point (theta, theta, theta^{a-2}, theta_{J^{-1}}): deg L = -2
    for a in (3, 4, 5):
        eng = engine("x1^%d" % a)
        key = eng.fourpoint_key(1)
        degs = eng.line_degrees(eng.decoration(key))
        assert degs == [Q(-2)]


def test_line_bundle_degrees_chain22():
    eng = engine("x1^2*x2+x2^2")
    degs = eng.line_degrees(eng.decoration(eng.fourpoint_key(2)))
    assert degs == [Q(-1), Q(0)]


def test_three_point_metric_configuration():
    # <1_J, a, b> passes the selection rule exactly on inverse sectors
    eng = engine("x1^2*x2+x2^2")
    st = eng.state
    unit = st.unit
    for e1 in st.basis:
        for e2 in st.basis:
            key = (unit, e1.m, e2.m)
            inverse = all((a + b).denominator == 1
                          for a, b in zip(e1.gamma, e2.gamma))
            assert eng.selection_ok(eng.decoration(key)) == inverse


def test_nonvanishing_examples():
    eng = engine("x1^4")
    assert eng.nonvanishing(((1,), (1,), (2,), (2,)))
    assert not eng.nonvanishing(((1,), (1,), (1,), (2,)))   # integrality
    eng22 = engine("x1^2*x2+x2^2")
    unit = (0, 0)
    assert not eng22.nonvanishing((unit, (0, 1), (1, 0)))   # not inverse
    assert eng22.nonvanishing((unit, (1, 0), (0, 0)))


def test_boundary_decorations():
    # chain (2,2), F_2 decoration: v_+^{(2)} = (1/2, 0, 0)
    eng = engine("x1^2*x2+x2^2")
    graphs = eng.boundary_graphs(eng.decoration(eng.fourpoint_key(2)))
    assert [tp[1] for (_, tp) in zip(graphs, graphs)] is not None
    v_plus_2 = [tp[1] for _, tp in graphs]
    assert v_plus_2 == [Q(1, 2), Q(0), Q(0)]
    v_plus_1 = [tp[0] for _, tp in graphs]
    assert v_plus_1 == [Q(1, 4), Q(1, 2), Q(1, 2)]
    # loop (2,2): v_+ = (1/3, 1/3, 1/3) in both variables
    eng = engine("x1^2*x2+x2^2*x1")
    graphs = eng.boundary_graphs(eng.decoration(eng.fourpoint_key(2)))
    for j in range(2):
        vals = sorted({tp[j] for _, tp in graphs})
        assert vals in ([Q(1, 3)], [Q(1, 3), Q(2, 3)])
    # Fermat a=3: all three node decorations vanish
    eng = engine("x1^3")
    graphs = eng.boundary_graphs(eng.decoration(eng.fourpoint_key(1)))
    assert all(tp == (Q0,) for _, tp in graphs)


def test_chiodo_table5_values():
    # type (b): T = 1/(2a_1 - 1) twice
    for a1 in (3, 4, 5):
        eng = engine("x1^%d*x2+x2^2*x1" % a1)
        gam = eng.decoration(eng.fourpoint_key(2))
        assert eng.chiodo_T(0, gam) == Q(1, 2 * a1 - 1)
        assert eng.chiodo_T(1, gam) == Q(1, 2 * a1 - 1)
    # type (c)
    eng = engine("x1^2*x2+x2^2*x1")
    gam = eng.decoration(eng.fourpoint_key(2))
    assert eng.chiodo_T(0, gam) == Q(1, 3)
    assert eng.chiodo_T(1, gam) == Q(1, 3)
    # type (d): T_{n-1} = 1/(2 a_{n-1}), T_n = 0
    for a in (2, 3, 4):
        eng = engine("x1^%d*x2+x2^2" % a)
        gam = eng.decoration(eng.fourpoint_key(2))
        assert eng.chiodo_T(0, gam) == Q(1, 2 * a)
        assert eng.chiodo_T(1, gam) == Q0
    # type (a): closed forms in rho
    eng = engine("x1^2*x2+x2^2*x3+x3^2*x1")
    gam = eng.decoration(eng.fourpoint_key(3))
    sym = eng.sym
    assert eng.chiodo_T(1, gam) == -sym.weights[1] - 2 * sym.einv[1][2]
    assert eng.chiodo_T(2, gam) == -1 + 2 * sym.einv[2][2]


def test_chiodo_permutation_invariance():
    eng = engine("x1^3*x2+x2^2*x1")
    gammas = eng.decoration(eng.fourpoint_key(2))
    base = [eng.chiodo_T(j, gammas) for j in range(2)]
    for perm in itertools.permutations(range(4)):
        permuted = [gammas[i] for i in perm]
        assert [eng.chiodo_T(j, permuted) for j in range(2)] == base


def test_concave_sign_is_calibrated_once():
    assert concave_sign() in (Q1, -Q1)
    eng = engine("x1^3")
    gam = eng.decoration(eng.fourpoint_key(1))
    assert concave_sign() * eng.chiodo_T(0, gam) == Q(-1, 3)


def test_four_point_both_paths_catalog():
    for name, text in CATALOG:
        st = StateSpace(text)
        if len(st.poly.blocks) != 1:
            continue
        eng = CorrelatorEngine(st)
        for i in eng.fourpoint_indices():
            if not eng.fourpoint_state_check(i):
                assert text == "x1^2"
                with pytest.raises(ClassificationError):
                    eng.four_point_special(i)
                with pytest.raises(ClassificationError):
                    eng.four_point_via_chiodo(i)
                continue
            expected = -eng.sym.weights[i - 1]
            assert eng.four_point_special(i) == expected, (name, i)
            assert eng.four_point_via_chiodo(i) == expected, (name, i)


def test_four_point_loop_rotation():
    # F_1 of the loop (3,2) targets exponent 3: concave after rotation
    eng = engine("x1^3*x2+x2^2*x1")
    assert eng.four_point_via_chiodo(1) == Q(-1, 5)
    # F_2 targets exponent 2: nonconcave type (b)
    assert eng.four_point_via_chiodo(2) == Q(-2, 5)


def test_selection_audit_three_point():
    for name, text in CATALOG:
        st = StateSpace(text)
        if st.sym.group_order > 64:
            continue
        eng = CorrelatorEngine(st)
        vectors = [el.m for el in st.basis]
        for key in itertools.combinations_with_replacement(vectors, 3):
            if not eng.nonvanishing(key):
                assert st.three_point(*key) == 0, (name, key)


def test_decoration_product_constraint():
    for text in ["x1^4", "x1^2*x2+x2^2", "x1^3*x2+x2^2*x1"]:
        eng = engine(text)
        st = eng.state
        key = eng.fourpoint_key(eng.fourpoint_indices()[-1])
        gammas = eng.decoration(key)
        total = tuple(Q0 for _ in range(st.n))
        from lgmirror.weights import g_add
        for g in gammas:
            total = g_add(total, g)
        assert total == g_add(st.sym.J, st.sym.J)   # J^{2g-2+r} = J^2
