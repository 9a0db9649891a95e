"""Representations: filtrations, gr, covers, resolutions, Ext, Koszulity.

Frozen values below were derived by hand from the right-module conventions
(arrow a: u -> v acts by a (dims[v] x dims[u]) matrix, paths act left to
right) before the implementation was run on them.  The two-vertex cycle
with b*a = 0 has P(1) uniserial with layers L1, L2, L1 and P(2) = [L2; L1];
the standard modules for the order 1 < 2 are Delta(1) = L(1) and
Delta(2) = P(2), and the costandard ones are Nabla(1) = L(1) and
Nabla(2) = P(1)/rad^2.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grkoszul.errors import InputFormatError, PreconditionError
from grkoszul.exactlin import QQ, FieldSpec, MatrixExact
from grkoszul.algebra_core import (
    QuiverPresentation,
    build_algebra,
    gr_algebra,
    opposite_algebra,
    subalgebra_from_generators,
)
from grkoszul.rep_homology import (
    _invertible_combination,
    _structure_table,
    direct_sum,
    dual_rep,
    ext1_bruteforce,
    ext_groups,
    ext_table,
    filtration_slice,
    gr_ext1_compare,
    gr_of_surjection,
    gr_rep,
    gr_sharp,
    grade_zero_graded,
    graded_hom_space,
    graded_is_isomorphic,
    graded_minimal_resolution,
    head_multiplicities,
    hom_space,
    is_isomorphic,
    koszul_check,
    layer_dims,
    make_representation,
    minimal_resolution,
    projective_cover,
    projective_rep,
    quotient_rep,
    radical_series,
    restrict_iso_check,
    simple_rep,
    socle_sub,
    sub_rep,
    zero_rep,
)

F2 = FieldSpec(2)


def two_vertex_cycle(field=QQ):
    return QuiverPresentation(
        field=field,
        vertices=["1", "2"],
        arrows=[("a", "1", "2"), ("b", "2", "1")],
        relations=[[(1, ("b", "a"))]],
    )


def truncated_polynomial(power, field=QQ):
    return QuiverPresentation(
        field=field,
        vertices=["1"],
        arrows=[("x", "1", "1")],
        relations=[[(1, ("x",) * power)]],
    )


@pytest.fixture(scope="module")
def cycle():
    return build_algebra(two_vertex_cycle())


@pytest.fixture(scope="module")
def cycle_mods(cycle):
    return {
        "P1": projective_rep(cycle, "1"),
        "P2": projective_rep(cycle, "2"),
        "L1": simple_rep(cycle, "1"),
        "L2": simple_rep(cycle, "2"),
    }


def nabla2(cycle, cycle_mods):
    """P(1)/rad^2: head L1, socle L2."""
    return filtration_slice(cycle_mods["P1"], 0, 2)


# -- construction and validation ------------------------------------------------------


def test_projective_layers_frozen(cycle_mods):
    p1, p2 = cycle_mods["P1"], cycle_mods["P2"]
    assert p1.dims == {"1": 2, "2": 1}
    assert layer_dims(p1) == [{"1": 1, "2": 0}, {"1": 0, "2": 1}, {"1": 1, "2": 0}]
    assert p2.dims == {"1": 1, "2": 1}
    assert layer_dims(p2) == [{"1": 0, "2": 1}, {"1": 1, "2": 0}]
    assert head_multiplicities(p1) == {"1": 1, "2": 0}


def test_make_representation_validates(cycle):
    good = projective_rep(cycle, "1")
    rebuilt = make_representation(cycle, good.dims, good.action)
    assert rebuilt.total_dim == 3
    with pytest.raises(InputFormatError):
        make_representation(cycle, {"1": 1}, {})
    bad_shape = dict(good.action)
    bad_shape["a"] = MatrixExact.zero(QQ, 2, 2)
    with pytest.raises(InputFormatError):
        make_representation(cycle, good.dims, bad_shape)
    # b then a must act by zero; make it not do so on a 1+1 dimensional module
    viol = {
        "a": MatrixExact(QQ, [[QQ.one]], 1),
        "b": MatrixExact(QQ, [[QQ.one]], 1),
    }
    with pytest.raises(InputFormatError):
        make_representation(cycle, {"1": 1, "2": 1}, viol)


def test_zero_and_simple(cycle):
    z = zero_rep(cycle)
    assert z.total_dim == 0
    assert layer_dims(z) == []
    l1 = simple_rep(cycle, "1")
    assert layer_dims(l1) == [{"1": 1, "2": 0}]
    with pytest.raises(InputFormatError):
        simple_rep(cycle, "7")


def test_submodule_closure_enforced(cycle_mods):
    p1 = cycle_mods["P1"]
    # the line through e_1 is not action-closed (e_1 . a = a)
    e1_row = p1.unit("1", 0)
    with pytest.raises(InputFormatError):
        sub_rep(p1, [e1_row])
    with pytest.raises(InputFormatError):
        quotient_rep(p1, [e1_row])


def test_filtration_slice_bounds(cycle_mods):
    p1 = cycle_mods["P1"]
    with pytest.raises(PreconditionError):
        filtration_slice(p1, 2, 1)
    with pytest.raises(PreconditionError):
        filtration_slice(p1, -1)
    rad = filtration_slice(p1, 1)
    assert layer_dims(rad) == [{"1": 0, "2": 1}, {"1": 1, "2": 0}]
    top = filtration_slice(p1, 0, 1)
    assert layer_dims(top) == [{"1": 1, "2": 0}]


def test_socle_of_uniserial(cycle_mods):
    p1 = cycle_mods["P1"]
    soc = socle_sub(p1, 1)
    assert soc.dims == {"1": 1, "2": 0}
    assert socle_sub(p1, 3).total_dim == 3


def test_direct_sum_and_dual(cycle, cycle_mods):
    p1, l2 = cycle_mods["P1"], cycle_mods["L2"]
    s = direct_sum(p1, l2)
    assert s.dims == {"1": 2, "2": 2}
    assert head_multiplicities(s) == {"1": 1, "2": 1}
    op, _, _ = opposite_algebra(cycle)
    d = dual_rep(p1, op)
    # P(1) is uniserial L1, L2, L1, self-dual as a layer pattern
    assert layer_dims(d) == [{"1": 1, "2": 0}, {"1": 0, "2": 1}, {"1": 1, "2": 0}]


# -- hom spaces and isomorphism --------------------------------------------------------


def test_hom_dims_match_path_spaces(cycle_mods):
    p1, p2 = cycle_mods["P1"], cycle_mods["P2"]
    # Hom(P(u), M) has the dimension of the u-block of M
    assert len(hom_space(p1, p1)) == 2
    assert len(hom_space(p1, p2)) == 1
    assert len(hom_space(p2, p1)) == 1
    assert len(hom_space(p2, p2)) == 1
    assert len(hom_space(cycle_mods["L1"], cycle_mods["L2"])) == 0


def test_uniserial_vs_semisimple_not_isomorphic(cycle, cycle_mods):
    uni = nabla2(cycle, cycle_mods)
    ss = direct_sum(cycle_mods["L1"], cycle_mods["L2"])
    ok, witness = is_isomorphic(uni, ss)
    assert not ok and witness is None


def test_isomorphism_finds_witness_across_basis_change(cycle, cycle_mods):
    p1 = cycle_mods["P1"]
    scaled = make_representation(
        cycle,
        p1.dims,
        {"a": p1.action["a"].scale(QQ.coerce(3)), "b": p1.action["b"]},
    )
    ok, witness = is_isomorphic(p1, scaled)
    assert ok
    for name in p1.action:
        lhs = witness.mul(p1.total_action(name))
        rhs = scaled.total_action(name).mul(witness)
        assert lhs == rhs


def test_semisimple_isomorphism_is_immediate(cycle_mods):
    l1, l2 = cycle_mods["L1"], cycle_mods["L2"]
    big_a = direct_sum(*([l1] * 4 + [l2] * 4))
    big_b = direct_sum(*([l2] * 4 + [l1] * 4))
    ok, witness = is_isomorphic(big_a, big_b)
    assert ok and witness is not None


def test_isomorphism_over_f2_enumerates_field(cycle_mods):
    alg2 = build_algebra(two_vertex_cycle(field=F2))
    pa = projective_rep(alg2, "1")
    pb = projective_rep(alg2, "1")
    ok, _ = is_isomorphic(pa, pb)
    assert ok


def test_invertible_combination_cap_and_completeness():
    e11 = MatrixExact(QQ, [[QQ.one, QQ.zero], [QQ.zero, QQ.zero]], 2)
    e12 = MatrixExact(QQ, [[QQ.zero, QQ.one], [QQ.zero, QQ.zero]], 2)
    # no invertible combination exists; the full grid proves it
    assert _invertible_combination(QQ, [e11, e12], 2) is None
    import grkoszul.rep_homology as rh

    old = rh.ISO_SEARCH_CAP
    rh.ISO_SEARCH_CAP = 2
    try:
        with pytest.raises(PreconditionError):
            _invertible_combination(QQ, [e11, e12], 2)
    finally:
        rh.ISO_SEARCH_CAP = old


# -- gr of modules ----------------------------------------------------------------------


def test_gr_of_projective_frozen(cycle, cycle_mods):
    graded = gr_algebra(cycle)
    g = gr_rep(cycle_mods["P1"], graded)
    assert g.grades == {"1": [0, 2], "2": [1]}
    assert g.piece_dims() == {
        0: {"1": 1, "2": 0},
        1: {"1": 0, "2": 1},
        2: {"1": 1, "2": 0},
    }
    back = make_representation(cycle, g.rep.dims, g.rep.action)
    ok, _ = is_isomorphic(cycle_mods["P1"], back)
    assert ok


def test_gr_of_semisimple_sits_in_grade_zero(cycle, cycle_mods):
    graded = gr_algebra(cycle)
    ss = direct_sum(cycle_mods["L1"], cycle_mods["L2"])
    g = gr_rep(ss, graded)
    assert g.grades == {"1": [0], "2": [0]}
    assert grade_zero_graded(ss).grades == g.grades


def test_gr_sharp_of_socle_concentrates_deep(cycle, cycle_mods):
    graded = gr_algebra(cycle)
    p1 = cycle_mods["P1"]
    soc_rows = radical_series(p1)[2]
    g = gr_sharp(p1, soc_rows, graded)
    # the socle line meets rad^0, rad^1, rad^2 all in the same line
    assert g.grades == {"1": [2], "2": []}


def test_gr_preserves_surjections(cycle, cycle_mods):
    graded = gr_algebra(cycle)
    p1 = cycle_mods["P1"]
    for cut in (1, 2):
        quot, proj = quotient_rep(p1, radical_series(p1)[cut])
        gm, gn, mat, surjective = gr_of_surjection(p1, quot, proj, graded)
        assert surjective
        assert gm.piece_dims()[0] == gn.piece_dims()[0]
    not_a_map = MatrixExact.identity(QQ, 3)
    with pytest.raises(InputFormatError):
        gr_of_surjection(p1, p1, not_a_map.scale(QQ.coerce(0)), graded)


def test_graded_hom_space_degrees(cycle, cycle_mods):
    graded = gr_algebra(cycle)
    g1 = gr_rep(cycle_mods["P1"], graded)
    assert len(graded_hom_space(g1, g1, degree=0)) == 1
    assert len(graded_hom_space(g1, g1, degree=2)) == 1
    assert len(graded_hom_space(g1, g1, degree=1)) == 0
    assert graded_is_isomorphic(g1, g1)
    assert not graded_is_isomorphic(g1, g1.shift(1))
    assert graded_is_isomorphic(g1.shift(3), g1, shift=3)


# -- covers and resolutions -------------------------------------------------------------


def test_projective_cover_of_simple(cycle_mods):
    cov = projective_cover(cycle_mods["L1"])
    assert cov.head == {"1": 1, "2": 0}
    assert cov.summands == ["1"]
    assert cov.projective.total_dim == 3
    assert cov.syzygy.total_dim == 2
    assert head_multiplicities(cov.syzygy) == {"1": 0, "2": 1}


def test_cover_of_truncation_and_of_projective(cycle, cycle_mods):
    uni = nabla2(cycle, cycle_mods)
    cov = projective_cover(uni)
    assert cov.summands == ["1"]
    ok, _ = is_isomorphic(cov.syzygy, cycle_mods["L1"])
    assert ok
    cov_p = projective_cover(cycle_mods["P2"])
    assert cov_p.syzygy.total_dim == 0


def test_minimal_resolutions_frozen(cycle_mods):
    res1 = minimal_resolution(cycle_mods["L1"], 5)
    assert res1.summand_vertices == [["1"], ["2"]]
    assert res1.finite and res1.projective_dimension == 1
    res2 = minimal_resolution(cycle_mods["L2"], 5)
    assert res2.summand_vertices == [["2"], ["1"], ["2"]]
    assert res2.finite and res2.projective_dimension == 2
    res_p = minimal_resolution(cycle_mods["P1"], 5)
    assert res_p.projective_dimension == 0


def test_resolution_minimality_heads(cycle_mods):
    res = minimal_resolution(cycle_mods["L2"], 5)
    for i in range(1, len(res.terms)):
        assert head_multiplicities(res.terms[i]) == head_multiplicities(res.syzygies[i - 1])


def test_euler_characteristic(cycle_mods):
    for name in ("L1", "L2"):
        res = minimal_resolution(cycle_mods[name], 5)
        assert res.finite
        euler = sum((-1) ** i * t.total_dim for i, t in enumerate(res.terms))
        assert euler == cycle_mods[name].total_dim


def test_periodic_resolution_over_dual_numbers():
    alg = build_algebra(truncated_polynomial(2))
    k = simple_rep(alg, "1")
    res = minimal_resolution(k, 4)
    assert not res.finite
    assert res.projective_dimension is None
    assert [t.total_dim for t in res.terms] == [2, 2, 2, 2, 2]


# -- Ext ---------------------------------------------------------------------------------


def test_ext_between_simples_frozen(cycle_mods):
    l1, l2 = cycle_mods["L1"], cycle_mods["L2"]
    assert ext_groups(l1, l1, 2) == [1, 0, 0]
    assert ext_groups(l1, l2, 2) == [0, 1, 0]
    assert ext_groups(l2, l1, 2) == [0, 1, 0]
    assert ext_groups(l2, l2, 2) == [1, 0, 1]


def test_standard_costandard_orthogonality(cycle, cycle_mods):
    deltas = {"1": cycle_mods["L1"], "2": cycle_mods["P2"]}
    nablas = {"1": cycle_mods["L1"], "2": nabla2(cycle, cycle_mods)}
    for lam, d in deltas.items():
        for mu, nb in nablas.items():
            expected = [1 if lam == mu else 0, 0, 0]
            assert ext_groups(d, nb, 2) == expected


def test_ext_self_extensions_of_dual_numbers_simple():
    alg = build_algebra(truncated_polynomial(2))
    k = simple_rep(alg, "1")
    assert ext_groups(k, k, 4) == [1, 1, 1, 1, 1]


def test_ext_table_ungraded(cycle_mods):
    t = ext_table(cycle_mods["L2"], 2)
    assert t.entries == {
        ("1", 0): 0,
        ("2", 0): 1,
        ("1", 1): 1,
        ("2", 1): 0,
        ("1", 2): 0,
        ("2", 2): 1,
    }
    assert t.graded_entries is None
    assert t.finite and t.projective_dimension == 2


def test_ext_table_graded_refines_ungraded(cycle_mods):
    plain = ext_table(cycle_mods["L2"], 2)
    t = ext_table(cycle_mods["L2"], 2, graded=True)
    assert t.entries == plain.entries
    assert t.graded_entries == {
        ("2", 0, 0): 1,
        ("1", 1, 1): 1,
        ("2", 2, 2): 1,
    }


def test_ext_table_graded_needs_tight_algebra():
    pres = QuiverPresentation(
        field=QQ,
        vertices=["1", "2", "3", "4", "5"],
        arrows=[
            ("a", "1", "2"),
            ("b", "2", "3"),
            ("c", "1", "4"),
            ("d", "4", "5"),
            ("e", "5", "3"),
        ],
        relations=[[(1, ("c", "d", "e")), (-1, ("a", "b"))]],
    )
    alg = build_algebra(pres)
    with pytest.raises(InputFormatError):
        ext_table(simple_rep(alg, "1"), 1, graded=True)


# -- brute-force Ext^1 oracle ------------------------------------------------------------


def all_pairs_ext1_agree(alg, modules):
    table = _structure_table(alg)
    basis = MatrixExact.identity(alg.field, alg.dim).rows
    simples = [simple_rep(alg, v) for v in alg.presentation.vertices]
    for m in modules:
        act_m = [m.element_total(b) for b in basis]
        for s in simples:
            act_s = [s.element_total(b) for b in basis]
            bf = ext1_bruteforce(alg.field, table, act_m, act_s)
            assert bf == ext_groups(m, s, 1)[1]


def test_bruteforce_ext1_agrees_on_cycle(cycle, cycle_mods):
    mods = list(cycle_mods.values()) + [nabla2(cycle, cycle_mods)]
    all_pairs_ext1_agree(cycle, mods)


def test_bruteforce_ext1_agrees_on_truncated_polynomials():
    for power in (2, 3):
        alg = build_algebra(truncated_polynomial(power))
        reg = projective_rep(alg, "1")
        mods = [simple_rep(alg, "1"), reg, filtration_slice(reg, 0, 2)]
        all_pairs_ext1_agree(alg, mods)


def test_bruteforce_ext1_agrees_on_commuting_loops():
    pres = QuiverPresentation(
        field=QQ,
        vertices=["1"],
        arrows=[("x", "1", "1"), ("y", "1", "1")],
        relations=[
            [(1, ("x", "x"))],
            [(1, ("y", "y"))],
            [(1, ("y", "x")), (-1, ("x", "y"))],
        ],
    )
    alg = build_algebra(pres)
    reg = projective_rep(alg, "1")
    all_pairs_ext1_agree(alg, [simple_rep(alg, "1"), reg, filtration_slice(reg, 0, 2)])


# -- the gr Ext^1 comparison ---------------------------------------------------------------


def test_gr_ext1_compare_radical_truncation():
    alg = build_algebra(truncated_polynomial(3))
    reg = projective_rep(alg, "1")
    m = filtration_slice(reg, 0, 2)
    report = gr_ext1_compare(m)
    assert [(r.dim_ambient, r.dim_graded) for r in report.rows] == [(1, 1)]
    assert report.all_equal
    assert report.quotient_of_projective
    assert report.pullback == (1, 1, 1)
    assert report.pullback_injective


def test_gr_ext1_compare_with_subalgebra(cycle, cycle_mods):
    uni = nabla2(cycle, cycle_mods)
    units = MatrixExact.identity(QQ, 5).rows
    whole = subalgebra_from_generators(cycle, [units[0], units[2], units[3]])
    assert whole.dim == 5
    report = gr_ext1_compare(uni, sub=whole)
    assert report.all_equal
    for row in report.rows:
        assert row.dim_sub == row.dim_ambient


def test_gr_ext1_compare_rejects_nongenerating_subalgebra():
    alg = build_algebra(truncated_polynomial(3))
    xsq = [QQ.zero, QQ.zero, QQ.one]
    emb = subalgebra_from_generators(alg, [xsq])
    with pytest.raises(PreconditionError):
        gr_ext1_compare(simple_rep(alg, "1"), sub=emb)


# -- restriction to subalgebras --------------------------------------------------------------


def test_restrict_to_whole_algebra(cycle, cycle_mods):
    units = MatrixExact.identity(QQ, 5).rows
    whole = subalgebra_from_generators(cycle, [units[0], units[2], units[3]])
    report = restrict_iso_check(cycle_mods["P1"], whole)
    assert report.filtration_agrees
    assert report.restriction_iso_gr
    assert report.restricts_projectively
    assert report.n_characters == 2


def test_restrict_to_glued_idempotent_subalgebra(cycle, cycle_mods):
    # span{1, a, b, a*b}: both vertex idempotents glued into the unit
    units = MatrixExact.identity(QQ, 5).rows
    glued = subalgebra_from_generators(cycle, [units[2], units[3]])
    assert glued.dim == 4
    report = restrict_iso_check(cycle_mods["P1"], glued)
    assert report.filtration_agrees
    assert report.restriction_iso_gr
    assert not report.restricts_projectively
    assert report.n_characters == 1


def test_restrict_rejects_nongenerating_subalgebra():
    alg = build_algebra(truncated_polynomial(3))
    xsq = [QQ.zero, QQ.zero, QQ.one]
    emb = subalgebra_from_generators(alg, [xsq])
    with pytest.raises(PreconditionError):
        restrict_iso_check(simple_rep(alg, "1"), emb)


# -- Koszulity --------------------------------------------------------------------------------


def test_cycle_algebra_is_koszul(cycle):
    report = koszul_check(cycle, bound=8)
    assert report.verdict is True
    assert report.exact
    assert report.per_simple["1"] == [[0], [1]]
    assert report.per_simple["2"] == [[0], [1], [2]]


def test_dual_numbers_koszul_via_periodicity():
    alg = build_algebra(truncated_polynomial(2))
    report = koszul_check(alg, bound=6)
    assert report.verdict is True
    assert report.exact
    assert report.per_simple["1"] == [[i] for i in range(7)]


def test_cubic_truncation_not_koszul():
    alg = build_algebra(truncated_polynomial(3))
    report = koszul_check(alg, bound=6)
    assert report.verdict is False
    assert report.exact
    assert "grade 3" in report.witness


def test_koszul_needs_tight_grading():
    pres = QuiverPresentation(
        field=QQ,
        vertices=["1", "2", "3", "4", "5"],
        arrows=[
            ("a", "1", "2"),
            ("b", "2", "3"),
            ("c", "1", "4"),
            ("d", "4", "5"),
            ("e", "5", "3"),
        ],
        relations=[[(1, ("c", "d", "e")), (-1, ("a", "b"))]],
    )
    alg = build_algebra(pres)
    with pytest.raises(PreconditionError):
        koszul_check(alg)


def test_graded_resolution_generation_grades(cycle_mods):
    graded = grade_zero_graded(cycle_mods["L2"])
    res = graded_minimal_resolution(graded, 5)
    assert res.generation == [[0], [1], [2]]
    assert res.finite and res.projective_dimension == 2


# -- property tests over random monomial algebras ----------------------------------------------


@st.composite
def monomial_two_loop_algebra(draw):
    """One vertex, loops x and y, all cubes zero, random quadratic monomials."""
    length2 = [("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]
    chosen = draw(st.sets(st.sampled_from(length2), max_size=4))
    field = draw(st.sampled_from([QQ, F2]))
    cubes = [(a, b, c) for a in "xy" for b in "xy" for c in "xy"]
    relations = [[(1, p)] for p in cubes] + [[(1, p)] for p in sorted(chosen)]
    pres = QuiverPresentation(field, ["1"], [("x", "1", "1"), ("y", "1", "1")], relations)
    return build_algebra(pres)


@settings(max_examples=12, deadline=None)
@given(monomial_two_loop_algebra())
def test_regular_module_is_gradable(alg):
    reg = projective_rep(alg, "1")
    graded = gr_algebra(alg)
    g = gr_rep(reg, graded)
    back = make_representation(alg, g.rep.dims, g.rep.action)
    ok, _ = is_isomorphic(reg, back)
    assert ok


@settings(max_examples=12, deadline=None)
@given(monomial_two_loop_algebra())
def test_resolution_invariants_hold(alg):
    k = simple_rep(alg, "1")
    res = minimal_resolution(k, 3)
    # exactness is asserted internally; check minimality and the truncated
    # Euler identity dim M = sum (-1)^i dim P_i + (-1)^(n+1) dim Omega_n here
    for i in range(1, len(res.terms)):
        assert head_multiplicities(res.terms[i]) == head_multiplicities(res.syzygies[i - 1])
    euler = sum((-1) ** i * t.total_dim for i, t in enumerate(res.terms))
    tail = res.syzygies[-1].total_dim if res.syzygies else 0
    assert euler + ((-1) ** len(res.terms)) * tail == k.total_dim


@settings(max_examples=10, deadline=None)
@given(monomial_two_loop_algebra())
def test_bruteforce_ext1_matches_resolution_ext1(alg):
    k = simple_rep(alg, "1")
    table = _structure_table(alg)
    basis = MatrixExact.identity(alg.field, alg.dim).rows
    act = [k.element_total(b) for b in basis]
    assert ext1_bruteforce(alg.field, table, act, act) == ext_groups(k, k, 1)[1]


@settings(max_examples=10, deadline=None)
@given(monomial_two_loop_algebra())
def test_gr_of_canonical_quotients_stays_surjective(alg):
    reg = projective_rep(alg, "1")
    series = radical_series(reg)
    graded = gr_algebra(alg)
    for cut in range(1, len(series)):
        quot, proj = quotient_rep(reg, series[cut])
        _, _, _, surjective = gr_of_surjection(reg, quot, proj, graded)
        assert surjective
