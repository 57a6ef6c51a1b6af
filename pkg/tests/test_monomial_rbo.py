import pytest
from hypothesis import given, strategies as st

from conftest import F, nonzero_rationals
from rotabaxter.acceptance import brute_support
from rotabaxter.averaging_codec import AveragingSeq
from rotabaxter.exact_poly import Poly, X
from rotabaxter.linear_op import J, LinComb, apply, check_rb, differential_law_witness
from rotabaxter.monomial_rbo import (
    DegenerateComplement,
    DegenerateMultiples,
    MonomialTable,
    Nondegenerate,
    PeriodSeeds,
    ReciprocalTheta,
    build_degenerate_complement,
    build_degenerate_multiples,
    build_nondegenerate,
    build_period_seeds,
    build_projector_composite,
    check_rb_table,
    classify,
    detect_polynomial_theta,
    family_from_json,
    induced_nondegenerate,
    support_structure,
    verify_family_conditions,
)


def std_integral():
    return build_nondegenerate(AveragingSeq(1, (1,)), 1)


def exam_deg(parity, N):
    rows = []
    for n in range(N + 1):
        k, j = divmod(n, 2)
        rows.append((F(1, k + 1), 2 * k + 2) if j == parity else (F(0), 0))
    return MonomialTable(tuple(rows))


@st.composite
def avg_seqs(draw, dmax=6, smax=8):
    d = draw(st.integers(1, dmax))
    return AveragingSeq(d, tuple(draw(st.lists(st.integers(1, smax), min_size=d, max_size=d))))


@st.composite
def nondegenerate_families(draw):
    if draw(st.booleans()):
        return build_nondegenerate(draw(avg_seqs()), draw(nonzero_rationals))
    d = draw(st.integers(2, 6))
    return build_period_seeds(d, draw(st.lists(nonzero_rationals, min_size=d, max_size=d)))


@st.composite
def families(draw):
    kind = draw(st.sampled_from(["nd", "mult", "comp"]))
    if kind == "nd":
        return draw(nondegenerate_families())
    if kind == "mult":
        return build_degenerate_multiples(draw(st.integers(1, 4)), draw(nondegenerate_families()))
    return build_degenerate_complement(draw(st.integers(2, 4)), draw(st.integers(1, 3)),
                                       draw(nonzero_rationals))


# -- constructors -----------------------------------------------------------


def test_nondegenerate_example_d2():
    fam = build_nondegenerate(AveragingSeq(2, (1, 1)), 2)
    for k in range(16):
        assert fam.term(2 * k) == fam.term(2 * k + 1) == (F(1, k + 1), 2 * k + 2)
    assert check_rb(fam.op(), 30).holds


@pytest.mark.parametrize("k,c", [(1, F(1)), (2, F(3)), (4, F(-2, 5))])
def test_nondegenerate_affine_is_scaled_integral(k, c):
    fam = build_nondegenerate(AveragingSeq(1, (k,)), c)
    target = LinComb(((c, J(0, Poly.monomial(k - 1))),))
    for n in range(20):
        assert apply(fam.op(), X**n) == apply(target, X**n)


def test_standard_integral():
    fam = std_integral()
    for n in range(20):
        assert apply(fam.op(), X**n) == apply(J(0), X**n)


def test_period_seeds_examples():
    fam = build_period_seeds(2, (1, 1))
    for n in range(20):
        assert fam.term(n) == (F(1, n // 2 + 1), 2 * (n // 2) + 2)
    fam = build_period_seeds(2, (1, F(1, 3)))
    for ell in range(10):
        assert fam.term(2 * ell) == (F(1, ell + 1), 2 * ell + 2)
        assert fam.term(2 * ell + 1) == (F(1, 3 * (ell + 1)), 2 * ell + 2)
    assert check_rb(fam.op(), 30).holds
    fam = build_period_seeds(3, (1, 1, 1))
    assert all(fam.term(n)[1] == 3 * (n // 3 + 1) for n in range(30))


def test_period_seeds_validation():
    with pytest.raises(ValueError):
        build_period_seeds(1, (1,))
    with pytest.raises(ValueError):
        build_period_seeds(2, (1, 0))
    with pytest.raises(ValueError):
        build_nondegenerate(AveragingSeq(1, (1,)), 0)


def test_degenerate_multiples_examples():
    fam = build_degenerate_multiples(2, std_integral())
    assert fam.table(31) == exam_deg(0, 31)
    inner = build_nondegenerate(AveragingSeq(2, (1, 2)), 3)
    assert build_degenerate_multiples(1, inner) is inner
    fam = build_degenerate_multiples(3, std_integral())
    assert fam.table(30).support() == list(range(0, 31, 3))
    assert all(fam.term(3 * m) == (F(1, m + 1), 3 * m + 3) for m in range(10))
    assert check_rb(fam.op(), 30).holds


def test_degenerate_complement_examples():
    fam = build_degenerate_complement(2, 1, 2)
    assert fam.table(31) == exam_deg(1, 31)
    fam = build_degenerate_complement(3, 1, 1)
    for m in range(10):
        assert fam.term(3 * m) == (0, 0)
        for i in (1, 2):
            assert fam.term(3 * m + i) == (F(1, 3 * (m + 1)), 3 * (m + 1))
    assert check_rb(fam.op(), 30).holds
    fam = build_degenerate_complement(2, 2, 1)
    assert all(fam.term(2 * m + 1)[1] == 2 * (m + 2) for m in range(10))
    assert check_rb(fam.op(), 30).holds
    with pytest.raises(ValueError):
        build_degenerate_complement(1, 1, 1)


def test_projector_composites():
    even, odd = build_projector_composite("even"), build_projector_composite("odd")
    assert apply(even, X**2) == X**4 / 2
    assert apply(odd, X**2) == 0
    assert apply(even, X**3) == 0
    assert MonomialTable.from_operator(even, 30) == build_degenerate_multiples(2, std_integral()).table(30)
    assert MonomialTable.from_operator(odd, 30) == build_degenerate_complement(2, 1, 2).table(30)
    with pytest.raises(ValueError):
        build_projector_composite("neither")


def test_family_json_roundtrip():
    fams = [
        build_nondegenerate(AveragingSeq(3, (2, 5, 2)), F(-3, 7)),
        build_period_seeds(2, (1, F(1, 3))),
        build_degenerate_multiples(2, std_integral()),
        build_degenerate_complement(3, 2, F(5, 2)),
        build_projector_composite("even").family,
    ]
    for fam in fams:
        assert family_from_json(fam.to_json()) == fam
    with pytest.raises(ValueError):
        family_from_json({"family": "Unknown"})


def test_table_normalization_and_csv():
    t = MonomialTable(((F(0), 5), (F(1, 2), 3)))
    assert t.rows == ((0, 0), (F(1, 2), 3))
    text = t.to_csv()
    assert text.splitlines()[0] == "n,beta_num,beta_den,theta"
    assert MonomialTable.from_csv(text) == t
    assert MonomialTable.from_json(t.to_json()) == t
    with pytest.raises(ValueError):
        MonomialTable.from_csv("0,1,1,2\n2,1,1,3\n")


# -- family conditions ------------------------------------------------------


def test_verify_family_conditions_examples():
    rep = verify_family_conditions(build_nondegenerate(AveragingSeq(1, (2,)), 1), 30)
    assert rep.holds and rep.mode == "symbolic"
    bad = MonomialTable(tuple((F(1), n + 2) if n % 2 == 0 else (F(0), 0) for n in range(31)))
    rep = verify_family_conditions(bad, 30)
    assert not rep.holds
    assert rep.counterexample.condition == "beta"
    assert (rep.counterexample.m, rep.counterexample.n) == (0, 0)
    assert verify_family_conditions(build_degenerate_complement(2, 1, 2), 30).holds


def test_verify_family_conditions_catches_bad_family():
    # seeds rule on a non-extreme theta is not an RBO
    fam = Nondegenerate(AveragingSeq(2, (2, 1)), PeriodSeeds((F(1), F(1))))
    assert not verify_family_conditions(fam, 30).holds
    assert not check_rb(fam.op(), 30).holds


def test_multiples_rejects_bad_inner():
    fam = Nondegenerate(AveragingSeq(2, (2, 1)), PeriodSeeds((F(1), F(2))))
    with pytest.raises(ValueError):
        build_degenerate_multiples(2, fam)


# -- classification ---------------------------------------------------------


def test_classify_standard_premultiplied():
    rep = classify(MonomialTable.from_operator(J(0, X), 30))
    assert rep.is_rbo.holds and not rep.degenerate and rep.injective
    assert rep.recovered == build_nondegenerate(AveragingSeq(1, (2,)), 1)


def test_classify_degenerate_example():
    rep = classify(exam_deg(0, 30))
    assert rep.degenerate and not rep.injective
    assert rep.supp_structure.e == 2 and rep.supp_structure.residues == (0,)


def test_classify_d2_not_injective():
    fam = build_nondegenerate(AveragingSeq(2, (1, 1)), 2)
    rep = classify(fam.table(30))
    assert not rep.degenerate and not rep.injective
    assert rep.recovered.table(30) == fam.table(30)


def test_classify_rejects_non_rbo():
    table = MonomialTable(tuple((F(1), n + 2) for n in range(20)))
    rep = classify(table)
    assert not rep.is_rbo.holds and rep.degenerate is None


def test_detect_polynomial_theta_examples():
    t = MonomialTable(tuple((F(1, 2 * (n + 3)), n + 3) for n in range(30)))
    assert detect_polynomial_theta(t) == (3, 2)
    assert detect_polynomial_theta(build_nondegenerate(AveragingSeq(2, (1, 1)), 2).table(30)) is None
    assert detect_polynomial_theta(std_integral().table(30)) == (1, 1)


# -- support structure ------------------------------------------------------


@pytest.mark.parametrize("parity", [0, 1])
def test_support_structure_examples(parity):
    table = exam_deg(parity, 40)
    st_ = support_structure(table)
    assert (st_.e, st_.C, st_.residues, st_.gaps, st_.frobenius) == (2, (), (parity,), (), 0)
    oracle = brute_support(table)
    assert oracle["e"] == st_.e and oracle["residues"] == list(st_.residues)


def test_support_structure_zero_table():
    with pytest.raises(ValueError, match="T empty"):
        support_structure(MonomialTable(((F(0), 0),) * 20))


def test_support_structure_with_gaps():
    # complement family k=3: theta values 3(m+1) -> e = 3, residues 1 and 2
    table = build_degenerate_complement(3, 1, 1).table(40)
    st_ = support_structure(table)
    assert st_.e == 3 and st_.residues == (1, 2) and st_.C == ()
    assert brute_support(table)["residues"] == [1, 2]


def test_induced_nondegenerate_examples():
    table = exam_deg(0, 40)
    st_ = support_structure(table)
    P0 = induced_nondegenerate(table, st_, 0, out_bound=20)
    for n in range(21):
        assert P0.term(n) == table.term(2 * (n // 2))
    assert not P0.is_degenerate()
    assert check_rb_table(P0).holds
    with pytest.raises(ValueError):
        induced_nondegenerate(table, st_, 1)
    with pytest.raises(ValueError):
        induced_nondegenerate(table, st_, 0, out_bound=60)


def test_induced_from_gapless_odd_support():
    table = exam_deg(1, 40)
    st_ = support_structure(table)
    P0 = induced_nondegenerate(table, st_, 1)
    assert all(P0.term(n) == table.term(2 * (n // 2) + 1) for n in range(P0.bound + 1))


# -- invariants -------------------------------------------------------------


@given(families())
def test_constructed_families_are_rbos(fam):
    assert check_rb(fam.op(), 18).holds
    assert verify_family_conditions(fam, 18).holds


@given(families())
def test_zero_constant_law(fam):
    for n in range(30):
        b, t = fam.term(n)
        assert not (b and t == 0)


@given(families())
def test_support_dichotomy(fam):
    rule = fam.residue_rule()
    # support is a union of residue classes, so it is empty, everything, or infinite and co-infinite
    zero = [e is None for e in rule.entries]
    if isinstance(fam, Nondegenerate):
        assert not any(zero)
    if isinstance(fam, (DegenerateMultiples, DegenerateComplement)):
        assert any(zero) and not all(zero)


@given(nondegenerate_families())
def test_classify_roundtrip(fam):
    rep = classify(fam.table(30))
    assert rep.recovered is not None
    assert rep.recovered.table(40) == fam.table(40)
    if isinstance(fam.beta_rule, ReciprocalTheta) or len(set(fam.beta_rule.seeds)) > 1:
        assert rep.recovered.avg == fam.avg


@given(nondegenerate_families())
def test_injectivity_three_way(fam):
    rep = classify(fam.table(30))
    d1 = fam.avg.d == 1
    if d1:
        k, c = fam.avg.sigma[0], fam.beta_rule.c
        target = LinComb(((c, J(0, Poly.monomial(k - 1))),))
        is_integral = MonomialTable.from_operator(target, 30) == fam.table(30)
    else:
        is_integral = differential_law_witness(fam.op(), 30) is not None
    assert rep.injective == d1 == is_integral


@given(families())
def test_averaging_symmetry(fam):
    assert verify_family_conditions(fam, 15).holds
    supp = [n for n in range(25) if fam.term(n)[0]]
    th = lambda n: fam.term(n)[1]
    for m in supp:
        for n in supp:
            assert th(m) + th(n) == th(m + th(n)) == th(th(m) + n)


def test_support_with_frobenius_gaps():
    fam = build_degenerate_multiples(2, build_nondegenerate(AveragingSeq(1, (3,)), 1))
    table = fam.table(60)
    st_ = support_structure(table)
    assert (st_.e, st_.gaps, st_.frobenius, st_.residues) == (2, (1, 2), 2, (0,))
    assert st_.determining_set == (0, 2, 4)
    oracle = brute_support(table)
    assert oracle["gaps"] == [1, 2] and oracle["f"] == 2
    for s in (0, 2, 4):
        P0 = induced_nondegenerate(table, st_, s)
        assert not P0.is_degenerate()
        assert all(P0.term(n) == table.term((2 + n // 2) * 2 + s) for n in range(P0.bound + 1))
