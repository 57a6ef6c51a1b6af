import pytest
from hypothesis import given, strategies as st

from rotabaxter.averaging_codec import (
    AveragingSeq,
    CodecError,
    ThetaTable,
    check_averaging,
    phi,
    primitive_period,
    psi,
    theta_image,
)


@st.composite
def averaging_seqs(draw, dmax=8, smax=10):
    d = draw(st.integers(1, dmax))
    return AveragingSeq(d, tuple(draw(st.lists(st.integers(1, smax), min_size=d, max_size=d))))


@pytest.mark.parametrize("k", [1, 2, 5])
def test_psi_affine(k):
    assert psi(AveragingSeq(1, (k,)), 20).values == tuple(n + k for n in range(21))


def test_psi_examples():
    t = psi(AveragingSeq(2, (1, 1)), 21)
    assert all(t.values[2 * k] == t.values[2 * k + 1] == 2 * k + 2 for k in range(11))
    t = psi(AveragingSeq(3, (1, 1, 1)), 30)
    assert t.values == tuple((n // 3 + 1) * 3 for n in range(31))


def test_phi_examples():
    assert phi(ThetaTable(tuple(n + 3 for n in range(20)))) == AveragingSeq(1, (3,))
    for s in (AveragingSeq(2, (1, 1)), AveragingSeq(2, (2, 1))):
        t = psi(s, 20)
        assert phi(t) == s
        assert psi(phi(t), 20) == t


def test_phi_refusals():
    with pytest.raises(CodecError):
        phi(ThetaTable((1, 5, 2, 7, 3, 9, 4, 8, 6, 10)))
    with pytest.raises(CodecError):
        phi(ThetaTable((0, 1, 2, 3, 4, 5)))
    # period 2 visible but theta(0) = 3 is odd
    with pytest.raises(CodecError):
        phi(ThetaTable((3, 3, 5, 5, 7, 7, 9, 9)))


def test_check_averaging_examples():
    assert check_averaging(ThetaTable(tuple(n + 4 for n in range(30)))).holds
    rep = check_averaging(ThetaTable(tuple(2 * n + 1 for n in range(10))))
    assert not rep.holds
    assert (rep.counterexample.m, rep.counterexample.n) == (0, 0)
    assert rep.counterexample.condition == "averaging"


def test_theta_image_examples():
    assert theta_image(AveragingSeq(2, (1, 1))) == (2, 1)
    assert theta_image(AveragingSeq(1, (7,))) == (1, 7)
    s = AveragingSeq(3, (2, 5, 2))
    assert theta_image(s) == (3, 2)
    # brute-force oracle: distinct values of psi(s, 60)
    vals = sorted(set(psi(s, 60).values))
    assert vals == list(range(6, vals[-1] + 1, 3))


def test_averaging_seq_validation():
    with pytest.raises(ValueError):
        AveragingSeq(0, ())
    with pytest.raises(ValueError):
        AveragingSeq(2, (1,))
    with pytest.raises(ValueError):
        AveragingSeq(1, (0,))
    s = AveragingSeq(3, (2, 5, 2))
    assert AveragingSeq.from_json(s.to_json()) == s


def test_theta_csv_roundtrip():
    t = psi(AveragingSeq(2, (2, 1)), 9)
    text = t.to_csv()
    assert text.splitlines()[0] == "n,theta"
    assert ThetaTable.from_csv(text) == t
    with pytest.raises(ValueError):
        ThetaTable.from_csv("0,2\n2,4\n")


@given(averaging_seqs())
def test_roundtrip(s):
    N = 4 * s.d * max(s.sigma)
    t = psi(s, N)
    assert phi(t) == s
    assert psi(phi(t), N) == t


@given(averaging_seqs())
def test_psi_is_averaging(s):
    assert check_averaging(psi(s, 200)).holds


@given(averaging_seqs())
def test_period_is_primitive(s):
    t = psi(s, 4 * s.d + 4)
    d = phi(t).d
    assert primitive_period(t.values) == d
    for p in range(1, d):
        if d % p == 0:
            assert not all(t.values[r + p] == t.values[r] + p for r in range(t.bound - p + 1))


@given(averaging_seqs())
def test_image_law(s):
    N = 6 * s.d
    d, smin = theta_image(s)
    vals = set(psi(s, N).values)
    assert all(v % d == 0 and v // d >= smin for v in vals)
    # every multiple below the largest value reached by the last full period is hit
    top = min(psi(s, N).values[N - s.d + 1:])
    assert {d * t for t in range(smin, top // d + 1)} <= vals
