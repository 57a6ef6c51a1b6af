from fractions import Fraction

from hypothesis import settings, strategies as st

from rotabaxter.exact_poly import Poly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))
nonzero_rationals = st.builds(
    lambda s, n, d: Fraction(s * n, d), st.sampled_from((-1, 1)), st.integers(1, 20), st.integers(1, 12))


@st.composite
def polys(draw, max_degree=4):
    coeffs = draw(st.lists(rationals, max_size=max_degree + 1))
    return Poly(coeffs)


def F(a, b=1):
    return Fraction(a, b)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
