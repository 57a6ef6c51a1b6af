"""Double products, associated measures and operators with a differential law.

For an operator ``P`` with ``d/dx P = r`` the associated measure is the
functional ``mu = integral_0 r - P``; ``P`` is Rota-Baxter exactly when
``mu`` is multiplicative for the double product of ``integral_0 r``.  For
``r = x^k`` this pins ``P`` down to ``integral_a x^k`` for a single ``a``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .exact_poly import Poly, Scalar, as_rational, rational_to_json
from .linear_op import (
    Compose,
    LinComb,
    MultiplyBy,
    OpExpr,
    PreconditionError,
    RBReport,
    TableOp,
    J,
    _fail,
    check_rb,
    differential_law_witness,
    evaluator,
    star,
)

MEASURE_BOUND = 20


class NotInFamilyError(ValueError):
    """The operator does not behave like a member of the analytically modelled family."""


@dataclass(frozen=True)
class Functional:
    """A linear functional given by its values on ``x^0 .. x^bound``."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))
        if not self.values:
            raise ValueError("functional table must not be empty")

    @property
    def bound(self) -> int:
        return len(self.values) - 1

    def __call__(self, p: Poly) -> Fraction:
        if p.degree > self.bound:
            raise ValueError(f"functional table (bound {self.bound}) cannot evaluate degree {p.degree}")
        return sum((c * self.values[i] for i, c in p.terms()), Fraction(0))

    def as_operator(self) -> TableOp:
        """The functional as an operator whose images are constants."""
        from .monomial_rbo import MonomialTable

        return TableOp(MonomialTable(tuple((v, 0) for v in self.values)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "mu_num", "mu_den"])
        for n, v in enumerate(self.values):
            w.writerow([n, v.numerator, v.denominator])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> Functional:
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if rows and not rows[0][0].strip().lstrip("-").isdigit():
            rows = rows[1:]
        vals = []
        for expected, row in enumerate(rows):
            if len(row) != 3:
                raise ValueError(f"functional CSV rows need 3 fields, got {row!r}")
            n, num, den = (int(c) for c in row)
            if n != expected:
                raise ValueError(f"functional CSV rows must be consecutive from 0; got n={n}")
            vals.append(Fraction(num, den))
        return cls(tuple(vals))

    def to_json(self) -> list:
        return [rational_to_json(v) for v in self.values]


@dataclass(frozen=True)
class MeasureResult:
    a_power: Fraction
    a_exact: Fraction | None
    sign_ok: bool
    consistent_to: int
    k: int
    mu: Functional

    def __post_init__(self):
        if self.a_exact is not None and self.a_exact ** (self.k + 1) != self.a_power:
            raise ValueError("a_exact does not match a_power")

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "a_power": rational_to_json(self.a_power),
            "a_exact": None if self.a_exact is None else rational_to_json(self.a_exact),
            "sign_ok": self.sign_ok,
            "consistent_to": self.consistent_to,
            "mu": self.mu.to_json(),
        }
        if self.a_exact is None:
            out["defining_equation"] = f"a^{self.k + 1} = {self.a_power}"
        return out


# ---------------------------------------------------------------------------
# isomorphisms
# ---------------------------------------------------------------------------


def un_basis(k: int, n: int) -> Poly:
    """``n x^(n-k-1)`` for ``n >= k + 1``."""
    if n < k + 1:
        raise ValueError(f"index n = {n} must be at least k + 1 = {k + 1}")
    return Poly.monomial(n - k - 1, n)


def un_basis_general(r: Poly, a: Scalar, n: int) -> Poly:
    """``n r^(n-2) r'`` for ``n >= 2`` (``a`` only enters the product)."""
    if n < 2:
        raise ValueError(f"index n = {n} must be at least 2")
    return (r ** (n - 2)) * r.derivative() * n


def check_iso(k: int, N: int = 20) -> RBReport:
    """``u_m *_k u_n = u_(m+n)`` for the double product of ``integral_0 x^k``."""
    E = evaluator(J(0, Poly.monomial(k)))
    for n in range(k + 1, N + 1):
        un = un_basis(k, n)
        for m in range(k + 1, n + 1):
            um = un_basis(k, m)
            res = E.apply(um) * un + um * E.apply(un) - un_basis(k, m + n)
            if res:
                return _fail(N, m, n, res, "isomorphism")
    return RBReport(True, N)


def check_iso_general(r: Poly, a: Scalar, N: int = 10) -> RBReport:
    """``u_m * u_n = u_(m+n) - rho^n u_m - rho^m u_n`` for ``integral_a r``, ``rho = r(a)``."""
    if not r:
        raise ValueError("r must be nonzero")
    a = as_rational(a)
    rho = r(a)
    E = evaluator(J(a, r))
    u = {n: un_basis_general(r, a, n) for n in range(2, 2 * N + 1)}
    for n in range(2, N + 1):
        for m in range(2, n + 1):
            lhs = E.apply(u[m]) * u[n] + u[m] * E.apply(u[n])
            rhs = u[m + n] - u[m] * rho**n - u[n] * rho**m
            if lhs != rhs:
                return _fail(N, m, n, lhs - rhs, "isomorphism")
    return RBReport(True, N)


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------


def measure_of(P: OpExpr, r: Poly, N: int = MEASURE_BOUND) -> Functional:
    """``mu = integral_0 r - P`` tabulated on ``x^0..x^N``."""
    E = evaluator(P)
    vals = []
    for n in range(N + 1):
        img = Poly.monomial(n) * r
        diff = img.integral_from(0) - E.image(n)
        if not diff.is_constant():
            raise NotInFamilyError(
                f"(integral_0 r - P)(x^{n}) = {diff} is not constant; "
                "P does not satisfy the differential law with this r")
        vals.append(diff[0])
    return Functional(tuple(vals))


def _xk_star_monomials(k: int, m: int, n: int) -> Poly:
    # x^m *_k x^n = x^m (integral_0 x^(n+k)) + x^n (integral_0 x^(m+k))
    coef = Fraction(1, n + k + 1) + Fraction(1, m + k + 1)
    return Poly.monomial(m + n + k + 1, coef)


def check_multiplicative(mu: Functional, k: int, N: int = 15) -> RBReport:
    """``mu(x^m *_k x^n) = mu(x^m) mu(x^n)`` for ``0 <= m <= n <= N``."""
    need = 2 * N + k + 1
    if mu.bound < need:
        raise ValueError(f"functional table has bound {mu.bound}; products up to degree {need} need it")
    for n in range(N + 1):
        for m in range(n + 1):
            diff = mu(_xk_star_monomials(k, m, n)) - mu.values[m] * mu.values[n]
            if diff:
                return _fail(N, m, n, Poly.constant(diff), "multiplicativity")
    return RBReport(True, N)


def rational_roots(value: Fraction, n: int) -> list[Fraction]:
    """All rational ``a`` with ``a**n == value``."""
    if n < 1:
        raise ValueError("root order must be positive")
    if not value:
        return [Fraction(0)]
    if value < 0 and n % 2 == 0:
        return []
    mag = abs(value)
    num, exact_n = gmpy2.iroot(gmpy2.mpz(mag.numerator), n)
    den, exact_d = gmpy2.iroot(gmpy2.mpz(mag.denominator), n)
    if not (exact_n and exact_d):
        return []
    root = Fraction(int(num), int(den))
    if value < 0:
        return [-root]
    return [root, -root] if n % 2 == 0 else [root]


def classify_rbo_xk(P: OpExpr, k: int, N: int = MEASURE_BOUND) -> MeasureResult:
    """Identify ``a`` with ``P = integral_a x^k`` from the associated measure."""
    rep = check_rb(P, N)
    if not rep:
        raise PreconditionError(f"P is not a Rota-Baxter operator up to degree {N}", "P", rep)
    r = Poly.monomial(k)
    w = differential_law_witness(P, N)
    if w != r:
        raise PreconditionError(f"P does not satisfy d/dx P = x^{k} (witness {w})", "P")
    mu = measure_of(P, r, N)
    v = mu.values
    a_power = (k + 1) * v[0]
    for n in range(k, N):
        expected = Fraction((n + 1) * (k + 1), n + k + 2) * v[0] * v[n - k]
        if v[n + 1] != expected:
            raise NotInFamilyError(
                f"measure recursion fails at x^{n + 1}: {v[n + 1]} != {expected}")
    sign_ok = v[0] >= 0
    if k % 2 == 1 and not sign_ok:
        raise NotInFamilyError(f"mu(1) = {v[0]} < 0 is impossible for odd k = {k}")
    a_exact = None
    for cand in rational_roots(a_power, k + 1):
        if all(v[n] == cand ** (n + k + 1) / (n + k + 1) for n in range(N + 1)):
            a_exact = cand
            break
    if a_exact is not None:
        E, Ea = evaluator(P), evaluator(J(a_exact, r))
        for n in range(N + 1):
            if E.image(n) != Ea.image(n):  # pragma: no cover - implied by the measure match
                raise AssertionError(f"P differs from integral_a x^k at x^{n}")
    return MeasureResult(a_power, a_exact, sign_ok, N, k, mu)


# ---------------------------------------------------------------------------
# initialization point and even powers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Data of the degenerate branch ``P = (r - Q) o integral_0`` with ``Q ~ integral_a r'``.

    ``reduced`` holds ``Q(x^n) = r x^n - n P(x^(n-1))`` for ``n = 1..bound``,
    the only values of ``Q`` the factorization involves.
    """

    r: Poly
    reduced: tuple[Poly, ...]
    reduced_law_holds: bool

    def decomposition(self, a: Scalar) -> OpExpr:
        """``(r - integral_a r') o integral_0`` as an operator term."""
        a = as_rational(a)
        inner = LinComb(((Fraction(1), MultiplyBy(self.r)),
                         (Fraction(-1), J(a, self.r.derivative()))))
        return Compose(inner, J(0))

    def to_json(self) -> dict:
        return {"r": str(self.r), "reduced": [str(q) for q in self.reduced],
                "reduced_law_holds": self.reduced_law_holds}


def _constant_part(p: Poly, what: str) -> Fraction:
    if not p.is_constant():
        raise NotInFamilyError(f"{what} = {p} is not a constant")
    return p[0]


def init_point(P: OpExpr, r: Poly, N: int = MEASURE_BOUND) -> Fraction | Factorization:
    """Initialization point ``a`` of ``P = integral_a r``, or factorization data when ``r(a) = 0``."""
    if r.degree < 1:
        raise ValueError("init_point needs deg r >= 1; constant r is covered by classify_rbo_xk(k=0)")
    w = differential_law_witness(P, N)
    if w != r:
        raise PreconditionError(f"P does not satisfy d/dx P = r (witness {w})", "P")
    E = evaluator(P)
    x = Poly.x()
    rp = r.derivative()
    num = _constant_part(E.apply(x * rp * 2 + r) - x * r * r, "numerator P(2xr'+r) - x r^2")
    den = _constant_part(E.apply(rp * 2) - r * r, "denominator P(2r') - r^2")
    if den:
        return num / den
    reduced = tuple(r.shift(n) - E.image(n - 1) * n for n in range(1, N + 1))
    law = all(q.derivative() == rp.shift(n) for n, q in enumerate(reduced, start=1))
    return Factorization(r, reduced, law)


def even_power_check(P: OpExpr, r: Poly, kmax: int, N: int = 10,
                     a: Scalar | None = None) -> tuple[RBReport, Fraction]:
    """``P(r' r^(2k)) = (r^(2k+2) - c^(k+1)) / (2k+2)`` for ``k <= kmax`` with ``c = r^2 - P(2r')``.

    With ``a`` given (``P = integral_a r``) also checks ``c = r(a)^2``.
    """
    rep = check_rb(P, N)
    if not rep:
        raise PreconditionError(f"P is not a Rota-Baxter operator up to degree {N}", "P", rep)
    w = differential_law_witness(P, N)
    if w != r:
        raise PreconditionError(f"P does not satisfy d/dx P = r (witness {w})", "P")
    E = evaluator(P)
    rp = r.derivative()
    c = _constant_part(r * r - E.apply(rp * 2), "c = r^2 - P(2r')")
    if a is not None and c != r(as_rational(a)) ** 2:
        return _fail(kmax, 0, 0, Poly.constant(c - r(as_rational(a)) ** 2), "c_value"), c
    r2 = r * r
    power = Poly.constant(1)  # r^(2k)
    for k in range(kmax + 1):
        lhs = E.apply(rp * power)
        rhs = (power * r2 - Poly.constant(c ** (k + 1))) / (2 * k + 2)
        if lhs != rhs:
            return _fail(max(kmax, 1), k, k, lhs - rhs, "even_power"), c
        power = power * r2
    return RBReport(True, max(kmax, 1)), c


def probe(P: OpExpr, r: Poly, N: int = MEASURE_BOUND, kmax: int = 3) -> dict:
    """Evidence gathering for ``P`` with ``d/dx P = r``: never a verdict on membership."""
    out: dict = {"r": str(r), "bound": N}
    w = differential_law_witness(P, N)
    out["witness"] = None if w is None else str(w)
    out["witness_matches"] = w == r
    rb = check_rb(P, N)
    out["rota_baxter"] = rb.to_json()
    if w != r or r.degree < 1:
        return out
    E = evaluator(P)
    x = Poly.x()
    rp = r.derivative()
    num = E.apply(x * rp * 2 + r) - x * r * r
    den = E.apply(rp * 2) - r * r
    out["numerator"] = str(num)
    out["denominator"] = str(den)
    out["numerator_constant"] = num.is_constant()
    out["denominator_constant"] = den.is_constant()
    c = r * r - E.apply(rp * 2)
    out["c"] = str(c)
    out["c_constant"] = c.is_constant()
    if not (num.is_constant() and den.is_constant()):
        return out
    if den:
        a = num[0] / den[0]
        out["a"] = rational_to_json(a)
        Ea = evaluator(J(a, r))
        out["equals_integral_on_window"] = all(E.image(n) == Ea.image(n) for n in range(N + 1))
        out["c_equals_r_a_squared"] = c.is_constant() and c[0] == r(a) ** 2
    else:
        fac = init_point(P, r, N)
        out["factorization"] = fac.to_json()
    if c.is_constant() and rb:
        cc = c[0]
        r2 = r * r
        power = Poly.constant(1)
        holds = []
        for k in range(kmax + 1):
            holds.append(E.apply(rp * power) == (power * r2 - Poly.constant(cc ** (k + 1))) / (2 * k + 2))
            power = power * r2
        out["even_power_identities"] = holds
    return out


__all__ = [
    "Factorization", "Functional", "MeasureResult", "NotInFamilyError", "check_iso",
    "check_iso_general", "check_multiplicative", "classify_rbo_xk", "even_power_check",
    "init_point", "measure_of", "probe", "rational_roots", "star", "un_basis", "un_basis_general",
]
