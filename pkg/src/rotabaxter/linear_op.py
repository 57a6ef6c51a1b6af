"""Linear operators on Q[x] and truncated Rota-Baxter checks.

Operators are closed terms built from a handful of frozen dataclasses
(:class:`IntegralFrom`, :class:`MultiplyBy`, :class:`EvalAt`, monomial
tables/families, :class:`Compose`, :class:`LinComb`, :class:`Zero`).  Every
check works on the monomial basis up to a degree bound and reports that
bound alongside its verdict: a passing check is evidence, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Protocol, Union

from .exact_poly import Poly, Scalar, as_rational, rational_to_json

DEFAULT_BOUND = 30


class TableRangeError(ValueError):
    """A tabulated operator was applied beyond its last tabulated exponent."""


class PreconditionError(ValueError):
    """An input operator failed a check the caller was expected to guarantee."""

    def __init__(self, message: str, which: str, report: RBReport | None = None):
        super().__init__(message)
        self.which = which
        self.report = report


class MonomialSource(Protocol):
    """Anything that knows ``P(x^n) = beta(n) x^theta(n)``."""

    def term(self, n: int) -> tuple[Fraction, int]: ...

    def to_json(self) -> dict: ...


# ---------------------------------------------------------------------------
# operator terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralFrom:
    a: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))


@dataclass(frozen=True)
class MultiplyBy:
    r: Poly


@dataclass(frozen=True)
class EvalAt:
    """Evaluation at ``a``, with the value embedded as a constant polynomial."""

    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))


@dataclass(frozen=True)
class TableOp:
    table: Any  # MonomialTable


@dataclass(frozen=True)
class FamilyOp:
    family: Any  # MonomialFamily variant


@dataclass(frozen=True)
class Compose:
    outer: OpExpr
    inner: OpExpr


@dataclass(frozen=True)
class LinComb:
    terms: tuple[tuple[Fraction, OpExpr], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((as_rational(c), op) for c, op in self.terms)
        )


@dataclass(frozen=True)
class Zero:
    pass


OpExpr = Union[IntegralFrom, MultiplyBy, EvalAt, TableOp, FamilyOp, Compose, LinComb, Zero]


def J(a: Scalar = 0, r: Poly | Scalar | None = None) -> OpExpr:
    """The analytically modelled operator ``f -> integral_a^x r f``."""
    if r is None:
        return IntegralFrom(a)
    if not isinstance(r, Poly):
        r = Poly.constant(r)
    return premultiply(IntegralFrom(a), r)


def premultiply(P: OpExpr, r: Poly) -> OpExpr:
    return Compose(P, MultiplyBy(r))


def scaled(c: Scalar, P: OpExpr) -> OpExpr:
    return LinComb(((as_rational(c), P),))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


class _Evaluator:
    """Applies one operator term, caching its images of monomials."""

    def __init__(self, op: OpExpr):
        self.op = op
        self._cache: dict[int, Poly] = {}
        if isinstance(op, Compose):
            self._outer = _Evaluator(op.outer)
            self._inner = _Evaluator(op.inner)
        elif isinstance(op, LinComb):
            self._parts = [(c, _Evaluator(p)) for c, p in op.terms if c]
        elif not isinstance(op, (IntegralFrom, MultiplyBy, EvalAt, TableOp, FamilyOp, Zero)):
            raise TypeError(f"not an operator term: {op!r}")

    def image(self, n: int) -> Poly:
        got = self._cache.get(n)
        if got is None:
            got = self._image(n)
            self._cache[n] = got
        return got

    def _image(self, n: int) -> Poly:
        op = self.op
        if isinstance(op, IntegralFrom):
            return Poly.monomial(n).integral_from(op.a)
        if isinstance(op, MultiplyBy):
            return op.r.shift(n)
        if isinstance(op, EvalAt):
            return Poly.constant(op.a**n)
        if isinstance(op, (TableOp, FamilyOp)):
            src = op.table if isinstance(op, TableOp) else op.family
            beta, theta = src.term(n)
            return Poly.monomial(theta, beta) if beta else Poly.zero()
        if isinstance(op, Compose):
            return self._outer.apply(self._inner.image(n))
        if isinstance(op, LinComb):
            return _lin_sum((c, ev.image(n)) for c, ev in self._parts)
        return Poly.zero()

    def apply(self, p: Poly) -> Poly:
        op = self.op
        if isinstance(op, Zero) or not p:
            return Poly.zero()
        if isinstance(op, MultiplyBy):
            return op.r * p
        if isinstance(op, IntegralFrom):
            return p.integral_from(op.a)
        if isinstance(op, EvalAt):
            return Poly.constant(p(op.a))
        return _lin_sum((c, self.image(n)) for n, c in p.terms())


def _lin_sum(pairs) -> Poly:
    acc: list[Fraction] = []
    for c, q in pairs:
        if not c or not q:
            continue
        coeffs = q.coeffs
        if len(coeffs) > len(acc):
            acc.extend([Fraction(0)] * (len(coeffs) - len(acc)))
        for i, v in enumerate(coeffs):
            if v:
                acc[i] += c * v
    return Poly._raw(acc)


def evaluator(P: OpExpr) -> _Evaluator:
    return _Evaluator(P)


def apply(P: OpExpr, p: Poly) -> Poly:
    return _Evaluator(P).apply(p)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    m: int
    n: int
    residual: Poly
    condition: str = "rota_baxter"

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "residual": str(self.residual),
                "residual_coeffs": self.residual.to_json(), "condition": self.condition}


@dataclass(frozen=True)
class RBReport:
    holds: bool
    bound: int
    counterexample: Counterexample | None = None
    mode: str = "basis"

    def __post_init__(self):
        if self.holds != (self.counterexample is None):
            raise ValueError("holds must be true exactly when no counterexample is given")
        if self.counterexample is not None and not self.counterexample.residual:
            raise ValueError("counterexample residual must be nonzero")

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out: dict[str, Any] = {"holds": self.holds, "bound": self.bound, "mode": self.mode}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        return out


def _fail(bound: int, m: int, n: int, residual: Poly, condition: str = "rota_baxter",
          mode: str = "basis") -> RBReport:
    return RBReport(False, bound, Counterexample(m, n, residual, condition), mode)


# ---------------------------------------------------------------------------
# Rota-Baxter form and checks
# ---------------------------------------------------------------------------


def _rb(EP: _Evaluator, EQ: _Evaluator, u: Poly, v: Poly) -> Poly:
    Pu = EP.apply(u)
    Qv = EQ.apply(v)
    return Pu * Qv - EP.apply(u * Qv) - EQ.apply(Pu * v)


def rb_form(P: OpExpr, Q: OpExpr, u: Poly, v: Poly) -> Poly:
    """``P(u)Q(v) - P(u Q(v)) - Q(P(u) v)``."""
    return _rb(_Evaluator(P), _Evaluator(Q), u, v)


def _check_bound(N: int) -> None:
    if not isinstance(N, int) or N < 1:
        raise ValueError(f"degree bound must be a positive integer, got {N!r}")


def check_rb(P: OpExpr, N: int = DEFAULT_BOUND) -> RBReport:
    """Weight-0 Rota-Baxter identity on all basis pairs ``0 <= m <= n <= N``.

    The residual is symmetric in ``(u, v)``, so ordered pairs cover every pair.
    """
    _check_bound(N)
    E = _Evaluator(P)
    mono = [Poly.monomial(i) for i in range(N + 1)]
    for n in range(N + 1):
        for m in range(n + 1):
            res = _rb(E, E, mono[m], mono[n])
            if res:
                mirror = _rb(E, E, mono[n], mono[m])
                if mirror != res:  # pragma: no cover - impossible in a commutative ring
                    raise AssertionError("Rota-Baxter residual is not symmetric")
                return _fail(N, m, n, res)
    return RBReport(True, N)


def _pair_check(N: int, residual_fn, condition: str) -> RBReport:
    mono = [Poly.monomial(i) for i in range(N + 1)]
    for m in range(N + 1):
        for n in range(N + 1):
            res = residual_fn(mono[m], mono[n])
            if res:
                return _fail(N, m, n, res, condition)
    return RBReport(True, N)


def check_compatible(P1: OpExpr, P2: OpExpr, N: int = DEFAULT_BOUND) -> RBReport:
    """``RB(P1, P2) + RB(P2, P1) = 0`` on basis pairs, i.e. all ``c1 P1 + c2 P2`` are RBOs."""
    _check_bound(N)
    for name, P in (("P1", P1), ("P2", P2)):
        rep = check_rb(P, N)
        if not rep:
            raise PreconditionError(f"{name} is not a Rota-Baxter operator up to degree {N}",
                                    name, rep)
    E1, E2 = _Evaluator(P1), _Evaluator(P2)
    return _pair_check(N, lambda u, v: _rb(E1, E2, u, v) + _rb(E2, E1, u, v), "compatibility")


def check_consistent(P: OpExpr, Q: OpExpr, N: int = DEFAULT_BOUND) -> RBReport:
    """``RB(Q,Q) = RB(P,Q) + RB(Q,P)``, cross-checked against ``check_rb(P - Q)``."""
    _check_bound(N)
    rep = check_rb(P, N)
    if not rep:
        raise PreconditionError(f"P is not a Rota-Baxter operator up to degree {N}", "P", rep)
    EP, EQ = _Evaluator(P), _Evaluator(Q)
    report = _pair_check(
        N, lambda u, v: _rb(EQ, EQ, u, v) - _rb(EP, EQ, u, v) - _rb(EQ, EP, u, v), "consistency")
    diff = check_rb(LinComb(((Fraction(1), P), (Fraction(-1), Q))), N)
    if diff.holds != report.holds:  # pragma: no cover - would indicate an engine bug
        raise AssertionError("consistency identity disagrees with the RB check of P - Q")
    return report


def star(P: OpExpr, u: Poly, v: Poly) -> Poly:
    """The double product ``P(u) v + u P(v)``."""
    E = _Evaluator(P)
    return E.apply(u) * v + u * E.apply(v)


def functional_consistency(f, P: OpExpr, N: int = DEFAULT_BOUND) -> RBReport:
    """Multiplicativity ``f(u *_P v) = f(u) f(v)`` on basis pairs whose product has degree <= N.

    ``f`` is a value table (anything with ``values`` and ``bound``) on ``x^0..x^bound``.
    """
    _check_bound(N)
    values = list(f.values)
    if len(values) < N + 1:
        raise ValueError(f"functional table has {len(values)} values; bound {N} needs {N + 1}")
    rep = check_rb(P, N)
    if not rep:
        raise PreconditionError(f"P is not a Rota-Baxter operator up to degree {N}", "P", rep)
    E = _Evaluator(P)
    for n in range(N + 1):
        for m in range(n + 1):
            prod = E.image(m).shift(n) + E.image(n).shift(m)
            if prod.degree > N:
                continue
            lhs = sum((c * values[i] for i, c in prod.terms()), Fraction(0))
            diff = lhs - values[m] * values[n]
            if diff:
                return _fail(N, m, n, Poly.constant(diff), "multiplicativity")
    return RBReport(True, N)


def differential_law_witness(P: OpExpr, N: int = DEFAULT_BOUND) -> Poly | None:
    """Return ``r`` with ``d/dx P(x^n) = r x^n`` for ``n <= N``, or ``None``.

    Monomial families that expose a residue rule are additionally checked for
    every ``n``; a failure there also yields ``None``.
    """
    _check_bound(N)
    E = _Evaluator(P)
    r = E.image(0).derivative()
    for n in range(1, N + 1):
        if E.image(n).derivative() != r.shift(n):
            return None
    if isinstance(P, FamilyOp):
        symbolic = getattr(P.family, "differential_law_symbolic", None)
        if symbolic is not None:
            verdict = symbolic()
            if verdict is False:
                return None
    return r


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def op_to_json(P: OpExpr) -> dict:
    if isinstance(P, IntegralFrom):
        return {"op": "IntegralFrom", "a": rational_to_json(P.a)}
    if isinstance(P, MultiplyBy):
        return {"op": "MultiplyBy", "r": P.r.to_json()}
    if isinstance(P, EvalAt):
        return {"op": "EvalAt", "a": rational_to_json(P.a)}
    if isinstance(P, TableOp):
        return {"op": "MonomialTable", "table": P.table.to_json()}
    if isinstance(P, FamilyOp):
        return {"op": "MonomialFamily", "family": P.family.to_json()}
    if isinstance(P, Compose):
        return {"op": "Compose", "outer": op_to_json(P.outer), "inner": op_to_json(P.inner)}
    if isinstance(P, LinComb):
        return {"op": "LinComb",
                "terms": [[rational_to_json(c), op_to_json(p)] for c, p in P.terms]}
    if isinstance(P, Zero):
        return {"op": "Zero"}
    raise TypeError(f"not an operator term: {P!r}")


def op_from_json(data: dict) -> OpExpr:
    if not isinstance(data, dict) or "op" not in data:
        raise ValueError(f"operator JSON must be an object with an 'op' tag, got {data!r}")
    tag = data["op"]
    try:
        if tag == "IntegralFrom":
            return IntegralFrom(as_rational(data.get("a", 0)))
        if tag == "MultiplyBy":
            return MultiplyBy(Poly.from_json(data["r"]))
        if tag == "EvalAt":
            return EvalAt(as_rational(data["a"]))
        if tag == "MonomialTable":
            from .monomial_rbo import MonomialTable

            return TableOp(MonomialTable.from_json(data["table"]))
        if tag == "MonomialFamily":
            from .monomial_rbo import family_from_json

            return FamilyOp(family_from_json(data["family"]))
        if tag == "Compose":
            return Compose(op_from_json(data["outer"]), op_from_json(data["inner"]))
        if tag == "LinComb":
            return LinComb(tuple((as_rational(c), op_from_json(p)) for c, p in data["terms"]))
        if tag == "Zero":
            return Zero()
    except KeyError as exc:
        raise ValueError(f"operator {tag!r} is missing field {exc.args[0]!r}") from None
    raise ValueError(f"unknown operator tag {tag!r}")


__all__ = [
    "Compose", "Counterexample", "DEFAULT_BOUND", "EvalAt", "FamilyOp", "IntegralFrom", "J",
    "LinComb", "MultiplyBy", "OpExpr", "PreconditionError", "RBReport", "TableOp",
    "TableRangeError", "Zero", "apply", "check_compatible", "check_consistent", "check_rb",
    "differential_law_witness", "evaluator", "functional_consistency", "op_from_json",
    "op_to_json", "premultiply", "rb_form", "scaled", "star",
]
