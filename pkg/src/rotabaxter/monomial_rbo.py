"""Monomial Rota-Baxter operators ``P(x^n) = beta(n) x^theta(n)``.

Closed-form families are frozen dataclasses exposing ``term(n)``; finite
truncations are :class:`MonomialTable`.  Families whose theta and 1/beta are
affine on residue classes also expose a :class:`ResidueRule`, which lets
:func:`verify_family_conditions` decide the defining identities for *all*
``m, n`` by comparing polynomials in the class indices.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

from .averaging_codec import AveragingSeq, CodecError, ThetaTable, phi, psi
from .exact_poly import Poly, Scalar, as_rational, rational_to_json
from .linear_op import (
    DEFAULT_BOUND,
    FamilyOp,
    J,
    OpExpr,
    RBReport,
    TableOp,
    TableRangeError,
    _fail,
    _rb,
    apply,
    evaluator,
    op_from_json,
    op_to_json,
    scaled,
)

# ---------------------------------------------------------------------------
# beta rules and residue rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReciprocalTheta:
    """``beta(n) = c / theta(n)``."""

    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", as_rational(self.c))
        if not self.c:
            raise ValueError("reciprocal rule needs c != 0")

    def to_json(self) -> dict:
        return {"rule": "ReciprocalTheta", "c": rational_to_json(self.c)}


@dataclass(frozen=True)
class PeriodSeeds:
    """``beta(l*d + j) = seeds[j] / (l + 1)``."""

    seeds: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(as_rational(s) for s in self.seeds))
        if not self.seeds or any(not s for s in self.seeds):
            raise ValueError("period seeds must be nonzero")

    def to_json(self) -> dict:
        return {"rule": "PeriodSeeds", "seeds": [rational_to_json(s) for s in self.seeds]}


BetaRule = Union[ReciprocalTheta, PeriodSeeds]


@dataclass(frozen=True)
class ResidueEntry:
    """On the class ``n = l*M + j``: ``theta = a*l + b`` and ``beta = num / (p*l + q)``."""

    a: int
    b: int
    num: Fraction
    p: Fraction
    q: Fraction


@dataclass(frozen=True)
class ResidueRule:
    modulus: int
    entries: tuple[Optional[ResidueEntry], ...]  # None marks a zero class

    def term(self, n: int) -> tuple[Fraction, int]:
        ell, j = divmod(n, self.modulus)
        e = self.entries[j]
        if e is None:
            return Fraction(0), 0
        return e.num / (e.p * ell + e.q), e.a * ell + e.b


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


class _FamilyBase:
    def residue_rule(self) -> ResidueRule | None:
        return None

    def table(self, N: int) -> MonomialTable:
        return MonomialTable.from_source(self, N)

    def op(self) -> FamilyOp:
        return FamilyOp(self)

    def differential_law_symbolic(self) -> bool | None:
        """Decide ``d/dx P(x^n) = r x^n`` for every ``n`` from the residue rule."""
        rule = self.residue_rule()
        if rule is None:
            return None
        beta0, theta0 = rule.term(0)
        if not beta0:
            return all(e is None for e in rule.entries)
        C = beta0 * theta0
        M = rule.modulus
        for j, e in enumerate(rule.entries):
            if e is None:
                return False
            if e.a != M or e.b != j + theta0:
                return False
            if e.num * e.a != C * e.p or e.num * e.b != C * e.q:
                return False
        return True


@dataclass(frozen=True)
class Nondegenerate(_FamilyBase):
    avg: AveragingSeq
    beta_rule: BetaRule

    def __post_init__(self):
        if isinstance(self.beta_rule, PeriodSeeds) and len(self.beta_rule.seeds) != self.avg.d:
            raise ValueError("number of period seeds must equal d")

    def term(self, n: int) -> tuple[Fraction, int]:
        theta = self.avg.theta(n)
        if isinstance(self.beta_rule, ReciprocalTheta):
            return self.beta_rule.c / theta, theta
        ell, j = divmod(n, self.avg.d)
        return self.beta_rule.seeds[j] / (ell + 1), theta

    def residue_rule(self) -> ResidueRule:
        d = self.avg.d
        entries = []
        for j, s in enumerate(self.avg.sigma):
            if isinstance(self.beta_rule, ReciprocalTheta):
                entries.append(ResidueEntry(d, s * d, self.beta_rule.c, Fraction(d), Fraction(s * d)))
            else:
                entries.append(ResidueEntry(d, s * d, self.beta_rule.seeds[j], Fraction(1), Fraction(1)))
        return ResidueRule(d, tuple(entries))

    def to_json(self) -> dict:
        return {"family": "Nondegenerate", "avg": self.avg.to_json(),
                "beta_rule": self.beta_rule.to_json()}


@dataclass(frozen=True)
class DegenerateMultiples(_FamilyBase):
    """Support ``kN``: ``P(x^{km}) = inner_beta(m) x^{k * inner_theta(m)}``, zero elsewhere.

    ``inner`` describes ``theta~/k`` (an averaging sequence) and ``beta~``.
    """

    k: int
    inner: Nondegenerate

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError("k must be a positive integer")

    def term(self, n: int) -> tuple[Fraction, int]:
        m, i = divmod(n, self.k)
        if i:
            return Fraction(0), 0
        beta, eta = self.inner.term(m)
        return beta, self.k * eta

    def residue_rule(self) -> ResidueRule:
        inner = self.inner.residue_rule()
        k, d = self.k, inner.modulus
        entries: list[Optional[ResidueEntry]] = []
        for j in range(k * d):
            jj, i = divmod(j, k)
            e = inner.entries[jj]
            if i or e is None:
                entries.append(None)
            else:
                entries.append(ResidueEntry(k * e.a, k * e.b, e.num, e.p, e.q))
        return ResidueRule(k * d, tuple(entries))

    def to_json(self) -> dict:
        return {"family": "DegenerateMultiples", "k": self.k, "inner": self.inner.to_json()}


@dataclass(frozen=True)
class DegenerateComplement(_FamilyBase):
    """Support ``N \\ kN``: ``theta(km+i) = k(m+t)`` with ``beta = c / theta``."""

    k: int
    t: int
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", as_rational(self.c))
        if not isinstance(self.k, int) or self.k < 2:
            raise ValueError("k must be an integer >= 2")
        if not isinstance(self.t, int) or self.t < 1:
            raise ValueError("t must be a positive integer")
        if not self.c:
            raise ValueError("c must be nonzero")

    def term(self, n: int) -> tuple[Fraction, int]:
        m, i = divmod(n, self.k)
        if not i:
            return Fraction(0), 0
        theta = self.k * (m + self.t)
        return self.c / theta, theta

    def residue_rule(self) -> ResidueRule:
        k, t = self.k, self.t
        entries: list[Optional[ResidueEntry]] = [None]
        entries += [ResidueEntry(k, k * t, self.c, Fraction(k), Fraction(k * t))] * (k - 1)
        return ResidueRule(k, tuple(entries))

    def to_json(self) -> dict:
        return {"family": "DegenerateComplement", "k": self.k, "t": self.t,
                "c": rational_to_json(self.c)}


@dataclass(frozen=True)
class ProjectorComposite(_FamilyBase):
    """``base`` precomposed with the projector onto even (or odd) monomials."""

    parity: str
    base: Any  # OpExpr

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError("parity must be 'even' or 'odd'")

    def term(self, n: int) -> tuple[Fraction, int]:
        if (n % 2 == 0) != (self.parity == "even"):
            return Fraction(0), 0
        img = apply(self.base, Poly.monomial(n))
        if not img:
            return Fraction(0), 0
        terms = list(img.terms())
        if len(terms) != 1:
            raise ValueError(f"base operator maps x^{n} to a non-monomial {img}")
        (theta, beta), = terms
        return beta, theta

    def to_json(self) -> dict:
        return {"family": "ProjectorComposite", "parity": self.parity, "base": op_to_json(self.base)}


MonomialFamily = Union[Nondegenerate, DegenerateMultiples, DegenerateComplement, ProjectorComposite]


def _beta_rule_from_json(data: dict) -> BetaRule:
    rule = data.get("rule")
    if rule == "ReciprocalTheta":
        return ReciprocalTheta(as_rational(data["c"]))
    if rule == "PeriodSeeds":
        return PeriodSeeds(tuple(as_rational(s) for s in data["seeds"]))
    raise ValueError(f"unknown beta rule {rule!r}")


def family_from_json(data: dict) -> MonomialFamily:
    if not isinstance(data, dict):
        raise ValueError(f"family JSON must be an object, got {data!r}")
    kind = data.get("family")
    try:
        if kind == "Nondegenerate":
            return Nondegenerate(AveragingSeq.from_json(data["avg"]),
                                 _beta_rule_from_json(data["beta_rule"]))
        if kind == "DegenerateMultiples":
            inner = family_from_json(data["inner"])
            return build_degenerate_multiples(int(data["k"]), inner)
        if kind == "DegenerateComplement":
            return DegenerateComplement(int(data["k"]), int(data["t"]), as_rational(data["c"]))
        if kind == "ProjectorComposite":
            if "base" in data:
                return ProjectorComposite(data["parity"], op_from_json(data["base"]))
            return build_projector_composite(data["parity"]).family
    except KeyError as exc:
        raise ValueError(f"family {kind!r} is missing field {exc.args[0]!r}") from None
    raise ValueError(f"unknown family {kind!r}")


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialTable:
    rows: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        norm = []
        for beta, theta in self.rows:
            beta = as_rational(beta)
            theta = int(theta)
            if theta < 0:
                raise ValueError("theta values must be nonnegative")
            norm.append((beta, theta if beta else 0))
        if not norm:
            raise ValueError("monomial table must have at least one row")
        object.__setattr__(self, "rows", tuple(norm))

    @property
    def bound(self) -> int:
        return len(self.rows) - 1

    def term(self, n: int) -> tuple[Fraction, int]:
        if n < 0 or n > self.bound:
            raise TableRangeError(f"x^{n} lies outside the table (bound {self.bound})")
        return self.rows[n]

    def beta(self, n: int) -> Fraction:
        return self.term(n)[0]

    def theta(self, n: int) -> int:
        return self.term(n)[1]

    def support(self) -> list[int]:
        return [n for n, (b, _) in enumerate(self.rows) if b]

    def is_degenerate(self) -> bool:
        return any(not b for b, _ in self.rows)

    def op(self) -> TableOp:
        return TableOp(self)

    @classmethod
    def from_source(cls, src, N: int) -> MonomialTable:
        return cls(tuple(src.term(n) for n in range(N + 1)))

    @classmethod
    def from_operator(cls, P: OpExpr, N: int) -> MonomialTable:
        """Tabulate an operator that maps monomials to monomials."""
        E = evaluator(P)
        rows = []
        for n in range(N + 1):
            img = E.image(n)
            terms = list(img.terms())
            if len(terms) > 1:
                raise ValueError(f"operator maps x^{n} to a non-monomial {img}")
            rows.append((terms[0][1], terms[0][0]) if terms else (Fraction(0), 0))
        return cls(tuple(rows))

    def to_json(self) -> dict:
        return {"rows": [[rational_to_json(b), t] for b, t in self.rows]}

    @classmethod
    def from_json(cls, data) -> MonomialTable:
        rows = data["rows"] if isinstance(data, dict) else data
        return cls(tuple((as_rational(b), int(t)) for b, t in rows))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "beta_num", "beta_den", "theta"])
        for n, (b, t) in enumerate(self.rows):
            w.writerow([n, b.numerator, b.denominator, t])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> MonomialTable:
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if rows and not rows[0][0].strip().lstrip("-").isdigit():
            rows = rows[1:]
        out = []
        for expected, row in enumerate(rows):
            if len(row) != 4:
                raise ValueError(f"table CSV rows need 4 fields, got {row!r}")
            n, num, den, theta = (int(c) for c in row)
            if n != expected:
                raise ValueError(f"table CSV rows must be consecutive from 0; got n={n}")
            out.append((Fraction(num, den), theta))
        return cls(tuple(out))


def check_rb_table(table: MonomialTable) -> RBReport:
    """RB identity on every basis pair whose evaluation stays inside the table."""
    E = evaluator(table.op())
    N = table.bound
    rows = table.rows
    for n in range(N + 1):
        bn, tn = rows[n]
        for m in range(n + 1):
            bm, tm = rows[m]
            if (bn and m + tn > N) or (bm and n + tm > N):
                continue
            res = _rb(E, E, Poly.monomial(m), Poly.monomial(n))
            if res:
                return _fail(N, m, n, res, mode="window")
    return RBReport(True, N, mode="window")


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def build_nondegenerate(avg: AveragingSeq, c: Scalar) -> Nondegenerate:
    c = as_rational(c)
    if not c:
        raise ValueError("c must be nonzero")
    return Nondegenerate(avg, ReciprocalTheta(c))


def build_period_seeds(d: int, seeds) -> Nondegenerate:
    if not isinstance(d, int) or d < 2:
        raise ValueError("period-seed families need d >= 2")
    seeds = tuple(as_rational(s) for s in seeds)
    if len(seeds) != d:
        raise ValueError(f"expected {d} seeds, got {len(seeds)}")
    if any(not s for s in seeds):
        raise ValueError("seeds must be nonzero")
    return Nondegenerate(AveragingSeq(d, (1,) * d), PeriodSeeds(seeds))


def build_degenerate_multiples(k: int, inner: Nondegenerate,
                               verify_bound: int = DEFAULT_BOUND) -> MonomialFamily:
    """Support ``kN`` built from an inner nondegenerate rule; ``k = 1`` returns ``inner``."""
    if not isinstance(inner, Nondegenerate):
        raise TypeError("inner rule must be a Nondegenerate family")
    rep = verify_family_conditions(inner, verify_bound)
    if not rep:
        cx = rep.counterexample
        raise ValueError(f"inner rule violates the {cx.condition} condition at "
                         f"(m, n) = ({cx.m}, {cx.n})")
    if k == 1:
        return inner
    return DegenerateMultiples(k, inner)


def build_degenerate_complement(k: int, t: int, c: Scalar) -> DegenerateComplement:
    return DegenerateComplement(k, t, as_rational(c))


def build_projector_composite(parity: str) -> FamilyOp:
    if parity == "even":
        base = scaled(2, J(0, Poly.x()))
    elif parity == "odd":
        base = scaled(2, J(0))
    else:
        raise ValueError("parity must be 'even' or 'odd'")
    return FamilyOp(ProjectorComposite(parity, base))


# ---------------------------------------------------------------------------
# family conditions
# ---------------------------------------------------------------------------


def _conditions_at(term, m: int, n: int) -> tuple[str, Poly] | None:
    bm, tm = term(m)
    bn, tn = term(n)
    if not bn:
        return None
    A = m + tn
    bA, tA = term(A)
    if not bm:
        if bA:
            return "nul_closure", Poly.constant(bA)
        return None
    B = tm + n
    bB, tB = term(B)
    if not bA:
        return "supp_closure", Poly.monomial(A)
    if not bB:
        return "supp_closure", Poly.monomial(B)
    if tm + tn != tA:
        return "averaging", Poly.constant(tm + tn - tA)
    if tm + tn != tB:
        return "averaging", Poly.constant(tm + tn - tB)
    diff = bm * bn - bA * bn - bB * bm
    if diff:
        return "beta", Poly.constant(diff)
    return None


def _tablewise_conditions(src, N: int) -> RBReport:
    limit = src.bound if isinstance(src, MonomialTable) else None

    def term(i):
        if limit is not None and i > limit:
            raise TableRangeError
        return src.term(i)

    for m in range(N + 1):
        for n in range(N + 1):
            try:
                got = _conditions_at(term, m, n)
            except TableRangeError:
                continue
            if got is not None:
                return _fail(N, m, n, got[1], got[0], mode="table")
    return RBReport(True, N, mode="table")


class _Bi:
    """Polynomial in the two class indices ``(l1, l2)`` with rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, c: dict[tuple[int, int], Fraction]):
        self.c = {k: v for k, v in c.items() if v}

    @classmethod
    def affine(cls, const, c1=0, c2=0) -> _Bi:
        return cls({(0, 0): Fraction(const), (1, 0): Fraction(c1), (0, 1): Fraction(c2)})

    def __add__(self, other: _Bi) -> _Bi:
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, Fraction(0)) + v
        return _Bi(out)

    def __sub__(self, other: _Bi) -> _Bi:
        return self + _Bi({k: -v for k, v in other.c.items()})

    def __mul__(self, other: _Bi) -> _Bi:
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in self.c.items():
            for (k, l), w in other.c.items():
                key = (i + k, j + l)
                out[key] = out.get(key, Fraction(0)) + v * w
        return _Bi(out)

    def is_zero(self) -> bool:
        return not self.c


def _entry_value(rule: ResidueRule, j: int, quot: _Bi):
    """theta and (num, den) of beta on class ``j`` at class index ``quot``."""
    e = rule.entries[j]
    if e is None:
        return None
    theta = _Bi.affine(e.b) + quot * _Bi.affine(e.a)
    den = _Bi.affine(e.q) + quot * _Bi.affine(e.p)
    return theta, e.num, den


def _symbolic_conditions(rule: ResidueRule) -> tuple[int, int, str] | None:
    """First residue pair ``(j1, j2)`` violating a condition for some class indices."""
    M = rule.modulus
    for e in rule.entries:
        if e is None:
            continue
        if e.a % M or e.b < 0 or e.a < 0:
            raise _NoSymbolic
        # denominators must not vanish for l >= 0
        if not e.q or (e.p and (e.p > 0) != (e.q > 0)):
            raise _NoSymbolic
    L1, L2 = _Bi.affine(0, 1, 0), _Bi.affine(0, 0, 1)
    for j1 in range(M):
        for j2 in range(M):
            e1, e2 = rule.entries[j1], rule.entries[j2]
            if e2 is None:
                continue
            # A = m + theta(n) = (l1 + (a2/M) l2 + (j1 + b2) // M) * M + (j1 + b2) % M
            rA = (j1 + e2.b) % M
            qA = L1 + _Bi.affine((j1 + e2.b) // M, 0, e2.a // M)
            if e1 is None:
                if rule.entries[rA] is not None:
                    return j1, j2, "nul_closure"
                continue
            rB = (j2 + e1.b) % M
            qB = L2 + _Bi.affine((j2 + e1.b) // M, e1.a // M, 0)
            if rule.entries[rA] is None or rule.entries[rB] is None:
                return j1, j2, "supp_closure"
            th_m, num_m, den_m = _entry_value(rule, j1, L1)
            th_n, num_n, den_n = _entry_value(rule, j2, L2)
            th_A, num_A, den_A = _entry_value(rule, rA, qA)
            th_B, num_B, den_B = _entry_value(rule, rB, qB)
            total = th_m + th_n
            if not (total - th_A).is_zero() or not (total - th_B).is_zero():
                return j1, j2, "averaging"
            # beta(m)beta(n) = beta(A)beta(n) + beta(B)beta(m), cleared of denominators
            lhs = den_A * den_B * _Bi.affine(num_m * num_n)
            rhs = den_m * den_B * _Bi.affine(num_A * num_n) + den_n * den_A * _Bi.affine(num_B * num_m)
            if not (lhs - rhs).is_zero():
                return j1, j2, "beta"
    return None


class _NoSymbolic(Exception):
    pass


def verify_family_conditions(fam, N: int = DEFAULT_BOUND) -> RBReport:
    """Check the four sufficient conditions for a monomial RBO.

    These are: zero set closed under adding theta(supp); theta an averaging
    map on the support (both orderings); the beta identity; support closed
    under adding theta(supp).  Families with a residue rule are decided for
    all ``m, n`` (``mode="symbolic"``); tables and other families are checked
    for ``m, n <= N``.
    """
    rule = fam.residue_rule() if hasattr(fam, "residue_rule") else None
    table_report = _tablewise_conditions(fam, N)
    if rule is None:
        return table_report
    try:
        bad = _symbolic_conditions(rule)
    except _NoSymbolic:
        return table_report
    if bad is None:
        if not table_report:  # pragma: no cover - engine consistency guard
            raise AssertionError("symbolic and tablewise condition checks disagree")
        return RBReport(True, N, mode="symbolic")
    j1, j2, cond = bad
    M = rule.modulus
    for s in range(0, 64):
        for l1 in range(s + 1):
            m, n = l1 * M + j1, (s - l1) * M + j2
            got = _conditions_at(fam.term, m, n)
            if got is not None:
                return _fail(N, m, n, got[1], got[0], mode="symbolic")
    raise AssertionError(f"symbolic {cond} failure on classes ({j1}, {j2}) has no small witness")


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuppStructure:
    e: int
    C: tuple[int, ...]
    residues: tuple[int, ...]
    gaps: tuple[int, ...]
    frobenius: int
    determining_set: tuple[int, ...]
    confidence_bound: int

    def to_json(self) -> dict:
        return {"e": self.e, "C": list(self.C), "residues": list(self.residues),
                "gaps": list(self.gaps), "frobenius": self.frobenius,
                "determining_set": list(self.determining_set),
                "confidence_bound": self.confidence_bound}


@dataclass(frozen=True)
class ClassificationReport:
    is_rbo: RBReport
    degenerate: bool | None = None
    injective: bool | None = None
    recovered: MonomialFamily | None = None
    supp_structure: SuppStructure | None = None
    poly_theta: tuple[int, Fraction] | None = None
    supp_closure_on_window: bool | None = None
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "is_rbo": self.is_rbo.to_json(),
            "degenerate": self.degenerate,
            "injective": self.injective,
            "recovered": None if self.recovered is None else self.recovered.to_json(),
            "supp_structure": None if self.supp_structure is None else self.supp_structure.to_json(),
            "poly_theta": None if self.poly_theta is None else
            {"k": self.poly_theta[0], "c": rational_to_json(self.poly_theta[1])},
            "supp_closure_on_window": self.supp_closure_on_window,
            "notes": list(self.notes),
        }


def _supp_closure_on_window(table: MonomialTable) -> bool:
    supp = table.support()
    sset = set(supp)
    N = table.bound
    for n in supp:
        t = table.theta(n)
        for m in supp:
            if m + t <= N and m + t not in sset:
                return False
    return True


def _recover_nondegenerate(table: MonomialTable) -> tuple[AveragingSeq | None, MonomialFamily | None, str]:
    thetas = ThetaTable(tuple(t for _, t in table.rows))
    try:
        avg = phi(thetas)
    except CodecError as exc:
        return None, None, f"theta not decodable: {exc}"
    if psi(avg, table.bound) != thetas:
        return avg, None, "theta is not the expansion of its recovered averaging sequence"
    c = table.beta(0) * table.theta(0)
    if all(b * t == c for b, t in table.rows):
        return avg, Nondegenerate(avg, ReciprocalTheta(c)), "reciprocal rule"
    if all(s == 1 for s in avg.sigma):
        d = avg.d
        seeds = tuple(table.beta(j) for j in range(d))
        if all(b * (n // d + 1) == seeds[n % d] for n, (b, _) in enumerate(table.rows)):
            return avg, Nondegenerate(avg, PeriodSeeds(seeds)), "period-seed rule"
    return avg, None, "beta matches no closed-form rule"


def classify(table: MonomialTable) -> ClassificationReport:
    if table.bound < 16:
        raise ValueError("classification needs a table of bound >= 16")
    rep = check_rb_table(table)
    if not rep:
        return ClassificationReport(rep)
    notes: list[str] = []
    if table.is_degenerate():
        struct = None
        closure = _supp_closure_on_window(table)
        try:
            struct = support_structure(table)
        except ValueError as exc:
            notes.append(f"support structure unavailable: {exc}")
        return ClassificationReport(rep, degenerate=True, injective=False,
                                    supp_structure=struct, supp_closure_on_window=closure,
                                    notes=tuple(notes))
    avg, fam, how = _recover_nondegenerate(table)
    notes.append(how)
    injective = fam is not None and avg is not None and avg.d == 1
    poly = detect_polynomial_theta(table)
    return ClassificationReport(rep, degenerate=False, injective=injective, recovered=fam,
                                poly_theta=poly, supp_closure_on_window=True,
                                notes=tuple(notes))


def _finite_difference(seq: list, order: int) -> list:
    for _ in range(order):
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return seq


def detect_polynomial_theta(table: MonomialTable) -> tuple[int, Fraction] | None:
    """``(k, c)`` when theta and 1/beta are polynomial on the table, else ``None``.

    For an RBO the polynomial case forces ``theta(n) = n + k`` and
    ``1/beta(n) = c (n + k)``; a table that is polynomial yet not of this
    shape is rejected.
    """
    if table.is_degenerate():
        raise ValueError("detect_polynomial_theta needs a nondegenerate table")
    rep = check_rb_table(table)
    if not rep:
        raise ValueError("table fails the Rota-Baxter check")
    N = table.bound
    order = N // 2 + 1
    thetas = [Fraction(t) for _, t in table.rows]
    alphas = [1 / b for b, _ in table.rows]
    if any(_finite_difference(thetas, order)) or any(_finite_difference(alphas, order)):
        return None
    k = table.theta(0)
    c = alphas[0] / k if k else None
    if c is None or any(thetas[n] != n + k or alphas[n] != c * (n + k) for n in range(N + 1)):
        raise ValueError("polynomial theta/alpha contradict the affine form forced for RBOs")
    return k, c


def _numerical_semigroup_gaps(gens: list[int]) -> list[int]:
    gens = sorted(set(gens))
    if math.gcd(*gens) != 1:
        raise ValueError("generators of a numerical semigroup must be coprime")
    if gens[0] == 1:
        return []
    limit = gens[0] * gens[-1] + 1
    reach = [False] * (limit + 1)
    reach[0] = True
    for i in range(1, limit + 1):
        reach[i] = any(g <= i and reach[i - g] for g in gens)
    return [i for i in range(1, limit + 1) if not reach[i]]


def support_structure(table: MonomialTable) -> SuppStructure:
    """Residue-class decomposition of the support of a degenerate table."""
    rep = check_rb_table(table)
    if not rep:
        raise ValueError("table fails the Rota-Baxter check")
    N = table.bound
    supp = table.support()
    if not supp:
        raise ValueError("T empty: the table is the zero operator")
    if not _supp_closure_on_window(table):
        raise ValueError("hypothesis violated: supp + theta(supp) is not contained in supp")
    T = sorted({table.theta(n) for n in supp if table.theta(n) <= N})
    if not T:
        raise ValueError("T empty: no theta value of the support lies within the table")
    e = math.gcd(*T)
    gaps = _numerical_semigroup_gaps([t // e for t in T])
    f = max(gaps) if gaps else 0
    sset = set(supp)
    residues: list[int] = []
    C: list[int] = []
    for i in range(e):
        cls_ = [n for n in supp if n % e == i]
        if not cls_:
            continue
        s = next((s for s in cls_ if all(x in sset for x in range(s, N + 1, e))), None)
        if s is None or s + e > N:
            # no tail visible on the window: the whole class counts as finite
            C.extend(cls_)
            continue
        residues.append(s)
        C.extend(n for n in cls_ if n < s)
    if len(residues) >= e:
        raise ValueError("support meets every residue class mod e; not a degenerate shape")
    reachable = {a + t for a in supp for t in T if a + t <= N}
    E = [n for n in supp if n not in reachable]
    return SuppStructure(e, tuple(sorted(C)), tuple(residues), tuple(gaps), f,
                         tuple(E), N)


def induced_nondegenerate(table: MonomialTable, struct: SuppStructure, s: int,
                          out_bound: int | None = None) -> MonomialTable:
    """Table of ``P0(x^n) = P(x^sigma(n))`` with ``sigma(l*e + r) = (f + l) e + s``."""
    N = table.bound
    if s < 0 or s > N or not table.beta(s):
        raise ValueError(f"s = {s} is not in the support")
    e, f = struct.e, struct.frobenius

    def sigma(n: int) -> int:
        ell = n // e
        return (f + ell) * e + s

    top = ((N - s) // e - f) * e + e - 1
    if top < 0:
        raise ValueError("insufficient table range for any induced row")
    if out_bound is None:
        out_bound = top
    elif out_bound > top:
        raise ValueError(f"insufficient table range: bound {out_bound} needs sigma({out_bound}) = "
                         f"{sigma(out_bound)} > {N}")
    rows = [table.term(sigma(n)) for n in range(out_bound + 1)]
    if any(not b for b, _ in rows):
        raise ValueError("sigma left the support; induced operator would be degenerate")
    for m in range(out_bound + 1):
        t = rows[m][1]
        for n in range(out_bound + 1):
            if sigma(n + t) != sigma(n) + t:
                raise ValueError(f"shift identity fails at (m, n) = ({m}, {n})")
    P0 = MonomialTable(tuple(rows))
    rep = check_rb_table(P0)
    if not rep:
        raise ValueError(f"induced operator fails the Rota-Baxter check: {rep.to_json()}")
    return P0
