"""The ten acceptance criteria, runnable from tests and from ``rotabaxter selftest``.

Each criterion is exact (no tolerances) and has a wall-clock budget; a
criterion passes only if every check holds and it finishes within budget.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .averaging_codec import AveragingSeq, phi, psi
from .double_product import (
    Factorization,
    check_iso,
    check_iso_general,
    check_multiplicative,
    classify_rbo_xk,
    even_power_check,
    init_point,
    measure_of,
)
from .exact_poly import Poly
from .linear_op import J, LinComb, check_compatible, check_rb, evaluator
from .monomial_rbo import (
    MonomialTable,
    Nondegenerate,
    build_degenerate_complement,
    build_degenerate_multiples,
    build_nondegenerate,
    build_period_seeds,
    build_projector_composite,
    classify,
    support_structure,
    verify_family_conditions,
)

DEFAULT_SEED = 20240229


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.number:2d} {self.name}: {self.detail} "
                f"({self.elapsed:.2f}s / {self.budget:g}s)")

    def to_json(self) -> dict:
        # elapsed is left out so reports stay byte-identical across runs
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "budget": self.budget}


class _Fail(Exception):
    pass


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise _Fail(msg)


def rand_rational(rng: random.Random, nonzero: bool = True, span: int = 9) -> Fraction:
    while True:
        q = Fraction(rng.randint(-span, span), rng.randint(1, span))
        if q or not nonzero:
            return q


def rand_poly(rng: random.Random, deg: int) -> Poly:
    coeffs = [rand_rational(rng, nonzero=False, span=5) for _ in range(deg)]
    coeffs.append(rand_rational(rng, span=5))
    return Poly(coeffs)


def rand_avg(rng: random.Random, dmax: int, smax: int) -> AveragingSeq:
    d = rng.randint(1, dmax)
    return AveragingSeq(d, tuple(rng.randint(1, smax) for _ in range(d)))


def _rand_nondegenerate(rng: random.Random) -> Nondegenerate:
    if rng.random() < 0.5:
        return build_nondegenerate(rand_avg(rng, 6, 8), rand_rational(rng))
    d = rng.randint(2, 6)
    return build_period_seeds(d, tuple(rand_rational(rng) for _ in range(d)))


# ---------------------------------------------------------------------------


def c1_constructors(rng: random.Random) -> str:
    kinds = ("nondegenerate", "period_seeds", "multiples", "complement")
    for i in range(200):
        kind = kinds[i % 4]
        if kind == "nondegenerate":
            fam = build_nondegenerate(rand_avg(rng, 6, 8), rand_rational(rng))
        elif kind == "period_seeds":
            d = rng.randint(2, 6)
            fam = build_period_seeds(d, tuple(rand_rational(rng) for _ in range(d)))
        elif kind == "multiples":
            fam = build_degenerate_multiples(rng.randint(1, 4), _rand_nondegenerate(rng))
        else:
            fam = build_degenerate_complement(rng.randint(2, 4), rng.randint(1, 3), rand_rational(rng))
        rep = check_rb(fam.op(), 30)
        _expect(rep.holds, f"{kind} family {fam.to_json()} fails: {rep.to_json()}")
    return "200 families hold at N=30"


def c2_codec(rng: random.Random) -> str:
    for _ in range(1000):
        s = rand_avg(rng, 8, 10)
        t = psi(s, 4 * s.d * max(s.sigma))
        back = phi(t)
        _expect(back == s, f"phi(psi({s})) = {back}")
        _expect(psi(back, t.bound) == t, f"psi(phi(t)) != t for {s}")
    return "1000 roundtrips exact"


def _exam_deg_rows(parity: int, N: int) -> MonomialTable:
    # P(x^{2k+parity}) = x^{2k+2}/(k+1), zero on the other parity
    rows = []
    for n in range(N + 1):
        k, j = divmod(n, 2)
        rows.append((Fraction(1, k + 1), 2 * k + 2) if j == parity else (Fraction(0), 0))
    return MonomialTable(tuple(rows))


def c3_example_tables(rng: random.Random) -> str:
    N = 31
    fam = build_nondegenerate(AveragingSeq(2, (1, 1)), 2)
    E = evaluator(fam.op())
    for k in range(16):
        want = Poly.monomial(2 * k + 2, Fraction(1, k + 1))
        _expect(E.image(2 * k) == want and E.image(2 * k + 1) == want,
                f"d=2 example differs at k={k}")
    mult = build_degenerate_multiples(2, build_nondegenerate(AveragingSeq(1, (1,)), 1))
    comp = build_degenerate_complement(2, 1, 2)
    even, odd = _exam_deg_rows(0, N), _exam_deg_rows(1, N)
    _expect(mult.table(N) == even, "degenerate multiples example table differs")
    _expect(comp.table(N) == odd, "degenerate complement example table differs")
    _expect(MonomialTable.from_operator(build_projector_composite("even"), N) == even,
            "even projector composite differs")
    _expect(MonomialTable.from_operator(build_projector_composite("odd"), N) == odd,
            "odd projector composite differs")
    return "three example tables and both composites match for k <= 15"


def c4_injectivity(rng: random.Random) -> str:
    N = 30
    n_inj = 0
    for _ in range(200):
        fam = _rand_nondegenerate(rng)
        rep = classify(fam.table(N))
        d = fam.avg.d
        _expect(rep.is_rbo.holds and not rep.degenerate, f"{fam.to_json()} misclassified")
        _expect(rep.injective == (d == 1), f"injective={rep.injective} for d={d}: {fam.to_json()}")
        # equal period seeds are also a reciprocal rule, so compare operators, not labels
        _expect(rep.recovered is not None and rep.recovered.table(N) == fam.table(N),
                f"recovered {rep.recovered} does not reproduce {fam}")
        if d == 1:
            n_inj += 1
            k = fam.avg.sigma[0]
            c = fam.beta_rule.c
            _expect(rep.poly_theta == (k, 1 / c), f"poly_theta {rep.poly_theta} for k={k}, c={c}")
            target = MonomialTable.from_operator(LinComb(((c, J(0, Poly.monomial(k - 1))),)), N)
            _expect(fam.table(N) == target, f"table differs from c*J0 x^(k-1) for k={k}, c={c}")
    return f"200 families, {n_inj} injective, all with d=1 and P = c J0 x^(k-1)"


def c5_measures(rng: random.Random) -> str:
    for a in (Fraction(-2), Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(3)):
        for k in range(4):
            P = J(a, Poly.monomial(k))
            mu = measure_of(P, Poly.monomial(k), 2 * 15 + k + 1)
            for n in range(21):
                _expect(mu.values[n] == a ** (n + k + 1) / (n + k + 1), f"mu(x^{n}) wrong for a={a}, k={k}")
            rep = check_multiplicative(mu, k, 15)
            _expect(rep.holds, f"mu not multiplicative for a={a}, k={k}: {rep.to_json()}")
            res = classify_rbo_xk(P, k, 20)
            _expect(res.a_exact == a, f"classify_rbo_xk gave {res.a_exact} for a={a}, k={k}")
    return "20 (a, k) pairs: values, multiplicativity and recovery exact"


def c6_init_point(rng: random.Random) -> str:
    for _ in range(100):
        while True:
            r = rand_poly(rng, rng.randint(1, 4))
            a = rand_rational(rng, nonzero=False)
            if r(a):
                break
        got = init_point(J(a, r), r, 20)
        _expect(got == a, f"init_point(J_{a} ({r})) = {got}")
    for _ in range(20):
        a = rand_rational(rng, nonzero=False)
        r = Poly([-a, 1]) * rand_poly(rng, rng.randint(0, 3))
        P = J(a, r)
        fac = init_point(P, r, 20)
        _expect(isinstance(fac, Factorization), f"expected factorization for r={r}, a={a}")
        _expect(fac.reduced_law_holds, f"reduced operator violates its law for r={r}")
        Ep, Ed = evaluator(P), evaluator(fac.decomposition(a))
        for n in range(21):
            _expect(Ep.image(n) == Ed.image(n), f"factorization differs at x^{n} for r={r}, a={a}")
    return "100 generic points recovered, 20 factorizations hold to N=20"


def c7_even_power(rng: random.Random) -> str:
    for _ in range(50):
        r = rand_poly(rng, rng.randint(0, 3))
        a = rand_rational(rng, nonzero=False)
        kmax = rng.randint(0, 4)
        rep, c = even_power_check(J(a, r), r, kmax, 10, a=a)
        _expect(rep.holds and c == r(a) ** 2, f"even power identity fails for r={r}, a={a}: {rep.to_json()}")
    return "50 draws hold with c = r(a)^2"


def c8_iso(rng: random.Random) -> str:
    for k in range(4):
        rep = check_iso(k, 20)
        _expect(rep.holds, f"check_iso({k}) fails: {rep.to_json()}")
    for _ in range(20):
        r = rand_poly(rng, rng.randint(0, 3))
        a = rand_rational(rng, nonzero=False)
        rep = check_iso_general(r, a, 10)
        _expect(rep.holds, f"check_iso_general(r={r}, a={a}) fails: {rep.to_json()}")
    return "k <= 3 and 20 random (r, a) hold"


def c9_negative(rng: random.Random) -> str:
    rep = check_rb(LinComb(((Fraction(1), J(0)), (Fraction(1), J(1)))), 5)
    cx = rep.counterexample
    _expect(not rep.holds and (cx.m, cx.n) == (0, 0) and cx.residual == Poly.constant(1),
            f"J0 + J1 report {rep.to_json()}")
    rep = check_compatible(J(0), J(1), 5)
    _expect(not rep.holds and (rep.counterexample.m, rep.counterexample.n) == (0, 0),
            f"check_compatible(J0, J1) report {rep.to_json()}")
    bad = MonomialTable(tuple((Fraction(1), n + 2) if n % 2 == 0 else (Fraction(0), 0)
                              for n in range(31)))
    rep = verify_family_conditions(bad, 30)
    cx = rep.counterexample
    _expect(not rep.holds and cx.condition == "beta" and (cx.m, cx.n) == (0, 0),
            f"constant-beta table report {rep.to_json()}")
    return "all three controls fail at (0,0) as predicted"


def brute_support(table: MonomialTable) -> dict:
    """Independent scan: support, gcd of theta values, residues, finite part, gaps."""
    N = table.bound
    supp = [n for n in range(N + 1) if table.beta(n)]
    e = 0
    for n in supp:
        if table.theta(n) <= N:
            e = math.gcd(e, table.theta(n))
    classes = sorted({n % e for n in supp})
    residues, finite = [], []
    for i in classes:
        members = [n for n in supp if n % e == i]
        start = min(members)
        if members == list(range(start, N + 1, e)):
            residues.append(start)
        else:
            finite.extend(members)
    gens = sorted({table.theta(n) // e for n in supp if table.theta(n) <= N})
    reach = {0}
    top = gens[0] * gens[-1] + 1
    for v in range(1, top + 1):
        if any(v - g in reach for g in gens if v >= g):
            reach.add(v)
    gaps = [v for v in range(1, top + 1) if v not in reach]
    return {"e": e, "residues": residues, "C": finite, "gaps": gaps, "f": max(gaps, default=0)}


def c10_support(rng: random.Random) -> str:
    for parity in (0, 1):
        table = _exam_deg_rows(parity, 40)
        st = support_structure(table)
        oracle = brute_support(table)
        _expect((st.e, st.gaps, st.frobenius, st.C, st.residues) == (2, (), 0, (), (parity,)),
                f"support_structure gave {st.to_json()} for parity {parity}")
        _expect(oracle == {"e": st.e, "residues": list(st.residues), "C": list(st.C),
                           "gaps": list(st.gaps), "f": st.frobenius},
                f"brute-force scan {oracle} disagrees with {st.to_json()}")
    return "both example supports: e=2, no gaps, f=0, C empty, residues 0 and 1"


CRITERIA: tuple[tuple[int, str, float, Callable[[random.Random], str]], ...] = (
    (1, "RB soundness of constructors", 30.0, c1_constructors),
    (2, "codec roundtrip", 5.0, c2_codec),
    (3, "worked example tables", 1.0, c3_example_tables),
    (4, "injectivity trichotomy", 10.0, c4_injectivity),
    (5, "measure classification", 5.0, c5_measures),
    (6, "initialization-point formula", 10.0, c6_init_point),
    (7, "even-power identity", 10.0, c7_even_power),
    (8, "double-product isomorphisms", 10.0, c8_iso),
    (9, "negative controls", 1.0, c9_negative),
    (10, "support structure", 1.0, c10_support),
)


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    num, name, budget, fn = CRITERIA[number - 1]
    rng = random.Random(seed * 100 + num)
    t0 = time.perf_counter()
    try:
        detail = fn(rng)
        ok = True
    except _Fail as exc:
        detail, ok = str(exc), False
    except Exception as exc:  # an unexpected refusal is a failure, not a crash
        detail, ok = f"{type(exc).__name__}: {exc}", False
    elapsed = time.perf_counter() - t0
    if ok and elapsed > budget:
        ok = False
        detail += f"; over time budget ({elapsed:.2f}s > {budget:g}s)"
    return CriterionResult(num, name, ok, detail, elapsed, budget)


def run_all(seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    return [run_criterion(n, seed) for n, *_ in CRITERIA]
