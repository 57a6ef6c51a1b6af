"""Nondegenerate averaging sequences on (N, +) and their finite encoding.

A map ``theta: N -> N_{>0}`` with ``theta(m + theta(n)) = theta(m) + theta(n)``
is determined by the primitive period ``d`` of ``theta - id`` together with
``sigma_j = theta(j) / d`` for ``0 <= j < d``; conversely every finite
sequence of positive integers arises this way via
``theta(l*d + j) = (l + sigma_j) * d``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .exact_poly import Poly
from .linear_op import RBReport, _fail


class CodecError(ValueError):
    """A table cannot be decoded into an averaging sequence."""


@dataclass(frozen=True)
class AveragingSeq:
    d: int
    sigma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(self.sigma))
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"period d must be a positive integer, got {self.d!r}")
        if len(self.sigma) != self.d:
            raise ValueError(f"sigma has length {len(self.sigma)} but d = {self.d}")
        if any(not isinstance(s, int) or s < 1 for s in self.sigma):
            raise ValueError(f"sigma entries must be positive integers, got {self.sigma}")

    def theta(self, n: int) -> int:
        ell, j = divmod(n, self.d)
        return (ell + self.sigma[j]) * self.d

    def to_json(self) -> dict:
        return {"d": self.d, "sigma": list(self.sigma)}

    @classmethod
    def from_json(cls, data: dict) -> AveragingSeq:
        try:
            return cls(int(data["d"]), tuple(int(s) for s in data["sigma"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed averaging sequence {data!r}") from exc


@dataclass(frozen=True)
class ThetaTable:
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError("theta table must not be empty")

    @property
    def bound(self) -> int:
        return len(self.values) - 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "theta"])
        for n, t in enumerate(self.values):
            w.writerow([n, t])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> ThetaTable:
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if rows and not rows[0][0].strip().lstrip("-").isdigit():
            rows = rows[1:]
        values = []
        for expected, row in enumerate(rows):
            if len(row) != 2:
                raise ValueError(f"theta CSV rows need 2 fields, got {row!r}")
            n, t = int(row[0]), int(row[1])
            if n != expected:
                raise ValueError(f"theta CSV rows must be consecutive from 0; got n={n}")
            values.append(t)
        return cls(tuple(values))


def psi(s: AveragingSeq, N: int) -> ThetaTable:
    """Expand ``s`` into the table ``theta(0..N)``."""
    if N < 0:
        raise ValueError("bound must be nonnegative")
    return ThetaTable(tuple(s.theta(n) for n in range(N + 1)))


def primitive_period(values, max_period: int | None = None) -> int | None:
    """Least ``j`` with ``values[r + j] = values[r] + j`` across the whole table."""
    N = len(values) - 1
    top = N // 2 if max_period is None else max_period
    for j in range(1, top + 1):
        if all(values[r + j] == values[r] + j for r in range(N - j + 1)):
            return j
    return None


def phi(t: ThetaTable) -> AveragingSeq:
    """Recover ``(d, sigma)`` from a table; refuses when no period ``<= N/2`` is visible."""
    if any(v < 1 for v in t.values):
        raise CodecError("theta takes a nonpositive value; not a nondegenerate averaging sequence")
    d = primitive_period(t.values)
    if d is None:
        raise CodecError(
            f"no period <= {t.bound // 2} of theta - id is visible in a table of bound {t.bound}")
    sigma = []
    for j in range(d):
        q, rem = divmod(t.values[j], d)
        if rem:
            raise CodecError(f"theta({j}) = {t.values[j]} is not divisible by d = {d}")
        sigma.append(q)
    return AveragingSeq(d, tuple(sigma))


def check_averaging(t: ThetaTable) -> RBReport:
    """``theta(m) + theta(n) = theta(m + theta(n))`` wherever the table reaches."""
    vals = t.values
    N = t.bound
    for n in range(N + 1):
        for m in range(N + 1):
            idx = m + vals[n]
            if idx > N or idx < 0:
                continue
            diff = vals[m] + vals[n] - vals[idx]
            if diff:
                return _fail(max(N, 1), m, n, Poly.constant(diff), "averaging")
    return RBReport(True, max(N, 1))


def theta_image(s: AveragingSeq) -> tuple[int, int]:
    """``(d, min sigma)``: the image of theta is ``{d*t : t >= min sigma}``."""
    return s.d, min(s.sigma)
