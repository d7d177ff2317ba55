"""Truncated formal series in ``q`` with rational exponents and coefficients.

A :class:`QSeries` stores its nonzero terms and the order up to which they are
known.  ``order=None`` marks an exact (finite) series such as a polynomial.
Every operation propagates the order pessimistically, so a product or inverse
never claims more than it can justify.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .errors import DomainError, UsageError
from .linalg import as_fraction

Order = Fraction | None


def _min_order(*orders: Order) -> Order:
    known = [o for o in orders if o is not None]
    return min(known) if known else None


class QSeries:
    __slots__ = ("_terms", "_order")

    def __init__(self, terms: Mapping | Iterable = (), order=None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        order = None if order is None else as_fraction(order)
        clean: dict[Fraction, Fraction] = {}
        for e, c in items:
            e, c = as_fraction(e), as_fraction(c)
            if order is not None and e > order:
                continue
            v = clean.get(e, 0) + c
            if v:
                clean[e] = v
            else:
                clean.pop(e, None)
        self._terms = dict(sorted(clean.items()))
        self._order = order

    # -- construction -----------------------------------------------------------
    @classmethod
    def monomial(cls, exponent=0, coeff=1, order=None) -> "QSeries":
        return cls({exponent: coeff}, order)

    @classmethod
    def one(cls, order=None) -> "QSeries":
        return cls({0: 1}, order)

    # -- access -----------------------------------------------------------------
    @property
    def terms(self) -> dict[Fraction, Fraction]:
        return dict(self._terms)

    @property
    def order(self) -> Order:
        return self._order

    def items(self):
        return self._terms.items()

    def coeff(self, exponent) -> Fraction:
        e = as_fraction(exponent)
        if self._order is not None and e > self._order:
            raise UsageError(f"coefficient of q^{e} is beyond the known order {self._order}")
        return self._terms.get(e, Fraction(0))

    def __getitem__(self, exponent) -> Fraction:
        return self.coeff(exponent)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self) -> Fraction:
        if not self._terms:
            raise DomainError("zero series has no valuation")
        return next(iter(self._terms))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._terms == other._terms

    def __hash__(self):
        return hash((self._order, tuple(self._terms.items())))

    def __repr__(self) -> str:
        shown = list(self._terms.items())[:6]
        body = " + ".join(f"{c}*q^{e}" for e, c in shown) or "0"
        if len(self._terms) > 6:
            body += " + ..."
        tail = "" if self._order is None else f" + O(q^>{self._order})"
        return f"QSeries({body}{tail})"

    # -- arithmetic -------------------------------------------------------------
    def truncate(self, order) -> "QSeries":
        order = as_fraction(order)
        if self._order is not None and order > self._order:
            raise UsageError(f"cannot truncate to {order}, series known only to {self._order}")
        return QSeries(self._terms, order)

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self._terms.items()}, self._order)

    def __add__(self, other) -> "QSeries":
        other = _coerce(other)
        order = _min_order(self._order, other._order)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return QSeries(out, order)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "QSeries":
        return _coerce(other) - self

    def scale(self, c) -> "QSeries":
        c = as_fraction(c)
        return QSeries({e: c * v for e, v in self._terms.items()}, self._order)

    def shift(self, e) -> "QSeries":
        """Multiply by ``q^e``."""
        e = as_fraction(e)
        order = None if self._order is None else self._order + e
        return QSeries({k + e: v for k, v in self._terms.items()}, order)

    def substitute(self, s) -> "QSeries":
        """``q -> q^s`` for rational ``s > 0``."""
        s = as_fraction(s)
        if s <= 0:
            raise UsageError("substitution scale must be positive")
        order = None if self._order is None else self._order * s
        return QSeries({k * s: v for k, v in self._terms.items()}, order)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other) -> "QSeries":
        return self.scale(other)

    def __pow__(self, m: int) -> "QSeries":
        return power(self, m)

    # -- serialisation ----------------------------------------------------------
    def denominator(self) -> int:
        dens = [e.denominator for e in self._terms]
        if self._order is not None:
            dens.append(self._order.denominator)
        return lcm(1, *dens)

    def to_dict(self) -> dict:
        if self._order is None:
            raise UsageError("exact series have no JSON order field")
        d = self.denominator()
        return {
            "denominator": d,
            "order_num": int(self._order * d),
            "terms": [[int(e * d), c.numerator, c.denominator] for e, c in self._terms.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "QSeries":
        d = int(data["denominator"])
        terms = {Fraction(en, d): Fraction(cn, cd) for en, cn, cd in data["terms"]}
        return cls(terms, Fraction(int(data["order_num"]), d))

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_dict(json.loads(text))


def _coerce(x) -> QSeries:
    if isinstance(x, QSeries):
        return x
    return QSeries.monomial(0, x)


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Product, valid to ``min(A + v_b, B + v_a)``."""
    if a.is_zero() or b.is_zero():
        return QSeries({}, _min_order(a.order, b.order))
    va, vb = a.valuation(), b.valuation()
    order = _min_order(
        None if a.order is None else a.order + vb,
        None if b.order is None else b.order + va,
    )
    out: dict[Fraction, Fraction] = {}
    bt = list(b.items())
    for ea, ca in a.items():
        if order is not None and ea + vb > order:
            break
        for eb, cb in bt:
            e = ea + eb
            if order is not None and e > order:
                break
            out[e] = out.get(e, 0) + ca * cb
    return QSeries(out, order)


def invert(a: QSeries) -> QSeries:
    """Multiplicative inverse of a series with nonzero leading term.

    If ``a = c q^v (1 + u)`` is known to order ``A``, the inverse is known to
    order ``A - 2v``.
    """
    if a.is_zero():
        raise DomainError("cannot invert the zero series")
    v = a.valuation()
    c = a.coeff(v)
    if a.order is None:
        if len(a) == 1:
            return QSeries({-v: 1 / c})
        raise UsageError("inverting an exact non-monomial series needs a target order")
    rel = a.order - v
    u = [(e - v, x / c) for e, x in a.items() if e != v]
    den = lcm(1, *(e.denominator for e, _ in u), rel.denominator)
    n = int(rel * den)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[0] = Fraction(1)
    uk = [(int(e * den), x) for e, x in u]
    for i in range(1, n + 1):
        s = Fraction(0)
        for k, x in uk:
            if k > i:
                break
            if coeffs[i - k]:
                s += x * coeffs[i - k]
        coeffs[i] = -s
    terms = {Fraction(i, den) - v: x / c for i, x in enumerate(coeffs) if x}
    return QSeries(terms, a.order - 2 * v)


def power(a: QSeries, m: int) -> QSeries:
    if m < 0:
        return power(invert(a), -m)
    result = QSeries.one(None)
    base = a
    while m:
        if m & 1:
            result = mul(result, base)
        m >>= 1
        if m:
            base = mul(base, base)
    return result


# -- eta products ---------------------------------------------------------------

def euler_product(n_max: int) -> list[int]:
    """Coefficients of ``prod_{n>=1} (1 - x^n)`` through ``x^n_max`` by direct expansion."""
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        for k in range(n_max, n - 1, -1):
            p[k] -= p[k - n]
    return p


def pentagonal_coefficients(n_max: int) -> list[int]:
    """Same coefficients from Euler's pentagonal number theorem (independent oracle)."""
    p = [0] * (n_max + 1)
    k = 0
    while True:
        done = True
        for j in (k, -k) if k else (0,):
            e = j * (3 * j - 1) // 2
            if e <= n_max:
                p[e] = (-1) ** (j % 2)
                done = False
        if done and k:
            break
        k += 1
    return p


def power_series_power(p: list[int], m: int) -> list[Fraction]:
    """``P(x)^m`` for ``P(0) = 1`` and any integer ``m`` (J.C.P. Miller recurrence)."""
    if not p or p[0] != 1:
        raise DomainError("power recurrence needs constant term 1")
    n_max = len(p) - 1
    b = [Fraction(0)] * (n_max + 1)
    b[0] = Fraction(1)
    for n in range(1, n_max + 1):
        s = Fraction(0)
        for k in range(1, n + 1):
            if p[k]:
                s += (k * (m + 1) - n) * p[k] * b[n - k]
        b[n] = s / n
    return b


def eta_power(scale, exponent: int, order) -> QSeries:
    """``eta(q^scale)^exponent`` known through ``q^order``."""
    scale, order = as_fraction(scale), as_fraction(order)
    if scale <= 0:
        raise UsageError("eta scale must be positive")
    lead = scale * exponent / 24
    if order < lead:
        return QSeries({}, order)
    n_max = int((order - lead) / scale)
    coeffs = power_series_power(euler_product(n_max), exponent)
    return QSeries({lead + scale * n: c for n, c in enumerate(coeffs) if c}, order)


def eta(scale, order) -> QSeries:
    return eta_power(scale, 1, order)


@dataclass(frozen=True)
class EtaFactor:
    scale: Fraction
    exponent: int

    def __post_init__(self):
        if self.scale <= 0:
            raise UsageError("eta scale must be positive")

    @property
    def weight(self) -> Fraction:
        """Leading exponent ``scale * exponent / 24``."""
        return self.scale * self.exponent / 24


def eta_product(factors: Iterable[EtaFactor], order) -> QSeries:
    """``prod eta(q^s)^e`` known through ``q^order``.

    Each factor is expanded far enough that the product is still exact at
    ``order`` once the other factors' leading exponents are added.
    """
    factors = list(factors)
    order = as_fraction(order)
    total = sum((f.weight for f in factors), Fraction(0))
    result = QSeries.one(None)
    for f in factors:
        result = mul(result, eta_power(f.scale, f.exponent, order - total + f.weight))
    return result.truncate(order) if result.order is None or result.order > order else result


@dataclass(frozen=True)
class MatchReport:
    equal: bool
    order: Fraction
    exponent: Fraction | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None


def compare(a: QSeries, b: QSeries, order) -> MatchReport:
    """Compare coefficients up to and including ``q^order``."""
    order = as_fraction(order)
    for s in (a, b):
        if s.order is not None and s.order < order:
            raise UsageError(f"series known only to {s.order}, cannot compare to {order}")
    exps = sorted({e for e, _ in a.items() if e <= order} | {e for e, _ in b.items() if e <= order})
    for e in exps:
        ca, cb = a.coeff(e), b.coeff(e)
        if ca != cb:
            return MatchReport(False, order, e, ca, cb)
    return MatchReport(True, order)
