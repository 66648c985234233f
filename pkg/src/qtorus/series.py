"""Integer Laurent series with truncation-order tracking, and exact rational
functions of q.

Two coefficient domains are provided:

* :class:`LaurentSeries` -- a Laurent polynomial in q with integer
  coefficients, together with an optional *precision* P.  A finite precision
  means coefficients of ``q**e`` for ``e >= P`` are unknown; ``precision is
  None`` means the series is exact.  All arithmetic propagates precision
  pessimistically, so equality of two series at a given precision is a
  mathematically sound statement about the underlying exact objects.

* :class:`RationalQ` -- a quotient of integer polynomials in q, kept in a
  canonical reduced form so that equality is structural.  A rational function
  whose denominator has lowest-order coefficient +-1 can be expanded into a
  :class:`LaurentSeries` at any requested precision.

:class:`FactoredRational` is an internal accumulator for sums of rational
functions whose denominators are products of cyclotomic polynomials; it
avoids generic polynomial gcds on hot paths and converts to a canonical
:class:`RationalQ` on demand.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import ExactDivisionError, NotAUnit, NotExpandable, PrecisionError

__all__ = [
    "LaurentSeries",
    "RationalQ",
    "FactoredRational",
    "cyclotomic",
]


# ---------------------------------------------------------------------------
# dict-backed Laurent polynomial kernels (exponent -> nonzero int coefficient)
# ---------------------------------------------------------------------------


def _lclean(d: dict[int, int]) -> dict[int, int]:
    return {e: c for e, c in d.items() if c}


def _ladd(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _lmul(a: Mapping[int, int], b: Mapping[int, int], cutoff: Optional[int] = None) -> dict[int, int]:
    """Product of two Laurent dicts, dropping exponents >= cutoff if given."""
    out: dict[int, int] = {}
    for ea, ca in a.items():
        if not ca:
            continue
        for eb, cb in b.items():
            if not cb:
                continue
            e = ea + eb
            if cutoff is not None and e >= cutoff:
                continue
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _lscale(a: Mapping[int, int], k: int) -> dict[int, int]:
    if k == 0:
        return {}
    return {e: c * k for e, c in a.items()}


def _lshift(a: Mapping[int, int], m: int) -> dict[int, int]:
    return {e + m: c for e, c in a.items()}


def _term_str(exp: int, coeff: int) -> str:
    mag = abs(coeff)
    if exp == 0:
        return str(mag)
    if mag == 1:
        return f"q^{exp}"
    return f"{mag}*q^{exp}"


def _laurent_str(coeffs: Mapping[int, int]) -> str:
    if not coeffs:
        return "0"
    parts: list[str] = []
    for e in sorted(coeffs):
        c = coeffs[e]
        if not parts:
            parts.append(("-" if c < 0 else "") + _term_str(e, c))
        else:
            parts.append((" - " if c < 0 else " + ") + _term_str(e, c))
    return "".join(parts)


# ---------------------------------------------------------------------------
# LaurentSeries
# ---------------------------------------------------------------------------


class LaurentSeries:
    """Integer Laurent polynomial in q with an optional truncation order.

    ``precision is None`` marks an exact series.  With finite precision P the
    stored coefficients cover exactly the exponents below P; anything at or
    above P is unknown.  Because the stored coefficients are complete below P,
    every series carries a certified valuation bound: the smallest stored
    exponent, or P itself for a truncated zero.  Multiplication reduces
    precision when a factor has negative valuation -- the bound of each
    operand dictates how far the other operand's unknown tail can reach down.
    """

    __slots__ = ("_coeffs", "_precision", "_floor")

    def __init__(
        self,
        coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = (),
        precision: Optional[int] = None,
    ) -> None:
        d = dict(coeffs) if not isinstance(coeffs, Mapping) else dict(coeffs)
        d = _lclean(d)
        if precision is not None:
            d = {e: c for e, c in d.items() if e < precision}
        if d:
            f = min(d)
        elif precision is not None:
            f = precision
        else:
            f = 0
        self._coeffs = d
        self._precision = precision
        self._floor = f

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, precision: Optional[int] = None) -> "LaurentSeries":
        return cls({}, precision)

    @classmethod
    def one(cls, precision: Optional[int] = None) -> "LaurentSeries":
        return cls({0: 1}, precision)

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1, precision: Optional[int] = None) -> "LaurentSeries":
        return cls({exp: coeff}, precision)

    @classmethod
    def from_poly(cls, dense: Iterable[int], precision: Optional[int] = None) -> "LaurentSeries":
        return cls({e: c for e, c in enumerate(dense) if c}, precision)

    # -- inspection --------------------------------------------------------

    @property
    def precision(self) -> Optional[int]:
        return self._precision

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def coefficient(self, exp: int) -> int:
        if self._precision is not None and exp >= self._precision:
            raise PrecisionError(
                f"coefficient of q^{exp} requested but series is only known mod q^{self._precision}"
            )
        return self._coeffs.get(exp, 0)

    def valuation(self) -> float:
        """Smallest exponent with nonzero coefficient; +inf for the zero series."""
        return min(self._coeffs) if self._coeffs else math.inf

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes (mod q^P if truncated)."""
        return not self._coeffs

    def known_exactly(self) -> bool:
        return self._precision is None

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _meet(pa: Optional[int], pb: Optional[int]) -> Optional[int]:
        if pa is None:
            return pb
        if pb is None:
            return pa
        return min(pa, pb)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        p = self._meet(self._precision, other._precision)
        return LaurentSeries(_ladd(self._coeffs, other._coeffs), p)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(_lscale(self._coeffs, -1), self._precision)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        pa, pb = self._precision, other._precision
        if (pa is None and not self._coeffs) or (pb is None and not other._coeffs):
            return LaurentSeries()  # an exact zero annihilates the other factor
        if pa is None and pb is None:
            p: Optional[int] = None
        else:
            cands = []
            if pa is not None:
                cands.append(pa + other._floor)
            if pb is not None:
                cands.append(pb + self._floor)
            p = min(cands)
        return LaurentSeries(_lmul(self._coeffs, other._coeffs, p), p)

    def scale(self, k: int) -> "LaurentSeries":
        return LaurentSeries(_lscale(self._coeffs, k), self._precision)

    def shift(self, m: int) -> "LaurentSeries":
        """Multiply by q**m."""
        p = None if self._precision is None else self._precision + m
        return LaurentSeries(_lshift(self._coeffs, m), p)

    def truncate(self, precision: int) -> "LaurentSeries":
        p = precision if self._precision is None else min(self._precision, precision)
        return LaurentSeries(self._coeffs, p)

    def invert_unit(self) -> "LaurentSeries":
        """Inverse of a series whose lowest-order coefficient is +-1.

        Requires finite precision: the inverse of a unit of valuation v is an
        infinite series in general, returned here truncated at P - 2v.
        """
        if self._precision is None:
            raise PrecisionError("inversion requires a finite precision; truncate() first")
        if not self._coeffs:
            raise NotAUnit("the zero series has no inverse")
        v = min(self._coeffs)
        s = self._coeffs[v]
        if s not in (1, -1):
            raise NotAUnit(f"lowest-order coefficient is {s}, not +-1")
        work = self._precision - v  # precision of the valuation-0 unit part
        if work <= 0:
            return LaurentSeries({}, self._precision - 2 * v)
        u = {e - v: c * s for e, c in self._coeffs.items()}
        x: dict[int, int] = {0: 1}
        known = 1
        while known < work:
            known = min(2 * known, work)
            ux = _lmul(u, x, known)
            err = _ladd({0: 2}, _lscale(ux, -1))  # 2 - u*x
            x = _lmul(x, err, known)
        inv = {e - v: c * s for e, c in x.items()}
        return LaurentSeries(inv, self._precision - 2 * v)

    # -- comparison / rendering -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self._coeffs == other._coeffs and self._precision == other._precision

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LaurentSeries({self._coeffs!r}, precision={self._precision!r})"

    def __str__(self) -> str:
        body = _laurent_str(self._coeffs)
        if self._precision is None:
            return body
        return f"{body} (mod q^{self._precision})"


# ---------------------------------------------------------------------------
# dense integer polynomial kernels (index = exponent, ascending, trimmed)
# ---------------------------------------------------------------------------


def _ptrim(p: tuple[int, ...]) -> tuple[int, ...]:
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def _pneg(p: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-c for c in p)


def _padd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _ptrim(tuple(out))


def _pmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return _ptrim(tuple(out))


def _pdiv_exact(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Quotient a/b when the division is exact over the rationals with an
    integer result; raises ExactDivisionError otherwise."""
    q = _pdiv_maybe(a, b)
    if q is None:
        raise ExactDivisionError("polynomial division is not exact")
    return q


def _pdiv_maybe(a: tuple[int, ...], b: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    a = _ptrim(a)
    b = _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return ()
    if len(a) < len(b):
        return None
    rem = [Fraction(c) for c in a]
    lead = Fraction(b[-1])
    qlen = len(a) - len(b) + 1
    quot = [Fraction(0)] * qlen
    for i in range(qlen - 1, -1, -1):
        c = rem[i + len(b) - 1] / lead
        quot[i] = c
        if c:
            for j, bc in enumerate(b):
                rem[i + j] -= c * bc
    if any(rem):
        return None
    if any(c.denominator != 1 for c in quot):
        return None
    return _ptrim(tuple(int(c) for c in quot))


def _pcontent(p: tuple[int, ...]) -> int:
    g = 0
    for c in p:
        g = math.gcd(g, c)
    return g


def _pprimitive(p: tuple[int, ...]) -> tuple[int, ...]:
    g = _pcontent(p)
    if g <= 1:
        return p
    return tuple(c // g for c in p)


def _pprem(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Pseudo-remainder of a by b over the integers."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    da = len(a) - 1
    while da >= db and any(a):
        da = len(_ptrim(tuple(a))) - 1
        if da < db:
            break
        la = a[da]
        a = [c * lb for c in a]
        for j in range(db + 1):
            a[da - db + j] -= la * b[j]
        a = list(_ptrim(tuple(a)))
        if not a:
            break
        da = len(a) - 1
    return _ptrim(tuple(a))


def _pgcd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Greatest common divisor in Z[q], primitive with positive leading
    coefficient, times the gcd of the contents."""
    a, b = _ptrim(a), _ptrim(b)
    if not a:
        g = b
    elif not b:
        g = a
    else:
        cont = math.gcd(_pcontent(a), _pcontent(b))
        a, b = _pprimitive(a), _pprimitive(b)
        if len(a) < len(b):
            a, b = b, a
        while b:
            r = _pprimitive(_pprem(a, b))
            a, b = b, r
        g = tuple(c * cont for c in a)
    if g and g[-1] < 0:
        g = _pneg(g)
    return g


def _poly_str(p: tuple[int, ...]) -> str:
    return _laurent_str({e: c for e, c in enumerate(p) if c})


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

_CYCLOTOMIC_CACHE: dict[int, tuple[int, ...]] = {}


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def cyclotomic(n: int) -> tuple[int, ...]:
    """Dense coefficient tuple of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic index must be >= 1")
    cached = _CYCLOTOMIC_CACHE.get(n)
    if cached is not None:
        return cached
    num = tuple([-1] + [0] * (n - 1) + [1])  # q^n - 1
    den: tuple[int, ...] = (1,)
    for d in _divisors(n)[:-1]:
        den = _pmul(den, cyclotomic(d))
    phi = _pdiv_exact(num, den)
    _CYCLOTOMIC_CACHE[n] = phi
    return phi


# ---------------------------------------------------------------------------
# RationalQ
# ---------------------------------------------------------------------------


class RationalQ:
    """Quotient of integer polynomials in q in canonical reduced form.

    Canonical form: numerator and denominator are coprime in Z[q] with
    coprime contents, the denominator is nonzero with positive leading
    coefficient, and zero is stored as 0/1.  Equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Iterable[int] = (), den: Iterable[int] = (1,)) -> None:
        n = _ptrim(tuple(num))
        d = _ptrim(tuple(den))
        if not d:
            raise ZeroDivisionError("zero denominator")
        if not n:
            self.num, self.den = (), (1,)
            return
        g = _pgcd(n, d)
        if len(g) > 1 or (g and g[0] != 1):
            n = _pdiv_exact(n, g)
            d = _pdiv_exact(d, g)
        if d[-1] < 0:
            n, d = _pneg(n), _pneg(d)
        self.num, self.den = n, d

    @classmethod
    def _raw(cls, num: tuple[int, ...], den: tuple[int, ...]) -> "RationalQ":
        """Trusted constructor: caller guarantees canonical form."""
        self = object.__new__(cls)
        num = _ptrim(num)
        den = _ptrim(den)
        if not num:
            num, den = (), (1,)
        self.num, self.den = num, den
        return self

    @classmethod
    def from_int(cls, k: int) -> "RationalQ":
        return cls._raw((k,) if k else (), (1,))

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RationalQ") -> "RationalQ":
        n = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return RationalQ(n, _pmul(self.den, other.den))

    def __sub__(self, other: "RationalQ") -> "RationalQ":
        return self + (-other)

    def __neg__(self) -> "RationalQ":
        return RationalQ._raw(_pneg(self.num), self.den)

    def __mul__(self, other: "RationalQ") -> "RationalQ":
        return RationalQ(_pmul(self.num, other.num), _pmul(self.den, other.den))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalQ):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalQ({list(self.num)!r}, {list(self.den)!r})"

    def __str__(self) -> str:
        ns = _poly_str(self.num)
        if self.den == (1,):
            return ns
        if len([c for c in self.num if c]) > 1:
            ns = f"({ns})"
        return f"{ns}/({_poly_str(self.den)})"

    def expand(self, precision: int) -> LaurentSeries:
        """Laurent-series expansion at the given precision.

        The denominator's lowest-order coefficient must be +-1; otherwise
        the expansion does not exist over the integers.
        """
        den = self.den
        v = next(i for i, c in enumerate(den) if c)
        if den[v] not in (1, -1):
            raise NotExpandable(
                f"denominator lowest-order coefficient is {den[v]}, not +-1"
            )
        d_series = LaurentSeries.from_poly(den).truncate(precision + 2 * v)
        inv = d_series.invert_unit()  # precision comes out at the requested value
        return (LaurentSeries.from_poly(self.num) * inv).truncate(precision)


# ---------------------------------------------------------------------------
# FactoredRational: sums over cyclotomic-product denominators
# ---------------------------------------------------------------------------

_FACTOR_EXPANSION_CACHE: dict[tuple[tuple[int, int], ...], tuple[int, ...]] = {}


def _expand_factors(factors: Counter) -> tuple[int, ...]:
    key = tuple(sorted(factors.items()))
    cached = _FACTOR_EXPANSION_CACHE.get(key)
    if cached is not None:
        return cached
    out: tuple[int, ...] = (1,)
    for d, m in key:
        phi = cyclotomic(d)
        for _ in range(m):
            out = _pmul(out, phi)
    _FACTOR_EXPANSION_CACHE[key] = out
    return out


class FactoredRational:
    """A rational function of q held as (Laurent numerator) / (product of
    cyclotomic polynomials).  Cheap to multiply and to add when denominators
    share factors; converts to canonical :class:`RationalQ` on demand.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Mapping[int, int] = (), den: Optional[Counter] = None) -> None:
        self.num = _lclean(dict(num))
        d = Counter() if den is None else Counter({k: v for k, v in den.items() if v})
        if any(v < 0 for v in d.values()):
            raise ValueError("negative factor multiplicity")
        self.den = d if self.num else Counter()

    @classmethod
    def zero(cls) -> "FactoredRational":
        return cls({}, None)

    def is_zero(self) -> bool:
        return not self.num

    def mul_laurent(self, other: Mapping[int, int]) -> "FactoredRational":
        return FactoredRational(_lmul(self.num, other), self.den)

    def __mul__(self, other: "FactoredRational") -> "FactoredRational":
        return FactoredRational(_lmul(self.num, other.num), self.den + other.den)

    def __add__(self, other: "FactoredRational") -> "FactoredRational":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        union = self.den | other.den  # pointwise max
        a = _lmul(self.num, dict(enumerate(_expand_factors(union - self.den))))
        b = _lmul(other.num, dict(enumerate(_expand_factors(union - other.den))))
        return FactoredRational(_ladd(a, b), union)

    def __neg__(self) -> "FactoredRational":
        return FactoredRational(_lscale(self.num, -1), self.den)

    def __sub__(self, other: "FactoredRational") -> "FactoredRational":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactoredRational):
            return NotImplemented
        union = self.den | other.den
        a = _lmul(self.num, dict(enumerate(_expand_factors(union - self.den))))
        b = _lmul(other.num, dict(enumerate(_expand_factors(union - other.den))))
        return a == b

    __hash__ = None  # type: ignore[assignment]

    def to_rational_q(self) -> RationalQ:
        if not self.num:
            return RationalQ._raw((), (1,))
        shift = min(self.num)
        num_poly = _ptrim(tuple(self.num.get(e, 0) for e in range(min(shift, 0), max(self.num) + 1)))
        q_power = max(0, -shift)
        # strip cyclotomic factors shared with the numerator
        den = Counter(self.den)
        for d in sorted(den):
            phi = cyclotomic(d)
            while den[d] > 0:
                q = _pdiv_maybe(num_poly, phi)
                if q is None:
                    break
                num_poly = q
                den[d] -= 1
        # strip powers of q shared with the numerator
        if q_power:
            val = next(i for i, c in enumerate(num_poly) if c)
            drop = min(q_power, val)
            if drop:
                num_poly = num_poly[drop:]
                q_power -= drop
        den_poly: tuple[int, ...] = (1,)
        for d, m in sorted(den.items()):
            if m:
                phi = cyclotomic(d)
                for _ in range(m):
                    den_poly = _pmul(den_poly, phi)
        den_poly = _pmul(tuple([0] * q_power + [1]), den_poly)
        return RationalQ._raw(num_poly, den_poly)

    def expand(self, precision: int) -> LaurentSeries:
        return self.to_rational_q().expand(precision)

    def __repr__(self) -> str:
        return f"FactoredRational({self.num!r}, {dict(self.den)!r})"

    def __str__(self) -> str:
        return str(self.to_rational_q())
