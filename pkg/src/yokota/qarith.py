"""Quantum arithmetic at the primitive 2n-th root of unity xi_n = exp(i pi / n).

Colors are kept exact (:class:`ColorSpec`) until they are evaluated for a
concrete ``n``.  At a fixed ``n`` a color is a *lattice point* ``(r, m)``: the
exact rational value ``r`` of the epsilon-free part and the integer epsilon
coefficient ``m``.  All summation bookkeeping works on these pairs; floating
point enters only through :math:`\\{x\\} = \\xi^x - \\xi^{-x}`.

High-precision numbers are plain :mod:`mpmath` values evaluated under the
working precision of a :class:`RootContext`.
"""

from __future__ import annotations

import math
import os
import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mp

from .errors import ColorSyntaxError, PoleError

HPComplex = mpmath.mpc

#: exact lattice point (epsilon-free value, epsilon coefficient) at a fixed n
Point = tuple  # tuple[Fraction, int]

DEFAULT_PRECISION = int(os.environ.get("YOKOTA_PRECISION", "80"))
DEFAULT_EPSILON = Fraction(1, 10**30)


# ---------------------------------------------------------------------------
# exact colors


@dataclass(frozen=True, order=True)
class ColorSpec:
    """The color ``n_coeff * n + const_off + eps_coeff * eps``."""

    n_coeff: Fraction = Fraction(0)
    const_off: int = 0
    eps_coeff: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_coeff", Fraction(self.n_coeff))
        if int(self.const_off) != self.const_off or int(self.eps_coeff) != self.eps_coeff:
            raise TypeError("const_off and eps_coeff must be integers")
        object.__setattr__(self, "const_off", int(self.const_off))
        object.__setattr__(self, "eps_coeff", int(self.eps_coeff))

    @classmethod
    def const(cls, k: int, eps: int = 0) -> "ColorSpec":
        return cls(Fraction(0), k, eps)

    @classmethod
    def parse(cls, text: str) -> "ColorSpec":
        return parse_color(text)

    def __add__(self, other):
        if isinstance(other, int):
            other = ColorSpec.const(other)
        if not isinstance(other, ColorSpec):
            return NotImplemented
        return ColorSpec(self.n_coeff + other.n_coeff, self.const_off + other.const_off,
                         self.eps_coeff + other.eps_coeff)

    __radd__ = __add__

    def __neg__(self):
        return ColorSpec(-self.n_coeff, -self.const_off, -self.eps_coeff)

    def __sub__(self, other):
        if isinstance(other, int):
            other = ColorSpec.const(other)
        if not isinstance(other, ColorSpec):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return ColorSpec(self.n_coeff * k, self.const_off * k, self.eps_coeff * k)

    __rmul__ = __mul__

    def bar(self) -> "ColorSpec":
        """``n - 1 - a``; independent of the numeric value of n."""
        return ColorSpec(1 - self.n_coeff, -1 - self.const_off, -self.eps_coeff)

    def at(self, n: int) -> Fraction:
        """Exact value with epsilon set to zero."""
        return self.n_coeff * n + self.const_off

    def point(self, n: int) -> Point:
        return (self.n_coeff * n + self.const_off, self.eps_coeff)

    def is_integer_at(self, n: int) -> bool:
        return self.at(n).denominator == 1 and self.eps_coeff == 0

    def value(self, n: int, eps) -> mpmath.mpf:
        r = self.at(n)
        return mpmath.mpf(r.numerator) / r.denominator + self.eps_coeff * _mpf(eps)

    def __str__(self) -> str:
        return format_color(self)


_TERM = re.compile(
    r"""(?P<sign>[+-])?
        (?:
          (?P<ncoef>\d+(?:/\d+)?)?\*?n(?:/(?P<nden>\d+))?(?![a-z])   # 3/8 n, 3n/8, n/3, n
        | (?P<ecoef>\d+)?\*?(?:eps|e)(?![a-z])                       # 3 e, e, 3eps
        | (?P<int>\d+)
        )""",
    re.VERBOSE,
)


def parse_color(text: str) -> ColorSpec:
    """Parse ``RAT n [+|- INT] [+|- INT e]`` and the compact ``3n/8 + 3e``.

    Whitespace is ignored.  A bare integer is a constant color.
    """
    s = re.sub(r"\s+", "", str(text)).lower()
    s = s.replace("ε", "e").replace("(", "").replace(")", "")
    if not s:
        raise ColorSyntaxError("empty color expression")
    ncoef, const, eps = Fraction(0), 0, 0
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (pos > 0 and m.group("sign") is None):
            raise ColorSyntaxError(f"cannot parse color expression {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("int") is not None:
            const += sign * int(m.group("int"))
        elif "n" in m.group(0).lstrip("+-").replace("eps", ""):
            coef = Fraction(m.group("ncoef") or 1)
            if m.group("nden"):
                coef /= int(m.group("nden"))
            ncoef += sign * coef
        else:
            eps += sign * int(m.group("ecoef") or 1)
        pos = m.end()
    return ColorSpec(ncoef, const, eps)


def format_color(c: ColorSpec) -> str:
    parts = []
    if c.n_coeff:
        q = c.n_coeff
        mag = abs(q)
        coef = "" if mag == 1 else f"{mag.numerator}" if mag.denominator == 1 else f"{mag}"
        parts.append(("-" if q < 0 else "+", f"{coef} n".strip()))
    if c.const_off:
        parts.append(("-" if c.const_off < 0 else "+", str(abs(c.const_off))))
    if c.eps_coeff:
        mag = abs(c.eps_coeff)
        parts.append(("-" if c.eps_coeff < 0 else "+", "e" if mag == 1 else f"{mag} e"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# lattice points


def as_point(a, n: int) -> Point:
    if isinstance(a, ColorSpec):
        return a.point(n)
    if isinstance(a, tuple):
        return (Fraction(a[0]), int(a[1]))
    if isinstance(a, (int, Fraction)):
        return (Fraction(a), 0)
    raise TypeError(f"not an exact color: {a!r}")


def padd(*pts: Point) -> Point:
    return (sum((p[0] for p in pts), Fraction(0)), sum(p[1] for p in pts))


def psub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def pshift(a: Point, k) -> Point:
    return (a[0] + k, a[1])


def pscale(a: Point, k: int) -> Point:
    return (a[0] * k, a[1] * k)


def pbar(a: Point, n: int) -> Point:
    return (n - 1 - a[0], -a[1])


def int_part(a: Point) -> int:
    """The epsilon-free part, which must be an integer."""
    r = a[0]
    if r.denominator != 1:
        raise ValueError(f"{r} is not an integer")
    return r.numerator


# ---------------------------------------------------------------------------
# context


def _mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, mpmath.mpf):
        return Fraction(*x.man_exp[:1]) * Fraction(2) ** x.man_exp[1] if x else Fraction(0)
    return Fraction(str(x))


class RootContext:
    """Everything that depends on (n, epsilon, working precision).

    ``precision`` is the requested number of significant digits; computations
    run at ``working_dps`` >= precision and callers escalate it (see
    :func:`solve`) when cancellation eats the guard digits.  ``target_digits``
    is the accuracy a tracked result must reach before it is accepted.
    """

    def __init__(self, n: int, epsilon=DEFAULT_EPSILON, precision: int = DEFAULT_PRECISION,
                 *, working_dps: int | None = None, target_digits: float | None = None):
        if int(n) != n or n < 2:
            raise ValueError("n must be an integer >= 2")
        if precision < 30:
            raise ValueError("precision must be at least 30 decimal digits")
        eps = _as_fraction(epsilon)
        if eps <= 0:
            raise ValueError("epsilon must be positive")
        if eps < Fraction(1, 10 ** (precision - 20)):
            raise ValueError(
                f"epsilon={float(eps):.3g} is below 10^-(precision-20); "
                "raise precision so the epsilon-scale structure survives")
        self.n = int(n)
        self.epsilon = eps
        self.precision = int(precision)
        self.working_dps = int(working_dps or precision + 10)
        self.target_digits = float(precision - 20 if target_digits is None else target_digits)
        self.cache: dict = {}
        self._tables = None

    def __repr__(self):
        return (f"RootContext(n={self.n}, epsilon={float(self.epsilon):.3g}, "
                f"precision={self.precision}, working_dps={self.working_dps})")

    @property
    def key(self):
        return (self.n, self.epsilon, self.working_dps)

    def with_dps(self, dps: int) -> "RootContext":
        return RootContext(self.n, self.epsilon, self.precision, working_dps=dps,
                           target_digits=self.target_digits)

    def with_n(self, n: int) -> "RootContext":
        return RootContext(n, self.epsilon, self.precision, target_digits=self.target_digits)

    @contextmanager
    def working(self):
        with mp.workdps(self.working_dps):
            yield self

    @property
    def eps(self) -> mpmath.mpf:
        return _mpf(self.epsilon)

    @property
    def xi(self) -> mpmath.mpc:
        with self.working():
            return mpmath.expjpi(mpmath.mpf(1) / self.n)

    @property
    def tables(self) -> "QTables":
        if self._tables is None:
            self._tables = QTables(self)
        return self._tables

    @property
    def unit_digits(self) -> float:
        """Digits of a single table-derived factor (roundoff grows with n)."""
        return self.working_dps - math.log10(40 * self.n)


# ---------------------------------------------------------------------------
# direct (definition) route


def _xi_pow_parts(a, ctx: RootContext):
    """Split xi^a as sign * exp(i phi) with phi in [0, pi) reduced exactly."""
    n = ctx.n
    r, m = a
    q = math.floor(r / n)
    s = r - q * n
    phi = mpmath.pi * (_mpf(s) + m * ctx.eps) / n
    return (-1) ** (q % 2), phi


def qbrace(a, ctx: RootContext) -> HPComplex:
    """``{a} = xi^a - xi^-a``.

    Exact colors are reduced modulo n before the exponential is taken, so a
    color within epsilon of a multiple of n keeps full relative precision.
    """
    with ctx.working():
        if isinstance(a, (ColorSpec, tuple, int, Fraction)):
            sign, phi = _xi_pow_parts(as_point(a, ctx.n), ctx)
            x = mpmath.expj(phi)
        else:
            sign, x = 1, mpmath.expjpi(mpmath.mpc(a) / ctx.n)
        # xi^-a as a complex reciprocal, so nothing forces the real part to vanish
        return sign * (x - 1 / x)


def qint(a, ctx: RootContext) -> HPComplex:
    """``[a] = {a}/{1}``."""
    with ctx.working():
        return qbrace(a, ctx) / qbrace(1, ctx)


def qfact(k: int, ctx: RootContext) -> HPComplex:
    """``{k}! = {1}{2}...{k}``."""
    if int(k) != k or k < 0:
        raise ValueError("qfact needs a nonnegative integer")
    with ctx.working():
        p = mpmath.mpc(1)
        for j in range(1, int(k) + 1):
            p *= qbrace(j, ctx)
        return p


def binom_length(a: Point, b: Point, n: int) -> int:
    d = a[0] - b[0]
    if d.denominator != 1 or not 0 <= d <= n - 1:
        raise ValueError(f"binomial needs a-b in {{0..{n - 1}}}, got {d}")
    return int(d)


def qbinom(a, b, ctx: RootContext) -> HPComplex:
    """Quantum binomial ``prod_{j<a-b} {a-j}/{a-b-j}``, by direct product.

    The product length is the epsilon-free part of ``a - b``.
    """
    a, b = as_point(a, ctx.n), as_point(b, ctx.n)
    length = binom_length(a, b, ctx.n)
    d = psub(a, b)
    with ctx.working():
        tiny = mpmath.mpf(10) ** (-ctx.working_dps + 10)
        p = mpmath.mpc(1)
        for j in range(length):
            den = qbrace(pshift(d, -j), ctx)
            if abs(den) < tiny:
                raise PoleError(f"vanishing denominator {{{d[0] - j}}} in binomial; perturb by epsilon")
            p *= qbrace(pshift(a, -j), ctx) / den
        return p


def loop_weight(a, ctx: RootContext) -> HPComplex:
    """``[2a+n; 2a+1]``, the inverse of the unknot value."""
    a = as_point(a, ctx.n)
    two = pscale(a, 2)
    return qbinom(pshift(two, ctx.n), pshift(two, 1), ctx)


# ---------------------------------------------------------------------------
# table route used by the state sums


class ShiftedProducts:
    """Prefix products of ``s(i) = sin(pi (rho + i + m eps) / n)``.

    ``prod(k)`` is ``s(1)...s(k)`` for k >= 0 and ``1/(s(k+1)...s(0))`` for
    k < 0, returned as ``(mantissa, zero_order)``.  Exact zeros (rho = m = 0,
    i a multiple of n) are factored out as a formal infinitesimal with
    derivative ``(-1)^(i/n) pi/n`` and counted in ``zero_order``.
    """

    def __init__(self, ctx: RootContext, rho: Fraction, m: int):
        self.n = ctx.n
        self.rho = rho
        self.m = m
        self.exact = rho == 0 and m == 0
        self._base = _mpf(rho) + m * ctx.eps
        self._shift = mpmath.sin(mpmath.pi * m * ctx.eps / ctx.n) if rho == 0 else None
        self._pos = [(mpmath.mpf(1), 0)]
        self._neg = [(mpmath.mpf(1), 0)]
        self._sines: dict = {}

    def _sin(self, i: int):
        n = self.n
        k = i % (2 * n)
        v = self._sines.get(k)
        if v is None:
            if self.rho == 0 and k % n == 0:
                sign = 1 if k == 0 else -1
                v = (sign * mpmath.pi / n, 1) if self.exact else (sign * self._shift, 0)
            else:
                v = (mpmath.sin(mpmath.pi * (self._base + k) / n), 0)
            self._sines[k] = v
        return v

    def prod(self, k: int):
        if k >= 0:
            pos = self._pos
            while len(pos) <= k:
                v, z = pos[-1]
                s, dz = self._sin(len(pos))
                pos.append((v * s, z + dz))
            return pos[k]
        k = -k
        neg = self._neg
        while len(neg) <= k:
            v, z = neg[-1]
            s, dz = self._sin(1 - len(neg))
            neg.append((v / s, z - dz))
        return neg[k]


class QTables:
    """Per-context cache of :class:`ShiftedProducts`, one per residue class."""

    def __init__(self, ctx: RootContext):
        self.ctx = ctx
        self._tabs: dict = {}

    def table(self, rho: Fraction, m: int) -> ShiftedProducts:
        key = (rho, m)
        t = self._tabs.get(key)
        if t is None:
            t = self._tabs[key] = ShiftedProducts(self.ctx, rho, m)
        return t

    def span(self, top: Point, length: int):
        """``prod_{j<length} s(top - j)`` as (mantissa, zero_order)."""
        r, m = top
        k = math.floor(r)
        t = self.table(r - k, m)
        v1, z1 = t.prod(k)
        v2, z2 = t.prod(k - length)
        return v1 / v2, z1 - z2

    def binom(self, a: Point, b: Point):
        """Real quantum binomial ``[a; b]`` as (mantissa, zero_order).

        The factors ``2i`` of numerator and denominator cancel exactly.
        """
        length = binom_length(a, b, self.ctx.n)
        num, zn = self.span(a, length)
        den, zd = self.table(Fraction(0), a[1] - b[1]).prod(length)
        return num / den, zn - zd

    def fact(self, k: int):
        """``{k}! / (2i)^k`` as (mantissa, zero_order)."""
        return self.table(Fraction(0), 0).prod(k)

    def loop(self, a: Point):
        two = pscale(a, 2)
        return self.binom(pshift(two, self.ctx.n), pshift(two, 1))


def settle(mant, zero_order: int, what: str = "value"):
    """Collapse a (mantissa, zero_order) pair: 0, the mantissa, or a pole."""
    if zero_order > 0:
        return mpmath.mpf(0)
    if zero_order < 0:
        raise PoleError(f"{what} has a pole (integer or half-integer color); perturb by epsilon")
    return mant


# ---------------------------------------------------------------------------
# tracked values


@dataclass(frozen=True)
class Tracked:
    """A number with an estimate of its correct significant digits."""

    value: object
    digits: float
    log_err: float | None = None

    def abs_error_log10(self) -> float:
        """log10 of the absolute error bound."""
        if self.log_err is not None:
            return self.log_err
        if not self.value:
            return -math.inf if self.digits == math.inf else math.inf
        return _log10abs(self.value) - self.digits

    def __mul__(self, other):
        if isinstance(other, Tracked):
            return Tracked(self.value * other.value, combine_digits(self.digits, other.digits))
        return Tracked(self.value * other, self.digits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Tracked):
            return Tracked(self.value / other.value, combine_digits(self.digits, other.digits))
        return Tracked(self.value / other, self.digits)

    def __neg__(self):
        return Tracked(-self.value, self.digits)


def combine_digits(*digits: float) -> float:
    d = min(digits)
    if d == math.inf:
        return d
    return d - math.log10(sum(10.0 ** (d - x) for x in digits))


def pairwise_sum(values: Sequence):
    """Balanced-tree summation in the given order."""
    n = len(values)
    if n == 0:
        return mpmath.mpf(0)
    if n == 1:
        return values[0]
    if n == 2:
        return values[0] + values[1]
    mid = n // 2
    return pairwise_sum(values[:mid]) + pairwise_sum(values[mid:])


def _log10abs(x) -> float:
    return float(mpmath.log10(abs(x))) if x else -math.inf


def tracked_sum(terms: Iterable[Tracked], ctx: RootContext) -> Tracked:
    """Sum with a first-order running error bound.

    The absolute error is bounded by ``sum |t_i| (10^-d_i + u)`` where ``u`` is
    the working roundoff; the result's digits follow from that bound.
    """
    terms = list(terms)
    total = pairwise_sum([t.value for t in terms])
    logs = []
    for t in terms:
        if t.value:
            logs.append(_log10abs(t.value) - min(t.digits, ctx.unit_digits))
    if not logs:
        return Tracked(total, math.inf)
    top = max(logs)
    err = top + math.log10(sum(10.0 ** (x - top) for x in logs))
    if not total:
        return Tracked(total, -math.inf, err)
    return Tracked(total, _log10abs(total) - err, err)


def solve(fn, ctx: RootContext, *, abs_tol: float | None = None, max_dps: int = 6000):
    """Run ``fn(ctx)`` raising the working precision until it is accurate.

    ``fn`` returns a :class:`Tracked`.  It is accepted once it has
    ``ctx.target_digits`` correct digits or, when ``abs_tol`` is given, once
    its absolute error bound is below ``10**-abs_tol`` (needed for sums whose
    exact value is zero).  The working precision is raised by the shortfall
    plus a margin; a result that is pure noise doubles it.
    """
    from .errors import PrecisionExhausted

    while True:
        res = fn(ctx)
        got = res.digits
        if got >= ctx.target_digits:
            return res
        if abs_tol is not None and res.abs_error_log10() <= -abs_tol:
            return res
        short = ctx.target_digits - got
        if got < 5:
            new = 2 * ctx.working_dps + int(ctx.target_digits)
        else:
            new = ctx.working_dps + int(math.ceil(short)) + 15
        if new > max_dps:
            raise PrecisionExhausted(
                f"only {got:.1f} of {ctx.target_digits:.0f} digits at {ctx.working_dps} working digits")
        ctx = ctx.with_dps(new)
