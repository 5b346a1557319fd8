"""Hyperbolic volumes and the growth-rate estimator.

The Lobachevsky function is evaluated through the Clausen function,
``Lambda(theta) = Cl_2(2 theta) / 2``, using the rapidly convergent expansion

    Cl_2(t) = t - t log|t| + sum_k zeta(2k) / (k (2k+1)) * t^(2k+1) / (2 pi)^(2k)

on ``|t| <= pi``; terms shrink at least like ``4^-k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import BadAngles, NoRationalApprox, YokotaError, ZeroInvariant
from .qarith import ColorSpec, DEFAULT_EPSILON, DEFAULT_PRECISION, RootContext


def clausen2(t, dps: int | None = None) -> mpmath.mpf:
    dps = dps or mpmath.mp.dps
    with mpmath.workdps(dps + 10):
        t = mpmath.mpf(t)
        two_pi = 2 * mpmath.pi
        t = t - two_pi * mpmath.floor((t + mpmath.pi) / two_pi)
        if not t:
            return mpmath.mpf(0)
        s = t - t * mpmath.log(abs(t))
        x2 = (t / two_pi) ** 2
        p = t
        tol = mpmath.mpf(10) ** (-(dps + 5))
        k = 1
        while True:
            p *= x2
            term = mpmath.zeta(2 * k) / (k * (2 * k + 1)) * p
            s += term
            if abs(term) < tol:
                break
            k += 1
    return +s


def lobachevsky(theta, dps: int | None = None) -> mpmath.mpf:
    """``Lambda(theta) = -int_0^theta log|2 sin u| du``."""
    with mpmath.workdps((dps or mpmath.mp.dps) + 5):
        return clausen2(2 * mpmath.mpf(theta), dps) / 2


def ideal_tet_volume(alpha, beta, gamma, dps: int | None = None) -> mpmath.mpf:
    """Volume of the ideal tetrahedron with dihedral angles alpha, beta, gamma."""
    with mpmath.workdps((dps or mpmath.mp.dps) + 5):
        angles = [mpmath.mpf(x) for x in (alpha, beta, gamma)]
        if any(x <= 0 for x in angles):
            raise BadAngles("dihedral angles must be positive")
        if abs(sum(angles) - mpmath.pi) > mpmath.mpf(10) ** -20:
            raise BadAngles("dihedral angles of an ideal tetrahedron sum to pi")
        return sum(lobachevsky(x, dps) for x in angles)


REGULAR_IDEAL_VOLUME = "1.0149416064096536250"


def growth_estimate(value, n: int) -> mpmath.mpf:
    """``(pi / 2n) log |value|``.

    ``value`` may be an :class:`~yokota.evaluator.InvariantResult`, whose
    stored log-magnitude is used, or any number.
    """
    log_abs = getattr(value, "log_abs", None)
    if log_abs is None:
        if not value:
            raise ZeroInvariant("the invariant vanishes; its growth is undefined")
        log_abs = mpmath.log(abs(value))
    if log_abs == mpmath.mpf("-inf"):
        raise ZeroInvariant("the invariant vanishes; its growth is undefined")
    return mpmath.pi / (2 * n) * log_abs


def angle_to_color(theta, n: int | None = None, max_den: int = 120) -> ColorSpec:
    """Color ``q n`` with ``2 pi q = pi - theta`` and q of denominator <= max_den.

    The match is judged at the caller's working precision, which is the
    precision ``theta`` was computed at.
    """
    tol = mpmath.mpf(10) ** (3 - mpmath.mp.dps)
    with mpmath.workdps(max(50, mpmath.mp.dps + 10)):
        theta = mpmath.mpf(theta)
        if not 0 < theta < mpmath.pi:
            raise NoRationalApprox("dihedral angle must lie strictly between 0 and pi")
        x = (mpmath.pi - theta) / (2 * mpmath.pi)
        q = Fraction(mpmath.nstr(x, 45)).limit_denominator(max_den)
        if abs(2 * mpmath.pi * (mpmath.mpf(q.numerator) / q.denominator) - (mpmath.pi - theta)) > tol:
            raise NoRationalApprox(f"no rational n-coefficient with denominator <= {max_den}")
    return ColorSpec(q, 0, 0)


# ---------------------------------------------------------------------------
# references and sweeps


@dataclass(frozen=True)
class VolumeReference:
    graph_id: str
    volume: mpmath.mpf
    source: str

    def __post_init__(self):
        if self.source not in ("table1", "lobachevsky-computed"):
            raise ValueError(f"unknown reference source {self.source!r}")


def references() -> dict:
    from .pyramids import VOLUMES

    out = {k: VolumeReference(k, mpmath.mpf(v), "table1") for k, v in VOLUMES.items()}
    out["ideal_regular"] = VolumeReference(
        "ideal_regular", 3 * lobachevsky(mpmath.pi / 3, 40), "lobachevsky-computed")
    return out


@dataclass
class SweepRow:
    n: int
    log_abs: mpmath.mpf | None
    growth: mpmath.mpf | None
    reference: mpmath.mpf | None
    delta: mpmath.mpf | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


TSV_HEADER = ("n", "log_abs_value", "growth_estimate", "reference_volume", "delta")


def _fmt(x) -> str:
    if x is None:
        return "NA"
    return mpmath.nstr(x, 12, min_fixed=-4, max_fixed=12)


@dataclass
class SweepReport:
    graph_id: str
    rows: list = field(default_factory=list)

    def to_tsv(self) -> str:
        lines = ["\t".join(TSV_HEADER)]
        for r in self.rows:
            if r.ok:
                lines.append("\t".join([str(r.n), _fmt(r.log_abs), _fmt(r.growth),
                                        _fmt(r.reference), _fmt(r.delta)]))
            else:
                lines.append("\t".join([str(r.n), "NA", "NA", _fmt(r.reference), "NA"]))
        return "\n".join(lines) + "\n"

    def growths(self) -> list:
        return [r.growth for r in self.rows]


def sweep(graph, ns: Sequence[int], *, epsilon=DEFAULT_EPSILON, precision: int = DEFAULT_PRECISION,
          reference=None, graph_id: str = "graph", workers: int = 1) -> SweepReport:
    """Growth estimates of ``graph`` (a PlaneGraph or builtin name) for each n.

    Rows failing with a library error are kept and marked.
    """
    from .evaluator import yokota
    from .pyramids import builtin

    if isinstance(graph, str):
        graph_id = graph
        graph = builtin(graph)
        if reference is None:
            reference = references()[graph_id].volume
    rows = []
    for n in sorted(set(int(n) for n in ns)):
        ref = mpmath.mpf(reference) if reference is not None else None
        bad = [e.name for e in graph.edges if (e.color.n_coeff * n).denominator != 1]
        if bad:
            rows.append(SweepRow(n, None, None, ref, None,
                                 f"colors {', '.join(bad)} are not integral at n={n}"))
            continue
        try:
            ctx = RootContext(n, epsilon, precision)
            res = yokota(graph, ctx, workers=workers)
            with mpmath.workdps(precision):
                v = growth_estimate(res, n)
                rows.append(SweepRow(n, +res.log_abs, +v, ref, v - ref if ref is not None else None))
        except YokotaError as exc:
            rows.append(SweepRow(n, None, None, ref, None, str(exc)))
    return SweepReport(graph_id, rows)


def regular_tet_growth(n: int, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """``(pi/n) log((-1)^(n-1) tet)`` for the tetrahedron with all colors n/3.

    The colors are integral, so the sign-free integer formula applies.  Its
    limit is the volume of the regular ideal tetrahedron.
    """
    from .sixj import sixj_integer

    if n % 3:
        raise ValueError("n must be divisible by 3")
    ctx = RootContext(n, precision=precision)
    v = sixj_integer(*[n // 3] * 6, ctx)
    with ctx.working():
        return +(mpmath.pi / n * mpmath.log((-1) ** (n - 1) * v.real))
