"""Closed-form hyperbolic bounds evaluated at configurable precision.

Values are computed with :mod:`mpmath` in a fresh context per call, so the
working precision is never global state.  Threshold decisions go through
interval arithmetic and are three-valued: ``True`` and ``False`` are
certified, ``None`` means the working precision could not separate the two
sides.
"""

from __future__ import annotations

from decimal import Decimal
from typing import NamedTuple

from mpmath import MPContext
from mpmath.ctx_iv import MPIntervalContext

from .errors import InputError, PrecisionError

DEFAULT_DPS = 50
GUARD_DPS = 15
# regular ideal tetrahedron volume, bracketed
V3_INTERVAL = ("1.01494", "1.01495")


class BoundConstants(NamedTuple):
    T: int
    A_over_pi: int


def torsion_cap(n: int) -> int:
    """``T(n) = 2 * 3**n``: cap on Dehn-extension denominators and cable indices."""
    if n < 0:
        raise InputError("n must be nonnegative")
    return 2 * 3 ** n


def area_over_pi(n: int) -> int:
    """``A(n) / pi = 27**n * (9 n**2 + 4 n)``."""
    if n < 0:
        raise InputError("n must be nonnegative")
    return 27 ** n * (9 * n * n + 4 * n)


def bound_constants(n: int) -> BoundConstants:
    return BoundConstants(torsion_cap(n), area_over_pi(n))


def _mp(dps: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = dps
    return ctx


def _iv(dps: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.dps = dps + GUARD_DPS
    return ctx


def _lo_hi(ctx: MPContext, x):
    return ctx.make_mpf(x._mpi_[0]), ctx.make_mpf(x._mpi_[1])


def _log_area(ctx, n: int):
    """``log(A(n)/pi)`` without forming the big integer (n >= 1)."""
    return n * ctx.log(27) + ctx.log(9 * n * n + 4 * n)


def _real(ctx, value):
    if isinstance(value, (str, Decimal)):
        return ctx.mpf(str(value))
    if isinstance(value, (int, float)):
        return ctx.mpf(value)
    return ctx.mpf(value)  # mpf from another context


# ---------------------------------------------------------------- tube radius

def tube_length_limit(dps: int = DEFAULT_DPS):
    """Upper end of the admissible geodesic lengths, ``sqrt(3)/(2 pi) * (sqrt(2) - 1)``."""
    ctx = _mp(dps)
    return ctx.sqrt(3) / (2 * ctx.pi) * (ctx.sqrt(2) - 1)


def _tube_sinh2(ctx, l):
    c = 4 * ctx.pi * l / ctx.sqrt(3)
    return ctx.sqrt(1 - c) / c - ctx.mpf(1) / 2


def _check_length(l, dps: int):
    iv = _iv(dps)
    li = iv.mpf(l)
    limit = iv.sqrt(3) / (2 * iv.pi) * (iv.sqrt(2) - 1)
    if not (li > 0) or not (li < limit):
        raise InputError(
            f"geodesic length must satisfy 0 < l < sqrt(3)/(2*pi)*(sqrt(2)-1) "
            f"~= {_mp(dps).nstr(tube_length_limit(dps), 12)}; got {l}"
        )


def tube_sinh_squared(l, dps: int = DEFAULT_DPS):
    """``sinh(r)**2`` of the embedded tube about a geodesic of length ``l``."""
    ctx = _mp(dps)
    l = _real(ctx, l)
    _check_length(l, dps)
    return _tube_sinh2(ctx, l)


def cgm_tube_radius(l, dps: int = DEFAULT_DPS):
    """Radius of the embedded tube guaranteed around a closed geodesic of length ``l``."""
    ctx = _mp(dps)
    l = _real(ctx, l)
    _check_length(l, dps)
    s2 = _tube_sinh2(ctx, l)
    return ctx.asinh(ctx.sqrt(s2))


# ---------------------------------------------------------------- cone radius

def martin_cone_radius(q: int, dps: int = DEFAULT_DPS):
    """Radius of the embedded cone about a cone point of angle ``2 pi / q``.

    Zero for ``q <= 6``, where no cone of positive radius is guaranteed.
    """
    if q < 2:
        raise InputError("cone order q must be at least 2")
    ctx = _mp(dps)
    if q <= 6:
        return ctx.zero
    return ctx.acosh(1 / (2 * ctx.sin(ctx.pi / q)))


def cone_sinh_squared(q: int, dps: int = DEFAULT_DPS):
    if q < 2:
        raise InputError("cone order q must be at least 2")
    ctx = _mp(dps)
    if q <= 6:
        return ctx.zero
    return 1 / (4 * ctx.sin(ctx.pi / q) ** 2) - 1


# ------------------------------------------------------- critical thresholds

def _exceeds_area(iv, s2, plen: int):
    """Certified ``sinh^2 > A(plen)/pi`` for an interval ``s2`` (log-space for plen > 0)."""
    if plen == 0:
        return s2 > 0
    positive = s2 > 0
    if positive is not True:
        return False if positive is False else None
    return iv.log(s2) > _log_area(iv, plen)


def geodesic_inequality(l, plen: int, dps: int = DEFAULT_DPS):
    """Does ``pi sinh(r(l))**2 > A(plen)`` hold?  ``None`` when undecidable at ``dps``.

    Lengths at or beyond the end of the admissible range give ``False``: the
    guaranteed tube there has radius zero.
    """
    iv = _iv(dps)
    li = iv.mpf(str(l) if isinstance(l, Decimal) else l)
    if not (li > 0):
        raise InputError("geodesic length must be positive")
    limit = iv.sqrt(3) / (2 * iv.pi) * (iv.sqrt(2) - 1)
    if not (li < limit):
        return False
    c = 4 * iv.pi * li / iv.sqrt(3)
    return _exceeds_area(iv, iv.sqrt(1 - c) / c - iv.mpf(1) / 2, plen)


def critical_geodesic_bracket(plen: int, dps: int = DEFAULT_DPS):
    """Certified ``(lo, hi)`` with the tube inequality true at ``lo`` and false at ``hi``.

    ``hi`` is the domain limit when ``plen = 0``.
    """
    if plen < 0:
        raise InputError("plen must be nonnegative")
    ctx = _mp(dps + GUARD_DPS)
    limit = tube_length_limit(dps + GUARD_DPS)
    if plen == 0:
        return limit, limit
    # initial guess from inverting sqrt(1-c)/c - 1/2 = K; used only to seed the bracket
    s = ctx.mpf(area_over_pi(plen)) + ctx.mpf(1) / 2
    guess = 2 / (1 + ctx.sqrt(1 + 4 * s * s)) * ctx.sqrt(3) / (4 * ctx.pi)
    lo, hi = guess / 2, min(guess * 2, limit)
    while geodesic_inequality(lo, plen, dps) is not True:
        lo /= 2
    while geodesic_inequality(hi, plen, dps) is not False:
        hi = min(hi * 2, limit)
    tol = ctx.mpf(10) ** (-dps)
    while hi - lo > tol * lo:
        mid = (lo + hi) / 2
        verdict = geodesic_inequality(mid, plen, dps)
        if verdict is None:
            break
        if verdict:
            lo = mid
        else:
            hi = mid
    return lo, hi


def critical_geodesic_length(plen: int, dps: int = DEFAULT_DPS):
    """Supremum of lengths ``l`` for which ``pi sinh(r(l))**2 > A(plen)``."""
    if plen == 0:
        return tube_length_limit(dps)
    lo, hi = critical_geodesic_bracket(plen, dps)
    return _mp(dps).mpf((lo + hi) / 2)


def cone_inequality(q: int, plen: int, dps: int = DEFAULT_DPS):
    """Does ``pi sinh(r_q)**2 > A(plen)`` hold for the cone radius ``r_q``?"""
    if q <= 6:
        return False  # sinh^2 is exactly 0 there (or no cone at all)
    iv = _iv(dps)
    s2 = 1 / (4 * iv.sin(iv.pi / q) ** 2) - 1
    return _exceeds_area(iv, s2, plen)


def critical_cone_order(plen: int, dps: int = DEFAULT_DPS) -> int:
    """Smallest ``q`` with ``pi sinh(r_q)**2 > A(plen)``, certified at ``q - 1`` and ``q``."""
    if plen < 0:
        raise InputError("plen must be nonnegative")
    k = area_over_pi(plen)
    # q* grows like 2 pi sqrt(K); resolving q* vs q*-1 needs that many digits
    work = max(dps, k.bit_length() * 3 // 20 + 30)  # half the decimal digits of K, plus guard
    for _ in range(8):
        ctx = _mp(work)
        estimate = ctx.pi / ctx.asin(1 / (2 * ctx.sqrt(k + 1)))
        q = max(7, int(ctx.floor(estimate)) + 1)
        for _ in range(64):
            above = cone_inequality(q, plen, work)
            below = cone_inequality(q - 1, plen, work)
            if above is None or below is None:
                break
            if above and not below:
                return q
            q += 1 if not above else -1
        work *= 2
    raise PrecisionError(f"could not certify the critical cone order for plen={plen}")


# --------------------------------------------------------------- global bounds

def tube_radius_cap(plen: int, dps: int = DEFAULT_DPS):
    """``arcsinh(sqrt(A(plen)/pi))`` evaluated through logarithms."""
    ctx = _mp(dps)
    if plen == 0:
        return ctx.zero
    half_log = _log_area(ctx, plen) / 2
    return half_log + ctx.log(1 + ctx.sqrt(1 + ctx.exp(-2 * half_log)))


def volume_within_bound(volume, plen: int, dps: int = DEFAULT_DPS):
    """Certified ``volume <= pi * plen``; ``None`` if precision cannot decide."""
    iv = _iv(dps)
    v = iv.mpf(str(volume))
    return v <= iv.pi * plen


def global_bounds(plen: int, vol=None, eps=None, dps: int = DEFAULT_DPS) -> dict:
    """Volume, covering degree and diameter bounds for presentation length ``plen``.

    Returns mpmath numbers (and ints where exact); absent inputs leave the
    dependent entries out.
    """
    if plen < 0:
        raise InputError("plen must be nonnegative")
    ctx = _mp(dps)
    iv = _iv(dps)
    out: dict = {
        "volume_bound": ctx.pi * plen,
        "gromov_norm_bound": ctx.pi * plen / ctx.mpf(V3_INTERVAL[0]),
        "tube_r_max": tube_radius_cap(plen, dps),
    }
    if vol is not None:
        # the user's decimal goes straight into an enclosing interval, unrounded
        v = iv.mpf(str(vol) if isinstance(vol, (str, Decimal, int)) else vol)
        if not v > 0:
            raise InputError("volume must be positive")
        lo, hi = _lo_hi(ctx, iv.pi * plen / v)
        if ctx.floor(lo) != ctx.floor(hi):
            raise PrecisionError("covering degree bound undecided; raise --precision")
        out["degree_bound"] = int(ctx.floor(lo))
    if eps is not None:
        e = _real(ctx, eps)
        if not e > 0:
            raise InputError("eps must be positive")
        # sinh(e) - e ~ e^3/6 cancels about 2*log10(1/e) digits against e
        lost = max(0, int(-2 * ctx.log10(e))) + GUARD_DPS
        wide_iv = _iv(dps + lost)
        ei = wide_iv.mpf(e)
        gap = (wide_iv.exp(ei) - wide_iv.exp(-ei)) / 2 - ei
        wide = _mp(dps + lost)
        glo, ghi = _lo_hi(wide, wide_iv.pi * gap)
        if not glo > 0 or (ghi - glo) > glo * wide.mpf(10) ** (-dps):
            raise PrecisionError(f"pi*(sinh(eps) - eps) not resolved at {dps} digits; raise --precision")
        omega = ctx.mpf((glo + ghi) / 2)
        out["omega"] = omega
        out["diam_thick"] = 2 * ctx.pi * e * plen / omega
        out["diam_total"] = out["diam_thick"] + 2 * (e + 2 * out["tube_r_max"])
    return out
