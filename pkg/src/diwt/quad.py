"""Adaptive quadrature engines used throughout the package.

Three entry points cover every integral that appears downstream:

* ``integrate_finite``        -- double-exponential (tanh-sinh) rule on (a, b).
  Handles integrable endpoint singularities such as x**(-2*mu) without any
  special casing because the substitution pushes nodes toward the endpoints
  at a doubly exponential rate.
* ``integrate_semi_infinite`` -- truncates (0, inf) at a point where the
  supplied exponential decay bound falls below abs_tol/10, then reuses the
  finite rule.  The truncation point and tail bound are logged in the result
  metadata.
* ``integrate_vertical_line`` -- progressive trapezoid rule along a vertical
  line Re(s) = gamma, for Mellin-type integrands that are analytic in a strip
  and decay at both ends.  The trapezoid rule converges geometrically there.

All three refine by halving the step and comparing successive sums; they are
deterministic (no randomness, cached node tables) and report an error
estimate together with a convergence flag.  An optional extended-precision
mode (>= 30 significant digits, backed by mpmath) is selected through
``QuadSpec.precision``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from .errors import InvalidDecayScale, InvalidInterval, TailNotNegligible

__all__ = [
    "QuadSpec",
    "IntegralResult",
    "MellinBarnesSpec",
    "DEFAULT_SPEC",
    "integrate_finite",
    "integrate_semi_infinite",
    "integrate_vertical_line",
]


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and budgets for a quadrature call.

    abs_tol / rel_tol      convergence thresholds (both must be positive;
                           the achieved criterion is max(abs, rel * |value|))
    max_refinements        step-halving rounds after the coarse pass
    max_evals              hard budget on integrand evaluations
    precision              "double" (numpy) or "extended" (mpmath)
    dps                    working decimal digits in extended mode
    """

    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_refinements: int = 12
    max_evals: int = 2_000_000
    precision: str = "double"
    dps: int = 30

    def __post_init__(self):
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise ValueError("abs_tol must be positive and finite")
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise ValueError("rel_tol must be positive and finite")
        if int(self.max_refinements) < 1:
            raise ValueError("max_refinements must be >= 1")
        if int(self.max_evals) < 100:
            raise ValueError("max_evals must be >= 100")
        if self.precision not in ("double", "extended"):
            raise ValueError("precision must be 'double' or 'extended'")
        if self.precision == "extended" and int(self.dps) < 15:
            raise ValueError("extended mode needs dps >= 15")


DEFAULT_SPEC = QuadSpec()


@dataclass
class IntegralResult:
    """Value of an integral plus bookkeeping.

    ``converged=True`` implies ``error_estimate <= max(abs_tol,
    rel_tol * |value|)`` for the spec the integral was run with.
    """

    value: complex
    error_estimate: float
    evaluations: int
    converged: bool
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MellinBarnesSpec:
    """Contour data for a vertical-line integral.

    gamma_abscissa   real part of the integration line
    tail_cutoff      half-length T of the truncated line [gamma-iT, gamma+iT]
    quad             tolerances/budget for the trapezoid refinement
    """

    gamma_abscissa: float
    tail_cutoff: float = 60.0
    quad: QuadSpec = field(default_factory=QuadSpec)

    def __post_init__(self):
        if not math.isfinite(self.gamma_abscissa):
            raise ValueError("gamma_abscissa must be finite")
        if not (self.tail_cutoff > 0 and math.isfinite(self.tail_cutoff)):
            raise ValueError("tail_cutoff must be positive and finite")


# ---------------------------------------------------------------------------
# tanh-sinh node tables
#
# Abscissas t = k*h under the map u = tanh((pi/2) sinh t).  _TS_TMAX = 6.0
# keeps the endpoint distance delta = 1 - |u| and the weights inside normal
# double range (delta ~ 1.3e-275 at the last node).
# ---------------------------------------------------------------------------

_TS_TMAX = 6.0
_TS_W0 = math.pi / 2.0  # weight at t = 0


def _ts_point(t: float) -> tuple[float, float]:
    """(delta, weight) at abscissa t > 0, overflow-safe."""
    y = 0.5 * math.pi * math.sinh(t)
    e = math.exp(-2.0 * y)
    delta = 2.0 * e / (1.0 + e)
    w = 0.5 * math.pi * math.cosh(t) * 4.0 * e / (1.0 + e) ** 2
    return delta, w


@lru_cache(maxsize=None)
def _ts_nodes(level: int) -> tuple[np.ndarray, np.ndarray]:
    """New positive abscissas introduced at this refinement level.

    Level 0: t = 1..TMAX step 1.  Level m: odd multiples of 2**-m.
    Returns (delta, weight) arrays; t = 0 is handled separately.
    """
    h = 0.5 ** level
    if level == 0:
        ks = range(1, int(_TS_TMAX) + 1)
        ts = [k * 1.0 for k in ks]
    else:
        kmax = int(math.floor(_TS_TMAX / h))
        ts = [k * h for k in range(1, kmax + 1, 2)]
    pts = [_ts_point(t) for t in ts]
    delta = np.array([p[0] for p in pts])
    weight = np.array([p[1] for p in pts])
    return delta, weight


class _VecCall:
    """Calls f on node arrays, falling back to a scalar loop if needed."""

    def __init__(self, f):
        self.f = f
        self.vectorized = None
        self.count = 0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        self.count += x.size
        if self.vectorized is not False:
            try:
                y = np.asarray(self.f(x))
                if y.shape == x.shape:
                    self.vectorized = True
                    return y
            except (TypeError, ValueError, IndexError):
                if self.vectorized is True:
                    raise
            self.vectorized = False
        return np.asarray([self.f(float(xi)) for xi in x])


def integrate_finite(f, a: float, b: float, spec: QuadSpec = DEFAULT_SPEC) -> IntegralResult:
    """Integrate f over (a, b) with the tanh-sinh rule.

    f may return real or complex values and is preferentially called with
    node arrays; scalar-only callables are detected and looped over.  The
    endpoints themselves are never evaluated unless a node collapses onto
    one through rounding, in which case it is dropped (its weight is below
    1e-270 of the interval scale).
    """
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise InvalidInterval(f"expected finite a < b, got ({a}, {b})")
    if spec.precision == "extended":
        return _integrate_finite_mp(f, a, b, spec)

    c = 0.5 * (b - a)
    mid = a + c
    fv = _VecCall(f)

    total = None
    err = math.inf
    converged = False
    levels_done = 0
    for m in range(0, spec.max_refinements + 1):
        delta, weight = _ts_nodes(m)
        xl = a + c * delta
        xr = b - c * delta
        # nodes that round onto an endpoint are dropped per side; their
        # weights are below 1e-16 of the interval scale
        kl = xl > a
        kr = xr < b
        h = 0.5 ** m
        n_new = int(np.count_nonzero(kl)) + int(np.count_nonzero(kr)) + (1 if m == 0 else 0)
        if fv.count + n_new > spec.max_evals:
            break
        xs = np.concatenate([xl[kl], xr[kr]])
        ws = np.concatenate([weight[kl], weight[kr]])
        vals = fv(xs)
        partial = np.sum(ws * vals)
        if m == 0:
            partial = partial + _TS_W0 * fv(np.array([mid]))[0]
            total = c * h * partial
        else:
            prev_total = total
            total = 0.5 * total + c * h * partial
            err = abs(total - prev_total)
        levels_done = m
        if m >= 2 and err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            converged = True
            break

    return IntegralResult(
        value=_as_python_number(total),
        error_estimate=float(err) if math.isfinite(err) else float("inf"),
        evaluations=fv.count,
        converged=converged,
        meta={"levels": levels_done, "rule": "tanh-sinh"},
    )


def integrate_semi_infinite(f, decay_scale: float, spec: QuadSpec = DEFAULT_SPEC) -> IntegralResult:
    """Integrate f over (0, inf) given an eventual bound |f(t)| <= C e^(-t/d).

    The interval is truncated where the unit-constant decay bound drops
    below abs_tol/10 and the finite piece goes through the tanh-sinh rule.
    The truncation point and the tail bound it implies are recorded in
    ``meta`` and folded into the error estimate.
    """
    if not (decay_scale > 0 and math.isfinite(decay_scale)):
        raise InvalidDecayScale(f"decay_scale must be positive and finite, got {decay_scale}")
    d = float(decay_scale)
    cutoff = d * max(math.log(10.0 * max(d, 1.0) / spec.abs_tol), 10.0)
    tail_bound = d * math.exp(-cutoff / d)
    if spec.precision == "extended":
        res = _integrate_semi_infinite_mp(f, spec)
        res.meta.update({"truncation_point": None, "tail_bound": 0.0})
        return res
    res = integrate_finite(f, 0.0, cutoff, spec)
    res.meta.update({"truncation_point": cutoff, "tail_bound": tail_bound})
    res.error_estimate = float(res.error_estimate + tail_bound)
    return res


def integrate_vertical_line(g, mb: MellinBarnesSpec) -> IntegralResult:
    """Compute (1/2*pi) * Integral of g(gamma + i t) dt over [-T, T].

    This is the (1/2*pi*i) contour integral of g along the vertical line
    after the substitution s = gamma + i t.  g must be analytic in a strip
    around the line and small at t = +-T; if |g| at the endpoints exceeds
    the absolute tolerance a TailNotNegligible error is raised.  The value
    is returned with its imaginary part intact so callers can assert
    realness where symmetry demands it.
    """
    spec = mb.quad
    gam = float(mb.gamma_abscissa)
    T = float(mb.tail_cutoff)
    fv = _VecCall(lambda t: g(gam + 1j * np.asarray(t)))

    gtail = np.abs(fv(np.array([-T, T])))
    if float(gtail.max()) > spec.abs_tol:
        raise TailNotNegligible(
            f"|g| at the contour ends is {float(gtail.max()):.3e} > abs_tol={spec.abs_tol:.1e}; "
            "increase tail_cutoff"
        )
    if spec.precision == "extended":
        return _integrate_vertical_line_mp(g, gam, T, spec)

    h0 = 0.5
    n0 = int(math.ceil(T / h0))
    h0 = T / n0  # land nodes exactly on +-T
    total = None
    err = math.inf
    converged = False
    for m in range(0, spec.max_refinements + 1):
        h = h0 * 0.5 ** m
        if m == 0:
            k = np.arange(-n0, n0 + 1)
            t = k * h0
            vals = fv(t)
            w = np.ones(t.size)
            w[0] = w[-1] = 0.5
            total = h * np.sum(w * vals) / (2.0 * math.pi)
        else:
            n = int(round(T / h))
            k = np.arange(-n + 1, n, 2)
            t = k * h
            if fv.count + t.size > spec.max_evals:
                break
            vals = fv(t)
            prev_total = total
            total = 0.5 * total + h * np.sum(vals) / (2.0 * math.pi)
            err = abs(total - prev_total)
        if m >= 2 and err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            converged = True
            break

    return IntegralResult(
        value=_as_python_number(total),
        error_estimate=float(err) if math.isfinite(err) else float("inf"),
        evaluations=fv.count,
        converged=converged,
        meta={"rule": "trapezoid-line", "gamma": gam, "tail_cutoff": T,
              "tail_magnitude": float(gtail.max())},
    )


def _as_python_number(v):
    v = complex(v)
    return v.real if v.imag == 0.0 else v


# ---------------------------------------------------------------------------
# extended-precision backends (mpmath tanh-sinh)
# ---------------------------------------------------------------------------

def _integrate_finite_mp(f, a, b, spec: QuadSpec) -> IntegralResult:
    import mpmath as mp

    # 20 guard digits: the tanh-sinh rule sheds precision at endpoint
    # singularities, so working precision must exceed the target
    with mp.workdps(int(spec.dps) + 20):
        count = [0]

        def fw(t):
            count[0] += 1
            return f(t)

        val, est = mp.quad(fw, [mp.mpf(a), mp.mpf(b)], error=True,
                           maxdegree=max(6, spec.max_refinements))
        tol = max(spec.abs_tol, spec.rel_tol * abs(float(mp.fabs(val))))
        with mp.workdps(int(spec.dps)):
            val = +val
        return IntegralResult(
            value=val,
            error_estimate=float(est),
            evaluations=count[0],
            converged=float(est) <= tol,
            meta={"rule": "tanh-sinh", "precision": "extended", "dps": int(spec.dps)},
        )


def _integrate_semi_infinite_mp(f, spec: QuadSpec) -> IntegralResult:
    import mpmath as mp

    with mp.workdps(int(spec.dps) + 20):
        count = [0]

        def fw(t):
            count[0] += 1
            return f(t)

        val, est = mp.quad(fw, [mp.mpf(0), mp.inf], error=True,
                           maxdegree=max(6, spec.max_refinements))
        tol = max(spec.abs_tol, spec.rel_tol * abs(float(mp.fabs(val))))
        with mp.workdps(int(spec.dps)):
            val = +val
        return IntegralResult(
            value=val,
            error_estimate=float(est),
            evaluations=count[0],
            converged=float(est) <= tol,
            meta={"rule": "tanh-sinh", "precision": "extended", "dps": int(spec.dps)},
        )


def _integrate_vertical_line_mp(g, gam, T, spec: QuadSpec) -> IntegralResult:
    import mpmath as mp

    with mp.workdps(int(spec.dps) + 20):
        count = [0]

        def fw(t):
            count[0] += 1
            return g(mp.mpf(gam) + 1j * t)

        val, est = mp.quad(fw, [-mp.mpf(T), mp.mpf(T)], error=True,
                           maxdegree=max(6, spec.max_refinements))
        val = val / (2 * mp.pi)
        tol = max(spec.abs_tol, spec.rel_tol * abs(float(mp.fabs(val))))
        with mp.workdps(int(spec.dps)):
            val = +val
        return IntegralResult(
            value=val,
            error_estimate=float(est),
            evaluations=count[0],
            converged=float(est) <= tol,
            meta={"rule": "trapezoid-line", "precision": "extended",
                  "gamma": gam, "tail_cutoff": T},
        )
