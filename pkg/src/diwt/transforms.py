"""Series transforms over the scaled Whittaker family.

Four operations form the core: a forward map summing coefficient-weighted
scaled Whittaker values, an inversion recovering one coefficient through a
cosine-kernel integral with sinh-type index amplification, a coefficient
transform projecting a function onto the half-integer-index family, and a
sine-kernel synthesis rebuilding the function from its coefficients.  The
erfc-kernel specialization of the inversion at mu = 0 is provided as a
separate entry point so the two constant conventions can be checked against
each other.

Inversion results carry an explicit error bound: the index amplification
factor n*sinh(2*pi*n) multiplies every quadrature and kernel error, and
honesty about that growth is part of the interface.  Functions enter the
integrals through immutable handles; analytic handles (forward series,
trigonometric profile) are the only ones with recovery guarantees, and
sampled-grid handles warn accordingly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (
    DomainError,
    IntegrabilityWarning,
    NonConvergence,
    OrderError,
    PrecisionBudgetExceeded,
)
from .kernels import KernelKind, _kernel_eval, _kernel_eval_mp
from .quad import DEFAULT_SPEC, QuadSpec, integrate_finite, integrate_semi_infinite
from .specfun import WhittakerOrder, _w_mb_extended, gamma_abs_squared, \
    parabolic_cylinder_d_scaled, whittaker_w_mb


# ---------------------------------------------------------------------------
# parameter and sequence types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformParams:
    """Order parameter mu and the damping angle delta in [0, pi/2).

    delta enters only the admissibility diagnostic; the transform paths
    themselves require mu < 1/2 and enforce it at the call sites.
    """

    mu: float
    delta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")
        if not (0.0 <= self.delta < 0.5 * math.pi):
            raise DomainError(f"delta must lie in [0, pi/2), got {self.delta}")


def _as_number(v):
    c = complex(v)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise DomainError(f"coefficient {v!r} is not finite")
    return c.real if c.imag == 0.0 else c


def _py_number(v):
    c = complex(v)
    return c.real if c.imag == 0.0 else c


@dataclass(frozen=True)
class CoefficientSeq:
    """Finite coefficient list a_1..a_N; indexing is 1-based throughout."""

    values: tuple

    def __post_init__(self):
        vals = tuple(_as_number(v) for v in self.values)
        if not vals:
            raise DomainError("a coefficient sequence needs at least one entry")
        object.__setattr__(self, "values", vals)

    @property
    def n_terms(self) -> int:
        return len(self.values)

    def value_at(self, n: int) -> complex:
        # entries beyond the stored list are the permitted trailing zeros
        if int(n) != n or n < 1:
            raise DomainError(f"coefficient index must be a positive integer, got {n}")
        return self.values[n - 1] if n <= len(self.values) else 0.0

    @property
    def is_zero(self) -> bool:
        return not any(self.values)


@dataclass(frozen=True)
class FourierPolynomial:
    """Trigonometric profile sum(b_k sin(ku)) + sum(c_k cos(ku)).

    sine_coeffs holds b_1..b_K and cosine_coeffs holds c_0..c_K.  The
    profile is 2*pi-periodic by construction and Lipschitz with the
    computable constant `lipschitz_bound`.
    """

    sine_coeffs: tuple = ()
    cosine_coeffs: tuple = ()

    def __post_init__(self):
        sc = tuple(float(b) for b in self.sine_coeffs)
        cc = tuple(float(c) for c in self.cosine_coeffs)
        if not all(map(math.isfinite, sc + cc)):
            raise DomainError("profile coefficients must be finite")
        object.__setattr__(self, "sine_coeffs", sc)
        object.__setattr__(self, "cosine_coeffs", cc)

    @property
    def degree(self) -> int:
        return max(len(self.sine_coeffs), max(len(self.cosine_coeffs) - 1, 0))

    @property
    def lipschitz_bound(self) -> float:
        s = sum(k * abs(b) for k, b in enumerate(self.sine_coeffs, 1))
        s += sum(k * abs(c) for k, c in enumerate(self.cosine_coeffs))
        return s

    def evaluate(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for k, b in enumerate(self.sine_coeffs, 1):
            if b:
                out += b * np.sin(k * u)
        for k, c in enumerate(self.cosine_coeffs):
            if c:
                out += c * np.cos(k * u) if k else c * np.ones_like(u)
        return out if out.shape else float(out)

    def odd_sine_part(self, u):
        # the part that survives against the odd sinh weight
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for k, b in enumerate(self.sine_coeffs, 1):
            if b:
                out += b * np.sin(k * u)
        return out


# ---------------------------------------------------------------------------
# function handles
# ---------------------------------------------------------------------------

class FunctionHandle:
    """Immutable positive-axis function with integration metadata.

    decay_scale d asserts an eventual bound |f(t)| <= C e^{-t/d} used for
    interval truncation; support_end marks compactly supported handles.
    """

    decay_scale: float = 2.0
    support_end: float | None = None
    is_zero: bool = False

    def __call__(self, x, quad: QuadSpec = DEFAULT_SPEC):
        raise NotImplementedError


class ForwardHandle(FunctionHandle):
    """f(x) = sum_n a_n (scaled Whittaker)(mu, n; x); decays like e^{-x} x^mu."""

    decay_scale = 1.0

    def __init__(self, seq: CoefficientSeq, mu: float):
        if not (math.isfinite(mu) and mu < 0.5):
            raise OrderError(f"forward series requires mu < 1/2, got {mu}")
        self.seq = seq
        self.mu = float(mu)
        self.is_zero = seq.is_zero

    def __call__(self, x, quad: QuadSpec = DEFAULT_SPEC):
        arr = np.asarray(x, dtype=float)
        anycomplex = any(isinstance(a, complex) for a in self.seq.values)
        out = np.zeros(arr.shape, dtype=complex if anycomplex else float)
        flat = out.reshape(-1)
        for i, t in enumerate(arr.reshape(-1)):
            acc = 0.0
            for m, a in enumerate(self.seq.values, 1):
                if a:
                    acc += a * whittaker_w_mb(WhittakerOrder(self.mu, m), float(t),
                                              quad=quad, scaled=True)
            flat[i] = acc
        return out[()] if out.shape == () else out

    def _eval_mp(self, t, dps: int):
        import mpmath as mp

        acc = mp.mpf(0)
        for m, a in enumerate(self.seq.values, 1):
            if a:
                acc += a * _w_mb_extended(self.mu, 1j * mp.mpf(m), t, None, dps, True)
        return acc


class ProfileHandle(FunctionHandle):
    """f built from a trigonometric profile by the cylinder-weighted integral.

    Bounded but not decaying at infinity: fine as coefficient-transform
    input, where the scaled Whittaker weight supplies the decay.
    """

    def __init__(self, profile: FourierPolynomial, mu: float):
        if not (math.isfinite(mu) and mu < 0.5):
            raise OrderError(f"profile construction requires mu < 1/2, got {mu}")
        self.profile = profile
        self.mu = float(mu)
        self.is_zero = not any(profile.sine_coeffs)

    def __call__(self, x, quad: QuadSpec = DEFAULT_SPEC):
        arr = np.asarray(x, dtype=float)
        out = np.zeros(arr.shape, dtype=float)
        flat = out.reshape(-1)
        for i, t in enumerate(arr.reshape(-1)):
            flat[i] = function_from_profile(self.profile, self.mu, float(t), quad)
        return out[()] if out.shape == () else out

    def _eval_mp(self, t, dps: int):
        import mpmath as mp

        mu = self.mu
        bs = self.profile.sine_coeffs
        with mp.workdps(dps + 10):
            tt = mp.mpf(t)
            r2t = mp.sqrt(2 * tt)

            def h(u):
                psi = mp.fsum(b * mp.sin(k * u) for k, b in enumerate(bs, 1) if b)
                z = r2t * mp.cosh(u)
                return mp.exp(z * z / 4) * mp.pcfd(2 * (mp.mpf(mu) - 1), z) \
                    * mp.sinh(u) * psi

            j = mp.quad(h, [0, mp.pi / 2, mp.pi])
            val = mp.gamma(2 * (1 - mp.mpf(mu))) * mp.power(2 * tt, 1 - mp.mpf(mu)) * 2 * j
        with mp.workdps(dps):
            return +val


class SampledHandle(FunctionHandle):
    """Monotone cubic interpolant of sampled data, zero outside the grid.

    Quadrature nodes are mapped through the interpolant; recovery
    guarantees cover analytic handles only, and the transforms warn when
    one of these is supplied.
    """

    def __init__(self, x, values):
        xa = np.asarray(x, dtype=float)
        va = np.asarray(values, dtype=float)
        if xa.ndim != 1 or xa.size < 2 or xa.shape != va.shape:
            raise DomainError("sampled handle needs matching 1-d x and value arrays")
        if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(va))):
            raise DomainError("sampled handle data must be finite")
        if xa[0] <= 0.0 or np.any(np.diff(xa) <= 0.0):
            raise DomainError("sample abscissae must be positive and strictly increasing")
        self._interp = PchipInterpolator(xa, va, extrapolate=False)
        self.support_end = float(xa[-1])
        self.support_start = float(xa[0])
        self.is_zero = not np.any(va)

    def __call__(self, x, quad: QuadSpec = DEFAULT_SPEC):
        arr = np.asarray(x, dtype=float)
        y = self._interp(arr)
        y = np.where(np.isnan(y), 0.0, y)
        return y[()] if y.shape == () else y

    def _eval_mp(self, t, dps: int):
        import mpmath as mp

        # data are double precision; the interpolant cannot add digits
        return mp.mpf(float(self(float(t))))


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def admissibility_sum(seq: CoefficientSeq, params: TransformParams) -> float:
    """Damped coefficient sum sum_m |a_m| e^{-2 delta m} / |Gamma(1/2 - mu + im)|^2.

    Finite sequences always satisfy the summability requirement; the value
    is returned as a conditioning diagnostic (it grows like e^{pi m} per
    unit coefficient, so large entries at large m signal trouble).
    """
    total = 0.0
    for m, a in enumerate(seq.values, 1):
        if a:
            total += abs(a) * math.exp(-2.0 * params.delta * m) \
                / gamma_abs_squared(complex(0.5 - params.mu, m))
    return total


# ---------------------------------------------------------------------------
# forward map
# ---------------------------------------------------------------------------

def forward_series(seq: CoefficientSeq, mu: float, x: float,
                   quad: QuadSpec = DEFAULT_SPEC):
    """Sum of a_n times the scaled Whittaker value of index n at x."""
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"forward_series requires x > 0, got {x}")
    return _py_number(ForwardHandle(seq, mu)(x, quad))


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------

_DOUBLE_INDEX_CAP = 8
_KERNEL_TOL_FLOOR = 3e-16
_OUTER_TOL_FLOOR = 1e-15


def _index_cap(quad: QuadSpec) -> int:
    if quad.precision == "double":
        return _DOUBLE_INDEX_CAP
    return int((quad.dps - 3) * math.log(10.0) / (2.0 * math.pi))


@dataclass(frozen=True)
class InversionResult:
    """Recovered coefficient with the amplification-weighted error bound."""

    value: float
    error_bound: float
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SynthesisResult:
    """Synthesis partial sum; `terms` holds per-index contributions."""

    value: float
    terms: tuple


def _warn_if_sampled(f: FunctionHandle):
    if isinstance(f, SampledHandle):
        warnings.warn(
            "recovery guarantees cover analytic handles only: sampled data go "
            "through a monotone cubic interpolant, and the reported bound "
            "covers quadrature of the interpolant, not the data model",
            IntegrabilityWarning, stacklevel=3)


def _guard_outer(r, what: str):
    # the reported bound is the interface; hard failure only when the
    # estimate itself stopped meaning anything
    if not r.converged and r.error_estimate > 0.1 * max(abs(r.value), 1e-13):
        raise NonConvergence(
            f"{what} stalled at error {r.error_estimate:.2e} "
            f"against value {r.value:.2e}")


def _integrate_low(g_low, f: FunctionHandle, spec: QuadSpec):
    """The (0, 1] piece in v = -log t, clipped to the handle support.

    Returns None when the handle vanishes on the whole piece.
    """
    start = getattr(f, "support_start", 0.0)
    if start >= 1.0:
        return None
    if start > 0.0:
        return integrate_finite(g_low, 0.0, math.log(1.0 / start), spec)
    return integrate_semi_infinite(g_low, 2.0, spec)


def _integrate_high(g_high, f: FunctionHandle, spec: QuadSpec):
    """The [1, inf) piece in s = t - 1, clipped to the handle support."""
    if f.support_end is not None:
        if f.support_end <= 1.0:
            return None
        return integrate_finite(g_high, 0.0, f.support_end - 1.0, spec)
    return integrate_semi_infinite(g_high, f.decay_scale, spec)


def _coarse_mass(f: FunctionHandle) -> float:
    """Loose estimate of int |f(t)| t^{-3/2} dt for kernel-error propagation."""
    mspec = QuadSpec(abs_tol=1e-3, rel_tol=1e-2, max_refinements=7)

    def low(v):
        t = math.exp(-v)
        return abs(f(t)) * t ** -0.5

    def high(s):
        t = 1.0 + s
        return abs(f(t)) * t ** -1.5

    r1 = _integrate_low(low, f, mspec)
    r2 = _integrate_high(high, f, mspec)
    m1 = 0.0 if r1 is None else abs(r1.value)
    m2 = 0.0 if r2 is None else abs(r2.value)
    # 1.5 slack on a coarse estimate plus a unit floor
    return 1.5 * (m1 + m2) + 1.0


def _invert_with_kernel(kind: KernelKind, mu: float, prefactor: float,
                        f: FunctionHandle, n: int, quad: QuadSpec) -> InversionResult:
    if int(n) != n or n < 1:
        raise DomainError(f"coefficient index must be a positive integer, got {n}")
    n = int(n)
    cap = _index_cap(quad)
    if n > cap:
        raise PrecisionBudgetExceeded(
            f"index {n} exceeds the {quad.precision}-precision cap {cap}: the "
            f"amplification factor n sinh(2 pi n) outruns the achievable "
            f"quadrature accuracy")
    _warn_if_sampled(f)
    if f.is_zero:
        return InversionResult(0.0, 0.0, {"zero_function": True})

    amp = n * math.sinh(2.0 * math.pi * n)
    if quad.precision == "extended":
        return _invert_extended(kind, mu, prefactor, f, n, quad, amp)

    kern_tol = max(quad.abs_tol * math.exp(-2.0 * math.pi * n) / 10.0,
                   _KERNEL_TOL_FLOOR)
    kspec = QuadSpec(abs_tol=kern_tol, rel_tol=min(quad.rel_tol, 1e-12),
                     max_refinements=max(quad.max_refinements, 12),
                     max_evals=quad.max_evals)
    outer_tol = max(quad.abs_tol / (abs(prefactor) * amp * 10.0), _OUTER_TOL_FLOOR)
    ospec = QuadSpec(abs_tol=outer_tol, rel_tol=1e-10,
                     max_refinements=max(quad.max_refinements, 12),
                     max_evals=quad.max_evals)
    if isinstance(f, SampledHandle):
        # knot kinks of the interpolant stall deep refinement, and its
        # model error dwarfs quadrature error regardless
        ospec = QuadSpec(abs_tol=max(outer_tol, 1e-12), rel_tol=1e-8,
                         max_refinements=min(quad.max_refinements, 9),
                         max_evals=quad.max_evals)
    # f itself is evaluated at a fixed tight tolerance: a loose
    # coefficient-level request must not loosen the function values the
    # amplification factor multiplies
    fspec = QuadSpec(abs_tol=1e-15, rel_tol=1e-13, max_refinements=12)

    kerr_seen = [0.0]

    def kernel(t: float) -> float:
        v, e, _ = _kernel_eval(kind, mu, complex(n), t, kspec)
        if e > kerr_seen[0]:
            kerr_seen[0] = e
        return float(np.real(v))

    # (0, 1] under v = -log t: the small-x oscillation of f is logarithmic,
    # so the substitution makes it linear and the endpoint integrable
    def g_low(v: float):
        t = math.exp(-v)
        return kernel(t) * f(t, fspec) * t ** -0.5

    def g_high(s: float):
        t = 1.0 + s
        return kernel(t) * f(t, fspec) * t ** -1.5

    # piece boundaries follow the handle support so that the zero
    # extension's jumps sit at interval endpoints, which the quadrature
    # rule approaches but never evaluates
    r1 = _integrate_low(g_low, f, ospec)
    low_value, low_err = (0.0, 0.0) if r1 is None else (r1.value, r1.error_estimate)
    if r1 is not None:
        _guard_outer(r1, "inversion integral on (0, 1]")
    r2 = _integrate_high(g_high, f, ospec)
    if r2 is None:
        high_value, high_err = 0.0, 0.0
    else:
        _guard_outer(r2, "inversion integral on [1, inf)")
        high_value, high_err = r2.value, r2.error_estimate

    mass = _coarse_mass(f)
    value = _py_number(prefactor * amp * (low_value + high_value))
    # the 1e-14 term covers the relative error of the f evaluations
    bound = abs(prefactor) * amp * (
        low_err + high_err
        + (max(kerr_seen[0], kern_tol) + 1e-14) * mass)
    return InversionResult(value, float(bound),
                           {"amplification": amp, "kernel_tolerance": kern_tol,
                            "outer_tolerance": outer_tol, "mass_estimate": mass})


def _invert_extended(kind: KernelKind, mu: float, prefactor, f, n: int,
                     quad: QuadSpec, amp: float) -> InversionResult:
    # full-precision chain; expect minutes per coefficient, the nested
    # contour and kernel quadratures dominate
    import mpmath as mp

    if not hasattr(f, "_eval_mp"):
        raise DomainError("extended-precision inversion needs an analytic handle")
    dps = int(quad.dps)
    tol = mp.mpf(10) ** (-dps)
    cut_low = 2.0 * (math.log(20.0) + dps * math.log(10.0))
    cut_high = f.decay_scale * (math.log(10.0) * (dps + 1) + 1.0)

    def g_low(v):
        t = mp.exp(-v)
        k = _kernel_eval_mp(kind, mu, complex(n), t, dps)
        return k * f._eval_mp(t, dps) / mp.sqrt(t)

    def g_high(s):
        t = 1 + s
        k = _kernel_eval_mp(kind, mu, complex(n), t, dps)
        return k * f._eval_mp(t, dps) * mp.power(t, mp.mpf(-1.5))

    r1 = integrate_finite(g_low, 0.0, cut_low, quad)
    r2 = integrate_finite(g_high, 0.0, cut_high, quad)
    mass = _coarse_mass(f)
    with mp.workdps(dps):
        ampx = mp.mpf(n) * mp.sinh(2 * mp.pi * n)
        value = mp.mpf(prefactor) * ampx * (r1.value + r2.value)
        bound = abs(prefactor) * ampx * (
            mp.mpf(r1.error_estimate) + mp.mpf(r2.error_estimate)
            + mp.mpf(10) ** (2 - dps) * mass + 2 * tol)
    return InversionResult(value, bound,
                           {"amplification": amp, "dps": dps,
                            "mass_estimate": mass})


def invert_series(f: FunctionHandle, params: TransformParams, n: int,
                  quad: QuadSpec = DEFAULT_SPEC) -> InversionResult:
    """Recover coefficient n from f through the cosine-kernel integral.

    The integral against the cylinder cosine kernel and t^{-3/2} is
    amplified by n sinh(2 pi n); the returned error bound multiplies every
    quadrature and kernel error estimate by that factor, and callers should
    trust the bound over any fixed tolerance.  The kernel quadrature runs
    at a tolerance derated by e^{-2 pi n}/10 relative to the requested
    coefficient accuracy (quad.abs_tol), floored near machine precision.
    """
    mu = float(params.mu)
    if not mu < 0.5:
        raise OrderError(f"inversion requires mu < 1/2, got {mu}")
    pref = 2.0 ** (0.5 + mu) / math.pi ** 2 * math.gamma(1.0 - 2.0 * mu)
    return _invert_with_kernel(KernelKind.CYLINDER_COS, mu, pref, f, n, quad)


def invert_series_kl(f: FunctionHandle, n: int,
                     quad: QuadSpec = DEFAULT_SPEC) -> InversionResult:
    """The mu = 0 inversion in its erfc-kernel normalization.

    Same integral as invert_series at mu = 0 up to the constant
    sqrt(pi/2) folded between kernel and prefactor; the two entry points
    exist so that consistency of the conventions is checkable.
    """
    return _invert_with_kernel(KernelKind.ERFC_COS, 0.0, math.pi ** -1.5, f, n, quad)


# ---------------------------------------------------------------------------
# coefficient transform
# ---------------------------------------------------------------------------

def coefficient_transform(f: FunctionHandle, mu: float, n: int,
                          quad: QuadSpec = DEFAULT_SPEC):
    """Project f onto index n/2: int (scaled Whittaker)(mu, n/2; x) f(x) x^{mu-2} dx.

    Note the half index: the family here is indexed by n/2, not n.  The
    x^{mu-2} weight demands decay of f at 0; profile handles provide
    x^{1-mu} and pass, while generic handles are probed numerically and an
    IntegrabilityWarning is issued when the integrand mass fails to fade.
    """
    mu = float(mu)
    if not (math.isfinite(mu) and mu < 0.5):
        raise OrderError(f"coefficient_transform requires mu < 1/2, got {mu}")
    if int(n) != n or n < 1:
        raise DomainError(f"coefficient index must be a positive integer, got {n}")
    n = int(n)
    _warn_if_sampled(f)
    if f.is_zero:
        return 0.0
    order = WhittakerOrder(mu, 0.5 * n)
    pspec = quad if quad.precision == "double" else DEFAULT_SPEC

    def weighted(t: float):
        return whittaker_w_mb(order, t, quad=pspec, scaled=True) \
            * f(t, pspec) * t ** (mu - 2.0)

    # decay probe at 0: t * integrand should fade as t -> 0; max over a few
    # points per decade so an oscillation zero cannot mask growth
    lo = max(f.support_start, 1e-7) if isinstance(f, SampledHandle) else 1e-7
    near = max(abs(weighted(lo * c)) * lo * c for c in (1.0, 2.2, 4.7))
    far = max(abs(weighted(1e-3 * c)) * 1e-3 * c for c in (1.0, 2.2, 4.7))
    if near > 0.5 * far and near > 10.0 * quad.abs_tol:
        warnings.warn(
            f"integrand mass near 0 is not fading (|t g(t)| {far:.2e} -> "
            f"{near:.2e}); the x^(mu-2) weight may not be integrable against "
            f"this handle", IntegrabilityWarning, stacklevel=2)

    if quad.precision == "extended":
        return _coefficient_transform_extended(f, mu, n, quad)

    def g_low(v: float):
        t = math.exp(-v)
        return weighted(t) * t

    def g_high(s: float):
        return weighted(1.0 + s)

    if isinstance(f, SampledHandle):
        quad = QuadSpec(abs_tol=max(quad.abs_tol, 1e-12), rel_tol=1e-8,
                        max_refinements=min(quad.max_refinements, 9),
                        max_evals=quad.max_evals)
    r1 = _integrate_low(g_low, f, quad)
    low = 0.0
    if r1 is not None:
        _guard_outer(r1, "coefficient integral on (0, 1]")
        low = r1.value
    r2 = _integrate_high(g_high, f, quad)
    high = 0.0
    if r2 is not None:
        _guard_outer(r2, "coefficient integral on [1, inf)")
        high = r2.value
    return _py_number(low + high)


def _coefficient_transform_extended(f, mu: float, n: int, quad: QuadSpec):
    import mpmath as mp

    if not hasattr(f, "_eval_mp"):
        raise DomainError("extended-precision transform needs an analytic handle")
    dps = int(quad.dps)
    rho = 0.5j * n
    cut_low = 2.0 * (math.log(20.0) + dps * math.log(10.0))
    cut_high = math.log(10.0) * (dps + 1) + 1.0

    def g_low(v):
        t = mp.exp(-v)
        return _w_mb_extended(mu, rho, t, None, dps, True) * f._eval_mp(t, dps) \
            * mp.power(t, mp.mpf(mu) - 1)

    def g_high(s):
        t = 1 + s
        return _w_mb_extended(mu, rho, t, None, dps, True) * f._eval_mp(t, dps) \
            * mp.power(t, mp.mpf(mu) - 2)

    r1 = integrate_finite(g_low, 0.0, cut_low, quad)
    r2 = integrate_finite(g_high, 0.0, cut_high, quad)
    with mp.workdps(dps):
        return +(r1.value + r2.value)


# ---------------------------------------------------------------------------
# profile construction and synthesis
# ---------------------------------------------------------------------------

def function_from_profile(profile: FourierPolynomial, mu: float, x: float,
                          quad: QuadSpec = DEFAULT_SPEC) -> float:
    """Build f(x) by integrating the profile against the cylinder weight.

    Over the symmetric interval the even cylinder factor kills every cosine
    harmonic against the odd sinh weight, so only the sine part enters; the
    integral is folded onto [0, pi] accordingly.
    """
    mu = float(mu)
    x = float(x)
    if not (math.isfinite(mu) and mu < 0.5):
        raise OrderError(f"function_from_profile requires mu < 1/2, got {mu}")
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"function_from_profile requires x > 0, got {x}")
    if not any(profile.sine_coeffs):
        return 0.0
    if quad.precision == "extended":
        return ProfileHandle(profile, mu)._eval_mp(x, quad.dps)

    alpha = 2.0 - 2.0 * mu
    root2x = math.sqrt(2.0 * x)
    inner = max(min(quad.rel_tol * 1e-2, 1e-14), 1e-15)

    def h(u):
        u = np.asarray(u, dtype=float)
        return parabolic_cylinder_d_scaled(alpha, root2x * np.cosh(u), rel_tol=inner) \
            * np.sinh(u) * profile.odd_sine_part(u)

    r = integrate_finite(h, 0.0, math.pi, quad)
    if not r.converged:
        raise NonConvergence(
            f"profile integral at x={x} stalled at error {r.error_estimate:.2e}")
    return math.gamma(2.0 * (1.0 - mu)) * (2.0 * x) ** (1.0 - mu) * 2.0 * r.value


def _function_from_profile_full_range(profile: FourierPolynomial, mu: float,
                                      x: float, quad: QuadSpec = DEFAULT_SPEC) -> float:
    # unfolded [-pi, pi] evaluation with the complete profile, kept as the
    # symmetry oracle for the folded form
    alpha = 2.0 - 2.0 * mu
    root2x = math.sqrt(2.0 * x)

    def h(u):
        u = np.asarray(u, dtype=float)
        return parabolic_cylinder_d_scaled(alpha, root2x * np.cosh(u)) \
            * np.sinh(u) * profile.evaluate(u)

    r = integrate_finite(h, -math.pi, math.pi, quad)
    if not r.converged:
        raise NonConvergence("full-range profile integral did not converge")
    return math.gamma(2.0 * (1.0 - mu)) * (2.0 * x) ** (1.0 - mu) * r.value


def closed_form_coefficients(profile: FourierPolynomial, mu: float, n: int) -> float:
    """Exact coefficients of a trigonometric profile: 4^{1-mu} pi^2 b_n / sinh(pi n).

    Cosine harmonics contribute nothing (orthogonality against the sine
    system); indices beyond the profile degree give zero.  No quadrature.
    """
    mu = float(mu)
    if not (math.isfinite(mu) and mu < 0.5):
        raise OrderError(f"closed_form_coefficients requires mu < 1/2, got {mu}")
    if int(n) != n or n < 1:
        raise DomainError(f"coefficient index must be a positive integer, got {n}")
    n = int(n)
    b = profile.sine_coeffs[n - 1] if n <= len(profile.sine_coeffs) else 0.0
    if b == 0.0:
        return 0.0
    return 4.0 ** (1.0 - mu) * math.pi ** 2 * b / math.sinh(math.pi * n)


def synthesize_series(seq: CoefficientSeq, mu: float, x: float,
                      quad: QuadSpec = DEFAULT_SPEC) -> SynthesisResult:
    """Partial sum of the sine-kernel synthesis at x.

    Each term carries sinh(pi n), so the kernel quadrature for index n is
    derated by e^{-pi n} against the term's coefficient; per-term values
    are reported so callers can judge convergence of their truncation.
    """
    mu = float(mu)
    x = float(x)
    if not (math.isfinite(mu) and mu < 0.5):
        raise OrderError(f"synthesize_series requires mu < 1/2, got {mu}")
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"synthesize_series requires x > 0, got {x}")
    if seq.n_terms * math.pi > 700.0:
        raise PrecisionBudgetExceeded(
            f"sinh(pi n) overflows for n = {seq.n_terms}")
    if quad.precision == "extended":
        return _synthesize_extended(seq, mu, x, quad)

    pref = (0.5 * x) ** (1.0 - mu) / math.pi ** 2 * math.gamma(2.0 * (1.0 - mu))
    terms = []
    for n, a in enumerate(seq.values, 1):
        if not a:
            terms.append(0.0)
            continue
        ktol = max(quad.abs_tol * math.exp(-math.pi * n) / (10.0 * max(abs(a), 1.0)),
                   _KERNEL_TOL_FLOOR)
        kspec = QuadSpec(abs_tol=min(ktol, 1e-6), rel_tol=min(quad.rel_tol, 1e-12),
                         max_refinements=max(quad.max_refinements, 12),
                         max_evals=quad.max_evals)
        kv, _, _ = _kernel_eval(KernelKind.CYLINDER_SIN, mu, complex(n), x, kspec)
        terms.append(pref * math.sinh(math.pi * n) * float(np.real(kv)) * a)
    if any(isinstance(t, complex) for t in terms):
        value = complex(sum(terms))
    else:
        value = math.fsum(terms)
    return SynthesisResult(value, tuple(terms))


def _synthesize_extended(seq: CoefficientSeq, mu: float, x: float,
                         quad: QuadSpec) -> SynthesisResult:
    import mpmath as mp

    dps = int(quad.dps)
    with mp.workdps(dps):
        mux = mp.mpf(mu)
        pref = mp.power(mp.mpf(x) / 2, 1 - mux) / mp.pi ** 2 * mp.gamma(2 * (1 - mux))
        terms = []
        for n, a in enumerate(seq.values, 1):
            if not a:
                terms.append(mp.mpf(0))
                continue
            kv = _kernel_eval_mp(KernelKind.CYLINDER_SIN, mu, complex(n), x, dps)
            terms.append(pref * mp.sinh(mp.pi * n) * kv * a)
        value = mp.fsum(terms)
    return SynthesisResult(value, tuple(terms))
