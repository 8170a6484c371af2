"""Adaptive ODE integration and quadrature.

`integrate` is an embedded Dormand-Prince 5(4) Runge-Kutta pair with a
proportional-integral step controller and quartic dense output, suitable
for the smooth reduction ODEs handled here.  A user-supplied guard
predicate stops the integration cleanly ahead of singular loci (the
solved-for forms divide by powers of the solution).

`quad` is adaptive Gauss-Kronrod (G7, K15) with deterministic bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, StiffnessError

# Dormand-Prince RK5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array([
    [0, 0, 0, 0, 0, 0],
    [1 / 5, 0, 0, 0, 0, 0],
    [3 / 40, 9 / 40, 0, 0, 0, 0],
    [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
])
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# Difference between the 5th- and embedded 4th-order weights.
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Quartic dense-output coefficients: y(x0 + t*h) = y0 + h * (K^T P) . [t, t^2, t^3, t^4].
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ORDER_EXP = 1.0 / 5.0


@dataclass
class IvpSpec:
    """An initial value problem y' = rhs(x, y) with solver settings."""

    dim: int
    rhs: object  # callable (x, y: ndarray) -> ndarray
    x0: float
    y0: object  # array-like, length dim
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = math.inf
    guard: object = None  # callable (x, y) -> bool; False stops integration

    def __post_init__(self):
        self.y0 = np.asarray(self.y0, dtype=float)
        if self.y0.shape != (self.dim,):
            raise ValueError(f"y0 must have shape ({self.dim},)")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")


@dataclass
class Trajectory:
    """Accepted knots plus dense output between them.

    status is "ok" (reached the requested endpoint) or "guard" (the guard
    predicate stopped the integration; xs/ys hold the partial trajectory).
    """

    xs: np.ndarray
    ys: np.ndarray
    status: str
    reason: str = ""
    _segs: list = field(default_factory=list, repr=False)  # (x0, h, y0, Q) per step

    @property
    def x_end(self):
        return float(self.xs[-1])

    @property
    def y_end(self):
        return self.ys[-1].copy()

    def __call__(self, x):
        """Dense evaluation at a scalar x inside the covered span."""
        xs = self.xs
        lo, hi = (xs[0], xs[-1]) if xs[0] <= xs[-1] else (xs[-1], xs[0])
        if not lo - 1e-12 * (1 + abs(lo)) <= x <= hi + 1e-12 * (1 + abs(hi)):
            raise ValueError(f"x={x!r} outside trajectory span [{lo}, {hi}]")
        if len(self._segs) == 0:
            return self.ys[0].copy()
        # Find the step whose interval contains x (knots are monotone).
        idx = np.searchsorted(xs if xs[0] <= xs[-1] else -xs,
                              x if xs[0] <= xs[-1] else -x)
        idx = min(max(int(idx) - 1, 0), len(self._segs) - 1)
        x0, h, y0, q = self._segs[idx]
        t = (x - x0) / h
        tv = np.array([t, t * t, t**3, t**4])
        return y0 + h * (q @ tv)


def _rms_norm(e, scale):
    return float(np.sqrt(np.mean((e / scale) ** 2)))


def _initial_step(rhs, x0, y0, f0, direction, rtol, atol, max_step):
    """Hairer-Norsett-Wanner starting step selection."""
    scale = atol + rtol * np.abs(y0)
    d0 = _rms_norm(y0, scale)
    d1 = _rms_norm(f0, scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = np.asarray(rhs(x0 + h0 * direction, y1), dtype=float)
    d2 = _rms_norm(f1 - f0, scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** _ORDER_EXP
    return min(100 * h0, h1, max_step)


def integrate(spec: IvpSpec, x_end: float) -> Trajectory:
    """Integrate spec.rhs from spec.x0 to x_end with dense output.

    Raises StiffnessError when error control forces the step below the
    resolution floor; a failing guard instead ends the trajectory early
    with status "guard".
    """
    rhs = spec.rhs
    x = float(spec.x0)
    y = spec.y0.copy()
    span = x_end - x
    if span == 0.0:
        return Trajectory(np.array([x]), np.array([y]), "ok")
    direction = 1.0 if span > 0 else -1.0
    if spec.guard is not None and not spec.guard(x, y):
        return Trajectory(np.array([x]), np.array([y]), "guard",
                          reason="guard failed at the initial point")

    f = np.asarray(rhs(x, y), dtype=float)
    h = _initial_step(rhs, x, y, f, direction, spec.rtol, spec.atol,
                      min(spec.max_step, abs(span)))
    h_floor = 1e-14 * max(abs(x), abs(x_end), 1.0)

    xs = [x]
    ys = [y.copy()]
    segs = []
    err_prev = 1.0
    k = np.empty((7, spec.dim))
    status, reason = "ok", ""

    while (x_end - x) * direction > 0:
        h = min(h, abs(x_end - x))
        if h < h_floor:
            raise StiffnessError(
                f"step size underflow at x={x!r} (h={h!r}); problem too stiff")
        hs = h * direction
        k[0] = f
        for i in range(1, 6):
            yi = y + hs * (k[:i].T @ _A[i, :i])
            k[i] = rhs(x + _C[i] * hs, yi)
        y_new = y + hs * (k[:6].T @ _B[:6])  # b row has zero weight on k7
        k[6] = rhs(x + hs, y_new)
        err_vec = hs * (k.T @ _E)
        scale = spec.atol + spec.rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms_norm(err_vec, scale)

        if err <= 1.0:
            if spec.guard is not None and not spec.guard(x + hs, y_new):
                # Shrink toward the guard boundary instead of stepping past it.
                if h <= 64 * h_floor:
                    status, reason = "guard", f"guard stopped integration at x={x!r}"
                    break
                h *= 0.5
                continue
            q = k.T @ _P
            segs.append((x, hs, y.copy(), q))
            x += hs
            y = y_new
            f = k[6].copy()  # FSAL: the last stage is rhs at the new point
            xs.append(x)
            ys.append(y.copy())
            factor = _SAFETY * (err + 1e-300) ** (-0.7 / 5) * err_prev ** (0.4 / 5)
            err_prev = max(err, 1e-10)
            h = min(h * min(_MAX_FACTOR, max(_MIN_FACTOR, factor)), spec.max_step)
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-_ORDER_EXP))

    return Trajectory(np.asarray(xs), np.asarray(ys), status, reason, segs)


# --- adaptive Gauss-Kronrod quadrature --------------------------------------

# 15-point Kronrod extension of 7-point Gauss on [-1, 1].
_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
])


def _gk15(f, a, b):
    """(Kronrod 15, |K15 - G7|) on [a, b]."""
    c = 0.5 * (a + b)
    hw = 0.5 * (b - a)
    fc = f(c)
    gauss = _WG[3] * fc
    kron = _WGK[7] * fc
    for j in range(7):
        x = hw * _XGK[j]
        fsum = f(c - x) + f(c + x)
        kron += _WGK[j] * fsum
        if j % 2 == 1:  # odd Kronrod indices are the Gauss nodes
            gauss += _WG[(j - 1) // 2] * fsum
    kron *= hw
    gauss *= hw
    return kron, abs(kron - gauss)


def quad(f, a: float, b: float, rtol: float = 1e-10, atol: float = 1e-10,
         max_depth: int = 50) -> float:
    """Integral of f over [a, b], adaptive bisection on Gauss-Kronrod 15.

    Deterministic subdivision (always left half first, absolute tolerance
    split evenly); intervals still failing at max_depth raise
    AccuracyError carrying the best estimate and its error bound.  Meant
    for smooth integrands; endpoint singularities need a substitution by
    the caller and otherwise surface as AccuracyError.
    """
    if a == b:
        return 0.0
    total = 0.0
    bad_err = 0.0
    failed = False
    stack = [(float(a), float(b), float(atol), 0)]
    while stack:
        lo, hi, tol, depth = stack.pop()
        val, err = _gk15(f, lo, hi)
        if err <= max(tol, rtol * abs(val)):
            total += val
        elif depth >= max_depth:
            total += val
            bad_err += err
            failed = True
        else:
            mid = 0.5 * (lo + hi)
            # LIFO stack: push right first so the left half is processed next.
            stack.append((mid, hi, 0.5 * tol, depth + 1))
            stack.append((lo, mid, 0.5 * tol, depth + 1))
    if failed:
        raise AccuracyError(
            f"quadrature on [{a}, {b}] did not converge at depth {max_depth}",
            estimate=total, error_bound=bad_err)
    return total
