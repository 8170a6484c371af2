"""Near-horizon Einstein-Weyl structures in 2+1 dimensions.

The metric family

    g = r^2 F(x) dnu^2 + 2 dnu dr + 2 r h(x) dnu dx + dx^2

with det g = -1 identically, the one-parameter Weyl 1-form ansatz

    X = c h dx + r ((2c+1) h' + c (2c+1) h^2 - 2 F) dnu,

and everything the Einstein-Weyl condition reduces to on this ansatz:
the algebraic F(x) determined by h for c != -1/2, the second-order F
equation at c = -1/2, the quartic ODE for h, its factorization through
h'' = alpha h h' + beta h^3, the Abel equation and its parametric
solution, and a catalog of closed-form solution families.

Scalar profiles are ScalarField1D objects: an evaluator producing Jet1
values (derivatives to order 4), an admissible window, an optional
declared period, and an optional exact antiderivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as _dcfield

import numpy as np

from .curvature import MetricField, OneFormField
from .errors import (DomainError, EwhError, PathBranchError,
                     PoleProximityError, WindowError)
from .jets import Jet1, Jet3, compose_jet1, jet_inverse
from .odesolve import IvpSpec, integrate, quad
from .specfun import (complete_elliptic_k, hyp2f1, real_period,
                      sn_imaginary_modulus_jet, wp_jet)

_NU, _R, _X = 0, 1, 2
_H_FLOOR = 1e-10         # F_from_h division guard
_POLE_TOL = 1e-6         # closed-form field pole guards, in x units
_SN_ZERO = math.sqrt(2.0) * complete_elliptic_k(1.0 / math.sqrt(2.0))


# --------------------------------------------------------------------------
# scalar fields on the x-line
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarField1D:
    """A profile function of x carrying derivatives to order 4.

    `evaluator(x)` returns the Jet1 of the profile at x.  `window` is
    the admissible open interval (evaluation outside raises
    WindowError); `period`, when set, is a declared exact period;
    `integral`, when set, maps (x0, x1) to the exact definite integral.
    """

    evaluator: object
    label: str = ""
    period: object = None
    window: tuple = (-math.inf, math.inf)
    integral: object = None

    def __call__(self, x) -> Jet1:
        lo, hi = self.window
        if not lo <= x <= hi:
            raise WindowError(
                f"x={x!r} outside window [{lo!r}, {hi!r}] of field "
                f"{self.label!r}")
        return self.evaluator(x)

    def value(self, x) -> float:
        return self(x).value


def field_const(k: float, label: str = "") -> ScalarField1D:
    k = float(k)

    def ev(x):
        return Jet1.constant(k)

    return ScalarField1D(ev, label=label or f"const({k:g})",
                         integral=lambda x0, x1: k * (x1 - x0))


def field_zero() -> ScalarField1D:
    f = field_const(0.0, "zero")
    return ScalarField1D(f.evaluator, label="zero", integral=f.integral)


def field_one() -> ScalarField1D:
    f = field_const(1.0, "one")
    return ScalarField1D(f.evaluator, label="one", integral=f.integral)


def field_sin() -> ScalarField1D:
    def ev(x):
        return Jet1.variable(x).sin()

    return ScalarField1D(ev, label="sin", period=2.0 * math.pi,
                         integral=lambda x0, x1: math.cos(x0) - math.cos(x1))


def field_linear(ell: float, b: float = 0.0) -> ScalarField1D:
    ell, b = float(ell), float(b)

    def ev(x):
        return Jet1(np.array([ell * x + b, ell, 0.0, 0.0, 0.0]))

    def integ(x0, x1):
        return 0.5 * ell * (x1 * x1 - x0 * x0) + b * (x1 - x0)

    return ScalarField1D(ev, label="linear", integral=integ)


_NAMED_H = {
    "zero": field_zero,
    "one": field_one,
    "sin": field_sin,
    "linear": lambda ell=1.0, b=0.0: field_linear(ell, b),
}


def named_h_field(name: str, **params) -> ScalarField1D:
    """The named h profiles used by the command-line checks."""
    try:
        ctor = _NAMED_H[name]
    except KeyError:
        raise DomainError(
            f"unknown h field {name!r}; choose from {sorted(_NAMED_H)}")
    return ctor(**params)


def antiderivative(h: ScalarField1D, x0: float, x1: float) -> float:
    """Definite integral of h, exact when the field provides one."""
    if h.integral is not None:
        return float(h.integral(x0, x1))
    return quad(lambda t: h(t).value, x0, x1)


def F_flat_from_h(h: ScalarField1D, x0: float = 0.0,
                  scale: float = 1.0) -> ScalarField1D:
    """The conformally flat profile F = scale * exp(int_{x0}^x h).

    With this F the metric's Cotton tensor vanishes (F' = F h).
    """

    def ev(x):
        hj = h(x)
        hval = antiderivative(h, x0, x)
        hj_int = Jet1(np.concatenate(
            ([hval], hj.coeffs[:4] / np.arange(1.0, 5.0))))
        return scale * hj_int.exp()

    return ScalarField1D(ev, label=f"flat[{h.label}]", window=h.window)


# --------------------------------------------------------------------------
# near-horizon data, metric, Weyl form
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NearHorizonData:
    """A metric datum (h, F) together with the ansatz constant c."""

    h: ScalarField1D
    F: ScalarField1D
    c: float = -0.5

    @property
    def window(self):
        return (max(self.h.window[0], self.F.window[0]),
                min(self.h.window[1], self.F.window[1]))


def nh_metric(d: NearHorizonData) -> MetricField:
    """The metric g = r^2 F dnu^2 + 2 dnu dr + 2 r h dnu dx + dx^2."""

    def comp(p):
        rj = Jet3.variable(p, _R)
        h3 = Jet3.from_axis_jet(d.h(p.x), _X)
        F3 = Jet3.from_axis_jet(d.F(p.x), _X)
        one = Jet3.constant(1.0)
        zero = Jet3.constant(0.0)
        gnx = rj * h3
        return [[rj * rj * F3, one, gnx],
                [one, zero, zero],
                [gnx, zero, one]]

    return MetricField(comp, label=f"nh[{d.h.label};{d.F.label}]")


def weyl_oneform_generic(d: NearHorizonData) -> OneFormField:
    """X = c h dx + r ((2c+1) h' + c (2c+1) h^2 - 2F) dnu.

    At r = 0 this restricts to c h dx; at c = -1/2 it is the
    Weierstrass-family form -h/2 dx - 2 r F dnu.
    """
    c = d.c

    def comp(p):
        rj = Jet3.variable(p, _R)
        hj = d.h(p.x)
        h3 = Jet3.from_axis_jet(hj, _X)
        hp3 = Jet3.from_axis_jet(hj.d(), _X)
        F3 = Jet3.from_axis_jet(d.F(p.x), _X)
        xnu = rj * ((2 * c + 1) * hp3 + c * (2 * c + 1) * h3 * h3 - 2.0 * F3)
        return [xnu, Jet3.constant(0.0), c * h3]

    return OneFormField(comp, label=f"weyl[c={c:g}]")


def flatness_defect(d: NearHorizonData, x: float) -> float:
    """F'(x) - F(x) h(x); identically zero iff the metric is
    conformally flat on the window."""
    hj = d.h(x)
    Fj = d.F(x)
    return Fj.derivative(1) - Fj.value * hj.value


def F_from_h(h: ScalarField1D, c: float, x: float) -> float:
    """F = (h'' + 4 c h h' + 2 c^2 h^3) / (2 h) at x.

    The unique F that kills the dx dnu component of the Einstein-Weyl
    equations for c != -1/2.
    """
    hj = h(x)
    if abs(hj.value) <= _H_FLOOR:
        raise DomainError(
            f"h({x!r}) = {hj.value!r}: F_from_h needs |h| > {_H_FLOOR}")
    return ((hj.derivative(2) + 4.0 * c * hj.value * hj.derivative(1)
             + 2.0 * c * c * hj.value ** 3) / (2.0 * hj.value))


def F_from_h_field(h: ScalarField1D, c: float) -> ScalarField1D:
    """F_from_h as a field.

    The jet is exact to order 2 (orders 3 and 4 would need h beyond
    order 4 and are set to 0); second metric derivatives are all the
    Einstein-Weyl residual needs, but the Cotton tensor of data built
    this way is not meaningful.
    """

    def ev(x):
        hj = h(x)
        if abs(hj.value) <= _H_FLOOR:
            raise DomainError(
                f"h({x!r}) = {hj.value!r}: F_from_h needs |h| > {_H_FLOOR}")
        hp = hj.d()
        Fj = (hp.d() + 4.0 * c * hj * hp + 2.0 * c * c * hj * hj * hj) \
            / (2.0 * hj)
        coeffs = Fj.coeffs.copy()
        coeffs[3:] = 0.0
        return Jet1(coeffs)

    return ScalarField1D(ev, label=f"F_from_h[{h.label};c={c:g}]",
                         window=h.window, period=h.period)


# --------------------------------------------------------------------------
# reduction ODE residuals
# --------------------------------------------------------------------------

def ode4_residual(h: Jet1, c: float) -> float:
    """The quartic reduction ODE for h at fixed c.

    h^3 h'^2 (c-1)^2 - 1/2 (c-1)^2 h^4 h'' + 9/4 (c-1) h^2 h' h''
    - 3/4 (c-1) h^3 h''' - 1/2 h'^2 h'' + 1/2 h h' h''' + h h''^2
    - 1/4 h^2 h''''
    """
    h0, h1, h2, h3, h4 = (h.derivative(k) for k in range(5))
    cm = c - 1.0
    return (h0 ** 3 * h1 ** 2 * cm ** 2
            - 0.5 * cm ** 2 * h0 ** 4 * h2
            + 2.25 * cm * h0 ** 2 * h1 * h2
            - 0.75 * cm * h0 ** 3 * h3
            - 0.5 * h1 ** 2 * h2
            + 0.5 * h0 * h1 * h3
            + h0 * h2 ** 2
            - 0.25 * h0 ** 2 * h4)


def ode4_condition(h: Jet1, c: float) -> float:
    """Magnitude scale of the quartic residual: the sum of the absolute
    values of its monomials.

    Near profile poles the monomials grow like high powers of h and the
    residual of a true solution is their cancellation noise, so the
    meaningful certified quantity is ode4_residual relative to this
    scale.
    """
    h0, h1, h2, h3, h4 = (h.derivative(k) for k in range(5))
    cm = c - 1.0
    return (abs(h0 ** 3 * h1 ** 2 * cm ** 2)
            + abs(0.5 * cm ** 2 * h0 ** 4 * h2)
            + abs(2.25 * cm * h0 ** 2 * h1 * h2)
            + abs(0.75 * cm * h0 ** 3 * h3)
            + abs(0.5 * h1 ** 2 * h2)
            + abs(0.5 * h0 * h1 * h3)
            + abs(h0 * h2 ** 2)
            + abs(0.25 * h0 ** 2 * h4))


def ode2_residual(h: Jet1, alpha: float, beta: float) -> float:
    """h'' - alpha h h' - beta h^3."""
    return (h.derivative(2) - alpha * h.value * h.derivative(1)
            - beta * h.value ** 3)


def reduction_consistency(alpha: float, c: float) -> float:
    """beta = 2 (c-1)^2 + 3 alpha (c-1) + alpha^2.

    Any solution of h'' = alpha h h' + beta h^3 with this beta solves
    the quartic ODE at c: the quartic factors through the quadratic
    one.
    """
    cm = c - 1.0
    return 2.0 * cm * cm + 3.0 * alpha * cm + alpha * alpha


def F_ode_residual_chalf(F: Jet1, h: Jet1) -> float:
    """-3 F h^2 + 5 h F' + 2 F h' + 12 F^2 - 2 F'': the single
    remaining Einstein-Weyl equation at c = -1/2."""
    return (-3.0 * F.value * h.value ** 2
            + 5.0 * h.value * F.derivative(1)
            + 2.0 * F.value * h.derivative(1)
            + 12.0 * F.value ** 2
            - 2.0 * F.derivative(2))


def ode3_first_integral(h: Jet1) -> float:
    """-1/4 h^2 h''' + h h' h'' - 1/2 h'^3: a first integral of the
    quartic ODE at c = 1 (its x-derivative is the c = 1 quartic)."""
    h0, h1, h2, h3 = (h.derivative(k) for k in range(4))
    return -0.25 * h0 * h0 * h3 + h0 * h1 * h2 - 0.5 * h1 ** 3


def nlode_residual(f: Jet1) -> float:
    """f''' - f' f'' - f'^3: the c = 1 equation under h = e^f."""
    f1, f2, f3 = (f.derivative(k) for k in (1, 2, 3))
    return f3 - f1 * f2 - f1 ** 3


def ode2_jet(value: float, slope: float, alpha: float, beta: float) -> Jet1:
    """The jet of a solution of h'' = alpha h h' + beta h^3 through
    (h, h') = (value, slope), with higher orders from the ODE."""
    h0, h1 = float(value), float(slope)
    h2 = alpha * h0 * h1 + beta * h0 ** 3
    h3 = alpha * (h1 * h1 + h0 * h2) + 3.0 * beta * h0 * h0 * h1
    h4 = (alpha * (3.0 * h1 * h2 + h0 * h3)
          + 3.0 * beta * (2.0 * h0 * h1 * h1 + h0 * h0 * h2))
    return Jet1.from_derivatives([h0, h1, h2, h3, h4])


# --------------------------------------------------------------------------
# Abel equation and its parametric solution
# --------------------------------------------------------------------------

def abel_rhs(y: float, h: float, alpha: float, beta: float) -> float:
    """dy/dh-side right-hand side (1/h)(-beta y^3 - alpha y^2 + 2 y)."""
    if h == 0.0:
        raise DomainError("h = 0 in the Abel right-hand side")
    return (-beta * y ** 3 - alpha * y ** 2 + 2.0 * y) / h


def _abel_exponent(y, alpha, beta):
    """A(y) with dA/dy = -alpha / (4 Q), Q = beta y^2 + alpha y - 2.

    Generic over float or Jet1 y.  The expression branches on the sign
    of alpha^2 + 8 beta; the discriminant-zero case is a confluent
    branch the closed form does not cover.
    """
    disc = alpha * alpha + 8.0 * beta
    if abs(disc) < 1e-14:
        raise PathBranchError(
            "alpha^2 + 8 beta = 0: confluent branch not covered by the "
            "closed form")
    w = 2.0 * beta * y + alpha
    if disc > 0.0:
        d = math.sqrt(disc)
        ratio = w / d
        rv = ratio.value if isinstance(ratio, Jet1) else ratio
        if abs(rv) < 1.0:
            arg = ratio
        elif abs(rv) > 1.0:
            arg = d / w
        else:
            raise PathBranchError("evaluation at a branch point of the "
                                  "Abel exponent")
        at = 0.5 * ((1.0 + arg).log() - (1.0 - arg).log()) \
            if isinstance(arg, Jet1) else math.atanh(arg)
        return (alpha / (2.0 * d)) * at
    d = math.sqrt(-disc)
    arg = w / d
    at = arg.atan() if isinstance(arg, Jet1) else math.atan(arg)
    return -(alpha / (2.0 * d)) * at


def _abel_q(y, alpha, beta):
    return beta * y * y + alpha * y - 2.0


def _abel_q_roots(alpha, beta):
    """Real roots of Q, ascending."""
    if beta == 0.0:
        return [] if alpha == 0.0 else [2.0 / alpha]
    disc = alpha * alpha + 8.0 * beta
    if disc < 0.0:
        return []
    d = math.sqrt(disc)
    return sorted([(-alpha - d) / (2.0 * beta), (-alpha + d) / (2.0 * beta)])


def abel_parametric(y: float, alpha: float, beta: float, gamma: float,
                    y_ref: float = 2.0):
    """The parametric solution (h(y), x(y)) of the Abel reduction.

        h(y) = gamma sqrt(y) exp(A(y)) / |Q(y)|^(1/4)
        x(y) = -(1/gamma) * int_{y_ref}^{y} exp(-A) / (sqrt(t) |Q|^(3/4)) dt

    with Q = beta y^2 + alpha y - 2 and A the branch-resolved exponent
    (d ln h / dy = -1/(y Q) on every branch).  x carries the arbitrary
    constant of the quadrature through the basepoint y_ref; differences
    of x values are basepoint-free.
    """
    if y <= 0.0 or y_ref <= 0.0:
        raise DomainError("abel_parametric needs y > 0 and y_ref > 0")
    if gamma == 0.0:
        raise DomainError("gamma must be nonzero")
    q = _abel_q(y, alpha, beta)
    if abs(q) < 1e-12 * (1.0 + y * y):
        raise PathBranchError(f"Q({y!r}) = 0: branch point of the "
                              "parametric solution")
    lo, hi = min(y, y_ref), max(y, y_ref)
    for root in _abel_q_roots(alpha, beta):
        if lo < root < hi:
            raise PathBranchError(
                f"quadrature path [{lo!r}, {hi!r}] crosses the branch "
                f"point y = {root!r}")
    a_val = _abel_exponent(y, alpha, beta)
    h = gamma * math.sqrt(y) * math.exp(a_val) * abs(q) ** -0.25

    # dx/dy = -(1/gamma) e^{-A} |Q|^{1/4} / (sqrt(y) Q): on branches with
    # Q < 0 the signed power flips the orientation of the quadrature.
    sign = 1.0 if _abel_q(y_ref, alpha, beta) > 0.0 else -1.0

    def integrand(t):
        return (math.exp(-_abel_exponent(t, alpha, beta))
                / (math.sqrt(t) * abs(_abel_q(t, alpha, beta)) ** 0.75))

    x = -sign * quad(integrand, y_ref, y) / gamma
    return h, x


def abel_parametric_jets(y: float, alpha: float, beta: float, gamma: float):
    """Jets in y of the parametric pair: (jet of h(y), jet of dx/dy).

    dx/dy is closed-form, so implicit derivatives of h along x
    (h' = h_y / x_y and so on) come out of plain jet arithmetic.
    """
    if y <= 0.0:
        raise DomainError("abel_parametric_jets needs y > 0")
    yj = Jet1.variable(y)
    qj = _abel_q(yj, alpha, beta)
    if abs(qj.value) < 1e-12 * (1.0 + y * y):
        raise PathBranchError(f"Q({y!r}) = 0: branch point")
    absq = qj if qj.value > 0.0 else -qj
    aj = _abel_exponent(yj, alpha, beta)
    hj = gamma * yj.sqrt() * aj.exp() * absq.powr(-0.25)
    xdot = -((-aj).exp() * absq.powr(0.25) / (yj.sqrt() * qj)) / gamma
    return hj, xdot


# --------------------------------------------------------------------------
# the Weierstrass construction of F (arbitrary h)
# --------------------------------------------------------------------------

def _integral_jet(value_fn, deriv_jet: Jet1) -> Jet1:
    """Jet of an antiderivative: value from `value_fn()`, derivative
    coefficients shifted up from the integrand's jet."""
    return Jet1(np.concatenate(
        ([float(value_fn())], deriv_jet.coeffs[:4] / np.arange(1.0, 5.0))))


def thm1_F_field(h: ScalarField1D, a: float, b: float, x0: float = 0.0,
                 margin: float = 0.3, delta: float = 1e-3) -> ScalarField1D:
    """F(x) = e^{H} wp(G + a; 0, b), H = int_{x0}^x h, G = int_{x0}^x e^{H/2}.

    Together with X = -h/2 dx - 2 r F dnu this turns any h into an
    Einstein-Weyl structure.  The returned field's window keeps G + a
    at least `margin` away from the pole lattice of wp.
    """
    h_int = {}
    g_int = {}

    def hval(x):
        if x not in h_int:
            h_int[x] = antiderivative(h, x0, x)
        return h_int[x]

    def gval(x):
        if x not in g_int:
            g_int[x] = quad(lambda t: math.exp(0.5 * hval(t)), x0, x)
        return g_int[x]

    def ev(x):
        hj = h(x)
        Hj = _integral_jet(lambda: hval(x), hj)
        Gj = _integral_jet(lambda: gval(x), (0.5 * Hj).exp())
        Pj, _ = wp_jet(Gj + a, b, delta=delta)
        return Hj.exp() * Pj

    window = _thm1_window(gval, a, b, x0, margin)
    period = None
    return ScalarField1D(ev, label=f"thm1[{h.label};a={a:g},b={b:g}]",
                         period=period, window=window)


def _thm1_window(gval, a, b, x0, margin):
    """Largest x-interval with G(x) + a inside the pole-free cell of
    the wp lattice containing a, inset by `margin`.  The interval need
    not contain the basepoint: for a near a pole it sits to one side."""
    if b == 0.0:
        # single pole of 1/z^2 at G + a = 0
        lo_target = margin - a
        if lo_target >= 0.0:
            return (_solve_g(gval, lo_target, x0), math.inf)
        return (-math.inf, math.inf) if a > margin else (x0, math.inf)
    T = real_period(b)
    k = math.floor(a / T)
    g_lo = k * T + margin - a
    g_hi = (k + 1) * T - margin - a
    if not g_lo < g_hi:
        raise PoleProximityError(
            f"wp period {T!r} leaves no room for margin {margin!r}",
            nearest_pole=round(a / T) * T)
    return (_solve_g(gval, g_lo, x0), _solve_g(gval, g_hi, x0))


def _solve_g(gval, target, x0):
    """Solve G(x) = target for the increasing antiderivative G."""
    if target == 0.0:
        return x0
    step = 0.5 if target > 0.0 else -0.5
    x1 = x0
    for _ in range(2000):
        x2 = x1 + step
        if (gval(x2) - target) * (1 if target > 0 else -1) >= 0.0:
            break
        x1 = x2
    else:
        raise DomainError("antiderivative failed to reach the window edge")
    lo, hi = (x1, x2) if x1 < x2 else (x2, x1)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if gval(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def thm1_structure(h: ScalarField1D, a: float, b: float,
                   x0: float = 0.0) -> NearHorizonData:
    """NearHorizonData for the Weierstrass family over the profile h."""
    return NearHorizonData(h=h, F=thm1_F_field(h, a, b, x0=x0), c=-0.5)


# --------------------------------------------------------------------------
# solution families
# --------------------------------------------------------------------------

FAMILY_TAGS = ("Weierstrass", "JacobiReduction", "HypergeometricParametric",
               "TanFamily", "TanhHyperCR", "Linear", "RationalPole",
               "Quadratic", "NumericODE")

_TAG_ALIASES = {
    "weierstrass": "Weierstrass",
    "jacobi": "JacobiReduction",
    "hypergeometric": "HypergeometricParametric",
    "tan": "TanFamily",
    "tanh": "TanhHyperCR",
    "linear": "Linear",
    "rational": "RationalPole",
    "quadratic": "Quadratic",
    "numeric": "NumericODE",
}


@dataclass(frozen=True)
class SolutionFamily:
    """A cataloged solution: profile field, ansatz constant, window.

    `role` says whether the field is the profile h (every family except
    Weierstrass) or directly the metric coefficient F (Weierstrass,
    where h = 0).  `info` carries construction byproducts such as the
    (alpha, beta) of the quadratic reduction or integration status.
    """

    tag: str
    parameters: dict
    field: ScalarField1D
    c: float
    window: tuple
    role: str = "h"
    info: dict = _dcfield(default_factory=dict)

    def __post_init__(self):
        alpha = self.info.get("alpha")
        beta = self.info.get("beta")
        if alpha is not None and beta is not None:
            expect = reduction_consistency(alpha, self.c)
            if abs(expect - beta) > 1e-9:
                raise ValueError(
                    f"{self.tag}: (alpha={alpha!r}, c={self.c!r}) demands "
                    f"beta={expect!r}, got {beta!r}")


def canonical_tag(tag: str) -> str:
    t = _TAG_ALIASES.get(tag.lower(), tag)
    if t not in FAMILY_TAGS:
        raise DomainError(f"unknown family tag {tag!r}; "
                          f"choose from {sorted(_TAG_ALIASES)}")
    return t


def _c_from_alpha_beta(alpha, beta):
    """A root c of the consistency relation, chosen deterministically:
    the one nearest 1 when alpha != 0 (matching the cubic-degeneration
    families that live at c = 1), the smaller one when alpha = 0."""
    disc = alpha * alpha + 8.0 * beta
    if disc < 0.0:
        raise DomainError(
            f"no real c for (alpha, beta) = ({alpha!r}, {beta!r})")
    d = math.sqrt(disc)
    roots = (1.0 + (-3.0 * alpha - d) / 4.0, 1.0 + (-3.0 * alpha + d) / 4.0)
    if alpha == 0.0:
        return min(roots)
    return min(roots, key=lambda c: (abs(c - 1.0), c))


def _family_linear(params):
    ell = float(params.get("ell", 1.0))
    b = float(params.get("b", 0.0))
    fld = field_linear(ell, b)
    return SolutionFamily("Linear", {"ell": ell, "b": b}, fld, 1.0,
                          fld.window, info={"first_integral": -0.5 * ell ** 3})


def _family_quadratic(params):
    b = float(params.get("b", 0.0))

    def ev(x):
        w = x - b
        return Jet1.from_derivatives([w * w, 2.0 * w, 2.0, 0.0, 0.0])

    fld = ScalarField1D(ev, label="quadratic")
    return SolutionFamily("Quadratic", {"b": b}, fld, 1.0, fld.window,
                          info={"first_integral": 0.0})


def _family_rational(params):
    gamma = float(params.get("gamma", 1.0))
    b = float(params.get("b", 0.0))
    alpha = float(params.get("alpha", 0.0))
    if gamma == 0.0:
        raise DomainError("RationalPole needs gamma != 0")
    beta = (2.0 + alpha * gamma) / (gamma * gamma)
    c = float(params["c"]) if "c" in params else _c_from_alpha_beta(alpha, beta)

    def ev(x):
        if abs(x - b) < _POLE_TOL:
            raise PoleProximityError(
                f"x = {x!r} within {_POLE_TOL} of the pole at {b!r}",
                nearest_pole=b)
        return gamma / (Jet1.variable(x) - b)

    fld = ScalarField1D(ev, label="rational", window=(b, math.inf))
    return SolutionFamily("RationalPole",
                          {"gamma": gamma, "b": b, "alpha": alpha},
                          fld, c, fld.window,
                          info={"alpha": alpha, "beta": beta})


def _family_tan(params):
    alpha = float(params.get("alpha", -1.0))
    ell = float(params.get("ell", -0.5))
    b = float(params.get("b", 0.0))
    if 2.0 * ell * alpha <= 0.0:
        raise DomainError("TanFamily needs ell * alpha > 0")
    s = math.sqrt(2.0 * ell * alpha)
    c = 1.0 - alpha

    def ev(x):
        u = 0.5 * s * (x + b)
        if abs(math.cos(u)) < _POLE_TOL:
            k = round((u - 0.5 * math.pi) / math.pi)
            pole = (2.0 * (0.5 * math.pi + k * math.pi)) / s - b
            raise PoleProximityError(
                f"x = {x!r} near a tan pole", nearest_pole=pole)
        return (s / alpha) * (0.5 * s * (Jet1.variable(x) + b)).tan()

    window = (-b - math.pi / s, -b + math.pi / s)
    fld = ScalarField1D(ev, label="tan", period=2.0 * math.pi / s,
                        window=window)
    return SolutionFamily("TanFamily",
                          {"alpha": alpha, "ell": ell, "b": b},
                          fld, c, window, info={"alpha": alpha, "beta": 0.0})


def _family_tanh(params):
    c = float(params.get("c", -1.0))
    ell = float(params.get("ell", -1.0))
    b = float(params.get("b", 0.0))
    if c != -1.0:
        raise DomainError(
            "TanhHyperCR solves the quartic reduction only at c = -1 "
            "(alpha = -2c must equal 1 - c); other c values live on the "
            "hyper-CR side")
    if c * ell <= 0.0:
        raise DomainError("TanhHyperCR needs c * ell > 0")
    s = math.sqrt(c * ell)

    def ev(x):
        return (s / c) * (s * (Jet1.variable(x) + b)).tanh()

    fld = ScalarField1D(ev, label="tanh")
    return SolutionFamily("TanhHyperCR", {"c": c, "ell": ell, "b": b},
                          fld, c, fld.window,
                          info={"alpha": -2.0 * c, "beta": 0.0})


def _family_jacobi(params):
    m = float(params.get("m", 1.0))
    c = float(params.get("c", 0.0))
    b = float(params.get("b", 0.0))
    if m == 0.0 or c == 1.0:
        raise DomainError("JacobiReduction needs m != 0 and c != 1")
    s = abs(c - 1.0) * abs(m)
    beta = 2.0 * (c - 1.0) ** 2

    def ev(x):
        u = s * (x + b)
        u_mod = u - round(u / _SN_ZERO) * _SN_ZERO
        if abs(u_mod) < _POLE_TOL * s:
            raise PoleProximityError(
                f"x = {x!r} near a pole of the Jacobi profile",
                nearest_pole=round(u / _SN_ZERO) * _SN_ZERO / s - b)
        wj = sn_imaginary_modulus_jet(u)
        w_of_x = compose_jet1(wj, Jet1(np.array([u, s, 0.0, 0.0, 0.0])))
        return m / w_of_x

    window = (-b, -b + _SN_ZERO / s)
    fld = ScalarField1D(ev, label="jacobi", period=2.0 * _SN_ZERO / s,
                        window=window)
    return SolutionFamily("JacobiReduction", {"m": m, "c": c, "b": b},
                          fld, c, window, info={"alpha": 0.0, "beta": beta})


def _family_weierstrass(params):
    a = float(params.get("a", 1.5))
    b = float(params.get("b", 1.0))
    if b == 0.0:
        raise DomainError("Weierstrass family needs b != 0 here; the "
                          "b = 0 profile is the rational 1/(x+a)^2")
    margin = float(params.get("margin", 0.05))
    T = real_period(b)

    def ev(x):
        Pj, _ = wp_jet(Jet1.variable(x) + a, b)
        return Pj

    k = math.floor(a / T)
    window = (k * T - a + margin, (k + 1) * T - a - margin)
    if not window[0] < window[1]:
        raise DomainError(f"empty pole-free window for a={a!r}, b={b!r}")
    fld = ScalarField1D(ev, label="weierstrass", period=T, window=window)
    return SolutionFamily("Weierstrass", {"a": a, "b": b}, fld, -0.5,
                          window, role="F")


def _family_hypergeometric(params):
    gamma = float(params.get("gamma", 1.0))
    beta = float(params.get("beta", 2.0))
    b = float(params.get("b", 0.0))
    z_lo = float(params.get("z_lo", 0.02))
    z_hi = float(params.get("z_hi", 0.9))
    if beta <= 0.0 or gamma == 0.0:
        raise DomainError("HypergeometricParametric needs beta > 0 and "
                          "gamma != 0")
    if not 0.0 < z_lo < z_hi < 1.0:
        raise DomainError("need 0 < z_lo < z_hi < 1")
    c = 1.0 - math.sqrt(beta / 2.0)
    broot = beta ** 0.25
    pref = math.sqrt(2.0) / (2.0 * gamma * broot)

    def x_of_z(z):
        return pref * math.sqrt(z) * hyp2f1(0.5, 0.75, 1.5, z) + b

    def ev(x):
        lo, hi = z_lo, z_hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if (x_of_z(mid) - x) * math.copysign(1.0, gamma) < 0.0:
                lo = mid
            else:
                hi = mid
        z = 0.5 * (lo + hi)
        zj = Jet1.variable(z)
        xj = pref * zj.sqrt() * hyp2f1(0.5, 0.75, 1.5, zj) + b
        z_of_x = jet_inverse(xj, value=z)
        hj = (gamma / broot) * (1.0 - zj).powr(-0.25)
        return compose_jet1(hj, z_of_x)

    ends = sorted((x_of_z(z_lo), x_of_z(z_hi)))
    fld = ScalarField1D(ev, label="hypergeometric", window=tuple(ends))
    return SolutionFamily("HypergeometricParametric",
                          {"gamma": gamma, "beta": beta, "b": b,
                           "z_lo": z_lo, "z_hi": z_hi},
                          fld, c, fld.window,
                          info={"alpha": 0.0, "beta": beta})


def _family_numeric(params):
    alpha = float(params.get("alpha", 0.0))
    c = float(params.get("c", 0.0))
    x0 = float(params.get("x0", 0.0))
    h0 = float(params.get("h0", 1.0))
    h1 = float(params.get("h1", 0.0))
    span = float(params.get("span", 6.0))
    beta = reduction_consistency(alpha, c)

    def rhs(x, y):
        return np.array([y[1], alpha * y[0] * y[1] + beta * y[0] ** 3])

    def guard(x, y):
        return abs(y[0]) < 1e6 and abs(y[1]) < 1e8

    spec = IvpSpec(dim=2, rhs=rhs, x0=x0, y0=[h0, h1], guard=guard,
                   rtol=1e-11, atol=1e-12)
    fwd = integrate(spec, x0 + span)
    bwd = integrate(spec, x0 - span)
    window = (bwd.x_end, fwd.x_end)

    def ev(x):
        traj = fwd if x >= x0 else bwd
        v = traj(x)
        return ode2_jet(v[0], v[1], alpha, beta)

    fld = ScalarField1D(ev, label="numeric", window=window)
    return SolutionFamily("NumericODE",
                          {"alpha": alpha, "c": c, "x0": x0, "h0": h0,
                           "h1": h1, "span": span},
                          fld, c, window,
                          info={"alpha": alpha, "beta": beta,
                                "status_forward": fwd.status,
                                "status_backward": bwd.status})


_FAMILY_BUILDERS = {
    "Linear": _family_linear,
    "Quadratic": _family_quadratic,
    "RationalPole": _family_rational,
    "TanFamily": _family_tan,
    "TanhHyperCR": _family_tanh,
    "JacobiReduction": _family_jacobi,
    "Weierstrass": _family_weierstrass,
    "HypergeometricParametric": _family_hypergeometric,
    "NumericODE": _family_numeric,
}


def build_family(tag: str, **params) -> SolutionFamily:
    """Construct the full SolutionFamily record for a catalog tag."""
    return _FAMILY_BUILDERS[canonical_tag(tag)](params)


def family_catalog(tag: str, **params):
    """(profile field, associated c, admissible window) for a tag."""
    fam = build_family(tag, **params)
    return fam.field, fam.c, fam.window


# --------------------------------------------------------------------------
# periodicity
# --------------------------------------------------------------------------

def periodicity_check(h: ScalarField1D, T: float, tol: float = 1e-8) -> bool:
    """True iff h and h' return to themselves under x -> x + T.

    64 samples spanning two alleged periods from the window's edge;
    samples where either endpoint cannot be evaluated (poles, ends of a
    numeric trajectory) are skipped, and at least 8 surviving samples
    are required for a positive verdict.
    """
    if T <= 0.0:
        raise DomainError("periodicity_check needs T > 0")
    lo = h.window[0]
    base = lo if math.isfinite(lo) else 0.0
    offsets = np.linspace(T / 64.0, 2.0 * T, 64)
    valid = 0
    worst = 0.0
    for dx in offsets:
        x = base + float(dx)
        try:
            j0 = h.evaluator(x)
            j1 = h.evaluator(x + T)
        except (EwhError, ValueError):
            continue
        valid += 1
        worst = max(worst, abs(j1.value - j0.value),
                    abs(j1.derivative(1) - j0.derivative(1)))
    return valid >= 8 and worst < tol


def detect_period(h: ScalarField1D, x_anchor: float):
    """Estimate a period of h by first return to the anchor's (h, h').

    Returns the candidate T, or None when no return happens inside the
    window; candidates should be confirmed with periodicity_check.
    """
    lo, hi = h.window
    if not (math.isfinite(hi) and lo <= x_anchor < hi):
        return None
    j0 = h.evaluator(x_anchor)
    v0, s0 = j0.value, j0.derivative(1)
    n = 2048
    dx = (hi - x_anchor) / n
    f_prev = 0.0
    for i in range(1, n):
        x = x_anchor + i * dx
        try:
            j = h.evaluator(x)
        except (EwhError, ValueError):
            return None
        f = j.value - v0
        if i > 4 and f_prev * f <= 0.0 and j.derivative(1) * s0 > 0.0:
            a, b = x - dx, x
            for _ in range(80):
                mid = 0.5 * (a + b)
                if (h.evaluator(mid).value - v0) * f <= 0.0:
                    a = mid
                else:
                    b = mid
            x_ret = 0.5 * (a + b)
            jr = h.evaluator(x_ret)
            if (abs(jr.value - v0) < 1e-7
                    and abs(jr.derivative(1) - s0) < 1e-6 * (1.0 + abs(s0))):
                return x_ret - x_anchor
        f_prev = f
    return None
