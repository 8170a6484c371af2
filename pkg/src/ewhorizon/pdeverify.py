"""Dispersionless-integrable side of the construction.

Two scalar PDEs certify the same geometry from the potential side:

* the dKP equation 2 (u_nu - u u_r)_r = u_xx, solved by
  u = -(r^2/2) wp(x + a; 0, b);
* the hyperCR equation H_x H_rr - H_r H_xr - H_xx + H_rnu = 0, with the
  six-parameter tanh^3 family and the quadratic potentials H = c h(x) r^2,
  whose Einstein-Weyl structures align with the tan-form metrics of the
  tanh profile h = (sqrt(c l)/c) tanh(sqrt(c l)(x + b)).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as _dcfield

import numpy as np

from .curvature import MetricField, OneFormField
from .errors import DomainError
from .jets import Jet1, Jet3, Point
from .nearhorizon import ScalarField1D
from .specfun import wp_jet

_NU, _R, _X = 0, 1, 2


@dataclass(frozen=True)
class PotentialField:
    """A scalar potential on (nu, r, x): evaluator Point -> Jet3."""

    evaluator: object
    label: str = ""
    params: dict = _dcfield(default_factory=dict)

    def jets(self, p: Point) -> Jet3:
        return self.evaluator(p)


@dataclass(frozen=True)
class HyperCRParams:
    """Constants (a, b, e, j, k, l) of the tanh^3 hyperCR family."""

    a: float
    b: float
    e: float = 0.0
    j: float = 0.0
    k: float = 0.0
    l: float = 0.0

    def __post_init__(self):
        if self.b == 0.0:
            raise DomainError("HyperCRParams needs b != 0 "
                              "(a^2/b multiplies r in the phase)")


# --------------------------------------------------------------------------
# residuals
# --------------------------------------------------------------------------

def dkp_residual(u: PotentialField, p: Point) -> float:
    """2 (u_nu - u u_r)_r - u_xx, expanded by the product rule."""
    j = u.jets(p)
    return (2.0 * j.partial((1, 1, 0))
            - 2.0 * (j.partial((0, 1, 0)) ** 2
                     + j.value * j.partial((0, 2, 0)))
            - j.partial((0, 0, 2)))


def hypercr_residual(H: PotentialField, p: Point) -> float:
    """H_x H_rr - H_r H_xr - H_xx + H_rnu."""
    j = H.jets(p)
    return (j.partial((0, 0, 1)) * j.partial((0, 2, 0))
            - j.partial((0, 1, 0)) * j.partial((0, 1, 1))
            - j.partial((0, 0, 2)) + j.partial((1, 1, 0)))


# --------------------------------------------------------------------------
# solution families
# --------------------------------------------------------------------------

def dkp_wp_potential(a: float, b: float) -> PotentialField:
    """u = -(r^2/2) wp(x + a; 0, b), the dKP solution behind the h = 0
    Einstein-Weyl structures."""

    def ev(p):
        pj, _ = wp_jet(Jet1.variable(p.x) + a, b)
        rj = Jet3.variable(p, _R)
        return -0.5 * rj * rj * Jet3.from_axis_jet(pj, _X)

    return PotentialField(ev, label=f"dkp-wp[a={a:g},b={b:g}]",
                          params={"a": a, "b": b})


def hypercr_tanh_family(params: HyperCRParams) -> PotentialField:
    """H = j tanh^3(w) + k tanh(w) + l on the phase
    w = (a^2/b) r + b nu + a x + e."""
    a, b, e = params.a, params.b, params.e
    cj, ck, cl = params.j, params.k, params.l

    def ev(p):
        w = ((a * a / b) * Jet3.variable(p, _R)
             + b * Jet3.variable(p, _NU)
             + a * Jet3.variable(p, _X) + e)
        t = w.tanh()
        return cj * t * t * t + ck * t + cl

    return PotentialField(ev, label="hypercr-tanh3", params=asdict(params))


def tanh_profile(c: float, ell: float, b: float = 0.0) -> ScalarField1D:
    """h = (sqrt(c l)/c) tanh(sqrt(c l)(x + b)): the profile with
    h'' = -2 c h h', defined for c l > 0."""
    if c == 0.0:
        raise DomainError("tanh_profile needs c != 0")
    if c * ell <= 0.0:
        raise DomainError(
            f"c*ell = {c * ell!r} <= 0: the tanh profile is not real there")
    s = math.sqrt(c * ell)

    def ev(x):
        return (s / c) * (s * (Jet1.variable(x) + b)).tanh()

    return ScalarField1D(ev, label=f"tanh[c={c:g},ell={ell:g}]")


def hr2_potential(c: float, h: ScalarField1D) -> PotentialField:
    """H = c h(x) r^2: the quadratic-in-r potentials whose hyperCR
    geometry restricts to X = c h dx on the r = 0 slice."""

    def ev(p):
        rj = Jet3.variable(p, _R)
        return c * Jet3.from_axis_jet(h(p.x), _X) * rj * rj

    return PotentialField(ev, label=f"hr2[{h.label};c={c:g}]",
                          params={"c": c})


# --------------------------------------------------------------------------
# geometric structures
# --------------------------------------------------------------------------

def hypercr_structures(H: PotentialField):
    """The pair (g, X) attached to a hyperCR potential:

        g = (dx + H_r dnu)^2 - 4 (dr - H_x dnu) dnu
        X = 1/2 H_rr dx + (1/2 H_r H_rr + H_xr) dnu

    Einstein-Weyl holds exactly when H solves the hyperCR equation.
    """

    def gcomp(p):
        j = H.jets(p)
        hr = j.d(_R)
        hx = j.d(_X)
        one = Jet3.constant(1.0)
        zero = Jet3.constant(0.0)
        mtwo = Jet3.constant(-2.0)
        return [[hr * hr + 4.0 * hx, mtwo, hr],
                [mtwo, zero, zero],
                [hr, zero, one]]

    def xcomp(p):
        j = H.jets(p)
        hr = j.d(_R)
        hrr = hr.d(_R)
        return [0.5 * hr * hrr + j.d(_X).d(_R),
                Jet3.constant(0.0),
                0.5 * hrr]

    return (MetricField(gcomp, label=f"hypercr[{H.label}]"),
            OneFormField(xcomp, label=f"hypercr-X[{H.label}]"))


def prop4_structures(c: float, ell: float, b: float = 0.0):
    """The tan-form hyperCR Einstein-Weyl pair over the tanh profile:

        g = 2 dnu (dr - c h r dx + (r^2/2)(c h' + c^2 h^2) dnu) + dx^2
        X = c h dx - c r (c h^2 + h') dnu

    At c = -1 this is exactly the near-horizon metric with the same h
    and F = -h' + h^2.
    """
    h = tanh_profile(c, ell, b)

    def gcomp(p):
        rj = Jet3.variable(p, _R)
        hj1 = h(p.x)
        h3 = Jet3.from_axis_jet(hj1, _X)
        hp3 = Jet3.from_axis_jet(hj1.d(), _X)
        one = Jet3.constant(1.0)
        zero = Jet3.constant(0.0)
        gnx = -c * h3 * rj
        return [[rj * rj * (c * hp3 + c * c * h3 * h3), one, gnx],
                [one, zero, zero],
                [gnx, zero, one]]

    def xcomp(p):
        rj = Jet3.variable(p, _R)
        hj1 = h(p.x)
        h3 = Jet3.from_axis_jet(hj1, _X)
        hp3 = Jet3.from_axis_jet(hj1.d(), _X)
        return [-c * rj * (c * h3 * h3 + hp3),
                Jet3.constant(0.0),
                c * h3]

    lbl = f"prop4[c={c:g},ell={ell:g},b={b:g}]"
    return (MetricField(gcomp, label=lbl),
            OneFormField(xcomp, label=lbl + "-X"))


def alignment_defect(c: float, ell: float, b: float, p: Point) -> float:
    """Componentwise mismatch at p between the tan-form pair and the
    hyperCR pair of H = c h r^2 pulled back through r -> -r/2.

    The relabeling r_old = -r/2 carries (g, X) of hypercr_structures
    onto prop4_structures exactly; the defect is the max abs difference
    over all metric and 1-form components.
    """
    g4, x4 = prop4_structures(c, ell, b)
    gh, xh = hypercr_structures(hr2_potential(c, tanh_profile(c, ell, b)))
    q = Point(p.nu, -0.5 * p.r, p.x)
    jac = np.diag([1.0, -0.5, 1.0])

    gv_h = np.array([[gh.jets(q)[i][j].value for j in range(3)]
                     for i in range(3)])
    gv_4 = np.array([[g4.jets(p)[i][j].value for j in range(3)]
                     for i in range(3)])
    xv_h = np.array([xh.jets(q)[i].value for i in range(3)])
    xv_4 = np.array([x4.jets(p)[i].value for i in range(3)])

    dg = jac.T @ gv_h @ jac - gv_4
    dx = jac.T @ xv_h - xv_4
    return max(float(np.max(np.abs(dg))), float(np.max(np.abs(dx))))
