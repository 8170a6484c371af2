"""Check pipelines, residual reports, and plot/scan data assembly.

Every check samples a deterministic grid, evaluates residuals (in a
thread pool capped by EWH_THREADS), reduces per-component maxima, and
wraps the outcome in a ResidualReport.  Reports serialize to a flat,
versioned JSON schema with fixed key order and 17-significant-digit
floats, so identical invocations produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .curvature import OneFormField, cotton, ew_residual
from .errors import DomainError, EwhError, StiffnessError
from .jets import Jet1, Point
from .nearhorizon import (F_flat_from_h, F_from_h_field, F_ode_residual_chalf,
                          NearHorizonData, ScalarField1D, build_family,
                          canonical_tag, detect_period, field_one,
                          flatness_defect, named_h_field, nh_metric,
                          ode2_residual, ode4_condition, ode4_residual,
                          periodicity_check, thm1_F_field,
                          weyl_oneform_generic)
from .odesolve import IvpSpec, integrate
from .pdeverify import (HyperCRParams, alignment_defect, dkp_residual,
                        dkp_wp_potential, hypercr_residual,
                        hypercr_structures, hypercr_tanh_family,
                        prop4_structures, tanh_profile)
from .specfun import real_period

_EW_NAMES = ("nunu", "nur", "nux", "rr", "rx", "xx")
_EW_IDX = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
_AXIS_NAMES = ("nu", "r", "x")
_PAIR_NAMES = (("nu_r", (0, 1)), ("nu_x", (0, 2)), ("r_x", (1, 2)))

# fixed off-axis slice for 1D plot sweeps
_PLOT_NU = 0.3
_PLOT_R = 0.7


def thread_count() -> int:
    """Worker count: EWH_THREADS when set, else min(4, cpu count)."""
    env = os.environ.get("EWH_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"EWH_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise DomainError(f"EWH_THREADS must be >= 1, got {n}")
        return n
    return min(4, os.cpu_count() or 1)


def _pmap(fn, items):
    """Order-preserving parallel map over grid points."""
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# --------------------------------------------------------------------------
# grids
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Per-axis (min, max, count) sampling; x = None defers to the
    check's admissible window."""

    nu: tuple = (-1.0, 1.0, 5)
    r: tuple = (-1.0, 1.0, 5)
    x: tuple = None

    def __post_init__(self):
        for name, axis in (("nu", self.nu), ("r", self.r), ("x", self.x)):
            if axis is None:
                continue
            lo, hi, n = axis
            if n < 2:
                raise DomainError(f"grid axis {name}: count {n} < 2")
            if not lo < hi:
                raise DomainError(f"grid axis {name}: need min < max, "
                                  f"got [{lo!r}, {hi!r}]")

    def resolve_x(self, window, count: int = 5) -> tuple:
        """The x axis: explicit spec, else the window shrunk 5 percent
        per side (finite), or a 3-unit span at a finite edge, or
        [-1, 1] when the window is the whole line."""
        if self.x is not None:
            return self.x
        lo, hi = window
        if math.isfinite(lo) and math.isfinite(hi):
            span = hi - lo
            return (lo + 0.05 * span, hi - 0.05 * span, count)
        if math.isfinite(lo):
            return (lo + 0.3, lo + 3.3, count)
        if math.isfinite(hi):
            return (hi - 3.3, hi - 0.3, count)
        return (-1.0, 1.0, count)


def _axis_values(axis):
    lo, hi, n = axis
    return [float(v) for v in np.linspace(lo, hi, int(n))]


def _points(grid: GridSpec, x_axis):
    return [Point(nu, r, x)
            for nu in _axis_values(grid.nu)
            for r in _axis_values(grid.r)
            for x in _axis_values(x_axis)]


def _nonzero_x_interval(h: ScalarField1D, base: tuple) -> tuple:
    """Longest contiguous sub-interval of `base` with |h| > 1e-3,
    shrunk 10 percent per side; used where F = (...)/2h divides by h."""
    lo, hi, n = base
    xs = np.linspace(lo, hi, 201)
    good = []
    for x in xs:
        try:
            good.append(abs(h(float(x)).value) > 1e-3)
        except EwhError:
            good.append(False)
    best, cur, start = None, None, None
    for i, g in enumerate(good + [False]):
        if g and cur is None:
            cur, start = 0, i
        elif g:
            cur += 1
        elif cur is not None:
            if best is None or cur > best[0]:
                best = (cur, start, i - 1)
            cur = None
    if best is None or best[2] <= best[1]:
        raise DomainError("no sub-interval with |h| > 1e-3 in the window")
    a, b = float(xs[best[1]]), float(xs[best[2]])
    pad = 0.1 * (b - a)
    return (a + pad, b - pad, n)


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

def _fmt_float(v: float) -> str:
    return f"{v:.17g}"


def _fmt_json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    return json.dumps(str(v))


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one verification check.

    `components` maps residual names to max-abs values over the grid;
    `overall_max` is their maximum and `status` compares it against
    `tolerance`.  JSON serialization is deterministic (fixed key order,
    fixed float format) and excludes the wall time.
    """

    check: str
    claim: str
    grid: dict
    components: dict
    tolerance: float
    expect_fail: bool
    params: dict
    version: str
    wall_time_s: float

    @property
    def overall_max(self) -> float:
        return max(self.components.values())

    @property
    def passed(self) -> bool:
        return self.overall_max < self.tolerance

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def json_items(self):
        items = [("schema", 1), ("tool", "ewh"), ("version", self.version),
                 ("check", self.check), ("claim", self.claim),
                 ("status", self.status), ("expect_fail", self.expect_fail),
                 ("tolerance", float(self.tolerance)),
                 ("overall_max", float(self.overall_max))]
        for axis in _AXIS_NAMES:
            if axis not in self.grid:
                continue
            lo, hi, n = self.grid[axis]
            items.append((f"grid.{axis}.min", float(lo)))
            items.append((f"grid.{axis}.max", float(hi)))
            items.append((f"grid.{axis}.count", int(n)))
        for name, v in self.components.items():
            items.append((f"component.{name}", float(v)))
        for name in sorted(self.params):
            items.append((f"param.{name}", self.params[name]))
        return items

    def to_json(self) -> str:
        body = ",\n".join(f'  "{k}": {_fmt_json_value(v)}'
                          for k, v in self.json_items())
        return "{\n" + body + "\n}\n"

    def to_csv(self) -> str:
        lines = ["component,value"]
        lines += [f"{k},{_fmt_float(float(v))}"
                  for k, v in self.components.items()]
        return "\n".join(lines) + "\n"

    def human(self) -> str:
        width = max(len(k) for k in self.components)
        lines = [f"check     : {self.check}",
                 f"claim     : {self.claim}",
                 f"status    : {self.status.upper()}"
                 + (" (expected fail)" if self.expect_fail else ""),
                 f"tolerance : {self.tolerance:.3e}",
                 f"overall   : {self.overall_max:.6e}"]
        for axis in _AXIS_NAMES:
            if axis in self.grid:
                lo, hi, n = self.grid[axis]
                lines.append(f"grid {axis:4s} : [{lo:g}, {hi:g}] x {n}")
        for k, v in self.components.items():
            lines.append(f"  {k:<{width}s} = {v:.6e}")
        if self.params:
            ptxt = " ".join(f"{k}={self.params[k]}"
                            for k in sorted(self.params))
            lines.append(f"params    : {ptxt}")
        lines.append(f"wall time : {self.wall_time_s:.3f} s")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# component evaluators
# --------------------------------------------------------------------------

def _ew_components(g, X, pts) -> dict:
    def one(p):
        E = ew_residual(g, X, p)
        return [abs(float(E[i, j])) for i, j in _EW_IDX]

    worst = np.max(np.array(_pmap(one, pts)), axis=0)
    return dict(zip(_EW_NAMES, (float(w) for w in worst)))


def _cotton_components(g, pts) -> dict:
    names = [f"{_AXIS_NAMES[a]}.{pn}" for a in range(3)
             for pn, _ in _PAIR_NAMES]

    def one(p):
        C = cotton(g, p)
        return [abs(float(C[a, b, c]))
                for a in range(3) for _, (b, c) in _PAIR_NAMES]

    worst = np.max(np.array(_pmap(one, pts)), axis=0)
    return dict(zip(names, (float(w) for w in worst)))


def _scalar_component(fn, xs) -> float:
    vals = _pmap(fn, xs)
    return float(max(abs(v) for v in vals))


def _take(params, allowed, check):
    extra = set(params) - set(allowed)
    if extra:
        raise DomainError(
            f"check {check!r} does not accept parameter(s) "
            f"{sorted(extra)}; allowed: {sorted(allowed)}")
    return dict(params)


def _scaled_oneform(X, factor):
    def comp(p):
        return [factor * c for c in X.components(p)]

    return OneFormField(comp, label=f"{X.label}*{factor:g}")


# --------------------------------------------------------------------------
# check pipelines
# --------------------------------------------------------------------------

def _check_thm1(params, grid):
    p = _take(params, {"h", "a", "b", "x0", "perturb"}, "thm1")
    hname = p.get("h", "zero")
    a = float(p.get("a", 0.1))
    b = float(p.get("b", 1.0))
    x0 = float(p.get("x0", 0.0))
    h = named_h_field(hname)
    d = NearHorizonData(h=h, F=thm1_F_field(h, a, b, x0=x0), c=-0.5)
    g = nh_metric(d)
    X = weyl_oneform_generic(d)
    perturb = p.get("perturb")
    if perturb is not None:
        X = _scaled_oneform(X, float(perturb))
    x_axis = grid.resolve_x(d.window)
    comps = _ew_components(g, X, _points(grid, x_axis))
    tol = 1e-8 if hname == "zero" else 1e-5
    gridrec = {"nu": grid.nu, "r": grid.r, "x": x_axis}
    pout = {"h": hname, "a": a, "b": b, "x0": x0}
    if perturb is not None:
        pout["perturb"] = float(perturb)
    claim = ("the weierstrass-profile structure (h, F, c = -1/2) is "
             "einstein-weyl on its pole-free window")
    return claim, comps, gridrec, tol, pout


_FAMILY_FIXED_C = {"Linear", "Quadratic", "TanFamily", "Weierstrass",
                   "HypergeometricParametric"}
_FAMILY_PARAMS = {"ell", "b", "c", "alpha", "beta", "gamma", "m", "a",
                  "x0", "h0", "h1", "span", "z_lo", "z_hi"}


def _build_family_checked(tag, params):
    """build_family plus validation of a user-supplied c for families
    whose c is fixed by the catalog."""
    tag = canonical_tag(tag)
    params = dict(params)
    c_claim = params.pop("c", None) if tag in _FAMILY_FIXED_C else None
    fam = build_family(tag, **params)
    if c_claim is not None and abs(float(c_claim) - fam.c) > 1e-12:
        raise DomainError(
            f"family {tag} has associated c = {fam.c!r}, not {c_claim!r}")
    return fam


def _ode4_relative(hj, c):
    """Quartic residual relative to its monomial scale (floored at 1, so
    it coincides with the absolute residual on order-unity data)."""
    return abs(ode4_residual(hj, c)) / max(1.0, ode4_condition(hj, c))


def _check_thm2(params, grid):
    p = _take(params, {"family"} | _FAMILY_PARAMS, "thm2-ode")
    tag = p.pop("family", "tanh")
    fam = _build_family_checked(tag, p)
    if fam.role != "h":
        raise DomainError("thm2-ode needs a profile (h) family")
    d = NearHorizonData(h=fam.field, F=F_from_h_field(fam.field, fam.c),
                        c=fam.c)
    x_axis = grid.resolve_x(fam.window)
    if grid.x is None:
        x_axis = _nonzero_x_interval(fam.field, x_axis)
    pts = _points(grid, x_axis)
    comps = _ew_components(nh_metric(d), weyl_oneform_generic(d), pts)
    comps["ode4"] = _scalar_component(
        lambda x: _ode4_relative(fam.field(x), fam.c), _axis_values(x_axis))
    tol = 1e-5 if fam.tag in ("NumericODE", "HypergeometricParametric") \
        else 1e-8
    gridrec = {"nu": grid.nu, "r": grid.r, "x": x_axis}
    pout = {"family": fam.tag, "c": fam.c, **fam.parameters}
    claim = ("profiles solving the quartic reduction give einstein-weyl "
             "data through the algebraic F")
    return claim, comps, gridrec, tol, pout


def _check_prop1(params, grid):
    p = _take(params, {"h", "F", "x0"}, "prop1-iff")
    hname = p.get("h", "one")
    fname = p.get("F", "flat")
    x0 = float(p.get("x0", 0.0))
    h = named_h_field(hname)
    if fname == "flat":
        F = F_flat_from_h(h, x0=x0)
    elif fname == "one":
        F = field_one()
    else:
        raise DomainError(f"prop1-iff F must be 'flat' or 'one', "
                          f"got {fname!r}")
    d = NearHorizonData(h=h, F=F, c=-0.5)
    g = nh_metric(d)
    x_axis = grid.resolve_x(d.window)
    comps = _cotton_components(g, _points(grid, x_axis))
    comps["defect"] = _scalar_component(
        lambda x: flatness_defect(d, x), _axis_values(x_axis))
    if fname != "flat":
        # the converse branch: report the Cotton size only, the defect
        # is the (nonzero) diagnostic input, not the residual
        comps.pop("defect")
    tol = 1e-9
    gridrec = {"nu": grid.nu, "r": grid.r, "x": x_axis}
    claim = ("the near-horizon metric is conformally flat exactly when "
             "F' = F h")
    return claim, comps, gridrec, tol, {"h": hname, "F": fname, "x0": x0}


def _dkp_window(a, b, margin=0.3):
    T = real_period(b)
    k = math.floor(a / T)
    lo, hi = k * T - a + margin, (k + 1) * T - a - margin
    if not lo < hi:
        raise DomainError(f"empty pole-free window for a={a!r}, b={b!r}")
    return lo, hi


def _check_dkp(params, grid):
    p = _take(params, {"a", "b"}, "dkp")
    b = float(p.get("b", 1.0))
    a = float(p.get("a", 0.5 * real_period(b)))
    u = dkp_wp_potential(a, b)
    x_axis = grid.resolve_x(_dkp_window(a, b))
    pts = _points(grid, x_axis)
    comps = {"residual": float(max(abs(v) for v in
                                   _pmap(lambda q: dkp_residual(u, q), pts)))}
    gridrec = {"nu": grid.nu, "r": grid.r, "x": x_axis}
    claim = "u = -(r^2/2) wp(x + a; 0, b) solves the dkp equation"
    return claim, comps, gridrec, 1e-8, {"a": a, "b": b}


def _check_hypercr(params, grid):
    p = _take(params, {"a", "b", "e", "j", "k", "l"}, "hypercr-family")
    pr = HyperCRParams(a=float(p.get("a", 1.0)), b=float(p.get("b", 2.0)),
                       e=float(p.get("e", 0.3)), j=float(p.get("j", 0.5)),
                       k=float(p.get("k", -1.0)), l=float(p.get("l", 2.0)))
    H = hypercr_tanh_family(pr)
    g, X = hypercr_structures(H)
    x_axis = grid.resolve_x((-math.inf, math.inf))
    pts = _points(grid, x_axis)
    comps = {"residual": float(max(abs(v) for v in
                                   _pmap(lambda q: hypercr_residual(H, q),
                                         pts)))}
    comps.update({f"ew.{k_}": v
                  for k_, v in _ew_components(g, X, pts).items()})
    gridrec = {"nu": grid.nu, "r": grid.r, "x": x_axis}
    pout = {"a": pr.a, "b": pr.b, "e": pr.e, "j": pr.j, "k": pr.k, "l": pr.l}
    claim = ("the tanh^3 six-parameter potential family solves the "
             "hypercr equation and is einstein-weyl")
    return claim, comps, gridrec, 1e-8, pout


def _check_prop4(params, grid):
    p = _take(params, {"c", "ell", "b"}, "prop4")
    c = float(p.get("c", -1.0))
    ell = float(p.get("ell", -1.0))
    b = float(p.get("b", 0.0))
    g, X = prop4_structures(c, ell, b)
    h = tanh_profile(c, ell, b)
    x_axis = grid.resolve_x((-math.inf, math.inf))
    pts = _points(grid, x_axis)
    comps = _ew_components(g, X, pts)
    comps["alignment"] = float(max(
        abs(v) for v in _pmap(lambda q: alignment_defect(c, ell, b, q),
                              pts)))
    comps["ode2"] = _scalar_component(
        lambda x: ode2_residual(h(x), -2.0 * c, 0.0), _axis_values(x_axis))
    gridrec = {"nu": grid.nu, "r": grid.r, "x": x_axis}
    claim = ("the tan-form tanh-profile structures are hypercr "
             "einstein-weyl and align with the near-horizon metric")
    return claim, comps, gridrec, 1e-8, {"c": c, "ell": ell, "b": b}


def _check_family(tag, params, grid):
    check = f"family:{tag}"
    p = _take(params, _FAMILY_PARAMS, check)
    fam = _build_family_checked(tag, p)
    x_axis = grid.resolve_x(fam.window, count=33)
    xs = _axis_values(x_axis)
    comps = {}
    if fam.role == "h":
        def ode4_at(x):
            try:
                return _ode4_relative(fam.field(x), fam.c)
            except EwhError:
                return 0.0

        comps["ode4"] = _scalar_component(ode4_at, xs)
        fi = fam.info.get("first_integral")
        if fi is not None:
            from .nearhorizon import ode3_first_integral
            comps["first_integral"] = _scalar_component(
                lambda x: ode3_first_integral(fam.field(x)) - fi, xs)
        claim = (f"the {fam.tag} profile solves the quartic reduction "
                 f"with its cataloged c")
    else:
        def fode_at(x):
            Fj = fam.field(x)
            return F_ode_residual_chalf(Fj, Jet1.constant(0.0))

        comps["fode"] = _scalar_component(fode_at, xs)
        claim = ("the weierstrass profile F satisfies 2 F'' = 12 F^2, "
                 "the h = 0 reduction at c = -1/2")
    tol = 1e-5 if fam.tag in ("NumericODE",) else 1e-8
    gridrec = {"x": x_axis}
    pout = {"family": fam.tag, "c": fam.c, **fam.parameters}
    return claim, comps, gridrec, tol, pout


def _check_chalf(params, grid):
    p = _take(params, {"h", "a", "b", "x0"}, "chalf-Fode")
    hname = p.get("h", "sin")
    a = float(p.get("a", 0.1))
    b = float(p.get("b", 1.0))
    x0 = float(p.get("x0", 0.0))
    h = named_h_field(hname)
    F = thm1_F_field(h, a, b, x0=x0)
    x_axis = grid.resolve_x(F.window, count=33)
    comps = {"residual": _scalar_component(
        lambda x: F_ode_residual_chalf(F(x), h(x)), _axis_values(x_axis))}
    tol = 1e-8 if hname == "zero" else 1e-5
    gridrec = {"x": x_axis}
    claim = ("at c = -1/2 the einstein-weyl system collapses to one "
             "second-order equation for F")
    return claim, comps, gridrec, tol, {"h": hname, "a": a, "b": b, "x0": x0}


def run_check(check_id: str, params: dict = None, grid: GridSpec = None,
              tolerance: float = None,
              expect_fail: bool = False) -> ResidualReport:
    """Run one named verification and wrap it in a ResidualReport."""
    params = dict(params or {})
    grid = grid or GridSpec()
    t0 = time.perf_counter()
    if check_id == "thm1":
        out = _check_thm1(params, grid)
    elif check_id == "thm2-ode":
        out = _check_thm2(params, grid)
    elif check_id == "prop1-iff":
        out = _check_prop1(params, grid)
    elif check_id == "dkp":
        out = _check_dkp(params, grid)
    elif check_id == "hypercr-family":
        out = _check_hypercr(params, grid)
    elif check_id == "prop4":
        out = _check_prop4(params, grid)
    elif check_id == "chalf-Fode":
        out = _check_chalf(params, grid)
    elif check_id.startswith("family:"):
        out = _check_family(check_id.split(":", 1)[1], params, grid)
    else:
        raise DomainError(
            f"unknown check {check_id!r}; known: thm1, thm2-ode, prop1-iff, "
            f"dkp, hypercr-family, prop4, chalf-Fode, family:<tag>")
    claim, comps, gridrec, natural_tol, pout = out
    return ResidualReport(
        check=check_id, claim=claim, grid=gridrec, components=comps,
        tolerance=float(tolerance) if tolerance is not None else natural_tol,
        expect_fail=expect_fail, params=pout, version=__version__,
        wall_time_s=time.perf_counter() - t0)


# --------------------------------------------------------------------------
# c-scan
# --------------------------------------------------------------------------

def _quartic_rhs_factory(c):
    cm = c - 1.0

    def rhs(x, y):
        h0, h1, h2, h3 = y
        top = (h0 ** 3 * h1 ** 2 * cm ** 2
               - 0.5 * cm ** 2 * h0 ** 4 * h2
               + 2.25 * cm * h0 ** 2 * h1 * h2
               - 0.75 * cm * h0 ** 3 * h3
               - 0.5 * h1 ** 2 * h2
               + 0.5 * h0 * h1 * h3
               + h0 * h2 ** 2)
        return np.array([h1, h2, h3, 4.0 * top / (h0 * h0)])

    return rhs


def _quartic_jet(y, c):
    h4 = float(_quartic_rhs_factory(c)(0.0, y)[3])
    return Jet1.from_derivatives([y[0], y[1], y[2], y[3], h4])


def scan_c(c_from: float, c_to: float, steps: int, seed: str = "quadratic",
           seed_params: dict = None, x0: float = 1.0,
           span: float = 6.0) -> list:
    """March c over [c_from, c_to] integrating the quartic profile ODE
    from a family seed jet; one row of
    (c, status, x_start, x_end, periodic, period) per value.

    Statuses: ok (full span), blowup (|h| or |h'| exceeded caps),
    guard (|h| fell to the division floor, or step-size collapse),
    singular-start (seed |h| <= 1e-6, nothing integrated).
    """
    if steps < 1:
        raise DomainError("scan-c needs steps >= 1")
    fam = _build_family_checked(seed, dict(seed_params or {}))
    if fam.role != "h":
        raise DomainError("scan-c seed must be a profile (h) family")
    lo, hi = fam.window
    if not lo <= x0 <= hi:
        raise DomainError(f"x0 = {x0!r} outside the seed window "
                          f"[{lo!r}, {hi!r}]")
    seed_jet = fam.field(x0)
    y0 = [seed_jet.derivative(k) for k in range(4)]
    cs = [float(v) for v in np.linspace(c_from, c_to, steps)] \
        if steps > 1 else [float(c_from)]
    rows = []
    for c in cs:
        if abs(y0[0]) <= 1e-6:
            rows.append((c, "singular-start", x0, x0, False, None))
            continue
        rhs = _quartic_rhs_factory(c)
        reason = {"flag": None}

        def guard(x, y, rec=reason):
            if abs(y[0]) >= 1e6 or abs(y[1]) >= 1e8:
                rec["flag"] = "blowup"
                return False
            if abs(y[0]) <= 1e-6:
                rec["flag"] = "guard"
                return False
            return True

        spec = IvpSpec(dim=4, rhs=rhs, x0=x0, y0=y0, guard=guard,
                       rtol=1e-10, atol=1e-12)
        sides = []
        for target in (x0 + span, x0 - span):
            reason["flag"] = None
            try:
                traj = integrate(spec, target)
                flag = reason["flag"] if traj.status == "guard" else "ok"
                sides.append((traj, flag or "guard"))
            except StiffnessError:
                sides.append((None, "guard"))
        x_end = sides[0][0].x_end if sides[0][0] is not None else x0
        x_start = sides[1][0].x_end if sides[1][0] is not None else x0
        flags = {s for _, s in sides}
        status = ("blowup" if "blowup" in flags
                  else "guard" if "guard" in flags else "ok")

        period = None
        periodic = False
        if x_end > x_start:
            fwd, bwd = sides[0][0], sides[1][0]

            def ev(x, f=fwd, bk=bwd, cc=c):
                traj = f if x >= x0 else bk
                if traj is None:
                    raise DomainError("outside integrated range")
                return _quartic_jet(traj(x), cc)

            fld = ScalarField1D(ev, label=f"scan[c={c:g}]",
                                window=(x_start, x_end))
            period = detect_period(fld, x0)
            if period is not None:
                periodic = periodicity_check(fld, period)
                if not periodic:
                    period = None
        rows.append((c, status, x_start, x_end, periodic, period))
    return rows


def scan_rows_csv(rows) -> str:
    lines = ["c,status,x_start,x_end,periodic,period"]
    for c, status, x_start, x_end, periodic, period in rows:
        ptxt = "" if period is None else f"{period:.12g}"
        lines.append(f"{c:.12g},{status},{x_start:.12g},{x_end:.12g},"
                     f"{'true' if periodic else 'false'},{ptxt}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# plot export
# --------------------------------------------------------------------------

def _sweep_window(window, lo=-3.0, hi=3.0):
    """Intersect the requested sweep with the admissible window; report
    whether clipping happened."""
    wlo, whi = window
    span = (whi - wlo) if math.isfinite(wlo) and math.isfinite(whi) \
        else None
    pad = 0.02 * span if span is not None else 0.0
    a = max(lo, wlo + pad)
    b = min(hi, whi - pad)
    clipped = a > lo or b < hi
    if not a < b:
        raise DomainError(f"empty sweep range inside window {window!r}")
    return a, b, clipped


def export_plot(check_id: str, params: dict = None, axis: str = "x",
                samples: int = 200) -> list:
    """CSV lines for a 1D residual sweep of a check.

    Profile checks emit (x, h, F, residual) along x; PDE checks emit
    (axis, residual) along any axis at the fixed off-axis slice
    nu = 0.3, r = 0.7.  A trailing `# window-clipped` comment marks
    sweeps truncated by the admissible window.
    """
    params = dict(params or {})
    if samples < 2:
        raise DomainError("export-plot needs samples >= 2")
    if axis not in _AXIS_NAMES:
        raise DomainError(f"axis must be one of {_AXIS_NAMES}, got {axis!r}")

    if check_id in ("thm1", "thm2-ode", "prop1-iff", "chalf-Fode") \
            or check_id.startswith("family:"):
        if axis != "x":
            raise DomainError(f"check {check_id!r} sweeps x only")
        return _export_profile(check_id, params, samples)
    if check_id in ("dkp", "hypercr-family", "prop4"):
        return _export_pde(check_id, params, axis, samples)
    raise DomainError(f"unknown check {check_id!r} for export-plot")


def _export_profile(check_id, params, samples):
    if check_id == "thm1":
        p = _take(params, {"h", "a", "b", "x0"}, check_id)
        h = named_h_field(p.get("h", "zero"))
        F = thm1_F_field(h, float(p.get("a", 0.1)), float(p.get("b", 1.0)),
                         x0=float(p.get("x0", 0.0)))
        d = NearHorizonData(h=h, F=F, c=-0.5)
        g, X = nh_metric(d), weyl_oneform_generic(d)

        def resid(x):
            return float(np.max(np.abs(
                ew_residual(g, X, Point(_PLOT_NU, _PLOT_R, x)))))

        window = d.window
        Ffield = F
    elif check_id == "chalf-Fode":
        p = _take(params, {"h", "a", "b", "x0"}, check_id)
        h = named_h_field(p.get("h", "sin"))
        Ffield = thm1_F_field(h, float(p.get("a", 0.1)),
                              float(p.get("b", 1.0)),
                              x0=float(p.get("x0", 0.0)))

        def resid(x):
            return abs(F_ode_residual_chalf(Ffield(x), h(x)))

        window = Ffield.window
    elif check_id == "prop1-iff":
        p = _take(params, {"h", "F", "x0"}, check_id)
        h = named_h_field(p.get("h", "one"))
        fname = p.get("F", "flat")
        Ffield = F_flat_from_h(h, x0=float(p.get("x0", 0.0))) \
            if fname == "flat" else field_one()
        d = NearHorizonData(h=h, F=Ffield, c=-0.5)
        g = nh_metric(d)

        def resid(x):
            return float(np.max(np.abs(cotton(g, Point(_PLOT_NU, _PLOT_R,
                                                       x)))))

        window = d.window
    elif check_id == "thm2-ode":
        p = _take(params, {"family"} | _FAMILY_PARAMS, check_id)
        fam = _build_family_checked(p.pop("family", "tanh"), p)
        h = fam.field
        Ffield = F_from_h_field(h, fam.c)
        d = NearHorizonData(h=h, F=Ffield, c=fam.c)
        g, X = nh_metric(d), weyl_oneform_generic(d)

        def resid(x):
            return float(np.max(np.abs(
                ew_residual(g, X, Point(_PLOT_NU, _PLOT_R, x)))))

        window = fam.window
    else:
        tag = check_id.split(":", 1)[1]
        p = _take(params, _FAMILY_PARAMS, check_id)
        fam = _build_family_checked(tag, p)
        h = fam.field if fam.role == "h" else None
        Ffield = F_from_h_field(fam.field, fam.c) if fam.role == "h" \
            else fam.field

        def resid(x):
            if fam.role == "h":
                return _ode4_relative(fam.field(x), fam.c)
            return abs(F_ode_residual_chalf(fam.field(x),
                                            Jet1.constant(0.0)))

        window = fam.window
        if fam.role != "h":
            h = None

    a, b, clipped = _sweep_window(window)
    lines = ["x,h,F,residual"]
    for x in np.linspace(a, b, samples):
        x = float(x)
        try:
            htxt = f"{h(x).value:.12g}" if h is not None else ""
            ftxt = f"{Ffield(x).value:.12g}"
            rtxt = f"{resid(x):.12g}"
        except EwhError:
            continue
        lines.append(f"{x:.12g},{htxt},{ftxt},{rtxt}")
    if clipped:
        lines.append("# window-clipped")
    return lines


def _export_pde(check_id, params, axis, samples):
    if check_id == "dkp":
        p = _take(params, {"a", "b"}, check_id)
        b = float(p.get("b", 1.0))
        a = float(p.get("a", 0.5 * real_period(b)))
        u = dkp_wp_potential(a, b)
        window = _dkp_window(a, b)

        def resid(q):
            return abs(dkp_residual(u, q))
    elif check_id == "hypercr-family":
        p = _take(params, {"a", "b", "e", "j", "k", "l"}, check_id)
        pr = HyperCRParams(a=float(p.get("a", 1.0)),
                           b=float(p.get("b", 2.0)),
                           e=float(p.get("e", 0.3)),
                           j=float(p.get("j", 0.5)),
                           k=float(p.get("k", -1.0)),
                           l=float(p.get("l", 2.0)))
        H = hypercr_tanh_family(pr)
        window = (-math.inf, math.inf)

        def resid(q):
            return abs(hypercr_residual(H, q))
    else:
        p = _take(params, {"c", "ell", "b"}, check_id)
        g, X = prop4_structures(float(p.get("c", -1.0)),
                                float(p.get("ell", -1.0)),
                                float(p.get("b", 0.0)))
        window = (-math.inf, math.inf)

        def resid(q):
            return float(np.max(np.abs(ew_residual(g, X, q))))

    clipped = False
    if axis == "x":
        a, b, clipped = _sweep_window(window)
        mk = lambda v: Point(_PLOT_NU, _PLOT_R, v)
    else:
        a, b = -1.0, 1.0
        x_mid = 0.0 if not all(map(math.isfinite, window)) \
            else 0.5 * (window[0] + window[1])
        if axis == "r":
            mk = lambda v: Point(_PLOT_NU, v, x_mid)
        else:
            mk = lambda v: Point(v, _PLOT_R, x_mid)
    lines = [f"{axis},residual"]
    for v in np.linspace(a, b, samples):
        v = float(v)
        try:
            lines.append(f"{v:.12g},{resid(mk(v)):.12g}")
        except EwhError:
            continue
    if clipped:
        lines.append("# window-clipped")
    return lines
