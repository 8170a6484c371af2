"""Truncated Taylor (jet) arithmetic in one and three variables.

A jet stores the value of a smooth function together with every derivative
up to total order 4, as Taylor coefficients.  Sums, products, quotients and
elementary-function composition are exact truncated power-series algebra,
so derivative extraction is exact up to floating point roundoff.  Jets are
the derivative engine behind the curvature and residual modules; the
finite-difference oracle at the bottom of this file is the independent
cross-check.

Coordinates are always ordered (nu, r, x) = (0, 1, 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularJetError

ORDER = 4

_FACT = np.array([1.0, 1.0, 2.0, 6.0, 24.0])

AXES = ("nu", "r", "x")


@dataclass(frozen=True)
class Point:
    """Coordinate triple (nu, r, x)."""

    nu: float
    r: float
    x: float

    def __post_init__(self):
        for name in ("nu", "r", "x"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate {name}={v!r}")

    def __getitem__(self, axis):
        return (self.nu, self.r, self.x)[axis]

    def shifted(self, axis, dt):
        c = [self.nu, self.r, self.x]
        c[axis] += dt
        return Point(*c)


def _build_multi_indices():
    out = []
    for total in range(ORDER + 1):
        for i in range(total, -1, -1):
            for j in range(total - i, -1, -1):
                out.append((i, j, total - i - j))
    return tuple(out)


MULTI_INDICES = _build_multi_indices()
INDEX3 = {mi: n for n, mi in enumerate(MULTI_INDICES)}
N3 = len(MULTI_INDICES)


def _build_mul_table():
    ia, ib, it = [], [], []
    for na, a in enumerate(MULTI_INDICES):
        for nb, b in enumerate(MULTI_INDICES):
            t = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
            if sum(t) <= ORDER:
                ia.append(na)
                ib.append(nb)
                it.append(INDEX3[t])
    return np.asarray(ia), np.asarray(ib), np.asarray(it)


_MUL_A, _MUL_B, _MUL_T = _build_mul_table()


def _build_deriv_tables():
    src = np.zeros((3, N3), dtype=np.intp)
    fac = np.zeros((3, N3))
    for axis in range(3):
        for n, mi in enumerate(MULTI_INDICES):
            up = list(mi)
            up[axis] += 1
            up = tuple(up)
            if sum(up) <= ORDER:
                src[axis, n] = INDEX3[up]
                fac[axis, n] = up[axis]
    return src, fac


_D_SRC, _D_FAC = _build_deriv_tables()

_PARTIAL_FAC = np.array([_FACT[i] * _FACT[j] * _FACT[k] for (i, j, k) in MULTI_INDICES])


# Derivative tables for elementary functions: (f, f', f'', f''', f'''') at v.

def _dt_exp(v):
    e = math.exp(v)
    return (e, e, e, e, e)


def _dt_log(v):
    if v <= 0.0:
        raise SingularJetError(f"log needs a positive value part, got {v}")
    return (math.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3, -6.0 / v**4)


def _dt_sin(v):
    s, c = math.sin(v), math.cos(v)
    return (s, c, -s, -c, s)


def _dt_cos(v):
    s, c = math.sin(v), math.cos(v)
    return (c, -s, -c, s, c)


def _dt_tan(v):
    if abs(math.cos(v)) < 1e-12:
        raise SingularJetError(f"tan evaluated too close to a pole, argument {v}")
    t = math.tan(v)
    u = 1.0 + t * t
    return (t, u, 2 * t * u, 2 * u * u + 4 * t * t * u, 16 * t * u * u + 8 * t**3 * u)


def _dt_tanh(v):
    t = math.tanh(v)
    s = 1.0 - t * t
    return (t, s, -2 * t * s, -2 * s * s + 4 * t * t * s, 16 * t * s * s - 8 * t**3 * s)


def _dt_sqrt(v):
    if v <= 0.0:
        raise SingularJetError(f"sqrt needs a positive value part, got {v}")
    rv = math.sqrt(v)
    return (rv, 0.5 / rv, -0.25 / (rv * v), 0.375 / (rv * v * v), -0.9375 / (rv * v**3))


def _dt_atan(v):
    w = 1.0 + v * v
    return (math.atan(v), 1.0 / w, -2.0 * v / w**2, (6 * v * v - 2) / w**3,
            (24 * v - 24 * v**3) / w**4)


def _dt_pow(v, p):
    if v <= 0.0:
        raise SingularJetError(f"pow_real needs a positive value part, got {v}")
    d = [v**p]
    fac = 1.0
    for k in range(4):
        fac *= p - k
        d.append(fac * v ** (p - k - 1))
    return tuple(d)


def _dt_recip(v):
    if v == 0.0:
        raise SingularJetError("division by a jet with zero value part")
    return (1.0 / v, -1.0 / v**2, 2.0 / v**3, -6.0 / v**4, 24.0 / v**5)


class _JetBase:
    """Shared arithmetic for Jet1 and Jet3 (dense coefficient arrays)."""

    __slots__ = ("coeffs",)

    # Subclasses set _N (coefficient count) and implement _mul_coeffs.

    @classmethod
    def _raw(cls, coeffs):
        j = object.__new__(cls)
        j.coeffs = coeffs
        return j

    @classmethod
    def constant(cls, v):
        c = np.zeros(cls._N)
        c[0] = v
        return cls._raw(c)

    @property
    def value(self):
        return float(self.coeffs[0])

    def __repr__(self):
        return f"{type(self).__name__}({self.coeffs.tolist()})"

    # Ring operations.

    def __add__(self, other):
        if isinstance(other, type(self)):
            return type(self)._raw(self.coeffs + other.coeffs)
        if isinstance(other, (int, float)):
            c = self.coeffs.copy()
            c[0] += other
            return type(self)._raw(c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(-self.coeffs)

    def __sub__(self, other):
        if isinstance(other, type(self)):
            return type(self)._raw(self.coeffs - other.coeffs)
        if isinstance(other, (int, float)):
            c = self.coeffs.copy()
            c[0] -= other
            return type(self)._raw(c)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            c = -self.coeffs
            c[0] += other
            return type(self)._raw(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, type(self)):
            return type(self)._raw(self._mul_coeffs(self.coeffs, other.coeffs))
        if isinstance(other, (int, float)):
            return type(self)._raw(self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return type(self)._raw(self.coeffs / other)
        if isinstance(other, type(self)):
            return self * other._reciprocal()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            return self._reciprocal() * other
        return NotImplemented

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and float(p).is_integer()):
            n = int(p)
            if n < 0:
                return self._reciprocal() ** (-n)
            out = type(self).constant(1.0)
            base = self
            while n:
                if n & 1:
                    out = out * base
                base = base * base
                n >>= 1
            return out
        return self.powr(float(p))

    def _reciprocal(self):
        return self._compose(_dt_recip(self.value))

    def _compose(self, derivs):
        """Compose with a function given its derivatives at value(self)."""
        ghat = self - self.value
        acc = type(self).constant(derivs[4] / 24.0)
        for k in (3, 2, 1, 0):
            acc = acc * ghat + derivs[k] / _FACT[k]
        return acc

    # Elementary functions.

    def exp(self):
        return self._compose(_dt_exp(self.value))

    def log(self):
        return self._compose(_dt_log(self.value))

    def sin(self):
        return self._compose(_dt_sin(self.value))

    def cos(self):
        return self._compose(_dt_cos(self.value))

    def tan(self):
        return self._compose(_dt_tan(self.value))

    def tanh(self):
        return self._compose(_dt_tanh(self.value))

    def sqrt(self):
        return self._compose(_dt_sqrt(self.value))

    def atan(self):
        return self._compose(_dt_atan(self.value))

    def powr(self, p):
        return self._compose(_dt_pow(self.value, p))


class Jet1(_JetBase):
    """One-variable jet: Taylor coefficients of f at a point, orders 0..4."""

    __slots__ = ()
    _N = ORDER + 1

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (self._N,):
            raise ValueError(f"Jet1 needs {self._N} coefficients, got shape {c.shape}")
        self.coeffs = c.copy()

    @classmethod
    def variable(cls, x, scale=1.0):
        """Jet of the coordinate itself: value x, first derivative `scale`."""
        c = np.zeros(cls._N)
        c[0] = x
        c[1] = scale
        return cls._raw(c)

    @classmethod
    def from_derivatives(cls, derivs):
        """Build a jet from raw derivative values f, f', ..., f''''."""
        return cls._raw(np.asarray(derivs, dtype=float) / _FACT)

    @staticmethod
    def _mul_coeffs(a, b):
        return np.convolve(a, b)[: ORDER + 1]

    def derivative(self, k):
        """k-th derivative value, d^k f / dx^k."""
        return float(self.coeffs[k] * _FACT[k])

    def derivatives(self):
        """All derivative values as an array of length 5."""
        return self.coeffs * _FACT

    def d(self):
        """Jet of f'.  The top coefficient is out of range and set to 0."""
        c = np.zeros(self._N)
        c[:ORDER] = self.coeffs[1:] * np.arange(1, ORDER + 1)
        return Jet1._raw(c)


class Jet3(_JetBase):
    """Three-variable jet over (nu, r, x): dense multi-index coefficients."""

    __slots__ = ()
    _N = N3

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (N3,):
            raise ValueError(f"Jet3 needs {N3} coefficients, got shape {c.shape}")
        self.coeffs = c.copy()

    @classmethod
    def variable(cls, p, axis):
        """Jet of the coordinate function p[axis]."""
        c = np.zeros(N3)
        c[0] = p[axis]
        mi = [0, 0, 0]
        mi[axis] = 1
        c[INDEX3[tuple(mi)]] = 1.0
        return cls._raw(c)

    @classmethod
    def from_axis_jet(cls, jet1, axis):
        """Lift a Jet1 to a Jet3 that depends on a single coordinate."""
        c = np.zeros(N3)
        for k in range(ORDER + 1):
            mi = [0, 0, 0]
            mi[axis] = k
            c[INDEX3[tuple(mi)]] = jet1.coeffs[k]
        return cls._raw(c)

    @classmethod
    def from_partials(cls, values):
        """Build a jet from partial derivative values in MULTI_INDICES order.

        Inverse of reading every .partial(); the finite-difference path to
        the same object a jet computation produces.
        """
        v = np.asarray(values, dtype=float)
        if v.shape != (N3,):
            raise ValueError(f"need {N3} partial values, got shape {v.shape}")
        return cls._raw(v / _PARTIAL_FAC)

    @staticmethod
    def _mul_coeffs(a, b):
        return np.bincount(_MUL_T, weights=a[_MUL_A] * b[_MUL_B], minlength=N3)

    def partial(self, i, j=None, k=None):
        """Partial derivative value for the multi-index (i, j, k)."""
        mi = tuple(i) if j is None else (i, j, k)
        pos = INDEX3[mi]
        return float(self.coeffs[pos] * _PARTIAL_FAC[pos])

    def d(self, axis):
        """Jet of the partial derivative along `axis`.

        Coefficients of total order 4 in the result would need order-5
        information and are set to 0; lower orders are exact.
        """
        return Jet3._raw(self.coeffs[_D_SRC[axis]] * _D_FAC[axis])


def compose_jet1(outer, inner):
    """Jet of f(g(t)) from the jet of f at g's value and the jet of g.

    `outer` must be centered at inner.value (its coefficients are the
    Taylor coefficients of f there).
    """
    ghat = inner - inner.value
    acc = Jet1.constant(float(outer.coeffs[ORDER]))
    for k in range(ORDER - 1, -1, -1):
        acc = acc * ghat + float(outer.coeffs[k])
    return acc


def jet_inverse(j, value=0.0):
    """Jet of the compositional inverse of a strictly monotone germ.

    Given the jet of y = f(t) with f'(t0) != 0, returns the jet of the
    inverse function t(y) at y0 = f(t0), with constant term `value`
    (the inverse's own value t0, which the forward jet does not carry).
    """
    a1, a2, a3, a4 = (float(j.coeffs[1]), float(j.coeffs[2]),
                      float(j.coeffs[3]), float(j.coeffs[4]))
    if a1 == 0.0:
        raise SingularJetError("jet has zero linear part; no local inverse")
    b1 = 1.0 / a1
    b2 = -a2 / a1**3
    b3 = (2.0 * a2**2 - a1 * a3) / a1**5
    b4 = (5.0 * a1 * a2 * a3 - a1**2 * a4 - 5.0 * a2**3) / a1**7
    return Jet1._raw(np.array([value, b1, b2, b3, b4]))


_ELEMENTARY = {
    "exp": Jet1.exp,
    "log": Jet1.log,
    "sin": Jet1.sin,
    "cos": Jet1.cos,
    "tan": Jet1.tan,
    "tanh": Jet1.tanh,
    "sqrt": Jet1.sqrt,
    "atan": Jet1.atan,
}


def jet_elementary(f, kind, power=None):
    """Apply an elementary function to a jet by name.

    Supported kinds: exp, log, sin, cos, tan, tanh, sqrt, atan, pow_real
    (pow_real takes the exponent through `power`).
    """
    if kind == "pow_real":
        if power is None:
            raise ValueError("pow_real needs the `power` argument")
        return f.powr(float(power))
    try:
        method = _ELEMENTARY[kind]
    except KeyError:
        raise ValueError(f"unknown elementary kind {kind!r}") from None
    return method(f)


# Finite-difference oracle.  Central stencils of O(step^2) accuracy with one
# Richardson level, so the leading error is O(step^4).  The default step
# grows with the total derivative order to balance truncation against the
# 1/step^order roundoff amplification of high-order stencils.

_FD_STEPS = {1: 1e-3, 2: 1e-3, 3: 5e-3, 4: 1e-2}


def _fd_1d(g, order, h):
    if order == 1:
        return (g(h) - g(-h)) / (2 * h)
    if order == 2:
        return (g(h) - 2 * g(0.0) + g(-h)) / h**2
    if order == 3:
        return (g(2 * h) - 2 * g(h) + 2 * g(-h) - g(-2 * h)) / (2 * h**3)
    return (g(2 * h) - 4 * g(h) + 6 * g(0.0) - 4 * g(-h) + g(-2 * h)) / h**4


def _fd_nested(f, p, mi, h):
    for axis in range(3):
        if mi[axis]:
            break
    else:
        return f(p)
    rest = list(mi)
    rest[axis] = 0
    rest = tuple(rest)

    def g(t):
        return _fd_nested(f, p.shifted(axis, t), rest, h)

    return _fd_1d(g, mi[axis], h)


def fd_oracle(f, p, multi_index, step=None):
    """Mixed partial derivative of f at p by central differences.

    `f` maps Point -> float and `multi_index` is (i, j, k) with total order
    at most 4.  One Richardson extrapolation level is applied, giving
    O(step^4) truncation error.
    """
    mi = tuple(int(m) for m in multi_index)
    if len(mi) != 3 or any(m < 0 for m in mi):
        raise ValueError(f"bad multi-index {multi_index!r}")
    total = sum(mi)
    if total > ORDER:
        raise ValueError(f"total derivative order {total} exceeds {ORDER}")
    if total == 0:
        return f(p)
    h = float(step) if step is not None else _FD_STEPS[total]
    coarse = _fd_nested(f, p, mi, h)
    fine = _fd_nested(f, p, mi, h / 2)
    return (4.0 * fine - coarse) / 3.0
