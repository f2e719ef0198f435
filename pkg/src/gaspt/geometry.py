"""Boundary arcs from A(a,0) to B(0,b): tangents, normals, arclength, and
the endpoint-tangency admissibility check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateTangentError, InvalidParamsError

__all__ = ["Point", "Curve", "AdmissibilityReport", "builtin_superellipse",
           "curve_from_samples", "exterior_normal", "check_admissibility"]

_ARCLEN_PANELS = 256
_ARCLEN_ORDER = 10


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidParamsError("points must have finite coordinates")


class Curve:
    """Parametric arc (x(t), y(t)), t in [0, 1], from A = (a, 0) to B = (0, b).

    Supplied as parameter-space callables; arclength-form integrals carry the
    Jacobian |r'(t)| explicitly rather than reparametrizing globally.
    """

    def __init__(self, position: Callable[[float], tuple],
                 derivative: Callable[[float], tuple],
                 second_derivative: Callable[[float], tuple] | None = None,
                 name: str = "curve", meta: dict | None = None):
        self._position = position
        self._derivative = derivative
        self._second = second_derivative
        self.name = name
        self.meta = dict(meta or {})
        ax, ay = position(0.0)
        bx, by = position(1.0)
        if abs(ay) > 1e-13 * max(1.0, abs(ax)) or abs(bx) > 1e-13 * max(1.0, abs(by)):
            raise InvalidParamsError("curve must run from (a, 0) to (0, b)")
        self.a = float(ax)
        self.b = float(by)
        self._s_grid = None

    def position(self, t: float) -> Point:
        x, y = self._position(t)
        return Point(float(x), float(y))

    def derivative(self, t: float) -> tuple[float, float]:
        dx, dy = self._derivative(t)
        return float(dx), float(dy)

    def second_derivative(self, t: float) -> tuple[float, float]:
        if self._second is not None:
            ddx, ddy = self._second(t)
            return float(ddx), float(ddy)
        h = 1e-6
        tl, tr = max(0.0, t - h), min(1.0, t + h)
        dxl, dyl = self._derivative(tl)
        dxr, dyr = self._derivative(tr)
        return (dxr - dxl) / (tr - tl), (dyr - dyl) / (tr - tl)

    def speed(self, t: float) -> float:
        dx, dy = self.derivative(t)
        return math.hypot(dx, dy)

    def unit_tangent(self, t: float) -> tuple[float, float]:
        dx, dy = self.derivative(t)
        sp = math.hypot(dx, dy)
        if sp == 0.0:
            raise DegenerateTangentError(f"zero tangent at t = {t}")
        return dx / sp, dy / sp

    # -- arclength machinery ------------------------------------------------

    def _ensure_arclength(self):
        if self._s_grid is not None:
            return
        xs, ws = np.polynomial.legendre.leggauss(_ARCLEN_ORDER)
        edges = np.linspace(0.0, 1.0, _ARCLEN_PANELS + 1)
        lengths = np.empty(_ARCLEN_PANELS)
        for k in range(_ARCLEN_PANELS):
            mid = 0.5 * (edges[k] + edges[k + 1])
            half = 0.5 * (edges[k + 1] - edges[k])
            lengths[k] = half * sum(
                w * self.speed(mid + half * x) for x, w in zip(xs, ws))
        prefix = np.concatenate([[0.0], np.cumsum(lengths)])
        self._s_grid = (edges, prefix)

    @property
    def length(self) -> float:
        self._ensure_arclength()
        return float(self._s_grid[1][-1])

    def arclength(self, t: float) -> float:
        """s(t), the arclength from A to position(t)."""
        self._ensure_arclength()
        edges, prefix = self._s_grid
        if t <= 0.0:
            return 0.0
        if t >= 1.0:
            return float(prefix[-1])
        k = min(int(t * _ARCLEN_PANELS), _ARCLEN_PANELS - 1)
        xs, ws = np.polynomial.legendre.leggauss(_ARCLEN_ORDER)
        lo = edges[k]
        mid = 0.5 * (lo + t)
        half = 0.5 * (t - lo)
        extra = half * sum(w * self.speed(mid + half * x) for x, w in zip(xs, ws))
        return float(prefix[k] + extra)

    def param_from_arclength(self, s: float) -> float:
        """Inverse of arclength(); clamped to [0, 1]."""
        self._ensure_arclength()
        edges, prefix = self._s_grid
        total = prefix[-1]
        if s <= 0.0:
            return 0.0
        if s >= total:
            return 1.0
        k = int(np.searchsorted(prefix, s) - 1)
        k = min(max(k, 0), _ARCLEN_PANELS - 1)
        t = edges[k] + (s - prefix[k]) / max(prefix[k + 1] - prefix[k], 1e-300) \
            * (edges[k + 1] - edges[k])
        for _ in range(40):
            err = self.arclength(t) - s
            sp = self.speed(t)
            if sp == 0.0:
                break
            step = err / sp
            t = min(1.0, max(0.0, t - step))
            if abs(step) < 1e-15:
                break
        return t


def exterior_normal(curve: Curve, t: float) -> tuple[float, float]:
    """Unit normal (dy/ds, -dx/ds): points out of the domain for an arc
    traversed from A to B with the domain on its left."""
    tx, ty = curve.unit_tangent(t)
    return ty, -tx


def builtin_superellipse(a: float, b: float, p: float) -> Curve:
    """Quarter arc of (x/a)^p + (y/b)^p = 1, parametrized so both endpoint
    tangencies satisfy the admissibility condition with margin p - 2."""
    if not (a > 0.0 and b > 0.0):
        raise InvalidParamsError("semi-axes must be positive")
    if not (2.0 < p < 3.0):
        raise InvalidParamsError("superellipse exponent must lie in (2, 3)")
    k = 0.5 * math.pi

    def g(t):
        s, c = math.sin(k * t), math.cos(k * t)
        return (s ** p + c ** p) ** (1.0 / p)

    def pos(t):
        s, c = math.sin(k * t), math.cos(k * t)
        gg = g(t)
        return a * c / gg, b * s / gg

    def deriv(t):
        s, c = math.sin(k * t), math.cos(k * t)
        gg = g(t)
        gp1 = gg ** (p + 1.0)
        return -a * k * s ** (p - 1.0) / gp1, b * k * c ** (p - 1.0) / gp1

    def deriv2(t):
        s, c = math.sin(k * t), math.cos(k * t)
        gg = g(t)
        dg = k * (s ** (p - 1.0) * c - c ** (p - 1.0) * s) / gg ** (p - 1.0)
        gp1 = gg ** (p + 1.0)
        gp2 = gg ** (p + 2.0)
        ddx = -a * k * ((p - 1.0) * k * s ** (p - 2.0) * c / gp1
                        - (p + 1.0) * s ** (p - 1.0) * dg / gp2)
        ddy = b * k * (-(p - 1.0) * k * c ** (p - 2.0) * s / gp1
                       - (p + 1.0) * c ** (p - 1.0) * dg / gp2)
        return ddx, ddy

    return Curve(pos, deriv, deriv2, name="superellipse",
                 meta={"type": "superellipse", "a": a, "b": b, "p": p})


def curve_from_samples(points, clamp_at_a: bool = True,
                       clamp_at_b: bool = True) -> Curve:
    """Cubic-spline arc through sample points ordered from A = (a, 0) to
    B = (0, b); tangency flags clamp the end tangents to the axis normals."""
    from scipy.interpolate import CubicSpline

    pts = np.asarray(points, float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
        raise InvalidParamsError("need at least 4 (x, y) samples")
    chord = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(pts, axis=0).T))])
    t = chord / chord[-1]
    bc_x = ((1, 0.0), "not-a-knot") if clamp_at_a else "not-a-knot"
    bc_y = ("not-a-knot", (1, 0.0)) if clamp_at_b else "not-a-knot"
    sx = CubicSpline(t, pts[:, 0], bc_type=bc_x)
    sy = CubicSpline(t, pts[:, 1], bc_type=bc_y)

    return Curve(lambda u: (float(sx(u)), float(sy(u))),
                 lambda u: (float(sx(u, 1)), float(sy(u, 1))),
                 lambda u: (float(sx(u, 2)), float(sy(u, 2))),
                 name="samples",
                 meta={"type": "samples", "n": len(pts)})


@dataclass(frozen=True)
class AdmissibilityReport:
    epsilon_fit_at_A: float
    epsilon_fit_at_B: float
    passes: bool
    c_estimate: float


_FIT_SLACK = 0.05


def check_admissibility(curve: Curve, epsilon: float) -> AdmissibilityReport:
    """Log-log slope fit of the endpoint tangency exponents.

    Near A the condition is |dx/ds| <= c y^(1+eps); the fitted exponent of
    |dx/ds| against y over a geometric ladder of distances must reach
    1 + epsilon (minus a small fitting slack), and likewise near B.
    """
    if not (0.0 < epsilon < 1.0):
        raise InvalidParamsError("epsilon must lie in (0, 1)")
    taus = np.geomspace(1e-5, 1e-2, 9)

    def fit(end: str):
        logs_w, logs_d = [], []
        cs = []
        for tau in taus:
            t = tau if end == "A" else 1.0 - tau
            dx, dy = curve.derivative(t)
            sp = math.hypot(dx, dy)
            pt = curve.position(t)
            if end == "A":
                wall, dist = abs(dx) / sp, pt.y
            else:
                wall, dist = abs(dy) / sp, pt.x
            if wall <= 0.0 or dist <= 0.0:
                continue
            logs_w.append(math.log(wall))
            logs_d.append(math.log(dist))
            cs.append(wall / dist ** (1.0 + epsilon))
        if len(logs_w) < 3:
            # tangency component identically zero: infinitely flat
            return math.inf, 0.0
        slope = np.polyfit(logs_d, logs_w, 1)[0]
        return float(slope) - 1.0, max(cs)

    eps_a, c_a = fit("A")
    eps_b, c_b = fit("B")
    passes = (eps_a >= epsilon - _FIT_SLACK) and (eps_b >= epsilon - _FIT_SLACK)
    return AdmissibilityReport(eps_a, eps_b, passes, max(c_a, c_b))
