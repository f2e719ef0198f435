"""Fundamental solutions q_1..q_4 of the weighted potential equation, their
normalization constants, gradients, normal-derivative kernels, majorant
envelopes, and a finite-difference residual probe.

All four solutions share one structure

    q_i = k_i (r^2)^(-a) (x x0)^p (y y0)^q F2(a; b1, b2; 2 b1, 2 b2; xi, eta)

with a = b1 + b2 and (b1, b2) in {al, 1-al} x {be, 1-be}; the gradient
formulas below follow from the F2 derivative rule combined with the
contiguous relation that holds because b1/c1 = b2/c2 = 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln as _gammaln

from .errors import CoincidentPointsError, InvalidParamsError
from .geometry import Curve, Point, exterior_normal
from .specfun import appell_f2_raw, _hyp2f1

__all__ = ["Params", "GeomQuantities", "BoundaryPoint", "SOLUTION_INDICES",
           "normalization_constant", "geom_quantities", "fundamental_solution",
           "gradient", "normal_derivative", "kernel", "bound_envelope",
           "pde_residual"]

SOLUTION_INDICES = (1, 2, 3, 4)

# relative r^2 floor below which kernel evaluation refuses to proceed
_NEAR_DIAGONAL_FLOOR = 1e-14


@dataclass(frozen=True)
class Params:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 < 2.0 * self.alpha < 1.0 and 0.0 < 2.0 * self.beta < 1.0):
            raise InvalidParamsError("alpha and beta must satisfy 0 < 2*alpha, 2*beta < 1")


@dataclass(frozen=True)
class GeomQuantities:
    r_sq: float
    r1_sq: float
    r2_sq: float
    xi: float
    eta: float


@dataclass(frozen=True)
class BoundaryPoint:
    position: Point
    tangent: tuple[float, float]   # unit (dx/ds, dy/ds)
    weight: float                  # x^(2 alpha) y^(2 beta)


def _check_index(i: int):
    if i not in SOLUTION_INDICES:
        raise InvalidParamsError(f"solution index must be in {SOLUTION_INDICES}")


def _family(i: int, params: Params):
    """(a, b1, b2, c1, c2, p, q) of solution i; p, q are the axis-weight powers."""
    al, be = params.alpha, params.beta
    if i == 1:
        b1, b2, p, q = al, be, 0.0, 0.0
    elif i == 2:
        b1, b2, p, q = 1.0 - al, be, 1.0 - 2.0 * al, 0.0
    elif i == 3:
        b1, b2, p, q = al, 1.0 - be, 0.0, 1.0 - 2.0 * be
    else:
        b1, b2, p, q = 1.0 - al, 1.0 - be, 1.0 - 2.0 * al, 1.0 - 2.0 * be
    return b1 + b2, b1, b2, 2.0 * b1, 2.0 * b2, p, q


def normalization_constant(i: int, params: Params) -> float:
    """k_i = 4^(b1+b2)/(4 pi) G(b1) G(b2) G(b1+b2) / (G(2 b1) G(2 b2))."""
    _check_index(i)
    a, b1, b2, _, _, _, _ = _family(i, params)
    lg = (float(_gammaln(b1)) + float(_gammaln(b2)) + float(_gammaln(a))
          - float(_gammaln(2.0 * b1)) - float(_gammaln(2.0 * b2)))
    return math.exp((2.0 * a) * math.log(2.0) + lg) / (4.0 * math.pi)


def geom_quantities(p: Point, p0: Point) -> GeomQuantities:
    """Squared distances to the source and its two axis reflections, and the
    transformed arguments xi = (r^2 - r1^2)/r^2, eta = (r^2 - r2^2)/r^2."""
    dx, dy = p.x - p0.x, p.y - p0.y
    r_sq = dx * dx + dy * dy
    if r_sq == 0.0:
        raise CoincidentPointsError("field point coincides with the source point")
    sx, sy = p.x + p0.x, p.y + p0.y
    r1_sq = sx * sx + dy * dy
    r2_sq = dx * dx + sy * sy
    # 4 x x0 / r^2 and 4 y y0 / r^2, formed without cancellation
    xi = -4.0 * p.x * p0.x / r_sq
    eta = -4.0 * p.y * p0.y / r_sq
    return GeomQuantities(r_sq, r1_sq, r2_sq, xi, eta)


def _too_close(g: GeomQuantities) -> bool:
    return g.r_sq < _NEAR_DIAGONAL_FLOOR * max(g.r1_sq, g.r2_sq)


def fundamental_solution(i: int, p: Point, p0: Point, params: Params,
                         rel_tol: float = 1e-12) -> float:
    """q_i(p; p0); symmetric in the two points."""
    _check_index(i)
    g = geom_quantities(p, p0)
    a, b1, b2, c1, c2, pw, qw = _family(i, params)
    f2 = appell_f2_raw(a, b1, b2, c1, c2, g.xi, g.eta, rel_tol)
    k = normalization_constant(i, params)
    val = k * math.exp(-a * math.log(g.r_sq)) * f2
    if pw != 0.0:
        val *= (p.x * p0.x) ** pw
    if qw != 0.0:
        val *= (p.y * p0.y) ** qw
    return val


def gradient(i: int, p: Point, p0: Point, params: Params,
             rel_tol: float = 1e-12) -> tuple[float, float]:
    """(d q_i / dx, d q_i / dy) at p, source held at p0."""
    _check_index(i)
    g = geom_quantities(p, p0)
    if _too_close(g):
        raise CoincidentPointsError("points too close for a stable kernel value")
    a, b1, b2, c1, c2, pw, qw = _family(i, params)
    k = normalization_constant(i, params)
    X = 1.0
    if pw != 0.0:
        X *= (p.x * p0.x) ** pw
    if qw != 0.0:
        X *= (p.y * p0.y) ** qw
    f2_main = appell_f2_raw(a + 1.0, b1, b2, c1, c2, g.xi, g.eta, rel_tol)
    f2_xi = appell_f2_raw(a + 1.0, b1 + 1.0, b2, c1 + 1.0, c2, g.xi, g.eta, rel_tol)
    f2_eta = appell_f2_raw(a + 1.0, b1, b2 + 1.0, c1, c2 + 1.0, g.xi, g.eta, rel_tol)
    r2a1 = math.exp(-(a + 1.0) * math.log(g.r_sq))
    common = -2.0 * a * k * X * r2a1
    gx = common * (p0.x * f2_xi + (p.x - p0.x) * f2_main)
    gy = common * (p0.y * f2_eta + (p.y - p0.y) * f2_main)
    if pw != 0.0 or qw != 0.0:
        f2_base = appell_f2_raw(a, b1, b2, c1, c2, g.xi, g.eta, rel_tol)
        r2a = math.exp(-a * math.log(g.r_sq))
        if pw != 0.0:
            gx += pw * k * (X / p.x) * r2a * f2_base
        if qw != 0.0:
            gy += qw * k * (X / p.y) * r2a * f2_base
    return gx, gy


def normal_derivative(i: int, bp: BoundaryPoint, p0: Point, params: Params,
                      rel_tol: float = 1e-12) -> float:
    """d q_i / dn at the boundary point, n = (dy/ds, -dx/ds) exterior."""
    gx, gy = gradient(i, bp.position, p0, params, rel_tol)
    dxds, dyds = bp.tangent
    return dyds * gx - dxds * gy


def boundary_point(curve: Curve, t: float, params: Params) -> BoundaryPoint:
    pt = curve.position(t)
    tan = curve.unit_tangent(t)
    w = pt.x ** (2.0 * params.alpha) * pt.y ** (2.0 * params.beta)
    return BoundaryPoint(pt, tan, w)


def kernel(i: int, curve: Curve, s_param: float, t_param: float,
           params: Params, rel_tol: float = 1e-12) -> float:
    """Arclength kernel K_i(s, t) = w(s) dq_i[x(s), y(s); x0(t), y0(t)]/dn;
    s_param and t_param are curve parameters in [0, 1]."""
    bp = boundary_point(curve, s_param, params)
    p0 = curve.position(t_param)
    return bp.weight * normal_derivative(i, bp, p0, params, rel_tol)


def bound_envelope(i: int, p: Point, p0: Point, params: Params,
                   rel_tol: float = 1e-12) -> float:
    """Right-hand side of the printed majorant inequality for |q_i|:

    k_i G(c1) G(c2) / G(a)^2 * X * (r1^2)^(-b1) (r2^2)^(-b2)
        * F(b1, b2; a; (1 - r^2/r1^2)(1 - r^2/r2^2)).
    """
    _check_index(i)
    g = geom_quantities(p, p0)
    a, b1, b2, c1, c2, pw, qw = _family(i, params)
    z = (4.0 * p.x * p0.x / g.r1_sq) * (4.0 * p.y * p0.y / g.r2_sq)
    if not (0.0 <= z < 1.0):
        raise InvalidParamsError("envelope argument must lie in [0, 1)")
    k = normalization_constant(i, params)
    lg = (float(_gammaln(c1)) + float(_gammaln(c2)) - 2.0 * float(_gammaln(a)))
    val = (k * math.exp(lg)
           * math.exp(-b1 * math.log(g.r1_sq) - b2 * math.log(g.r2_sq))
           * _hyp2f1(b1, b2, a, z, rel_tol, 10 ** 6))
    if pw != 0.0:
        val *= (p.x * p0.x) ** pw
    if qw != 0.0:
        val *= (p.y * p0.y) ** qw
    return val


def pde_residual(u, p: Point, params: Params, h: float) -> float:
    """Five-point central-difference value of
    u_xx + u_yy + (2 alpha / x) u_x + (2 beta / y) u_y at p."""
    x, y = p.x, p.y
    uc = u(x, y)
    uxp, uxm = u(x + h, y), u(x - h, y)
    uyp, uym = u(x, y + h), u(x, y - h)
    uxx = (uxp - 2.0 * uc + uxm) / (h * h)
    uyy = (uyp - 2.0 * uc + uym) / (h * h)
    ux = (uxp - uxm) / (2.0 * h)
    uy = (uyp - uym) / (2.0 * h)
    return uxx + uyy + 2.0 * params.alpha / x * ux + 2.0 * params.beta / y * uy
