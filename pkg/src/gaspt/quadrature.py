"""One-dimensional adaptive and graded-panel quadrature.

Handles the integrals this package needs: smooth integrands, integrable
algebraic endpoint weights, logarithmic singularities at known points, and
absolutely integrable functions on the whole line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from heapq import heappush, heappop
from typing import Callable, NamedTuple

import numpy as np

from .errors import InvalidParamsError

__all__ = ["QuadConfig", "QuadResult", "integrate", "integrate_singular",
           "integrate_halfline_decay"]


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_panels: int = 4000
    grading_exponent: float = 3.0
    nodes_per_panel: int = 16

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise InvalidParamsError("quadrature tolerances must be positive")
        if self.max_panels < 1 or self.nodes_per_panel < 2:
            raise InvalidParamsError("max_panels >= 1 and nodes_per_panel >= 2 required")
        if self.grading_exponent < 1.0:
            raise InvalidParamsError("grading_exponent must be >= 1")


DEFAULT_QUAD = QuadConfig()


class QuadResult(NamedTuple):
    value: float
    err_estimate: float
    evals: int
    converged: bool


@lru_cache(maxsize=32)
def _gl(n: int):
    return np.polynomial.legendre.leggauss(n)


def _panel_eval(f, lo, hi, n):
    """Gauss-Legendre value with the embedded half-order error estimate."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    xs, ws = _gl(n)
    vals = np.array([f(mid + half * x) for x in xs])
    v_full = half * float(ws @ vals)
    xs2, ws2 = _gl(max(2, n // 2))
    vals2 = np.array([f(mid + half * x) for x in xs2])
    v_half = half * float(ws2 @ vals2)
    return v_full, abs(v_full - v_half), len(xs) + len(xs2)


def integrate(f: Callable[[float], float], lo: float, hi: float,
              cfg: QuadConfig = DEFAULT_QUAD) -> QuadResult:
    """Adaptive bisection with fixed-order panels.

    The returned estimate is the sum of per-panel embedded estimates; when
    max_panels is exhausted the best value so far is returned with
    converged=False (a soft tolerance failure).
    """
    if not lo < hi:
        raise InvalidParamsError("integrate requires lo < hi")
    n = cfg.nodes_per_panel
    v, e, ne = _panel_eval(f, lo, hi, n)
    # heap of (-err, seq, lo, hi, value, err); seq makes ordering deterministic
    seq = 0
    heap = [(-e, seq, lo, hi, v, e)]
    total_v, total_e, evals = v, e, ne
    panels = 1
    while panels < cfg.max_panels:
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total_v))
        if total_e <= tol:
            break
        ne_, _, plo, phi, pv, pe = heappop(heap)
        mid = 0.5 * (plo + phi)
        v1, e1, n1 = _panel_eval(f, plo, mid, n)
        v2, e2, n2 = _panel_eval(f, mid, phi, n)
        evals += n1 + n2
        total_v += v1 + v2 - pv
        total_e += e1 + e2 - pe
        seq += 1
        heappush(heap, (-e1, seq, plo, mid, v1, e1))
        seq += 1
        heappush(heap, (-e2, seq, mid, phi, v2, e2))
        panels += 1
    pieces = sorted((item[2], item[4]) for item in heap)
    value = math.fsum(p[1] for p in pieces)
    err = math.fsum(abs(item[5]) for item in heap)
    ok = err <= max(cfg.abs_tol, cfg.rel_tol * abs(value))
    return QuadResult(value, err, evals, ok)


def _log_core(f, t_star, d, side):
    """Integral of f over the strip of width d next to t_star, from the
    two-parameter model f = c0 + c1*log|t - t_star| fitted just outside."""
    s = 1.0 if side > 0 else -1.0
    fa = f(t_star + s * d / 3.0)
    fb = f(t_star + s * 2.0 * d / 3.0)
    c1 = (fb - fa) / math.log(2.0)
    c0 = fa - c1 * math.log(d / 3.0)
    return d * c0 + c1 * d * (math.log(d) - 1.0), 2


def integrate_singular(f: Callable[[float], float], lo: float, hi: float,
                       t_star: float, cfg: QuadConfig = DEFAULT_QUAD,
                       core_radius: float | None = None) -> QuadResult:
    """Integrate across an (at worst) logarithmic singularity at t_star.

    Panels are graded geometrically toward t_star on both sides; the
    innermost strip of half-width core_radius is integrated with a fitted
    log model so the integrand is never sampled closer than core_radius/3.
    """
    if not lo < hi:
        raise InvalidParamsError("integrate_singular requires lo < hi")
    if not (lo <= t_star <= hi):
        raise InvalidParamsError("t_star must lie inside [lo, hi]")
    n = cfg.nodes_per_panel
    length = hi - lo
    if core_radius is None:
        core_radius = length * 2.0 ** -46
    values = []
    errs = []
    evals = 0
    for sgn, far in ((-1.0, lo), (1.0, hi)):
        span = abs(far - t_star)
        if span <= core_radius:
            continue
        d0 = min(core_radius, span)
        cv, ce = _log_core(f, t_star, d0, sgn)
        values.append(cv)
        evals += ce
        # geometric breakpoints from the core edge out to `far`
        bps = [d0]
        while bps[-1] < span:
            bps.append(min(2.0 * bps[-1], span))
        for (da, db) in zip(bps[:-1], bps[1:]):
            plo, phi = sorted((t_star + sgn * da, t_star + sgn * db))
            v, e, ne = _panel_eval(f, plo, phi, n)
            if e > max(cfg.abs_tol, cfg.rel_tol * abs(v)) and db - da > 1e-15 * length:
                sub = integrate(f, plo, phi, cfg)
                v, e, ne = sub.value, sub.err_estimate, sub.evals + ne
            values.append(v)
            errs.append(e)
            evals += ne
    value = math.fsum(values)
    err = math.fsum(errs)
    ok = err <= max(cfg.abs_tol, cfg.rel_tol * abs(value))
    return QuadResult(value, err, evals, ok)


def integrate_halfline_decay(f: Callable[[float], float],
                             cfg: QuadConfig = DEFAULT_QUAD) -> QuadResult:
    """Integral of f over the whole real line via t = tan(theta)."""

    def g(theta: float) -> float:
        t = math.tan(theta)
        c = math.cos(theta)
        return f(t) / (c * c)

    return integrate(g, -0.5 * math.pi, 0.5 * math.pi, cfg)
