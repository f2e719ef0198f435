"""Special-function core: Pochhammer, digamma, Gauss 2F1, and Appell F2.

The F2 evaluator accepts the union of the double-series region |x|+|y| < 1
and the closed third quadrant x <= 0, y <= 0.  Inside the quadrant it
dispatches between the direct double series, a product-of-2F1 expansion,
one-variable Taylor forms, a large-argument asymptotic series, and a
single Euler integral, so that evaluation stays fast and accurate
arbitrarily deep into the quadrant (arguments of magnitude 1e300 are fine).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln as _gammaln, gammasgn as _gammasgn
from scipy.special import psi as _psi, rgamma as _rgamma

from .errors import InvalidParamsError, NonConvergentError, OutOfRegionError

__all__ = [
    "SeriesControl",
    "HypergeometricParams",
    "pochhammer",
    "digamma",
    "gauss_2f1",
    "gauss_2f1_at_one",
    "gauss_2f1_log_case",
    "appell_f2_direct",
    "appell_f2",
    "appell_f2_deriv",
]

_DIRECT_F2_LIMIT = 0.9     # |x|+|y| threshold for the double series
_TAYLOR_LIMIT = 0.9        # single-variable Taylor when the smaller |arg| is below this
_ASYM_MIN = 4.0            # large-argument expansion needs the big argument >= this
_ASYM_RATIO_INV = 0.3      # ... with (1+small)/big at most this (series ratio)
_ASYM_SMALL_MAX = 1e9      # ... and the small argument below this (overflow guard)
_PROD_W_LIMIT = 0.9        # product-series branch while uv <= this
_DIRECT_2F1_LIMIT = 0.75   # direct 2F1 series for z below this, connection formula above


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for all series in this module."""

    rel_tol: float = 1e-12
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not (self.rel_tol > 0.0):
            raise InvalidParamsError("rel_tol must be positive")
        if self.max_terms < 1:
            raise InvalidParamsError("max_terms must be >= 1")


DEFAULT_CONTROL = SeriesControl()


def _is_nonpositive_int(x: float, tol: float = 1e-12) -> bool:
    return x <= 0.5 and abs(x - round(x)) < tol


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameter tuple (a; b1, b2; c1, c2) of the Appell F2 series."""

    a: float
    b1: float
    b2: float
    c1: float
    c2: float

    def __post_init__(self):
        for c in (self.c1, self.c2):
            if _is_nonpositive_int(c):
                raise InvalidParamsError(
                    "denominator parameters must not be zero or negative integers"
                )

    def shifted(self, m: int, n: int) -> "HypergeometricParams":
        return HypergeometricParams(
            self.a + m + n, self.b1 + m, self.b2 + n, self.c1 + m, self.c2 + n
        )


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n as the explicit product; exact 1.0 for n = 0."""
    if n < 0:
        raise InvalidParamsError("pochhammer order must be nonnegative")
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


def digamma(x: float) -> float:
    """Digamma function; raises at the poles 0, -1, -2, ..."""
    if _is_nonpositive_int(x):
        raise InvalidParamsError(f"digamma pole at x = {x}")
    return float(_psi(x))


def _gamma_signed(z: float) -> float:
    """Gamma(z) for any non-pole real z, computed via log-gamma."""
    return float(_gammasgn(z)) * math.exp(float(_gammaln(z)))


def _rg(z: float) -> float:
    """1/Gamma(z); zero at the poles, which switches off degenerate branches."""
    return float(_rgamma(z))


# ---------------------------------------------------------------------------
# Gauss 2F1
# ---------------------------------------------------------------------------

def _hyp2f1_direct(a: float, b: float, c: float, z: float,
                   rel_tol: float, max_terms: int) -> float:
    """Plain power series; caller guarantees |z| below ~0.8 or termination."""
    term = 1.0
    total = 1.0
    small = 0
    k = 0
    while k < max_terms:
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        k += 1
        if abs(term) <= rel_tol * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NonConvergentError("2F1 series did not converge")


def _hyp2f1_near1(a: float, b: float, c: float, zh: float,
                  rel_tol: float, max_terms: int) -> float:
    """F(a,b;c;1-zh) for small zh > 0 via the z -> 1-z connection formulas."""
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        # terminating series; sum it directly at z = 1-zh
        return _hyp2f1_direct(a, b, c, 1.0 - zh, rel_tol, max_terms)
    nu = c - a - b
    L = math.log(zh)
    if abs(nu - round(nu)) > 1e-9:
        # generic two-branch connection
        t1 = (_gamma_signed(c) * _gamma_signed(nu) * _rg(c - a) * _rg(c - b)
              * _hyp2f1_direct(a, b, 1.0 - nu, zh, rel_tol, max_terms))
        t2 = (math.exp(nu * L) * _gamma_signed(c) * _gamma_signed(-nu)
              * _rg(a) * _rg(b)
              * _hyp2f1_direct(c - a, c - b, 1.0 + nu, zh, rel_tol, max_terms))
        return t1 + t2
    M = int(round(nu))
    if M == 0:
        # c = a+b: logarithmic expansion
        pref = _gamma_signed(c) * _rg(a) * _rg(b)
        coef = 1.0
        dpa, dpb, dp1 = float(_psi(a)), float(_psi(b)), float(_psi(1.0))
        total = 0.0
        small = 0
        for k in range(max_terms):
            total += coef * (2.0 * dp1 - dpa - dpb - L)
            step = abs(coef)
            dp1 += 1.0 / (k + 1.0)
            dpa += 1.0 / (a + k)
            dpb += 1.0 / (b + k)
            coef *= (a + k) * (b + k) / ((k + 1.0) ** 2) * zh
            if step <= rel_tol * abs(total) * 0.1:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
        else:
            raise NonConvergentError("2F1 log-case series did not converge")
        return pref * total
    if M > 0:
        # c = a+b+M
        s1 = 0.0
        coef = 1.0
        for k in range(M):
            s1 += coef
            if k + 1 < M:
                coef *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - M + k)) * zh
        s1 *= _gamma_signed(M) * _gamma_signed(c) * _rg(a + M) * _rg(b + M)
        coef = 1.0 / math.gamma(M + 1.0)
        dpa, dpb = float(_psi(a + M)), float(_psi(b + M))
        dp1, dpM = float(_psi(1.0)), float(_psi(M + 1.0))
        s2 = 0.0
        small = 0
        for k in range(max_terms):
            s2 += coef * (L - dp1 - dpM + dpa + dpb)
            step = abs(coef)
            dp1 += 1.0 / (k + 1.0)
            dpM += 1.0 / (k + M + 1.0)
            dpa += 1.0 / (a + M + k)
            dpb += 1.0 / (b + M + k)
            coef *= (a + M + k) * (b + M + k) / ((k + 1.0) * (k + M + 1.0)) * zh
            if step <= rel_tol * max(abs(s2), 1e-300) * 0.1:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
        else:
            raise NonConvergentError("2F1 log-case series did not converge")
        s2 *= -((-zh) ** M) * _gamma_signed(c) * _rg(a) * _rg(b)
        return s1 + s2
    # c = a+b-M with M = -nu > 0
    M = -M
    s1 = 0.0
    coef = 1.0
    for k in range(M):
        s1 += coef
        if k + 1 < M:
            coef *= (a - M + k) * (b - M + k) / ((k + 1.0) * (1.0 - M + k)) * zh
    s1 *= (_gamma_signed(M) * _gamma_signed(c) * _rg(a) * _rg(b)
           * math.exp(-M * L))
    coef = 1.0 / math.gamma(M + 1.0)
    dpa, dpb = float(_psi(a)), float(_psi(b))
    dp1, dpM = float(_psi(1.0)), float(_psi(M + 1.0))
    s2 = 0.0
    small = 0
    for k in range(max_terms):
        s2 += coef * (L - dp1 - dpM + dpa + dpb)
        step = abs(coef)
        dp1 += 1.0 / (k + 1.0)
        dpM += 1.0 / (k + M + 1.0)
        dpa += 1.0 / (a + k)
        dpb += 1.0 / (b + k)
        coef *= (a + k) * (b + k) / ((k + 1.0) * (k + M + 1.0)) * zh
        if step <= rel_tol * max(abs(s2), 1e-300) * 0.1:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    else:
        raise NonConvergentError("2F1 log-case series did not converge")
    s2 *= -((-1.0) ** M) * _gamma_signed(c) * _rg(a - M) * _rg(b - M)
    return s1 + s2


def _hyp2f1_pos(a: float, b: float, c: float, z: float,
                rel_tol: float, max_terms: int, zh: float | None = None) -> float:
    """F(a,b;c;z) for z in [0, 1); zh is an exactly-computed 1-z if available."""
    if z <= _DIRECT_2F1_LIMIT:
        return _hyp2f1_direct(a, b, c, z, rel_tol, max_terms)
    return _hyp2f1_near1(a, b, c, 1.0 - z if zh is None else zh,
                         rel_tol, max_terms)


def _hyp2f1(a: float, b: float, c: float, z: float,
            rel_tol: float, max_terms: int) -> float:
    """F(a,b;c;z) for any real z < 1."""
    if z == 0.0:
        return 1.0
    if z < 0.0:
        # Pfaff: F(a,b;c;z) = (1-z)^(-b) F(c-a, b; c; z/(z-1));
        # 1 - z/(z-1) = 1/(1-z) is formed directly (no cancellation at z -> -inf)
        u = z / (z - 1.0)
        return math.exp(-b * math.log1p(-z)) * _hyp2f1_pos(
            c - a, b, c, u, rel_tol, max_terms, zh=1.0 / (1.0 - z))
    return _hyp2f1_pos(a, b, c, z, rel_tol, max_terms)


def _hyp3f2(a1: float, a2: float, a3: float, b1: float, b2: float,
            z: float, rel_tol: float, max_terms: int) -> float:
    """3F2 power series; |z| < 1 required."""
    term = 1.0
    total = 1.0
    small = 0
    k = 0
    while k < max_terms:
        term *= ((a1 + k) * (a2 + k) * (a3 + k)
                 / ((b1 + k) * (b2 + k) * (k + 1.0)) * z)
        total += term
        k += 1
        if abs(term) <= rel_tol * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NonConvergentError("3F2 series did not converge")


def gauss_2f1(a: float, b: float, c: float, z: float,
              ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Gauss hypergeometric F(a,b;c;z) for real z < 1.

    Direct summation on [0, 0.75); the Pfaff transformation maps z < 0 to
    (0,1); the connection formulas cover z close to 1.
    """
    if _is_nonpositive_int(c):
        raise InvalidParamsError("c must not be zero or a negative integer")
    if not z < 1.0:
        raise InvalidParamsError("gauss_2f1 requires z < 1")
    return _hyp2f1(a, b, c, z, ctrl.rel_tol, ctrl.max_terms)


def gauss_2f1_at_one(a: float, b: float, c: float) -> float:
    """Gauss summation F(a,b;c;1) = G(c)G(c-a-b)/(G(c-a)G(c-b))."""
    if _is_nonpositive_int(c):
        raise InvalidParamsError("c must not be zero or a negative integer")
    if not c - a - b > 0.0:
        raise InvalidParamsError("Gauss summation requires c - a - b > 0")
    sign = (_gammasgn(c) * _gammasgn(c - a - b)
            * _gammasgn(c - a) * _gammasgn(c - b))
    lg = (float(_gammaln(c)) + float(_gammaln(c - a - b))
          - float(_gammaln(c - a)) - float(_gammaln(c - b)))
    return float(sign) * math.exp(lg)


def gauss_2f1_log_case(a: float, b: float, z: float,
                       ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """F(a,b;a+b;z) near z = 1 through the logarithmic expansion."""
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        raise InvalidParamsError("a and b must not be zero or negative integers")
    if not (0.0 < 1.0 - z < 0.5):
        raise InvalidParamsError("log-case expansion requires z in (0.5, 1)")
    return _hyp2f1_near1(a, b, a + b, 1.0 - z, ctrl.rel_tol, ctrl.max_terms)


# ---------------------------------------------------------------------------
# Vectorized 2F1 helpers (parameter or argument arrays)
# ---------------------------------------------------------------------------

def _hyp2f1_direct_vec(A, B, C, z, rel_tol, kmax=600):
    """Series of F(A,B;C;z) broadcast over parameter/argument arrays."""
    A, B, C, z = np.broadcast_arrays(
        np.asarray(A, float), np.asarray(B, float),
        np.asarray(C, float), np.asarray(z, float))
    total = np.ones(A.shape)
    term = np.ones(A.shape)
    small = 0
    for k in range(kmax):
        term = term * (A + k) * (B + k) / ((C + k) * (k + 1.0)) * z
        total += term
        if np.all(np.abs(term) <= rel_tol * np.maximum(np.abs(total), 1e-300)):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NonConvergentError("vectorized 2F1 series did not converge")


def _lg(x):
    return _gammaln(np.asarray(x, float))


def _sg(x):
    return _gammasgn(np.asarray(x, float))


def _hyp2f1_near1_vec(A, B, C, zh, rel_tol, kmax=200):
    """F(A,B;C;1-zh) vectorized; requires nu = C-A-B bounded away from integers."""
    A, B, C, zh = np.broadcast_arrays(
        np.asarray(A, float), np.asarray(B, float),
        np.asarray(C, float), np.asarray(zh, float))
    nu = C - A - B
    if np.any(np.abs(nu - np.round(nu)) < 1e-9):
        # rare generic-parameter case: scalar fallback
        flat = [
            _hyp2f1_near1(float(ai), float(bi), float(ci), float(zi),
                          rel_tol, 10 ** 6)
            for ai, bi, ci, zi in zip(A.ravel(), B.ravel(), C.ravel(), zh.ravel())
        ]
        return np.array(flat).reshape(A.shape)
    c1 = (_sg(C) * _sg(nu) * _sg(C - A) * _sg(C - B)
          * np.exp(_lg(C) + _lg(nu) - _lg(C - A) - _lg(C - B)))
    c2 = (_sg(C) * _sg(-nu) * _sg(A) * _sg(B)
          * np.exp(_lg(C) + _lg(-nu) - _lg(A) - _lg(B)))
    zh = np.maximum(zh, 1e-300)  # z rounded to exactly 1 stays finite
    s1 = _hyp2f1_direct_vec(A, B, 1.0 - nu, zh, rel_tol, kmax)
    s2 = _hyp2f1_direct_vec(C - A, C - B, 1.0 + nu, zh, rel_tol, kmax)
    return c1 * s1 + np.exp(nu * np.log(zh)) * c2 * s2


def _hyp2f1_vec(A, B, C, z, rel_tol, zh=None):
    """F(A,B;C;z) broadcast, any z < 1 (elementwise Pfaff + dispatch).

    zh optionally supplies exactly-computed 1-z for z in [0,1) callers whose
    arguments are themselves Pfaff images (avoids cancellation near z = 1).
    """
    A, B, C, z = np.broadcast_arrays(
        np.asarray(A, float), np.asarray(B, float),
        np.asarray(C, float), np.asarray(z, float))
    out = np.empty(A.shape)
    neg = z < 0.0
    Aw = np.where(neg, C - A, A)
    zw = np.where(neg, z / (z - 1.0), z)
    if zh is None:
        zhw = np.where(neg, 1.0 / (1.0 - z), 1.0 - zw)
    else:
        zhw = np.broadcast_to(np.asarray(zh, float), A.shape)
    pref = np.where(neg, np.exp(-B * np.log1p(np.where(neg, -z, 0.0))), 1.0)
    lo = zw <= _DIRECT_2F1_LIMIT
    if np.any(lo):
        out[lo] = _hyp2f1_direct_vec(Aw[lo], B[lo], C[lo], zw[lo], rel_tol)
    hi = ~lo
    if np.any(hi):
        out[hi] = _hyp2f1_near1_vec(Aw[hi], B[hi], C[hi], zhw[hi], rel_tol)
    return pref * out


# ---------------------------------------------------------------------------
# Appell F2
# ---------------------------------------------------------------------------

def _f2_direct(a, b1, b2, c1, c2, x, y, rel_tol, max_terms):
    """Double series summed by total degree; |x|+|y| < 1 required."""
    rho = abs(x) + abs(y)
    if rho == 0.0:
        return 1.0
    # crude block-count estimate, then verified by the stopping rule
    nmax = int(min(40 + 8.0 * math.log(rel_tol * 0.01) / math.log(rho + 1e-300) * 1.0
                   if rho > 1e-12 else 8,
                   math.isqrt(2 * max_terms) + 2))
    nmax = max(nmax, 8)
    row = np.array([1.0])  # terms of total degree N, indexed by m
    total = 1.0
    small = 0
    for N in range(1, nmax + 1):
        new = np.empty(N + 1)
        n_prev = N - 1 - np.arange(N)
        new[:N] = (row * (a + N - 1) * (b2 + n_prev) * y
                   / ((c2 + n_prev) * (n_prev + 1.0)))
        new[N] = (row[N - 1] * (a + N - 1) * (b1 + N - 1) * x
                  / ((c1 + N - 1) * N))
        blk = float(new.sum())
        total += blk
        row = new
        if abs(blk) <= rel_tol * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NonConvergentError("F2 double series did not converge")


def _f2_taylor_small(a, b1, b2, c1, c2, x, y, rel_tol, max_terms):
    """Expansion in powers of y (|y| <= ~0.9), 2F1 factors in x; x <= 0."""
    if y == 0.0:
        return _hyp2f1(a, b1, c1, x, rel_tol, max_terms)
    nmax = max(12, int(1.2 * math.log(0.01 * rel_tol) / math.log(abs(y))) + 6)
    narr = np.arange(nmax + 1, dtype=float)
    # coefficients (a)_n (b2)_n / ((c2)_n n!) y^n
    steps = np.ones(nmax + 1)
    steps[1:] = (a + narr[:-1]) * (b2 + narr[:-1]) * y / ((c2 + narr[:-1]) * narr[1:])
    coef = np.cumprod(steps)
    f = _hyp2f1_vec(a + narr, np.full(nmax + 1, b1), np.full(nmax + 1, c1),
                    np.full(nmax + 1, x), rel_tol)
    terms = coef * f
    total = float(terms.sum())
    tail = np.abs(terms[-3:]).max()
    if tail > 10.0 * rel_tol * abs(total):
        raise NonConvergentError("F2 small-argument expansion did not converge")
    return total


def _f2_asym_large(a, b1, b2, c1, c2, x, y, rel_tol, max_terms):
    """Expansion for y -> -inf with |y| >= max(4, 2|x|): two descending series."""
    my = -y
    KB = _gamma_signed(c2) * _gamma_signed(a - b2) * _rg(a) * _rg(c2 - b2)
    TB = 0.0
    coef = 1.0
    small = 0
    for j in range(200):
        term = coef * _hyp2f1(a - b2 - j, b1, c1, x, rel_tol, max_terms)
        TB += term
        coef *= ((b2 + j) * (b2 - c2 + 1.0 + j)
                 / ((b2 - a + 1.0 + j) * (j + 1.0)) / y)
        if abs(term) <= 0.1 * rel_tol * abs(TB):
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    else:
        raise NonConvergentError("F2 large-argument series did not converge")
    TB *= math.exp(-b2 * math.log(my)) * KB
    KA = _gamma_signed(c2) * _gamma_signed(b2 - a) * _rg(b2) * _rg(c2 - a)
    TA = 0.0
    if KA != 0.0:
        zeta = x / my
        coef = 1.0
        small = 0
        for j in range(200):
            term = coef * _hyp3f2(a + j, b1, a - c2 + 1.0 + j,
                                  c1, a - b2 + 1.0 + j, zeta,
                                  rel_tol, max_terms)
            TA += term
            coef *= ((a + j) * (a - c2 + 1.0 + j)
                     / ((a - b2 + 1.0 + j) * (j + 1.0)) / y)
            if abs(term) <= 0.1 * rel_tol * max(abs(TA), 1e-300):
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
        else:
            raise NonConvergentError("F2 large-argument series did not converge")
        TA *= math.exp(-a * math.log(my)) * KA
    return TA + TB


def _f2_prodseries(a, b1, b2, c1, c2, x, y, rel_tol, max_terms):
    """Product-of-2F1 expansion over a single index; x, y <= 0.

    F2 = (1-x)^(-b1) (1-y)^(-b2) sum_i D_i (uv)^i
         F(c1-a, b1+i; c1+i; u) F(c2-a, b2+i; c2+i; v)
    with u = x/(x-1), v = y/(y-1).
    """
    u = x / (x - 1.0)
    v = y / (y - 1.0)
    uh = 1.0 / (1.0 - x)
    vh = 1.0 / (1.0 - y)
    w = u * v
    wh = uh + vh - uh * vh  # 1 - uv, cancellation-free
    if wh <= 0.0:
        raise NonConvergentError("product expansion requires uv < 1")
    nmax = 24 if w == 0.0 else int(max(24, -1.3 * math.log(0.001 * rel_tol) / wh) + 8)
    if nmax > 80000:
        raise NonConvergentError("product expansion would need too many terms")
    iarr = np.arange(nmax + 1, dtype=float)
    steps = np.ones(nmax + 1)
    steps[1:] = ((a + iarr[:-1]) * (b1 + iarr[:-1]) * (b2 + iarr[:-1]) * w
                 / ((c1 + iarr[:-1]) * (c2 + iarr[:-1]) * iarr[1:]))
    coef = np.cumprod(steps)
    f1 = _hyp2f1_vec(np.full(nmax + 1, c1 - a), b1 + iarr, c1 + iarr,
                     np.full(nmax + 1, u), rel_tol, zh=1.0 / (1.0 - x))
    f2 = _hyp2f1_vec(np.full(nmax + 1, c2 - a), b2 + iarr, c2 + iarr,
                     np.full(nmax + 1, v), rel_tol, zh=1.0 / (1.0 - y))
    terms = coef * f1 * f2
    total = float(terms.sum())
    tail = np.abs(terms[-3:]).max()
    if tail > 10.0 * rel_tol * abs(total):
        raise NonConvergentError("F2 product expansion did not converge")
    return (math.exp(-b1 * math.log1p(-x) - b2 * math.log1p(-y)) * total)


def _gl_cache(n):
    return _gl_cache_impl(n)


@lru_cache(maxsize=16)
def _gl_cache_impl(n):
    xs, ws = np.polynomial.legendre.leggauss(n)
    return xs, ws


def _f2_euler_nodes(b1, c1, X):
    """Panelized nodes/weights for int_0^1 t^(b1-1)(1-t)^(c1-b1-1) f(t) dt
    where f varies on scales down to 1/X near t = 0.

    Substituted coordinates tau = t^b1 and sigma = (1-t)^(c1-b1) absorb the
    algebraic endpoint factors; each end gets an analytic strip (a single
    pseudo-node carrying the strip measure) plus geometric panels, because
    t(tau) and t(sigma) have fractional-power corners at the origin.
    Returns (t, w) with all weight factors folded into w.
    """
    xs, ws = _gl_cache(16)
    cb = c1 - b1
    ts = [np.array([0.0, 1.0])]
    tau0 = min(0.25, 1e-3 / X) ** b1
    sig0 = 0.5 ** cb
    wts = [np.array([1e-8 * tau0 / b1, 1e-8 * sig0 / cb])]

    def add(lo, hi, to_t, to_w):
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        s = mid + half * xs
        t = to_t(s)
        ts.append(t)
        wts.append(ws * half * to_w(s, t))

    # left: tau in [tau0*1e-8, tau0], geometric, then t in [t0, 1/2] octaves
    lo = 1e-8 * tau0
    while lo < tau0:
        hi = min(2.0 * lo, tau0)
        add(lo, hi, lambda s: s ** (1.0 / b1),
            lambda s, t: (1.0 - t) ** (cb - 1.0) / b1)
        lo = hi
    lo = tau0 ** (1.0 / b1)
    while lo < 0.5:
        hi = min(2.0 * lo, 0.5)
        add(lo, hi, lambda s: s,
            lambda s, t: t ** (b1 - 1.0) * (1.0 - t) ** (cb - 1.0))
        lo = hi
    # right: sigma in [sig0*1e-8, sig0/2] geometric, then graded to sig0
    lo = 1e-8 * sig0
    while lo < 0.5 * sig0:
        hi = min(2.0 * lo, 0.5 * sig0)
        add(lo, hi, lambda s: 1.0 - s ** (1.0 / cb),
            lambda s, t: t ** (b1 - 1.0) / cb)
        lo = hi
    k = 2
    prev = 0.5 * sig0
    while k <= 16:
        nxt = sig0 * (1.0 - 2.0 ** (-k))
        add(prev, nxt, lambda s: 1.0 - s ** (1.0 / cb),
            lambda s, t: t ** (b1 - 1.0) / cb)
        prev = nxt
        k += 1
    add(prev, sig0, lambda s: 1.0 - s ** (1.0 / cb),
        lambda s, t: t ** (b1 - 1.0) / cb)
    return np.concatenate(ts), np.concatenate(wts)


def _f2_euler(a, b1, b2, c1, c2, x, y, rel_tol, max_terms):
    """Single Euler integral over the x-side; valid for all x, y <= 0.

    F2 = B(b1, c1-b1)^-1 int_0^1 t^(b1-1) (1-t)^(c1-b1-1) (1-xt)^(-a)
         F(a, b2; c2; y/(1-xt)) dt,   requires c1 > b1 > 0.
    """
    if not (b1 > 0.0 and c1 - b1 > 0.0):
        raise NonConvergentError(
            "Euler-integral route requires c1 > b1 > 0; "
            "arguments too deep for the series routes")
    t, wt = _f2_euler_nodes(b1, c1, max(-x, 2.0))
    base = 1.0 - x * t
    inner_z = y / base
    b2v = np.full(t.shape, b2)
    c2v = np.full(t.shape, c2)
    av = np.full(t.shape, a)
    f = _hyp2f1_vec(av, b2v, c2v, inner_z, rel_tol)
    vals = wt * np.exp(-a * np.log(base)) * f
    lnB = (float(_gammaln(b1)) + float(_gammaln(c1 - b1)) - float(_gammaln(c1)))
    return float(vals.sum()) * math.exp(-lnB)


def _f2_negative_quadrant(a, b1, b2, c1, c2, x, y, rel_tol, max_terms):
    """Dispatch for x <= 0, y <= 0 outside the direct-series disc."""
    X, Y = -x, -y
    if Y <= _TAYLOR_LIMIT and Y <= X:
        return _f2_taylor_small(a, b1, b2, c1, c2, x, y, rel_tol, max_terms)
    if X <= _TAYLOR_LIMIT:
        # mirror: swap the roles of the two variables
        return _f2_taylor_small(a, b2, b1, c2, c1, y, x, rel_tol, max_terms)
    if Y >= _ASYM_MIN and (1.0 + X) <= _ASYM_RATIO_INV * Y and X <= _ASYM_SMALL_MAX:
        return _f2_asym_large(a, b1, b2, c1, c2, x, y, rel_tol, max_terms)
    if X >= _ASYM_MIN and (1.0 + Y) <= _ASYM_RATIO_INV * X and Y <= _ASYM_SMALL_MAX:
        return _f2_asym_large(a, b2, b1, c2, c1, y, x, rel_tol, max_terms)
    w = (x / (x - 1.0)) * (y / (y - 1.0))
    if w <= _PROD_W_LIMIT:
        return _f2_prodseries(a, b1, b2, c1, c2, x, y, rel_tol, max_terms)
    if X >= Y:
        return _f2_euler(a, b1, b2, c1, c2, x, y, rel_tol, max_terms)
    return _f2_euler(a, b2, b1, c2, c1, y, x, rel_tol, max_terms)


def appell_f2_raw(a, b1, b2, c1, c2, x, y,
                  rel_tol=1e-12, max_terms=1_000_000):
    """F2(a; b1,b2; c1,c2; x,y) on {|x|+|y| < 1} union {x <= 0, y <= 0}."""
    if abs(x) + abs(y) <= _DIRECT_F2_LIMIT:
        return _f2_direct(a, b1, b2, c1, c2, x, y, rel_tol, max_terms)
    if x <= 0.0 and y <= 0.0:
        return _f2_negative_quadrant(a, b1, b2, c1, c2, x, y, rel_tol, max_terms)
    if abs(x) + abs(y) < 1.0:
        return _f2_direct(a, b1, b2, c1, c2, x, y, rel_tol, max_terms)
    raise OutOfRegionError(
        "appell_f2 supports |x|+|y| < 1 or the quadrant x <= 0, y <= 0")


def appell_f2_direct(hp: HypergeometricParams, x: float, y: float,
                     ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Double series (summed by total degree); requires |x| + |y| < 1."""
    if abs(x) + abs(y) >= 1.0:
        raise OutOfRegionError("direct F2 series requires |x| + |y| < 1")
    return _f2_direct(hp.a, hp.b1, hp.b2, hp.c1, hp.c2, x, y,
                      ctrl.rel_tol, ctrl.max_terms)


def appell_f2(hp: HypergeometricParams, x: float, y: float,
              ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Appell F2 on {|x|+|y| < 1} union {x <= 0, y <= 0}.

    The double series is summed directly when |x|+|y| <= 0.9; beyond that
    the product-of-2F1 expansion and its accelerated variants take over.
    """
    return appell_f2_raw(hp.a, hp.b1, hp.b2, hp.c1, hp.c2, x, y,
                         ctrl.rel_tol, ctrl.max_terms)


def appell_f2_deriv(hp: HypergeometricParams, m: int, n: int,
                    x: float, y: float,
                    ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Mixed partial d^(m+n) F2 / dx^m dy^n via the parameter-shift rule."""
    if m < 0 or n < 0:
        raise InvalidParamsError("derivative orders must be nonnegative")
    pref = (pochhammer(hp.a, m + n) * pochhammer(hp.b1, m) * pochhammer(hp.b2, n)
            / (pochhammer(hp.c1, m) * pochhammer(hp.c2, n)))
    return pref * appell_f2(hp.shifted(m, n), x, y, ctrl)
