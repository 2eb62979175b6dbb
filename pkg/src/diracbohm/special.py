"""Integer-order Bessel functions and generalized Laguerre polynomials.

Everything here is plain float64 arithmetic compiled with numba so the same
scalar kernels serve the public array API and the spinor kernels used during
trajectory integration.

Methods
-------
J_n   power series for x < 2, Miller downward recurrence otherwise
Y_0   power series for x < 2, Neumann series on the Miller sequence otherwise
Y_1   Wronskian for x < 2, differentiated Neumann series otherwise
I_n   power series (all terms positive)
K_0   power series for x <= 2, Steed continued fraction otherwise
K_1   Wronskian for x <= 2, Steed continued fraction otherwise

Higher Y and K orders come from upward recurrence, which is stable for both.
Negative orders use J_{-n} = (-1)^n J_n, Y_{-n} = (-1)^n Y_n, I_{-n} = I_n,
K_{-n} = K_n.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

EULER_GAMMA = 0.57721566490153286061
_TWO_OVER_PI = 2.0 / math.pi
_BIG = 1.0e250
_SMALL = 1.0e-250


# ---------------------------------------------------------------- Bessel J --

@njit(cache=True)
def _j_series(n, x):
    h = 0.5 * x
    term = 1.0
    for i in range(1, n + 1):
        term *= h / i
    if term == 0.0:
        return 0.0
    s = term
    q = -h * h
    for k in range(1, 300):
        term *= q / (k * (k + n))
        s += term
        if abs(term) <= 1e-17 * abs(s):
            break
    return s


@njit(cache=True)
def _miller_start(n, x):
    m = max(n, int(x)) + 20 + int(12.0 * x ** (1.0 / 3.0))
    return m + (m & 1)


@njit(cache=True)
def _j_miller(n, x):
    # downward recurrence from an even start order; normalised with
    # J_0 + 2 * sum J_2k = 1
    m = _miller_start(n, x)
    tox = 2.0 / x
    bjp = 0.0
    bj = 1.0
    norm = 0.0
    ans = 0.0
    for j in range(m, 0, -1):
        bjm = j * tox * bj - bjp
        bjp = bj
        bj = bjm
        if abs(bj) > _BIG:
            bj *= _SMALL
            bjp *= _SMALL
            ans *= _SMALL
            norm *= _SMALL
        # bj now holds J_{j-1}
        if j - 1 == n:
            ans = bj
        if (j - 1) % 2 == 0 and j - 1 > 0:
            norm += bj
    norm = 2.0 * norm + bj
    return ans / norm


@njit(cache=True)
def _jn(n, x):
    sign = 1.0
    if n < 0:
        n = -n
        if n & 1:
            sign = -1.0
    if x < 0.0:
        x = -x
        if n & 1:
            sign = -sign
    if x < 2.0:
        return sign * _j_series(n, x)
    return sign * _j_miller(n, x)


# ---------------------------------------------------------------- Bessel Y --

@njit(cache=True)
def _y01_small(x):
    h = 0.5 * x
    q = h * h
    lg = math.log(h) + EULER_GAMMA
    j0 = _j_series(0, x)
    j1 = _j_series(1, x)
    s = 0.0
    term = 1.0
    harm = 0.0
    for k in range(1, 200):
        term *= q / (k * k)
        harm += 1.0 / k
        t = harm * term
        if k % 2 == 1:
            s += t
        else:
            s -= t
        if t <= 1e-17 * abs(s):
            break
    y0 = _TWO_OVER_PI * (lg * j0 + s)
    y1 = (j1 * y0 - _TWO_OVER_PI / x) / j0
    return y0, y1


@njit(cache=True)
def _y01_neumann(x):
    m = _miller_start(1, x)
    b = np.zeros(m + 2)
    b[m] = 1.0
    tox = 2.0 / x
    for j in range(m, 0, -1):
        b[j - 1] = j * tox * b[j] - b[j + 1]
        if abs(b[j - 1]) > _BIG:
            for i in range(j - 1, m + 1):
                b[i] *= _SMALL
    norm = b[0]
    for k in range(2, m + 1, 2):
        norm += 2.0 * b[k]
    lg = math.log(0.5 * x) + EULER_GAMMA
    s0 = 0.0
    s1 = 0.0
    sgn = -1.0
    for k in range(1, m // 2):
        s0 += sgn * b[2 * k] / k
        s1 += sgn * (b[2 * k - 1] - b[2 * k + 1]) / k
        sgn = -sgn
    j0 = b[0] / norm
    j1 = b[1] / norm
    y0 = _TWO_OVER_PI * (lg * j0) - 2.0 * _TWO_OVER_PI * s0 / norm
    y1 = -_TWO_OVER_PI * j0 / x + _TWO_OVER_PI * lg * j1 + _TWO_OVER_PI * s1 / norm
    return y0, y1


@njit(cache=True)
def _yn(n, x):
    if x <= 0.0:
        return np.nan
    sign = 1.0
    if n < 0:
        n = -n
        if n & 1:
            sign = -1.0
    if x < 2.0:
        y0, y1 = _y01_small(x)
    else:
        y0, y1 = _y01_neumann(x)
    if n == 0:
        return sign * y0
    tox = 2.0 / x
    for k in range(1, n):
        y0, y1 = y1, k * tox * y1 - y0
    return sign * y1


# ---------------------------------------------------------------- Bessel I --

@njit(cache=True)
def _in(n, x):
    if n < 0:
        n = -n
    sign = 1.0
    if x < 0.0:
        x = -x
        if n & 1:
            sign = -1.0
    h = 0.5 * x
    term = 1.0
    for i in range(1, n + 1):
        term *= h / i
    if term == 0.0:
        return 0.0
    s = term
    q = h * h
    for k in range(1, 1000):
        term *= q / (k * (k + n))
        s += term
        if term <= 1e-17 * s:
            break
    return sign * s


# ---------------------------------------------------------------- Bessel K --

@njit(cache=True)
def _k01_small(x):
    h = 0.5 * x
    q = h * h
    i0 = _in(0, x)
    i1 = _in(1, x)
    s = 0.0
    term = 1.0
    harm = 0.0
    for k in range(1, 200):
        term *= q / (k * k)
        harm += 1.0 / k
        t = harm * term
        s += t
        if t <= 1e-17 * s:
            break
    k0 = -(math.log(h) + EULER_GAMMA) * i0 + s
    k1 = (1.0 / x - i1 * k0) / i0
    return k0, k1


@njit(cache=True)
def _k01_steed(x):
    # continued fraction CF2 (Steed's algorithm, Temme's normalisation) at
    # order zero; valid for x >= 2
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25
    q = a1
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, 10000):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-17:
            break
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


@njit(cache=True)
def _kn(n, x):
    if x <= 0.0:
        return np.nan
    if n < 0:
        n = -n
    if x <= 2.0:
        k0, k1 = _k01_small(x)
    else:
        k0, k1 = _k01_steed(x)
    if n == 0:
        return k0
    tox = 2.0 / x
    for k in range(1, n):
        k0, k1 = k1, k0 + k * tox * k1
    return k1


# ---------------------------------------------------------------- Laguerre --

@njit(cache=True)
def _laguerre(n, mu, x):
    if n == 0:
        return 1.0
    lm = 1.0
    lc = 1.0 + mu - x
    for j in range(1, n):
        lm, lc = lc, ((2 * j + 1 + mu - x) * lc - (j + mu) * lm) / (j + 1)
    return lc


def laguerre_coefficients(n: int, mu: int) -> np.ndarray:
    """Power-series coefficients c[i] of L_n^mu(x) = sum_i c[i] x**i."""
    if n < 0:
        raise ValueError("Laguerre degree must be non-negative")
    c = np.empty(n + 1)
    for i in range(n + 1):
        c[i] = (-1) ** i * math.comb(n + mu, n - i) / math.factorial(i)
    return c


# ---------------------------------------------------------------- array API --

@njit(cache=True)
def _apply(kind, n, x):
    out = np.empty(x.size)
    for i in range(x.size):
        xi = x[i]
        if kind == 0:
            out[i] = _jn(n, xi)
        elif kind == 1:
            out[i] = _yn(n, xi)
        elif kind == 2:
            out[i] = _in(n, xi)
        else:
            out[i] = _kn(n, xi)
    return out


_KINDS = {"J": 0, "Y": 1, "I": 2, "K": 3}


def bessel(kind: str, order: int, x):
    """Bessel function of integer order.

    ``kind`` is one of ``"J"``, ``"Y"``, ``"I"``, ``"K"``. ``x`` may be a scalar
    or an array; Y and K require x > 0 and raise ``ValueError`` otherwise.
    """
    try:
        code = _KINDS[kind.upper()]
    except KeyError:
        raise ValueError(f"unknown Bessel kind {kind!r}") from None
    if int(order) != order:
        raise ValueError("only integer orders are supported")
    arr = np.asarray(x, dtype=np.float64)
    if code in (1, 3) and np.any(arr <= 0.0):
        raise ValueError(f"Bessel {kind} requires x > 0")
    out = _apply(code, int(order), np.ascontiguousarray(arr).ravel())
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def laguerre(n: int, mu: int, x):
    """Generalized Laguerre polynomial L_n^mu(x) by three-term recurrence."""
    if n < 0:
        raise ValueError("Laguerre degree must be non-negative")
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        return float(_laguerre(n, mu, float(arr)))
    flat = np.array([_laguerre(n, mu, v) for v in arr.ravel()])
    return flat.reshape(arr.shape)
