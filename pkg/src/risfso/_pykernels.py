"""Pure numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` one-to-one and are used when the compiled
extension is unavailable or ``RISFSO_PURE_PYTHON=1`` is set.
"""

import numpy as np

LOG_PI = np.log(np.pi)
HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)

# B_{2k} / (2k (2k - 1)) for the Stirling tail, k = 1..8
_STIRLING = np.array([
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
])

_SHIFT_TO = 12.0


def _log_sin_pi(z):
    """log(sin(pi z)) without overflow for large |Im z| (branch unspecified)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    big_pos = z.imag > 20.0
    big_neg = z.imag < -20.0
    mid = ~(big_pos | big_neg)
    out[mid] = np.log(np.sin(np.pi * z[mid]))
    # sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; the dropped log1p term is below 1e-54
    out[big_pos] = -1j * np.pi * z[big_pos] - np.log(-2j)
    out[big_neg] = 1j * np.pi * z[big_neg] - np.log(2j)
    return out


def _stirling(z):
    inv = 1.0 / z
    inv2 = inv * inv
    series = np.zeros_like(z)
    for coef in _STIRLING[::-1]:
        series = series * inv2 + coef
    return (z - 0.5) * np.log(z) - z + HALF_LOG_2PI + series * inv


def clgamma(z):
    """Complex log-gamma, correct modulo 2*pi*i. Real part is log|Gamma(z)|."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    refl = z.real < 0.5
    if refl.any():
        zr = z[refl]
        out[refl] = LOG_PI - _log_sin_pi(zr) - _clgamma_right(1.0 - zr)
    if (~refl).any():
        out[~refl] = _clgamma_right(z[~refl])
    return out


def _clgamma_right(z):
    z = z.copy()
    prod = np.ones_like(z)
    small = np.abs(z) < _SHIFT_TO
    while small.any():
        prod[small] *= z[small]
        z[small] += 1.0
        small = np.abs(z) < _SHIFT_TO
    return _stirling(z) - np.log(prod)


def _terms(s, num_plus, num_minus, den_plus, den_minus, poly_plus, poly_minus):
    total = np.zeros_like(s)
    for u in num_plus:
        total += clgamma(u + s)
    for v in num_minus:
        total += clgamma(v - s)
    for u in den_plus:
        total -= clgamma(u + s)
    for v in den_minus:
        total -= clgamma(v - s)
    for w in poly_plus:
        total -= np.log(w + s)
    for w in poly_minus:
        total -= np.log(w - s)
    return total


def mellin_barnes(num_plus, num_minus, den_plus, den_minus, poly_plus, poly_minus,
                  logz, c, h, tol, max_points):
    """Trapezoid sum of a Mellin-Barnes integrand along Re s = c.

    The integrand is exp(L(s)) with
    L = sum lgamma(u+s) [num_plus] + sum lgamma(v-s) [num_minus]
        - sum lgamma(u+s) [den_plus] - sum lgamma(v-s) [den_minus]
        - sum log(w+s) [poly_plus] - sum log(w-s) [poly_minus] - s*logz.
    Conjugate symmetry is used, so only y >= 0 is visited.

    Returns ``(log_scale, total, n_points)`` with the contour integral equal to
    ``exp(log_scale) * h / pi * total``.
    """
    args = (num_plus, num_minus, den_plus, den_minus, poly_plus, poly_minus)
    s0 = np.array([complex(c, 0.0)])
    log_scale = float((_terms(s0, *args) - s0 * logz)[0].real)
    block = max(64, int(np.ceil(2.0 / h)))
    total = 0.0
    run_max = 0.0
    prev_block_max = np.inf
    start = 0
    while start < max_points:
        k = np.arange(start, start + block, dtype=float)
        s = c + 1j * h * k
        vals = np.exp(_terms(s, *args) - s * logz - log_scale)
        re = vals.real
        if start == 0:
            re[0] *= 0.5
        total += float(np.sum(re))
        block_max = float(np.max(np.abs(vals)))
        run_max = max(run_max, block_max)
        start += block
        if block_max < tol * run_max and block_max <= prev_block_max:
            return log_scale, total, start
        prev_block_max = block_max
    raise ArithmeticError("Mellin-Barnes integrand did not decay within max_points")


def gammaincc_array(p, x):
    """Regularized upper incomplete gamma Q(p, x) for scalar p > 0 and array x >= 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    lg_p = _clgamma_right(np.array([complex(p)]))[0].real
    zero = x == 0.0
    out[zero] = 1.0
    ser = (~zero) & (x < p + 1.0)
    cf = (~zero) & ~ser
    if ser.any():
        xs = x[ser]
        term = np.full_like(xs, 1.0 / p)
        acc = term.copy()
        a = p
        for _ in range(2000):
            a += 1.0
            term *= xs / a
            acc += term
            if np.all(term < acc * 1e-17):
                break
        out[ser] = 1.0 - np.exp(p * np.log(xs) - xs - lg_p) * acc
    if cf.any():
        xc = x[cf]
        tiny = 1e-300
        b = xc + 1.0 - p
        cc = np.full_like(xc, 1.0 / tiny)
        d = 1.0 / b
        hh = d.copy()
        for i in range(1, 2000):
            an = -i * (i - p)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < tiny, tiny, d)
            cc = b + an / cc
            cc = np.where(np.abs(cc) < tiny, tiny, cc)
            d = 1.0 / d
            delta = d * cc
            hh *= delta
            if np.all(np.abs(delta - 1.0) < 1e-16):
                break
        out[cf] = np.exp(p * np.log(xc) - xc - lg_p) * hh
    return out
