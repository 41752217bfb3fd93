"""Special functions: log-gamma, incomplete gamma, pFq series and Meijer G.

Meijer G uses the standard convention

    G^{m,n}_{p,q}(z | a; b) = 1/(2 pi i) * int  prod_{j<=m} Gamma(b_j - s) prod_{k<=n} Gamma(1 - a_k + s)
                                           / (prod_{j>m} Gamma(1 - b_j + s) prod_{k>n} Gamma(a_k - s)) z^s ds.

Two evaluators are provided: the Slater residue sum over the right poles
``b_j + t`` (simple poles only) and a trapezoid rule on a vertical line that
separates the two pole families. Both run in log space so that products of
many gamma factors with huge or negative arguments stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import _backend


class GammaPoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""

    def __init__(self, x):
        super().__init__(f"Gamma has a pole at {x!r}")
        self.pole = x


class PoleCollisionError(ValueError):
    """Left and right pole families of a Meijer G integrand overlap."""


class ContourError(ArithmeticError):
    """No usable vertical contour, or the integrand does not decay along it."""


class SeriesDivergenceError(ArithmeticError):
    """A hypergeometric series diverges for the requested argument."""


class BivariateUnsupported(ArithmeticError):
    """The double Mellin-Barnes evaluator cannot handle this instance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# ---------------------------------------------------------------------------
# log-gamma

def _zeta_minus_one(k: int, n_direct: int = 20) -> float:
    """zeta(k) - 1 for integer k >= 2 by Euler-Maclaurin summation."""
    bern = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6)
    head = math.fsum(n ** -float(k) for n in range(2, n_direct))
    N = float(n_direct)
    tail = N ** (1 - k) / (k - 1) + 0.5 * N ** -k
    rising = float(k)  # k (k+1) ... (k + 2j - 2)
    fact = 2.0  # (2j)!
    for j, b2j in enumerate(bern, start=1):
        tail += b2j / fact * rising * N ** (-k - 2 * j + 1)
        rising *= (k + 2 * j - 1) * (k + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return head + tail


_ZETA_M1 = tuple(_zeta_minus_one(k) for k in range(2, 64))
_EULER = 0.57721566490153286061
_STIRLING = (1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188,
             -691.0 / 360360, 1.0 / 156, -3617.0 / 122400)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lgamma1p(e: float) -> float:
    """log Gamma(1 + e) for |e| <= 0.5, accurate in relative terms near e = 0."""
    acc = 0.0
    power = -e
    for k, zm1 in enumerate(_ZETA_M1, start=2):
        power *= -e
        term = zm1 * power / k
        acc += term
        if abs(term) < 1e-18 * abs(acc):
            break
    return -_EULER * e + (e - math.log1p(e)) + acc


def _lgamma_pos(x: float) -> float:
    if x < 0.5:
        return _lgamma1p(x) - math.log(x)
    if x <= 1.5:
        return _lgamma1p(x - 1.0)
    if x <= 2.5:
        return math.log1p(x - 2.0) + _lgamma1p(x - 2.0)
    if x < 12.0:
        n = int(math.floor(x - 1.5))
        y = x - n
        prod = 1.0
        for i in range(n):
            prod *= y + i
        return _lgamma_pos(y) + math.log(prod)
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series * inv


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def signed_log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign Gamma(x))`` for real ``x``."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise GammaPoleError(x)
    if x > 0.0:
        return _lgamma_pos(x), 1
    n = round(x)
    sin_pix = math.sin(math.pi * (x - n)) * (-1.0 if n % 2 else 1.0)
    return math.log(math.pi) - math.log(abs(sin_pix)) - _lgamma_pos(1.0 - x), (1 if sin_pix > 0 else -1)


def log_gamma(x) -> complex:
    """Principal-branch log Gamma(x) for real or complex ``x``.

    The imaginary part lies in (-pi, pi]; for real negative ``x`` with
    Gamma(x) < 0 it is pi.
    """
    if isinstance(x, complex) or np.iscomplexobj(x):
        z = complex(x)
        if z.imag == 0.0:
            return log_gamma(z.real)
        val = complex(_backend.clgamma(np.array([z]))[0])
        im = math.remainder(val.imag, 2.0 * math.pi)
        if im == -math.pi:
            im = math.pi
        return complex(val.real, im)
    lg, sign = signed_log_gamma(float(x))
    return complex(lg, 0.0 if sign > 0 else math.pi)


def upper_incomplete_gamma(p: float, x: float) -> float:
    """Non-regularized upper incomplete gamma Gamma(p, x) for p > 0, x >= 0."""
    p = float(p)
    x = float(x)
    if not p > 0.0:
        raise ValueError("upper_incomplete_gamma needs p > 0")
    if not x >= 0.0:
        raise ValueError("upper_incomplete_gamma needs x >= 0")
    if x == 0.0:
        return math.exp(_lgamma_pos(p))
    if x <= 1.5 and p <= 2.0:
        # Gamma(p) - gamma(p, x) rearranged so the 1/p parts cancel analytically
        lg1p = _lgamma1p(p) if p <= 0.5 else _lgamma_pos(1.0 + p)
        head = (math.expm1(lg1p) - math.expm1(p * math.log(x))) / p
        term = 1.0
        acc = 0.0
        for n in range(1, 200):
            term *= -x / n
            t = term / (p + n)
            acc += t
            if abs(t) < 1e-18 * abs(acc):
                break
        return head - math.exp(p * math.log(x)) * acc
    log_front = p * math.log(x) - x
    if x < p + 1.0:
        term = 1.0 / p
        acc = term
        a = p
        for _ in range(5000):
            a += 1.0
            term *= x / a
            acc += term
            if term < 1e-17 * acc:
                break
        lower = math.exp(log_front) * acc
        return math.exp(_lgamma_pos(p)) - lower
    tiny = 1e-300
    b = x + 1.0 - p
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 5000):
        an = -i * (i - p)
        b += 2.0
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(log_front) * h


# ---------------------------------------------------------------------------
# generalized hypergeometric series

class SeriesResult(NamedTuple):
    value: float
    truncation_bound: float
    terms: int
    max_term: float


def gauss_hypergeometric_series(coeff_a: Sequence[float], coeff_b: Sequence[float], z: float,
                                rtol: float = 1e-17, max_terms: int = 100_000) -> SeriesResult:
    """Partial sum of pFq(a; b; z) with a term-ratio truncation estimate.

    The remainder after the last term is bounded by ``|t| rho / (1 - rho)``
    where ``rho`` is the current term ratio, valid once the ratio is
    decreasing in magnitude below one.
    """
    a = [float(v) for v in coeff_a]
    b = [float(v) for v in coeff_b]
    z = float(z)
    for bj in b:
        if _is_nonpositive_integer(bj):
            raise GammaPoleError(bj)
    terminating = any(_is_nonpositive_integer(ai) for ai in a)
    if not terminating:
        if len(a) > len(b) + 1 and z != 0.0:
            raise SeriesDivergenceError(f"{len(a)}F{len(b)} diverges for z != 0")
        if len(a) == len(b) + 1 and abs(z) >= 1.0:
            raise SeriesDivergenceError(f"{len(a)}F{len(b)} diverges for |z| >= 1")
    terms = [1.0]
    term = 1.0
    max_term = 1.0
    bound = 0.0
    n = 0
    while True:
        num = 1.0
        for ai in a:
            num *= ai + n
        den = float(n + 1)
        for bj in b:
            den *= bj + n
        ratio = num / den * z
        term *= ratio
        n += 1
        if term == 0.0:
            bound = 0.0
            break
        terms.append(term)
        max_term = max(max_term, abs(term))
        if n >= max_terms:
            raise SeriesDivergenceError(f"no convergence after {max_terms} terms")
        # next ratio decides whether the tail estimate is trustworthy
        nxt = z / (n + 1)
        for ai in a:
            nxt *= ai + n
        for bj in b:
            nxt /= bj + n
        rho = abs(nxt)
        if rho < 1.0 and n > max([abs(v) for v in a + b] + [0.0]):
            bound = abs(term) * rho / (1.0 - rho)
            if bound <= rtol * abs(math.fsum(terms)):
                break
        if not math.isfinite(term):
            raise SeriesDivergenceError("series overflowed")
    return SeriesResult(math.fsum(terms), bound, n + 1, max_term)


# ---------------------------------------------------------------------------
# Meijer G

def _as_tuple(v) -> tuple:
    return tuple(float(x) for x in v)


@dataclass(frozen=True)
class MeijerSpec:
    """Orders, parameter lists and argument of a univariate Meijer G."""

    m: int
    n: int
    a: tuple = ()
    b: tuple = ()
    z: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", _as_tuple(self.a))
        object.__setattr__(self, "b", _as_tuple(self.b))
        object.__setattr__(self, "z", float(self.z))
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ValueError(f"invalid orders m={self.m}, n={self.n}, p={self.p}, q={self.q}")
        if not self.z > 0.0 or not math.isfinite(self.z):
            raise ValueError("Meijer G argument must be a positive finite real")

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)

    def inverted(self) -> "MeijerSpec":
        """G^{n,m}_{q,p}(1/z | 1-b; 1-a), equal in value to this spec."""
        return MeijerSpec(self.n, self.m, tuple(1.0 - v for v in self.b),
                          tuple(1.0 - v for v in self.a), 1.0 / self.z)

    def shifted(self, c: float) -> "MeijerSpec":
        """Same z with every parameter moved by ``c``; value is z^c times this one."""
        return MeijerSpec(self.m, self.n, tuple(v + c for v in self.a),
                          tuple(v + c for v in self.b), self.z)


@dataclass(frozen=True)
class PoleGroup:
    base: float
    members: tuple
    multiplicity: int


@dataclass(frozen=True)
class PoleClassification:
    """Right poles b_j + t (j <= m) grouped by integer-spaced coincidence."""

    groups: tuple
    gap: float
    tolerance: float

    @property
    def simple(self) -> bool:
        return all(g.multiplicity == 1 for g in self.groups)


PATH_EPS = 1e-4
SPLIT_EPS = 1e-6
# Slater results that cancelled more than this many decimal digits go to the contour
MAX_DIGITS_LOST = 3.0


def _dist_to_int(x: float) -> float:
    return abs(x - round(x))


def classify_poles(spec: MeijerSpec, tolerance: float = PATH_EPS) -> PoleClassification:
    """Group b_1..b_m whose differences lie within ``tolerance`` of an integer."""
    bs = spec.b[: spec.m]
    groups: list[list[int]] = []
    for j, bj in enumerate(bs):
        for g in groups:
            if _dist_to_int(bj - bs[g[0]]) < tolerance:
                g.append(j)
                break
        else:
            groups.append([j])
    gap = math.inf
    for i in range(len(bs)):
        for j in range(i + 1, len(bs)):
            gap = min(gap, _dist_to_int(bs[i] - bs[j]))
    out = tuple(PoleGroup(min(bs[k] for k in g), tuple(g), len(g)) for g in groups)
    return PoleClassification(out, gap, tolerance)


def check_collision(spec: MeijerSpec) -> None:
    """Raise PoleCollisionError if a_k - b_j is a positive integer (k <= n, j <= m)."""
    for ak in spec.a[: spec.n]:
        for bj in spec.b[: spec.m]:
            d = ak - bj
            if d > 0.5 and abs(d - round(d)) <= 1e-12 * max(1.0, abs(d)):
                raise PoleCollisionError(
                    f"a={ak!r} and b={bj!r} give coincident left and right poles")


def _split_groups(values: Sequence[float], eps: float) -> list:
    """Symmetric deterministic split of integer-spaced coincident entries."""
    vals = list(values)
    cls = classify_poles(MeijerSpec(len(vals), 0, (), vals, 1.0))
    for g in cls.groups:
        if g.multiplicity == 1:
            continue
        ordered = sorted(g.members, key=lambda k: (vals[k], k))
        gsize = len(ordered)
        for i, k in enumerate(ordered):
            vals[k] += eps * (2 * i - gsize + 1)
    return vals


def epsilon_split(spec: MeijerSpec, eps: float = SPLIT_EPS) -> MeijerSpec:
    """Spread coincident or integer-spaced b_1..b_m by symmetric multiples of ``eps``."""
    bm = _split_groups(spec.b[: spec.m], eps)
    return MeijerSpec(spec.m, spec.n, spec.a, tuple(bm) + spec.b[spec.m:], spec.z)


def _signed_lgamma_or_zero(x: float) -> tuple[float, int]:
    """(log|1/Gamma(x)| - convention-free) helper: sign 0 marks 1/Gamma(x) = 0."""
    if _is_nonpositive_integer(x):
        return 0.0, 0
    return signed_log_gamma(x)


def _slater_coefficients(spec: MeijerSpec):
    """Log-magnitude and sign of each Slater family coefficient."""
    a, b, m, n = spec.a, spec.b, spec.m, spec.n
    out = []
    for h in range(m):
        bh = b[h]
        log_c = 0.0
        sign = 1
        for j in range(m):
            if j != h:
                lg, s = signed_log_gamma(b[j] - bh)
                log_c += lg
                sign *= s
        for k in range(n):
            lg, s = signed_log_gamma(1.0 + bh - a[k])
            log_c += lg
            sign *= s
        for j in range(m, spec.q):
            lg, s = _signed_lgamma_or_zero(1.0 + bh - b[j])
            log_c -= lg
            sign *= s
        for k in range(n, spec.p):
            lg, s = _signed_lgamma_or_zero(a[k] - bh)
            log_c -= lg
            sign *= s
        out.append((log_c, sign))
    return out


class _SlaterOutcome(NamedTuple):
    value: float
    digits_lost: float


def _slater(spec: MeijerSpec) -> _SlaterOutcome:
    a, b, m, n = spec.a, spec.b, spec.m, spec.n
    zz = (-1.0) ** (spec.p - m - n) * spec.z
    logz = math.log(spec.z)
    parts = []
    scale = 0.0
    for h, (log_c, sign) in enumerate(_slater_coefficients(spec)):
        if sign == 0:
            continue
        bh = b[h]
        ser = gauss_hypergeometric_series(
            [1.0 + bh - ak for ak in a],
            [1.0 + bh - b[j] for j in range(spec.q) if j != h], zz)
        lw = log_c + bh * logz
        if lw > 700.0:
            raise OverflowError("Slater term overflows")
        w = sign * math.exp(lw)
        if not math.isfinite(w * ser.value * ser.max_term):
            raise OverflowError("Slater term overflows")
        parts.append(w * ser.value)
        scale = max(scale, abs(w) * ser.max_term)
    value = math.fsum(parts)
    if scale == 0.0:
        return _SlaterOutcome(0.0, 0.0)
    lost = math.log10(scale / abs(value)) if value != 0.0 else math.inf
    return _SlaterOutcome(value, lost)


class _MBProblem(NamedTuple):
    num_plus: np.ndarray
    num_minus: np.ndarray
    den_plus: np.ndarray
    den_minus: np.ndarray
    poly_plus: np.ndarray
    poly_minus: np.ndarray
    logz: float
    lo: float
    hi: float


def _reduce_ratio(num: list, den: list, poly: list) -> None:
    """Replace Gamma(u+s)/Gamma(u+k+s), k a positive integer, by 1/prod(u+i+s)."""
    changed = True
    while changed:
        changed = False
        for i, u in enumerate(num):
            for j, v in enumerate(den):
                d = v - u
                k = round(d)
                if k >= 1 and k <= 64 and abs(d - k) <= 1e-12 * max(1.0, abs(u)):
                    poly.extend(u + t for t in range(k))
                    del num[i]
                    del den[j]
                    changed = True
                    break
            if changed:
                break


def _mb_problem(spec: MeijerSpec) -> _MBProblem:
    # integration variable s -> -s turns the standard integrand into
    # prod Gamma(b_j + s) prod Gamma(1 - a_k - s) / (...) z^{-s}
    num_plus = list(spec.b[: spec.m])
    num_minus = [1.0 - v for v in spec.a[: spec.n]]
    den_plus = list(spec.a[spec.n:])
    den_minus = [1.0 - v for v in spec.b[spec.m:]]
    poly_plus: list = []
    poly_minus: list = []
    _reduce_ratio(num_plus, den_plus, poly_plus)
    _reduce_ratio(num_minus, den_minus, poly_minus)
    lo = max([-u for u in num_plus] + [-w for w in poly_plus] + [-math.inf])
    hi = min(num_minus + poly_minus + [math.inf])
    arr = lambda v: np.asarray(v, dtype=float)
    return _MBProblem(arr(num_plus), arr(num_minus), arr(den_plus), arr(den_minus),
                      arr(poly_plus), arr(poly_minus), math.log(spec.z), lo, hi)


def _convex_part(prob: _MBProblem, c: float) -> float:
    s = np.array([complex(c, 0.0)])
    total = -c * prob.logz
    for u in prob.num_plus:
        total += _backend.clgamma(u + s)[0].real
    for v in prob.num_minus:
        total += _backend.clgamma(v - s)[0].real
    for w in prob.poly_plus:
        total -= math.log(w + c)
    for w in prob.poly_minus:
        total -= math.log(w - c)
    return total


def _place_contour(prob: _MBProblem) -> float:
    lo, hi = prob.lo, prob.hi
    if not lo < hi:
        raise ContourError(f"pole families overlap: no vertical line separates {lo} and {hi}")
    if math.isfinite(lo) and math.isfinite(hi):
        margin = min(0.25 * (hi - lo), 0.05)
        a, b = lo + margin, hi - margin
    else:
        f = lambda c: _convex_part(prob, c)
        if math.isfinite(lo):
            a = lo + 0.05
            step = 1.0
            b = a + step
            while f(b) < f(b - step / 2) and b < a + 1e6:
                step *= 2.0
                b = a + step
        elif math.isfinite(hi):
            b = hi - 0.05
            step = 1.0
            a = b - step
            while f(a) < f(a + step / 2) and a > b - 1e6:
                step *= 2.0
                a = b - step
        else:
            a, b = -1.0, 1.0
            while f(a) < f(a + 0.5) and a > -1e6:
                a *= 2.0
            while f(b) < f(b - 0.5) and b < 1e6:
                b *= 2.0
    if b - a < 1e-9:
        return 0.5 * (a + b)
    res = minimize_scalar(lambda c: _convex_part(prob, c), bounds=(a, b), method="bounded",
                          options={"xatol": 1e-6 * max(1.0, b - a)})
    return float(res.x)


def _nearest_pole_distance(prob: _MBProblem, c: float) -> float:
    d = math.inf
    for u in prob.num_plus:
        d = min(d, _dist_to_left(c, u))
    for w in prob.poly_plus:
        d = min(d, c + w)
    for w in prob.poly_minus:
        d = min(d, w - c)
    for v in prob.num_minus:
        d = min(d, _dist_to_right(c, v))
    return d


def _dist_to_left(c: float, u: float) -> float:
    # poles at -u - t, t >= 0, the nearest being -u
    return c + u


def _dist_to_right(c: float, v: float) -> float:
    return v - c


def _contour(spec: MeijerSpec, offset: float | None = None, tol: float = 1e-17) -> float:
    prob = _mb_problem(spec)
    c = _place_contour(prob)
    if offset is not None:
        c = c + offset
        if not prob.lo < c < prob.hi:
            raise ContourError(f"offset contour Re s = {c} leaves the strip ({prob.lo}, {prob.hi})")
    d = min(_nearest_pole_distance(prob, c), 1.5)
    h = math.pi * d / 46.0
    try:
        log_scale, total, _ = _backend.mellin_barnes(
            prob.num_plus, prob.num_minus, prob.den_plus, prob.den_minus,
            prob.poly_plus, prob.poly_minus, prob.logz, c, h, tol, 4_000_000)
    except ArithmeticError as exc:
        raise ContourError(str(exc)) from exc
    if total == 0.0:
        return 0.0
    lv = log_scale + math.log(abs(total) * h / math.pi)
    if lv > 709.0:
        raise OverflowError("Meijer G value overflows double precision")
    return math.copysign(math.exp(lv), total)


def decay_margin(spec: MeijerSpec) -> float:
    """m + n - (p + q)/2; the contour integral converges when this is positive."""
    return spec.m + spec.n - 0.5 * (spec.p + spec.q)


def evaluation_path(spec: MeijerSpec) -> str:
    """Path that ``meijer_g(method='auto')`` tries first: 'slater' or 'contour'."""
    return _auto_plan(spec)[0]


def _auto_plan(spec: MeijerSpec):
    s = spec
    if s.p > s.q or (s.p == s.q and s.z > 1.0):
        s = s.inverted()
    if s.m == 0:
        return "contour", s
    if s.p == s.q and 0.5 < s.z < 2.0:
        return "contour", s
    if not classify_poles(s).simple:
        return "contour", s
    bm = s.b[: s.m]
    for bh in bm:
        for bj in s.b[s.m:]:
            d = bj - bh - 1.0
            if d > -PATH_EPS and _dist_to_int(d) < PATH_EPS:
                return "contour", s
    if max([abs(v) for v in s.a + s.b]) > 60.0:
        return "contour", s
    return "slater", s


def meijer_g(spec: MeijerSpec, method: str = "auto", contour_offset: float | None = None) -> float:
    """Evaluate G^{m,n}_{p,q}(z | a; b) for real parameters and positive z.

    ``method`` is 'auto', 'slater' or 'contour'. The Slater route needs simple
    right poles; with ``method='slater'`` degenerate poles are first spread by
    a deterministic +-1e-6 split. ``contour_offset`` moves the integration
    line from its automatic position (used for dual-contour checks).
    """
    check_collision(spec)
    if method == "contour":
        if decay_margin(spec) <= 0:
            raise ContourError("integrand does not decay on a vertical line (m+n <= (p+q)/2)")
        return _contour(spec, contour_offset)
    if method == "slater":
        s = spec
        if s.p > s.q or (s.p == s.q and s.z > 1.0):
            s = s.inverted()
        if s.p == s.q and s.z == 1.0:
            raise SeriesDivergenceError("Slater series diverges at z = 1 when p = q; use the contour")
        if not classify_poles(s).simple:
            s = epsilon_split(s)
        return _slater(s).value
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    path, s = _auto_plan(spec)
    if path == "slater":
        try:
            out = _slater(s)
            if out.digits_lost < MAX_DIGITS_LOST:
                return out.value
        except (SeriesDivergenceError, OverflowError, GammaPoleError):
            pass
    if decay_margin(spec) <= 0:
        raise SeriesDivergenceError(
            "Slater series unusable here and the contour integral does not converge")
    return _contour(s, contour_offset)


def leading_terms(spec: MeijerSpec, eps: float = SPLIT_EPS) -> list:
    """Leading residue terms ``(coef, power)`` of G for z -> 0 (or z -> inf).

    For z > 1 with p >= q the spec is first inverted, so the returned powers
    refer to the inverted argument 1/z. Coincident poles are eps-split, giving
    pairs of large opposite terms whose sum carries the logarithmic factor.
    """
    s = spec.inverted() if (spec.p > spec.q or (spec.p == spec.q and spec.z > 1.0)) else spec
    s = epsilon_split(s, eps) if not classify_poles(s).simple else s
    out = []
    for h, (log_c, sign) in enumerate(_slater_coefficients(s)):
        if sign:
            out.append((sign * math.exp(log_c), s.b[h]))
    return out


def leading_sum(spec: MeijerSpec, eps: float = SPLIT_EPS) -> float:
    """Sum of the leading residue terms at the spec's own argument."""
    s_inv = spec.p > spec.q or (spec.p == spec.q and spec.z > 1.0)
    x = 1.0 / spec.z if s_inv else spec.z
    logx = math.log(x)
    return math.fsum(c * math.exp(p * logx) for c, p in leading_terms(spec, eps))


# ---------------------------------------------------------------------------
# bivariate Meijer G (double Mellin-Barnes)

@dataclass(frozen=True)
class GBlock:
    """Parameter block of a bivariate G: orders plus upper (a) and lower (b) lists."""

    m: int
    n: int
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", _as_tuple(self.a))
        object.__setattr__(self, "b", _as_tuple(self.b))
        if not (0 <= self.m <= len(self.b) and 0 <= self.n <= len(self.a)):
            raise ValueError("invalid block orders")


@dataclass(frozen=True)
class BivariateMeijerSpec:
    """G^{m1,n1 : m2,n2 : m3,n3}_{p1,q1 : p2,q2 : p3,q3}[x, y].

    The integrand over (s, t) is phi1(s + t) phi2(s) phi3(t) x^s y^t with

        phi1(u) = prod_{j<=m1} Gamma(b1_j + u) prod_{k<=n1} Gamma(1 - a1_k - u)
                  / (prod_{k>n1} Gamma(a1_k + u) prod_{j>m1} Gamma(1 - b1_j - u))
        phi2(s) = prod_{j<=m2} Gamma(b2_j - s) prod_{k<=n2} Gamma(1 - a2_k + s)
                  / (prod_{k>n2} Gamma(a2_k - s) prod_{j>m2} Gamma(1 - b2_j + s))

    and phi3 like phi2 in t; the result is the integral divided by (2 pi i)^2.
    """

    outer: GBlock
    inner_x: GBlock
    inner_y: GBlock
    x: float
    y: float

    def __post_init__(self):
        if not (self.x > 0.0 and self.y > 0.0):
            raise ValueError("bivariate Meijer G arguments must be positive")


@dataclass
class _Terms:
    plus: list = field(default_factory=list)
    minus: list = field(default_factory=list)
    dplus: list = field(default_factory=list)
    dminus: list = field(default_factory=list)


def _block_terms_outer(b: GBlock) -> _Terms:
    return _Terms(list(b.b[: b.m]), [1.0 - v for v in b.a[: b.n]],
                  list(b.a[b.n:]), [1.0 - v for v in b.b[b.m:]])


def _block_terms_inner(b: GBlock) -> _Terms:
    # Gamma(b - s) -> "minus" with constant b, Gamma(1 - a + s) -> "plus" with 1 - a
    return _Terms([1.0 - v for v in b.a[: b.n]], list(b.b[: b.m]),
                  [1.0 - v for v in b.b[b.m:]], list(b.a[b.n:]))


def _log_phi(terms: _Terms, u: np.ndarray) -> np.ndarray:
    out = np.zeros(u.shape, dtype=complex)
    flat = u.ravel()
    acc = np.zeros(flat.shape, dtype=complex)
    for c in terms.plus:
        acc += _backend.clgamma(c + flat)
    for c in terms.minus:
        acc += _backend.clgamma(c - flat)
    for c in terms.dplus:
        acc -= _backend.clgamma(c + flat)
    for c in terms.dminus:
        acc -= _backend.clgamma(c - flat)
    out[...] = acc.reshape(u.shape)
    return out


def _strip(terms: _Terms) -> tuple[float, float]:
    lo = max([-c for c in terms.plus] + [-math.inf])
    hi = min(terms.minus + [math.inf])
    return lo, hi


def meijer_g_bivariate(spec: BivariateMeijerSpec, tol: float = 1e-13, rtol: float = 1e-6,
                       max_points: int = 4_000_000) -> float:
    """Double Mellin-Barnes trapezoid evaluation of a bivariate Meijer G.

    Vertical lines Re s = cs, Re t = ct are chosen to maximize the distance
    to every pole family (outer poles in s + t included). The step follows
    from that distance, the grid is widened until the edge magnitude drops
    below ``tol`` of the peak, and the result must agree with a finer step
    to ``rtol``. Raises BivariateUnsupported otherwise.
    """
    o = _block_terms_outer(spec.outer)
    tx = _block_terms_inner(spec.inner_x)
    ty = _block_terms_inner(spec.inner_y)
    lo1, hi1 = _strip(o)
    lo2, hi2 = _strip(tx)
    lo3, hi3 = _strip(ty)

    def span(lo: float, hi: float) -> np.ndarray:
        if not (math.isfinite(lo) or math.isfinite(hi)):
            lo, hi = -10.0, 10.0
        elif not math.isfinite(lo):
            lo = hi - 20.0
        elif not math.isfinite(hi):
            hi = lo + 20.0
        return np.linspace(lo, hi, 81)[1:-1]

    lx, ly = math.log(spec.x), math.log(spec.y)
    CS, CT = np.meshgrid(span(lo2, hi2), span(lo3, hi3), indexing="ij")
    U = CS + CT
    margin = np.minimum.reduce([CS - lo2, hi2 - CS, CT - lo3, hi3 - CT, U - lo1, hi1 - U,
                                np.full(CS.shape, 1.5)])
    best = float(margin.max())
    if best <= 1e-3:
        raise BivariateUnsupported("no pair of vertical contours separates all pole families",
                                   {"strips": ((lo1, hi1), (lo2, hi2), (lo3, hi3))})
    # among well-separated lines take the one with the smallest integrand on the real axis
    ok = margin >= 0.5 * best
    L0 = (_log_phi(o, U[ok] + 0j) + _log_phi(tx, CS[ok] + 0j) + _log_phi(ty, CT[ok] + 0j)).real \
        + CS[ok] * lx + CT[ok] * ly
    k = int(np.argmin(L0))
    cs, ct = float(CS[ok][k]), float(CT[ok][k])
    best = float(margin[ok][k])

    def integrate(step: float) -> tuple[float, float]:
        extent = 10.0
        while True:
            n_side = int(extent / step)
            if (2 * n_side + 1) ** 2 > max_points:
                raise BivariateUnsupported("grid budget exhausted before the integrand decayed",
                                           {"extent": extent, "step": step})
            ys = step * np.arange(-n_side, n_side + 1)
            S = cs + 1j * ys[:, None]
            T = ct + 1j * ys[None, :]
            L = _log_phi(o, S + T) + _log_phi(tx, S) + _log_phi(ty, T) + S * lx + T * ly
            peak = float(np.max(L.real))
            vals = np.exp(L - peak)
            edge = max(np.abs(vals[0]).max(), np.abs(vals[-1]).max(),
                       np.abs(vals[:, 0]).max(), np.abs(vals[:, -1]).max())
            if edge < tol:
                total = math.fsum(vals.real.ravel()) * step * step / (4.0 * math.pi ** 2)
                return total, peak
            extent *= 1.5

    h = 2.0 * math.pi * best / 36.0
    v1, p1 = integrate(h)
    v2, p2 = integrate(0.8 * h)
    r1 = v1 * math.exp(p1)
    r2 = v2 * math.exp(p2)
    if not math.isfinite(r2) or abs(r1 - r2) > rtol * max(abs(r2), 1e-300):
        raise BivariateUnsupported("trapezoid refinement did not settle",
                                   {"coarse": r1, "fine": r2})
    return r2
