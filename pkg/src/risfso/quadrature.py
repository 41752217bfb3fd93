"""Adaptive Gauss-Kronrod integration over split half-lines."""

from __future__ import annotations

import math
import warnings
from typing import Callable, Iterable

from scipy import integrate

EPSABS = 1e-10
EPSREL = 1e-8


def integrate_split(f: Callable[[float], float], a: float, b: float,
                    breakpoints: Iterable[float] = (), epsabs: float = EPSABS,
                    epsrel: float = EPSREL, limit: int = 500) -> float:
    """Integrate ``f`` over [a, b] (b may be inf), splitting at ``breakpoints``.

    Each piece goes to QUADPACK's 21-point Gauss-Kronrod rule; the pieces are
    summed with ``math.fsum``.
    """
    pts = sorted({float(p) for p in breakpoints if a < p < b})
    edges = [a] + pts + [b]
    parts = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            if lo == hi:
                continue
            val, _ = integrate.quad(f, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit)
            parts.append(val)
    return math.fsum(parts)


def log_breakpoints(center: float, decades: int = 6, factor: float = 10.0) -> list:
    """Geometric breakpoints around ``center`` for integrands spread over many scales."""
    return [center * factor ** k for k in range(-decades, decades + 1)]
