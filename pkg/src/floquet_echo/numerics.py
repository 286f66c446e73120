"""Low-level numerics shared across the package: accurate phase reduction
for large period counts, exact ordered summation, and the clamped log used
by the fidelity integrands.
"""
from __future__ import annotations

import math

import numpy as np

# log floor for |z_n|^2: the integrand genuinely diverges at isolated
# resonant modes (q = 1, cos = -1); the floor keeps the discretized sum
# finite while clamp events are counted and surfaced.
LOG_FLOOR = 1e-300

# 2*pi as a double-double constant: TWO_PI_HI + TWO_PI_LO carries ~32
# significant decimal digits.
TWO_PI_HI = 6.283185307179586
TWO_PI_LO = 2.4492935982947064e-16

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def _two_prod(a, b):
    """Error-free product: returns (p, e) with p + e == a*b exactly."""
    p = a * b
    a_hi = _SPLITTER * a
    a_hi = a_hi - (a_hi - a)
    a_lo = a - a_hi
    b_hi = _SPLITTER * b
    b_hi = b_hi - (b_hi - b)
    b_lo = b - b_hi
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def reduce_angle(theta, mult):
    """(mult * theta) mod 2*pi, mapped to [-pi, pi], for integer mult.

    Naive products lose all phase accuracy once mult*theta exceeds ~1e9;
    here the product and the subtraction of q*2pi are both carried in
    double-double arithmetic, leaving a residual error ~1e-22 radians for
    mult up to ~1e10.
    """
    mult = int(mult)
    if abs(mult) > 2**53:
        raise ValueError("period count too large for exact float conversion")
    theta = np.asarray(theta, dtype=np.float64)
    hi, lo = _two_prod(theta, float(mult))
    q = np.rint((hi + lo) / TWO_PI_HI)
    p1, e1 = _two_prod(q, TWO_PI_HI)
    # hi and p1 are within a factor of two of each other, so hi - p1 is exact
    r = (hi - p1) + (lo - e1 - q * TWO_PI_LO)
    # a single correction pass keeps r inside [-pi, pi]
    r = np.where(r > np.pi, r - TWO_PI_HI, r)
    r = np.where(r < -np.pi, r + TWO_PI_HI, r)
    return r


def cos_mult_angle(theta, mult):
    """cos(mult * theta) via extended-precision angle reduction."""
    return np.cos(reduce_angle(theta, mult))


def exact_sum(values):
    """Order-insensitive exact float summation (Shewchuk), used for every
    momentum-grid reduction so results are identical in serial and parallel
    runs regardless of chunking."""
    return math.fsum(np.asarray(values, dtype=np.float64))


def clamped_log(x):
    """log with the documented floor; returns (values, clamp_count)."""
    x = np.asarray(x, dtype=np.float64)
    clamped = x < LOG_FLOOR
    out = np.log(np.where(clamped, LOG_FLOOR, x))
    return out, int(np.count_nonzero(clamped))
