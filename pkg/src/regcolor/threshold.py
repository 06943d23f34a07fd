"""Threshold numerology: the interval I_k around the k-colorability
threshold, the canonical degree d_col(k), the inverse map F(d), and the
older comparison intervals.

The interval endpoints share the large common term (2k-1) ln k, so they are
kept as (base, offset) internally; offsets are O(1) and their difference is
the interval length at full precision even when the base is ~1e7.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import GuardError, ValidationError

AT_THRESHOLD_TOL = 1e-9


def default_eps(k):
    """eps_k = k^{-0.9}, the only concrete scaling hinted at."""
    return float(k) ** -0.9


@dataclass(frozen=True)
class ThresholdRecord:
    k: int
    eps: float
    base: float        # (2k-1) ln k
    lo_offset: float   # -2 ln 2 - eps
    hi_offset: float   # -1 + eps
    d_col: float
    integer_in_interval: int | None
    method: str        # "integer" or "midpoint"

    @property
    def lo(self):
        return self.base + self.lo_offset

    @property
    def hi(self):
        return self.base + self.hi_offset

    @property
    def length(self):
        return self.hi_offset - self.lo_offset


def threshold_record(k, eps=None):
    """I_k = ((2k-1)ln k - 2 ln 2 - eps, (2k-1)ln k - 1 + eps); d_col is the
    unique integer inside if there is one, else the midpoint.  Two or more
    integers inside is an error, never a silent choice."""
    if k < 3:
        raise ValidationError("k >= 3 required")
    if eps is None:
        eps = default_eps(k)
    if eps < 0:
        raise ValidationError("eps must be >= 0")
    base = (2 * k - 1) * math.log(k)
    lo_off = -2 * math.log(2) - eps
    hi_off = -1 + eps
    lo, hi = base + lo_off, base + hi_off
    first = math.floor(lo) + 1  # smallest integer > lo (endpoints irrational)
    ints = [m for m in range(first, math.floor(hi) + 1) if lo < m < hi]
    if len(ints) > 1:
        raise GuardError("interval for k=%d contains %d integers: %s"
                         % (k, len(ints), ints))
    if len(ints) == 1:
        return ThresholdRecord(k, eps, base, lo_off, hi_off, float(ints[0]),
                               ints[0], "integer")
    return ThresholdRecord(k, eps, base, lo_off, hi_off, (lo + hi) / 2,
                           None, "midpoint")


def threshold_scan(k_lo, k_hi, eps_mode="pow09", eps_value=None):
    """Vectorized records for k in [k_lo, k_hi]: returns a dict of arrays
    (k, lo, hi, length, n_integers, d_col).  eps_mode: pow09 | zero | value."""
    if k_lo < 3 or k_hi < k_lo:
        raise ValidationError("need 3 <= k_lo <= k_hi")
    ks = np.arange(k_lo, k_hi + 1, dtype=np.float64)
    if eps_mode == "pow09":
        eps = ks ** -0.9
    elif eps_mode == "zero":
        eps = np.zeros_like(ks)
    elif eps_mode == "value":
        if eps_value is None or eps_value < 0:
            raise ValidationError("eps_mode=value needs eps_value >= 0")
        eps = np.full_like(ks, float(eps_value))
    else:
        raise ValidationError("unknown eps_mode %r" % (eps_mode,))
    base = (2 * ks - 1) * np.log(ks)
    lo_off = -2 * math.log(2) - eps
    hi_off = -1 + eps
    lo = base + lo_off
    hi = base + hi_off
    n_int = np.floor(hi).astype(np.int64) - np.floor(lo).astype(np.int64)
    d_col = np.where(n_int == 1, np.floor(hi), (lo + hi) / 2)
    return {"k": ks.astype(np.int64), "lo": lo, "hi": hi,
            "length": hi_off - lo_off, "n_integers": n_int, "d_col": d_col}


def coloring_number(d, k_max=10 ** 4, eps_mode="pow09", eps_value=None):
    """F(d): the k with d_col(k-1) <= d < d_col(k), i.e. the smallest k whose
    threshold d has not yet reached (d_col is increasing in k).  Errors when d
    sits on a threshold within 1e-9 (undefined there)."""
    scan = threshold_scan(3, k_max, eps_mode, eps_value)
    d_col = scan["d_col"]
    near = np.abs(d_col - d) < AT_THRESHOLD_TOL
    if near.any():
        k_at = int(scan["k"][near][0])
        raise GuardError("d=%r is at the k=%d threshold" % (d, k_at))
    above = d < d_col
    if not above.any():
        raise ValidationError("d exceeds d_col(k) for every k <= %d" % k_max)
    return int(scan["k"][above].min())


def kpgw_intervals(k):
    """The earlier known bounds: exact interval
    ((2k-3)ln(k-1), (2k-2)ln(k-1)) and the plus/minus-one interval
    [(2k-2)ln(k-1), (2k-1)ln k]."""
    if k < 3:
        raise ValidationError("k >= 3 required")
    a = math.log(k - 1)
    return ((2 * k - 3) * a, (2 * k - 2) * a), ((2 * k - 2) * a,
                                                (2 * k - 1) * math.log(k))


def format_csv(k_lo, k_hi, eps_mode="pow09", eps_value=None):
    """CSV table `k,lo,hi,d_col,method` for k in [k_lo, k_hi]."""
    lines = ["k,lo,hi,d_col,method"]
    for k in range(k_lo, k_hi + 1):
        eps = None
        if eps_mode == "zero":
            eps = 0.0
        elif eps_mode == "value":
            eps = eps_value
        elif eps_mode != "pow09":
            raise ValidationError("unknown eps_mode %r" % (eps_mode,))
        rec = threshold_record(k, eps)
        lines.append("%d,%.12g,%.12g,%.12g,%s"
                     % (rec.k, rec.lo, rec.hi, rec.d_col, rec.method))
    return "\n".join(lines) + "\n"


def smallest_reliable_k(k_max=10 ** 6, eps_mode="pow09", eps_value=None):
    """Smallest k such that the at-most-one-integer property holds for every
    k' in [k, k_max] under the chosen eps.  Computed, not assumed; records
    for smaller k should be treated as outside the proven regime."""
    scan = threshold_scan(3, k_max, eps_mode, eps_value)
    bad = scan["k"][scan["n_integers"] > 1]
    return int(bad.max()) + 1 if bad.size else 3
