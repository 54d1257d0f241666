"""Hot numeric kernels, compiled with numba when available.

Three inner loops dominate the package's runtime: discretizing a phrase into
its occupancy bit vector, comparing two bit vectors, and scanning every
candidate window that ends at a release edge. Each kernel exists twice: a
numba ``@njit`` version and a vectorized pure-numpy fallback. Both paths are
required to produce bit-identical results (enforced by tests); floating-point
operations are written in the same order on both sides and fastmath stays
off for that reason.

Backend selection is driven by the ``TAPPHRASE_BACKEND`` environment
variable: ``numba`` (default when importable), ``numpy`` to force the
fallback, or ``auto``. ``available_backends()`` exposes every compiled
variant so tests and benchmarks can compare them directly.

Conventions shared by all kernels:

- a phrase is a float64 array of alternating tap/break durations (ms),
  starting and ending with a tap;
- a signal is a uint8 array of 0/1 occupancy samples taken at bin centers
  ``(i + 0.5) / bins * total``, where a sample landing exactly on a segment
  boundary belongs to the later segment; the first and last bins are
  anchored to 1 because a valid phrase starts and ends with a tap;
- event-time buffers alternate press/release starting with a press, so
  presses sit at even indices.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "available_backends",
    "hamming",
    "normalize_bits",
    "scan_release",
    "scan_release_all",
]


# -- pure numpy fallback -----------------------------------------------------

def _normalize_bits_numpy(segments: np.ndarray, bins: int) -> np.ndarray:
    cum = np.cumsum(segments)
    total = cum[-1]
    centers = (np.arange(bins, dtype=np.float64) + 0.5) / bins * total
    idx = np.searchsorted(cum, centers, side="right")
    np.minimum(idx, cum.shape[0] - 1, out=idx)
    bits = (idx % 2 == 0).astype(np.uint8)
    bits[0] = 1
    bits[-1] = 1
    return bits


def _hamming_numpy(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.count_nonzero(a != b)) / a.shape[0]


def _scan_release_numpy(times, rel_idx, tmpl_bits, lo, hi, tau):
    bins = tmpl_bits.shape[0]
    t_end = times[rel_idx]
    for p in range(0, rel_idx, 2):
        span = t_end - times[p]
        if span < lo or span > hi:
            continue
        segs = np.diff(times[p : rel_idx + 1])
        d = _hamming_numpy(_normalize_bits_numpy(segs, bins), tmpl_bits)
        if d <= tau:
            return p, d
    return -1, float("nan")


def _scan_release_all_numpy(times, rel_idx, tmpl_bits, lo, hi, tau):
    bins = tmpl_bits.shape[0]
    t_end = times[rel_idx]
    hits: list[int] = []
    dists: list[float] = []
    for p in range(0, rel_idx, 2):
        span = t_end - times[p]
        if span < lo or span > hi:
            continue
        segs = np.diff(times[p : rel_idx + 1])
        d = _hamming_numpy(_normalize_bits_numpy(segs, bins), tmpl_bits)
        if d <= tau:
            hits.append(p)
            dists.append(d)
    return np.asarray(hits, dtype=np.int64), np.asarray(dists, dtype=np.float64)


# -- numba backend -----------------------------------------------------------

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

if HAVE_NUMBA:

    @njit(cache=True)
    def _normalize_bits_numba(segments, bins):
        m = segments.shape[0]
        cum = np.empty(m, np.float64)
        acc = 0.0
        for j in range(m):
            acc += segments[j]
            cum[j] = acc
        total = acc
        out = np.empty(bins, np.uint8)
        for i in range(bins):
            t = (i + 0.5) / bins * total
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) // 2
                if cum[mid] <= t:
                    lo = mid + 1
                else:
                    hi = mid
            if lo >= m:
                lo = m - 1
            out[i] = 1 if lo % 2 == 0 else 0
        out[0] = 1
        out[bins - 1] = 1
        return out

    @njit(cache=True)
    def _hamming_numba(a, b):
        n = a.shape[0]
        diff = 0
        for i in range(n):
            if a[i] != b[i]:
                diff += 1
        return diff / n

    @njit(cache=True)
    def _scan_release_numba(times, rel_idx, tmpl_bits, lo, hi, tau):
        bins = tmpl_bits.shape[0]
        t_end = times[rel_idx]
        for p in range(0, rel_idx, 2):
            span = t_end - times[p]
            if span < lo or span > hi:
                continue
            n_seg = rel_idx - p
            segs = np.empty(n_seg, np.float64)
            for q in range(n_seg):
                segs[q] = times[p + q + 1] - times[p + q]
            d = _hamming_numba(_normalize_bits_numba(segs, bins), tmpl_bits)
            if d <= tau:
                return p, d
        return -1, np.nan

    @njit(cache=True)
    def _scan_release_all_numba(times, rel_idx, tmpl_bits, lo, hi, tau):
        bins = tmpl_bits.shape[0]
        t_end = times[rel_idx]
        max_hits = rel_idx // 2 + 1
        hits = np.empty(max_hits, np.int64)
        dists = np.empty(max_hits, np.float64)
        count = 0
        for p in range(0, rel_idx, 2):
            span = t_end - times[p]
            if span < lo or span > hi:
                continue
            n_seg = rel_idx - p
            segs = np.empty(n_seg, np.float64)
            for q in range(n_seg):
                segs[q] = times[p + q + 1] - times[p + q]
            d = _hamming_numba(_normalize_bits_numba(segs, bins), tmpl_bits)
            if d <= tau:
                hits[count] = p
                dists[count] = d
                count += 1
        return hits[:count].copy(), dists[:count].copy()


# -- backend selection -------------------------------------------------------

_NUMPY_IMPLS = {
    "normalize_bits": _normalize_bits_numpy,
    "hamming": _hamming_numpy,
    "scan_release": _scan_release_numpy,
    "scan_release_all": _scan_release_all_numpy,
}

if HAVE_NUMBA:
    _NUMBA_IMPLS = {
        "normalize_bits": _normalize_bits_numba,
        "hamming": _hamming_numba,
        "scan_release": _scan_release_numba,
        "scan_release_all": _scan_release_all_numba,
    }


def available_backends() -> dict[str, dict]:
    """Every compiled kernel set, keyed by backend name."""
    backends = {"numpy": dict(_NUMPY_IMPLS)}
    if HAVE_NUMBA:
        backends["numba"] = dict(_NUMBA_IMPLS)
    return backends


_requested = os.environ.get("TAPPHRASE_BACKEND", "auto").strip().lower() or "auto"
if _requested not in {"auto", "numba", "numpy"}:
    raise ValueError(
        f"TAPPHRASE_BACKEND={_requested!r}: expected 'auto', 'numba' or 'numpy'"
    )
if _requested == "numba" and not HAVE_NUMBA:
    raise RuntimeError("TAPPHRASE_BACKEND=numba but numba is not importable")

if _requested in {"auto", "numba"} and HAVE_NUMBA:
    BACKEND = "numba"
    _active = _NUMBA_IMPLS
else:
    BACKEND = "numpy"
    _active = _NUMPY_IMPLS

normalize_bits = _active["normalize_bits"]
hamming = _active["hamming"]
scan_release = _active["scan_release"]
scan_release_all = _active["scan_release_all"]
