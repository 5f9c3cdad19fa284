"""Inner loops of the constant solvers.

Every kernel exists twice: a numba ``@njit`` version and a plain numpy
version with identical results. The numba path is used when numba imports
and ``CONDPRES_BACKEND`` is not set to ``numpy``.

Shared arguments:
  verify, falsify  uint8 (worlds x conditionals) indicator matrices,
                   restricted to the worlds of finite prior rank
  base             int64 prior rank of those worlds
  k                int64 falsification constants, one per conditional
"""

from __future__ import annotations

import os

import numpy as np

BIG = np.int64(1 << 40)

CONVERGED = 0
CAP_EXHAUSTED = 1
UNSATISFIABLE = 2

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _default_backend() -> str:
    wanted = os.environ.get("CONDPRES_BACKEND", "numba").strip().lower()
    if wanted not in {"numba", "numpy"}:
        raise ValueError(f"CONDPRES_BACKEND must be 'numba' or 'numpy', not {wanted!r}")
    return "numba" if wanted == "numba" and HAVE_NUMBA else "numpy"


BACKEND = _default_backend()


def set_backend(name: str) -> None:
    global BACKEND
    if name not in {"numba", "numpy"}:
        raise ValueError(name)
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    BACKEND = name


# ---------------------------------------------------------------------------
# numpy


def _np_side_minima(verify, falsify, penalty, k, i):
    own = falsify[:, i].astype(np.int64) * k[i]
    rest = penalty - own
    v = verify[:, i].astype(bool)
    f = falsify[:, i].astype(bool)
    min_v = rest[v].min() if v.any() else BIG
    min_f = rest[f].min() if f.any() else BIG
    return min_v, min_f


def np_fixed_point(verify, falsify, base, init, lower, clamp, cap):
    """Gauss-Seidel sweep ``k_i <- max(lower_i, 1 + min_V - min_F)`` in conditional order."""
    n = verify.shape[1]
    k = init.astype(np.int64).copy()
    penalty = base.astype(np.int64) + falsify.astype(np.int64) @ k
    monotone = True
    stable = 0
    updates = 0
    i = 0
    while stable < n:
        if updates >= cap:
            return k, CAP_EXHAUSTED, updates, monotone
        min_v, min_f = _np_side_minima(verify, falsify, penalty, k, i)
        if min_f >= BIG:
            new = lower[i]
        elif min_v >= BIG:
            return k, UNSATISFIABLE, updates, monotone
        else:
            new = 1 + min_v - min_f
            if clamp and new < lower[i]:
                new = lower[i]
        updates += 1
        if new != k[i]:
            if new < k[i]:
                monotone = False
            penalty += falsify[:, i].astype(np.int64) * (new - k[i])
            k[i] = new
            stable = 0
        else:
            stable += 1
        i = (i + 1) % n
    return k, CONVERGED, updates, monotone


def np_gaps(verify, falsify, base, k):
    """Slack ``min_F - min_V`` of the total penalty for every conditional."""
    penalty = base.astype(np.int64) + falsify.astype(np.int64) @ k.astype(np.int64)
    n = verify.shape[1]
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        v = verify[:, i].astype(bool)
        f = falsify[:, i].astype(bool)
        min_v = penalty[v].min() if v.any() else BIG
        min_f = penalty[f].min() if f.any() else BIG
        out[i] = min_f - min_v
    return out


def np_brute_force(verify, falsify, base, lower, bound, chunk=1 << 15):
    """First vector in ``prod(range(lower_i, bound + 1))`` (lexicographic) with all slacks positive."""
    n = verify.shape[1]
    if n == 0:
        return np.zeros(0, dtype=np.int64), True
    radix = (bound - lower + 1).astype(np.int64)
    if (radix <= 0).any():
        return np.zeros(n, dtype=np.int64), False
    total = int(np.prod(radix))
    strides = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        strides[j] = strides[j + 1] * radix[j + 1]
    F = falsify.astype(np.int64)
    vmask = verify.astype(bool)
    fmask = falsify.astype(bool)
    base = base.astype(np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cand = (idx[:, None] // strides[None, :]) % radix[None, :] + lower[None, :]
        penalty = base[:, None] + F @ cand.T
        ok = np.ones(idx.size, dtype=bool)
        for i in range(n):
            min_v = np.where(vmask[:, i][:, None], penalty, BIG).min(axis=0)
            min_f = np.where(fmask[:, i][:, None], penalty, BIG).min(axis=0)
            if not vmask[:, i].any():
                ok[:] = False
            ok &= (min_f > min_v) | (min_f >= BIG)
        hits = np.flatnonzero(ok)
        if hits.size:
            return cand[hits[0]].astype(np.int64), True
    return np.zeros(n, dtype=np.int64), False


# ---------------------------------------------------------------------------
# numba

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _nb_side_minima(verify, falsify, penalty, k, i):
        min_v = BIG
        min_f = BIG
        for w in range(penalty.shape[0]):
            if verify[w, i]:
                if penalty[w] < min_v:
                    min_v = penalty[w]
            elif falsify[w, i]:
                s = penalty[w] - k[i]
                if s < min_f:
                    min_f = s
        return min_v, min_f

    @numba.njit(cache=True)
    def nb_fixed_point(verify, falsify, base, init, lower, clamp, cap):
        m, n = verify.shape
        k = init.copy()
        penalty = base.copy()
        for w in range(m):
            for j in range(n):
                if falsify[w, j]:
                    penalty[w] += k[j]
        monotone = True
        stable = 0
        updates = 0
        i = 0
        while stable < n:
            if updates >= cap:
                return k, CAP_EXHAUSTED, updates, monotone
            min_v, min_f = _nb_side_minima(verify, falsify, penalty, k, i)
            if min_f >= BIG:
                new = lower[i]
            elif min_v >= BIG:
                return k, UNSATISFIABLE, updates, monotone
            else:
                new = 1 + min_v - min_f
                if clamp and new < lower[i]:
                    new = lower[i]
            updates += 1
            if new != k[i]:
                if new < k[i]:
                    monotone = False
                d = new - k[i]
                for w in range(m):
                    if falsify[w, i]:
                        penalty[w] += d
                k[i] = new
                stable = 0
            else:
                stable += 1
            i = (i + 1) % n
        return k, CONVERGED, updates, monotone

    @numba.njit(cache=True)
    def nb_gaps(verify, falsify, base, k):
        m, n = verify.shape
        penalty = base.copy()
        for w in range(m):
            for j in range(n):
                if falsify[w, j]:
                    penalty[w] += k[j]
        out = np.empty(n, dtype=np.int64)
        for i in range(n):
            min_v = BIG
            min_f = BIG
            for w in range(m):
                if verify[w, i]:
                    if penalty[w] < min_v:
                        min_v = penalty[w]
                elif falsify[w, i]:
                    if penalty[w] < min_f:
                        min_f = penalty[w]
            out[i] = min_f - min_v
        return out

    @numba.njit(cache=True)
    def nb_brute_force(verify, falsify, base, lower, bound):
        m, n = verify.shape
        k = lower.copy()
        if n == 0:
            return k, True
        for j in range(n):
            if lower[j] > bound[j]:
                return k, False
        penalty = np.empty(m, dtype=np.int64)
        while True:
            for w in range(m):
                s = base[w]
                for j in range(n):
                    if falsify[w, j]:
                        s += k[j]
                penalty[w] = s
            ok = True
            for i in range(n):
                min_v = BIG
                min_f = BIG
                for w in range(m):
                    if verify[w, i]:
                        if penalty[w] < min_v:
                            min_v = penalty[w]
                    elif falsify[w, i]:
                        if penalty[w] < min_f:
                            min_f = penalty[w]
                if min_v >= BIG or (min_f < BIG and min_f <= min_v):
                    ok = False
                    break
            if ok:
                return k, True
            # odometer, last component fastest
            j = n - 1
            while j >= 0:
                if k[j] < bound[j]:
                    k[j] += 1
                    break
                k[j] = lower[j]
                j -= 1
            if j < 0:
                return k, False


# ---------------------------------------------------------------------------
# dispatch


def _prep(verify, falsify, base):
    return (
        np.ascontiguousarray(verify, dtype=np.uint8),
        np.ascontiguousarray(falsify, dtype=np.uint8),
        np.ascontiguousarray(base, dtype=np.int64),
    )


def fixed_point(verify, falsify, base, init, lower, clamp=True, cap=1000, backend=None):
    """Returns ``(k, status, updates, monotone)``; status is one of the module constants."""
    verify, falsify, base = _prep(verify, falsify, base)
    init = np.ascontiguousarray(init, dtype=np.int64)
    lower = np.ascontiguousarray(lower, dtype=np.int64)
    if (backend or BACKEND) == "numba":
        k, status, updates, mono = nb_fixed_point(verify, falsify, base, init, lower, bool(clamp), int(cap))
    else:
        k, status, updates, mono = np_fixed_point(verify, falsify, base, init, lower, bool(clamp), int(cap))
    return np.asarray(k, dtype=np.int64), int(status), int(updates), bool(mono)


def gaps(verify, falsify, base, k, backend=None):
    verify, falsify, base = _prep(verify, falsify, base)
    k = np.ascontiguousarray(k, dtype=np.int64)
    if (backend or BACKEND) == "numba":
        return nb_gaps(verify, falsify, base, k)
    return np_gaps(verify, falsify, base, k)


def brute_force(verify, falsify, base, lower, bound, backend=None):
    """Returns ``(k, found)``."""
    verify, falsify, base = _prep(verify, falsify, base)
    lower = np.ascontiguousarray(lower, dtype=np.int64)
    bound = np.ascontiguousarray(np.broadcast_to(np.asarray(bound, dtype=np.int64), lower.shape))
    if (backend or BACKEND) == "numba":
        k, found = nb_brute_force(verify, falsify, base, lower, bound)
    else:
        k, found = np_brute_force(verify, falsify, base, lower, bound)
    return np.asarray(k, dtype=np.int64), bool(found)
