"""Integer counting kernels.

Each kernel has a numba version and a plain numpy version.  The numba path is
used when numba imports and ``FLOEROBS_NUMBA`` is not set to ``0``.  All
arithmetic is on int64 with explicit overflow guards, so both paths return
identical exact results.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

ENABLE_NUMBA = numba is not None and os.environ.get("FLOEROBS_NUMBA", "1") != "0"

_INT64_SAFE = 2 ** 62


def _jit(fn):
    if ENABLE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


# --- Milnor fiber signature --------------------------------------------------

def _brieskorn_counts_py(a1, a2, a3):
    L = a1 * a2 * a3
    j = np.arange(1, a2, dtype=np.int64)[:, None] * (a1 * a3)
    k = np.arange(1, a3, dtype=np.int64)[None, :] * (a1 * a2)
    jk = j + k
    neg = 0
    pos = 0
    for i in range(1, a1):
        s = jk + i * (a2 * a3)
        inner = (s < L) | ((s > 2 * L) & (s < 3 * L))
        mid = (s > L) & (s < 2 * L)
        neg += int(np.count_nonzero(inner))
        pos += int(np.count_nonzero(mid))
    return neg, pos


def _brieskorn_counts_nb(a1, a2, a3):
    L = a1 * a2 * a3
    neg = 0
    pos = 0
    for i in range(1, a1):
        for j in range(1, a2):
            base = i * a2 * a3 + j * a1 * a3
            for k in range(1, a3):
                s = base + k * a1 * a2
                if s < L or (s > 2 * L and s < 3 * L):
                    neg += 1
                elif s > L and s < 2 * L:
                    pos += 1
    return neg, pos


_brieskorn_counts_jit = _jit(_brieskorn_counts_nb)


def brieskorn_counts(a1, a2, a3, use_numba=None):
    """Count triples ``0<i<a1, 0<j<a2, 0<k<a3`` by where ``i/a1+j/a2+k/a3`` falls.

    Returns ``(n_out, n_mid)``: sums in ``(0,1) u (2,3)`` and in ``(1,2)``.
    Sums hitting an integer exactly cannot occur for pairwise coprime inputs.
    """
    if a1 * a2 * a3 * 3 >= _INT64_SAFE:
        raise OverflowError("Brieskorn exponents too large for int64 counting")
    use = ENABLE_NUMBA if use_numba is None else (use_numba and numba is not None)
    if use:
        return tuple(int(x) for x in _brieskorn_counts_jit(a1, a2, a3))
    return _brieskorn_counts_py(a1, a2, a3)


# --- graded-root Delta function ---------------------------------------------

def _delta_py(e0abs, alphas, omegas, length):
    n = np.arange(length, dtype=np.int64)
    out = 1 + e0abs * n
    for a, w in zip(alphas, omegas):
        # ceil(n w / a) = number of x >= 0 with a x < n w
        out -= -((-n * w) // a)
    return out


def _delta_nb(e0abs, alphas, omegas, length):
    out = np.empty(length, dtype=np.int64)
    for n in range(length):
        v = 1 + e0abs * n
        for l in range(alphas.shape[0]):
            v -= -((-n * omegas[l]) // alphas[l])
        out[n] = v
    return out


_delta_jit = _jit(_delta_nb)


def delta_values(e0abs, alphas, omegas, length, use_numba=None):
    """``Delta(n) = 1 + |e0| n - sum_l ceil(n w_l / a_l)`` for ``0 <= n < length``."""
    if length * (e0abs + max(omegas)) >= _INT64_SAFE:
        raise OverflowError("tau range too large for int64")
    alphas = np.asarray(alphas, dtype=np.int64)
    omegas = np.asarray(omegas, dtype=np.int64)
    use = ENABLE_NUMBA if use_numba is None else (use_numba and numba is not None)
    if use:
        return _delta_jit(int(e0abs), alphas, omegas, int(length))
    return _delta_py(int(e0abs), alphas, omegas, int(length))


# --- torus knot signature ---------------------------------------------------

def _torus_sig_py(p, q):
    i = np.arange(1, p, dtype=np.int64)[:, None] * q
    j = np.arange(1, q, dtype=np.int64)[None, :] * p
    s = i + j
    inside = (2 * s > p * q) & (2 * s < 3 * p * q)
    return int(np.count_nonzero(~inside)) - int(np.count_nonzero(inside))


def _torus_sig_nb(p, q):
    total = 0
    for i in range(1, p):
        for j in range(1, q):
            s = 2 * (i * q + j * p)
            if s > p * q and s < 3 * p * q:
                total -= 1
            else:
                total += 1
    return total


_torus_sig_jit = _jit(_torus_sig_nb)


def torus_signature_count(p, q, use_numba=None):
    """Signature of the positive ``(p, q)`` torus knot by lattice-point count."""
    if 6 * p * q >= _INT64_SAFE:
        raise OverflowError("torus knot parameters too large")
    use = ENABLE_NUMBA if use_numba is None else (use_numba and numba is not None)
    if use:
        return int(_torus_sig_jit(p, q))
    return _torus_sig_py(p, q)
