"""Hot numeric kernels with numba and pure-numpy implementations.

Two inner loops dominate training time: the SMO pair-update loop of the
dual SVM solver and the CART best-split scan. Both exist here twice:

* ``*_jit``   -- explicit loops compiled with ``numba.njit``;
* ``*_numpy`` -- vectorized numpy fallback with identical update logic.

The active implementation is chosen once at import time. Setting the
environment variable ``HSIHYBRID_DISABLE_NUMBA=1`` (or having no numba
installed) selects the numpy path. ``benchmarks/bench_accel.py`` compares
the two. The paths are numerically equivalent but not bit-identical:
vectorized reductions round differently than scalar loops.
"""

import os

import numpy as np

_FLAG = os.environ.get("HSIHYBRID_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false")

if not _DISABLED:
    try:
        from numba import njit
        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False

if not NUMBA_ENABLED:  # dummy decorator so the jit source still imports
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# Hard cap on full SMO passes; a safety valve against pathological inputs,
# never reached on the scales this package targets.
SMO_PASS_CAP = 10_000

_U64 = 0xFFFFFFFFFFFFFFFF


def splitmix64(state):
    """One step of the splitmix64 generator on a Python int state.

    Returns (next_state, output). Both SMO paths draw their random
    second-choice indices from this exact stream, so a fixed seed gives
    the same candidate sequence regardless of the backend.
    """
    state = (state + 0x9E3779B97F4A7C15) & _U64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    return state, z ^ (z >> 31)


@njit(cache=True)
def _splitmix64_nb(state):
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return state, z ^ (z >> np.uint64(31))


# --------------------------------------------------------------------- SMO
#
# Dual soft-margin SVM via sequential minimal optimization. State per run:
# alpha (box-constrained multipliers), b (bias), E (error cache, f(x_i)-y_i,
# updated incrementally after every accepted pair step). Kernel values are
# computed on demand; no n x n matrix is materialized.


@njit(cache=True)
def _kval_jit(X, i, j, kernel_kind, gamma):
    d = X.shape[1]
    if kernel_kind == 0:
        s = 0.0
        for c in range(d):
            s += X[i, c] * X[j, c]
        return s
    s = 0.0
    for c in range(d):
        diff = X[i, c] - X[j, c]
        s += diff * diff
    return np.exp(-gamma * s)


@njit(cache=True)
def _krow_jit(X, i, kernel_kind, gamma, out):
    n, d = X.shape
    if kernel_kind == 0:
        for k in range(n):
            s = 0.0
            for c in range(d):
                s += X[k, c] * X[i, c]
            out[k] = s
    else:
        for k in range(n):
            s = 0.0
            for c in range(d):
                diff = X[k, c] - X[i, c]
                s += diff * diff
            out[k] = np.exp(-gamma * s)


@njit(cache=True)
def _try_pair_jit(X, y, alpha, E, b_box, i, j, C, tol, kernel_kind, gamma,
                  row_i, row_j):
    if i == j:
        return False
    ai = alpha[i]
    aj = alpha[j]
    yi = y[i]
    yj = y[j]
    Ei = E[i]
    Ej = E[j]
    kii = _kval_jit(X, i, i, kernel_kind, gamma)
    kjj = _kval_jit(X, j, j, kernel_kind, gamma)
    kij = _kval_jit(X, i, j, kernel_kind, gamma)
    eta = kii + kjj - 2.0 * kij
    if eta <= 0.0:
        return False
    if yi != yj:
        lo = max(0.0, aj - ai)
        hi = min(C, C + aj - ai)
    else:
        lo = max(0.0, ai + aj - C)
        hi = min(C, ai + aj)
    if lo >= hi:
        return False
    aj_new = aj + yj * (Ei - Ej) / eta
    if aj_new < lo:
        aj_new = lo
    elif aj_new > hi:
        aj_new = hi
    # Platt's relative minimum-step rule keyed to the KKT tolerance.
    if abs(aj_new - aj) < tol * (aj_new + aj + tol):
        return False
    ai_new = ai + yi * yj * (aj - aj_new)
    d_ai = ai_new - ai
    d_aj = aj_new - aj
    b = b_box[0]
    b1 = b - Ei - yi * d_ai * kii - yj * d_aj * kij
    b2 = b - Ej - yi * d_ai * kij - yj * d_aj * kjj
    if 0.0 < ai_new < C:
        b_new = b1
    elif 0.0 < aj_new < C:
        b_new = b2
    else:
        b_new = 0.5 * (b1 + b2)
    _krow_jit(X, i, kernel_kind, gamma, row_i)
    _krow_jit(X, j, kernel_kind, gamma, row_j)
    shift = b_new - b
    n = X.shape[0]
    for k in range(n):
        E[k] += yi * d_ai * row_i[k] + yj * d_aj * row_j[k] + shift
    alpha[i] = ai_new
    alpha[j] = aj_new
    b_box[0] = b_new
    return True


@njit(cache=True)
def _smo_jit(X, y, C, tol, max_passes, kernel_kind, gamma, seed, pass_cap):
    n = X.shape[0]
    alpha = np.zeros(n)
    b_box = np.zeros(1)
    E = -y.copy()
    row_i = np.empty(n)
    row_j = np.empty(n)
    state = np.uint64(seed)
    quiet = 0
    passes = 0
    while quiet < max_passes and passes < pass_cap:
        changed = 0
        for i in range(n):
            ri = y[i] * E[i]
            if (ri < -tol and alpha[i] < C) or (ri > tol and alpha[i] > 0.0):
                # second choice: largest |E_i - E_j|
                best_j = -1
                best_gap = -1.0
                Ei = E[i]
                for j in range(n):
                    if j == i:
                        continue
                    gap = abs(Ei - E[j])
                    if gap > best_gap:
                        best_gap = gap
                        best_j = j
                if _try_pair_jit(X, y, alpha, E, b_box, i, best_j, C, tol,
                                 kernel_kind, gamma, row_i, row_j):
                    changed += 1
                    continue
                for _ in range(n - 1):
                    state, r = _splitmix64_nb(state)
                    j = int(r % np.uint64(n - 1))
                    if j >= i:
                        j += 1
                    if _try_pair_jit(X, y, alpha, E, b_box, i, j, C, tol,
                                     kernel_kind, gamma, row_i, row_j):
                        changed += 1
                        break
        passes += 1
        if changed == 0:
            quiet += 1
        else:
            quiet = 0
    return alpha, b_box[0], passes


class _SmoState:
    """Mutable solver state for the numpy path."""

    def __init__(self, X, y, kernel_kind, gamma):
        self.X = X
        self.y = y
        self.kernel_kind = kernel_kind
        self.gamma = gamma
        self.alpha = np.zeros(len(y))
        self.b = 0.0
        self.E = -y.copy()
        self.sq = np.einsum("ij,ij->i", X, X) if kernel_kind == 1 else None

    def krow(self, i):
        dots = self.X @ self.X[i]
        if self.kernel_kind == 0:
            return dots
        d2 = self.sq + self.sq[i] - 2.0 * dots
        np.maximum(d2, 0.0, out=d2)
        return np.exp(-self.gamma * d2)

    def kval(self, i, j):
        if self.kernel_kind == 0:
            return float(self.X[i] @ self.X[j])
        diff = self.X[i] - self.X[j]
        return float(np.exp(-self.gamma * (diff @ diff)))


def _try_pair_numpy(st, i, j, C, tol):
    if i == j:
        return False
    alpha, y, E = st.alpha, st.y, st.E
    ai, aj = alpha[i], alpha[j]
    yi, yj = y[i], y[j]
    Ei, Ej = E[i], E[j]
    kii = st.kval(i, i)
    kjj = st.kval(j, j)
    kij = st.kval(i, j)
    eta = kii + kjj - 2.0 * kij
    if eta <= 0.0:
        return False
    if yi != yj:
        lo, hi = max(0.0, aj - ai), min(C, C + aj - ai)
    else:
        lo, hi = max(0.0, ai + aj - C), min(C, ai + aj)
    if lo >= hi:
        return False
    aj_new = min(hi, max(lo, aj + yj * (Ei - Ej) / eta))
    if abs(aj_new - aj) < tol * (aj_new + aj + tol):
        return False
    ai_new = ai + yi * yj * (aj - aj_new)
    d_ai, d_aj = ai_new - ai, aj_new - aj
    b1 = st.b - Ei - yi * d_ai * kii - yj * d_aj * kij
    b2 = st.b - Ej - yi * d_ai * kij - yj * d_aj * kjj
    if 0.0 < ai_new < C:
        b_new = b1
    elif 0.0 < aj_new < C:
        b_new = b2
    else:
        b_new = 0.5 * (b1 + b2)
    E += yi * d_ai * st.krow(i) + yj * d_aj * st.krow(j) + (b_new - st.b)
    alpha[i], alpha[j] = ai_new, aj_new
    st.b = b_new
    return True


def _smo_numpy(X, y, C, tol, max_passes, kernel_kind, gamma, seed, pass_cap):
    n = X.shape[0]
    st = _SmoState(X, y, kernel_kind, gamma)
    state = int(seed) & _U64
    quiet = 0
    passes = 0
    while quiet < max_passes and passes < pass_cap:
        changed = 0
        for i in range(n):
            ri = y[i] * st.E[i]
            if (ri < -tol and st.alpha[i] < C) or (ri > tol and st.alpha[i] > 0.0):
                gaps = np.abs(st.E[i] - st.E)
                gaps[i] = -1.0
                best_j = int(np.argmax(gaps))
                if _try_pair_numpy(st, i, best_j, C, tol):
                    changed += 1
                    continue
                for _ in range(n - 1):
                    state, r = splitmix64(state)
                    j = int(r % (n - 1))
                    if j >= i:
                        j += 1
                    if _try_pair_numpy(st, i, j, C, tol):
                        changed += 1
                        break
        passes += 1
        quiet = quiet + 1 if changed == 0 else 0
    return st.alpha, st.b, passes


def smo_solve_jit(X, y, C, tol, max_passes, kernel_kind, gamma, seed,
                  pass_cap=SMO_PASS_CAP):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    return _smo_jit(X, y, float(C), float(tol), int(max_passes),
                    int(kernel_kind), float(gamma), np.uint64(seed & _U64),
                    int(pass_cap))


def smo_solve_numpy(X, y, C, tol, max_passes, kernel_kind, gamma, seed,
                    pass_cap=SMO_PASS_CAP):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    return _smo_numpy(X, y, float(C), float(tol), int(max_passes),
                      int(kernel_kind), float(gamma), int(seed), int(pass_cap))


smo_solve = smo_solve_jit if NUMBA_ENABLED else smo_solve_numpy


# -------------------------------------------------------------- tree splits
#
# Best Gini split over candidate features. Thresholds are midpoints of
# consecutive distinct sorted values. Ties keep the first candidate, i.e.
# the smallest feature index, then the smallest threshold.


@njit(cache=True)
def _best_split_jit(X, rows, ycodes, feats, n_classes):
    m = rows.shape[0]
    counts = np.zeros(n_classes, np.int64)
    for r in range(m):
        counts[ycodes[rows[r]]] += 1
    parent = 1.0
    for c in range(n_classes):
        p = counts[c] / m
        parent -= p * p
    best_feat = -1
    best_thr = 0.0
    best_gain = 0.0
    vals = np.empty(m)
    left = np.zeros(n_classes, np.int64)
    for fi in range(feats.shape[0]):
        f = feats[fi]
        for r in range(m):
            vals[r] = X[rows[r], f]
        order = np.argsort(vals)
        for c in range(n_classes):
            left[c] = 0
        n_left = 0
        for r in range(m - 1):
            left[ycodes[rows[order[r]]]] += 1
            n_left += 1
            lo_v = vals[order[r]]
            hi_v = vals[order[r + 1]]
            if hi_v > lo_v:
                n_right = m - n_left
                gl = 1.0
                gr = 1.0
                for c in range(n_classes):
                    pl = left[c] / n_left
                    pr = (counts[c] - left[c]) / n_right
                    gl -= pl * pl
                    gr -= pr * pr
                gain = parent - (n_left * gl + n_right * gr) / m
                if gain > best_gain:
                    best_gain = gain
                    best_feat = f
                    best_thr = 0.5 * (lo_v + hi_v)
    return best_feat, best_thr, best_gain


def _best_split_numpy(X, rows, ycodes, feats, n_classes):
    m = rows.shape[0]
    ysub = ycodes[rows]
    counts = np.bincount(ysub, minlength=n_classes).astype(np.int64)
    p = counts / m
    parent = 1.0 - float(p @ p)
    best_feat, best_thr, best_gain = -1, 0.0, 0.0
    onerange = np.arange(m)
    for f in feats:
        vals = X[rows, f]
        order = np.argsort(vals)
        sv = vals[order]
        bounds = np.nonzero(sv[1:] > sv[:-1])[0]
        if bounds.size == 0:
            continue
        onehot = np.zeros((m, n_classes), np.int64)
        onehot[onerange, ysub[order]] = 1
        cum = np.cumsum(onehot, axis=0)
        lc = cum[bounds]
        nl = (bounds + 1).astype(np.float64)
        nr = m - nl
        rc = counts[None, :] - lc
        gl = 1.0 - np.sum((lc / nl[:, None]) ** 2, axis=1)
        gr = 1.0 - np.sum((rc / nr[:, None]) ** 2, axis=1)
        gain = parent - (nl * gl + nr * gr) / m
        k = int(np.argmax(gain))
        if gain[k] > best_gain:
            best_gain = float(gain[k])
            best_feat = int(f)
            best_thr = 0.5 * float(sv[bounds[k]] + sv[bounds[k] + 1])
    return best_feat, best_thr, best_gain


def best_split_jit(X, rows, ycodes, feats, n_classes):
    return _best_split_jit(
        np.ascontiguousarray(X, dtype=np.float64),
        np.ascontiguousarray(rows, dtype=np.int64),
        np.ascontiguousarray(ycodes, dtype=np.int64),
        np.ascontiguousarray(feats, dtype=np.int64),
        int(n_classes),
    )


def best_split_numpy(X, rows, ycodes, feats, n_classes):
    return _best_split_numpy(
        np.asarray(X, dtype=np.float64),
        np.asarray(rows, dtype=np.int64),
        np.asarray(ycodes, dtype=np.int64),
        np.asarray(feats, dtype=np.int64),
        int(n_classes),
    )


best_split = best_split_jit if NUMBA_ENABLED else best_split_numpy
