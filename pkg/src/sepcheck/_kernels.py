"""Integer kernels for the quantifier scans and the short-certificate search.

Every kernel exists twice: a loop version compiled with numba and a
vectorized numpy version.  Both return the lexicographically first witness
so results do not depend on the backend.  ``_jit.USE_JIT`` picks the
default; callers may force one with ``backend="numba" | "numpy"``.

Rank arrays use "smaller is better": ``x`` is weakly preferred to ``y``
iff ``rank[x] <= rank[y]``.
"""

from __future__ import annotations

import numpy as np

from . import _jit
from ._jit import njit

NO_WITNESS = -1
# Pattern codes: the conclusion reversed strictly, or stayed indifferent
# although a premise was strict.
WEAK, STRICT = 0, 1

_CHUNK = 2_000_000


def _backend(backend):
    if backend is None:
        return "numba" if _jit.USE_JIT else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _first_true(mask: np.ndarray):
    flat = mask.ravel()
    k = int(np.argmax(flat))
    if not flat[k]:
        return None
    return np.unravel_index(k, mask.shape)


# ---------------------------------------------------------------------------
# opponent independence: R[s0, s_i, rest] over a full order
# ---------------------------------------------------------------------------


@njit(cache=True)
def _oi_scan_nb(R):
    S0, Si, P = R.shape
    for s0 in range(S0):
        for x in range(Si):
            for y in range(Si):
                for p in range(P):
                    for q in range(P):
                        if R[s0, x, q] <= R[s0, x, p] and R[s0, y, q] > R[s0, y, p]:
                            return (s0, x, y, p, q)
    return (NO_WITNESS, 0, 0, 0, 0)


def _oi_scan_np(R):
    prem = R[:, :, None, :] <= R[:, :, :, None]  # [s0, x, p, q]
    fail = R[:, :, None, :] > R[:, :, :, None]  # [s0, y, p, q]
    hit = _first_true(prem[:, :, None] & fail[:, None])
    if hit is None:
        return (NO_WITNESS, 0, 0, 0, 0)
    return tuple(int(v) for v in hit)


def oi_scan(R, backend=None):
    """First ``(s0, s_i, s_i', p, q)`` with ``(s0,s_i,q) >= (s0,s_i,p)`` but
    ``(s0,s_i',q) < (s0,s_i',p)``; ``s0 == -1`` when none exists."""
    R = np.ascontiguousarray(R, dtype=np.int64)
    if _backend(backend) == "numba":
        return tuple(int(v) for v in _oi_scan_nb(R))
    return _oi_scan_np(R)


# ---------------------------------------------------------------------------
# strategic independence: F[s0, s_i, rest] over a family
# ---------------------------------------------------------------------------


@njit(cache=True)
def _si_scan_nb(F):
    S0, Si, P = F.shape
    for a in range(S0):
        for b in range(S0):
            if a == b:
                continue
            for x in range(Si):
                for y in range(Si):
                    for p in range(P):
                        if F[a, x, p] > F[b, x, p] or F[b, y, p] > F[a, y, p]:
                            continue
                        s12 = F[a, x, p] < F[b, x, p] or F[b, y, p] < F[a, y, p]
                        for q in range(P):
                            if F[b, x, q] > F[a, x, q]:
                                continue
                            if F[a, y, q] < F[b, y, q]:
                                return (a, b, x, y, p, q, WEAK)
                            if F[a, y, q] == F[b, y, q] and (s12 or F[b, x, q] < F[a, x, q]):
                                return (a, b, x, y, p, q, STRICT)
    return (NO_WITNESS, 0, 0, 0, 0, 0, 0)


def _si_scan_np(F):
    S0 = F.shape[0]
    W = F[:, None] <= F[None, :]  # W[a, b, s, p]: a weakly over b
    S = F[:, None] < F[None, :]
    E = F[:, None] == F[None, :]
    Wt = W.transpose(1, 0, 2, 3)  # b weakly over a
    St = S.transpose(1, 0, 2, 3)
    for a in range(S0):
        # dims [b, x, y, p, q]
        prem = (
            W[a][:, :, None, :, None]
            & Wt[a][:, None, :, :, None]
            & Wt[a][:, :, None, None, :]
        )
        strict = (
            S[a][:, :, None, :, None]
            | St[a][:, None, :, :, None]
            | St[a][:, :, None, None, :]
        )
        weak_hit = prem & S[a][:, None, :, None, :]
        strict_hit = prem & strict & E[a][:, None, :, None, :]
        code = np.where(weak_hit, 1, 0) + np.where(strict_hit, 2, 0)
        code[a] = 0
        hit = _first_true(code > 0)
        if hit is not None:
            b, x, y, p, q = (int(v) for v in hit)
            pattern = WEAK if code[b, x, y, p, q] == 1 else STRICT
            return (a, b, x, y, p, q, pattern)
    return (NO_WITNESS, 0, 0, 0, 0, 0, 0)


def si_scan(F, backend=None):
    """First ``(a, b, s_i, s_i', p, q, pattern)`` realizing the forbidden
    flip for one opponent; ``a == -1`` when none exists."""
    F = np.ascontiguousarray(F, dtype=np.int64)
    if _backend(backend) == "numba":
        return tuple(int(v) for v in _si_scan_nb(F))
    return _si_scan_np(F)


# ---------------------------------------------------------------------------
# joint independence: Rf[s0, s_plus] and coordinate replacement tables
# ---------------------------------------------------------------------------


def replacement_table(opponent_shape) -> np.ndarray:
    """``repl[k, p, q]``: profile ``p`` with coordinate ``k`` taken from ``q``."""
    opponent_shape = tuple(opponent_shape)
    n = len(opponent_shape)
    P = int(np.prod(opponent_shape)) if n else 1
    coords = np.array(list(np.ndindex(*opponent_shape)), dtype=np.int64).reshape(P, n)
    repl = np.empty((n, P, P), dtype=np.int64)
    for k in range(n):
        mixed = np.broadcast_to(coords[:, None, :], (P, P, n)).copy()
        mixed[:, :, k] = coords[None, :, k]
        repl[k] = np.ravel_multi_index(mixed.reshape(-1, n).T, opponent_shape).reshape(P, P)
    return repl


def ji_count(num_focal: int, num_opponents: int, num_opponent_profiles: int) -> int:
    return num_focal**2 * num_opponents**2 * num_opponent_profiles**4


@njit(cache=True)
def _ji_scan_nb(Rf, repl, pairs):
    P = Rf.shape[1]
    n = repl.shape[0]
    for k in range(pairs.shape[0]):
        a, b = pairs[k, 0], pairs[k, 1]
        for i in range(n):
            for j in range(n):
                for sp in range(P):
                    for spp in range(P):
                        if Rf[a, sp] > Rf[b, spp]:
                            continue
                        s1 = Rf[a, sp] < Rf[b, spp]
                        for tp in range(P):
                            r2 = Rf[a, repl[i, sp, tp]]
                            r3 = Rf[a, repl[i, tp, sp]]
                            cr = Rf[a, tp]
                            for tpp in range(P):
                                l2 = Rf[b, repl[j, spp, tpp]]
                                if l2 > r2:
                                    continue
                                l3 = Rf[b, repl[j, tpp, spp]]
                                if l3 > r3:
                                    continue
                                cl = Rf[b, tpp]
                                if cl > cr:
                                    return (a, b, i, j, sp, spp, tp, tpp, WEAK)
                                if cl == cr and (s1 or l2 < r2 or l3 < r3):
                                    return (a, b, i, j, sp, spp, tp, tpp, STRICT)
    return (NO_WITNESS, 0, 0, 0, 0, 0, 0, 0, 0)


def _ji_block_np(Rf, repl, a, b, i, j, sp_range):
    ra, rb = Rf[a], Rf[b]
    L2 = rb[repl[j]]  # [spp, tpp]
    L3 = rb[repl[j].T]  # [spp, tpp]
    R2 = ra[repl[i]][sp_range]  # [sp, tp]
    R3 = ra[repl[i].T][sp_range]
    P1 = ra[sp_range][:, None] <= rb[None, :]  # [sp, spp]
    S1 = ra[sp_range][:, None] < rb[None, :]
    prem = (
        P1[:, :, None, None]
        & (L2[None, :, None, :] <= R2[:, None, :, None])
        & (L3[None, :, None, :] <= R3[:, None, :, None])
    )
    strict = (
        S1[:, :, None, None]
        | (L2[None, :, None, :] < R2[:, None, :, None])
        | (L3[None, :, None, :] < R3[:, None, :, None])
    )
    weak_fail = rb[None, :] > ra[:, None]  # [tp, tpp]
    tie = rb[None, :] == ra[:, None]
    code = np.where(prem & weak_fail[None, None], 1, 0) + np.where(
        prem & strict & tie[None, None], 2, 0
    )
    return code


def _ji_scan_np(Rf, repl, pairs):
    P = Rf.shape[1]
    n = repl.shape[0]
    step = max(1, _CHUNK // max(1, P**3))
    for a, b in pairs:
        a, b = int(a), int(b)
        for i in range(n):
            for j in range(n):
                for start in range(0, P, step):
                    rng = np.arange(start, min(P, start + step))
                    code = _ji_block_np(Rf, repl, a, b, i, j, rng)
                    hit = _first_true(code > 0)
                    if hit is not None:
                        sp, spp, tp, tpp = (int(v) for v in hit)
                        pattern = WEAK if code[sp, spp, tp, tpp] == 1 else STRICT
                        return (a, b, i, j, int(rng[sp]), spp, tp, tpp, pattern)
    return (NO_WITNESS, 0, 0, 0, 0, 0, 0, 0, 0)


def focal_pairs(num_focal: int) -> np.ndarray:
    """All ordered focal pairs ``(a, b)`` in lexicographic order."""
    a, b = np.divmod(np.arange(num_focal * num_focal, dtype=np.int64), num_focal)
    return np.stack([a, b], axis=1)


def ji_scan(Rf, repl, backend=None, pairs=None):
    """First ``(a, b, i, j, s+, s'+, t+, t'+, pattern)`` violating joint
    independence (profiles as flat opponent-profile indices).

    ``pairs`` lists the focal pairs ``(a, b)`` to scan, in scan order.
    """
    Rf = np.ascontiguousarray(Rf, dtype=np.int64)
    repl = np.ascontiguousarray(repl, dtype=np.int64)
    pairs = focal_pairs(Rf.shape[0]) if pairs is None else np.asarray(pairs, dtype=np.int64)
    pairs = np.ascontiguousarray(pairs.reshape(-1, 2))
    if _backend(backend) == "numba":
        return tuple(int(v) for v in _ji_scan_nb(Rf, repl, pairs))
    return _ji_scan_np(Rf, repl, pairs)


# ---------------------------------------------------------------------------
# exhaustive multiset search for a zero-sum combination of rows
# ---------------------------------------------------------------------------


@njit(cache=True)
def _balanced_search_nb(rows, n_strict, length, cap):
    K, d = rows.shape
    counts = np.zeros(K, dtype=np.int64)
    if length <= 0 or n_strict == 0:
        return counts, False
    idx = np.full(length, -1, dtype=np.int64)
    placed = np.zeros(length, dtype=np.bool_)
    v = np.zeros(d, dtype=np.int64)
    depth = 0
    while depth >= 0:
        if placed[depth]:
            for c in range(d):
                v[c] -= rows[idx[depth], c]
            placed[depth] = False
        idx[depth] += 1
        limit = n_strict if depth == 0 else K
        if idx[depth] >= limit:
            depth -= 1
            continue
        k = idx[depth]
        l1 = 0
        for c in range(d):
            v[c] += rows[k, c]
            l1 += abs(v[c])
        placed[depth] = True
        rem = length - depth - 1
        if l1 > cap * rem:
            continue
        if rem == 0:
            if l1 == 0:
                for t in range(length):
                    counts[idx[t]] += 1
                return counts, True
            continue
        depth += 1
        idx[depth] = k - 1
        placed[depth] = False
    return counts, False


def balanced_search(rows, n_strict, length, backend=None):
    """Multiset of exactly ``length`` rows summing to zero whose
    smallest-index member is among the first ``n_strict`` rows.

    Returns a count vector, or None.  Rows must be ordered strict first.
    The numpy backend runs the same loop uncompiled.
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if rows.shape[0] == 0:
        return None
    cap = int(np.abs(rows).sum(axis=1).max())
    fn = _balanced_search_nb if _backend(backend) == "numba" else _balanced_search_nb.py_func
    counts, found = fn(rows, int(n_strict), int(length), cap)
    return np.asarray(counts) if found else None


if not _jit.HAVE_NUMBA:  # pragma: no cover
    _balanced_search_nb.py_func = _balanced_search_nb
