"""Hot numeric kernels: subgroup closure and packed-bitset matrix tests.

Two interchangeable implementations live here.  The numba versions are
plain loops compiled with @njit; the numpy versions are vectorized and
need no JIT.  ``JOINLAT_BACKEND=numpy`` forces the fallback; the default
is numba when it imports cleanly.  ``benchmarks/bench_kernels.py``
compares the two.

Bitset convention: a set over ``n`` points is a row of ``ceil(n/64)``
uint64 words, bit ``i`` of word ``i // 64`` (little-endian bit order).
"""

from __future__ import annotations

import numpy as np

from .config import backend_name

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


# ---------------------------------------------------------------------------
# packing helpers (shared, numpy either way)
# ---------------------------------------------------------------------------


def words_for(n: int) -> int:
    return max(1, (n + 63) // 64)


def pack_rows(rows: np.ndarray) -> np.ndarray:
    """Pack a (N, n) boolean matrix into (N, words_for(n)) uint64 rows."""
    rows = np.asarray(rows, dtype=np.bool_)
    if rows.ndim == 1:
        rows = rows[None, :]
    n = rows.shape[1]
    w = words_for(n)
    padded = np.zeros((rows.shape[0], w * 64), dtype=np.bool_)
    padded[:, :n] = rows
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view(np.uint64).reshape(rows.shape[0], w)


def unpack_rows(packed: np.ndarray, n: int) -> np.ndarray:
    packed = np.atleast_2d(packed)
    as_bytes = packed.view(np.uint8).reshape(packed.shape[0], -1)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :n].astype(np.bool_)


def pack_indices(indices, n: int) -> np.ndarray:
    row = np.zeros(n, dtype=np.bool_)
    idx = np.fromiter(indices, dtype=np.int64) if not isinstance(indices, np.ndarray) else indices
    if idx.size:
        row[idx] = True
    return pack_rows(row)[0]


def popcount_rows(packed: np.ndarray) -> np.ndarray:
    packed = np.atleast_2d(packed)
    return np.bitwise_count(packed).sum(axis=1, dtype=np.int64)


# ---------------------------------------------------------------------------
# closure of a subset under the group multiplication table
# ---------------------------------------------------------------------------


@njit(cache=True)
def _closure_nb(mul, seed, stop_size):
    n = mul.shape[0]
    member = np.zeros(n, dtype=np.bool_)
    elems = np.empty(n, dtype=np.int64)
    member[0] = True
    elems[0] = 0
    count = 1
    for k in range(seed.shape[0]):
        s = seed[k]
        if not member[s]:
            member[s] = True
            elems[count] = s
            count += 1
    qi = 0
    while qi < count:
        x = elems[qi]
        j = 0
        while j < count:
            y = elems[j]
            z = mul[x, y]
            if not member[z]:
                member[z] = True
                elems[count] = z
                count += 1
            z = mul[y, x]
            if not member[z]:
                member[z] = True
                elems[count] = z
                count += 1
            j += 1
        if count > stop_size:
            # only the full group has more elements than its largest
            # proper divisor, so the closure is everything
            for i in range(n):
                member[i] = True
            return member
        qi += 1
    return member


def _closure_np(mul, seed, stop_size):
    n = mul.shape[0]
    member = np.zeros(n, dtype=np.bool_)
    member[0] = True
    if seed.size:
        member[seed] = True
    frontier = np.flatnonzero(member)
    known = frontier
    while frontier.size:
        prods = np.concatenate(
            [
                mul[np.ix_(frontier, known)].ravel(),
                mul[np.ix_(known, frontier)].ravel(),
            ]
        )
        prods = np.unique(prods)
        fresh = prods[~member[prods]]
        if not fresh.size:
            break
        member[fresh] = True
        known = np.flatnonzero(member)
        if known.size > stop_size:
            member[:] = True
            return member
        frontier = fresh
    return member


# ---------------------------------------------------------------------------
# pairwise subset tests over packed rows
# ---------------------------------------------------------------------------


@njit(cache=True)
def _subset_matrix_nb(a, b):
    na = a.shape[0]
    nb = b.shape[0]
    w = a.shape[1]
    out = np.empty((na, nb), dtype=np.bool_)
    for i in range(na):
        for j in range(nb):
            ok = True
            for k in range(w):
                if a[i, k] & ~b[j, k]:
                    ok = False
                    break
            out[i, j] = ok
    return out


def _subset_matrix_np(a, b):
    # accumulate per-word violations: a word at a time keeps temporaries 2-D
    bad = np.zeros((a.shape[0], b.shape[0]), dtype=np.bool_)
    for k in range(a.shape[1]):
        bad |= (a[:, k, None] & ~b[None, :, k]) != 0
    return ~bad


@njit(cache=True)
def _disjoint_matrix_nb(a, b):
    na = a.shape[0]
    nb = b.shape[0]
    w = a.shape[1]
    out = np.empty((na, nb), dtype=np.bool_)
    for i in range(na):
        for j in range(nb):
            hit = False
            for k in range(w):
                if a[i, k] & b[j, k]:
                    hit = True
                    break
            out[i, j] = not hit
    return out


def _disjoint_matrix_np(a, b):
    hit = np.zeros((a.shape[0], b.shape[0]), dtype=np.bool_)
    for k in range(a.shape[1]):
        hit |= (a[:, k, None] & b[None, :, k]) != 0
    return ~hit


# ---------------------------------------------------------------------------
# backend dispatch
# ---------------------------------------------------------------------------

_IMPLS = {
    "numba": {
        "closure": _closure_nb,
        "subset_matrix": _subset_matrix_nb,
        "disjoint_matrix": _disjoint_matrix_nb,
    },
    "numpy": {
        "closure": _closure_np,
        "subset_matrix": _subset_matrix_np,
        "disjoint_matrix": _disjoint_matrix_np,
    },
}


def _resolve_backend() -> str:
    name = backend_name()
    if name == "auto":
        return "numba" if _HAVE_NUMBA else "numpy"
    if name == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("JOINLAT_BACKEND=numba but numba is not installed")
    return name


BACKEND = _resolve_backend()
_ACTIVE = _IMPLS[BACKEND]


def closure_members(mul: np.ndarray, seed: np.ndarray, stop_size: int) -> np.ndarray:
    """Membership mask of the subgroup generated by ``seed`` (plus identity).

    ``stop_size`` is the largest proper divisor of the group order: once the
    closure outgrows it, it must be the whole group and the scan stops early.
    """
    seed = np.asarray(seed, dtype=np.int64)
    return _ACTIVE["closure"](mul, seed, stop_size)


def subset_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """out[i, j] = (row i of a) is a subset of (row j of b)."""
    return _ACTIVE["subset_matrix"](np.atleast_2d(a), np.atleast_2d(b))


def disjoint_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """out[i, j] = (row i of a) and (row j of b) share no set bit."""
    return _ACTIVE["disjoint_matrix"](np.atleast_2d(a), np.atleast_2d(b))


def warm_up() -> None:
    """Force JIT compilation / cache load of the active kernels."""
    mul = np.zeros((1, 1), dtype=np.int32)
    closure_members(mul, np.zeros(0, dtype=np.int64), 1)
    one = np.ones((1, 1), dtype=np.uint64)
    subset_matrix(one, one)
    disjoint_matrix(one, one)
