"""Sparse elimination kernels: numba fast path with a pure-Python fallback.

Both paths implement the same contract: given a sparse integer matrix,
perform row elimination using only *unit* pivots (entries +-1 over Z, or
any nonzero entry mod a prime), and return the number of pivots together
with the un-eliminated residue ("core").  Unit pivoting keeps the
transformation unimodular, so over Z the matrix is equivalent to
``diag(1,...,1) (+) core`` and Smith normal form / rank computations
only need dense work on the (tiny, in practice) core.

The numba path works on int64 arenas and refuses inputs that could
overflow (status 1) or outgrow its preallocated arena (status 2); the
caller then falls back to the exact big-integer Python path.  Selection:
the environment variable ``BARVINOK2_NO_NUMBA=1`` forces the fallback;
otherwise numba is used when importable.  Both implementations stay
importable for differential testing and benchmarks.
"""

from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "BARVINOK2_NO_NUMBA"

# Guard against values whose products could leave int64 during elimination.
NB_VALUE_BOUND = 1 << 30

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def numba_enabled() -> bool:
    """True when the jitted kernels are selected by environment and install."""
    return NUMBA_AVAILABLE and os.environ.get(ENV_FLAG, "") not in (
        "1",
        "true",
        "yes",
    )


# ---------------------------------------------------------------------------
# pure-Python reference implementation (exact, arbitrary precision)

def eliminate_units_py(rows: dict, modulus: int = 0):
    """Unit-pivot elimination on a dict-of-rows sparse matrix.

    ``rows`` maps row index -> {col: value} and is consumed.  Returns
    ``(npivots, core)`` where ``core`` is the dict of surviving rows
    (over Z: rows without +-1 entries; mod p: always empty).

    Pivot policy: process live rows shortest first (lazy heap), pick the
    unit entry whose column meets the fewest rows.
    """
    import heapq

    colidx = {}
    for r, row in rows.items():
        if modulus:
            for c in list(row):
                row[c] %= modulus
                if not row[c]:
                    del row[c]
        for c in row:
            colidx.setdefault(c, set()).add(r)
    for r in [r for r, row in rows.items() if not row]:
        del rows[r]

    heap = [(len(row), r) for r, row in rows.items()]
    heapq.heapify(heap)
    npiv = 0
    while heap:
        ln, r = heapq.heappop(heap)
        row = rows.get(r)
        if row is None or len(row) != ln:
            continue
        best_c = best_cnt = None
        for c, v in row.items():
            if modulus == 0 and v != 1 and v != -1:
                continue
            cnt = len(colidx.get(c, ()))
            if best_cnt is None or cnt < best_cnt:
                best_c, best_cnt = c, cnt
        if best_c is None:
            continue  # no unit: candidate core row (re-queued if touched later)
        v = row[best_c]
        inv = v if modulus == 0 else pow(v, -1, modulus)
        npiv += 1
        for r2 in list(colidx.get(best_c, ())):
            if r2 == r:
                continue
            row2 = rows.get(r2)
            if row2 is None or best_c not in row2:
                continue
            mult = row2[best_c] * inv
            if modulus:
                mult %= modulus
            for c2, v2 in row.items():
                nv = row2.get(c2, 0) - mult * v2
                if modulus:
                    nv %= modulus
                if nv:
                    row2[c2] = nv
                    colidx.setdefault(c2, set()).add(r2)
                elif c2 in row2:
                    del row2[c2]
            if row2:
                heapq.heappush(heap, (len(row2), r2))
            else:
                del rows[r2]
        for c in row:
            s = colidx.get(c)
            if s is not None:
                s.discard(r)
        del rows[r]
    return npiv, rows


# ---------------------------------------------------------------------------
# numba implementation

@njit(cache=False)
def _modpow(base, exp, mod):  # pragma: no cover - jitted
    result = 1
    base %= mod
    while exp > 0:
        if exp & 1:
            result = result * base % mod
        base = base * base % mod
        exp >>= 1
    return result


@njit(cache=False)
def _elim_arena(indptr, incol, inval, nrows, ncols, modulus, acap):  # pragma: no cover - jitted
    """Returns (status, npiv, core_r, core_c, core_v); status 0 ok, 1 overflow, 2 capacity."""
    empty_r = np.empty(0, np.int64)
    empty_c = np.empty(0, np.int64)
    empty_v = np.empty(0, np.int64)

    acol = np.empty(acap, np.int64)
    aval = np.empty(acap, np.int64)
    rptr = np.zeros(nrows + 1, np.int64)
    rln = np.zeros(nrows + 1, np.int64)
    alive = np.zeros(nrows + 1, np.uint8)
    free = 0
    for r in range(nrows):
        rptr[r] = free
        for k in range(indptr[r], indptr[r + 1]):
            v = inval[k]
            if modulus:
                v %= modulus
            if v != 0:
                if free >= acap:
                    return 2, 0, empty_r, empty_c, empty_v
                acol[free] = incol[k]
                aval[free] = v
                free += 1
        rln[r] = free - rptr[r]
        if rln[r] > 0:
            alive[r] = 1

    ccap = free + 16
    chead = np.full(ncols + 1, -1, np.int64)
    ccount = np.zeros(ncols + 1, np.int64)
    cn_row = np.empty(acap + ccap, np.int64)
    cn_next = np.empty(acap + ccap, np.int64)
    cfree = 0
    for r in range(nrows):
        if alive[r] == 1:
            for k in range(rptr[r], rptr[r] + rln[r]):
                c = acol[k]
                cn_row[cfree] = r
                cn_next[cfree] = chead[c]
                chead[c] = cfree
                cfree += 1
                ccount[c] += 1

    bcap = acap + nrows + 16
    bhead = np.full(ncols + 2, -1, np.int64)
    bn_row = np.empty(bcap, np.int64)
    bn_next = np.empty(bcap, np.int64)
    bfree = 0
    for r in range(nrows):
        if alive[r] == 1:
            ln = rln[r]
            bn_row[bfree] = r
            bn_next[bfree] = bhead[ln]
            bhead[ln] = bfree
            bfree += 1

    scratch_c = np.empty(ncols + 1, np.int64)
    scratch_v = np.empty(ncols + 1, np.int64)

    npiv = 0
    cur = 1
    while True:
        r = -1
        while cur <= ncols:
            node = bhead[cur]
            if node == -1:
                cur += 1
                continue
            bhead[cur] = bn_next[node]
            rr = bn_row[node]
            if alive[rr] == 1 and rln[rr] == cur:
                r = rr
                break
        if r == -1:
            break

        base = rptr[r]
        ln = rln[r]
        bc = -1
        bcnt = 0
        bv = 0
        for k in range(base, base + ln):
            v = aval[k]
            if modulus == 0 and v != 1 and v != -1:
                continue
            c = acol[k]
            cnt = ccount[c]
            if bc == -1 or cnt < bcnt:
                bc = c
                bcnt = cnt
                bv = v
        if bc == -1:
            continue

        npiv += 1
        if modulus:
            inv = _modpow(bv, modulus - 2, modulus)
        else:
            inv = bv  # bv in {1,-1}: its own inverse

        node = chead[bc]
        chead[bc] = -1
        ccount[bc] = 0
        while node != -1:
            r2 = cn_row[node]
            node = cn_next[node]
            if r2 == r or alive[r2] == 0:
                continue
            # locate bc in row r2 (columns sorted)
            lo = rptr[r2]
            hi = lo + rln[r2] - 1
            pos = -1
            while lo <= hi:
                mid = (lo + hi) // 2
                cm = acol[mid]
                if cm == bc:
                    pos = mid
                    break
                if cm < bc:
                    lo = mid + 1
                else:
                    hi = mid - 1
            if pos == -1:
                continue
            v2 = aval[pos]
            if modulus:
                mult = v2 * inv % modulus
            else:
                if v2 > NB_VALUE_BOUND or -v2 > NB_VALUE_BOUND:
                    return 1, 0, empty_r, empty_c, empty_v
                mult = v2 * inv
            # r2 <- r2 - mult * r, merged by column
            i = rptr[r2]
            iend = i + rln[r2]
            j = base
            jend = base + ln
            w = 0
            overflow = False
            while i < iend or j < jend:
                if j >= jend or (i < iend and acol[i] < acol[j]):
                    scratch_c[w] = acol[i]
                    scratch_v[w] = aval[i]
                    w += 1
                    i += 1
                elif i >= iend or acol[j] < acol[i]:
                    vj = aval[j]
                    if modulus:
                        nv = (-mult * vj) % modulus
                    else:
                        if vj > NB_VALUE_BOUND or -vj > NB_VALUE_BOUND:
                            overflow = True
                            break
                        nv = -mult * vj
                    if nv != 0:
                        scratch_c[w] = acol[j]
                        scratch_v[w] = nv
                        w += 1
                    j += 1
                else:
                    vj = aval[j]
                    if modulus:
                        nv = (aval[i] - mult * vj) % modulus
                    else:
                        if vj > NB_VALUE_BOUND or -vj > NB_VALUE_BOUND:
                            overflow = True
                            break
                        nv = aval[i] - mult * vj
                    if nv != 0:
                        scratch_c[w] = acol[j]
                        scratch_v[w] = nv
                        w += 1
                    i += 1
                    j += 1
            if overflow:
                return 1, 0, empty_r, empty_c, empty_v
            if free + w > acap:
                return 2, 0, empty_r, empty_c, empty_v
            old_lo = rptr[r2]
            old_hi = old_lo + rln[r2]
            rptr[r2] = free
            rln[r2] = w
            for t in range(w):
                c = scratch_c[t]
                acol[free] = c
                aval[free] = scratch_v[t]
                free += 1
            if w == 0:
                alive[r2] = 0
            else:
                # register fresh columns (those not present before the merge)
                for t in range(w):
                    c = scratch_c[t]
                    lo = old_lo
                    hi = old_hi - 1
                    found = False
                    while lo <= hi:
                        mid = (lo + hi) // 2
                        cm = acol[mid]
                        if cm == c:
                            found = True
                            break
                        if cm < c:
                            lo = mid + 1
                        else:
                            hi = mid - 1
                    if not found:
                        cn_row[cfree] = r2
                        cn_next[cfree] = chead[c]
                        chead[c] = cfree
                        cfree += 1
                        ccount[c] += 1
                bn_row[bfree] = r2
                bn_next[bfree] = bhead[w]
                bhead[w] = bfree
                bfree += 1
                if w < cur:
                    cur = w
        alive[r] = 0

    ncore = 0
    for r in range(nrows):
        if alive[r] == 1:
            ncore += rln[r]
    core_r = np.empty(ncore, np.int64)
    core_c = np.empty(ncore, np.int64)
    core_v = np.empty(ncore, np.int64)
    t = 0
    for r in range(nrows):
        if alive[r] == 1:
            for k in range(rptr[r], rptr[r] + rln[r]):
                core_r[t] = r
                core_c[t] = acol[k]
                core_v[t] = aval[k]
                t += 1
    return 0, npiv, core_r, core_c, core_v


def eliminate_units_nb(rows: dict, nrows: int, ncols: int, modulus: int = 0):
    """Numba-backed elimination; same contract as :func:`eliminate_units_py`.

    Returns ``None`` when the jitted kernel declines (overflow risk or
    arena exhaustion after retries); the caller should fall back.
    """
    if not NUMBA_AVAILABLE:
        return None
    nnz = sum(len(row) for row in rows.values())
    if nnz == 0:
        return 0, {}
    indptr = np.zeros(nrows + 1, np.int64)
    incol = np.empty(nnz, np.int64)
    inval = np.empty(nnz, np.int64)
    k = 0
    for r in range(nrows):
        indptr[r] = k
        row = rows.get(r)
        if row:
            for c in sorted(row):
                v = row[c]
                if modulus == 0 and (v > NB_VALUE_BOUND or -v > NB_VALUE_BOUND):
                    return None
                incol[k] = c
                inval[k] = v
                k += 1
    indptr[nrows] = k

    acap = max(4 * (nnz + ncols) + 64, 1 << 12)
    for _ in range(3):
        status, npiv, core_r, core_c, core_v = _elim_arena(
            indptr, incol, inval, nrows, ncols, modulus, acap
        )
        if status == 0:
            core = {}
            for r, c, v in zip(core_r, core_c, core_v):
                core.setdefault(int(r), {})[int(c)] = int(v)
            return npiv, core
        if status == 1:
            return None
        acap *= 8
    return None


def eliminate_units(rows: dict, nrows: int, ncols: int, modulus: int = 0):
    """Dispatching front end: numba when enabled and safe, else Python.

    ``rows`` (dict row -> {col: value}) is consumed either way.
    """
    if numba_enabled():
        result = eliminate_units_nb(rows, nrows, ncols, modulus)
        if result is not None:
            return result
    return eliminate_units_py(rows, modulus)
