# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled row-reduction kernels; mirrors grassver._kernels_py."""

from libc.stdint cimport uint64_t

BACKEND = "cython"

DEF MAXROWS = 96


def rref2(rows):
    """Canonical RREF over GF(2) on bit-packed integer rows."""
    cdef uint64_t buf[MAXROWS]
    cdef uint64_t r, low
    cdef Py_ssize_t m = 0, t, s
    for obj in rows:
        if m >= MAXROWS:
            raise ValueError("too many rows")
        r = <uint64_t> obj
        # eliminate every existing pivot bit present in r
        for t in range(m):
            low = buf[t] & (~buf[t] + 1)
            if r & low:
                r ^= buf[t]
        if r == 0:
            continue
        low = r & (~r + 1)
        for t in range(m):
            if buf[t] & low:
                buf[t] ^= r
        # insert keeping rows sorted by pivot (ascending)
        s = m
        while s > 0 and (buf[s - 1] & (~buf[s - 1] + 1)) > low:
            buf[s] = buf[s - 1]
            s -= 1
        buf[s] = r
        m += 1
    return tuple(buf[t] for t in range(m))


def rank2(rows):
    """GF(2) rank of bit-packed integer rows."""
    cdef uint64_t piv[MAXROWS]
    cdef uint64_t r, low
    cdef Py_ssize_t m = 0, t
    cdef bint hit
    for obj in rows:
        r = <uint64_t> obj
        while r:
            low = r & (~r + 1)
            hit = False
            for t in range(m):
                if (piv[t] & (~piv[t] + 1)) == low:
                    r ^= piv[t]
                    hit = True
                    break
            if not hit:
                if m >= MAXROWS:
                    raise ValueError("too many rows")
                piv[m] = r
                m += 1
                break
    return m


def rrefp(rows, int q):
    """Canonical RREF over GF(q), q prime; rows are sequences of residues."""
    cdef int buf[MAXROWS][64]
    cdef int pivcol[MAXROWS]
    cdef int work[64]
    cdef Py_ssize_t m = 0, t, s, u, width = -1
    cdef int c, inv
    for obj in rows:
        row = list(obj)
        if width < 0:
            width = len(row)
            if width > 64:
                raise ValueError("row too wide")
        for t in range(width):
            work[t] = <int> row[t] % q
        for s in range(m):
            c = work[pivcol[s]]
            if c:
                for t in range(width):
                    # C % truncates toward zero; keep residues in [0, q)
                    work[t] = (work[t] - c * buf[s][t]) % q
                    if work[t] < 0:
                        work[t] += q
        c = -1
        for t in range(width):
            if work[t]:
                c = <int> t
                break
        if c < 0:
            continue
        inv = _inv_mod(work[c], q)
        if inv != 1:
            for t in range(width):
                work[t] = (work[t] * inv) % q
        for t in range(width):
            if work[t] < 0:
                work[t] += q
        for s in range(m):
            if buf[s][c]:
                inv = buf[s][c]
                for t in range(width):
                    buf[s][t] = (buf[s][t] - inv * work[t]) % q
                    if buf[s][t] < 0:
                        buf[s][t] += q
        if m >= MAXROWS:
            raise ValueError("too many rows")
        s = m
        while s > 0 and pivcol[s - 1] > c:
            for t in range(width):
                buf[s][t] = buf[s - 1][t]
            pivcol[s] = pivcol[s - 1]
            s -= 1
        for t in range(width):
            buf[s][t] = work[t]
        pivcol[s] = c
        m += 1
    return tuple(tuple(buf[s][t] for t in range(width)) for s in range(m))


def rankp(rows, int q):
    """Rank over GF(q), q prime."""
    return len(rrefp(rows, q))


cdef int _inv_mod(int a, int q):
    # extended Euclid; a in (0, q), q prime
    cdef int t = 0, newt = 1, r = q, newr = a % q, quo, tmp
    while newr != 0:
        quo = r / newr
        tmp = t - quo * newt
        t = newt
        newt = tmp
        tmp = r - quo * newr
        r = newr
        newr = tmp
    if t < 0:
        t += q
    return t
