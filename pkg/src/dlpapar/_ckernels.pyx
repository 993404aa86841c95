# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels (universes of at most 64 variables)."""

ctypedef unsigned long long u64


def split_masks(u64 rd, u64 wr):
    cdef list out = [(0, 0, 0, 0)]
    cdef list nxt
    cdef u64 b, rest = rd, r1, w1, r2, w2
    while rest:
        b = rest & (~rest + 1)
        rest ^= b
        nxt = []
        if wr & b:
            for r1, w1, r2, w2 in out:
                nxt.append((r1 | b, w1 | b, r2, w2))
                nxt.append((r1, w1, r2 | b, w2 | b))
        else:
            for r1, w1, r2, w2 in out:
                nxt.append((r1 | b, w1, r2, w2))
                nxt.append((r1, w1, r2 | b, w2))
                nxt.append((r1 | b, w1, r2 | b, w2))
        out = nxt
    return out


def merge_masks(u64 rd1, u64 wr1, u64 v1, u64 rd2, u64 wr2, u64 v2):
    cdef u64 wr
    if wr1 & rd2 or wr2 & rd1:
        return None
    wr = wr1 | wr2
    if (v1 & ~wr) != (v2 & ~wr):
        return None
    return (rd1 | rd2, wr, (v1 & wr1) | (v2 & wr2) | (v1 & v2))


def par_combine(u64 v, cases):
    cdef set out = set()
    cdef u64 rd1, wr1, rd2, wr2, wr, fixed1, fixed2, a, b, nwr
    cdef u64 srd, swr, sv
    cdef list left, right
    cdef Py_ssize_t i, j, nl, nr
    for case in cases:
        rd1, wr1, rd2, wr2, succ1, succ2 = case
        fixed1 = v & ~wr1
        fixed2 = v & ~wr2
        left = []
        for s in succ1:
            srd, swr, sv = s
            if srd == rd1 and swr == wr1 and (sv & ~wr1) == fixed1:
                left.append(sv)
        if not left:
            continue
        right = []
        for s in succ2:
            srd, swr, sv = s
            if srd == rd2 and swr == wr2 and (sv & ~wr2) == fixed2:
                right.append(sv)
        wr = wr1 | wr2
        nwr = ~wr
        nl = len(left)
        nr = len(right)
        for i in range(nl):
            a = left[i]
            for j in range(nr):
                b = right[j]
                if (a & nwr) == (b & nwr):
                    out.add((rd1 | rd2, wr, (a & wr1) | (b & wr2) | (a & b)))
    return out


def valuation_variants(u64 v, u64 mask):
    cdef list out = [v & ~mask]
    cdef u64 b, rest = mask
    cdef Py_ssize_t i, n
    while rest:
        b = rest & (~rest + 1)
        rest ^= b
        n = len(out)
        for i in range(n):
            out.append(<u64>out[i] | b)
    return out
