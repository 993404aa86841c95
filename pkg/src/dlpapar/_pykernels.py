"""Pure-Python bitmask kernels; reference behaviour for the compiled ones.

States are ``(rd, wr, v)`` triples of int bitmasks over a universe.
"""


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def split_masks(rd, wr):
    out = [(0, 0, 0, 0)]
    for b in _bits(rd):
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


def merge_masks(rd1, wr1, v1, rd2, wr2, v2):
    if wr1 & rd2 or wr2 & rd1:
        return None
    wr = wr1 | wr2
    if (v1 & ~wr) != (v2 & ~wr):
        return None
    return (rd1 | rd2, wr, (v1 & wr1) | (v2 & wr2) | (v1 & v2))


def par_combine(v, cases):
    """Merge the framed outcomes of both sides of every split.

    ``cases`` holds ``(rd1, wr1, rd2, wr2, succ1, succ2)`` where ``succ_i`` are
    the successor states of side i started from ``(rd_i, wr_i, v)``.
    """
    out = set()
    for rd1, wr1, rd2, wr2, succ1, succ2 in cases:
        fixed1 = v & ~wr1
        fixed2 = v & ~wr2
        left = [s for s in succ1 if s[0] == rd1 and s[1] == wr1 and s[2] & ~wr1 == fixed1]
        if not left:
            continue
        right = [s for s in succ2 if s[0] == rd2 and s[1] == wr2 and s[2] & ~wr2 == fixed2]
        for _, _, a in left:
            for _, _, b in right:
                # rw-disjointness holds by construction of the split
                wr = wr1 | wr2
                if a & ~wr == b & ~wr:
                    out.add((rd1 | rd2, wr, (a & wr1) | (b & wr2) | (a & b)))
    return out


def valuation_variants(v, mask):
    out = [v & ~mask]
    for b in _bits(mask):
        out += [x | b for x in out]
    return out
