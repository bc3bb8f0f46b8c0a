"""Pure-Python fallback for the counting inner loops.

Same signatures as the compiled module sidforms._ckernels; selected at
import time by sidforms.kernels when the extension is unavailable.

``contrib`` is an int64 array of shape (D, q, k): enumerating all q^D
digit assignments w and summing contrib[d, w[d], j] over d yields the
encoded point of kernel-vector coordinate j.  The encoding is carry-free
by construction, so plain integer addition is exact.
"""

from __future__ import annotations


def count_members(contrib, mask):
    """Number of enumerated vectors with every coordinate inside mask."""
    D, q, k = contrib.shape
    tab = contrib.tolist()
    mask = bytes(mask)
    cur = [0] * k

    def rec(d):
        row = tab[d]
        if d == D - 1:
            total = 0
            for w in range(q):
                rw = row[w]
                for j in range(k):
                    if not mask[cur[j] + rw[j]]:
                        break
                else:
                    total += 1
            return total
        total = 0
        for w in range(q):
            rw = row[w]
            for j in range(k):
                cur[j] += rw[j]
            total += rec(d + 1)
            for j in range(k):
                cur[j] -= rw[j]
        return total

    if D == 0:
        return 1 if all(mask[0] for _ in range(k)) else 0
    return rec(0)


def count_members_subset(contrib, mask, active):
    """Like count_members but only coordinates j with active[j] are tested."""
    D, q, k = contrib.shape
    tab = contrib.tolist()
    mask = bytes(mask)
    idx = [j for j in range(k) if active[j]]
    cur = [0] * k

    def rec(d):
        row = tab[d]
        if d == D - 1:
            total = 0
            for w in range(q):
                rw = row[w]
                for j in idx:
                    if not mask[cur[j] + rw[j]]:
                        break
                else:
                    total += 1
            return total
        total = 0
        for w in range(q):
            rw = row[w]
            for j in range(k):
                cur[j] += rw[j]
            total += rec(d + 1)
            for j in range(k):
                cur[j] -= rw[j]
        return total

    if D == 0:
        return 1 if all(mask[0] for _ in idx) else 0
    if not idx:
        return q ** D
    return rec(0)


def pattern_histogram(contrib, mask, hist):
    """hist[b] += 1 for each vector, b = bitmask of coords inside mask."""
    D, q, k = contrib.shape
    tab = contrib.tolist()
    mask = bytes(mask)
    cur = [0] * k

    def rec(d):
        row = tab[d]
        if d == D - 1:
            for w in range(q):
                rw = row[w]
                b = 0
                for j in range(k):
                    if mask[cur[j] + rw[j]]:
                        b |= 1 << j
                hist[b] += 1
            return
        for w in range(q):
            rw = row[w]
            for j in range(k):
                cur[j] += rw[j]
            rec(d + 1)
            for j in range(k):
                cur[j] -= rw[j]

    if D == 0:
        b = 0
        for j in range(k):
            if mask[0]:
                b |= 1 << j
        hist[b] += 1
        return
    rec(0)


def weighted_product_sum(contrib, weights):
    """Sum over vectors of the product of weights at each coordinate."""
    D, q, k = contrib.shape
    tab = contrib.tolist()
    wt = weights.tolist()
    cur = [0] * k

    def rec(d):
        row = tab[d]
        if d == D - 1:
            total = 0.0
            for w in range(q):
                rw = row[w]
                prod = 1.0
                for j in range(k):
                    prod *= wt[cur[j] + rw[j]]
                    if prod == 0.0:
                        break
                total += prod
            return total
        total = 0.0
        for w in range(q):
            rw = row[w]
            for j in range(k):
                cur[j] += rw[j]
            total += rec(d + 1)
            for j in range(k):
                cur[j] -= rw[j]
        return total

    if D == 0:
        prod = 1.0
        for _ in range(k):
            prod *= wt[0]
        return prod
    return rec(0)


def count_bruteforce(tab, zlut, n, shift):
    """Tuples over the point list with zero syndrome in every row.

    ``tab`` has shape (m, k, npts): base-2^shift packed row contributions
    of each candidate point; digit d of a packed value is coordinate d of
    the row sum, tested against zlut (nonzero means divisible by q).
    """
    m, k, npts = tab.shape
    rows = tab.tolist()
    zl = bytes(zlut)
    dmask = (1 << shift) - 1
    acc = [0] * m

    def rec(lvl):
        if lvl == k - 1:
            total = 0
            for a in range(npts):
                for r in range(m):
                    s = acc[r] + rows[r][lvl][a]
                    for i in range(n):
                        if not zl[s >> (i * shift) & dmask]:
                            break
                    else:
                        continue
                    break
                else:
                    total += 1
            return total
        total = 0
        for a in range(npts):
            for r in range(m):
                acc[r] += rows[r][lvl][a]
            total += rec(lvl + 1)
            for r in range(m):
                acc[r] -= rows[r][lvl][a]
        return total

    if npts == 0:
        return 0
    return rec(0)
