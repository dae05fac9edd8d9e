"""Pure-Python fraction-free (Bareiss) elimination over the integers.

This is the reference kernel; ``_elim_c`` implements the same algorithm on
machine integers and is preferred when it imports.
"""


def bareiss_echelon(rows, ncols):
    """Row-echelon form of an integer matrix by Bareiss elimination.

    ``rows`` is consumed (rows are copied, the list is not mutated).
    Returns ``(echelon, pivots)`` where ``echelon`` holds the ``len(pivots)``
    nonzero rows and ``pivots[r]`` is the pivot column of row ``r``.
    Every entry stays an integer; each division is exact.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        prow = m[r]
        piv = prow[c]
        tail = range(c + 1, ncols)
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in tail:
                        x = row[j]
                        if x:
                            row[j] = x * piv // prev
            else:
                for j in tail:
                    row[j] = (piv * row[j] - f * prow[j]) // prev
                row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def bareiss_rank(rows, ncols):
    return len(bareiss_echelon(rows, ncols)[1])
