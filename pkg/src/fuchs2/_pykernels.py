"""Pure-Python fallback for the hot cubic-scan kernels.

Both scans walk all |G|^3 triples of a multiplication table.  The compiled
extension (`fuchs2._ckernels`) implements the same functions with identical
semantics; `fuchs2.kernels` picks whichever is available at import time.

Tables are flat row-major sequences of length n*n: ``table[x*n + y]``.
"""


def first_assoc_violation(mul, n):
    """First (x, y, z) with (xy)z != x(yz), scanning triples in lex order.

    Returns None when the table is associative.  Works row-wise: for fixed
    (x, y) the whole z-row is compared at C speed before falling back to a
    scalar scan to locate the witness.
    """
    rows = [mul[i * n:(i + 1) * n] for i in range(n)]
    for x in range(n):
        row_x = rows[x]
        for y in range(n):
            row_y = rows[y]
            lhs = rows[row_x[y]]
            rhs = [row_x[v] for v in row_y]
            if lhs != rhs:
                for z in range(n):
                    if lhs[z] != rhs[z]:
                        return (x, y, z)
    return None


def first_condition_violation(mul, star, n, a_start=0, a_stop=None):
    """First failure of the two translation-compatibility conditions.

    For each triple (a, b, c) checks
      (1)  (c(a*b))*c == (ca)*(cb)
      (2)  ((a*b)c)*c == (ac)*(bc)
    and returns (a, b, c, which) for the lexicographically least violating
    triple (condition 1 tested before 2), or None.  The scan may be
    restricted to ``a_start <= a < a_stop`` so callers can partition work
    by the first coordinate.
    """
    if a_stop is None:
        a_stop = n
    mrows = [mul[i * n:(i + 1) * n] for i in range(n)]
    srows = [star[i * n:(i + 1) * n] for i in range(n)]
    for a in range(a_start, a_stop):
        star_a = srows[a]
        mrow_a = mrows[a]
        for b in range(n):
            ab = star_a[b]
            mrow_ab = mrows[ab]
            mrow_b = mrows[b]
            for c in range(n):
                mrow_c = mrows[c]
                if srows[mrow_c[ab]][c] != srows[mrow_c[a]][mrow_c[b]]:
                    return (a, b, c, 1)
                if srows[mrow_ab[c]][c] != srows[mrow_a[c]][mrow_b[c]]:
                    return (a, b, c, 2)
    return None
