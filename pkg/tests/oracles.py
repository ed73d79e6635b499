"""Independent brute-force oracles used to pin expected values.

Everything here recomputes results by the most direct method available
(full double loops, exhaustive enumeration, linear algebra from scratch)
without touching the code paths under test.
"""

import itertools


def naive_convolve(G, m, a, b):
    """Plain double-loop group-ring product, no sparsity tricks."""
    mod = 1 << m
    out = [0] * G.n
    for g in range(G.n):
        for h in range(G.n):
            out[G.mul[g][h]] = (out[G.mul[g][h]] + a[g] * b[h]) % mod
    return tuple(out)


def element_order_brute(G, x):
    y, k = x, 1
    while y != 0:
        y = G.mul[y][x]
        k += 1
    return k


def center_brute(G):
    return sorted(x for x in range(G.n)
                  if all(G.mul[x][g] == G.mul[g][x] for g in range(G.n)))


def upper_central_length(G):
    """Length of the upper central series, recomputed directly."""
    current = {0}
    length = 0
    while len(current) < G.n:
        comm = lambda x, g: G.mul[G.mul[G.inv[x]][G.inv[g]]][G.mul[x][g]]
        nxt = {x for x in range(G.n)
               if all(comm(x, g) in current for g in range(G.n))}
        if len(nxt) == len(current):
            raise AssertionError("series stalled")
        current = nxt
        length += 1
    return length


def gf2_left_mul_matrix(G, m, coeffs):
    """Rows (mod 2) of the left-multiplication matrix of an element."""
    rows = []
    for h in range(G.n):  # column h = coeffs * e_h
        col = [0] * G.n
        for g in range(G.n):
            if coeffs[g]:
                col[G.mul[g][h]] = (col[G.mul[g][h]] + coeffs[g])
        rows.append(col)
    # transpose to row-major and reduce mod 2 into bitmasks
    masks = []
    for i in range(G.n):
        mask = 0
        for h in range(G.n):
            if rows[h][i] & 1:
                mask |= 1 << h
        masks.append(mask)
    return masks


def gf2_rank(masks):
    rank = 0
    basis = []
    for v in masks:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            rank += 1
    return rank


def is_unit_by_linear_algebra(G, m, coeffs):
    """Unit test via invertibility of the left-multiplication matrix.

    Over Z_{2^m} a square matrix is invertible iff it is invertible mod 2,
    so a GF(2) rank computation decides; this never looks at coefficient
    sums.
    """
    return gf2_rank(gf2_left_mul_matrix(G, m, coeffs)) == G.n


def brute_unit_set(G, m):
    """All unit coefficient vectors of Z_{2^m}[G], by linear algebra."""
    mod = 1 << m
    units = set()
    for coeffs in itertools.product(range(mod), repeat=G.n):
        if is_unit_by_linear_algebra(G, m, coeffs):
            units.add(coeffs)
    return units


def brute_two_sided_ideal(G, m, gen_vectors):
    """The full two-sided ideal as a set of coefficient tuples: close the
    generators under left/right translation by every group element, then
    take all Z_{2^m}-combinations.  Exponential; only for tiny cases."""
    mod = 1 << m
    translates = set()
    work = [tuple(v) for v in gen_vectors]
    while work:
        v = work.pop()
        if v in translates:
            continue
        translates.add(v)
        for g in range(G.n):
            left = [0] * G.n
            right = [0] * G.n
            for h, c in enumerate(v):
                if c:
                    left[G.mul[g][h]] = c
                    right[G.mul[h][g]] = c
            work.append(tuple(left))
            work.append(tuple(right))
    span = {(0,) * G.n}
    for v in translates:
        new = set(span)
        for k in range(1, mod):
            for s in span:
                new.add(tuple((k * a + b) % mod for a, b in zip(v, s)))
        span = new
    return span


def brute_star_kernel(G, encode):
    """All even-support GF(2) vectors whose XOR of encodes vanishes,
    enumerated over all 2^|G| subsets (|G| <= 16)."""
    out = set()
    for mask in range(1 << G.n):
        support = [g for g in range(G.n) if mask >> g & 1]
        if len(support) % 2:
            continue
        acc = 0
        for g in support:
            acc ^= encode[g]
        if acc == 0:
            out.add(mask)
    return out


def brute_find_inverse(G, m, coeffs):
    """Scan the whole ring for a two-sided inverse (tiny rings only)."""
    mod = 1 << m
    for cand in itertools.product(range(mod), repeat=G.n):
        if naive_convolve(G, m, coeffs, cand) == \
                (1,) + (0,) * (G.n - 1) and \
                naive_convolve(G, m, cand, coeffs) == \
                (1,) + (0,) * (G.n - 1):
            return cand
    return None
