"""Finite 2-groups as explicit multiplication tables.

Groups are constructed from presentations by coset enumeration over the
trivial subgroup (HLT-style scan with a union-find over cosets), from the
built-in catalog of named groups, or as direct products.  Element 0 is
always the identity and element indexing is the coset-discovery order,
which is fixed, so identical inputs always produce identical tables.

Everything downstream (group rings, screeners, the realization pipeline)
consumes the structural data computed here: element orders, centralizers,
the center, conjugacy classes, upper central series, minimal generating
sequences, abelian invariants, isomorphism testing and indecomposability.
All of it is exact and exhaustive; there are no probabilistic shortcuts.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .errors import (
    ConstructionError,
    Fuchs2Error,
    SizeCapError,
    UndecidedError,
)

ORDER_CAP = 512
ENUM_VERTEX_CAP = 200_000
ISO_NODE_BUDGET = 10_000_000
INDECOMP_CAP = 128
NORMAL_SUBGROUP_CAP = 50_000


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator names plus relator words.

    Each relator is a word stored as a tuple of (generator index, exponent)
    runs; the presented group is the quotient of the free group by their
    normal closure.  ``relator_text`` keeps the source strings for error
    messages.
    """

    gens: tuple[str, ...]
    relators: tuple[tuple[tuple[int, int], ...], ...]
    relator_text: tuple[str, ...] = ()

    def __post_init__(self):
        for word in self.relators:
            for g, _ in word:
                if not 0 <= g < len(self.gens):
                    raise ConstructionError(
                        f"relator uses undeclared generator index {g}")


class CayleyGroup:
    """A finite 2-group of order <= 512 given by its full Cayley table.

    mul[x][y] is the index of x*y, index 0 is the identity, and inv[x] is
    the two-sided inverse.  Instances are immutable after construction and
    safe to share between threads; structural queries cache their results.
    """

    def __init__(self, mul, gen_names=(), gen_indices=(), label_words=None,
                 name="", check=True):
        n = len(mul)
        self.n = n
        self.mul = [list(row) for row in mul]
        self.gen_names = tuple(gen_names)
        self.gen_indices = tuple(gen_indices)
        self.label_words = label_words
        self.name = name
        self.source_spec = None
        if check:
            self._verify()
        inv = [None] * n
        for x in range(n):
            y = self.mul[x].index(0)
            if self.mul[y][x] != 0:
                raise ConstructionError(f"element {x} has no two-sided inverse")
            inv[x] = y
        self.inv = inv
        self._orders = None
        self._center = None
        self._classes = None
        self._frattini = None
        self._derived = None
        self._ucs = None
        self._sqrt_counts = None
        self._fingerprints = None
        self._normal_subgroups = None

    def _verify(self):
        n = self.n
        if n == 0 or n & (n - 1):
            raise ConstructionError(f"order {n} is not a power of 2")
        for x in range(n):
            if self.mul[0][x] != x or self.mul[x][0] != x:
                raise ConstructionError("index 0 is not a two-sided identity")
            row = self.mul[x]
            if len(row) != n or sorted(row) != list(range(n)):
                raise ConstructionError(f"row {x} is not a permutation")
        bad = kernels.first_assoc_violation(self.mul)
        if bad is not None:
            raise ConstructionError(f"table is not associative at {bad}")

    # -- basic queries ---------------------------------------------------

    def __len__(self):
        return self.n

    def power(self, x, k):
        if k < 0:
            x, k = self.inv[x], -k
        r = 0
        while k:
            if k & 1:
                r = self.mul[r][x]
            x = self.mul[x][x]
            k >>= 1
        return r

    def element_order(self, x):
        return self.element_orders()[x]

    def element_orders(self):
        if self._orders is None:
            orders = [1] * self.n
            for x in range(1, self.n):
                y, k = x, 1
                while y != 0:
                    y = self.mul[y][x]
                    k += 1
                orders[x] = k
            self._orders = orders
        return self._orders

    def exponent(self):
        # orders are powers of 2, so the lcm is the maximum
        return max(self.element_orders(), default=1)

    def commutator(self, x, y):
        m = self.mul
        return m[m[self.inv[x]][self.inv[y]]][m[x][y]]

    def conjugate(self, x, g):
        """g^-1 * x * g."""
        return self.mul[self.mul[self.inv[g]][x]][g]

    def centralizer(self, x):
        m = self.mul
        row = m[x]
        return tuple(g for g in range(self.n) if row[g] == m[g][x])

    def center(self):
        if self._center is None:
            m = self.mul
            self._center = tuple(
                x for x in range(self.n)
                if all(m[x][g] == m[g][x] for g in range(self.n)))
        return self._center

    def is_abelian(self):
        return len(self.center()) == self.n

    def cyclic(self, x):
        """Members of <x> in power order."""
        out = [0]
        y = x
        while y != 0:
            out.append(y)
            y = self.mul[y][x]
        return out

    def subgroup(self, gens):
        """Sorted member tuple of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        gens = [g for g in gens if g]
        while frontier:
            nxt = []
            for x in frontier:
                row = self.mul[x]
                for g in gens:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def conjugacy_classes(self):
        if self._classes is None:
            m = self.mul
            inv = self.inv
            seen = [False] * self.n
            classes = []
            for x in range(self.n):
                if seen[x]:
                    continue
                orb = {m[m[inv[g]][x]][g] for g in range(self.n)}
                for y in orb:
                    seen[y] = True
                classes.append(tuple(sorted(orb)))
            self._classes = classes
        return self._classes

    def class_of(self, x):
        for cls in self.conjugacy_classes():
            if x in cls:
                return cls
        raise IndexError(x)

    def derived_subgroup(self):
        if self._derived is None:
            comms = {self.commutator(x, y)
                     for x in range(self.n) for y in range(self.n)}
            self._derived = self.subgroup(sorted(comms))
        return self._derived

    def frattini_subgroup(self):
        """Generated by all squares and commutators (p = 2)."""
        if self._frattini is None:
            gens = {self.mul[x][x] for x in range(self.n)}
            gens.update(self.derived_subgroup())
            self._frattini = self.subgroup(sorted(gens))
        return self._frattini

    def upper_central_series(self):
        """[{1}, Z(G), Z_2(G), ...] ending at G (or stalling for non-nilpotent,
        which cannot happen for 2-groups)."""
        if self._ucs is None:
            series = [(0,)]
            current = {0}
            while len(current) < self.n:
                nxt = tuple(
                    x for x in range(self.n)
                    if all(self.commutator(x, g) in current
                           for g in range(self.n)))
                if len(nxt) == len(current):
                    break
                series.append(nxt)
                current = set(nxt)
            self._ucs = series
        return self._ucs

    def nilpotency_class(self):
        series = self.upper_central_series()
        if self.n == 1:
            return 0
        if len(series[-1]) != self.n:
            raise ConstructionError("group is not nilpotent")
        return len(series) - 1

    def n_a(self, a):
        """Least N >= 0 with b^(2^N) in <a> for every b centralizing a."""
        members = set(self.cyclic(a))
        best = 0
        for b in self.centralizer(a):
            k = 0
            y = b
            while y not in members:
                y = self.mul[y][y]
                k += 1
            best = max(best, k)
        return best

    # -- generating sequences and abelian structure ----------------------

    def minimal_generating_sequences(self):
        """Yield minimal generating sequences in lexicographic index order.

        Each sequence projects to a basis of G modulo the Frattini subgroup,
        so all have the same length.  The first yield is the greedy choice.
        """
        frat = self.frattini_subgroup()
        if len(frat) == self.n:  # trivial group
            yield ()
            return

        def extend(prefix, span):
            if len(span) == self.n:
                yield tuple(prefix)
                return
            span_set = set(span)
            for x in range(1, self.n):
                if x in span_set:
                    continue
                yield from extend(prefix + [x],
                                  self.subgroup(set(span) | {x}))

        yield from extend([], frat)

    def minimal_generators(self):
        return next(self.minimal_generating_sequences())

    def abelian_invariants(self):
        """Invariant factors in descending divisibility order.

        Uses the order-counting characterization, which is complete for
        abelian 2-groups: the number of solutions of x^(2^k) = 1 determines
        the partition.
        """
        if not self.is_abelian():
            raise Fuchs2Error("abelian invariants of a nonabelian group")
        if self.n == 1:
            return ()
        orders = self.element_orders()
        maxk = max(orders).bit_length() - 1
        counts = [sum(1 for o in orders if o <= (1 << k)).bit_length() - 1
                  for k in range(maxk + 1)]
        # counts[k] - counts[k-1] = number of invariants with exponent >= k
        parts = []
        for k in range(1, maxk + 1):
            geq_k = counts[k] - counts[k - 1]
            geq_k1 = counts[k + 1] - counts[k] if k < maxk else 0
            parts.extend([1 << k] * (geq_k - geq_k1))
        parts.sort(reverse=True)
        return tuple(parts)

    # -- labels ----------------------------------------------------------

    def label(self, x):
        """Canonical word string for element x (parseable back)."""
        if x == 0:
            return "1"
        if self.label_words is None or self.label_words[x] is None:
            return f"g{x}"
        parts = []
        for gen_pos, exp in self.label_words[x]:
            name = self.gen_names[gen_pos]
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return "*".join(parts)

    def labels(self):
        return [self.label(x) for x in range(self.n)]

    # -- derived groups --------------------------------------------------

    def subgroup_cayley(self, members):
        """CayleyGroup on a subgroup plus (to_sub, from_sub) index maps."""
        members = tuple(sorted(members))
        if members[0] != 0:
            raise ConstructionError("subgroup must contain the identity")
        to_sub = {g: i for i, g in enumerate(members)}
        try:
            mul = [[to_sub[self.mul[x][y]] for y in members] for x in members]
        except KeyError:
            raise ConstructionError("member set is not closed") from None
        sub = CayleyGroup(mul, name=f"subgroup({self.name})", check=False)
        return sub, to_sub, list(members)

    def quotient_group(self, normal):
        """CayleyGroup on G/N plus the coset map (N must be normal)."""
        nset = set(normal)
        coset_of = [None] * self.n
        reps = []
        for x in range(self.n):
            if coset_of[x] is None:
                coset = {self.mul[x][v] for v in nset}
                idx = len(reps)
                reps.append(x)
                for y in coset:
                    if coset_of[y] is not None:
                        raise ConstructionError("subgroup is not normal")
                    coset_of[y] = idx
        q = len(reps)
        mul = [[coset_of[self.mul[reps[i]][reps[j]]] for j in range(q)]
               for i in range(q)]
        quot = CayleyGroup(mul, name=f"{self.name}/N", check=False)
        return quot, coset_of, reps


# -- presentation enumeration ---------------------------------------------

_UNDEF = -1


class _CosetTable:
    """HLT coset enumeration over the trivial subgroup.

    Directions 2i / 2i+1 are generator i and its inverse.  Vertices are
    merged through a union-find; every live vertex gets each relator traced
    from it once, in discovery order, which makes the final numbering (and
    hence element indexing) deterministic.
    """

    def __init__(self, ngens, relators, cap=ENUM_VERTEX_CAP):
        self.nd = 2 * ngens
        self.relators = [rel for rel in relators]
        # tracing g then g^-1 (and vice versa) must return home
        for i in range(ngens):
            self.relators.append((2 * i, 2 * i + 1))
            self.relators.append((2 * i + 1, 2 * i))
        self.cap = cap
        self.labels = []
        self.neighbors = []
        self._new_vertex()

    def _new_vertex(self):
        if len(self.labels) >= self.cap:
            raise SizeCapError(
                f"coset enumeration exceeded {self.cap} vertices; "
                f"the presented group is too large or infinite")
        c = len(self.labels)
        self.labels.append(c)
        self.neighbors.append([_UNDEF] * self.nd)
        return c

    def find(self, c):
        labels = self.labels
        root = c
        while labels[root] != root:
            root = labels[root]
        while labels[c] != root:
            labels[c], c = root, labels[c]
        return root

    def follow(self, c, d):
        c = self.find(c)
        t = self.neighbors[c][d]
        if t == _UNDEF:
            t = self._new_vertex()
            self.neighbors[c][d] = t
        return self.find(t)

    def unify(self, c1, c2):
        queue = [(c1, c2)]
        while queue:
            a, b = queue.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            self.labels[b] = a
            na, nb = self.neighbors[a], self.neighbors[b]
            for d in range(self.nd):
                t = nb[d]
                if t == _UNDEF:
                    continue
                if na[d] == _UNDEF:
                    na[d] = t
                else:
                    queue.append((na[d], t))

    def run(self):
        i = 0
        while i < len(self.labels):
            if self.find(i) == i:
                for rel in self.relators:
                    c = i
                    for d in rel:
                        c = self.follow(c, d)
                    self.unify(c, i)
            i += 1
        # final deduction pass: edges created after a vertex was scanned
        # still need its relators; iterate until stable
        changed = True
        while changed:
            changed = False
            live = [v for v in range(len(self.labels)) if self.find(v) == v]
            for v in live:
                if self.find(v) != v:
                    continue
                for rel in self.relators:
                    c = v
                    for d in rel:
                        c = self.follow(c, d)
                    if self.find(c) != self.find(v):
                        self.unify(c, v)
                        changed = True

    def permutations(self):
        live = [v for v in range(len(self.labels)) if self.find(v) == v]
        index = {v: i for i, v in enumerate(live)}
        perms = []
        for d in range(self.nd):
            perm = []
            for v in live:
                t = self.neighbors[v][d]
                if t == _UNDEF:
                    raise ConstructionError("incomplete coset table")
                perm.append(index[self.find(t)])
            perms.append(perm)
        return perms


def _relator_directions(word):
    dirs = []
    for g, e in word:
        if e >= 0:
            dirs.extend([2 * g] * e)
        else:
            dirs.extend([2 * g + 1] * (-e))
    return tuple(dirs)


def enumerate_presentation(pres: Presentation, name="") -> CayleyGroup:
    """Build the Cayley table of a presented group (order cap 512)."""
    ngens = len(pres.gens)
    relators = [_relator_directions(w) for w in pres.relators]
    table = _CosetTable(ngens, relators)
    table.run()
    perms = table.permutations()
    n = len(perms[0]) if perms else 1
    if n > ORDER_CAP:
        raise SizeCapError(f"presented group has order {n} > {ORDER_CAP}")
    if n & (n - 1):
        raise ConstructionError(
            f"presented group has order {n}, not a power of 2")

    gen_indices = [perms[2 * i][0] for i in range(ngens)]
    for i, gi in enumerate(gen_indices):
        if gi == 0:
            raise ConstructionError(
                f"generator {pres.gens[i]!r} collapses to the identity; "
                f"offending relator: {_find_culprit(pres, i)}")

    # BFS words from the identity; building mul columns incrementally makes
    # the table O(n^2) even for long cyclic groups.
    words = [None] * n
    cols = [None] * n
    words[0] = ()
    cols[0] = list(range(n))
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for d in range(table.nd):
                u = perms[d][v]
                if words[u] is None:
                    words[u] = words[v] + (d,)
                    col = cols[v]
                    perm = perms[d]
                    cols[u] = [perm[c] for c in col]
                    nxt.append(u)
        frontier = nxt
    mul = [[cols[y][x] for y in range(n)] for x in range(n)]
    label_words = [_compress_word(words[x]) for x in range(n)]
    G = CayleyGroup(mul, gen_names=pres.gens, gen_indices=gen_indices,
                    label_words=label_words, name=name or "presented")
    relator_text = pres.relator_text or tuple(
        _render_word(w, pres.gens) for w in pres.relators)
    G.source_spec = {"gens": list(pres.gens), "relators": list(relator_text)}
    return G


def _render_word(runs, names):
    if not runs:
        return "1"
    return "*".join(names[g] if e == 1 else f"{names[g]}^{e}"
                    for g, e in runs)


def _compress_word(dirs):
    """Direction sequence -> (generator position, exponent) runs."""
    runs = []
    for d in dirs:
        g, e = d >> 1, -1 if d & 1 else 1
        if runs and runs[-1][0] == g and (runs[-1][1] > 0) == (e > 0):
            runs[-1] = (g, runs[-1][1] + e)
        else:
            runs.append((g, e))
    return tuple(runs)


def _find_culprit(pres, gen_idx):
    """Leave-one-out search for a relator that trivializes a generator."""
    for drop in range(len(pres.relators)):
        reduced = Presentation(
            pres.gens,
            tuple(w for j, w in enumerate(pres.relators) if j != drop))
        try:
            relators = [_relator_directions(w) for w in reduced.relators]
            table = _CosetTable(len(pres.gens), relators)
            table.run()
            perms = table.permutations()
            if perms[2 * gen_idx][0] != 0:
                if pres.relator_text:
                    return pres.relator_text[drop]
                return str(pres.relators[drop])
        except Fuchs2Error:
            continue
    return "unknown (every relator needed)"


# -- catalog ----------------------------------------------------------------


def _word(*runs):
    return tuple(runs)


def _pow2(n):
    return n >= 1 and n & (n - 1) == 0


def catalog_presentation(kind, order=None):
    """Presentation for a named catalog group.

    C{2^k} (cyclic), D{2^n} (dihedral, n >= 2), Q{2^n} (generalized
    quaternion, n >= 3; Q8 uses generators i, j), QD{2^n} (quasidihedral,
    n >= 4), M16 (modular group of order 16), and the three named order-32
    and order-64 groups used as fixtures.
    """
    if kind == "C":
        if not _pow2(order) or order > ORDER_CAP:
            raise ConstructionError(f"C{order}: order must be a power of 2 <= {ORDER_CAP}")
        return Presentation(("a",), (_word((0, order)),),
                            (f"a^{order}",))
    if kind == "D":
        if not _pow2(order) or order < 4 or order > ORDER_CAP:
            raise ConstructionError(f"D{order}: order must be a power of 2 in [4, {ORDER_CAP}]")
        h = order // 2
        return Presentation(
            ("a", "b"),
            (_word((0, h)), _word((1, 2)), _word((1, 1), (0, 1), (1, -1), (0, 1))),
            (f"a^{h}", "b^2", "b*a*b^-1*a"))
    if kind == "Q":
        if not _pow2(order) or order < 8 or order > ORDER_CAP:
            raise ConstructionError(f"Q{order}: order must be a power of 2 in [8, {ORDER_CAP}]")
        h, q = order // 2, order // 4
        gens = ("i", "j") if order == 8 else ("a", "b")
        return Presentation(
            gens,
            (_word((0, h)), _word((0, q), (1, -2)),
             _word((1, 1), (0, 1), (1, -1), (0, 1))),
            (f"{gens[0]}^{h}", f"{gens[0]}^{q}*{gens[1]}^-2",
             f"{gens[1]}*{gens[0]}*{gens[1]}^-1*{gens[0]}"))
    if kind == "QD":
        if not _pow2(order) or order < 16 or order > ORDER_CAP:
            raise ConstructionError(f"QD{order}: order must be a power of 2 in [16, {ORDER_CAP}]")
        h, r = order // 2, order // 4 - 1
        return Presentation(
            ("a", "b"),
            (_word((0, h)), _word((1, 2)),
             _word((1, 1), (0, 1), (1, -1), (0, -r))),
            (f"a^{h}", "b^2", f"b*a*b^-1*a^-{r}"))
    if kind == "M16":
        # <x1, x2 : x1^8 = x2^2 = [x2,x1]^2 = x1^4[x2,x1] = 1>
        comm = ((1, -1), (0, -1), (1, 1), (0, 1))
        return Presentation(
            ("x1", "x2"),
            (_word((0, 8)), _word((1, 2)),
             comm + comm,
             _word((0, 4)) + comm),
            ("x1^8", "x2^2", "[x2,x1]^2", "x1^4*[x2,x1]"))
    if kind == "SG32_37":
        c21 = ((1, -1), (0, -1), (1, 1), (0, 1))
        c31 = ((2, -1), (0, -1), (2, 1), (0, 1))
        c32 = ((2, -1), (1, -1), (2, 1), (1, 1))
        return Presentation(
            ("x1", "x2", "x3"),
            (_word((0, 8)), _word((1, 2)), _word((2, 2)),
             _word((0, 4)) + c21, c31, c32),
            ("x1^8", "x2^2", "x3^2", "x1^4*[x2,x1]", "[x3,x1]", "[x3,x2]"))
    if kind == "SG64_88":
        c21 = ((1, -1), (0, -1), (1, 1), (0, 1))
        c21sq = ((1, -1), (0, -2), (1, 1), (0, 2))
        c31 = ((2, -1), (0, -1), (2, 1), (0, 1))
        c32 = ((2, -1), (1, -1), (2, 1), (1, 1))
        return Presentation(
            ("x1", "x2", "x3"),
            (_word((0, 8)), _word((1, 2)), _word((2, 2)),
             c21 + c21, c21sq, _word((0, 4)) + c31, c32),
            ("x1^8", "x2^2", "x3^2", "[x2,x1]^2", "[x2,x1^2]",
             "x1^4*[x3,x1]", "[x3,x2]"))
    if kind == "SG64_104":
        c21 = ((1, -1), (0, -1), (1, 1), (0, 1))
        c31 = ((2, -1), (0, -1), (2, 1), (0, 1))
        c32 = ((2, -1), (1, -1), (2, 1), (1, 1))
        return Presentation(
            ("x1", "x2", "x3"),
            (_word((0, 8)), _word((1, 4)), _word((2, 2)),
             _word((1, 2)) + c21, _word((0, 4)) + c31, c32),
            ("x1^8", "x2^4", "x3^2", "x2^2*[x2,x1]", "x1^4*[x3,x1]", "[x3,x2]"))
    raise ConstructionError(f"unknown catalog group kind {kind!r}")


def catalog_group(kind, order=None, name=None) -> CayleyGroup:
    if name is None:
        name = kind if order is None else f"{kind}{order}"
    if kind == "C" and order == 1:
        # the trivial group; its declared generator is the identity
        G = CayleyGroup([[0]], gen_names=("a",), gen_indices=(0,),
                        label_words=[()], name=name)
        G.source_spec = name
        return G
    pres = catalog_presentation(kind, order)
    G = enumerate_presentation(pres, name=name)
    G.source_spec = name
    return G


def build_group(spec) -> CayleyGroup:
    """Build a group from a spec string, a Presentation, or pass through."""
    if isinstance(spec, CayleyGroup):
        return spec
    if isinstance(spec, Presentation):
        return enumerate_presentation(spec)
    if isinstance(spec, str):
        from .parsing import parse_group_spec
        return parse_group_spec(spec).build()
    raise TypeError(f"cannot build a group from {type(spec).__name__}")


def direct_product(G: CayleyGroup, H: CayleyGroup) -> CayleyGroup:
    """Componentwise product; factor generators are renamed on collision."""
    n = G.n * H.n
    if n > ORDER_CAP:
        raise SizeCapError(f"product order {n} exceeds {ORDER_CAP}")
    nh = H.n
    mul = []
    for xg in range(G.n):
        row_g = G.mul[xg]
        for xh in range(nh):
            row_h = H.mul[xh]
            mul.append([row_g[yg] * nh + row_h[yh]
                        for yg in range(G.n) for yh in range(nh)])

    # duplicates get the smallest numeric suffix that collides neither with
    # names already assigned nor with raw names still to come
    combined = list(G.gen_names) + list(H.gen_names)
    gen_names = []
    for pos, s in enumerate(combined):
        if s not in gen_names:
            gen_names.append(s)
            continue
        k = 2
        while f"{s}{k}" in gen_names or f"{s}{k}" in combined[pos + 1:]:
            k += 1
        gen_names.append(f"{s}{k}")
    gen_names = tuple(gen_names)
    gen_indices = tuple(g * nh for g in G.gen_indices) + tuple(H.gen_indices)

    label_words = None
    if G.label_words is not None and H.label_words is not None:
        off = len(G.gen_names)
        label_words = []
        for xg in range(G.n):
            wg = G.label_words[xg]
            for xh in range(H.n):
                wh = H.label_words[xh]
                if wg is None or wh is None:
                    label_words.append(None)
                else:
                    label_words.append(
                        wg + tuple((p + off, e) for p, e in wh))
    name = f"{G.name}x{H.name}" if G.name and H.name else ""
    P = CayleyGroup(mul, gen_names=gen_names, gen_indices=gen_indices,
                    label_words=label_words, name=name, check=False)
    if isinstance(G.source_spec, str) and isinstance(H.source_spec, str):
        P.source_spec = f"{G.source_spec}x{H.source_spec}"
    return P


# -- isomorphism -------------------------------------------------------------


def _element_fingerprints(G: CayleyGroup):
    if G._fingerprints is not None:
        return G._fingerprints
    n = G.n
    orders = G.element_orders()
    center = set(G.center())
    derived = set(G.derived_subgroup())
    class_size = [0] * n
    for cls in G.conjugacy_classes():
        for x in cls:
            class_size[x] = len(cls)
    sqrt_count = [0] * n
    for y in range(n):
        sqrt_count[G.mul[y][y]] += 1
    cent_size = [len(G.centralizer(x)) for x in range(n)]
    fps = [
        (orders[x], class_size[x], cent_size[x], sqrt_count[x],
         x in center, x in derived)
        for x in range(n)
    ]
    G._fingerprints = fps
    return fps


def group_fingerprint(G: CayleyGroup):
    """Cheap isomorphism invariants, used to reject before backtracking."""
    fps = _element_fingerprints(G)
    inv = G.abelian_invariants() if G.is_abelian() else ()
    return (
        G.n,
        tuple(sorted(G.element_orders())),
        len(G.center()),
        tuple(sorted(G.element_order(z) for z in G.center())),
        G.nilpotency_class(),
        len(G.derived_subgroup()),
        inv,
        tuple(sorted(fps)),
    )


def _generation_chain(G: CayleyGroup, gens):
    """BFS data for the chain <g_1..g_i>: per level, the member list in
    discovery order with each element's definition (parent position, gen
    position used on the right)."""
    chain = []
    members = [0]
    defs = [None]
    index = {0: 0}
    for i, g in enumerate(gens):
        if g in index:
            chain.append((list(members), list(defs)))
            continue
        members.append(g)
        defs.append((0, i))
        index[g] = len(members) - 1
        frontier = list(range(len(members)))
        while frontier:
            nxt = []
            for pos in frontier:
                x = members[pos]
                for j in range(i + 1):
                    y = G.mul[x][gens[j]]
                    if y not in index:
                        index[y] = len(members)
                        members.append(y)
                        defs.append((pos, j))
                        nxt.append(len(members) - 1)
            frontier = nxt
        chain.append((list(members), list(defs)))
    return chain


def isomorphism(G: CayleyGroup, H: CayleyGroup,
                node_budget=ISO_NODE_BUDGET):
    """Explicit isomorphism G -> H as an index list, or None.

    Strategy: reject on invariant fingerprints, then backtrack over images
    of a minimal generating sequence of G, checking the induced partial map
    on each generated subgroup.  Every returned witness has been verified as
    a bijective homomorphism on all pairs.  Raises UndecidedError when the
    node budget runs out (never guesses).
    """
    if G.n != H.n:
        return None
    if G.n == 1:
        return [0]
    if group_fingerprint(G) != group_fingerprint(H):
        return None

    gens = list(G.minimal_generators())
    chain = _generation_chain(G, gens)
    fps_g = _element_fingerprints(G)
    fps_h = _element_fingerprints(H)
    candidates = [
        [h for h in range(H.n) if fps_h[h] == fps_g[g]] for g in gens
    ]
    nodes = 0

    def check_level(i, images):
        """Build phi on <g_1..g_i> from generator images; None if invalid."""
        members, defs = chain[i - 1]
        phi = [0] * len(members)
        for pos in range(1, len(members)):
            parent, j = defs[pos]
            phi[pos] = H.mul[phi[parent]][images[j]]
        if len(set(phi)) != len(members):
            return None
        to_pos = {x: p for p, x in enumerate(members)}
        for p in range(len(members)):
            xp = members[p]
            rowx = G.mul[xp]
            hp = phi[p]
            rowh = H.mul[hp]
            for q in range(len(members)):
                prod = rowx[members[q]]
                pos = to_pos.get(prod)
                if pos is None or phi[pos] != rowh[phi[q]]:
                    return None
        return phi, members

    def backtrack(i, images):
        nonlocal nodes
        if i == len(gens):
            result = check_level(i, images)
            if result is None:
                return None
            phi, members = result
            if len(members) != G.n:
                return None
            out = [0] * G.n
            for pos, x in enumerate(members):
                out[x] = phi[pos]
            return out
        for h in candidates[i]:
            nodes += 1
            if nodes > node_budget:
                raise UndecidedError(
                    f"isomorphism search exceeded {node_budget} nodes")
            if check_level(i + 1, images + [h]) is not None:
                found = backtrack(i + 1, images + [h])
                if found is not None:
                    return found
        return None

    return backtrack(0, [])


def is_isomorphic(G: CayleyGroup, H: CayleyGroup,
                  node_budget=ISO_NODE_BUDGET):
    return isomorphism(G, H, node_budget) is not None


def verify_homomorphism(G: CayleyGroup, H: CayleyGroup, phi):
    """Check that phi (index list) is a bijective homomorphism, all pairs."""
    if sorted(phi) != list(range(H.n)) or G.n != H.n:
        return False
    for x in range(G.n):
        rowx = G.mul[x]
        hx = H.mul[phi[x]]
        for y in range(G.n):
            if phi[rowx[y]] != hx[phi[y]]:
                return False
    return True


# -- normal subgroups and decomposability ------------------------------------


def normal_subgroups(G: CayleyGroup):
    """All normal subgroups, as sorted member tuples, found by closing
    joins of conjugacy classes."""
    if G._normal_subgroups is not None:
        return G._normal_subgroups
    classes = [cls for cls in G.conjugacy_classes() if cls != (0,)]
    trivial = (0,)
    found = {trivial: None}
    frontier = [trivial]
    while frontier:
        nxt = []
        for base in frontier:
            for cls in classes:
                if cls[0] in base:
                    continue
                closed = G.subgroup(set(base) | set(cls))
                if closed not in found:
                    if len(found) >= NORMAL_SUBGROUP_CAP:
                        raise SizeCapError(
                            "too many normal subgroups to enumerate")
                    found[closed] = None
                    nxt.append(closed)
        frontier = nxt
    result = sorted(found, key=lambda t: (len(t), t))
    G._normal_subgroups = result
    return result


def direct_factor_pair(G: CayleyGroup):
    """A pair (N1, N2) of complementary nontrivial normal subgroups, or
    None when G is indecomposable.  Deterministic: first pair in the sorted
    normal-subgroup order."""
    if G.n > INDECOMP_CAP:
        raise SizeCapError(
            f"indecomposability is only decided for order <= {INDECOMP_CAP}")
    if G.n == 1:
        return None
    if G.is_abelian():
        inv = G.abelian_invariants()
        if len(inv) == 1:
            return None
        # split off a cyclic factor of maximal order
        orders = G.element_orders()
        a = orders.index(max(orders))
        n1 = G.subgroup([a])
        target = G.n // len(n1)
        n1set = set(n1)
        for n2 in normal_subgroups(G):
            if len(n2) == target and len(n1set & set(n2)) == 1:
                return (n1, n2)
        raise Fuchs2Error("no complement for a maximal cyclic factor")
    subs = normal_subgroups(G)
    by_size = {}
    for s in subs:
        by_size.setdefault(len(s), []).append(s)
    for n1 in subs:
        if len(n1) in (1, G.n):
            continue
        other = G.n // len(n1)
        n1set = set(n1)
        for n2 in by_size.get(other, ()):
            if len(n1set & set(n2)) == 1:
                return (n1, n2)
    return None


def is_indecomposable(G: CayleyGroup):
    """True iff G is not a direct product of two nontrivial subgroups."""
    return direct_factor_pair(G) is None


# -- structure report ---------------------------------------------------------


@dataclass
class StructureReport:
    order: int
    exponent: int
    nilpotency_class: int
    center: tuple[int, ...]
    abelian_invariants: tuple[int, ...]
    indecomposable: bool | None
    minimal_generator_count: int

    def to_dict(self):
        return {
            "order": self.order,
            "exponent": self.exponent,
            "nilpotency_class": self.nilpotency_class,
            "center_size": len(self.center),
            "center": list(self.center),
            "abelian_invariants": list(self.abelian_invariants),
            "indecomposable": self.indecomposable,
            "minimal_generator_count": self.minimal_generator_count,
        }


def structure_report(G: CayleyGroup) -> StructureReport:
    invariants = G.abelian_invariants() if G.is_abelian() else ()
    try:
        indec = is_indecomposable(G)
    except SizeCapError:
        indec = None
    return StructureReport(
        order=G.n,
        exponent=G.exponent(),
        nilpotency_class=G.nilpotency_class(),
        center=G.center(),
        abelian_invariants=invariants,
        indecomposable=indec,
        minimal_generator_count=len(G.minimal_generators()),
    )
