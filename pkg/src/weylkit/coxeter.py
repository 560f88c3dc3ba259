"""Finite root systems, Weyl groups, Bruhat order and closed subsets.

Coordinates: a point of t* is written in weight coordinates
c_i = <lambda, alpha_i^vee>, which are also the values of the polynomial
variables x_i (the simple coroots).  The Cartan matrix is
A[i][j] = <alpha_j, alpha_i^vee>, so alpha_j is column j of A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .exact.linalg import identity, inverse, matmul, matvec, transpose
from .exact.scalars import ONE, ZERO, qq

CARTAN = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "C2": [[2, -2], [-1, 2]],
    "G2": [[2, -3], [-1, 2]],
}

SUPPORTED = tuple(CARTAN)


class UnsupportedType(ValueError):
    pass


def _freeze(M) -> tuple:
    return tuple(tuple(qq(c) for c in r) for r in M)


@dataclass(frozen=True, eq=False)
class WeylElement:
    """Element of a finite Weyl group: matrix on t* (weight coordinates) plus a reduced word."""

    matrix: tuple
    word: tuple
    rs: "RootSystem" = field(repr=False, compare=False)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return self.rs.element_from_matrix(matmul(self.matrix, other.matrix))

    def inverse(self) -> "WeylElement":
        return self.rs.element_from_matrix(inverse(self.matrix))

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, v: Sequence) -> list:
        return matvec(self.matrix, list(v))

    def is_identity(self) -> bool:
        return not self.word

    def name(self) -> str:
        return word_to_str(self.word)

    def __repr__(self):
        return f"<{self.rs.label} {self.name()}>"

    def coroot_action(self) -> list:
        """Matrix of w on t in the simple coroot basis (acts on the polynomial variables)."""
        return transpose(inverse(self.matrix))


def word_to_str(word: Sequence[int]) -> str:
    return " ".join(f"s{i}" for i in word) if word else "e"


def parse_word(text: str) -> tuple:
    """Parse ``"s1 s2 s1"``, ``"s1s2"``, ``"1,2,1"`` or ``"e"`` into an index tuple."""
    text = text.strip().replace("s", " s")
    out = []
    for tok in text.replace(",", " ").split():
        tok = tok.strip()
        if tok == "e":
            continue
        if tok.startswith("s"):
            tok = tok[1:]
        if not tok.isdigit():
            raise ValueError(f"bad word token {tok!r}")
        out.append(int(tok))
    return tuple(out)


class RootSystem:
    """Cartan datum with its roots, coroots, finite Weyl group and lattices."""

    def __init__(self, label: str, lattice: str = "root"):
        if label not in CARTAN:
            raise UnsupportedType(f"unsupported Cartan type {label!r}; choose from {SUPPORTED}")
        if lattice not in ("root", "weight"):
            raise ValueError("lattice must be 'root' or 'weight'")
        self.label = label
        self.lattice = lattice
        self.cartan = [list(r) for r in CARTAN[label]]
        self.rank = len(self.cartan)
        n = self.rank
        A = self.cartan
        self.simple_reflection_matrices = [
            _freeze([[(1 if j == k else 0) - (A[j][i] if k == i else 0) for k in range(n)]
                     for j in range(n)])
            for i in range(n)]
        self._by_matrix: dict = {}
        self._build()

    # construction --------------------------------------------------------
    def _build(self):
        n = self.rank
        A = self.cartan
        e = WeylElement(_freeze(identity(n)), (), self)
        self._by_matrix[e.matrix] = e
        frontier = [e]
        # BFS by length; words via left multiplication give reduced words of
        # the right length, then canonicalise with the descent walk
        while frontier:
            nxt = []
            for g in frontier:
                for i in range(n):
                    M = _freeze(matmul(self.simple_reflection_matrices[i], g.matrix))
                    if M not in self._by_matrix:
                        h = WeylElement(M, (i + 1,) + g.word, self)
                        self._by_matrix[M] = h
                        nxt.append(h)
            frontier = nxt
        rho = [ONE] * n
        self.rho = rho
        canon = {}
        for M, g in self._by_matrix.items():
            canon[M] = WeylElement(M, self._descent_word(M), self)
        self._by_matrix = canon
        self.elements = sorted(canon.values(), key=lambda g: (len(g.word), g.word))
        self.identity = self.elements[0]
        self.w0 = self.elements[-1]
        self.simple_reflections = [self.element_from_word((i + 1,)) for i in range(n)]
        # roots as W-images of simple roots, in weight coordinates
        simple_roots = [tuple(qq(A[j][i]) for j in range(n)) for i in range(n)]
        Ainv = inverse([[qq(c) for c in r] for r in A])
        self._Ainv = Ainv
        roots = {}
        for g in self.elements:
            N = g.coroot_action()
            for i in range(n):
                r = tuple(matvec(g.matrix, simple_roots[i]))
                if r not in roots:
                    cor = tuple(N[k][i] for k in range(n))
                    roots[r] = cor
        self.roots = roots  # root (weight coords) -> coroot (coroot-basis coords)
        pos = []
        for r, cor in roots.items():
            coeffs = matvec(Ainv, list(r))
            if all(c >= 0 for c in coeffs):
                pos.append((r, cor, coeffs))
        pos.sort(key=lambda t: (sum(t[2]), [-c for c in t[2]]))
        self.positive_roots = [p[0] for p in pos]
        self.positive_coroots = [p[1] for p in pos]
        self.positive_root_coeffs = [tuple(p[2]) for p in pos]
        self.simple_roots = simple_roots
        self.rho_check = tuple(sum((c[k] for c in self.positive_coroots), ZERO) / 2
                               for k in range(n))
        self.rho_weight = tuple(sum((r[k] for r in self.positive_roots), ZERO) / 2
                                for k in range(n))
        assert all(c == 1 for c in self.rho_weight), "rho must be (1,...,1) in weight coordinates"

    def _descent_word(self, M) -> tuple:
        """Reduced word via the descent walk: strip the smallest right descent."""
        word = []
        cur = [list(r) for r in M]
        n = self.rank
        while True:
            # right descent s_i of w iff <w^{-1} rho, alpha_i^vee> < 0
            inv = inverse(cur)
            v = matvec(inv, [ONE] * n)
            i = next((k for k in range(n) if v[k] < 0), None)
            if i is None:
                break
            word.append(i + 1)
            cur = matmul(cur, self.simple_reflection_matrices[i])
        return tuple(reversed(word))

    # element access -----------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    def element_from_matrix(self, M) -> WeylElement:
        key = _freeze(M)
        try:
            return self._by_matrix[key]
        except KeyError:
            raise ValueError("matrix is not in the Weyl group") from None

    def element_from_word(self, word: Iterable[int]) -> WeylElement:
        M = identity(self.rank)
        for i in word:
            if not 1 <= i <= self.rank:
                raise ValueError(f"simple index {i} out of range for {self.label}")
            M = matmul(M, self.simple_reflection_matrices[i - 1])
        return self.element_from_matrix(M)

    def parse_element(self, text: str) -> WeylElement:
        return self.element_from_word(parse_word(text))

    def length(self, w: WeylElement) -> int:
        return len(w.word)

    def inversion_length(self, w: WeylElement) -> int:
        """#{alpha > 0 : w^{-1} alpha < 0}, independent of the stored word."""
        winv = inverse(w.matrix)
        count = 0
        for r in self.positive_roots:
            coeffs = matvec(self._Ainv, matvec(winv, list(r)))
            if any(c < 0 for c in coeffs):
                count += 1
        return count

    def left_descents(self, w: WeylElement) -> list:
        v = w.act(self.rho)
        return [i + 1 for i in range(self.rank) if v[i] < 0]

    def right_descents(self, w: WeylElement) -> list:
        v = matvec(inverse(w.matrix), self.rho)
        return [i + 1 for i in range(self.rank) if v[i] < 0]

    def simple_reflection(self, i: int) -> WeylElement:
        return self.simple_reflections[i - 1]

    def lower_interval(self, w: WeylElement) -> list:
        return lower_set(self, w)

    def reduced_words(self, w: WeylElement) -> list:
        """All reduced words of w (sorted)."""
        return sorted(_all_reduced_words(self, w.matrix))

    def reflection_matrix(self, root: Sequence) -> tuple:
        """s_alpha on t*: lambda -> lambda - <lambda, alpha^vee> alpha."""
        cor = self.roots[tuple(root)]
        n = self.rank
        return _freeze([[(1 if j == k else 0) - root[j] * cor[k] for k in range(n)]
                        for j in range(n)])

    def reflections(self) -> list:
        return [self.element_from_matrix(self.reflection_matrix(r)) for r in self.positive_roots]

    def pairing(self, lam: Sequence, coroot: Sequence):
        """<lambda, alpha^vee> with lambda in weight coords, coroot in the coroot basis."""
        s = ZERO
        for a, b in zip(lam, coroot):
            s = s + a * b
        return s

    # lattices -------------------------------------------------------------
    def lattice_basis(self, lattice: str | None = None) -> list:
        """Basis vectors (weight coordinates) of Z Phi or of the weight lattice."""
        lattice = lattice or self.lattice
        if lattice == "root":
            return [list(r) for r in self.simple_roots]
        return [[ONE if i == j else ZERO for j in range(self.rank)] for i in range(self.rank)]

    def in_lattice(self, v: Sequence, lattice: str | None = None) -> bool:
        lattice = lattice or self.lattice
        if lattice == "weight":
            return all(qq(c).denominator == 1 for c in v) if _all_rational(v) else False
        if not _all_rational(v):
            return False
        coeffs = matvec(self._Ainv, list(v))
        return all(c.denominator == 1 for c in coeffs)

    def lattice_index(self) -> int:
        """[weight lattice : root lattice] = |det A|."""
        from .exact.linalg import det
        return abs(int(det([[qq(c) for c in r] for r in self.cartan])))

    def __repr__(self):
        return f"RootSystem({self.label}, lattice={self.lattice})"


def _all_rational(v) -> bool:
    from .exact.scalars import Cyclotomic
    return not any(isinstance(c, Cyclotomic) for c in v)


def _all_reduced_words(rs: RootSystem, M) -> set:
    key = _freeze(M)
    return set(_rw_cached(rs, key))


def _rw_cached(rs: RootSystem, key) -> tuple:
    cache = rs.__dict__.setdefault("_rw_cache", {})
    if key in cache:
        return cache[key]
    w = rs._by_matrix[key]
    if not w.word:
        cache[key] = ((),)
        return cache[key]
    out = set()
    for i in rs.right_descents(w):
        prev = _freeze(matmul(w.matrix, rs.simple_reflection_matrices[i - 1]))
        for word in _rw_cached(rs, prev):
            out.add(word + (i,))
    cache[key] = tuple(sorted(out))
    return cache[key]


@lru_cache(maxsize=None)
def build_root_system(label: str, lattice: str = "root") -> RootSystem:
    return RootSystem(label, lattice)


# --- Bruhat order -----------------------------------------------------------

def bruhat_leq(rs, u, w) -> bool:
    """u <= w by the greedy subword test along the stored reduced word of w.

    Walk w = s_1 s_2 ... s_k from the left; whenever s_j is a left descent of
    the current u, replace u by s_j u.  Then u <= w iff u ends at e.
    Works for finite and affine groups (anything with left_descents and
    left multiplication by simple reflections).
    """
    cur = u
    for i in w.word:
        if i in rs.left_descents(cur):
            cur = rs.simple_reflection(i) * cur
    return not cur.word


def bruhat_leq_oracle(rs: RootSystem, u: WeylElement, w: WeylElement) -> bool:
    """Brute force: some reduced word of u is a subword of every reduced word of w."""
    target = set(rs.reduced_words(u))
    for word in rs.reduced_words(w):
        found = False
        k = len(word)
        for r in range(len(u.word), len(u.word) + 1):
            for pos in combinations(range(k), r):
                if tuple(word[p] for p in pos) in target:
                    found = True
                    break
            if found:
                break
        if not found:
            return False
    return True


def lower_set(rs, w) -> list:
    return [u for u in rs.elements if u.length <= w.length and bruhat_leq(rs, u, w)]


def is_closed(rs, S: Iterable, universe: Iterable | None = None) -> bool:
    """Whether S is downward closed in Bruhat order."""
    return first_closure_violation(rs, S, universe) is None


def first_closure_violation(rs, S: Iterable, universe: Iterable | None = None):
    """(u, w) with u <= w, w in S, u not in S; None when S is closed."""
    S = list(S)
    members = set(S)
    for w in sorted(S, key=lambda g: (g.length, g.word)):
        for u in rs.lower_interval(w):
            if u not in members:
                return (u, w)
    return None


def enumerate_closed_subsets(rs: RootSystem, bound: int = 24) -> list:
    """All order ideals of the Bruhat poset (as frozensets), smallest first."""
    if rs.order > bound:
        raise ValueError(f"|W| = {rs.order} exceeds the bound {bound}")
    elems = rs.elements  # sorted by length: a linear extension
    below = {w: [u for u in lower_set(rs, w) if u != w] for w in elems}
    out = []

    def rec(k, chosen: set):
        if k == len(elems):
            out.append(frozenset(chosen))
            return
        w = elems[k]
        rec(k + 1, chosen)
        if all(u in chosen for u in below[w]):
            chosen.add(w)
            rec(k + 1, chosen)
            chosen.remove(w)

    rec(0, set())
    out.sort(key=lambda S: (len(S), sorted(g.word for g in S)))
    return out


def poincare_polynomial(rs: RootSystem) -> list:
    """Coefficients of sum_w t^{l(w)}."""
    top = rs.w0.length
    out = [0] * (top + 1)
    for g in rs.elements:
        out[g.length] += 1
    return out
