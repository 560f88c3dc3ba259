"""Affine and extended affine Weyl groups acting on t*, stabilizers and integral Weyl groups.

An affine element (mu, w) acts by x -> w x + mu, with mu in the root lattice
(affine Weyl group) or the weight lattice (extended affine Weyl group).
The affine simple reflection s0 is the reflection in the wall
<x, beta^vee> = 1 of the fundamental alcove, where beta^vee is the highest
coroot; s0 = (beta, s_beta).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Iterable, Sequence

from .coxeter import (RootSystem, WeylElement, build_root_system, parse_word,
                      word_to_str)
from .exact.linalg import matvec
from .exact.scalars import ONE, ZERO, Cyclotomic, qq


class StabilizerMismatch(AssertionError):
    pass


def _q(v) -> tuple:
    return tuple(qq(c) if not isinstance(c, Cyclotomic) else c for c in v)


def _floor(c) -> int:
    c = qq(c)
    return int(c.numerator // c.denominator)


@dataclass(frozen=True, eq=False)
class AffineElement:
    mu: tuple
    w: WeylElement
    group: "AffineWeylGroup" = field(repr=False, compare=False)

    def __eq__(self, other):
        return isinstance(other, AffineElement) and self.mu == other.mu and self.w == other.w

    def __hash__(self):
        return hash((self.mu, self.w))

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        wm = self.w.act(other.mu)
        return self.group.make(tuple(a + b for a, b in zip(self.mu, wm)), self.w * other.w)

    def inverse(self) -> "AffineElement":
        winv = self.w.inverse()
        return self.group.make(tuple(-c for c in winv.act(self.mu)), winv)

    def act(self, x: Sequence) -> list:
        return [a + b for a, b in zip(self.w.act(list(x)), self.mu)]

    def dot(self, x: Sequence) -> list:
        """Dot action g.x = g(x + rho) - rho."""
        rho = self.group.rs.rho
        y = self.act([a + r for a, r in zip(x, rho)])
        return [a - r for a, r in zip(y, rho)]

    @property
    def word(self) -> tuple:
        return self.group.reduced_word(self)

    @property
    def length(self) -> int:
        return self.group.length(self)

    def is_identity(self) -> bool:
        return self.w.is_identity() and all(c == 0 for c in self.mu)

    def name(self) -> str:
        wd = self.group.reduced_word(self)
        om = self.group.omega_part(self)
        base = word_to_str(wd)
        if om is not None and not om.is_identity():
            return f"omega[{','.join(str(c) for c in om.mu)};{om.w.name()}] {base}"
        return base

    def __repr__(self):
        return f"<{self.group.label} mu={[str(c) for c in self.mu]} w={self.w.name()}>"


class AffineWeylGroup:
    """W^aff = lattice x| W, with Coxeter generators s0, s1, ..., sn."""

    def __init__(self, rs: RootSystem, lattice: str = "root"):
        self.rs = rs
        self.lattice = lattice
        self.label = rs.label + "~"
        n = rs.rank
        # beta: positive root whose coroot is the highest coroot
        heights = [sum(c) for c in rs.positive_coroots]
        k = max(range(len(heights)), key=lambda i: (heights[i], i))
        self.beta = rs.positive_roots[k]
        self.beta_check = rs.positive_coroots[k]
        s_beta = rs.element_from_matrix(rs.reflection_matrix(self.beta))
        self.identity = self.make((ZERO,) * n, rs.identity)
        self.s0 = self.make(_q(self.beta), s_beta)
        self.simple = [self.s0] + [self.make((ZERO,) * n, s) for s in rs.simple_reflections]
        h = rs.pairing(rs.rho, self.beta_check)
        # interior point of the fundamental alcove
        self.alcove_point = [qq(c) / (h + 1) for c in rs.rho]
        self._word_cache: dict = {}

    def make(self, mu, w) -> AffineElement:
        return AffineElement(_q(mu), w, self)

    def translation(self, mu) -> AffineElement:
        return self.make(mu, self.rs.identity)

    def simple_reflection(self, i: int) -> AffineElement:
        return self.simple[i]

    @property
    def rank(self) -> int:
        return self.rs.rank

    # walls and descents ----------------------------------------------------
    def wall_values(self, x: Sequence) -> list:
        """f_0(x) = 1 - <x, beta^vee>, f_i(x) = <x, alpha_i^vee> = x_i."""
        return [ONE - self.rs.pairing(x, self.beta_check)] + list(x)

    def left_descents(self, g: AffineElement) -> list:
        v = self.wall_values(g.act(self.alcove_point))
        return [i for i in range(self.rank + 1) if v[i] < 0]

    def right_descents(self, g: AffineElement) -> list:
        v = self.wall_values(g.inverse().act(self.alcove_point))
        return [i for i in range(self.rank + 1) if v[i] < 0]

    def _strip(self, g: AffineElement):
        word = []
        cur = g
        while True:
            d = self.right_descents(cur)
            if not d:
                break
            i = d[0]
            word.append(i)
            cur = cur * self.simple[i]
        return tuple(reversed(word)), cur

    def reduced_word(self, g: AffineElement) -> tuple:
        key = (g.mu, g.w)
        if key not in self._word_cache:
            self._word_cache[key] = self._strip(g)
        return self._word_cache[key][0]

    def omega_part(self, g: AffineElement) -> AffineElement:
        """Length-zero element omega with g = omega * (product of the reduced word)."""
        key = (g.mu, g.w)
        if key not in self._word_cache:
            self._word_cache[key] = self._strip(g)
        return self._word_cache[key][1]

    def length(self, g: AffineElement) -> int:
        return len(self.reduced_word(g))

    def inversion_length(self, g: AffineElement) -> int:
        """Number of affine hyperplanes <x, alpha^vee> = k separating the alcove from its image."""
        y = g.act(self.alcove_point)
        return sum(abs(_floor(self.rs.pairing(y, cor))) for cor in self.rs.positive_coroots)

    def element_from_word(self, word: Iterable[int]) -> AffineElement:
        g = self.identity
        for i in word:
            if not 0 <= i <= self.rank:
                raise ValueError(f"simple index {i} out of range for {self.label}")
            g = g * self.simple[i]
        return g

    def parse_element(self, text: str) -> AffineElement:
        return self.element_from_word(parse_word(text))

    def elements_up_to_length(self, k: int) -> list:
        """All Coxeter-group elements of length <= k, by BFS."""
        seen = {self.identity: 0}
        frontier = [self.identity]
        for _ in range(k):
            nxt = []
            for g in frontier:
                for s in self.simple:
                    h = g * s
                    if h not in seen:
                        seen[h] = 1
                        nxt.append(h)
            frontier = nxt
        return sorted((g for g in seen if g.length <= k), key=lambda g: (g.length, g.word))

    def lower_interval(self, g: AffineElement, bound: int = 12) -> list:
        """{h : h <= g}: all subword products of a reduced word, times the length-zero part."""
        word = self.reduced_word(g)
        if len(word) > bound:
            raise ValueError(f"length {len(word)} exceeds bound {bound}")
        om = self.omega_part(g)
        found = {self.identity}
        # all subword products; Bruhat interval = set of subword products
        for i in word:
            found |= {h * self.simple[i] for h in found}
        out = {om * h for h in found}
        return sorted(out, key=lambda h: (h.length, h.word))

    def __repr__(self):
        return f"AffineWeylGroup({self.label}, lattice={self.lattice})"


@lru_cache(maxsize=None)
def affine_group(label: str, lattice: str = "root") -> AffineWeylGroup:
    base = label[:-1] if label.endswith("~") else label
    return AffineWeylGroup(build_root_system(base), lattice)


def affine_act(g: AffineElement, x: Sequence) -> list:
    return g.act(x)


def affine_bruhat_leq(G: AffineWeylGroup, u: AffineElement, w: AffineElement) -> bool:
    """Greedy subword test along the reduced word of w (length-zero parts must agree)."""
    ou, ow = G.omega_part(u), G.omega_part(w)
    if ou != ow:
        return False
    cur = ow.inverse() * u
    for i in G.reduced_word(ow.inverse() * w):
        if i in G.left_descents(cur):
            cur = G.simple[i] * cur
    return cur.is_identity()


# --- integral Weyl groups -------------------------------------------------------

@dataclass
class IntegralWeylData:
    point: tuple
    lattice: str
    W_bracket: list            # {w : w x - x in Z Phi}
    lifts: dict                # w -> mu with (mu, w) x = x, mu in Z Phi
    Phi_bracket: list          # roots alpha with <x, alpha^vee> integral
    W_x: list                  # group generated by reflections in Phi_bracket
    W_dot: list                # {w : w.x - x in Z Phi}
    extended: list             # {w : w x - x in the chosen lattice}
    extended_lifts: dict
    agree: bool

    def stabilizer_generators(self, G: AffineWeylGroup) -> list:
        return [G.make(self.extended_lifts[w], w) for w in self.extended]


def _subgroup_generated(rs: RootSystem, gens: Sequence[WeylElement]) -> list:
    out = {rs.identity}
    frontier = [rs.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                if h not in out:
                    out.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(out, key=lambda g: (g.length, g.word))


def integral_root_subsystem(rs: RootSystem, x: Sequence) -> list:
    """Phi_[x] = {alpha : <x, alpha^vee> in Z} (all roots, positive and negative)."""
    out = []
    for r, cor in rs.roots.items():
        v = rs.pairing(x, cor)
        if not isinstance(v, Cyclotomic) and qq(v).denominator == 1:
            out.append(r)
    return sorted(out)


def stabilizer(rs: RootSystem, x: Sequence, lattice: str | None = None,
               check: bool = True) -> IntegralWeylData:
    """Integral Weyl group of x computed four ways, plus the lattice-dependent stabilizer."""
    lattice = lattice or rs.lattice
    x = _q(x)
    stab, lifts = [], {}
    ext, ext_lifts = [], {}
    dot = []
    rho = rs.rho
    for w in rs.elements:
        d = [a - b for a, b in zip(w.act(x), x)]
        mu = tuple(-c for c in d)
        if rs.in_lattice(d, "root"):
            stab.append(w)
            lifts[w] = mu
        if rs.in_lattice(d, lattice):
            ext.append(w)
            ext_lifts[w] = mu
        xr = [a + r for a, r in zip(x, rho)]
        dd = [a - r - b for a, r, b in zip(w.act(xr), rho, x)]
        if rs.in_lattice(dd, "root"):
            dot.append(w)
    phi = integral_root_subsystem(rs, x)
    refl = [rs.element_from_matrix(rs.reflection_matrix(r)) for r in phi]
    Wx = _subgroup_generated(rs, refl)
    agree = set(stab) == set(Wx) == set(dot)
    data = IntegralWeylData(x, lattice, stab, lifts, phi, Wx, dot, ext, ext_lifts, agree)
    if check:
        if not agree:
            raise StabilizerMismatch(
                f"integral Weyl group definitions disagree at {[str(c) for c in x]}")
        verify_integral_subsystem(rs, data)
        G = AffineWeylGroup(rs, lattice)
        for w in ext:
            g = G.make(ext_lifts[w], w)
            if list(g.act(x)) != list(x):
                raise StabilizerMismatch("lift does not fix the point")
    return data


def verify_integral_subsystem(rs: RootSystem, data: IntegralWeylData) -> None:
    phi = set(data.Phi_bracket)
    for w in data.W_bracket:
        for r in phi:
            if tuple(w.act(r)) not in phi:
                raise StabilizerMismatch("integral root subsystem not W_[x]-stable")


def lift_candidates(rs: RootSystem, w: WeylElement, x: Sequence, lattice: str) -> list:
    """All mu in a box of the lattice with (mu, w) x = x (uniqueness oracle)."""
    import itertools
    basis = rs.lattice_basis(lattice)
    out = []
    for coeffs in itertools.product(range(-4, 5), repeat=rs.rank):
        mu = [sum((c * b[k] for c, b in zip(coeffs, basis)), ZERO) for k in range(rs.rank)]
        y = [a + m for a, m in zip(w.act(list(x)), mu)]
        if [qq(c) for c in y] == [qq(c) for c in x]:
            out.append(tuple(mu))
    return out


# --- orbits ------------------------------------------------------------------------

def orbit_decomposition(S: Sequence[AffineElement], x: Sequence) -> list:
    """Partition S by the image point g x (deterministic block order)."""
    blocks: dict = {}
    for g in S:
        key = tuple(g.act(x))
        blocks.setdefault(key, []).append(g)
    return [blocks[k] for k in sorted(blocks, key=lambda p: [qq(c) for c in p])]


def special_points(rs: RootSystem, denoms: Sequence[int] = (1, 2, 3, 4), box: int = 2) -> list:
    """Points in [0, box)^n-ish fundamental region with coordinates of small denominators.

    Coordinates are in weight coordinates; the box [0, box] covers twice the
    fundamental alcove for the supported types.
    """
    vals = set()
    for d in denoms:
        for k in range(0, box * d + 1):
            vals.add(Fraction(k, d))
    vals = sorted(vals)
    import itertools
    pts = []
    for p in itertools.product(vals, repeat=rs.rank):
        pts.append(tuple(qq(c) for c in p))
    return pts


def generic_points(rs: RootSystem, count: int, seed: int = 0, certify=None) -> list:
    """Deterministic rational points avoiding every integrality condition.

    A point is accepted when no root pairing <x, alpha^vee> is an integer
    (so no affine hyperplane contains it) and ``certify`` (if given) agrees.
    """
    import random
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 100000:
            raise RuntimeError("could not find enough generic points")
        p = tuple(qq(rng.randint(-60, 60)) / rng.choice([7, 11, 13, 17, 19, 23]) for _ in range(rs.rank))
        ok = all(qq(rs.pairing(p, cor)).denominator != 1 for cor in rs.positive_coroots)
        if ok and certify is not None:
            ok = certify(p)
        if ok:
            out.append(p)
    return out


def random_points(rs: RootSystem, count: int, seed: int = 0, max_den: int = 12) -> list:
    import random
    rng = random.Random(seed)
    return [tuple(qq(rng.randint(-3 * max_den, 3 * max_den)) / rng.randint(1, max_den)
                  for _ in range(rs.rank)) for _ in range(count)]
