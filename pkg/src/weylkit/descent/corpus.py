"""Seeded random equivariant modules for the descent property tests.

Two families:
  orbit   free module on a sum of irreducible representations modulo the
          H-orbit span of random homogeneous vectors;
  pulled  Sym tensor_{Sym^H} N for a random graded N over the invariant ring,
          which descends by construction.
Each module records the recipe it was built from.
"""

from __future__ import annotations

import random
from typing import Sequence

from ..coxeter import build_root_system
from ..exact.invariants import invariant_basis
from ..exact.modules import ModulePresentation
from ..exact.polynomial import monomials_of_degree
from ..exact.scalars import ONE, ZERO, qq, zeta
from .action import EquivariantModule, GroupAction, cyclic_action, weyl_group_action

GROUPS = ("A1", "A2", "B2", "G2", "Z3")


def make_group(name: str) -> GroupAction:
    if name == "Z3":
        return cyclic_action(3)
    return weyl_group_action(build_root_system(name))


_GROUP_CACHE: dict = {}


def group(name: str) -> GroupAction:
    if name not in _GROUP_CACHE:
        _GROUP_CACHE[name] = make_group(name)
    return _GROUP_CACHE[name]


def irreps(name: str, G: GroupAction) -> dict:
    """Named representations given by matrices for each group generator."""
    k = len(G.generators)
    if name == "Z3":
        return {f"chi{j}": [[[zeta(3, j)]]] for j in range(3)}
    out = {"trivial": [[[ONE]] for _ in range(k)], "sign": [[[-ONE]] for _ in range(k)]}
    if name in ("B2", "G2"):
        out["sign1"] = [[[-ONE]], [[ONE]]]
        out["sign2"] = [[[ONE]], [[-ONE]]]
    if G.ring.nvars > 1:
        out["standard"] = [[list(r) for r in A] for A in G.generators]
    return out


def _block_diag(blocks: Sequence) -> list:
    n = sum(len(b) for b in blocks)
    M = [[ZERO] * n for _ in range(n)]
    o = 0
    for b in blocks:
        for i in range(len(b)):
            for j in range(len(b)):
                M[o + i][o + j] = b[i][j]
        o += len(b)
    return M


def _random_poly(rng: random.Random, ring, d: int, density: float = 0.7):
    terms = {}
    for e in monomials_of_degree(ring.nvars, d):
        if rng.random() < density:
            c = rng.randint(-2, 2)
            if c:
                terms[e] = qq(c)
    if not terms:
        e = rng.choice(monomials_of_degree(ring.nvars, d))
        terms[e] = qq(rng.choice([-1, 1]))
    from ..exact.polynomial import Poly
    return Poly(ring, terms)


def orbit_module(name: str, rng: random.Random, max_rel_degree: int = 3) -> EquivariantModule:
    G = group(name)
    reps = irreps(name, G)
    names = sorted(reps)
    chosen = [rng.choice(names) for _ in range(rng.choice([1, 1, 2]))]
    gdeg = [rng.choice([0, 0, 1]) for _ in chosen]
    degrees, blocks = [], []
    for rep, d in zip(chosen, gdeg):
        dim = len(reps[rep][0])
        degrees += [d] * dim
        blocks.append(rep)
    acts = [_block_diag([reps[b][k] for b in blocks]) for k in range(len(G.generators))]
    ring = G.ring
    r = len(degrees)
    rels = []
    recipe_rels = []
    for _ in range(rng.choice([0, 1, 1, 2])):
        target = max(degrees) + rng.randint(1, max_rel_degree)
        v = []
        for j in range(r):
            if rng.random() < 0.75:
                v.append(_random_poly(rng, ring, target - degrees[j]))
            else:
                v.append(ring.zero())
        if not any(v):
            v[0] = _random_poly(rng, ring, target - degrees[0])
        recipe_rels.append([str(p) for p in v])
        rels.append(v)
    pres0 = ModulePresentation(ring, degrees, [])
    EM0 = EquivariantModule(pres0, G, acts, check=False)
    orbit = []
    for v in rels:
        for g in range(G.order):
            w = EM0.act_vec(g, v)
            if any(w):
                orbit.append(w)
    recipe = {"family": "orbit", "group": name, "reps": chosen, "generator_degrees": gdeg,
              "relations": recipe_rels}
    return EquivariantModule(ModulePresentation(ring, degrees, orbit), G, acts, recipe)


def pulled_module(name: str, rng: random.Random) -> EquivariantModule:
    G = group(name)
    ring = G.ring
    r = rng.choice([1, 1, 2])
    degrees = [rng.choice([0, 0, 1]) for _ in range(r)]
    inv_degs = sorted({f.degree() for f in G.invariants()})
    rels, recipe_rels = [], []
    for _ in range(rng.choice([0, 1, 1, 2])):
        target = max(degrees) + rng.choice(inv_degs) + rng.choice([0, 0] + inv_degs)
        v = []
        for j in range(r):
            basis = invariant_basis(G.elements, ring, target - degrees[j]) if target >= degrees[j] else []
            p = ring.zero()
            for b in basis:
                c = rng.randint(-2, 2)
                if c:
                    p = p + b.scale(qq(c))
            v.append(p)
        if any(v):
            rels.append(v)
            recipe_rels.append([str(p) for p in v])
    acts = [[[ONE if i == j else ZERO for j in range(r)] for i in range(r)] for _ in G.generators]
    recipe = {"family": "pulled", "group": name, "generator_degrees": degrees, "relations": recipe_rels}
    return EquivariantModule(ModulePresentation(ring, degrees, rels), G, acts, recipe)


def random_module(name: str, seed: int, index: int) -> EquivariantModule:
    rng = random.Random(f"{name}:{seed}:{index}")
    if rng.random() < 0.35:
        M = pulled_module(name, rng)
    else:
        M = orbit_module(name, rng)
    M.recipe.update({"seed": seed, "index": index})
    return M


def corpus(name: str, count: int = 50, seed: int = 0) -> list:
    return [random_module(name, seed, i) for i in range(count)]
