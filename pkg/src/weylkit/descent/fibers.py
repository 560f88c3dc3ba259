"""Derived fibers of equivariant modules, and Tor over the coinvariant algebra.

At a point x the derived fiber is computed from a minimal graded free
resolution F of M: Tor_i = H_i(F tensor k_x).  The stabilizer H_x acts
through chain lifts phi_i(g): F_i -> F_i built degree by degree, starting
from the action on generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..exact.linalg import identity, inverse, matmul, nullspace, rank, row_space_basis, solve_many, transpose
from ..exact.modules import FreeResolution, Submodule, free_resolution, vec_degree
from ..exact.polynomial import Poly, PolyRing, monomials_of_degree
from ..exact.scalars import ONE, ZERO, format_scalar, qq
from .action import EquivariantModule, GroupAction


# --- lifting along a column matrix ---------------------------------------------------

class ColumnSolver:
    """Solve sum_k a_k cols[k] = target for homogeneous targets, degree by degree."""

    def __init__(self, ring: PolyRing, cols: Sequence, shifts: Sequence[int]):
        self.ring = ring
        self.cols = [list(c) for c in cols]
        self.shifts = list(shifts)
        self.rank = len(shifts)
        self.col_degs = [vec_degree(c, shifts) for c in cols]
        self._cache = {}

    def _system(self, d: int):
        if d in self._cache:
            return self._cache[d]
        n = self.ring.nvars
        unknowns = []
        for k, dk in enumerate(self.col_degs):
            if dk is not None and d - dk >= 0:
                unknowns += [(k, e) for e in monomials_of_degree(n, d - dk)]
        rows = []
        for i, s in enumerate(self.shifts):
            if d - s >= 0:
                rows += [(i, e) for e in monomials_of_degree(n, d - s)]
        rindex = {r: t for t, r in enumerate(rows)}
        A = [[ZERO] * len(unknowns) for _ in rows]
        for u, (k, e) in enumerate(unknowns):
            for i, p in enumerate(self.cols[k]):
                for m, c in p.terms.items():
                    key = (i, tuple(a + b for a, b in zip(m, e)))
                    A[rindex[key]][u] += c
        self._cache[d] = (unknowns, rows, rindex, A)
        return self._cache[d]

    def solve(self, targets: Sequence, d: int) -> list:
        unknowns, rows, rindex, A = self._system(d)
        B = []
        for t in targets:
            b = [ZERO] * len(rows)
            for i, p in enumerate(t):
                for m, c in p.terms.items():
                    b[rindex[(i, m)]] += c
            B.append(b)
        if not rows:
            return [[self.ring.zero() for _ in self.cols] for _ in targets]
        if not unknowns:
            sols = [[] if all(v == 0 for v in b) else None for b in B]
        else:
            sols = solve_many(A, B)
        out = []
        for s in sols:
            if s is None:
                out.append(None)
                continue
            coeffs = [dict() for _ in self.cols]
            for (k, e), v in zip(unknowns, s):
                if v != 0:
                    coeffs[k][e] = v
            out.append([Poly(self.ring, c) for c in coeffs])
        return out


class LiftError(RuntimeError):
    pass


def chain_lifts(EM: EquivariantModule, res: FreeResolution, elements: Sequence[int]) -> dict:
    """phi_i(g) for each g in ``elements``: lists of image vectors of the F_i basis."""
    ring = EM.ring
    G = EM.group
    solvers = [ColumnSolver(ring, res.maps[i], res.degrees[i]) for i in range(len(res.maps))]
    lifts = {}
    for g in elements:
        R = EM.rho[g]
        r0 = len(res.degrees[0])
        phi0 = [[ring.const(R[i][j]) for i in range(r0)] for j in range(r0)]
        phis = [phi0]
        for i, cols in enumerate(res.maps):
            prev = phis[-1]
            targets_by_deg = {}
            for b, col in enumerate(cols):
                moved = [G.act_poly(g, p) if p else p for p in col]
                tgt = [ring.zero() for _ in range(len(res.degrees[i]))]
                for k, a in enumerate(moved):
                    if not a:
                        continue
                    for t in range(len(tgt)):
                        if prev[k][t]:
                            tgt[t] = tgt[t] + a * prev[k][t]
                d = res.degrees[i + 1][b]
                targets_by_deg.setdefault(d, []).append((b, tgt))
            cur = [None] * len(cols)
            for d, items in targets_by_deg.items():
                sols = solvers[i].solve([t for _, t in items], d)
                for (b, _), s in zip(items, sols):
                    if s is None:
                        raise LiftError(f"chain lift failed in homological degree {i + 1}")
                    cur[b] = s
            phis.append(cur)
        lifts[g] = phis
    return lifts


# --- homology with group action ----------------------------------------------------

def _eval_matrix(cols, rows: int, x) -> list:
    """Scalar matrix (rows x len(cols)) of a column matrix evaluated at x."""
    M = [[ZERO] * len(cols) for _ in range(rows)]
    for j, col in enumerate(cols):
        for i in range(rows):
            if col[i]:
                M[i][j] = col[i].evaluate(x)
    return M


def induced_on_quotient(Z: list, B: list, maps: dict, dim: int):
    """Basis of Z/B (Z, B lists of vectors, B inside Z) and induced matrices of ``maps``.

    ``maps`` sends keys to square matrices on the ambient space.
    Returns (complement vectors, {key: matrix on the quotient}).
    """
    Bb = row_space_basis(B) if B else []
    comp = []
    cur = list(Bb)
    r = len(cur)
    for z in Z:
        if rank(cur + [z]) > r:
            cur.append(z)
            comp.append(z)
            r += 1
    q = len(comp)
    out = {}
    if q == 0:
        return comp, {k: [] for k in maps}
    basis = Bb + comp
    A = transpose(basis) if basis else []
    for key, M in maps.items():
        imgs = [[sum((M[i][j] * v[j] for j in range(dim)), ZERO) for i in range(dim)] for v in comp]
        sols = solve_many(A, imgs)
        if any(s is None for s in sols):
            raise LiftError("induced map does not preserve cycles")
        out[key] = [[sols[c][len(Bb) + t] for c in range(q)] for t in range(q)]
    return comp, out


def is_identity(M) -> bool:
    n = len(M)
    return all(M[i][j] == (ONE if i == j else ZERO) for i in range(n) for j in range(n))


@dataclass
class DerivedFiber:
    point: tuple
    stabilizer: list                 # element indices of H_x
    dims: list                       # dim Tor_i
    actions: list                    # actions[i][g] = matrix of g on Tor_i
    ranks: list                      # ranks of the resolution
    complete: bool
    homomorphism_ok: bool = True

    def trivial_in(self, i: int) -> bool:
        return all(is_identity(M) for M in self.actions[i].values())

    def nontrivial_degrees(self) -> list:
        return [i for i in range(len(self.dims)) if self.dims[i] and not self.trivial_in(i)]

    def is_trivial(self) -> bool:
        return not self.nontrivial_degrees()

    def is_zero(self) -> bool:
        return not any(self.dims)

    def characters(self) -> list:
        out = []
        for acts in self.actions:
            out.append({g: sum((M[i][i] for i in range(len(M))), ZERO) for g, M in acts.items()})
        return out

    def to_dict(self) -> dict:
        return {"point": [format_scalar(c) for c in self.point], "stabilizer_order": len(self.stabilizer),
                "tor_dims": self.dims, "nontrivial_degrees": self.nontrivial_degrees(),
                "trivial": self.is_trivial(), "resolution_ranks": self.ranks,
                "resolution_complete": self.complete}


_RES_CACHE: dict = {}


def module_resolution(EM: EquivariantModule, truncation: int | None = None) -> FreeResolution:
    key = (id(EM), truncation)
    if key not in _RES_CACHE:
        _RES_CACHE[key] = (EM, free_resolution(EM.presentation, max_steps=truncation))
    return _RES_CACHE[key][1]


def derived_fiber(EM: EquivariantModule, x: Sequence, truncation: int | None = None,
                  res: FreeResolution | None = None, check_homomorphism: bool = True) -> DerivedFiber:
    """Tor_i(M, k_x) with the action of the stabilizer H_x."""
    G = EM.group
    x = list(x)
    H = G.stabilizer(x)
    if res is None:
        res = module_resolution(EM, truncation)
    lifts = chain_lifts(EM, res, H)
    ranks = res.ranks()
    Ds = [_eval_matrix(res.maps[i], ranks[i], x) for i in range(len(res.maps))]
    dims, actions = [], []
    for i in range(len(ranks)):
        n = ranks[i]
        if i == 0:
            Z = [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]
        else:
            Z = nullspace(Ds[i - 1], n)
        if i < len(Ds):
            Dn = Ds[i]
            B = [[Dn[a][b] for a in range(n)] for b in range(len(Dn[0]))] if Dn and Dn[0] else []
        else:
            B = []
        maps = {}
        for g in H:
            phi = lifts[g][i]
            maps[g] = [[phi[b][a].evaluate(x) if phi[b][a] else ZERO for b in range(n)] for a in range(n)]
        comp, ind = induced_on_quotient(Z, B, maps, n)
        dims.append(len(comp))
        actions.append(ind)
    hom_ok = True
    if check_homomorphism:
        for i, acts in enumerate(actions):
            if not dims[i]:
                continue
            for g in H:
                for h in H:
                    gh = G.element_index(matmul(G.elements[g], G.elements[h]))
                    if tuple(map(tuple, matmul(acts[g], acts[h]))) != tuple(map(tuple, acts[gh])):
                        hom_ok = False
    return DerivedFiber(tuple(x), H, dims, actions, ranks, res.complete, hom_ok)


# --- finite-dimensional modules over the coinvariant algebra ---------------------------

@dataclass
class FDModule:
    """Finite-dimensional graded module: variable operators X_j and group matrices."""

    degrees: list
    X: list                 # X[j]: dim x dim matrix of multiplication by x_j
    act: dict               # group element index -> dim x dim matrix

    @property
    def dim(self) -> int:
        return len(self.degrees)


def _nf_coords(sub: Submodule, basis_index: dict, vec, dim: int) -> list:
    nf = sub.reduce(vec)
    out = [ZERO] * dim
    for c, p in enumerate(nf):
        for e, v in p.terms.items():
            out[basis_index[(c, e)]] += v
    return out


def fd_module(EM: EquivariantModule, extra: Sequence[Poly]) -> FDModule:
    """coker(relations + extra * generators) as a finite-dimensional module."""
    ring = EM.ring
    r = EM.rank
    rels = [list(c) for c in EM.relations]
    for j in range(r):
        for f in extra:
            v = [ring.zero() for _ in range(r)]
            v[j] = f
            rels.append(v)
    sub = Submodule(ring, r, rels, EM.gen_degrees)
    top = max(EM.gen_degrees) + sum(max(f.degree() - 1, 0) for f in extra) + 1
    basis = []
    for d in range(min(EM.gen_degrees), top + 1):
        basis += sub.quotient_basis(d)
    if sub.quotient_basis(top + 1):
        raise ValueError("module is not finite-dimensional over the given quotient")
    index = {b: t for t, b in enumerate(basis)}
    dim = len(basis)
    degrees = [sum(e) + EM.gen_degrees[c] for c, e in basis]

    def vec_of(b):
        c, e = b
        v = [ring.zero() for _ in range(r)]
        v[c] = ring.monomial(e)
        return v

    X = []
    for j in range(ring.nvars):
        cols = []
        for b in basis:
            v = [p * ring.gen(j) for p in vec_of(b)]
            cols.append(_nf_coords(sub, index, v, dim))
        X.append(transpose(cols) if cols else [])
    acts = {}
    for g in range(EM.group.order):
        cols = [_nf_coords(sub, index, EM.act_vec(g, vec_of(b)), dim) for b in basis]
        acts[g] = transpose(cols) if cols else []
    return FDModule(degrees, X, acts)


def _apply(M, v):
    return [sum((M[i][j] * v[j] for j in range(len(v))), ZERO) for i in range(len(M))]


def _restrict(basis: list, M, dim: int) -> list:
    """Matrix of M on the span of ``basis`` (assumed stable)."""
    if not basis:
        return []
    A = transpose(basis)
    imgs = [_apply(M, v) for v in basis]
    sols = solve_many(A, imgs)
    if any(s is None for s in sols):
        raise LiftError("subspace is not stable")
    return transpose(sols)


def _graded_pieces(degrees: Sequence[int]) -> dict:
    out = {}
    for t, d in enumerate(degrees):
        out.setdefault(d, []).append(t)
    return out


def equivariant_complement(V: FDModule, sub: list) -> list:
    """Homogeneous H-stable complement of the H-stable graded subspace ``sub``."""
    n = V.dim
    order = len(V.act)
    out = []
    sub_by_deg = {}
    for v in sub:
        d = next(V.degrees[t] for t in range(n) if v[t] != 0)
        sub_by_deg.setdefault(d, []).append(v)
    for d, idx in sorted(_graded_pieces(V.degrees).items()):
        S = row_space_basis(sub_by_deg.get(d, []))
        # a projection onto S along coordinate vectors, then averaged
        k = len(S)
        m = len(idx)
        Sl = [[v[t] for t in idx] for v in S]
        basis = list(Sl)
        extra = []
        for a in range(m):
            e = [ONE if b == a else ZERO for b in range(m)]
            if rank(basis + [e]) > len(basis):
                basis.append(e)
                extra.append(e)
        # P: coordinates w.r.t. basis, keep S part
        # projection matrix pi = B diag(1..1,0..0) B^{-1}
        Bm = transpose(basis)
        Bi = inverse(Bm)
        D = [[ONE if (i == j and i < k) else ZERO for j in range(m)] for i in range(m)]
        pi = matmul(matmul(Bm, D), Bi)
        avg = [[ZERO] * m for _ in range(m)]
        for g, Mg in V.act.items():
            Mgl = [[Mg[a][b] for b in idx] for a in idx]
            Mgi = inverse(Mgl)
            T = matmul(matmul(Mgl, pi), Mgi)
            avg = [[avg[a][b] + T[a][b] for b in range(m)] for a in range(m)]
        avg = [[c / order for c in row] for row in avg]
        comp = [[(ONE if a == b else ZERO) - avg[a][b] for b in range(m)] for a in range(m)]
        cols = row_space_basis(transpose(comp))
        for c in cols:
            v = [ZERO] * n
            for a, t in enumerate(idx):
                v[t] = c[a]
            out.append(v)
    return out


def _monomial_operator(V: FDModule, e) -> list:
    M = identity(V.dim)
    for j, k in enumerate(e):
        for _ in range(k):
            M = matmul(V.X[j], M)
    return M


@dataclass
class TorResult:
    dims: list
    degrees: list                   # degrees of Tor_i generators
    actions: list                   # actions[i][g]: matrix on Tor_i
    terminated: bool
    verdict: str                    # descends | fails | undetermined
    first_nontrivial: int | None
    invariants_ok: bool | None      # checks when the fiber is trivial

    def trivial_in(self, i: int) -> bool:
        return all(is_identity(M) for M in self.actions[i].values())

    def to_dict(self) -> dict:
        return {"tor_dims": self.dims, "tor_degrees": self.degrees, "terminated": self.terminated,
                "verdict": self.verdict, "first_nontrivial": self.first_nontrivial,
                "invariants_ok": self.invariants_ok}


def tor_coinvariants(EM: EquivariantModule, truncation: int = 3, heart_only: bool = False) -> TorResult:
    """Tor_i^C(k, M) with H-action, C = Sym / (positive-degree invariants).

    The module is replaced by M / (invariants) M, a finite-dimensional
    C-module.  A minimal equivariant resolution over C is built step by
    step: generator spaces are averaged complements of C_+ K.
    """
    G = EM.group
    inv = G.invariants()
    ring = EM.ring
    C = fd_module(_free_rank_one(G), inv)
    cbasis = []
    sub = Submodule(ring, 1, [[f] for f in inv], [0])
    top = sum(f.degree() - 1 for f in inv)
    for d in range(top + 1):
        cbasis += [e for _, e in sub.quotient_basis(d)]
    M = fd_module(EM, inv)
    cur = M
    dims, degs, actions = [], [], []
    terminated = False
    steps = 1 if heart_only else truncation + 1
    for i in range(steps):
        n = cur.dim
        if n == 0:
            terminated = True
            break
        rad = []
        for X in cur.X:
            for t in range(n):
                v = [X[a][t] for a in range(n)]
                if any(c != 0 for c in v):
                    rad.append(v)
        rad = row_space_basis(rad) if rad else []
        # keep the radical homogeneous: X maps homogeneous vectors to homogeneous vectors
        rad = _homogeneous_basis(cur, rad)
        U = equivariant_complement(cur, rad)
        udeg = [next(cur.degrees[t] for t in range(n) if u[t] != 0) for u in U]
        # U is H-stable, so the action on cur / rad is the restriction to U
        actU = {g: _restrict(U, M_, n) for g, M_ in cur.act.items()} if U else {g: [] for g in cur.act}
        dims.append(len(U))
        degs.append(sorted(udeg))
        actions.append(actU)
        if not U:
            terminated = True
            break
        if i == steps - 1:
            break
        cur = _kernel_step(C, cbasis, cur, U, udeg)
    if not terminated and dims and dims[-1] == 0:
        terminated = True
    first_bad = None
    for i in range(len(dims)):
        if dims[i] and not all(is_identity(Mx) for Mx in actions[i].values()):
            first_bad = i
            break
    if first_bad is not None:
        verdict = "fails"
    elif heart_only:
        verdict = "descends"
    elif terminated:
        verdict = "descends"
    else:
        verdict = "undetermined"
    inv_ok = None
    if first_bad is None and dims:
        higher_zero = all(d == 0 for d in dims[1:])
        inv_ok = higher_zero and _invariants_match(M, dims[0])
    return TorResult(dims, degs, actions, terminated, verdict, first_bad, inv_ok)


def _homogeneous_basis(V: FDModule, vecs: list) -> list:
    out = []
    for d, idx in _graded_pieces(V.degrees).items():
        parts = []
        for v in vecs:
            w = [v[t] if V.degrees[t] == d else ZERO for t in range(V.dim)]
            if any(c != 0 for c in w):
                parts.append(w)
        if parts:
            out += row_space_basis(parts)
    return out


def _invariants_match(M: FDModule, tor0_dim: int) -> bool:
    """M^H maps isomorphically onto (k tensor_C M)^H (all of it when the action is trivial)."""
    n = M.dim
    order = len(M.act)
    avg = [[ZERO] * n for _ in range(n)]
    for Mg in M.act.values():
        avg = [[avg[a][b] + Mg[a][b] for b in range(n)] for a in range(n)]
    avg = [[c / order for c in row] for row in avg]
    inv = row_space_basis(transpose(avg)) if n else []
    rad = []
    for X in M.X:
        for t in range(n):
            v = [X[a][t] for a in range(n)]
            if any(c != 0 for c in v):
                rad.append(v)
    rad = row_space_basis(rad) if rad else []
    return len(inv) == tor0_dim and rank(rad + inv) == len(rad) + len(inv)


def _free_rank_one(G: GroupAction) -> EquivariantModule:
    from ..exact.modules import ModulePresentation
    pres = ModulePresentation(G.ring, [0], [])
    return EquivariantModule(pres, G, [[[ONE]] for _ in G.generators], check=False)


def _kernel_step(C: FDModule, cbasis: list, V: FDModule, U: list, udeg: list) -> FDModule:
    """Kernel of C tensor U -> V as a finite-dimensional equivariant module."""
    n = V.dim
    ops = [_monomial_operator(V, e) for e in cbasis]
    # basis of P = C tensor U: pairs (a, b)
    pairs = [(a, b) for a in range(len(cbasis)) for b in range(len(U))]
    pdeg = [sum(cbasis[a]) + udeg[b] for a, b in pairs]
    eps_cols = [_apply(ops[a], U[b]) for a, b in pairs]
    eps = transpose(eps_cols) if eps_cols else []
    # kernel, degree by degree
    K = []
    for d, idx in sorted(_graded_pieces(pdeg).items()):
        sub = [[eps[i][t] for t in idx] for i in range(n)]
        for v in nullspace(sub, len(idx)):
            w = [ZERO] * len(pairs)
            for a, t in enumerate(idx):
                w[t] = v[a]
            K.append(w)
    if not K:
        return FDModule([], [[] for _ in C.X], {g: [] for g in V.act})
    kdeg = [next(pdeg[t] for t in range(len(pairs)) if v[t] != 0) for v in K]
    # operators on P
    nc = len(cbasis)
    nu = len(U)
    PX = []
    for X in C.X:
        M = [[ZERO] * len(pairs) for _ in pairs]
        for (a, b), col in zip(pairs, range(len(pairs))):
            for a2 in range(nc):
                c = X[a2][a]
                if c != 0:
                    M[a2 * nu + b][col] += c
        PX.append(M)
    Uact = {g: _restrict(U, Mg, n) for g, Mg in V.act.items()}
    Pact = {}
    for g, Cg in C.act.items():
        Ug = Uact[g]
        M = [[ZERO] * len(pairs) for _ in pairs]
        for col, (a, b) in enumerate(pairs):
            for a2 in range(nc):
                ca = Cg[a2][a]
                if ca == 0:
                    continue
                for b2 in range(nu):
                    cb = Ug[b2][b]
                    if cb != 0:
                        M[a2 * nu + b2][col] += ca * cb
        Pact[g] = M
    KX = [_restrict(K, M, len(pairs)) for M in PX]
    Kact = {g: _restrict(K, M, len(pairs)) for g, M in Pact.items()}
    return FDModule(kdeg, KX, Kact)
