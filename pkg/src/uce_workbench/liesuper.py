"""Lie superalgebras by structure constants and their central extensions.

Conventions: the super Jacobi identity is taken in the cyclic form
(-1)^{|x||z|}[[x,y],z] + (-1)^{|x||y|}[[y,z],x] + (-1)^{|y||z|}[[z,x],y] = 0,
even squares [x,x] vanish, and odd cubes satisfy [x,[x,x]] = 0.

The 2- and 3-chains use x ^ y = -(-1)^{|x||y|} y ^ x with e ^ e = 0 for
even basis vectors while odd self-wedges e ^ e (and odd e ^ e ^ e) are
genuine basis symbols; this fixed model defines second homology and the
universal central extension uniformly over all coefficient domains,
including those where 2 or 3 are not invertible.

A generator may carry an annihilator modulus (0 = free), so totals with
torsion, e.g. universal central extensions over Z whose kernel has both
free and finite parts, are first-class values here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .domains import CoefficientDomain
from .exactlin import (
    ExactMatrix,
    GradedInvariants,
    GradedPresentation,
    IntEchelon,
    kernel_basis,
    make_echelon,
    present_quotient,
    quotient_invariants,
)


class LieSuperAlgebraError(ValueError):
    pass


class NotPerfectError(LieSuperAlgebraError):
    pass


@dataclass
class LieSuperAlgebra:
    """Structure constants [e_i, e_j] as sparse vectors, indexed by ordered pairs.

    brackets holds every ordered pair with a nonzero bracket, including
    (i, i) for odd generators.  moduli, if present, gives per-generator
    annihilators over Z (0 = free).
    """

    domain: CoefficientDomain
    names: list[str]
    parity: tuple[int, ...]
    brackets: dict
    moduli: tuple[int, ...] | None = None
    label: str = ""

    @property
    def rank(self) -> int:
        return len(self.names)

    def bracket_basis(self, i: int, j: int) -> dict:
        return self.brackets.get((i, j), {})

    def effective_moduli(self) -> list[int] | None:
        """Explicit annihilator array; Z/m domains are m-torsion throughout."""
        if self.moduli is not None:
            return list(self.moduli)
        if self.domain.kind == "Zmod":
            return [self.domain.modulus] * self.rank
        return None

    def normalize(self, vec: dict) -> dict:
        """Canonicalise a sparse element w.r.t. coordinate moduli."""
        mods = self.moduli
        dom = self.domain
        out = {}
        for k, v in vec.items():
            if mods is not None and mods[k]:
                v = int(v) % mods[k]
            else:
                v = dom.reduce(v)
            if not dom.is_zero(v):
                out[k] = v
        return out

    def bracket(self, x: dict, y: dict) -> dict:
        dom = self.domain
        acc: dict = {}
        for i, xi in x.items():
            if dom.is_zero(xi):
                continue
            for j, yj in y.items():
                if dom.is_zero(yj):
                    continue
                bv = self.brackets.get((i, j))
                if not bv:
                    continue
                c = dom.mul(xi, yj)
                for k, v in bv.items():
                    nv = dom.add(acc.get(k, dom.zero), dom.mul(c, v))
                    if dom.is_zero(nv):
                        acc.pop(k, None)
                    else:
                        acc[k] = nv
        return self.normalize(acc)

    def is_perfect(self) -> bool:
        ech = make_echelon(self.domain)
        mods = self.effective_moduli()
        if mods is not None and not self.domain.is_field:
            for k, mu in enumerate(mods):
                if mu:
                    ech.add_row({k: mu})
        for bv in self.brackets.values():
            if bv:
                ech.add_row(dict(bv))
        one = self.domain.one
        return all(ech.contains({k: one}) for k in range(self.rank))


def _sign_swap(px: int, py: int) -> int:
    """Sign for y ^ x -> x ^ y and [y,x] -> [x,y]: -(-1)^{|x||y|}."""
    return 1 if (px and py) else -1


def validate_lie_superalgebra(L: LieSuperAlgebra) -> None:
    dom = L.domain
    r = L.rank
    mods = L.effective_moduli()

    def norm(vec: dict) -> dict:
        out = {}
        for k, v in vec.items():
            if mods is not None and mods[k]:
                v = int(v) % mods[k]
            if not dom.is_zero(v):
                out[k] = v
        return out

    for (i, j), bv in L.brackets.items():
        p = (L.parity[i] + L.parity[j]) % 2
        for k, v in bv.items():
            if not dom.is_zero(v) and L.parity[k] != p:
                raise LieSuperAlgebraError(
                    f"bracket [{L.names[i]},{L.names[j]}] is not parity homogeneous")
    for i in range(r):
        for j in range(r):
            bij = L.bracket_basis(i, j)
            bji = L.bracket_basis(j, i)
            if i == j:
                # even squares vanish; odd self-brackets are unconstrained here
                if L.parity[i] == 0 and norm(dict(bij)):
                    raise LieSuperAlgebraError(
                        f"[x,x] must vanish for even {L.names[i]}")
                continue
            # require c_ji = s * c_ij with s = -(-1)^{|i||j|}
            s = _sign_swap(L.parity[i], L.parity[j])
            acc = dict(bji)
            for k, v in bij.items():
                acc[k] = dom.add(acc.get(k, dom.zero), dom.mul(dom.reduce(-s), v))
            if norm(acc):
                raise LieSuperAlgebraError(
                    f"graded antisymmetry fails on ({L.names[i]}, {L.names[j]})")
    # structure constants must respect the moduli
    if mods is not None:
        for (i, j), bv in L.brackets.items():
            g = gcd(mods[i], mods[j])
            for k, v in bv.items():
                mu = mods[k]
                val = g * int(v)
                if (mu and val % mu) or (not mu and val):
                    raise LieSuperAlgebraError(
                        f"bracket [{L.names[i]},{L.names[j]}] breaks the moduli")
    # super Jacobi on all basis triples, plus odd cubes
    basis = [{i: dom.one} for i in range(r)]
    for i in range(r):
        for j in range(r):
            bij = L.bracket_basis(i, j)
            for k in range(r):
                t1 = L.bracket(bij, basis[k])
                t2 = L.bracket(L.bracket_basis(j, k), basis[i])
                t3 = L.bracket(L.bracket_basis(k, i), basis[j])
                s1 = -1 if (L.parity[i] and L.parity[k]) else 1
                s2 = -1 if (L.parity[i] and L.parity[j]) else 1
                s3 = -1 if (L.parity[j] and L.parity[k]) else 1
                acc: dict = {}
                for s, t in ((s1, t1), (s2, t2), (s3, t3)):
                    c = dom.reduce(s)
                    for a, v in t.items():
                        acc[a] = dom.add(acc.get(a, dom.zero), dom.mul(c, v))
                if norm(acc):
                    raise LieSuperAlgebraError(
                        f"super Jacobi fails on ({L.names[i]}, {L.names[j]}, {L.names[k]})")
    for i in range(r):
        if L.parity[i]:
            if norm(L.bracket(basis[i], L.bracket_basis(i, i))):
                raise LieSuperAlgebraError(f"[x,[x,x]] fails for odd {L.names[i]}")


# ---------------------------------------------------------------------------
# chains


class ChainComplex:
    """The 3 -> 2 -> 1 tail of the Chevalley-Eilenberg complex of L.

    Pair symbols are (p, q) with p <= q, where p == q requires odd parity;
    triples (p, q, r) with p <= q <= r allow repeats only at odd slots.
    d2(p, q) = [e_p, e_q]; d3 is the graded boundary fixed by the module
    docstring.  Checks d2 . d3 = 0 on construction.
    """

    def __init__(self, L: LieSuperAlgebra):
        self.L = L
        dom = L.domain
        r = L.rank
        par = L.parity
        self.pairs: list[tuple[int, int]] = []
        for p in range(r):
            if par[p]:
                self.pairs.append((p, p))
            for q in range(p + 1, r):
                self.pairs.append((p, q))
        self.pairs.sort()
        self.pair_index = {pq: n for n, pq in enumerate(self.pairs)}
        self.pair_parity = [(par[p] + par[q]) % 2 for (p, q) in self.pairs]
        mods = L.effective_moduli()
        if L.moduli is not None:
            self.pair_moduli: list[int] | None = [gcd(mods[p], mods[q]) for (p, q) in self.pairs]
        else:
            self.pair_moduli = None
        self.d2_cols = [dict(L.bracket_basis(p, q)) for (p, q) in self.pairs]

        self.triples: list[tuple[int, int, int]] = []
        for p in range(r):
            for q in range(p, r):
                if q == p and not par[p]:
                    continue
                for s in range(q, r):
                    if s == q and not par[q]:
                        continue
                    self.triples.append((p, q, s))
        self.d3_cols = [self._d3_column(t) for t in self.triples]
        self._check_composite()

    def wedge_coord(self, a: int, b: int):
        """Canonical (pair index, sign) of e_a ^ e_b, or None if zero."""
        par = self.L.parity
        if a == b:
            if not par[a]:
                return None
            return self.pair_index[(a, a)], 1
        if a < b:
            return self.pair_index[(a, b)], 1
        return self.pair_index[(b, a)], _sign_swap(par[a], par[b])

    def wedge(self, x: dict, y: dict) -> dict:
        """x ^ y in pair coordinates, bilinear with the graded swap sign."""
        dom = self.L.domain
        acc: dict = {}
        for a, xa in x.items():
            for b, yb in y.items():
                wc = self.wedge_coord(a, b)
                if wc is None:
                    continue
                n, s = wc
                c = dom.mul(xa, yb)
                if s < 0:
                    c = dom.neg(c)
                nv = dom.add(acc.get(n, dom.zero), c)
                if dom.is_zero(nv):
                    acc.pop(n, None)
                else:
                    acc[n] = nv
        return acc

    def _wedge_into(self, acc: dict, vec: dict, outer: int, coeff) -> None:
        dom = self.L.domain
        for s, v in vec.items():
            wc = self.wedge_coord(s, outer)
            if wc is None:
                continue
            n, sg = wc
            c = dom.mul(coeff, v)
            if sg < 0:
                c = dom.neg(c)
            nv = dom.add(acc.get(n, dom.zero), c)
            if dom.is_zero(nv):
                acc.pop(n, None)
            else:
                acc[n] = nv

    def _d3_column(self, t: tuple[int, int, int]) -> dict:
        # d3(x^y^z) = [x,y]^z - (-1)^{|y||z|}[x,z]^y + (-1)^{|x|(|y|+|z|)}[y,z]^x
        p, q, s = t
        L = self.L
        dom = L.domain
        par = L.parity
        acc: dict = {}
        one = dom.one
        self._wedge_into(acc, L.bracket_basis(p, q), s, one)
        c2 = dom.neg(one) if not (par[q] and par[s]) else one
        self._wedge_into(acc, L.bracket_basis(p, s), q, c2)
        c3 = dom.neg(one) if (par[p] and (par[q] + par[s]) % 2) else one
        self._wedge_into(acc, L.bracket_basis(q, s), p, c3)
        return acc

    def _check_composite(self) -> None:
        dom = self.L.domain
        mods = self.L.effective_moduli()
        for t, col in zip(self.triples, self.d3_cols):
            acc: dict = {}
            for n, c in col.items():
                for k, v in self.d2_cols[n].items():
                    nv = dom.add(acc.get(k, dom.zero), dom.mul(c, v))
                    if dom.is_zero(nv):
                        acc.pop(k, None)
                    else:
                        acc[k] = nv
            if mods is not None:
                acc = {k: v for k, v in ((k, int(v) % mods[k] if mods[k] else v)
                                         for k, v in acc.items()) if v}
            if acc:
                raise LieSuperAlgebraError(f"d2 . d3 != 0 at triple {t}")

    def pair_indices_of_parity(self, par: int) -> list[int]:
        return [n for n, p in enumerate(self.pair_parity) if p == par]

    def triple_parity(self, t: tuple[int, int, int]) -> int:
        par = self.L.parity
        return (par[t[0]] + par[t[1]] + par[t[2]]) % 2


# ---------------------------------------------------------------------------
# second homology


def _parity_kernel(chain: ChainComplex, par: int) -> list[dict]:
    """Kernel generators of d2 on the given parity block, in global pair coords."""
    L = chain.L
    dom = L.domain
    idxs = chain.pair_indices_of_parity(par)
    cols = [chain.d2_cols[n] for n in idxs]
    if dom.is_field or (dom.kind == "Zmod" and L.moduli is None):
        mat = ExactMatrix.from_columns(cols, L.rank, dom)
        ker = kernel_basis(mat)
        return [{idxs[i]: v for i, v in vec.items()} for vec in ker]
    # integer lift: Z, or Z/m with per-coordinate annihilators finer than m.
    # Solutions of d2 x = 0 modulo the target moduli form the x-part of the
    # integer kernel of [d2 | mu_k e_k]; for Z/m that lattice contains m e_i
    # already, so reducing representatives mod m loses nothing.
    mods = L.effective_moduli()
    aug_cols = [{k: int(v) for k, v in c.items()} for c in cols]
    if mods is not None:
        for k, mu in enumerate(mods):
            if mu:
                aug_cols.append({k: mu})
    mat = ExactMatrix.from_columns(aug_cols, L.rank, CoefficientDomain.integers())
    m = dom.modulus if dom.kind == "Zmod" else 0
    out = []
    seen = set()
    for vec in kernel_basis(mat):
        x = {}
        for i, v in vec.items():
            if i < len(idxs):
                if m:
                    v = int(v) % m
                if v:
                    x[idxs[i]] = v
        key = tuple(sorted(x.items()))
        if x and key not in seen:
            seen.add(key)
            out.append(x)
    return out


def ce_h2(L: LieSuperAlgebra) -> GradedInvariants:
    """H2 of L with coefficients in the base ring, graded by parity."""
    from .exactlin import ModuleInvariants, int_snf, matrix_rank

    chain = ChainComplex(L)
    dom = L.domain
    if dom.is_field or (dom.kind == "Z" and L.moduli is None):
        res = {}
        for par in (0, 1):
            pair_idx = chain.pair_indices_of_parity(par)
            d2cols = [chain.d2_cols[n] for n in pair_idx]
            local = {n: i for i, n in enumerate(pair_idx)}
            d3cols = []
            for t, col in zip(chain.triples, chain.d3_cols):
                if chain.triple_parity(t) == par and col:
                    d3cols.append({local[n]: v for n, v in col.items()})
            if dom.is_field:
                rank2 = matrix_rank(ExactMatrix.from_columns(d2cols, L.rank, dom))
                rank3 = matrix_rank(ExactMatrix.from_columns(d3cols, len(pair_idx), dom))
                res[par] = ModuleInvariants(free_rank=len(pair_idx) - rank2 - rank3)
            else:
                ech = IntEchelon()
                for c in d2cols:
                    ech.add_row(dict(c))
                rank2 = ech.rank
                ds = int_snf([{k: int(v) for k, v in c.items()} for c in d3cols],
                             len(d3cols), len(pair_idx))
                res[par] = ModuleInvariants(
                    free_rank=len(pair_idx) - rank2 - len(ds),
                    torsion=tuple(d for d in ds if d > 1))
        return GradedInvariants(even=res[0], odd=res[1])
    # general path: explicit cycles modulo boundaries, moduli aware
    cycles = _parity_kernel(chain, 0) + _parity_kernel(chain, 1)
    rels = [c for c in chain.d3_cols if c]
    return quotient_invariants(len(chain.pairs), cycles, rels, chain.pair_parity,
                               dom, ambient_moduli=chain.pair_moduli)


# ---------------------------------------------------------------------------
# central extensions


@dataclass
class CentralExtension:
    """A central extension total -> base with explicit projection and kernel."""

    total: LieSuperAlgebra
    base: LieSuperAlgebra
    projection_cols: list[dict]
    kernel_generators: list[dict] = field(repr=False)
    chain: ChainComplex | None = field(default=None, repr=False)
    presentation: GradedPresentation | None = field(default=None, repr=False)

    def project(self, vec: dict) -> dict:
        dom = self.base.domain
        acc: dict = {}
        for t, c in vec.items():
            for k, v in self.projection_cols[t].items():
                nv = dom.add(acc.get(k, dom.zero), dom.mul(c, v))
                if dom.is_zero(nv):
                    acc.pop(k, None)
                else:
                    acc[k] = nv
        return self.base.normalize(acc)

    def kernel_invariants(self) -> GradedInvariants:
        return quotient_invariants(
            self.total.rank, self.kernel_generators, [],
            list(self.total.parity), self.total.domain,
            ambient_moduli=self.total.effective_moduli()
            if self.total.moduli is not None or self.total.domain.kind == "Zmod" else None)

    def class_of_wedge(self, x: dict, y: dict) -> dict:
        """Class in the total of a wedge of two base elements (uce-backed only)."""
        if self.chain is None or self.presentation is None:
            raise LieSuperAlgebraError("no chain presentation attached")
        return self.presentation.reduce(self.chain.wedge(x, y))


def _kernel_of_projection(total: LieSuperAlgebra, base: LieSuperAlgebra,
                          cols: list[dict]) -> list[dict]:
    dom = base.domain
    t = len(cols)
    if dom.is_field or (dom.kind == "Zmod" and base.moduli is None):
        mat = ExactMatrix.from_columns(cols, base.rank, dom)
        return [v for v in kernel_basis(mat) if v]
    aug = [{k: int(v) for k, v in c.items()} for c in cols]
    base_mods = base.effective_moduli()
    if base_mods is not None:
        for k, mu in enumerate(base_mods):
            if mu:
                aug.append({k: mu})
    mat = ExactMatrix.from_columns(aug, base.rank, CoefficientDomain.integers())
    m = dom.modulus if dom.kind == "Zmod" else 0
    out = []
    seen = set()
    for vec in kernel_basis(mat):
        x = {}
        for i, v in vec.items():
            if i < t:
                if m:
                    v = int(v) % m
                if v:
                    x[i] = v
        key = tuple(sorted(x.items()))
        if x and key not in seen:
            seen.add(key)
            out.append(x)
    return out


def total_invariants(L: LieSuperAlgebra) -> GradedInvariants:
    """Graded invariants of the underlying module of L."""
    dom = L.domain
    return quotient_invariants(L.rank, [{t: dom.one} for t in range(L.rank)],
                               [], list(L.parity), dom,
                               ambient_moduli=L.effective_moduli())


def _extension_checks(ext: CentralExtension) -> None:
    """Projection is a bracket map, kernel is central, total is perfect."""
    total, base = ext.total, ext.base
    dom = total.domain
    for (p, q), bv in total.brackets.items():
        lhs = ext.project(dict(bv))
        rhs = base.bracket(ext.projection_cols[p], ext.projection_cols[q])
        if lhs != rhs:
            raise LieSuperAlgebraError(f"projection fails bracket at ({p}, {q})")
    basis = [{i: dom.one} for i in range(total.rank)]
    for kgen in ext.kernel_generators:
        for q in range(total.rank):
            if total.bracket(kgen, basis[q]):
                raise LieSuperAlgebraError("kernel is not central")
    if not total.is_perfect():
        raise LieSuperAlgebraError("central extension total is not perfect")


def _central_quotient(L: LieSuperAlgebra, chain: ChainComplex, relations: list,
                      label: str, validate: bool = True) -> CentralExtension:
    """Present pairs-modulo-relations as a central extension of L.

    The relation columns must all be 2-cycles and must include every
    3-boundary; then the wedge bracket descends to classes and d2 of any
    representative gives a well defined projection.
    """
    dom = L.domain
    pres = present_quotient(len(chain.pairs), relations,
                            chain.pair_parity, dom, ambient_moduli=chain.pair_moduli)
    gens = pres.generators
    t = len(gens)
    proj_cols = []
    for g in gens:
        acc: dict = {}
        for n, c in g.rep.items():
            for k, v in chain.d2_cols[n].items():
                nv = dom.add(acc.get(k, dom.zero), dom.mul(dom.reduce(c), v))
                if dom.is_zero(nv):
                    acc.pop(k, None)
                else:
                    acc[k] = nv
        proj_cols.append(L.normalize(acc))
    moduli: tuple[int, ...] | None = None
    if not dom.is_field:
        if dom.kind == "Zmod":
            # a class can have annihilator strictly dividing m; keep them all
            moduli = tuple(g.modulus for g in gens)
        elif any(g.modulus for g in gens):
            moduli = tuple(g.modulus for g in gens)
    parities = tuple(g.parity for g in gens)
    names = [f"u{n}" for n in range(t)]
    brackets: dict = {}

    def put(p, q, vec):
        vec = {k: v for k, v in vec.items() if not dom.is_zero(v)}
        if vec:
            brackets[(p, q)] = vec

    for p in range(t):
        for q in range(p, t):
            if p == q and not parities[p]:
                continue
            w = chain.wedge(proj_cols[p], proj_cols[q])
            c = pres.reduce(w)
            put(p, q, c)
            if p != q:
                s = _sign_swap(parities[p], parities[q])
                flipped = {}
                for k, v in c.items():
                    nv = dom.mul(dom.reduce(s), v)
                    if moduli and moduli[k]:
                        nv = int(nv) % moduli[k]
                    flipped[k] = nv
                put(q, p, flipped)
    total = LieSuperAlgebra(domain=dom, names=names, parity=parities, brackets=brackets,
                            moduli=moduli, label=label)
    if validate:
        validate_lie_superalgebra(total)
    kgens = _kernel_of_projection(total, L, proj_cols)
    ext = CentralExtension(total=total, base=L, projection_cols=proj_cols,
                           kernel_generators=kgens, chain=chain, presentation=pres)
    if validate:
        _extension_checks(ext)
    return ext


def uce(L: LieSuperAlgebra, validate: bool = True) -> CentralExtension:
    """Universal central extension of a perfect L: pairs modulo the 3-boundaries.

    The total's bracket of two classes is the class of the wedge of their
    images in L; the projection sends a class to d2 of any representative.
    """
    if not L.is_perfect():
        raise NotPerfectError("universal central extension requires a perfect algebra")
    chain = ChainComplex(L)
    return _central_quotient(L, chain, [c for c in chain.d3_cols if c],
                             f"uce({L.label or 'L'})", validate)


def extension_from_cocycle(L: LieSuperAlgebra, psi_values: dict, w_parities,
                           w_moduli=None, w_names=None,
                           validate: bool = True) -> CentralExtension:
    """L + W with bracket [(x,_), (y,_)] = ([x,y], psi(x,y)), W central.

    psi_values maps ordered basis pairs (p, q) of L to sparse W vectors;
    both orders must be supplied where nonzero.  The total is validated as
    a Lie superalgebra, which enforces the 2-cocycle conditions.
    """
    dom = L.domain
    nl = L.rank
    nw = len(w_parities)
    names = list(L.names) + list(w_names or (f"w{i}" for i in range(nw)))
    parities = tuple(L.parity) + tuple(int(p) % 2 for p in w_parities)
    base_mods = [0] * nl if L.moduli is None else list(L.moduli)
    w_mods = [0] * nw if w_moduli is None else [int(m) for m in w_moduli]
    moduli: tuple[int, ...] | None = None
    if any(base_mods) or any(w_mods):
        moduli = tuple(base_mods + w_mods)
    brackets: dict = {}
    for p in range(nl):
        for q in range(nl):
            if p == q and not L.parity[p]:
                continue
            vec = dict(L.bracket_basis(p, q))
            for wk, wv in psi_values.get((p, q), {}).items():
                if not dom.is_zero(wv):
                    vec[nl + wk] = wv
            if vec:
                brackets[(p, q)] = vec
    total = LieSuperAlgebra(domain=dom, names=names, parity=parities, brackets=brackets,
                            moduli=moduli, label=f"cocycle-ext({L.label or 'L'})")
    if validate:
        validate_lie_superalgebra(total)
    proj_cols = [({p: dom.one} if p < nl else {}) for p in range(nl + nw)]
    ext = CentralExtension(total=total, base=L, projection_cols=proj_cols,
                           kernel_generators=_kernel_of_projection(total, L, proj_cols))
    if validate:
        # centrality of W and the bracket property; perfectness is not
        # required of a plain cocycle extension, so check those two only
        for (p, q), bv in total.brackets.items():
            lhs = ext.project(dict(bv))
            rhs = L.bracket(proj_cols[p], proj_cols[q])
            if lhs != rhs:
                raise LieSuperAlgebraError(f"projection fails bracket at ({p}, {q})")
        basis = [{i: dom.one} for i in range(total.rank)]
        for w in range(nl, nl + nw):
            for q in range(total.rank):
                if total.bracket({w: dom.one}, basis[q]):
                    raise LieSuperAlgebraError("cocycle extension kernel is not central")
    return ext
