"""Steinberg superalgebras st(m,n,A) and their relation and identity checkers.

The Steinberg algebra is presented by generators F_ij(a) (i != j, a in A)
subject to linearity, the composition rule [F_ij(a), F_jk(b)] = F_ik(ab)
for distinct i, j, k, and commutation [F_ij(a), F_kl(b)] = 0 whenever
j != k and i != l.  Rather than working with the abstract presentation we
realise st concretely: it is the quotient of the pair space of sl(m,n,A)
by the 3-boundaries together with the wedge columns of every commuting
matrix-unit pair of the third kind.  The generator F_ij(a) becomes the
class of H ^ E_ij(a) for a diagonal H acting as the identity on the
(i,j) slot; brackets of classes never see the central ambiguity of the
lift, which is what makes the checks below meaningful.
"""

from dataclasses import dataclass, field

from .exactlin import (GradedInvariants, direct_sum_invariants, make_echelon,
                       quotient_invariants)
from .liesuper import (CentralExtension, ChainComplex, LieSuperAlgebraError,
                       _central_quotient, _parity_kernel)
from .matgl import MatrixShapeError, SlSuper, build_sl, row_parity
from .superalg import SuperAlgebra


def _neg_pow(e: int) -> int:
    return -1 if e % 2 else 1


def _offdiag_positions(size: int) -> list:
    return [(i, j) for i in range(1, size + 1) for j in range(1, size + 1) if i != j]


def _commuting_position_pairs(size: int) -> list:
    """Unordered pairs of off-diagonal slots (i,j), (k,l) with j != k, i != l.

    These are exactly the slots whose matrix units multiply to zero both
    ways: same row, same column, same slot, or four distinct indices.
    """
    pos = _offdiag_positions(size)
    out = []
    for x in range(len(pos)):
        for y in range(x, len(pos)):
            (i, j), (k, l) = pos[x], pos[y]
            if j != k and i != l:
                out.append((pos[x], pos[y]))
    return out


def _zw_columns(sl: SlSuper, chain: ChainComplex) -> list:
    """Wedge columns of commuting matrix-unit pairs, the relations that cut
    the universal central extension of sl down to st."""
    dom = sl.lie.domain
    rA = sl.algebra.rank
    cols = []
    for (ij, kl) in _commuting_position_pairs(sl.m + sl.n):
        for a in range(rA):
            for b in range(rA):
                p = sl.e_index[(ij[0], ij[1], a)]
                q = sl.e_index[(kl[0], kl[1], b)]
                if ij == kl and b < a:
                    continue
                if sl.lie.bracket_basis(p, q):
                    raise LieSuperAlgebraError(
                        f"slots {ij}, {kl} do not commute in sl")
                col = chain.wedge({p: dom.one}, {q: dom.one})
                if col:
                    cols.append(col)
    return cols


@dataclass
class SteinbergAlgebra:
    """st(m,n,A) with its projection onto sl(m,n,A)."""

    m: int
    n: int
    algebra: SuperAlgebra
    sl: SlSuper
    ext: CentralExtension
    relations: str = "steinberg"
    _f_cache: dict = field(default_factory=dict, repr=False)

    @property
    def lie(self):
        return self.ext.total

    @property
    def size(self) -> int:
        return self.m + self.n

    def _aux_index(self, i: int, j: int) -> int:
        for k in range(1, self.size + 1):
            if k != i and k != j:
                return k
        raise MatrixShapeError("no auxiliary index available")

    def _slot_vec(self, i: int, j: int, avec) -> dict:
        """sl coordinates of the matrix E_ij(a) for a dense coefficient a."""
        dom = self.sl.lie.domain
        out = {}
        for t, v in enumerate(avec):
            if not dom.is_zero(v):
                out[self.sl.e_index[(i, j, t)]] = v
        return out

    def f_basis(self, i: int, j: int, a: int) -> dict:
        """Class of the canonical lift of E_ij(a), a a basis index."""
        key = (i, j, a)
        if key not in self._f_cache:
            k = self._aux_index(i, j)
            u = self.algebra.unit
            h = self.sl.lie.bracket_basis(self.sl.e_index[(i, k, u)],
                                          self.sl.e_index[(k, i, u)])
            evec = {self.sl.e_index[(i, j, a)]: self.sl.lie.domain.one}
            self._f_cache[key] = self.ext.class_of_wedge(h, evec)
        return dict(self._f_cache[key])

    def f_raw(self, i: int, j: int, a: int, k: int | None = None) -> dict:
        """Class of E_ik(a) ^ E_kj(1); equals f_basis when the relations hold."""
        if k is None:
            k = self._aux_index(i, j)
        dom = self.sl.lie.domain
        u = self.algebra.unit
        return self.ext.class_of_wedge({self.sl.e_index[(i, k, a)]: dom.one},
                                       {self.sl.e_index[(k, j, u)]: dom.one})

    def f_of(self, i: int, j: int, avec) -> dict:
        dom = self.lie.domain
        acc: dict = {}
        for t, c in enumerate(avec):
            if dom.is_zero(c):
                continue
            for g, v in self.f_basis(i, j, t).items():
                acc[g] = dom.add(acc.get(g, dom.zero), dom.mul(c, v))
        return self.lie.normalize(acc)

    def h_pair(self, i: int, j: int, a: int, b: int) -> dict:
        """H_ij(a,b) = [F_ij(a), F_ji(b)] for basis indices a, b."""
        return self.lie.bracket(self.f_basis(i, j, a), self.f_basis(j, i, b))

    def small_h(self, a: int, b: int, j: int = 2) -> dict:
        """h(a,b) = H_1j(a,b) - (-1)^{|a||b|} H_1j(1, ba); independent of j >= 2."""
        A = self.algebra
        first = self.h_pair(1, j, a, b)
        ba = A.mul(A.basis_vec(b), A.basis_vec(a))
        second = self.lie.bracket(self.f_basis(1, j, A.unit), self.f_of(j, 1, ba))
        s = -_neg_pow(A.parity[a] * A.parity[b])
        return _add(self.lie, first, _scale(self.lie, s, second))

    def phi(self, vec: dict) -> dict:
        return self.ext.project(vec)

    def kernel_invariants(self) -> GradedInvariants:
        return self.ext.kernel_invariants()


def _add(lie, x: dict, y: dict) -> dict:
    dom = lie.domain
    acc = dict(x)
    for k, v in y.items():
        acc[k] = dom.add(acc.get(k, dom.zero), v)
    return lie.normalize(acc)

def _scale(lie, c, x: dict) -> dict:
    dom = lie.domain
    cc = dom.reduce(c)
    return lie.normalize({k: dom.mul(cc, v) for k, v in x.items()})


def build_st(m: int, n: int, A: SuperAlgebra, validate: bool = True,
             relations: str = "steinberg") -> SteinbergAlgebra:
    """Construct st(m,n,A) over the coefficient superalgebra A.

    relations="boundaries-only" skips the commuting-pair columns and hands
    back the universal central extension of sl instead; at small rank that
    object genuinely violates the commutation relation, which the checkers
    below will report.
    """
    if m + n < 3:
        raise MatrixShapeError("Steinberg construction needs at least three rows")
    sl = build_sl(m, n, A)
    chain = ChainComplex(sl.lie)
    rels = [c for c in chain.d3_cols if c]
    if relations == "steinberg":
        rels = rels + _zw_columns(sl, chain)
    elif relations != "boundaries-only":
        raise ValueError(f"unknown relation set {relations!r}")
    ext = _central_quotient(sl.lie, chain, rels,
                            f"st({m},{n},{A.label or 'A'})", validate)
    return SteinbergAlgebra(m=m, n=n, algebra=A, sl=sl, ext=ext, relations=relations)


# ---------------------------------------------------------------------------
# relation and identity verification


def verify_presentation(st: SteinbergAlgebra) -> dict:
    """Check the defining relations on the canonical generator classes.

    Returns named boolean verdicts.  Equality is on canonical coordinates,
    so a verdict never depends on a choice of central lift.
    """
    A, lie = st.algebra, st.lie
    dom = lie.domain
    rA = A.rank
    size = st.size
    res = {}

    ok = True
    for (i, j) in _offdiag_positions(size):
        for a in range(rA):
            for k in range(1, size + 1):
                if k == i or k == j:
                    continue
                if st.f_raw(i, j, a, k) != st.f_basis(i, j, a):
                    ok = False
    res["lift-well-defined"] = ok

    ok = True
    for (i, j) in _offdiag_positions(size):
        for a in range(rA):
            for b in range(a, rA):
                combined = [dom.zero] * rA
                combined[a] = dom.add(combined[a], dom.one)
                combined[b] = dom.add(combined[b], dom.one)
                lhs = st.f_of(i, j, combined)
                rhs = _add(lie, st.f_basis(i, j, a), st.f_basis(i, j, b))
                if lhs != rhs:
                    ok = False
    res["linearity"] = ok

    ok = True
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            for k in range(1, size + 1):
                if len({i, j, k}) < 3:
                    continue
                for a in range(rA):
                    for b in range(rA):
                        got = lie.bracket(st.f_basis(i, j, a), st.f_basis(j, k, b))
                        ab = A.mul(A.basis_vec(a), A.basis_vec(b))
                        if got != st.f_of(i, k, ab):
                            ok = False
    res["composition"] = ok

    ok = True
    pos = _offdiag_positions(size)
    for (i, j) in pos:
        for (k, l) in pos:
            if j == k or i == l:
                continue
            for a in range(rA):
                for b in range(rA):
                    if lie.bracket(st.f_basis(i, j, a), st.f_basis(k, l, b)):
                        ok = False
    res["disjoint-commutation"] = ok
    return res


def verify_identities(st: SteinbergAlgebra) -> dict:
    """Bracket identities of the H and h elements, checked on all basis data."""
    A, lie = st.algebra, st.lie
    m = st.m
    size = st.size
    rA = A.rank
    rp = [row_parity(m, i) for i in range(size + 1)]
    ap = A.parity
    res = {}

    ok = True
    for (i, j) in _offdiag_positions(size):
        for a in range(rA):
            for b in range(rA):
                e = (rp[i] + rp[j] + ap[a]) * (rp[i] + rp[j] + ap[b])
                lhs = st.h_pair(i, j, a, b)
                rhs = _scale(lie, -_neg_pow(e), st.h_pair(j, i, b, a))
                if lhs != rhs:
                    ok = False
    res["H-antisymmetry"] = ok

    row_ok = col_ok = opp_ok = True
    for (i, j) in _offdiag_positions(size):
        for k in range(1, size + 1):
            if k == i or k == j:
                continue
            for a in range(rA):
                for b in range(rA):
                    h = st.h_pair(i, j, a, b)
                    va, vb = A.basis_vec(a), A.basis_vec(b)
                    for c in range(rA):
                        vc = A.basis_vec(c)
                        got = lie.bracket(h, st.f_basis(i, k, c))
                        want = st.f_of(i, k, A.mul(A.mul(va, vb), vc))
                        if got != want:
                            row_ok = False
                        got = lie.bracket(h, st.f_basis(k, i, c))
                        e = (ap[a] + ap[b]) * (rp[i] + rp[k] + ap[c])
                        want = _scale(lie, -_neg_pow(e),
                                      st.f_of(k, i, A.mul(vc, A.mul(va, vb))))
                        if got != want:
                            col_ok = False
                        got = lie.bracket(h, st.f_basis(k, j, c))
                        e = ((rp[i] + rp[j] + ap[a]) * (rp[i] + rp[j] + ap[b])
                             + (ap[a] + ap[b]) * (rp[j] + rp[k] + ap[c]))
                        want = _scale(lie, _neg_pow(e),
                                      st.f_of(k, j, A.mul(vc, A.mul(vb, va))))
                        if got != want:
                            opp_ok = False
    res["H-row-action"] = row_ok
    res["H-column-action"] = col_ok
    res["H-opposite-action"] = opp_ok

    ok = True
    for (i, j) in _offdiag_positions(size):
        for a in range(rA):
            for b in range(rA):
                h = st.h_pair(i, j, a, b)
                va, vb = A.basis_vec(a), A.basis_vec(b)
                for c in range(rA):
                    vc = A.basis_vec(c)
                    got = lie.bracket(h, st.f_basis(i, j, c))
                    e = rp[i] + rp[j] + ap[a] * ap[b] + ap[b] * ap[c] + ap[c] * ap[a]
                    s = lie.domain.reduce(_neg_pow(e))
                    abc = A.mul(A.mul(va, vb), vc)
                    cba = A.mul(A.mul(vc, vb), va)
                    coeff = [lie.domain.add(x, lie.domain.mul(s, y))
                             for x, y in zip(abc, cba)]
                    if got != st.f_of(i, j, coeff):
                        ok = False
    res["H-same-pair-action"] = ok

    ok = True
    pos = _offdiag_positions(size)
    for (i, j) in pos:
        for (k, l) in pos:
            if len({i, j, k, l}) < 4:
                continue
            for a in range(rA):
                for b in range(rA):
                    h = st.h_pair(i, j, a, b)
                    for c in range(rA):
                        if lie.bracket(h, st.f_basis(k, l, c)):
                            ok = False
    res["H-disjoint-action"] = ok

    ok = True
    for a in range(rA):
        for b in range(rA):
            ref = st.small_h(a, b, 2)
            for j in range(3, size + 1):
                if st.small_h(a, b, j) != ref:
                    ok = False
    res["h-well-defined"] = ok

    comm_ok = stab_ok = True
    for a in range(rA):
        for b in range(rA):
            h = st.small_h(a, b)
            va, vb = A.basis_vec(a), A.basis_vec(b)
            ab = A.mul(va, vb)
            ba = A.mul(vb, va)
            s = lie.domain.reduce(-_neg_pow(ap[a] * ap[b]))
            diff = [lie.domain.add(x, lie.domain.mul(s, y)) for x, y in zip(ab, ba)]
            for c in range(rA):
                vc = A.basis_vec(c)
                for i in range(2, size + 1):
                    got = lie.bracket(h, st.f_basis(1, i, c))
                    if got != st.f_of(1, i, A.mul(diff, vc)):
                        comm_ok = False
            for (j, k) in _offdiag_positions(size):
                if j == 1 or k == 1:
                    continue
                for c in range(rA):
                    if lie.bracket(h, st.f_basis(j, k, c)):
                        stab_ok = False
    res["h-commutator-action"] = comm_ok
    res["h-stability"] = stab_ok
    return res


def verify_decomposition(st: SteinbergAlgebra) -> bool:
    """st splits as h(A,A) + sum_j H_1j(1,A) + sum_{i != j} F_ij(A).

    Splitting is checked as modules: the invariant factors of the pieces
    add up to those of st, and the pieces together span everything.
    """
    A, lie = st.algebra, st.lie
    dom = lie.domain
    rA = A.rank
    size = st.size
    mods = lie.effective_moduli()

    fams = [[st.small_h(a, b) for a in range(rA) for b in range(rA)]]
    for j in range(2, size + 1):
        fams.append([st.h_pair(1, j, A.unit, a) for a in range(rA)])
    for (i, j) in _offdiag_positions(size):
        fams.append([st.f_basis(i, j, a) for a in range(rA)])

    parts = []
    for vecs in fams:
        vecs = [v for v in vecs if v]
        parts.append(quotient_invariants(lie.rank, vecs, [], list(lie.parity),
                                         dom, ambient_moduli=mods))
    whole = quotient_invariants(lie.rank, [{t: dom.one} for t in range(lie.rank)],
                                [], list(lie.parity), dom, ambient_moduli=mods)
    if direct_sum_invariants(parts) != whole:
        return False

    ech = make_echelon(dom)
    if mods:
        for t, mu in enumerate(mods):
            if mu:
                ech.add_row({t: mu})
    for vecs in fams:
        for v in vecs:
            if v:
                ech.add_row(dict(v))
    return all(ech.contains({t: dom.one}) for t in range(lie.rank))


# ---------------------------------------------------------------------------
# homology shortcuts that avoid the full total-space presentation


def steinberg_h2(m: int, n: int, A: SuperAlgebra) -> GradedInvariants:
    """H2 of st(m,n,A): the central classes of the universal extension of sl
    that the commuting-pair relations kill."""
    if m + n < 3:
        raise MatrixShapeError("Steinberg construction needs at least three rows")
    sl = build_sl(m, n, A)
    chain = ChainComplex(sl.lie)
    zw = _zw_columns(sl, chain)
    d3 = [c for c in chain.d3_cols if c]
    # (Z_W + boundaries) / boundaries: relations must sit inside the
    # generator span, so the boundaries are repeated on the generator side
    return quotient_invariants(len(chain.pairs), zw + d3, d3, chain.pair_parity,
                               sl.lie.domain, ambient_moduli=chain.pair_moduli)


def steinberg_kernel_invariants(m: int, n: int, A: SuperAlgebra) -> GradedInvariants:
    """Invariants of ker(st(m,n,A) -> sl(m,n,A)) without building st itself."""
    if m + n < 3:
        raise MatrixShapeError("Steinberg construction needs at least three rows")
    sl = build_sl(m, n, A)
    chain = ChainComplex(sl.lie)
    cycles = _parity_kernel(chain, 0) + _parity_kernel(chain, 1)
    rels = [c for c in chain.d3_cols if c] + _zw_columns(sl, chain)
    return quotient_invariants(len(chain.pairs), cycles, rels, chain.pair_parity,
                               sl.lie.domain, ambient_moduli=chain.pair_moduli)
