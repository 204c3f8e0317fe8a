"""Explicit central 2-cocycles on the rank-four Steinberg superalgebras.

For m+n = 4 the second homology of st(m,n,A) is nonzero and is realised
by an explicit super 2-cocycle psi supported on pairs F_ij(a), F_kl(b)
with {i,j,k,l} = {1,2,3,4}.  The 24 ordered index patterns fall into six
orbits of the Klein group generated by i<->k and j<->l; each orbit feeds
one coordinate block of the value space W:

  (3,1): six parity-shifted copies of A/(2A + A[A,A]), no extra signs;
  (2,2): four copies of A/(2A + A[A,A]) for the orbits that preserve the
         row-parity split, and two copies of A/(A[A,A]) for the two mixed
         orbits, weighted by a sign sigma on the orbit and by the parity
         of the second coefficient.

psi(F_ij(a), F_kl(b)) is the class of ab in the block of the orbit of
(i,j,k,l); all other pairs, including everything meeting the diagonal
part, map to zero.  Adding W with this bracket twist reproduces the
universal central extension of st, which is verified explicitly by
comparison rather than assumed.
"""

from dataclasses import dataclass, field

from .liesuper import (CentralExtension, LieSuperAlgebra, LieSuperAlgebraError,
                       _extension_checks, _kernel_of_projection, _sign_swap,
                       extension_from_cocycle, total_invariants)
from .matgl import _SpanSolver
from .steinberg import SteinbergAlgebra, _offdiag_positions
from .superalg import GradedQuotient, quotient_am


def _orbit(rep):
    i, j, k, l = rep
    # generators: swap the first components, swap the second components
    return [(i, j, k, l), (k, j, i, l), (i, l, k, j), (k, l, i, j)]


_REPS = [(1, 2, 3, 4), (1, 2, 4, 3), (2, 1, 3, 4),
         (2, 1, 4, 3), (1, 3, 2, 4), (3, 1, 4, 2)]


def klein_cosets() -> list:
    """The six Klein orbits of ordered disjoint index patterns on {1,2,3,4}."""
    return [_orbit(rep) for rep in _REPS]


_COSET_INDEX = {t: c for c, orbit in enumerate(klein_cosets()) for t in orbit}


def sigma_sign(t) -> int:
    """Orbit-internal sign used by the (2,2) cocycle on the mixed orbits.

    +1 on the four row-split orbits throughout; on the mixed orbits the
    representative and its double swap carry +1, the single swaps -1.
    """
    c = _COSET_INDEX[t]
    if c < 4:
        return 1
    rep = _REPS[c]
    return 1 if t in (rep, (rep[2], rep[3], rep[0], rep[1])) else -1


@dataclass
class PsiData:
    """A cocycle table on the basis of st, with its value space."""

    variant: str
    values: dict = field(repr=False)      # (p, q) -> sparse W vector
    w_parities: tuple = ()
    w_moduli: tuple | None = None
    w_names: list = field(default_factory=list)
    blocks: list = field(default_factory=list, repr=False)  # (offset, GradedQuotient)


def _f_coordinates(st: SteinbergAlgebra):
    """Coordinates of the st basis on the F part of the decomposition.

    The solver spans all of st; only the F slots are returned.  Linear
    dependence among the spanning vectors lives entirely in the diagonal
    families, where psi vanishes, so these coordinates are well defined.
    """
    A = st.algebra
    rA = A.rank
    size = st.size
    cols = [st.small_h(a, b) for a in range(rA) for b in range(rA)]
    for j in range(2, size + 1):
        cols.extend(st.h_pair(1, j, A.unit, a) for a in range(rA))
    f_base = len(cols)
    f_slots = []
    for (i, j) in _offdiag_positions(size):
        for a in range(rA):
            f_slots.append((i, j, a))
            cols.append(st.f_basis(i, j, a))
    solver = _SpanSolver(cols, st.lie.rank, st.lie.domain)
    out = []
    for t in range(st.lie.rank):
        coords = solver.solve({t: st.lie.domain.one})
        if coords is None:
            raise LieSuperAlgebraError("decomposition does not span st")
        out.append([(f_slots[s - f_base], c)
                    for s, c in coords.items() if s >= f_base])
    return out


def build_psi(st: SteinbergAlgebra) -> PsiData:
    """The explicit 2-cocycle for st(3,1,A) or st(2,2,A) on basis pairs."""
    if (st.m, st.n) == (3, 1):
        variant = "3,1"
    elif (st.m, st.n) == (2, 2):
        variant = "2,2"
    else:
        raise LieSuperAlgebraError("explicit cocycles exist for (3,1) and (2,2) only")
    A = st.algebra
    dom = st.lie.domain
    q2 = quotient_am(A, 2)
    blocks = []
    w_parities: list[int] = []
    w_moduli: list[int] = []
    w_names: list[str] = []
    n_copies2 = 6 if variant == "3,1" else 4
    for c in range(n_copies2):
        blocks.append((len(w_parities), q2))
        for s, g in enumerate(q2.presentation.generators):
            par = g.parity ^ 1 if variant == "3,1" else g.parity
            w_parities.append(par)
            w_moduli.append(g.modulus)
            w_names.append(f"w{c + 1}.{s}")
    if variant == "2,2":
        q0 = quotient_am(A, 0)
        for c in (4, 5):
            blocks.append((len(w_parities), q0))
            for s, g in enumerate(q0.presentation.generators):
                w_parities.append(g.parity)
                w_moduli.append(g.modulus)
                w_names.append(f"w{c + 1}.{s}")

    def table(i, j, a, k, l, b) -> dict:
        if len({i, j, k, l}) < 4:
            return {}
        c = _COSET_INDEX[(i, j, k, l)]
        offset, quot = blocks[c]
        cls = quot.project(A.mul(A.basis_vec(a), A.basis_vec(b)))
        if not cls:
            return {}
        scal = 1
        if variant == "2,2" and c >= 4:
            scal = sigma_sign((i, j, k, l))
            if A.parity[b]:
                scal = -scal
        sc = dom.reduce(scal)
        return {offset + s: dom.mul(sc, v) for s, v in cls.items()}

    fcoords = _f_coordinates(st)
    nst = st.lie.rank
    values: dict = {}
    for p in range(nst):
        for q in range(nst):
            acc: dict = {}
            for ((i, j, a), cp) in fcoords[p]:
                for ((k, l, b), cq) in fcoords[q]:
                    cell = table(i, j, a, k, l, b)
                    if not cell:
                        continue
                    cc = dom.mul(cp, cq)
                    for w, v in cell.items():
                        acc[w] = dom.add(acc.get(w, dom.zero), dom.mul(cc, v))
            vec = {}
            for w, v in acc.items():
                if w_moduli[w]:
                    v = int(v) % w_moduli[w]
                if not dom.is_zero(v):
                    vec[w] = v
            if vec:
                values[(p, q)] = vec
    mods = tuple(w_moduli) if any(w_moduli) else None
    return PsiData(variant=variant, values=values, w_parities=tuple(w_parities),
                   w_moduli=mods, w_names=w_names, blocks=blocks)


def build_st_sharp(st: SteinbergAlgebra, psi: PsiData | None = None,
                   validate: bool = True) -> CentralExtension:
    """st + W with the bracket twisted by the cocycle; validated on build."""
    if psi is None:
        psi = build_psi(st)
    return extension_from_cocycle(st.lie, psi.values, psi.w_parities,
                                  w_moduli=psi.w_moduli, w_names=psi.w_names,
                                  validate=validate)


# ---------------------------------------------------------------------------
# standalone cocycle checking


@dataclass
class CocycleReport:
    passed: bool
    verdicts: dict
    first_failure: str | None = None


def check_super_2cocycle(L: LieSuperAlgebra, values: dict, w_parities,
                         w_moduli=None) -> CocycleReport:
    """Check the graded 2-cocycle axioms of a value table on basis pairs.

    Verifies value parity, graded antisymmetry, vanishing even squares,
    the cyclic cocycle identity on every basis triple, and the odd cube
    compatibility psi(x, [x,x]) = 0.  Reports the first failing instance.
    """
    dom = L.domain
    r = L.rank

    def wnorm(vec: dict) -> dict:
        out = {}
        for w, v in vec.items():
            if w_moduli and w_moduli[w]:
                v = int(v) % w_moduli[w]
            if not dom.is_zero(v):
                out[w] = v
        return out

    def psi_left(x: dict, q: int) -> dict:
        # psi extended linearly in the first slot
        acc: dict = {}
        for p, c in x.items():
            for w, v in values.get((p, q), {}).items():
                acc[w] = dom.add(acc.get(w, dom.zero), dom.mul(c, v))
        return wnorm(acc)

    verdicts = {"parity": True, "antisymmetry": True, "even-square": True,
                "cocycle": True, "odd-cube": True}
    first = None

    def fail(kind, detail):
        nonlocal first
        verdicts[kind] = False
        if first is None:
            first = f"{kind} at {detail}"

    for (p, q), vec in values.items():
        pq = (L.parity[p] + L.parity[q]) % 2
        if any(w_parities[w] != pq for w in wnorm(vec)):
            fail("parity", (L.names[p], L.names[q]))
    for p in range(r):
        for q in range(r):
            lhs = wnorm(values.get((q, p), {}))
            s = dom.reduce(_sign_swap(L.parity[p], L.parity[q]))
            rhs = wnorm({w: dom.mul(s, v) for w, v in values.get((p, q), {}).items()})
            if lhs != rhs:
                fail("antisymmetry", (L.names[p], L.names[q]))
        if L.parity[p] == 0 and wnorm(values.get((p, p), {})):
            fail("even-square", L.names[p])

    basis = [{i: dom.one} for i in range(r)]
    for i in range(r):
        for j in range(r):
            bij = L.bracket_basis(i, j)
            for k in range(r):
                t1 = psi_left(bij, k)
                t2 = psi_left(L.bracket_basis(j, k), i)
                t3 = psi_left(L.bracket_basis(k, i), j)
                s1 = -1 if (L.parity[i] and L.parity[k]) else 1
                s2 = -1 if (L.parity[i] and L.parity[j]) else 1
                s3 = -1 if (L.parity[j] and L.parity[k]) else 1
                acc: dict = {}
                for s, t in ((s1, t1), (s2, t2), (s3, t3)):
                    c = dom.reduce(s)
                    for w, v in t.items():
                        acc[w] = dom.add(acc.get(w, dom.zero), dom.mul(c, v))
                if wnorm(acc):
                    fail("cocycle", (L.names[i], L.names[j], L.names[k]))
    for i in range(r):
        if L.parity[i]:
            # psi(x, [x,x]): linear in the second slot
            acc: dict = {}
            for p, c in L.bracket_basis(i, i).items():
                for w, v in values.get((i, p), {}).items():
                    acc[w] = dom.add(acc.get(w, dom.zero), dom.mul(c, v))
            if wnorm(acc):
                fail("odd-cube", L.names[i])
    return CocycleReport(passed=all(verdicts.values()), verdicts=verdicts,
                         first_failure=first)


# ---------------------------------------------------------------------------
# comparison with the universal central extension


def compare_extensions(candidate: CentralExtension, universal: CentralExtension) -> dict:
    """Is the cocycle extension a universal central extension of its base?

    Maps the universal total onto the candidate by sending the class of a
    wedge to the bracket of the canonical section images, then checks that
    the map is a bracket homomorphism over the base, that it is onto, and
    that both totals and both kernels have the same invariant factors.
    Together these force the two extensions to be isomorphic.
    """
    if universal.chain is None or universal.presentation is None:
        raise LieSuperAlgebraError("universal side must carry its presentation")
    base = universal.base
    dom = base.domain
    cand = candidate.total
    pairs = universal.chain.pairs

    # any section of the candidate projection will do: brackets of lifts do
    # not see central shifts, so rho below is independent of the choice
    solver = _SpanSolver(candidate.projection_cols, base.rank, dom)
    lifts = []
    for p in range(base.rank):
        coords = solver.solve({p: dom.one})
        if coords is None:
            raise LieSuperAlgebraError("candidate projection is not onto")
        lifts.append(cand.normalize(dict(coords)))

    def rho_of_rep(rep: dict) -> dict:
        acc: dict = {}
        for n, c in rep.items():
            p, q = pairs[n]
            bv = cand.bracket(lifts[p], lifts[q])
            cc = dom.reduce(c)
            for t, v in bv.items():
                acc[t] = dom.add(acc.get(t, dom.zero), dom.mul(cc, v))
        return cand.normalize(acc)

    gens = universal.presentation.generators
    images = [rho_of_rep(g.rep) for g in gens]
    res = {}

    ok = True
    for t, img in enumerate(images):
        if candidate.project(img) != universal.projection_cols[t]:
            ok = False
    res["projection-compatible"] = ok

    ok = True
    utotal = universal.total
    for (p, q), bv in utotal.brackets.items():
        acc: dict = {}
        for t, c in bv.items():
            for s, v in images[t].items():
                acc[s] = dom.add(acc.get(s, dom.zero), dom.mul(dom.reduce(c), v))
        if cand.normalize(acc) != cand.bracket(images[p], images[q]):
            ok = False
    res["homomorphism"] = ok

    from .exactlin import make_echelon
    ech = make_echelon(dom)
    mods = cand.effective_moduli()
    if mods:
        for t, mu in enumerate(mods):
            if mu:
                ech.add_row({t: mu})
    for img in images:
        if img:
            ech.add_row(dict(img))
    res["surjective"] = all(ech.contains({t: dom.one}) for t in range(cand.rank))

    res["totals-match"] = total_invariants(utotal) == total_invariants(cand)
    res["kernels-match"] = (universal.kernel_invariants()
                            == candidate.kernel_invariants())
    res["isomorphic"] = all(res.values())
    return res


def sharp_over_sl(st: SteinbergAlgebra, sharp: CentralExtension) -> CentralExtension:
    """Compose st-sharp -> st -> sl into a single central extension of sl.

    The composite kernel is central because the total is perfect: for z in
    the kernel, [z, a] already dies in the inner kernel, so [z, [a, b]]
    falls apart into brackets of central elements.
    """
    cols = [st.phi(c) if c else {} for c in sharp.projection_cols]
    ext = CentralExtension(
        total=sharp.total, base=st.sl.lie, projection_cols=cols,
        kernel_generators=_kernel_of_projection(sharp.total, st.sl.lie, cols))
    _extension_checks(ext)
    return ext
