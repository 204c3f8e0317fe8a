"""Matrix Lie superalgebras over a finite-rank associative superalgebra.

Rows and columns are indexed 1..m+n with the first m indices even and the
last n odd.  The coefficient superalgebra A contributes its own grading:
|E_ij(a)| = |i| + |j| + |a|.  The bracket is

    [E_ij(a), E_kl(b)] = d_jk E_il(ab) - (-1)^{|E_ij(a)||E_kl(b)|} d_li E_kj(ba)

and sl(m,n,A) is the span of all brackets, equivalently the elements whose
supertrace lands in the span of supercommutators of A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .domains import CoefficientDomain
from .exactlin import (
    ExactMatrix,
    FieldEchelon,
    Gf2Echelon,
    IntEchelon,
    kernel_basis,
    make_echelon,
    present_quotient,
)
from .liesuper import LieSuperAlgebra, LieSuperAlgebraError
from .superalg import SuperAlgebra


class MatrixShapeError(ValueError):
    pass


def _check_shape(m: int, n: int) -> None:
    if m < 0 or n < 0 or m + n < 2:
        raise MatrixShapeError(f"need m + n >= 2, got ({m}, {n})")


def row_parity(m: int, i: int) -> int:
    """Parity of the 1-based row/column index i."""
    return 0 if i <= m else 1


def _rows_of(ech) -> list:
    out = []
    for pc in sorted(ech.rows):
        r = ech.rows[pc]
        out.append(Gf2Echelon.unpack(r) if isinstance(r, int) else dict(r))
    return out


@dataclass
class GlSuper:
    """gl(m,n,A) with basis E_ij(e_a), indexed lexicographically by (i,j,a)."""

    m: int
    n: int
    algebra: SuperAlgebra
    lie: LieSuperAlgebra
    triples: list[tuple[int, int, int]] = field(repr=False)
    index: dict = field(repr=False)

    @property
    def size(self) -> int:
        return self.m + self.n

    def idx(self, i: int, j: int, a: int) -> int:
        return self.index[(i, j, a)]


def build_gl(m: int, n: int, A: SuperAlgebra) -> GlSuper:
    _check_shape(m, n)
    dom = A.domain
    s = m + n
    rA = A.rank
    triples = [(i, j, a) for i in range(1, s + 1) for j in range(1, s + 1)
               for a in range(rA)]
    index = {t: p for p, t in enumerate(triples)}
    names = [f"E[{i},{j}|{A.names[a]}]" for (i, j, a) in triples]
    parity = tuple((row_parity(m, i) + row_parity(m, j) + A.parity[a]) % 2
                   for (i, j, a) in triples)
    brackets: dict = {}
    for p, (i, j, a) in enumerate(triples):
        for q, (k, l, b) in enumerate(triples):
            if j != k and l != i:
                continue
            acc: dict = {}
            if j == k:
                for c, v in enumerate(A.table[a][b]):
                    if not dom.is_zero(v):
                        t = index[(i, l, c)]
                        acc[t] = dom.add(acc.get(t, dom.zero), v)
            if l == i:
                sgn = -1 if (parity[p] and parity[q]) else 1
                coeff = dom.reduce(-sgn)
                for c, v in enumerate(A.table[b][a]):
                    if not dom.is_zero(v):
                        t = index[(k, j, c)]
                        nv = dom.add(acc.get(t, dom.zero), dom.mul(coeff, v))
                        if dom.is_zero(nv):
                            acc.pop(t, None)
                        else:
                            acc[t] = nv
            acc = {t: v for t, v in acc.items() if not dom.is_zero(v)}
            if acc:
                if p == q and parity[p] == 0:
                    raise LieSuperAlgebraError("even self-bracket in gl table")
                brackets[(p, q)] = acc
    lie = LieSuperAlgebra(domain=dom, names=names, parity=parity, brackets=brackets,
                          label=f"gl({m},{n},{A.label or 'A'})")
    return GlSuper(m=m, n=n, algebra=A, lie=lie, triples=triples, index=index)


def supertrace(gl: GlSuper, vec: dict) -> dict:
    """Str(x) as sparse A-coordinates; odd rows flip the sign of even entries."""
    dom = gl.algebra.domain
    out: dict = {}
    for p, v in vec.items():
        i, j, a = gl.triples[p]
        if i != j:
            continue
        if i <= gl.m:
            c = v
        else:
            c = v if gl.algebra.parity[a] else dom.neg(v)
        nv = dom.add(out.get(a, dom.zero), c)
        if dom.is_zero(nv):
            out.pop(a, None)
        else:
            out[a] = nv
    return out


def _seeded_echelon(domain: CoefficientDomain, dim: int):
    """Membership echelon; over Z/m the coordinate multiples of m are implicit."""
    ech = make_echelon(domain)
    if domain.kind == "Zmod":
        for k in range(dim):
            ech.add_row({k: domain.modulus})
    return ech


def commutator_span(A: SuperAlgebra):
    """Echelon of the span of supercommutators [e_a, e_b] inside A."""
    dom = A.domain
    ech = _seeded_echelon(dom, A.rank)
    for a in range(A.rank):
        for b in range(a, A.rank):
            x = A.supercommutator(A.basis_vec(a), A.basis_vec(b))
            row = {k: v for k, v in enumerate(x) if not dom.is_zero(v)}
            if row:
                ech.add_row(row)
    return ech


class _SpanSolver:
    """Coordinates of targets in the span of fixed columns, reusable."""

    def __init__(self, cols: list[dict], dim: int, domain: CoefficientDomain):
        self.domain = domain
        self.dim = dim
        if domain.is_field:
            self.ech = FieldEchelon(domain, aug_offset=dim)
        else:
            self.ech = IntEchelon(aug_offset=dim)
        one = domain.one if domain.is_field else 1
        for p, c in enumerate(cols):
            row = {k: (v if domain.is_field else int(v)) for k, v in c.items()}
            row[dim + p] = one
            self.ech.add_row(row)
        if domain.kind == "Zmod":
            for k in range(dim):
                self.ech.add_row({k: domain.modulus})

    def solve(self, target: dict) -> dict | None:
        dom = self.domain
        if dom.is_field:
            rem = self.ech.reduce(dict(target))
        else:
            rem = self.ech.reduce({k: int(v) for k, v in target.items()})
        out = {}
        for k, v in rem.items():
            if k < self.dim:
                return None
            c = dom.neg(v) if dom.is_field else dom.reduce(-int(v))
            if not dom.is_zero(c):
                out[k - self.dim] = c
        return out


@dataclass
class SlSuper:
    """sl(m,n,A): the bracket span inside gl, with its own structure constants.

    Basis: all off-diagonal E_ij(e_a) plus a completed diagonal part; e_index
    maps (i, j, a) to the basis position of E_ij(e_a).  Over Z/m the diagonal
    part may carry annihilators finer than m (the span need not be free), in
    which case lie.moduli records them.
    """

    m: int
    n: int
    algebra: SuperAlgebra
    gl: GlSuper
    lie: LieSuperAlgebra
    embed_cols: list[dict] = field(repr=False)
    e_index: dict = field(repr=False)
    cartan_indices: list[int] = field(repr=False)
    _solver: _SpanSolver = field(repr=False)

    def to_sl(self, gl_vec: dict) -> dict | None:
        """Coordinates of a gl element in the sl basis, or None if outside."""
        out = self._solver.solve(gl_vec)
        if out is None or self.lie.moduli is None:
            return out
        return self.lie.normalize(out)

    def embed(self, sl_vec: dict) -> dict:
        dom = self.algebra.domain
        acc: dict = {}
        for p, c in sl_vec.items():
            for k, v in self.embed_cols[p].items():
                nv = dom.add(acc.get(k, dom.zero), dom.mul(c, v))
                if dom.is_zero(nv):
                    acc.pop(k, None)
                else:
                    acc[k] = nv
        return acc


def _diagonal_candidates(gl: GlSuper):
    """Diagonal-landing brackets in a fixed lexicographic order.

    [E_ij(a), E_ji(b)] for i < j together with [E_ii(a), E_ii(b)] exhaust the
    diagonal part of the bracket span: every basis bracket lands either purely
    on or purely off the diagonal.
    """
    s = gl.size
    rA = gl.algebra.rank
    out = []
    for i in range(1, s + 1):
        for j in range(i + 1, s + 1):
            for a in range(rA):
                for b in range(rA):
                    p = gl.idx(i, j, a)
                    q = gl.idx(j, i, b)
                    vec = gl.lie.bracket_basis(p, q)
                    if vec:
                        out.append((f"H[{i},{j}|{gl.algebra.names[a]},{gl.algebra.names[b]}]",
                                    dict(vec)))
    for i in range(1, s + 1):
        for a in range(rA):
            for b in range(a, rA):
                p = gl.idx(i, i, a)
                q = gl.idx(i, i, b)
                vec = gl.lie.bracket_basis(p, q)
                if vec:
                    out.append((f"C[{i}|{gl.algebra.names[a]},{gl.algebra.names[b]}]",
                                dict(vec)))
    return out


def _greedy_diagonal(gl: GlSuper, embed_cols, cands, full) -> list[tuple[str, dict, int]]:
    """Lexicographic greedy over candidates, for Z and fields (free spans)."""
    dom = gl.algebra.domain
    dim = len(gl.triples)
    ch_ech = _seeded_echelon(dom, dim)
    for col in embed_cols:
        ch_ech.add_row(dict(col))
    cartan: list[tuple[str, dict, int]] = []
    for name, vec in cands:
        if ch_ech.contains(vec):
            continue
        before = dict(ch_ech.rows)
        rank0 = ch_ech.rank
        ch_ech.add_row(dict(vec))
        if ch_ech.rank == rank0 + 1:
            cartan.append((name, vec, 0))
        else:
            # span grew without rank growth: adding would break independence
            ch_ech.rows = before
    if all(ch_ech.contains(r) for r in _rows_of(full)):
        return cartan
    # canonical fallback: echelon rows of the diagonal candidate span
    diag = make_echelon(dom)
    for _, vec in cands:
        diag.add_row(dict(vec))
    return [(f"D[{k}]", row, 0) for k, row in enumerate(_rows_of(diag))]


def _zmod_diagonal(gl: GlSuper, cands) -> list[tuple[str, dict, int]]:
    """Diagonal part over Z/m via an integer-lattice presentation.

    The span of the diagonal candidates inside (Z/m)^d can fail to be free,
    so generators come with annihilator moduli dividing m.
    """
    dom = gl.algebra.domain
    mz = dom.modulus
    s = gl.size
    rA = gl.algebra.rank
    diag_coords = [gl.idx(i, i, a) for i in range(1, s + 1) for a in range(rA)]
    local = {c: t for t, c in enumerate(diag_coords)}
    d = len(diag_coords)
    lat = IntEchelon()
    for _, vec in cands:
        lat.add_row({local[k]: int(v) for k, v in vec.items()})
    for t in range(d):
        lat.add_row({t: mz})
    pivots = sorted(lat.rows)
    order = {pc: i for i, pc in enumerate(pivots)}
    rels = []
    for t in range(d):
        co = lat.coords({t: mz})
        if co is None:
            raise LieSuperAlgebraError("lattice misses its own modulus row")
        rels.append({order[pc]: q for pc, q in co.items() if q})
    row_par = []
    for pc in pivots:
        ps = {gl.lie.parity[diag_coords[k]] for k in lat.rows[pc]}
        if len(ps) != 1:
            raise LieSuperAlgebraError("diagonal lattice row is not homogeneous")
        row_par.append(ps.pop())
    pres = present_quotient(len(pivots), rels, row_par, CoefficientDomain.integers())
    out = []
    for k, g in enumerate(pres.generators):
        acc: dict = {}
        for c, q in g.rep.items():
            for loc, v in lat.rows[pivots[c]].items():
                acc[loc] = acc.get(loc, 0) + int(q) * v
        vec = {}
        for loc, v in acc.items():
            v %= mz
            if v:
                vec[diag_coords[loc]] = v
        if not vec:
            raise LieSuperAlgebraError("torsion diagonal generator vanished mod m")
        mu = g.modulus if g.modulus else mz
        out.append((f"D[{k}]", vec, mu))
    return out


def build_sl(m: int, n: int, A: SuperAlgebra, basis_order: str = "lex") -> SlSuper:
    if basis_order not in ("lex", "reverse"):
        raise ValueError("basis_order must be 'lex' or 'reverse'")
    _check_shape(m, n)
    gl = build_gl(m, n, A)
    dom = A.domain
    s = m + n
    rA = A.rank
    dim = len(gl.triples)
    one = dom.one

    names: list[str] = []
    embed_cols: list[dict] = []
    e_index: dict = {}
    for i in range(1, s + 1):
        for j in range(1, s + 1):
            if i == j:
                continue
            for a in range(rA):
                e_index[(i, j, a)] = len(embed_cols)
                embed_cols.append({gl.idx(i, j, a): one})
                names.append(f"E[{i},{j}|{A.names[a]}]")

    full = _seeded_echelon(dom, dim)
    for bv in gl.lie.brackets.values():
        full.add_row(dict(bv))

    cands = _diagonal_candidates(gl)
    if basis_order == "reverse":
        cands = list(reversed(cands))
    if dom.kind == "Zmod":
        cartan = _zmod_diagonal(gl, cands)
    else:
        cartan = _greedy_diagonal(gl, embed_cols, cands, full)

    cartan_indices = []
    cartan_moduli = []
    for name, vec, mu in cartan:
        cartan_indices.append(len(embed_cols))
        embed_cols.append({k: dom.reduce(v) for k, v in vec.items()})
        names.append(name)
        cartan_moduli.append(mu)

    moduli = None
    if dom.kind == "Zmod" and any(mu != dom.modulus for mu in cartan_moduli):
        moduli = tuple([dom.modulus] * len(e_index) + cartan_moduli)

    # final guard: the chosen basis must span exactly the bracket span
    ch_ech = _seeded_echelon(dom, dim)
    for col in embed_cols:
        ch_ech.add_row(dict(col))
    for r in _rows_of(full):
        if not ch_ech.contains(r):
            raise LieSuperAlgebraError("sl basis does not span the brackets")
    for col in embed_cols[len(e_index):]:
        if not full.contains(dict(col)):
            raise LieSuperAlgebraError("sl diagonal element escapes the bracket span")

    parity = []
    for col in embed_cols:
        ps = {gl.lie.parity[k] for k in col}
        if len(ps) != 1:
            raise LieSuperAlgebraError("sl basis element is not parity homogeneous")
        parity.append(ps.pop())

    solver = _SpanSolver(embed_cols, dim, dom)
    r = len(embed_cols)
    brackets: dict = {}
    for p in range(r):
        for q in range(r):
            val = gl.lie.bracket(embed_cols[p], embed_cols[q])
            if not val:
                continue
            coords = solver.solve(val)
            if coords is None:
                raise LieSuperAlgebraError("bracket escaped the sl span")
            if moduli is not None:
                coords = {k: v % moduli[k] if moduli[k] else v for k, v in coords.items()}
                coords = {k: v for k, v in coords.items() if v}
            if coords:
                brackets[(p, q)] = coords
    lie = LieSuperAlgebra(domain=dom, names=names, parity=tuple(parity),
                          brackets=brackets, moduli=moduli,
                          label=f"sl({m},{n},{A.label or 'A'})")
    return SlSuper(m=m, n=n, algebra=A, gl=gl, lie=lie, embed_cols=embed_cols,
                   e_index=e_index, cartan_indices=cartan_indices, _solver=solver)


def supertrace_characterises_sl(sl: SlSuper) -> bool:
    """Bracket span == supertrace preimage of the supercommutator span."""
    gl = sl.gl
    A = sl.algebra
    dom = A.domain
    comm = commutator_span(A)
    for col in sl.embed_cols:
        st = supertrace(gl, col)
        if st and not comm.contains(st):
            return False
    # anything whose supertrace lies in the commutator span must be in sl
    dim = len(gl.triples)
    cols = [supertrace(gl, {p: dom.one}) for p in range(dim)]
    for row in _rows_of(comm):
        cols.append({k: dom.neg(dom.reduce(v)) for k, v in row.items()})
    mat = ExactMatrix.from_columns(cols, A.rank, dom)
    ch_ech = _seeded_echelon(dom, dim)
    for col in sl.embed_cols:
        ch_ech.add_row(dict(col))
    for ker in kernel_basis(mat):
        x = {p: v for p, v in ker.items() if p < dim and not dom.is_zero(v)}
        if x and not ch_ech.contains(x):
            return False
    return True
