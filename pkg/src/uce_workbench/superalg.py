"""Finite-rank associative superalgebras with unit, and their small invariants.

An algebra is given by a K-basis with parities and a structure constant
table.  The module provides validation (unit, parity additivity,
associativity), supercommutators with the Koszul sign, two-sided ideal
closures, the quotients A_m = A / I_m where I_m is the ideal generated by
all m*a and all supercommutators, and first cyclic homology over Q
computed from the Connes quotient complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .domains import CoefficientDomain
from .exactlin import (
    ExactMatrix,
    Gf2Echelon,
    GradedInvariants,
    GradedPresentation,
    kernel_basis,
    make_echelon,
    present_quotient,
    quotient_invariants,
)


class SuperAlgebraError(ValueError):
    pass


@dataclass
class SuperAlgebra:
    """Associative unital superalgebra of finite rank over a coefficient domain.

    table[i][j] is the dense coefficient tuple of e_i * e_j.  Elements are
    dense tuples/lists of domain values.
    """

    domain: CoefficientDomain
    names: list[str]
    parity: tuple[int, ...]
    unit: int
    table: list[list[tuple]]
    label: str = ""
    source: str = ""

    @property
    def rank(self) -> int:
        return len(self.names)

    def zero_vec(self) -> list:
        return [self.domain.zero] * self.rank

    def unit_vec(self) -> list:
        v = self.zero_vec()
        v[self.unit] = self.domain.one
        return v

    def basis_vec(self, i: int) -> list:
        v = self.zero_vec()
        v[i] = self.domain.one
        return v

    def mul(self, x, y) -> list:
        dom = self.domain
        out = self.zero_vec()
        for i, xi in enumerate(x):
            if dom.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if dom.is_zero(yj):
                    continue
                c = dom.mul(xi, yj)
                for k, t in enumerate(self.table[i][j]):
                    if not dom.is_zero(t):
                        out[k] = dom.add(out[k], dom.mul(c, t))
        return out

    def supercommutator(self, x, y) -> list:
        """[x, y] = xy - (-1)^{|x||y|} yx, extended bilinearly over the basis."""
        dom = self.domain
        out = self.zero_vec()
        for i, xi in enumerate(x):
            if dom.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if dom.is_zero(yj):
                    continue
                c = dom.mul(xi, yj)
                sign = -1 if (self.parity[i] and self.parity[j]) else 1
                for k in range(self.rank):
                    t = self.table[i][j][k]
                    u = self.table[j][i][k]
                    acc = self.domain.zero
                    if not dom.is_zero(t):
                        acc = dom.mul(c, t)
                    if not dom.is_zero(u):
                        cu = dom.mul(c, u)
                        acc = dom.sub(acc, cu) if sign > 0 else dom.add(acc, cu)
                    if not dom.is_zero(acc):
                        out[k] = dom.add(out[k], acc)
        return out

    def element_parity(self, x) -> int | None:
        """0/1 for homogeneous nonzero x, None if mixed; zero counts as even."""
        seen = set()
        for i, xi in enumerate(x):
            if not self.domain.is_zero(xi):
                seen.add(self.parity[i])
        if len(seen) > 1:
            return None
        return seen.pop() if seen else 0

    def __str__(self) -> str:
        return self.label or f"algebra(rank {self.rank} over {self.domain})"


def dense_to_sparse(v, domain: CoefficientDomain) -> dict:
    return {i: x for i, x in enumerate(v) if not domain.is_zero(x)}


def sparse_to_dense(v: dict, rank: int, domain: CoefficientDomain) -> list:
    out = [domain.zero] * rank
    for i, x in v.items():
        out[i] = x
    return out


def validate_superalgebra(A: SuperAlgebra) -> None:
    """Unit axioms, parity additivity of the table, and associativity."""
    dom = A.domain
    r = A.rank
    if not (0 <= A.unit < r):
        raise SuperAlgebraError("unit index out of range")
    if A.parity[A.unit] != 0:
        raise SuperAlgebraError("unit element must be even")
    for i in range(r):
        left = A.table[A.unit][i]
        right = A.table[i][A.unit]
        want = tuple(dom.one if k == i else dom.zero for k in range(r))
        if tuple(left) != want or tuple(right) != want:
            raise SuperAlgebraError(f"unit fails on basis element {A.names[i]}")
    for i in range(r):
        for j in range(r):
            p = (A.parity[i] + A.parity[j]) % 2
            for k, c in enumerate(A.table[i][j]):
                if not dom.is_zero(c) and A.parity[k] != p:
                    raise SuperAlgebraError(
                        f"product {A.names[i]}*{A.names[j]} breaks parity additivity")
    for i in range(r):
        ei = A.basis_vec(i)
        for j in range(r):
            ej = A.basis_vec(j)
            ij = A.mul(ei, ej)
            for k in range(r):
                ek = A.basis_vec(k)
                lhs = A.mul(ij, ek)
                rhs = A.mul(ei, A.mul(ej, ek))
                if lhs != rhs:
                    raise SuperAlgebraError(
                        f"associativity fails on ({A.names[i]}, {A.names[j]}, {A.names[k]})")


# ---------------------------------------------------------------------------
# ideals and the quotients A_m


def _span_canonical(ech) -> tuple:
    items = []
    for pc in sorted(ech.rows):
        row = ech.rows[pc]
        if isinstance(row, int):
            items.append((pc, row))
        else:
            items.append((pc, tuple(sorted(row.items()))))
    return tuple(items)


def _seed_echelon(A: SuperAlgebra):
    ech = make_echelon(A.domain)
    if A.domain.kind == "Zmod":
        for i in range(A.rank):
            ech.add_row({i: A.domain.modulus})
    return ech


def span_of(A: SuperAlgebra, vectors) -> "object":
    """Echelon for the K-span of the given dense vectors (lattice over Z)."""
    ech = _seed_echelon(A)
    for v in vectors:
        sv = dense_to_sparse(v, A.domain)
        if sv:
            ech.add_row(sv)
    return ech


def ideal_closure(A: SuperAlgebra, generators) -> list[dict]:
    """Echelon basis of the two-sided ideal generated by the given elements."""
    dom = A.domain
    ech = _seed_echelon(A)
    for g in generators:
        sv = dense_to_sparse(g, dom)
        if sv:
            ech.add_row(sv)
    while True:
        before = _span_canonical(ech)
        current = []
        for pc in sorted(ech.rows):
            row = ech.rows[pc]
            if isinstance(row, int):
                row = Gf2Echelon.unpack(row)
            current.append(sparse_to_dense({k: dom.reduce(v) for k, v in row.items()},
                                           A.rank, dom))
        for v in current:
            for i in range(A.rank):
                ei = A.basis_vec(i)
                for prod in (A.mul(ei, v), A.mul(v, ei)):
                    sv = dense_to_sparse(prod, dom)
                    if sv:
                        ech.add_row(sv)
        if _span_canonical(ech) == before:
            break
    out = []
    for pc in sorted(ech.rows):
        row = ech.rows[pc]
        if isinstance(row, int):
            row = Gf2Echelon.unpack(row)
        out.append(dict(row))
    return out


def basis_supercommutators(A: SuperAlgebra) -> list[list]:
    out = []
    for i in range(A.rank):
        for j in range(A.rank):
            c = A.supercommutator(A.basis_vec(i), A.basis_vec(j))
            if any(not A.domain.is_zero(x) for x in c):
                out.append(c)
    return out


@dataclass
class GradedQuotient:
    """A quotient A / I with an explicit diagonalised presentation."""

    algebra: SuperAlgebra
    m: int
    ideal: list[dict] = field(repr=False)
    presentation: GradedPresentation = field(repr=False)

    @property
    def invariants(self) -> GradedInvariants:
        return self.presentation.invariants()

    def project(self, v) -> dict:
        """Class of a dense algebra element in quotient coordinates."""
        return self.presentation.reduce(dense_to_sparse(v, self.algebra.domain))


def quotient_am(A: SuperAlgebra, m: int) -> GradedQuotient:
    """A_m = A / I_m with I_m = <m*a, supercommutators>.

    Also verifies, by computing spans both ways, that I_m equals
    m*A + A*[A,A] and m*A + [A,A]*A.
    """
    dom = A.domain
    commutators = basis_supercommutators(A)
    m_unit = [dom.scale_int(m, x) for x in A.unit_vec()]
    ideal = ideal_closure(A, [m_unit] + commutators)

    scaled_basis = [[dom.scale_int(m, x) for x in A.basis_vec(i)] for i in range(A.rank)]
    left_products = [A.mul(A.basis_vec(k), c) for c in commutators for k in range(A.rank)]
    right_products = [A.mul(c, A.basis_vec(k)) for c in commutators for k in range(A.rank)]
    span_a = span_of(A, scaled_basis + left_products)
    span_b = span_of(A, scaled_basis + right_products)
    closure_span = _seed_echelon(A)
    for row in ideal:
        closure_span.add_row(dict(row))
    ca, cb, cc = _span_canonical(span_a), _span_canonical(span_b), _span_canonical(closure_span)
    if not (ca == cb == cc):
        raise SuperAlgebraError("ideal closure disagrees with m*A + A*[A,A]")

    pres = present_quotient(A.rank, ideal, list(A.parity), dom)
    return GradedQuotient(algebra=A, m=m, ideal=ideal, presentation=pres)


def parity_change(inv: GradedInvariants) -> GradedInvariants:
    """Parity shift: swap the even and odd parts."""
    return inv.parity_flip()


# ---------------------------------------------------------------------------
# first cyclic homology over Q (Connes quotient complex)


def hc1_connes(A: SuperAlgebra) -> GradedInvariants:
    """HC_1 of A over Q from the quotient complex C_* / im(1 - t).

    Signs: the cyclic operator on n-chains is (-1)^n times the Koszul
    wraparound sign of moving the last tensor factor to the front, and the
    last face map of the Hochschild boundary carries the same wraparound
    sign.  Only defined over Q.
    """
    dom = A.domain
    if dom.kind != "Q":
        raise SuperAlgebraError("hc1_connes requires coefficients in Q")
    r = A.rank
    par = A.parity

    def idx1(i, j):
        return i * r + j

    def p1(i, j):
        return (par[i] + par[j]) % 2

    # C1 modulo im(1 - t1), t1(a x b) = -(-1)^{|a||b|} (b x a)
    rels1 = []
    for i in range(r):
        for j in range(r):
            v = {idx1(i, j): dom.one}
            # 1 - t: subtract t1(e_i x e_j) = -(-1)^{|i||j|} e_j x e_i
            sign = dom.neg(dom.one) if (par[i] and par[j]) else dom.one
            k = idx1(j, i)
            v[k] = dom.add(v.get(k, dom.zero), sign)
            v = {a: b for a, b in v.items() if not dom.is_zero(b)}
            if v:
                rels1.append(v)
    parities1 = [p1(i, j) for i in range(r) for j in range(r)]
    pres1 = present_quotient(r * r, rels1, parities1, dom)

    def b1_of(vec1: dict) -> dict:
        out: dict = {}
        for c, x in vec1.items():
            i, j = divmod(c, r)
            comm = A.supercommutator(A.basis_vec(i), A.basis_vec(j))
            for k, t in enumerate(comm):
                if not dom.is_zero(t):
                    nv = dom.add(out.get(k, dom.zero), dom.mul(x, t))
                    if dom.is_zero(nv):
                        out.pop(k, None)
                    else:
                        out[k] = nv
        return out

    b1_cols = [b1_of(g.rep) for g in pres1.generators]
    b1_mat = ExactMatrix.from_columns(b1_cols, r, dom)
    cycles = kernel_basis(b1_mat)

    b2_images = []
    for i in range(r):
        for j in range(r):
            for k in range(r):
                out: dict = {}
                # (e_i e_j) x e_k
                prod = A.table[i][j]
                for a, t in enumerate(prod):
                    if not dom.is_zero(t):
                        c = idx1(a, k)
                        out[c] = dom.add(out.get(c, dom.zero), t)
                # - e_i x (e_j e_k)
                prod = A.table[j][k]
                for a, t in enumerate(prod):
                    if not dom.is_zero(t):
                        c = idx1(i, a)
                        out[c] = dom.sub(out.get(c, dom.zero), t)
                # + (-1)^{|k|(|i|+|j|)} (e_k e_i) x e_j
                sign = -1 if (par[k] and (par[i] + par[j]) % 2) else 1
                prod = A.table[k][i]
                for a, t in enumerate(prod):
                    if not dom.is_zero(t):
                        c = idx1(a, j)
                        val = dom.mul(dom.reduce(sign), t)
                        out[c] = dom.add(out.get(c, dom.zero), val)
                out = {a: b for a, b in out.items() if not dom.is_zero(b)}
                if out:
                    reduced = pres1.reduce(out)
                    if reduced:
                        b2_images.append(reduced)

    return quotient_invariants(pres1.rank, cycles, b2_images, pres1.parities(), dom)
