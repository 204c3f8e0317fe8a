import random
from fractions import Fraction

from uce_workbench.domains import CoefficientDomain, Q, Z
from uce_workbench.exactlin import (
    ExactMatrix,
    GradedInvariants,
    IntEchelon,
    ModuleInvariants,
    RelationOutsideSpanError,
    direct_sum_invariants,
    int_snf,
    kernel_basis,
    matrix_rank,
    present_quotient,
    quotient_invariants,
    random_unimodular,
    smith_normal_form,
    solve_in_span,
)

GF2 = CoefficientDomain.prime_field(2)
GF3 = CoefficientDomain.prime_field(3)
Z4 = CoefficientDomain.integers_mod(4)


def dense(rows, dom):
    return ExactMatrix.from_dense(rows, dom)


# -- Smith normal form ------------------------------------------------------


def test_snf_identity_and_zero():
    assert smith_normal_form(dense([[1, 0], [0, 1]], Z)) == (1, 1)
    assert smith_normal_form(dense([[0, 0], [0, 0]], Z)) == ()


def test_snf_classic_example():
    # oracle: d1 = gcd of all entries = 2, d1*d2 = |det| = |2*8 - 4*6| = 8
    m = dense([[2, 4], [6, 8]], Z)
    assert smith_normal_form(m) == (2, 4)


def test_snf_diag_reorder_and_chain():
    assert smith_normal_form(dense([[6, 0], [0, 4]], Z)) == (2, 12)
    assert smith_normal_form(dense([[2, 0, 0], [0, 3, 0], [0, 0, 4]], Z)) == (1, 2, 12)


def test_snf_rectangular():
    assert smith_normal_form(dense([[2, 4, 6]], Z)) == (2,)
    assert smith_normal_form(dense([[2], [4], [6]], Z)) == (2,)


def test_snf_unimodular_invariance_property():
    rng = random.Random(20240817)
    for trial in range(25):
        nr = rng.randrange(1, 6)
        nc = rng.randrange(1, 6)
        rows = [[rng.randrange(-6, 7) for _ in range(nc)] for _ in range(nr)]
        base = smith_normal_form(dense(rows, Z))
        u = random_unimodular(nr, rng)
        v = random_unimodular(nc, rng)
        um = dense(u, Z).matmul(dense(rows, Z)).matmul(dense(v, Z))
        assert smith_normal_form(um) == base, f"trial {trial}"


def test_snf_sparse_dense_agree():
    rng = random.Random(99)
    for _ in range(10):
        rows = [[rng.randrange(-5, 6) for _ in range(70)] for _ in range(4)]
        m = dense(rows, Z)  # 70 cols forces the sparse path
        mt = m.transpose()  # 70 rows, 4 cols: also sparse path
        small = [[rng.randrange(-5, 6) for _ in range(4)] for _ in range(4)]
        assert smith_normal_form(m) == smith_normal_form(mt)
        assert int_snf([{j: v for j, v in enumerate(r) if v} for r in small], 4, 4) == \
            smith_normal_form(dense(small, Z))


def test_snf_over_zmod():
    # unit factors are kept (as over Z); factors equal to 0 mod m are dropped
    assert smith_normal_form(dense([[2, 0], [0, 1]], Z4)) == (1, 2)
    assert smith_normal_form(dense([[0, 0]], Z4)) == ()
    assert smith_normal_form(dense([[2, 0], [0, 2]], Z4)) == (2, 2)


def test_snf_over_field_counts_rank():
    assert smith_normal_form(dense([[1, 2], [2, 4]], Q)) == (1,)
    assert smith_normal_form(dense([[1, 1], [1, 0]], GF2)) == (1, 1)


# -- rank and kernels -------------------------------------------------------


def test_rank_over_fields():
    assert matrix_rank(dense([[1, 2], [2, 4]], Q)) == 1
    assert matrix_rank(dense([[1, 1], [1, 1]], GF2)) == 1
    assert matrix_rank(dense([[1, 1], [1, 2]], GF3)) == 2
    assert matrix_rank(dense([[Fraction(1, 2), 1], [1, 2]], Q)) == 1


def test_kernel_over_q():
    m = dense([[1, 2, 3], [2, 4, 6]], Q)
    ker = kernel_basis(m)
    assert len(ker) == 2
    for v in ker:
        for i in range(2):
            s = sum(m.entries.get((i, j), 0) * v.get(j, 0) for j in range(3))
            assert s == 0


def test_kernel_over_z_is_saturated():
    # kernel of [2  4] contains (2,-1); the primitive generator must be found
    ker = kernel_basis(dense([[2, 4]], Z))
    assert len(ker) == 1
    v = ker[0]
    vals = sorted(v.values())
    assert vals in ([-1, 2], [-2, 1]) or sorted(map(abs, vals)) == [1, 2]
    assert 2 * v.get(0, 0) + 4 * v.get(1, 0) == 0


def test_kernel_over_gf2():
    ker = kernel_basis(dense([[1, 1, 0], [0, 0, 1]], GF2))
    assert len(ker) == 1
    assert ker[0] == {0: 1, 1: 1}


def test_kernel_over_zmod():
    # over Z/4, kernel of multiplication by 2 is generated by 2
    ker = kernel_basis(dense([[2]], Z4))
    assert ker == [{0: 2}]


def test_solve_in_span():
    vecs = [{0: 2, 1: 0}, {0: 0, 1: 3}]
    sol = solve_in_span(vecs, {0: 4, 1: -3}, Z)
    assert sol == {0: 2, 1: -1}
    assert solve_in_span(vecs, {0: 1}, Z) is None  # 1 not in 2Z
    sol_q = solve_in_span(vecs, {0: 1}, Q)
    assert sol_q == {0: Fraction(1, 2)}
    sol2 = solve_in_span([{0: 1, 1: 1}, {0: 1, 1: 0}], {1: 1}, GF2)
    assert sol2 == {0: 1, 1: 1}


def test_int_echelon_membership_coords():
    ech = IntEchelon()
    ech.add_row({0: 2, 1: 1})
    ech.add_row({1: 3})
    assert ech.contains({0: 2, 1: 4})
    assert not ech.contains({0: 1})
    coeffs = ech.coords({0: 4, 1: 5})
    assert coeffs is not None
    rebuilt = {}
    for pc, q in coeffs.items():
        for k, v in ech.rows[pc].items():
            rebuilt[k] = rebuilt.get(k, 0) + q * v
    assert {k: v for k, v in rebuilt.items() if v} == {0: 4, 1: 5}


# -- quotient invariants ----------------------------------------------------


def test_quotient_free_and_torsion_over_z():
    # Z^2 / <(2,0)> = Z/2 + Z
    inv = quotient_invariants(2, [{0: 1}, {1: 1}], [{0: 2}], [0, 0], Z)
    assert inv.even == ModuleInvariants(free_rank=1, torsion=(2,))
    assert inv.odd.is_zero


def test_quotient_relation_outside_span():
    try:
        quotient_invariants(2, [{0: 1}], [{1: 1}], [0, 0], Z)
        assert False, "expected RelationOutsideSpanError"
    except RelationOutsideSpanError:
        pass


def test_quotient_parity_split():
    inv = quotient_invariants(2, [{0: 1}, {1: 1}], [{1: 2}], [0, 1], Z)
    assert inv.even == ModuleInvariants(free_rank=1)
    assert inv.odd == ModuleInvariants(free_rank=0, torsion=(2,))


def test_quotient_over_gf2_counts_dimension():
    inv = quotient_invariants(3, [{0: 1}, {1: 1}, {2: 1}], [{0: 1, 1: 1}], [0, 0, 0], GF2)
    assert inv.even == ModuleInvariants(free_rank=2)


def test_quotient_over_q():
    inv = quotient_invariants(2, [{0: Fraction(1, 2)}, {1: 2}], [{0: 3}], [0, 0], Q)
    assert inv.even == ModuleInvariants(free_rank=1)


def test_quotient_over_zmod_reports_z_invariants():
    # (Z/4)^2 modulo nothing: two torsion-4 summands
    inv = quotient_invariants(2, [{0: 1}, {1: 1}], [], [0, 0], Z4)
    assert inv.even == ModuleInvariants(free_rank=0, torsion=(4, 4))
    # quotient by 2*e0: Z/2 + Z/4
    inv2 = quotient_invariants(2, [{0: 1}, {1: 1}], [{0: 2}], [0, 0], Z4)
    assert inv2.even == ModuleInvariants(free_rank=0, torsion=(2, 4))


def test_quotient_with_ambient_moduli():
    # ambient Z + Z/4, quotient by (0, 2): Z + Z/2
    inv = quotient_invariants(2, [{0: 1}, {1: 1}], [{1: 2}], [0, 0], Z,
                              ambient_moduli=[0, 4])
    assert inv.even == ModuleInvariants(free_rank=1, torsion=(2,))


def test_direct_sum_invariants_chain():
    a = GradedInvariants(even=ModuleInvariants(1, (2,)))
    b = GradedInvariants(even=ModuleInvariants(0, (2, 4)), odd=ModuleInvariants(2))
    s = direct_sum_invariants([a, b])
    assert s.even == ModuleInvariants(1, (2, 2, 4))
    assert s.odd == ModuleInvariants(2)
    assert direct_sum_invariants([GradedInvariants(even=ModuleInvariants(0, (2,))),
                                  GradedInvariants(even=ModuleInvariants(0, (3,)))]).even == \
        ModuleInvariants(0, (6,))


# -- presentations ----------------------------------------------------------


def check_presentation_roundtrip(pres, ambient_rank, relations, dom, rng, moduli=None):
    """reduce must kill relations, fix generator reps, and be additive."""
    for r in relations:
        assert pres.reduce(r) == {}
    for t, g in enumerate(pres.generators):
        assert pres.reduce(g.rep) == {t: 1}, (t, g)
    for _ in range(10):
        v = {}
        w = {}
        for k in range(ambient_rank):
            if rng.random() < 0.5:
                v[k] = dom.reduce(rng.randrange(-4, 5))
            if rng.random() < 0.5:
                w[k] = dom.reduce(rng.randrange(-4, 5))
        v = {k: x for k, x in v.items() if not dom.is_zero(x)}
        w = {k: x for k, x in w.items() if not dom.is_zero(x)}
        rv, rw = pres.reduce(v), pres.reduce(w)
        s = dict(v)
        for k, x in w.items():
            nx = dom.add(s.get(k, dom.zero), x)
            if dom.is_zero(nx):
                s.pop(k, None)
            else:
                s[k] = nx
        rs = pres.reduce(s)
        # compare rv + rw against rs coordinatewise, modulo generator moduli
        for t in set(rv) | set(rw) | set(rs):
            mu = pres.generators[t].modulus
            lhs = rv.get(t, 0) + rw.get(t, 0)
            rhs = rs.get(t, 0)
            if dom.is_field:
                assert dom.is_zero(dom.sub(dom.add(rv.get(t, dom.zero), rw.get(t, dom.zero)),
                                           rs.get(t, dom.zero)))
            elif mu:
                assert (int(lhs) - int(rhs)) % mu == 0
            else:
                assert int(lhs) == int(rhs)


def test_presentation_z_torsion():
    rng = random.Random(7)
    rels = [{0: 2}, {1: 3, 2: 3}]
    pres = present_quotient(3, rels, [0, 0, 0], Z)
    inv = pres.invariants()
    # Z/2 + Z/3 + Z renormalises to the invariant factor chain (6)
    assert inv.even == ModuleInvariants(free_rank=1, torsion=(6,))
    check_presentation_roundtrip(pres, 3, rels, Z, rng)
    pres2 = present_quotient(2, [{0: 2}, {1: 2}], [0, 0], Z)
    assert pres2.invariants().even == ModuleInvariants(free_rank=0, torsion=(2, 2))


def test_presentation_field():
    rng = random.Random(8)
    rels = [{0: 1, 1: 1}]
    for dom in (Q, GF2, GF3):
        pres = present_quotient(3, [
            {k: dom.reduce(v) for k, v in r.items()} for r in rels
        ], [0, 0, 1], dom)
        inv = pres.invariants()
        assert inv.even == ModuleInvariants(free_rank=1)
        assert inv.odd == ModuleInvariants(free_rank=1)
        check_presentation_roundtrip(pres, 3, rels, dom, rng)


def test_presentation_zmod():
    rng = random.Random(9)
    rels = [{0: 2}]
    pres = present_quotient(2, rels, [0, 0], Z4)
    assert pres.invariants().even == ModuleInvariants(free_rank=0, torsion=(2, 4))
    check_presentation_roundtrip(pres, 2, rels, Z4, rng)


def test_presentation_random_consistency_with_quotient_invariants():
    rng = random.Random(20240818)
    for trial in range(20):
        n = rng.randrange(1, 6)
        parities = [rng.randrange(2) for _ in range(n)]
        rels = []
        for _ in range(rng.randrange(0, 4)):
            par = rng.randrange(2)
            coords = [i for i in range(n) if parities[i] == par]
            if not coords:
                continue
            r = {}
            for c in coords:
                if rng.random() < 0.7:
                    v = rng.randrange(-4, 5)
                    if v:
                        r[c] = v
            if r:
                rels.append(r)
        pres = present_quotient(n, rels, parities, Z)
        gens = [{i: 1} for i in range(n)]
        inv = quotient_invariants(n, gens, rels, parities, Z)
        assert pres.invariants() == inv, f"trial {trial}"
        check_presentation_roundtrip(pres, n, rels, Z, rng)


def test_invariants_strings():
    inv = GradedInvariants(even=ModuleInvariants(2, (2, 2)), odd=ModuleInvariants(0, (3,)))
    assert "free^2" in str(inv.even)
    assert str(ModuleInvariants()) == "0"
    assert inv.parity_flip().odd.free_rank == 2
