"""Structure-constant Lie superalgebras, chains, H2 and central extensions.

Expected values are hand derivations on algebras small enough to work
out by hand; several pin down sign and coefficient conventions of the
boundary maps (notably the factor 3 on odd cubes).
"""

from fractions import Fraction

import pytest

from uce_workbench.domains import CoefficientDomain, Q, Z
from uce_workbench.exactlin import GradedInvariants, ModuleInvariants
from uce_workbench.liesuper import (
    ChainComplex,
    LieSuperAlgebra,
    LieSuperAlgebraError,
    NotPerfectError,
    ce_h2,
    extension_from_cocycle,
    uce,
    validate_lie_superalgebra,
)

GF2 = CoefficientDomain.prime_field(2)
GF3 = CoefficientDomain.prime_field(3)
Z4 = CoefficientDomain.integers_mod(4)


def inv(even_free=0, even_tor=(), odd_free=0, odd_tor=()):
    return GradedInvariants(even=ModuleInvariants(even_free, tuple(even_tor)),
                            odd=ModuleInvariants(odd_free, tuple(odd_tor)))


def pairs_table(dom, entries):
    """entries: (i, j) -> {k: int}; fills the reverse brackets by parity signs."""
    out = {}
    for (i, j), vec in entries.items():
        out[(i, j)] = {k: dom.reduce(v) for k, v in vec.items()}
    return out


def make_sl2(dom):
    # e, f, h with [e,f] = h, [h,e] = 2e, [h,f] = -2f
    br = pairs_table(dom, {
        (0, 1): {2: 1}, (1, 0): {2: -1},
        (2, 0): {0: 2}, (0, 2): {0: -2},
        (2, 1): {1: -2}, (1, 2): {1: 2},
    })
    return LieSuperAlgebra(domain=dom, names=["e", "f", "h"], parity=(0, 0, 0),
                           brackets=br, label="sl2")


def make_so3(dom):
    # [x,y] = z, [y,z] = x, [z,x] = y
    br = pairs_table(dom, {
        (0, 1): {2: 1}, (1, 0): {2: -1},
        (1, 2): {0: 1}, (2, 1): {0: -1},
        (2, 0): {1: 1}, (0, 2): {1: -1},
    })
    return LieSuperAlgebra(domain=dom, names=["x", "y", "z"], parity=(0, 0, 0),
                           brackets=br, label="so3")


def make_abelian(dom, parities):
    names = [f"a{i}" for i in range(len(parities))]
    return LieSuperAlgebra(domain=dom, names=names, parity=tuple(parities),
                           brackets={}, label="abelian")


def make_super_heisenberg(dom):
    # one odd e with [e,e] = h, h central
    br = pairs_table(dom, {(0, 0): {1: 1}})
    return LieSuperAlgebra(domain=dom, names=["e", "h"], parity=(1, 0),
                           brackets=br, label="sheis")


def make_osp12(dom):
    # even e, h, f as in sl2; odd u, v with [h,u] = u, [h,v] = -v,
    # [e,v] = -u, [f,u] = -v, [u,u] = 2e, [v,v] = -2f, [u,v] = h
    br = pairs_table(dom, {
        (0, 1): {2: 1}, (1, 0): {2: -1},
        (2, 0): {0: 2}, (0, 2): {0: -2},
        (2, 1): {1: -2}, (1, 2): {1: 2},
        (2, 3): {3: 1}, (3, 2): {3: -1},
        (2, 4): {4: -1}, (4, 2): {4: 1},
        (0, 4): {3: -1}, (4, 0): {3: 1},
        (1, 3): {4: -1}, (3, 1): {4: 1},
        (3, 3): {0: 2},
        (4, 4): {1: -2},
        (3, 4): {2: 1}, (4, 3): {2: 1},
    })
    return LieSuperAlgebra(domain=dom, names=["e", "f", "h", "u", "v"],
                           parity=(0, 0, 0, 1, 1), brackets=br, label="osp12")


# ---------------------------------------------------------------------------
# validation


def test_validate_accepts_small_algebras():
    for L in (make_sl2(Q), make_sl2(Z), make_so3(Z), make_so3(GF2),
              make_super_heisenberg(Z), make_abelian(Q, (0, 1)),
              make_osp12(Q), make_osp12(Z)):
        validate_lie_superalgebra(L)


def test_validate_rejects_broken_antisymmetry():
    L = make_so3(Z)
    L.brackets[(0, 2)] = {1: 1}  # should be -y
    with pytest.raises(LieSuperAlgebraError, match="antisymmetry"):
        validate_lie_superalgebra(L)


def test_validate_rejects_even_self_bracket():
    br = {(0, 0): {1: 1}}
    L = LieSuperAlgebra(domain=Z, names=["a", "b"], parity=(0, 0), brackets=br)
    with pytest.raises(LieSuperAlgebraError, match="x,x"):
        validate_lie_superalgebra(L)


def test_validate_rejects_parity_breaking_bracket():
    br = {(0, 1): {0: 1}, (1, 0): {0: -1}}  # [even, odd] landing on even
    L = LieSuperAlgebra(domain=Z, names=["a", "b"], parity=(0, 1), brackets=br)
    with pytest.raises(LieSuperAlgebraError, match="homogeneous"):
        validate_lie_superalgebra(L)


def test_validate_rejects_broken_jacobi():
    # [x,y] = z, [x,z] = x: then [[x,y],z] - [[x,z],y] + [[y,z],x] = -z
    br = pairs_table(Z, {
        (0, 1): {2: 1}, (1, 0): {2: -1},
        (0, 2): {0: 1}, (2, 0): {0: -1},
    })
    L = LieSuperAlgebra(domain=Z, names=["x", "y", "z"], parity=(0, 0, 0), brackets=br)
    with pytest.raises(LieSuperAlgebraError, match="Jacobi"):
        validate_lie_superalgebra(L)


def test_validate_rejects_odd_cube_over_gf3():
    # over GF(3) the Jacobi identity at (e,e,e) degenerates to 3[[e,e],e] = 0,
    # so [x,[x,x]] = 0 must be enforced separately
    br = pairs_table(GF3, {
        (0, 0): {2: 1},              # [e,e] = h
        (0, 2): {1: 1}, (2, 0): {1: -1},  # [e,h] = f
    })
    L = LieSuperAlgebra(domain=GF3, names=["e", "f", "h"], parity=(1, 1, 0), brackets=br)
    with pytest.raises(LieSuperAlgebraError, match="x,\\[x,x\\]"):
        validate_lie_superalgebra(L)


def test_validate_rejects_moduli_breaking_bracket():
    # a of order 2 and b of order 3 force [a,b] = 0
    br = pairs_table(Z, {(0, 1): {2: 1}, (1, 0): {2: -1}})
    L = LieSuperAlgebra(domain=Z, names=["a", "b", "c"], parity=(0, 0, 0),
                        brackets=br, moduli=(2, 3, 0))
    with pytest.raises(LieSuperAlgebraError, match="moduli"):
        validate_lie_superalgebra(L)


def test_validate_accepts_torsion_action():
    # [h,x] = x with x of order 2 is consistent
    br = pairs_table(Z, {(0, 1): {1: 1}, (1, 0): {1: -1}})
    L = LieSuperAlgebra(domain=Z, names=["h", "x"], parity=(0, 0),
                        brackets=br, moduli=(0, 2))
    validate_lie_superalgebra(L)


# ---------------------------------------------------------------------------
# chains


def test_chain_symbols_include_odd_divided_powers():
    L = make_super_heisenberg(Z)
    chain = ChainComplex(L)
    assert (0, 0) in chain.pair_index            # e^e for odd e
    assert (1, 1) not in chain.pair_index        # h^h excluded for even h
    assert (0, 0, 0) in chain.triples
    assert (0, 0, 1) in chain.triples
    assert (0, 1, 1) not in chain.triples        # repeat at the even slot


def test_chain_wedge_swap_signs():
    L = make_osp12(Q)
    chain = ChainComplex(L)
    # even-even swap picks up -1, odd-odd swap +1
    n, s = chain.wedge_coord(1, 0)
    assert (n, s) == (chain.pair_index[(0, 1)], -1)
    n, s = chain.wedge_coord(4, 3)
    assert (n, s) == (chain.pair_index[(3, 4)], 1)
    assert chain.wedge_coord(2, 2) is None
    assert chain.wedge_coord(3, 3) == (chain.pair_index[(3, 3)], 1)


def test_chain_composite_check_catches_fake_tables():
    br = pairs_table(Z, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    L = LieSuperAlgebra(domain=Z, names=["x", "y", "z"], parity=(0, 0, 0), brackets=br)
    with pytest.raises(LieSuperAlgebraError, match="d2 . d3"):
        ChainComplex(L)


def test_odd_cube_boundary_coefficient_three():
    # d3(e^e^e) = 3[e,e]^e = -3 e^h for the super Heisenberg algebra
    L = make_super_heisenberg(Z)
    chain = ChainComplex(L)
    t = chain.triples.index((0, 0, 0))
    eh = chain.pair_index[(0, 1)]
    assert chain.d3_cols[t] == {eh: -3}


# ---------------------------------------------------------------------------
# second homology, hand values


def test_h2_abelian_even_line_is_zero():
    assert ce_h2(make_abelian(Z, (0,))).is_zero


def test_h2_abelian_even_plane_is_free_rank_one():
    assert ce_h2(make_abelian(Z, (0, 0))) == inv(even_free=1)
    assert ce_h2(make_abelian(Q, (0, 0))) == inv(even_free=1)


def test_h2_abelian_odd_line_divided_square():
    # e^e is an even chain symbol and survives: H2 has even free rank 1
    assert ce_h2(make_abelian(Q, (1,))) == inv(even_free=1)
    assert ce_h2(make_abelian(Z, (1,))) == inv(even_free=1)


def test_h2_sl2_vanishes_over_q_and_z():
    assert ce_h2(make_sl2(Q)).is_zero
    assert ce_h2(make_sl2(Z)).is_zero


def test_h2_sl2_over_gf2_sees_degenerate_brackets():
    # [h,e] = [h,f] = 0 mod 2, d2 has rank 1, d3 = 0: dim H2 = 2, all even
    assert ce_h2(make_sl2(GF2)) == inv(even_free=2)


def test_h2_super_heisenberg_triple_torsion():
    # the only 3-boundary is 3 e^h, so H2 = Z/3 in odd parity over Z,
    # vanishes over Q, and is one-dimensional over GF(3)
    assert ce_h2(make_super_heisenberg(Z)) == inv(odd_tor=(3,))
    assert ce_h2(make_super_heisenberg(Q)).is_zero
    assert ce_h2(make_super_heisenberg(GF3)) == inv(odd_free=1)
    assert ce_h2(make_super_heisenberg(GF2)).is_zero


def test_h2_with_ambient_torsion_generator():
    br = pairs_table(Z, {(0, 1): {1: 1}, (1, 0): {1: -1}})
    L = LieSuperAlgebra(domain=Z, names=["h", "x"], parity=(0, 0),
                        brackets=br, moduli=(0, 2))
    assert ce_h2(L).is_zero


def test_h2_abelian_plane_over_z4():
    # the single wedge symbol generates a copy of Z/4
    assert ce_h2(make_abelian(Z4, (0, 0))) == inv(even_tor=(4,))


def test_h2_osp12_vanishes_over_q():
    assert ce_h2(make_osp12(Q)).is_zero


# ---------------------------------------------------------------------------
# universal central extensions


def test_uce_requires_perfect():
    with pytest.raises(NotPerfectError):
        uce(make_abelian(Q, (0, 0)))
    # sl2 over Z is not perfect: brackets span only <h, 2e, 2f>
    assert not make_sl2(Z).is_perfect()
    with pytest.raises(NotPerfectError):
        uce(make_sl2(Z))


def test_uce_sl2_q_is_isomorphism():
    ext = uce(make_sl2(Q))
    assert ext.total.rank == 3
    assert ext.kernel_generators == []
    assert ext.kernel_invariants().is_zero
    # the projection hits a basis, so it is onto
    assert ext.total.is_perfect()


def test_uce_so3_z_is_isomorphism():
    L = make_so3(Z)
    assert L.is_perfect()
    ext = uce(L)
    assert ext.total.rank == 3
    assert ext.total.moduli is None
    assert ext.kernel_invariants().is_zero


def test_uce_so3_gf2():
    ext = uce(make_so3(GF2))
    assert ext.total.rank == 3
    assert ext.kernel_invariants().is_zero


def test_uce_sl2_gf3():
    ext = uce(make_sl2(GF3))
    assert ext.total.rank == 3
    assert ext.kernel_invariants().is_zero


def test_uce_osp12_q_trivial_kernel():
    ext = uce(make_osp12(Q))
    assert ext.total.rank == 5
    assert ext.kernel_invariants().is_zero
    assert ext.total.parity.count(1) == 2


def test_uce_projection_and_wedge_classes():
    L = make_so3(Q)
    ext = uce(L)
    # projections of the three classes are the three bracket values
    imgs = sorted(tuple(sorted(c.items())) for c in ext.projection_cols)
    assert len(imgs) == 3
    one = Fraction(1)
    cls = ext.class_of_wedge({0: one}, {1: one})
    assert len(cls) == 1
    # bracket of lifted classes projects onto the base bracket
    for p in range(3):
        for q in range(3):
            if p == q:
                continue
            got = ext.project(ext.total.bracket({p: one}, {q: one}))
            want = L.bracket(ext.projection_cols[p], ext.projection_cols[q])
            assert got == want


def test_uce_h2_of_total_vanishes():
    for L in (make_so3(Z), make_sl2(Q), make_osp12(Q)):
        ext = uce(L)
        assert ce_h2(ext.total).is_zero


# ---------------------------------------------------------------------------
# cocycle extensions


def test_cocycle_extension_heisenberg():
    L = make_abelian(Q, (0, 0))
    psi = {(0, 1): {0: Fraction(1)}, (1, 0): {0: Fraction(-1)}}
    ext = extension_from_cocycle(L, psi, w_parities=(0,))
    assert ext.total.rank == 3
    assert ext.kernel_invariants() == inv(even_free=1)
    assert ext.total.bracket({0: Fraction(1)}, {1: Fraction(1)}) == {2: Fraction(1)}
    validate_lie_superalgebra(ext.total)


def test_cocycle_extension_rejects_non_cocycle():
    # so3 plus a central t; pairing x with t violates the cocycle identity
    br = pairs_table(Q, {
        (0, 1): {2: 1}, (1, 0): {2: -1},
        (1, 2): {0: 1}, (2, 1): {0: -1},
        (2, 0): {1: 1}, (0, 2): {1: -1},
    })
    L = LieSuperAlgebra(domain=Q, names=["x", "y", "z", "t"], parity=(0, 0, 0, 0),
                        brackets=br)
    validate_lie_superalgebra(L)
    psi = {(0, 3): {0: Fraction(1)}, (3, 0): {0: Fraction(-1)}}
    with pytest.raises(LieSuperAlgebraError, match="Jacobi"):
        extension_from_cocycle(L, psi, w_parities=(0,))


def test_cocycle_extension_torsion_center():
    ext = extension_from_cocycle(make_so3(Z), {}, w_parities=(0,), w_moduli=(2,))
    assert ext.total.moduli == (0, 0, 0, 2)
    validate_lie_superalgebra(ext.total)
    assert ext.kernel_invariants() == inv(even_tor=(2,))


def test_cocycle_extension_zero_psi_splits():
    L = make_sl2(Q)
    ext = extension_from_cocycle(L, {}, w_parities=(1,))
    assert ext.kernel_invariants() == inv(odd_free=1)
    # the copy of L inside the total closes under the bracket
    for (p, q), bv in L.brackets.items():
        assert ext.total.bracket({p: Fraction(1)}, {q: Fraction(1)}) == bv
