"""Tests for valuation-ring linear algebra: echelon forms, lattices,
homothety classes, and order computation by saturation."""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from schur_lattice import (Lattice, LatticeClass, NonIntegralInput,
                           RationalAtP, RationalFunctionOverFq, SchurModule,
                           Singular, class_distance, compute_order,
                           congruence_level, full_rank, hnf_dvr, lattice_dual,
                           lattice_intersection, lattice_sum, membership,
                           module_add_and_saturate, module_from_matrices,
                           relative_divisors, rho, smith_divisors,
                           standard_lattice)
from schur_lattice.dvr import (ExactEchelon, group_generator_matrices,
                               mat_mul, uniformizer_diagonal_matrices,
                               vectorize)

P2 = RationalAtP(2)
P3 = RationalAtP(3)


def fr(rows):
    return [tuple(Fraction(x) for x in row) for row in rows]


def fmat(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@st.composite
def rational_vectors(draw, m, count):
    vecs = []
    for _ in range(count):
        vecs.append(tuple(
            Fraction(draw(st.integers(-8, 8)), draw(st.integers(1, 4)))
            for _ in range(m)))
    return vecs


# ---------------------------------------------------------------------------
# echelon and normal forms
# ---------------------------------------------------------------------------

def test_hnf_identity():
    got = hnf_dvr(fr([[1, 0], [0, 1]]), P2)
    assert got.rows == fmat([[1, 0], [0, 1]])
    assert got.divisors == (0, 0)


def test_hnf_frozen_example():
    """Columns {(2,0),(0,2),(1,1)} span R(1,1) + 2R^2: divisors {0,1}."""
    got = hnf_dvr(fr([[2, 0], [0, 2], [1, 1]]), P2)
    assert got.divisors == (0, 1)
    assert got.rows == fmat([[1, 1], [0, 2]])


def test_hnf_duplicates_are_harmless():
    vs = fr([[2, 0], [0, 2], [1, 1]])
    assert hnf_dvr(vs + vs, P2) == hnf_dvr(vs, P2)


def test_hermite_pivots_differ_from_smith_divisors():
    """Pivot valuations of the echelon form are not elementary divisors."""
    vs = fr([[2, 1], [0, 2]])
    got = hnf_dvr(vs, P2)
    assert got.pivot_vals == (1, 1)
    assert got.divisors == (0, 2)
    assert smith_divisors(vs, P2) == (0, 2)


def test_hnf_empty_input():
    got = hnf_dvr([], P2)
    assert got.rows == ()
    assert got.divisors == ()


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_hnf_idempotent_and_span_preserving(data):
    vs = data.draw(rational_vectors(3, 4))
    got = hnf_dvr(vs, P2)
    # idempotence: canonicalizing a canonical basis changes nothing
    again = hnf_dvr(list(got.rows), P2)
    assert again.rows == got.rows
    assert again.divisors == got.divisors
    # span preservation, both directions
    ech = ExactEchelon(P2, 3)
    for r in got.rows:
        ech.insert(r)
    for v in vs:
        assert ech.member(v)
    ech2 = ExactEchelon(P2, 3)
    for v in vs:
        ech2.insert(v)
    for r in got.rows:
        assert ech2.member(r)


@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_hnf_laurent_matches_padic_shape(data):
    """The echelon engine is generic over the scalar backend."""
    spec = RationalFunctionOverFq(2)
    t = spec.uniformizer()
    one = spec.one()
    zero = spec.zero()
    scalars = [zero, one, t, t * t, one + t]
    vs = [tuple(scalars[data.draw(st.integers(0, 4))] for _ in range(2))
          for _ in range(3)]
    assume(any(not spec.is_zero(x) for v in vs for x in v))
    got = hnf_dvr(vs, spec)
    # pivot entries are uniformizer powers
    for r, pv in zip(got.rows, got.pivot_vals):
        lead = next(x for x in r if not spec.is_zero(x))
        assert lead == t ** pv


# ---------------------------------------------------------------------------
# lattices and homothety classes
# ---------------------------------------------------------------------------

def test_lattice_rejects_rank_deficit():
    with pytest.raises(Singular):
        Lattice.from_vectors(P2, fr([[1, 1], [2, 2]]))


def test_lattice_membership():
    L = Lattice.from_vectors(P2, fr([[1, 1], [0, 2]]))
    assert L.member(fmat([[1, 1]])[0])
    assert L.member(fmat([[2, 0]])[0])          # 2(1,1) - (0,2)
    assert not L.member(fmat([[1, 0]])[0])


def test_lattice_dual_is_involution():
    L = Lattice.from_vectors(P2, fr([[2, 1], [0, 4]]))
    assert lattice_dual(lattice_dual(L)).key() == L.key()


def test_lattice_sum_intersection_frozen():
    a = Lattice.from_vectors(P2, fr([[2, 0], [0, 1]]))
    b = Lattice.from_vectors(P2, fr([[1, 0], [0, 2]]))
    s = lattice_sum(a, b)
    i = lattice_intersection(a, b)
    assert s.key() == standard_lattice(P2, 2).key()
    assert i.key() == Lattice.from_vectors(P2, fr([[2, 0], [0, 2]])).key()


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_lattice_modular_law_with_duality(data):
    """(A + B)^* = A^* cap B^* for random full-rank pairs."""
    rows_a = data.draw(rational_vectors(2, 2))
    rows_b = data.draw(rational_vectors(2, 2))

    def full(rows):
        try:
            return Lattice.from_vectors(P2, rows)
        except Singular:
            return None

    A, B = full(rows_a), full(rows_b)
    assume(A is not None and B is not None)
    lhs = lattice_dual(lattice_sum(A, B))
    rhs = lattice_intersection(lattice_dual(A), lattice_dual(B))
    assert lhs.key() == rhs.key()


def test_relative_divisors_and_distance():
    L0 = standard_lattice(P2, 2)
    L1 = Lattice.from_vectors(P2, fr([[2, 0], [0, 8]]))
    assert relative_divisors(L0, L1) == (1, 3)
    c0, c1 = LatticeClass(L0), LatticeClass(L1)
    assert class_distance(c0, c1) == 2   # (2,0),(0,8): gap 3-1
    assert class_distance(c0, c0) == 0


def test_lattice_class_canonical_representative():
    """[L] = [uL]: scaling by powers of the uniformizer does not change
    the canonical representative."""
    L = Lattice.from_vectors(P2, fr([[2, 1], [0, 4]]))
    c = LatticeClass(L)
    c_scaled = LatticeClass(L.scaled(3))
    assert c.key() == c_scaled.key()
    assert c == c_scaled
    # the canonical representative has minimum elementary divisor 0
    assert min(relative_divisors(standard_lattice(P2, 2), c.rep)) == 0


# ---------------------------------------------------------------------------
# matrix modules and saturation
# ---------------------------------------------------------------------------

def test_module_membership_frozen():
    mats = [fmat([[1, 0], [0, 1]]), fmat([[0, 2], [0, 0]])]
    M = module_from_matrices(P2, mats)
    assert M.rank == 2
    assert membership(M, fmat([[1, 2], [0, 1]]))
    assert not membership(M, fmat([[0, 1], [0, 0]]))


def test_saturate_identity_fixpoint():
    M = module_from_matrices(P2, [fmat([[1, 0], [0, 1]])])
    out = module_add_and_saturate(M, [fmat([[1, 0], [0, 1]])])
    assert out.rank == 1
    assert out.basis == M.basis


def test_saturate_matrix_units_full():
    units = []
    for i in range(2):
        for j in range(2):
            m = [[Fraction(0)] * 2 for _ in range(2)]
            m[i][j] = Fraction(1)
            units.append(fmat(m))
    M = module_from_matrices(P2, units[:1])
    out = module_add_and_saturate(M, units)
    assert full_rank(out)
    assert out.divisors == (0, 0, 0, 0)


def test_saturate_rejects_non_integral():
    M = module_from_matrices(P2, [fmat([[1, 0], [0, 1]])])
    with pytest.raises(NonIntegralInput):
        module_add_and_saturate(M, [fmat([[Fraction(1, 2), 0], [0, 1]])])


# ---------------------------------------------------------------------------
# compute_order
# ---------------------------------------------------------------------------

def lambda_m_order_2adic():
    """The order {X in R^{3x3} : X_12, X_32 in 2R} as explicit matrices."""
    mats = []
    for i in range(3):
        for j in range(3):
            m = [[Fraction(0)] * 3 for _ in range(3)]
            m[i][j] = Fraction(2) if (i, j) in ((0, 1), (2, 1)) else Fraction(1)
            mats.append(fmat(m))
    return mats


def test_compute_order_defining_rep():
    m = SchurModule(2, (1,))
    H = compute_order(m, P2)
    assert full_rank(H)
    assert H.divisors == (0, 0, 0, 0)
    assert congruence_level(H) == 0


def test_compute_order_frozen_2adic():
    """n=2, lambda=(2), p=2: rank 9, divisors (0^7, 1^2), and the module
    is exactly {X : X_12, X_32 in 2R} by mutual membership."""
    m = SchurModule(2, (2,))
    H = compute_order(m, P2, rng_seed=0)
    assert H.rank == 9
    assert H.divisors == (0,) * 7 + (1, 1)
    assert congruence_level(H) == 1
    target = lambda_m_order_2adic()
    for x in target:
        assert membership(H, x)
    T = module_from_matrices(P2, target)
    for b in H.basis:
        assert membership(T, b)
    # strict: E_12 itself is not in the order
    e12 = [[Fraction(0)] * 3 for _ in range(3)]
    e12[0][1] = Fraction(1)
    assert not membership(H, fmat(e12))
    assert H.certificate["exact"] is True
    assert H.certificate["label"] == "exact"


def test_compute_order_core_case_is_full():
    m = SchurModule(2, (2,))
    H = compute_order(m, P3, rng_seed=0)
    assert full_rank(H)
    assert set(H.divisors) == {0}
    assert congruence_level(H) == 0
    assert H.certificate["method"] == "residue-full"


@pytest.mark.parametrize("seed", [1, 2])
def test_compute_order_seed_independent(seed):
    m = SchurModule(2, (2,))
    base = compute_order(m, P2, rng_seed=0)
    other = compute_order(m, P2, rng_seed=seed)
    assert base.basis == other.basis
    assert base.divisors == other.divisors


def test_compute_order_is_multiplicatively_closed():
    """The stabilized module is a ring: products of basis elements stay in."""
    m = SchurModule(2, (2,))
    H = compute_order(m, P2, rng_seed=0)
    for a in H.basis[:4]:
        for b in H.basis[-4:]:
            assert membership(H, mat_mul(a, b))


def test_group_only_span_is_strictly_smaller_2adic():
    """Unit-group images alone do not saturate the order: the uniformizer
    diagonals contribute new integral elements (divisor profile shrinks
    from (0^5,1^2,2^2) to (0^7,1^2))."""
    m = SchurModule(2, (2,))
    group_imgs = [rho(m, g, P2)
                  for g in group_generator_matrices(P2, 2, 1)]
    M0 = module_from_matrices(P2, group_imgs[:1])
    Mg = module_add_and_saturate(M0, group_imgs)
    assert Mg.rank == 9
    assert Mg.divisors == (0, 0, 0, 0, 0, 1, 1, 2, 2)
    pi_imgs = [rho(m, g, P2)
               for g in uniformizer_diagonal_matrices(P2, 2)]
    Mf = module_add_and_saturate(Mg, group_imgs + pi_imgs)
    assert Mf.divisors == (0,) * 7 + (1, 1)


def test_compute_order_laurent_certificate():
    spec = RationalFunctionOverFq(2)
    m = SchurModule(2, (2,))
    H = compute_order(m, spec, level=1, trials=8, rng_seed=0)
    assert H.rank == 7
    assert not full_rank(H)
    cert = H.certificate
    assert cert["exact"] is False
    assert cert["label"] == "certified at level=1, trials=8"
    assert cert["trials_passed"] == 8


def test_echelon_member_rejects_sharper_valuation():
    ech = ExactEchelon(P2, 2)
    ech.insert((Fraction(2), Fraction(0)))
    assert ech.member((Fraction(4), Fraction(0)))
    assert not ech.member((Fraction(1), Fraction(0)))


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_echelon_insert_reports_growth(data):
    """insert returns True exactly when the span strictly grows."""
    vs = data.draw(rational_vectors(3, 5))
    ech = ExactEchelon(P2, 3)
    for v in vs:
        before = ech.member(v)
        grew = ech.insert(v)
        assert grew == (not before)
