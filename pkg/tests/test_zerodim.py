"""Zero-dimensional toolkit: quotient bases, maximal-ideal extraction,
primitive elements with coordinate recovery, root-exponent bookkeeping.

Nontrivial expected values are derived next to the literal: eliminants of
split ideals factor into the minimal polynomials of the linear form on each
Galois orbit, so the expected factor lists can be written down from the
explicit roots.
"""

import random
from fractions import Fraction

import pytest

from normpit.fields import GFp, QQ
from normpit.groebner import Ideal, reduce
from normpit.polys import GREVLEX, MPoly, partial_derivative
from normpit.zerodim import (
    ExtendFieldError, MaximalIdeal, SeparabilityError, extract_maximal,
    min_root_exponent, primitive_element, quotient_basis,
)

Q = QQ()
F5 = GFp(5)
F7 = GFp(7)


def qpoly(*names):
    return [MPoly.var(Q, names, n) for n in names]


def con(F, names, n):
    return MPoly.from_int(F, names, n)


def fmt_gb(m):
    return [g.fmt() for g in m.gb.polys]


def ints(K, c):
    """Direction tuple as plain integers for literal comparison."""
    return tuple(int(v) if not isinstance(v, Fraction) else v for v in c)


def _rand_coeff(F, rng):
    return F.from_int(rng.randint(-6, 6))


def _rand_zero_dim(F, rng, names, maxdeg=2):
    """Triangular-monic generators: gen i is X_i^d plus a tail supported on
    X_1..X_i with X_i-degree < d, so the quotient is always finite."""
    gens = []
    for i, nm in enumerate(names):
        d = rng.randint(1, maxdeg)
        terms = {}
        for _ in range(rng.randint(0, 3)):
            e = [0] * len(names)
            for j in range(i + 1):
                e[j] = rng.randint(0, maxdeg - 1)
            e[i] = min(e[i], d - 1)
            c = _rand_coeff(F, rng)
            if not F.is_zero(c):
                terms[tuple(e)] = c
        tail = MPoly(F, names, terms)
        gens.append(MPoly.var(F, names, nm) ** d + tail)
    return Ideal(gens)


def assert_contains(m, I, order=GREVLEX):
    for g in I.nonzero_gens():
        assert reduce(g, m.gb.polys, order).remainder.is_zero()


# ---------------------------------------------------------------------------
# min_root_exponent


def test_min_root_exponent_values():
    assert min_root_exponent(12, 2) == 2
    assert min_root_exponent(7, 2) == 0
    assert min_root_exponent(8 * 5, 2) == 3
    assert min_root_exponent(27, 3) == 3
    assert min_root_exponent(1, 5) == 0


def test_min_root_exponent_rejects_bad_args():
    with pytest.raises(ValueError):
        min_root_exponent(0, 2)
    with pytest.raises(ValueError):
        min_root_exponent(4, 1)


# ---------------------------------------------------------------------------
# quotient_basis


def test_quotient_basis_examples():
    x1, x2 = qpoly("X1", "X2")
    qb = quotient_basis(Ideal([x1 * x1 - con(Q, ("X1", "X2"), 1), x2]))
    assert qb.monomials == [(0, 0), (1, 0)]
    assert qb.dim == 2

    qb = quotient_basis(Ideal([x1, x2]))
    assert qb.monomials == [(0, 0)]
    assert qb.dim == 1


def test_quotient_basis_rejects_positive_dimension():
    x1, x2 = qpoly("X1", "X2")
    with pytest.raises(ValueError, match="dimension 1"):
        quotient_basis(Ideal([x1]))
    with pytest.raises(ValueError, match="dimension 2"):
        quotient_basis(Ideal([], field=Q, varnames=("X1", "X2")))


def test_quotient_basis_monomials_outside_lt():
    x1, x2 = qpoly("X1", "X2")
    w = ("X1", "X2")
    I = Ideal([x1 ** 3 - x2, x2 ** 2 - con(Q, w, 1)])
    qb = quotient_basis(I)
    assert qb.dim == 6
    lts = [g.lead_term(GREVLEX)[0] for g in I.groebner().polys]
    for e in qb.monomials:
        assert not any(all(x >= y for x, y in zip(e, le)) for le in lts)


def test_quotient_basis_degree_bound_random():
    rng = random.Random(20240817)
    for F in (F5, F7, Q):
        for _ in range(12):
            n = rng.randint(1, 3)
            names = tuple(f"X{i + 1}" for i in range(n))
            I = _rand_zero_dim(F, rng, names, maxdeg=3)
            qb = quotient_basis(I)
            d = max(int(g.degree()) for g in I.nonzero_gens())
            assert qb.dim == len(qb.monomials) <= d ** n


# ---------------------------------------------------------------------------
# extract_maximal


def test_extract_univariate_split():
    (x,) = qpoly("X1")
    out = extract_maximal(Ideal([x * x - con(Q, ("X1",), 1)]))
    assert [m.residue_degree for m in out] == [1, 1]
    assert fmt_gb(out[0]) == ["X1 + -1"]
    assert fmt_gb(out[1]) == ["X1 + 1"]
    for m in out:
        assert m.separable


def test_extract_irreducible_quadratic():
    (x,) = qpoly("X1")
    I = Ideal([x * x + con(Q, ("X1",), 1)])
    out = extract_maximal(I)
    assert len(out) == 1
    assert out[0].residue_degree == 2
    assert fmt_gb(out[0]) == ["X1^2 + 1"]
    assert_contains(out[0], I)


def test_extract_split_over_f5():
    F = F5
    x = MPoly.var(F, ("X1",), "X1")
    out = extract_maximal(Ideal([x * x + con(F, ("X1",), 1)]))
    # X^2 + 1 = (X + 2)(X + 3) over F_5
    assert [fmt_gb(m) for m in out] == [["X1 + 2"], ["X1 + 3"]]
    assert [m.residue_degree for m in out] == [1, 1]


def test_extract_two_component_sqrt2():
    # V = {(s, t) : s^2 = t^2 = 2} splits into the two conjugate pairs
    # t = s and t = -s, each with residue field Q(sqrt 2).
    x1, x2 = qpoly("X1", "X2")
    w = ("X1", "X2")
    I = Ideal([x1 * x1 - con(Q, w, 2), x2 * x2 - con(Q, w, 2)])
    out = extract_maximal(I)
    assert [m.residue_degree for m in out] == [2, 2]
    for m in out:
        assert_contains(m, I)
    # directions (1, 0) and (1, 1) collapse points; (1, 2) separates, with
    # X1 + 2X2 taking values {3s, -s, s, -3s}, eliminant (T^2-2)(T^2-18)
    assert all(ints(Q, m.direction) == (1, 2) for m in out)
    facs = sorted(m.eliminant_factor.fmt() for m in out)
    assert facs == ["T^2 + -18", "T^2 + -2"]


def test_extract_fat_point_needs_radical():
    # The square of the origin's ideal: no linear form can tell the scheme
    # apart from a length-1 point until the radical step collapses it.
    x1, x2 = qpoly("X1", "X2")
    out = extract_maximal(Ideal([x1 * x1, x1 * x2, x2 * x2]))
    assert len(out) == 1
    assert out[0].residue_degree == 1
    assert fmt_gb(out[0]) == ["X2", "X1"]


def test_extract_mixed_degrees_over_f7():
    F = F7
    names = ("X1", "X2")
    x1 = MPoly.var(F, names, "X1")
    x2 = MPoly.var(F, names, "X2")
    I = Ideal([x1 * x1 - con(F, names, 1), x2 * x2 - x1])
    # points: (1, 1), (1, -1), and the conjugate pair (6, ±sqrt 6); 6 is a
    # non-residue mod 7, so degrees are 1, 1, 2
    out = extract_maximal(I)
    assert sorted(m.residue_degree for m in out) == [1, 1, 2]
    assert sum(m.residue_degree for m in out) == quotient_basis(I).dim
    for m in out:
        assert_contains(m, I)
    assert all(ints(F, m.direction) == (1, 1) for m in out)


def test_extract_residue_rings_are_fields():
    """Inversion probe: nonzero residues generate the unit ideal."""
    rng = random.Random(11)
    F = F7
    names = ("X1", "X2")
    x1 = MPoly.var(F, names, "X1")
    x2 = MPoly.var(F, names, "X2")
    I = Ideal([x1 * x1 - con(F, names, 1), x2 * x2 - x1])
    for m in extract_maximal(I):
        qb = quotient_basis(m.ideal)
        for _ in range(8):
            terms = {e: F.from_int(rng.randrange(7)) for e in qb.monomials}
            f = MPoly(F, names, {e: c for e, c in terms.items()
                                 if not F.is_zero(c)})
            if f.is_zero():
                continue
            unit = Ideal(list(m.gb.polys) + [f]).groebner()
            assert [g.fmt() for g in unit.polys] == ["1"]


def test_extract_deterministic():
    x1, x2 = qpoly("X1", "X2")
    w = ("X1", "X2")
    gens = [x1 * x1 - con(Q, w, 2), x2 * x2 - con(Q, w, 2)]
    a = extract_maximal(Ideal(gens))
    b = extract_maximal(Ideal(gens))
    assert [fmt_gb(m) for m in a] == [fmt_gb(m) for m in b]
    assert [ints(Q, m.direction) for m in a] == \
        [ints(Q, m.direction) for m in b]


def test_extract_random_cover():
    rng = random.Random(20240818)
    for F in (F7, Q):
        for _ in range(6):
            n = rng.randint(1, 2)
            names = tuple(f"X{i + 1}" for i in range(n))
            I = _rand_zero_dim(F, rng, names, maxdeg=2)
            qb = quotient_basis(I)
            out = extract_maximal(I)
            assert out, "a zero-dimensional ideal has at least one point"
            assert sum(m.residue_degree for m in out) <= qb.dim
            for m in out:
                assert_contains(m, I)
                assert quotient_basis(m.ideal).dim == m.residue_degree


def test_extract_pairwise_comaximal():
    F = F7
    names = ("X1", "X2")
    x1 = MPoly.var(F, names, "X1")
    x2 = MPoly.var(F, names, "X2")
    out = extract_maximal(Ideal([x1 * x1 - con(F, names, 1),
                             x2 * x2 - x1]))
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            both = Ideal(list(out[i].gb.polys) + list(out[j].gb.polys))
            assert [g.fmt() for g in both.groebner().polys] == ["1"]


# ---------------------------------------------------------------------------
# primitive_element


def test_primitive_sqrt2_plus_sqrt3():
    x1, x2 = qpoly("X1", "X2")
    w = ("X1", "X2")
    I = Ideal([x1 * x1 - con(Q, w, 2), x2 * x2 - con(Q, w, 3)])
    (m,) = extract_maximal(I)
    assert m.residue_degree == 4
    pe = primitive_element(I, m)
    # (1, 0) is rejected: sqrt 2 alone has degree 2 < 4; (1, 1) wins
    assert ints(Q, pe.direction) == (1, 1)
    (t,) = qpoly("T")
    assert pe.beta_minpoly == \
        t ** 4 - (t * t).scale(Q.from_int(10)) + con(Q, ("T",), 1)
    assert len(pe.recovery) == 3


def test_primitive_recovery_identity():
    x1, x2 = qpoly("X1", "X2")
    w = ("X1", "X2")
    I = Ideal([x1 * x1 - con(Q, w, 2), x2 * x2 - con(Q, w, 3)])
    (m,) = extract_maximal(I)
    pe = primitive_element(I, m)
    beta = sum((MPoly.var(Q, I.vars, nm).scale(ci)
                for nm, ci in zip(I.vars, pe.direction)),
               MPoly.zero(Q, I.vars))
    p0 = pe.recovery[0].subst_polys([beta])
    assert not reduce(p0, m.gb.polys).remainder.is_zero()
    for i, nm in enumerate(I.vars):
        xi = MPoly.var(Q, I.vars, nm)
        lhs = xi * p0 - pe.recovery[i + 1].subst_polys([beta])
        assert reduce(lhs, m.gb.polys).remainder.is_zero()


def test_primitive_degree_bound():
    x1, x2 = qpoly("X1", "X2")
    w = ("X1", "X2")
    I = Ideal([x1 * x1 - con(Q, w, 2), x2 * x2 - con(Q, w, 3)])
    (m,) = extract_maximal(I)
    pe = primitive_element(I, m)
    d = max(int(g.degree()) for g in I.nonzero_gens())
    n = len(I.vars)
    for p in pe.recovery:
        assert p.is_zero() or int(p.degree()) <= d ** n


def test_primitive_single_variable():
    # one variable: the coordinate is already primitive, and the recovery
    # pair represents the identity map on the quotient
    (x,) = qpoly("X1")
    I = Ideal([x * x - con(Q, ("X1",), 2)])
    (m,) = extract_maximal(I)
    pe = primitive_element(I, m)
    assert ints(Q, pe.direction) == (1,)
    (t,) = qpoly("T")
    assert pe.beta_minpoly == t * t - con(Q, ("T",), 2)
    p0_at = pe.recovery[0].subst_polys([x])
    ident = x * p0_at - pe.recovery[1].subst_polys([x])
    assert reduce(ident, m.gb.polys).remainder.is_zero()


def test_primitive_over_f7_quadratic_point():
    F = F7
    names = ("X1", "X2")
    x1 = MPoly.var(F, names, "X1")
    x2 = MPoly.var(F, names, "X2")
    I = Ideal([x1 * x1 - con(F, names, 1), x2 * x2 - x1])
    for m in extract_maximal(I):
        pe = primitive_element(I, m)
        assert int(pe.beta_minpoly.degree()) == m.residue_degree


def test_primitive_requires_containment():
    x1, x2 = qpoly("X1", "X2")
    w = ("X1", "X2")
    I = Ideal([x1 * x1 - con(Q, w, 2), x2 * x2 - con(Q, w, 3)])
    (other,) = extract_maximal(Ideal([x1, x2]))
    with pytest.raises(ValueError, match="does not contain"):
        primitive_element(I, other)


def test_primitive_inseparable_flag_raises():
    F = GFp(2)
    x = MPoly.var(F, ("X1",), "X1")
    I = Ideal([x * x + x + con(F, ("X1",), 1)])
    gb = I.groebner()
    m = MaximalIdeal(gb, 12, separable=False)
    with pytest.raises(SeparabilityError) as err:
        primitive_element(I, m)
    assert err.value.required_exponent == 2


def test_primitive_random_roundtrip():
    rng = random.Random(77)
    for F in (F7, Q):
        for _ in range(4):
            n = rng.randint(1, 2)
            names = tuple(f"X{i + 1}" for i in range(n))
            I = _rand_zero_dim(F, rng, names, maxdeg=2)
            for m in extract_maximal(I):
                pe = primitive_element(I, m)
                assert int(pe.beta_minpoly.degree()) == m.residue_degree
                gd = partial_derivative(pe.beta_minpoly,
                                        pe.beta_minpoly.vars[0])
                assert int(pe.beta_minpoly.gcd(gd).degree()) == 0
