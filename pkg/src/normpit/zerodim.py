"""Zero-dimensional ideal toolkit: quotient-algebra bases, extraction of all
maximal ideals through a separating linear form, quantitative primitive
elements with explicit coordinate-recovery polynomials, and root-extension
bookkeeping for inseparable residue fields.

Directions are enumerated deterministically along the moment curve
(1, t, t^2, ...) before general tuples, so the first valid direction is
canonical and results are reproducible.
"""

import itertools

from .fields import FnField
from .groebner import (
    Ideal, _clear_denominators, _default_znames, _fresh_names, eliminate,
    krull_dimension, reduce,
)
from .polys import GREVLEX, MPoly, factor_univariate, partial_derivative


class SeparabilityError(Exception):
    """Residue field inseparable over the coefficient field; carries the
    root exponent the caller must lift coefficients by before retrying."""

    def __init__(self, required_exponent):
        self.required_exponent = required_exponent
        super().__init__(
            f"inseparable residue field; lift the coefficient field by "
            f"root exponent {required_exponent} first")


class ExtendFieldError(Exception):
    """The deterministic direction pool ran dry (finite coefficient field
    too small to separate the points)."""


class QuotientBasis:
    """Standard monomials of K[X]/I under a fixed order."""

    def __init__(self, ideal, monomials, dim):
        self.ideal = ideal
        self.monomials = monomials
        self.dim = dim


class MaximalIdeal:
    """A maximal ideal containing the input, with provenance.

    direction and eliminant_factor record the cut: the residue field is
    generated by beta = sum(direction[i] * X_i) whose minimal polynomial
    is eliminant_factor.
    """

    def __init__(self, gb, residue_degree, separable,
                 direction=None, eliminant_factor=None):
        self.gb = gb
        self.residue_degree = residue_degree
        self.separable = separable
        self.direction = direction
        self.eliminant_factor = eliminant_factor

    @property
    def ideal(self):
        I = Ideal(list(self.gb.polys), self.gb.field, self.gb.vars)
        I._gb_cache[(self.gb.order.tag, False)] = self.gb
        return I

    def __repr__(self):
        return (f"MaximalIdeal(degree={self.residue_degree}, "
                f"gb={[g.fmt() for g in self.gb.polys]})")


class PrimitiveElementData:
    """beta = sum c_i alpha_i generates the residue field; coordinates come
    back as alpha_i = recovery[i](beta) / recovery[0](beta)."""

    def __init__(self, direction, beta_minpoly, recovery):
        self.direction = direction
        self.beta_minpoly = beta_minpoly
        self.recovery = recovery


def min_root_exponent(ext_degree, p):
    """Largest e with p^e dividing ext_degree."""
    if p < 2:
        raise ValueError("p must be a prime")
    if ext_degree < 1:
        raise ValueError("extension degree must be positive")
    e = 0
    while ext_degree % p == 0:
        ext_degree //= p
        e += 1
    return e


def quotient_basis(I, order=GREVLEX):
    """Standard monomial basis of K[X]/I for a zero-dimensional I."""
    dim = krull_dimension(I, order)
    if dim != 0:
        raise ValueError(f"ideal is not zero-dimensional (dimension {dim})")
    gb = I.groebner(order)
    lts = [g.lead_term(order)[0] for g in gb.polys]
    n = len(I.vars)
    caps = []
    for i in range(n):
        cap = None
        for e in lts:
            if e[i] and all(x == 0 for j, x in enumerate(e) if j != i):
                cap = e[i]
        assert cap is not None, "dimension zero guarantees pure powers"
        caps.append(cap)
    monos = []
    for e in itertools.product(*[range(c) for c in caps]):
        if not any(all(x >= y for x, y in zip(e, le)) for le in lts):
            monos.append(e)
    monos.sort(key=order.key)
    d = max([int(g.degree()) for g in I.nonzero_gens()] + [1])
    assert len(monos) <= d ** n, "quotient dimension exceeds degree bound"
    return QuotientBasis(I, monos, len(monos))


def _directions(K, n):
    """Deterministic direction pool: moment-curve points (1, t, t^2, ...)
    first, then arbitrary tuples when the field is finite."""
    seen = set()
    for t in K.element_sequence():
        c = []
        power = K.one
        for _ in range(n):
            c.append(power)
            power = K.mul(power, t)
        c = tuple(c)
        key = tuple(K.fmt(v) for v in c)
        if key not in seen:
            seen.add(key)
            yield c
    if K.char == 0:
        return
    elems = list(K.element_sequence())
    for c in itertools.product(elems, repeat=n):
        if all(K.is_zero(v) for v in c):
            continue
        key = tuple(K.fmt(v) for v in c)
        if key not in seen:
            seen.add(key)
            yield c


def _capped_directions(K, n, cap):
    """Over an infinite field only finitely many directions can be bad, so
    the cap turns an algorithm bug into a loud failure instead of a hang.
    Finite pools are walked to exhaustion."""
    pool = _directions(K, n)
    return itertools.islice(pool, cap) if K.char == 0 else pool


def _linear_form(K, varnames, c):
    acc = MPoly.zero(K, varnames)
    for name, ci in zip(varnames, c):
        acc = acc + MPoly.var(K, varnames, name).scale(ci)
    return acc


def _eliminant(gens, field, varnames, c, tvar):
    """Monic generator of (I + <t - sum c_i X_i>) cap K[t]."""
    ext = tuple(varnames) + (tvar,)
    t = MPoly.var(field, ext, tvar)
    big = [g.extend_vars(ext) for g in gens]
    big.append(t - _linear_form(field, ext, c))
    gb = eliminate(Ideal(big), list(varnames))
    assert len(gb.polys) == 1, "zero-dimensional eliminant must be principal"
    return gb.polys[0]


def _squarefree_closure(I, order):
    """I plus the squarefree part of its eliminant in each variable.

    For zero-dimensional I this is the radical: the enlarged ideal contains
    a squarefree univariate polynomial in every variable, which over a
    perfect coefficient field forces radicality, and squarefree parts of
    members of I vanish on V(I).
    """
    gens = list(I.nonzero_gens())
    extra = []
    for name in I.vars:
        others = [v for v in I.vars if v != name]
        gb = eliminate(I, others)
        assert len(gb.polys) == 1, "zero-dimensional eliminant is principal"
        h = gb.polys[0]
        facs = factor_univariate(h)
        if all(mult == 1 for _, mult in facs):
            continue
        sqf = MPoly.one(h.field, h.vars)
        for g, _ in facs:
            sqf = sqf * g
        extra.append(sqf.extend_vars(I.vars))
    if not extra:
        return I
    return Ideal(gens + extra, I.field, I.vars)


def extract_maximal(I, order=GREVLEX):
    """All maximal ideals containing a zero-dimensional I, in a canonical
    order (factor order of the first accepted direction's eliminant).

    A direction c is accepted when, for every irreducible factor g of the
    eliminant of sum(c_i X_i), adjoining g(sum c_i X_i) to the radical
    leaves a quotient of dimension exactly deg(g). That forces each
    candidate to be a maximal ideal with residue degree deg(g), and the
    factors together cover every point, so the list is complete and the
    outputs are pairwise comaximal.
    """
    qb = quotient_basis(I, order)
    K = I.field
    n = len(I.vars)
    tvar = _fresh_names("T", I.vars, 1)[0]
    J = _squarefree_closure(I, order)
    cap = 2 * n * qb.dim * qb.dim + 8
    for c in _capped_directions(K, n, cap):
        out = _extract_with_direction(J, qb.dim, c, tvar, order)
        if out is not None:
            return out
    raise ExtendFieldError(
        "no separating direction in the coefficient field; extend it")


def _extract_with_direction(J, full_dim, c, tvar, order):
    K = J.field
    h = _eliminant(J.nonzero_gens(), K, J.vars, c, tvar)
    lin = _linear_form(K, J.vars, c)
    results = []
    total = 0
    for g, _ in factor_univariate(h):
        if int(g.degree()) < 1:
            continue
        m_cand = Ideal(J.generators + [g.subst_polys([lin])],
                       J.field, J.vars)
        if quotient_basis(m_cand, order).dim != int(g.degree()):
            return None
        separable = not partial_derivative(g, tvar).is_zero()
        if not separable:
            raise SeparabilityError(
                min_root_exponent(int(g.degree()), K.char))
        results.append(MaximalIdeal(
            m_cand.groebner(order), int(g.degree()), separable,
            direction=c, eliminant_factor=g))
        total += int(g.degree())
    assert total <= full_dim, "residue degrees exceed quotient dimension"
    return results


def primitive_element(I, m, order=GREVLEX):
    """Quantitative primitive element of the residue field of m.

    Accepts the first direction whose linear form has minimal polynomial
    of full residue degree. The recovery polynomials come from the partial
    derivatives of the relation G(t, Z) satisfied by the generic linear
    form: G vanishes identically at t = sum Z_i alpha_i, hence so does
    alpha_i * dG/dt + dG/dZ_i, and specializing Z to the chosen direction
    gives alpha_i = recovery[i](beta) / recovery[0](beta).
    """
    K = I.field
    n = len(I.vars)
    mgb = m.gb
    for g in I.nonzero_gens():
        if not reduce(g, mgb.polys, order).remainder.is_zero():
            raise ValueError("maximal ideal does not contain the input ideal")
    if not m.separable:
        raise SeparabilityError(min_root_exponent(m.residue_degree, K.char))
    r = m.residue_degree
    tvar = _fresh_names("T", I.vars, 1)[0]
    cap = 2 * n * r * r + 8
    chosen = None
    minpoly = None
    for c in _capped_directions(K, n, cap):
        g_c = _eliminant(mgb.polys, K, I.vars, c, tvar)
        if int(g_c.degree()) == r:
            chosen = c
            minpoly = g_c
            break
    if chosen is None:
        raise ExtendFieldError(
            "no primitive direction in the coefficient field; extend it")
    G, znames = _generic_relation(mgb, K, I.vars, tvar)
    assign = dict(zip(znames, chosen))
    g_at_c = G.subst_vars(assign).restrict_vars((tvar,))
    assert int(g_at_c.degree()) == r, "generic relation degenerated"
    recovery = [partial_derivative(G, tvar).subst_vars(assign)
                .restrict_vars((tvar,))]
    for zn in znames:
        pi = -partial_derivative(G, zn).subst_vars(assign)
        recovery.append(pi.restrict_vars((tvar,)))
    lin = _linear_form(K, I.vars, chosen)
    p0_on_beta = recovery[0].subst_polys([lin])
    assert not reduce(p0_on_beta, mgb.polys, order).remainder.is_zero(), \
        "denominator polynomial vanishes at the primitive element"
    for i, name in enumerate(I.vars):
        xi = MPoly.var(K, I.vars, name)
        ident = xi * p0_on_beta - recovery[i + 1].subst_polys([lin])
        assert reduce(ident, mgb.polys, order).remainder.is_zero(), \
            "coordinate recovery identity failed"
    return PrimitiveElementData(chosen, minpoly, recovery)


def _generic_relation(mgb, K, varnames, tvar):
    """Vanishing polynomial G(t, Z) of the generic linear form.

    Z_1..Z_n are adjoined to the coefficient field as transcendentals, the
    minimal polynomial of sum Z_i X_i is computed by elimination, and its
    denominator-free coefficients are flattened back into honest polynomial
    variables so partial derivatives in Z make sense.
    """
    n = len(varnames)
    if isinstance(K, FnField):
        znames = _default_znames(K.varnames, n)
        Kp = FnField(K.base, K.varnames + tuple(znames), K.root_exp)
        zoff = K.nvars

        def conv(cv):
            return Kp.promote(K, cv, list(range(K.nvars)))
    else:
        znames = _default_znames((), n)
        Kp = FnField(K, tuple(znames))
        zoff = 0

        def conv(cv):
            return Kp.from_base(cv)

    gens = [MPoly(Kp, g.vars, {e: conv(cv) for e, cv in g.terms.items()})
            for g in mgb.polys]
    zvals = [Kp.var(zoff + i) for i in range(n)]
    g = _eliminant(gens, Kp, varnames, zvals, tvar)
    cleared, _ = _clear_denominators(g)
    return _flatten_z(cleared, K, znames, zoff, tvar), tuple(znames)


def _flatten_z(g, K, znames, zoff, tvar):
    """Rewrite a univariate-in-t polynomial with denominator-free
    coefficients in K(.., Z) as an MPoly over K in (t, Z_1..Z_n)."""
    n = len(znames)
    piles = {}
    for e, cv in g.terms.items():
        assert len(cv.den) == 1 and not any(sum(k) for k in cv.den), \
            "coefficients must be denominator-free"
        for ye, b in cv.num.items():
            zpart = tuple(ye[zoff + i] for i in range(n))
            key = (e[0],) + zpart
            piles.setdefault(key, {})[tuple(ye[:zoff])] = b
    terms = {}
    for key, td in piles.items():
        val = K.make(td) if isinstance(K, FnField) else td.get((), K.zero)
        if not K.is_zero(val):
            terms[key] = val
    return MPoly(K, (tvar,) + tuple(znames), terms)
