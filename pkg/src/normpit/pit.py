"""Identity testing for sums of products of low-degree polynomials.

The engine decides whether an explicit sum of up to three products of
degree-bounded factors is the zero polynomial, and when it is not, exhibits
a field point where it evaluates to something nonzero, together with an
audit trail explaining how the point was found.

Everything runs through plane restrictions: substituting
X_i = a_{0,i} + a_{1,i}*Z1 + a_{2,i}*Z2 turns an n-variate question into a
bivariate one, and a well-chosen plane preserves nonzeroness.  Which planes
qualify is where the work lives.  normal_form classifies the circuit by how
its summands interact after exact factor-level rewriting; the easy classes
are settled by direct grid search; the remaining class is settled by
normalizing the plane curve cut out by one squarefree factor and certifying
a valuation inequality between the other two summands at a maximal ideal of
the normalization (SStarCertificate).

Black-box callers use hitting_set_main / hitting_set_inhom, which emit
point sets that contain a witness for every nonzero circuit of the class,
with sizes polynomial in n and d for fixed degree caps.
"""

import itertools
import math
import random
from collections import Counter
from fractions import Fraction

from .curves import CurveContext, ord_at, trager_normalize, valuation_witness
from .fields import ContextError, ExtensionField, FnField, GFp, QQ
from .groebner import (Ideal, ideal_member, ideal_quotient, krull_dimension,
                       reduce as poly_reduce, solve_linear)
from .polys import (GREVLEX, FactorizationUnsupported, MPoly,
                    factor_univariate, partial_derivative)
from .zerodim import (ExtendFieldError, SeparabilityError, extract_maximal,
                      quotient_basis)

__all__ = [
    "Circuit", "PlaneRestriction", "HittingSet", "NormalForm",
    "SStarCertificate", "CertifyResult", "UnsupportedCircuitError",
    "ResourceLimitError", "restrict", "check_restricted_separability",
    "normal_form", "bounded_degree_hitting_set", "boost_epsilon",
    "plane_family", "register_plane_provider", "certify_nonzero",
    "hitting_set_main", "hitting_set_inhom", "dehomogenize_points",
    "plane_parameter_names",
]


class UnsupportedCircuitError(ValueError):
    """The circuit falls outside the class this engine decides exactly."""


class ResourceLimitError(RuntimeError):
    """A certified search ran out of budget before completing.

    partial carries whatever was assembled (stage name, candidate tallies,
    per-reason rejection counts) so a caller can report or retry bigger.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = dict(partial or {})


def _same_field(a, b):
    return a is b or a == b


def _into(target, source, value):
    """Move a field element into a target field that contains the source."""
    if _same_field(target, source):
        return value
    if isinstance(target, ExtensionField) and target.base == source:
        return target.embed(value)
    if isinstance(target, FnField) and target.base == source:
        return target.from_base(value)
    raise ValueError("no embedding between these coordinate fields")


def _embed_poly(f, target):
    if _same_field(f.field, target):
        return f
    terms = {e: _into(target, f.field, c) for e, c in f.terms.items()}
    return MPoly(target, f.vars, terms)


def _is_homogeneous(f):
    degs = {sum(e) for e in f.terms}
    return len(degs) <= 1


def _eval_in(f, E, point):
    """Evaluate f at a point with coordinates in a field E containing f's
    coefficient field."""
    pows = [{0: E.one} for _ in point]

    def power(i, e):
        cache = pows[i]
        while e not in cache:
            top = max(cache)
            cache[top + 1] = E.mul(cache[top], point[i])
        return cache[e]

    acc = E.zero
    for exps, c in f.terms.items():
        t = _into(E, f.field, c)
        for i, e in enumerate(exps):
            if e:
                t = E.mul(t, power(i, e))
        acc = E.add(acc, t)
    return acc


# ---------------------------------------------------------------------------
# circuit model


class Circuit:
    """An explicit sum of products of polynomials over one field.

    summands is a sequence of factor sequences; the represented polynomial
    is sum_i prod_j summands[i][j].  Every factor must be a nonzero MPoly
    over `field` in one shared variable tuple.  delta (largest factor
    degree) and degree (largest summand degree) are recomputed from the
    factors, never trusted from the caller.

    homogeneous mode additionally requires every factor homogeneous and
    all summand degrees equal, so that restriction to a projective plane
    preserves degrees.  squarefree_summand optionally points at a summand
    claimed squarefree over the algebraic closure; normal_form verifies
    the claim before relying on it.
    """

    def __init__(self, field, summands, squarefree_summand=None,
                 homogeneous=False):
        summands = tuple(tuple(s) for s in summands)
        if not summands:
            raise ValueError("circuit needs at least one summand")
        vars_ = None
        for s in summands:
            if not s:
                raise ValueError("empty summand; use an explicit constant factor")
            for f in s:
                if not isinstance(f, MPoly):
                    raise ValueError("factors must be MPoly values")
                if not _same_field(f.field, field):
                    raise ValueError("factor does not live over the stated field")
                if f.is_zero():
                    raise ValueError("zero factor")
                if vars_ is None:
                    vars_ = f.vars
                elif f.vars != vars_:
                    raise ValueError("factors disagree on the variable tuple")
        self.field = field
        self.summands = summands
        self.vars = vars_
        self.n = len(vars_)
        self.k = len(summands)
        self.delta = max(f.degree() for s in summands for f in s)
        self.degree = max(sum(f.degree() for f in s) for s in summands)
        if homogeneous:
            degs = set()
            for s in summands:
                for f in s:
                    if not _is_homogeneous(f):
                        raise ValueError("inhomogeneous factor in homogeneous mode")
                degs.add(sum(f.degree() for f in s))
            if len(degs) > 1:
                raise ValueError("summand degrees differ in homogeneous mode")
        self.homogeneous = homogeneous
        if squarefree_summand is not None and not 0 <= squarefree_summand < self.k:
            raise ValueError("squarefree_summand out of range")
        self.squarefree_summand = squarefree_summand
        self._expanded = None

    def summand_poly(self, i):
        out = MPoly.one(self.field, self.vars)
        for f in self.summands[i]:
            out = out * f
        return out

    def expand(self):
        if self._expanded is None:
            acc = MPoly.zero(self.field, self.vars)
            for i in range(self.k):
                acc = acc + self.summand_poly(i)
            self._expanded = acc
        return self._expanded

    def evaluate(self, point):
        """Factor-wise evaluation; never expands a product."""
        K = self.field
        total = K.zero
        for s in self.summands:
            term = K.one
            for f in s:
                term = K.mul(term, f.evaluate(point))
                if K.is_zero(term):
                    break
            total = K.add(total, term)
        return total

    def evaluate_in(self, E, point):
        """Like evaluate, at a point with coordinates in a field E
        containing this circuit's field."""
        total = E.zero
        for s in self.summands:
            term = E.one
            for f in s:
                term = E.mul(term, _eval_in(f, E, point))
                if E.is_zero(term):
                    break
            total = E.add(total, term)
        return total


def _value_at(circuit, field, point):
    if _same_field(field, circuit.field):
        return circuit.evaluate(point)
    return circuit.evaluate_in(field, point)


# ---------------------------------------------------------------------------
# plane restrictions


def plane_parameter_names(n):
    """Names of the 3n plane parameters, in rows of three per input
    variable: row i parameterizes the image of X_i."""
    out = []
    for i in range(1, n + 1):
        out.extend((f"Y0_{i}", f"Y1_{i}", f"Y2_{i}"))
    return tuple(out)


class PlaneRestriction:
    """A plane substitution for n input variables.

    Affine mode sends X_i to row_i . (1, Z1, Z2); projective mode sends
    X_i to row_i . (Z0, Z1, Z2), accepts only homogeneous inputs, and
    keeps degrees intact.  A symbolic plane (point=None) has rows of
    independent transcendentals over the base field, so one substitution
    covers every plane at once; a point plane fixes the rows to field
    elements, listed flat in plane_parameter_names order.
    """

    def __init__(self, field, n, mode="affine", point=None):
        if mode not in ("affine", "projective"):
            raise ValueError("mode must be affine or projective")
        if n < 1:
            raise ValueError("need at least one input variable")
        self.base_field = field
        self.n = n
        self.mode = mode
        self.ynames = plane_parameter_names(n)
        self.symbolic = point is None
        if point is None:
            self.K = FnField(field, self.ynames)
            self.point = None
        else:
            point = tuple(point)
            if len(point) != 3 * n:
                raise ValueError("plane point needs 3n coordinates")
            self.K = None
            self.point = point

    @property
    def znames(self):
        return ("Z0", "Z1", "Z2") if self.mode == "projective" else ("Z1", "Z2")

    def rows(self):
        if self.symbolic:
            return [tuple(self.K.var(3 * i + r) for r in range(3))
                    for i in range(self.n)]
        return [tuple(self.point[3 * i + r] for r in range(3))
                for i in range(self.n)]

    def to_json(self):
        if self.symbolic:
            params = None
        else:
            F = self.base_field
            params = [F.fmt(v) for v in self.point]
        return {"mode": self.mode, "symbolic": self.symbolic, "n": self.n,
                "point": params}


def restrict(f, plane):
    """Substitute the plane parameterization into f.

    Affine planes produce polynomials in (Z1, Z2); projective planes
    require homogeneous input and produce homogeneous output of the same
    degree in (Z0, Z1, Z2).  The substitution is a ring homomorphism, so
    it commutes with sums and products of factors.
    """
    if len(f.vars) != plane.n:
        raise ValueError("variable count mismatch between f and plane")
    proj = plane.mode == "projective"
    if proj and not _is_homogeneous(f):
        raise ValueError("projective restriction needs a homogeneous input")
    znames = plane.znames
    if plane.symbolic:
        scal_field = plane.K  # subst_polys promotes base coefficients
    else:
        scal_field = plane.base_field
        f = _embed_poly(f, scal_field)
    zvars = [MPoly.var(scal_field, znames, z) for z in znames]
    if proj:
        basis = zvars
    else:
        basis = [MPoly.one(scal_field, znames)] + zvars
    images = []
    for row in plane.rows():
        img = MPoly.zero(scal_field, znames)
        for coef, b in zip(row, basis):
            img = img + b.scale(coef)
        images.append(img)
    return f.subst_polys(images)


def check_restricted_separability(f, c1, c2):
    """Test that a generic plane restriction of f keeps one plane
    coordinate separable over the function field of the other.

    On the plane X_i = Y0_i + Y1_i*Z1 + Y2_i*Z2, freeze the combination
    XC = c1*Z1 + c2*Z2 as a coordinate and eliminate Z2.  Separability
    over the XC side needs two survivors, tested exactly over the
    polynomial ring in the 3n plane parameters plus (Z1, XC): the chain
    derivative of the substituted polynomial with respect to Z1, and the
    top Z1-coefficient, which lands at f's leading form evaluated on the
    row combinations Y1_i - (c1/c2)*Y2_i.  Both carry an uncancellable
    monomial whenever f is separable in some variable, so for the
    irreducible inputs this engine feeds in the answer is normally True.

    c1 and c2 must be nonzero (integers are coerced into f's field).
    """
    K = f.field
    if f.is_constant():
        raise ValueError("constant input")
    if isinstance(c1, int):
        c1 = K.from_int(c1)
    if isinstance(c2, int):
        c2 = K.from_int(c2)
    if K.is_zero(c1) or K.is_zero(c2):
        raise ValueError("direction scalars must be nonzero")
    n = len(f.vars)
    ynames = plane_parameter_names(n)
    names = ynames + ("Z1", "XC")

    def v(name):
        return MPoly.var(K, names, name)

    c2inv = K.inv(c2)
    ratio = K.mul(c2inv, c1)
    z1, xc = v("Z1"), v("XC")
    images = []
    combos = []
    for i in range(1, n + 1):
        y0, y1, y2 = v(f"Y0_{i}"), v(f"Y1_{i}"), v(f"Y2_{i}")
        t = y0 + y1 * z1 + y2.scale(c2inv) * (xc - z1.scale(c1))
        images.append(t)
        combos.append(y1 - y2.scale(ratio))
    deriv = MPoly.zero(K, names)
    for i in range(n):
        df = partial_derivative(f, i)
        if not df.is_zero():
            deriv = deriv + df.subst_polys(images) * combos[i]
    if deriv.is_zero():
        return False
    d = f.degree()
    top = {e: c for e, c in f.terms.items() if sum(e) == d}
    lead_form = MPoly(K, f.vars, top)
    return not lead_form.subst_polys(combos).is_zero()


# ---------------------------------------------------------------------------
# factor splitting

_QUAD_ENUM_CAP = 4096


def _monic_unit(f, order=GREVLEX):
    _, lc = f.lead_term(order)
    if f.field.eq(lc, f.field.one):
        return f.field.one, f
    return lc, f.scale(f.field.inv(lc))


def _poly_key(f):
    K = f.field
    return tuple(sorted((e, K.fmt(c)) for e, c in f.terms.items()))


def _mat_inv(K, rows):
    m = len(rows)
    aug = [list(r) + [K.one if i == j else K.zero for j in range(m)]
           for i, r in enumerate(rows)]
    for col in range(m):
        piv = next((r for r in range(col, m) if not K.is_zero(aug[r][col])), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = K.inv(aug[col][col])
        aug[col] = [K.mul(x, inv) for x in aug[col]]
        for r in range(m):
            if r != col and not K.is_zero(aug[r][col]):
                factor = aug[r][col]
                aug[r] = [K.sub(x, K.mul(factor, y))
                          for x, y in zip(aug[r], aug[col])]
    return [r[m:] for r in aug]


def _char2_quadratic_split(f):
    """Find a linear divisor of a quadratic by enumeration; only usable
    over small finite fields, where the candidate count stays tiny."""
    K = f.field
    n = len(f.vars)
    q = getattr(K, "order", None)
    if q is None or K.iter_elements() is None or q ** (n + 1) > _QUAD_ENUM_CAP:
        raise UnsupportedCircuitError(
            "cannot split a characteristic-2 quadratic over this field")
    elems = list(K.iter_elements())
    for lead in range(n):
        tail = n - lead - 1
        for rest in itertools.product(elems, repeat=tail + 1):
            terms = {}
            e = [0] * n
            e[lead] = 1
            terms[tuple(e)] = K.one
            for j in range(tail):
                if K.is_zero(rest[j]):
                    continue
                e = [0] * n
                e[lead + 1 + j] = 1
                terms[tuple(e)] = rest[j]
            if not K.is_zero(rest[tail]):
                terms[(0,) * n] = rest[tail]
            ell = MPoly(K, f.vars, terms)
            g = f.divexact(ell)
            if g is not None:
                return [g, ell]
    return None


def _quadratic_split(f):
    """Split a degree-2 polynomial over its own field when reducible, and
    classify it over the closure otherwise.

    Returns (factors, rank).  factors is a two-element list with product
    exactly f, or None when f is irreducible over the field.  rank is the
    rank of the symmetric coefficient matrix of the homogenization
    (characteristic not 2): rank >= 3 means absolutely irreducible, rank 2
    means two distinct lines after at most a quadratic extension, rank 1
    means a scaled square of one line.  Characteristic 2 skips the matrix
    (rank None) and splits by enumerating linear divisors instead.
    """
    K = f.field
    if f.degree() != 2:
        raise ValueError("not a quadratic")
    if K.char == 2:
        return _char2_quadratic_split(f), None
    n = len(f.vars)
    m = n + 1  # slot 0 is the homogenizing coordinate
    half = K.inv(K.from_int(2))
    M = [[K.zero] * m for _ in range(m)]
    for exps, c in f.terms.items():
        idx = [i + 1 for i, e in enumerate(exps) for _ in range(e)]
        total = sum(exps)
        if total == 0:
            M[0][0] = K.add(M[0][0], c)
        elif total == 1:
            i = idx[0]
            h = K.mul(c, half)
            M[0][i] = K.add(M[0][i], h)
            M[i][0] = K.add(M[i][0], h)
        else:
            i, j = idx
            if i == j:
                M[i][i] = K.add(M[i][i], c)
            else:
                h = K.mul(c, half)
                M[i][j] = K.add(M[i][j], h)
                M[j][i] = K.add(M[j][i], h)
    # congruence diagonalization, tracking the coordinate change x = P y
    P = [[K.one if i == j else K.zero for j in range(m)] for i in range(m)]

    def col_op(a, lam, b):  # C_a += lam * C_b, and the matching row op on M
        for r in range(m):
            M[r][a] = K.add(M[r][a], K.mul(lam, M[r][b]))
        for r in range(m):
            M[a][r] = K.add(M[a][r], K.mul(lam, M[b][r]))
        for r in range(m):
            P[r][a] = K.add(P[r][a], K.mul(lam, P[r][b]))

    def swap(a, b):
        for r in range(m):
            M[r][a], M[r][b] = M[r][b], M[r][a]
        M[a], M[b] = M[b], M[a]
        for r in range(m):
            P[r][a], P[r][b] = P[r][b], P[r][a]

    for c0 in range(m):
        if K.is_zero(M[c0][c0]):
            j = next((j for j in range(c0 + 1, m)
                      if not K.is_zero(M[j][j])), None)
            if j is not None:
                swap(c0, j)
            else:
                j = next((j for j in range(c0 + 1, m)
                          if not K.is_zero(M[c0][j])), None)
                if j is not None:
                    col_op(c0, K.one, j)  # diagonal becomes 2*M[c0][j] != 0
        if K.is_zero(M[c0][c0]):
            continue
        piv = K.inv(M[c0][c0])
        for r in range(c0 + 1, m):
            if not K.is_zero(M[r][c0]):
                col_op(r, K.neg(K.mul(M[r][c0], piv)), c0)
    diag = [(i, M[i][i]) for i in range(m) if not K.is_zero(M[i][i])]
    rank = len(diag)
    if rank >= 3:
        return None, rank
    Pinv = _mat_inv(K, P)
    names = f.vars

    def y_form(k):  # the k-th new coordinate as an affine form in the X's
        row = Pinv[k]
        terms = {}
        if not K.is_zero(row[0]):
            terms[(0,) * n] = row[0]
        for i in range(n):
            if not K.is_zero(row[i + 1]):
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = row[i + 1]
        return MPoly(K, names, terms)

    if rank == 1:
        k, lam = diag[0]
        ell = y_form(k)
        factors = [ell.scale(lam), ell]
    elif rank == 2:
        (k1, lam1), (k2, lam2) = diag
        s = K.mul(K.neg(lam2), K.inv(lam1))
        root = K.sqrt(s) if hasattr(K, "sqrt") else None
        if root is None:
            return None, 2
        u, w = y_form(k1), y_form(k2)
        factors = [(u - w.scale(root)).scale(lam1), u + w.scale(root)]
    else:
        raise ValueError("rank 0 quadratic is the zero polynomial")
    check = factors[0] * factors[1]
    if not (check - f).is_zero():
        raise AssertionError("quadratic split failed to re-multiply")
    return factors, rank


def _rational_factor(f):
    """Multivariate factoring over the rationals, delegated to sympy and
    re-checked by exact multiplication."""
    import sympy

    syms = sympy.symbols(f.vars)
    if len(f.vars) == 1:
        syms = (syms,)
    expr = sympy.Integer(0)
    for exps, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exps):
            if e:
                term *= s ** e
        expr += term
    const, parts = sympy.factor_list(expr)
    unit = Fraction(const.p, const.q)
    out = []
    for fac, mult in parts:
        poly = sympy.Poly(fac, *syms)
        terms = {}
        for monom, coeff in poly.terms():
            r = sympy.Rational(coeff)
            terms[tuple(int(e) for e in monom)] = Fraction(r.p, r.q)
        mp = MPoly(f.field, f.vars, terms)
        u, mono = _monic_unit(mp)
        unit = unit * u ** mult
        out.extend([mono] * mult)
    return unit, out


def _irreducible_factors(f):
    """Split f into monic field-irreducible factors with multiplicity.

    Degree 1 is already irreducible; degree 2 goes through the symmetric
    matrix analysis; higher degree is handled when the polynomial is
    univariate or the field is the rationals, and rejected otherwise.
    Every split is re-multiplied and compared exactly.
    """
    K = f.field
    if f.is_zero():
        raise ValueError("zero polynomial")
    unit = K.one
    out = []
    work = [f]
    while work:
        g = work.pop()
        if g.is_constant():
            unit = K.mul(unit, g.constant_term())
            continue
        d = g.degree()
        if d == 1:
            u, mono = _monic_unit(g)
            unit = K.mul(unit, u)
            out.append(mono)
            continue
        if d == 2:
            parts, _ = _quadratic_split(g)
            if parts is None:
                u, mono = _monic_unit(g)
                unit = K.mul(unit, u)
                out.append(mono)
            else:
                work.extend(parts)
            continue
        used = [i for i in range(len(g.vars)) if g.degree_in(i) > 0]
        if len(used) == 1:
            sub = g.restrict_vars((g.vars[used[0]],))
            u, _ = _monic_unit(sub)
            unit = K.mul(unit, u)
            for fac, mult in factor_univariate(sub):
                out.extend([fac.extend_vars(g.vars)] * mult)
            continue
        if isinstance(K, QQ):
            u, parts = _rational_factor(g)
            unit = K.mul(unit, u)
            out.extend(parts)
            continue
        raise UnsupportedCircuitError(
            f"cannot split a degree-{d} multivariate factor over this field")
    check = MPoly.const(K, f.vars, unit)
    for g in out:
        check = check * g
    if not (check - f).is_zero():
        raise AssertionError("factor split failed to re-multiply")
    out.sort(key=lambda g: (g.degree(), _poly_key(g)))
    return unit, out


def _certified_absolutely_irreducible(f):
    """True only with a proof in hand: degree 1, or an irreducible
    quadratic of matrix rank >= 3.  None means undecided."""
    d = f.degree()
    if d == 1:
        return True
    if d == 2 and f.field.char != 2:
        parts, rank = _quadratic_split(f)
        if parts is not None:
            return False
        return True if rank is not None and rank >= 3 else False
    return None


# ---------------------------------------------------------------------------
# normal form


class NormalForm:
    """Outcome of circuit normalization.

    case is "k1", "k2", "main", or "justify".  summands holds
    (scalar, monic factor tuple) pairs after irreducible splitting,
    common-factor removal, and merging of proportional summands; removed
    lists the monic factors pulled out of every summand.  For "main" the
    squarefree summand sits first and its first factor divides neither of
    the other two expanded summands nor their sum.  is_zero is exact, and
    nonzero is guaranteed for "k2", "main", and "justify".  circuit is the
    canonical Circuit over the surviving summands (None when zero).
    """

    def __init__(self, case, circuit, summands, is_zero, removed, justify,
                 notes):
        self.case = case
        self.circuit = circuit
        self.summands = tuple(summands)
        self.is_zero = is_zero
        self.removed = tuple(removed)
        self.justify = justify
        self.notes = tuple(notes)


def _fold_scalar(K, vars_, scalar, factors):
    if not factors:
        return (MPoly.const(K, vars_, scalar),)
    if K.eq(scalar, K.one):
        return tuple(factors)
    return (factors[0].scale(scalar),) + tuple(factors[1:])


def _circuit_from_groups(base, groups, squarefree_summand=None):
    K = base.field
    summands = [_fold_scalar(K, base.vars, sc, list(fl)) for sc, fl in groups]
    homogeneous = all(_is_homogeneous(f) for s in summands for f in s)
    if homogeneous:
        homogeneous = len({sum(f.degree() for f in s) for s in summands}) == 1
    return Circuit(K, summands, squarefree_summand=squarefree_summand,
                   homogeneous=homogeneous)


def _expand_group(K, vars_, scalar, factors):
    acc = MPoly.const(K, vars_, scalar)
    for g in factors:
        acc = acc * g
    return acc


def normal_form(c):
    """Rewrite the circuit into the shape the certifier consumes.

    Factors are split into monic field-irreducible pieces, a factor common
    to every summand is pulled out, and scalar-proportional summands merge
    (proportionality of products is multiset equality of monic irreducible
    factors, so the merge is exact).  The survivor count decides the case:

      0 or 1 summand -> "k1"; zero exactly when nothing survives
      2 summands     -> "k2"; distinct factor multisets cannot cancel
      3 summands     -> "main" when some squarefree summand has a factor
                        dividing neither of the other two expanded
                        summands nor their sum (the factor is rotated to
                        the front), else "justify" with a recorded
                        sub-analysis.  A three-summand circuit is zero
                        only when two summands add up to exactly minus
                        the third, which the justify branch detects by a
                        proportionality test, so every zero circuit lands
                        in an is_zero outcome and every other routing
                        implies nonzero.

    Raises UnsupportedCircuitError when a factor cannot be split over the
    coefficient field, more than three essentially distinct summands
    survive, or no summand is squarefree over the closure.
    """
    K = c.field
    notes = []
    split = []
    for s in c.summands:
        scal = K.one
        facs = []
        for f in s:
            u, parts = _irreducible_factors(f)
            scal = K.mul(scal, u)
            facs.extend(parts)
        split.append([scal, facs])

    # pull out factors common to every summand (gcd of the products:
    # all factors are irreducible, so multiset intersection is exact)
    removed = []
    counters = [Counter(_poly_key(g) for g in facs) for _, facs in split]
    common = counters[0]
    for ctr in counters[1:]:
        common = common & ctr
    if common:
        reps = {}
        for g in split[0][1]:
            reps.setdefault(_poly_key(g), g)
        for key, mult in sorted(common.items()):
            removed.extend([reps[key]] * mult)
            for entry in split:
                kept = []
                todo = mult
                for g in entry[1]:
                    if todo and _poly_key(g) == key:
                        todo -= 1
                        continue
                    kept.append(g)
                entry[1] = kept
        notes.append(f"removed {len(removed)} common factor(s)")

    # merge proportional summands: same factor multiset, scalars add
    groups = {}
    order = []
    group_of = []
    for sc, facs in split:
        mk = tuple(sorted(_poly_key(g) for g in facs))
        if mk in groups:
            groups[mk][0] = K.add(groups[mk][0], sc)
            notes.append("merged proportional summands")
        else:
            groups[mk] = [sc, facs]
            order.append(mk)
        group_of.append(mk)
    merged = []
    for mk in order:
        sc, facs = groups[mk]
        if K.is_zero(sc):
            notes.append("a merged summand cancelled to zero")
            continue
        merged.append((sc, facs))

    if not merged:
        return NormalForm("k1", None, (), True, removed,
                          {"subkind": "all-cancelled"}, notes)
    if len(merged) == 1:
        sc, facs = merged[0]
        circ = _circuit_from_groups(c, [(sc, facs)])
        return NormalForm("k1", circ, ((sc, tuple(facs)),), False, removed,
                          None, notes)
    if len(merged) == 2:
        circ = _circuit_from_groups(c, merged)
        return NormalForm("k2", circ,
                          tuple((sc, tuple(facs)) for sc, facs in merged),
                          False, removed, None, notes)
    if len(merged) > 3:
        raise UnsupportedCircuitError(
            "more than three essentially distinct summands")

    # three survivors: find the squarefree one.  The coefficient fields in
    # play are perfect, so irreducible factors stay squarefree and pairwise
    # coprime under extension; a repeated key is the only obstruction.
    def squarefree(idx):
        keys = [_poly_key(g) for g in merged[idx][1]]
        return len(keys) == len(set(keys))

    cand_order = list(range(3))
    if c.squarefree_summand is not None:
        mk = group_of[c.squarefree_summand]
        declared = next((i for i, (sc, facs) in enumerate(merged)
                         if tuple(sorted(_poly_key(g) for g in facs)) == mk),
                        None)
        if declared is not None:
            cand_order.remove(declared)
            cand_order.insert(0, declared)
            if not squarefree(declared):
                notes.append("declared squarefree summand failed verification")
    sf = next((i for i in cand_order if squarefree(i)), None)
    if sf is None:
        raise UnsupportedCircuitError("no summand is squarefree over the closure")
    ordered = [merged[sf]] + [merged[i] for i in range(3) if i != sf]

    (sc0, fl0), (sc1, fl1), (sc2, fl2) = ordered
    P0 = _expand_group(K, c.vars, sc0, fl0)
    P1 = _expand_group(K, c.vars, sc1, fl1)
    P2 = _expand_group(K, c.vars, sc2, fl2)
    S = P1 + P2

    seen = set()
    main_candidates = []
    for pos, q in enumerate(fl0):
        key = _poly_key(q)
        if key in seen:
            continue
        seen.add(key)
        if P1.divexact(q) is None and P2.divexact(q) is None \
                and S.divexact(q) is None:
            main_candidates.append((pos, q))
    if main_candidates:
        pos, q = min(main_candidates,
                     key=lambda t: (0 if _certified_absolutely_irreducible(t[1])
                                    else 1, t[0]))
        rotated = [q] + fl0[:pos] + fl0[pos + 1:]
        summands = ((sc0, tuple(rotated)), (sc1, tuple(fl1)),
                    (sc2, tuple(fl2)))
        circ = _circuit_from_groups(c, summands, squarefree_summand=0)
        return NormalForm("main", circ, summands, False, removed, None, notes)

    # no factor avoids all three: analyze the pair sum
    if S.is_zero():
        circ = _circuit_from_groups(c, [(sc0, fl0)])
        return NormalForm("k1", circ, ((sc0, tuple(fl0)),), False, removed,
                          {"subkind": "sum-cancel"}, notes)
    ltS = S.lead_term(GREVLEX)
    ltP0 = P0.lead_term(GREVLEX)
    if ltS[0] == ltP0[0]:
        ratio = K.mul(ltS[1], K.inv(ltP0[1]))
        if (S - P0.scale(ratio)).is_zero():
            total = K.add(K.one, ratio)
            if K.is_zero(total):
                return NormalForm("k1", None, (), True, removed,
                                  {"subkind": "opposite-sum",
                                   "scalar": ratio}, notes)
            circ = _circuit_from_groups(c, [(K.mul(sc0, total), fl0)])
            return NormalForm("k1", circ,
                              ((K.mul(sc0, total), tuple(fl0)),), False,
                              removed, {"subkind": "proportional-sum",
                                        "scalar": ratio}, notes)

    summands = ((sc0, tuple(fl0)), (sc1, tuple(fl1)), (sc2, tuple(fl2)))
    circ = _circuit_from_groups(c, summands, squarefree_summand=0)
    if not fl0:
        justify = {"subkind": "constant-base"}
        return NormalForm("justify", circ, summands, False, removed, justify,
                          notes)
    for q in fl0:
        if S.divexact(q) is None:
            d1 = P1.divexact(q) is not None
            d2 = P2.divexact(q) is not None
            # dividing both would divide the sum; dividing neither would
            # have routed to "main"
            if d1 == d2:
                raise AssertionError("divisibility scan is inconsistent")
            justify = {"subkind": "split-divisor", "factor": q,
                       "side": 1 if d1 else 2}
            return NormalForm("justify", circ, summands, False, removed,
                              justify, notes)
    # every factor of the squarefree product divides S, hence so does the
    # product; the ratio is nonconstant or the proportional test above
    # would have fired
    T = S.divexact(P0)
    if T is None or T.is_constant():
        raise AssertionError("sum-multiple analysis is inconsistent")
    justify = {"subkind": "sum-multiple", "cofactor": T}
    return NormalForm("justify", circ, summands, False, removed, justify,
                      notes)


# ---------------------------------------------------------------------------
# hitting sets


class HittingSet:
    """A finite evaluation set with a guarantee attached.

    field is the field the coordinates live in, possibly an extension of
    the caller's; provenance records which generator emitted the set.
    """

    def __init__(self, field, points, provenance):
        if provenance not in ("grid", "plane-union", "certified"):
            raise ValueError("unknown provenance")
        self.field = field
        self.points = tuple(tuple(p) for p in points)
        self.provenance = provenance

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _distinct_elements(field, count):
    out = []
    for v in field.element_sequence():
        out.append(v)
        if len(out) == count:
            return out
    return None


_MODULUS_CACHE = {}


def _irreducible_modulus(F, k):
    """Deterministic monic irreducible of degree k over a prime field,
    by enumerating coefficient vectors low-to-high."""
    cached = _MODULUS_CACHE.get((F.p, k))
    if cached is not None:
        return [F.from_int(t) for t in cached]
    names = ("T",)
    for tail in itertools.product(range(F.p), repeat=k):
        if tail[0] == 0:
            continue  # constant term 0 means divisible by T
        coeffs = [F.from_int(t) for t in tail] + [F.one]
        terms = {(i,): c for i, c in enumerate(coeffs) if not F.is_zero(c)}
        f = MPoly(F, names, terms)
        facs = factor_univariate(f)
        if len(facs) == 1 and facs[0][1] == 1:
            _MODULUS_CACHE[(F.p, k)] = list(tail) + [1]
            return coeffs
    raise ValueError("no irreducible modulus found")


def _enlarge_field(field, count):
    """A field with at least count elements containing the given one.
    Returns (field2, embed)."""
    order = getattr(field, "order", None)
    if order is not None and order >= count:
        return field, (lambda a: a)
    if isinstance(field, GFp):
        k = 1
        while field.p ** k < count:
            k += 1
        E = ExtensionField(field, _irreducible_modulus(field, k))
        return E, E.embed
    raise ValueError(
        "field too small for the requested point count and no extension "
        "is available for it")


def _anchors(field, count):
    """(field2, embed, values): count distinct elements of field or of a
    deterministic extension."""
    vals = _distinct_elements(field, count)
    if vals is not None:
        return field, (lambda a: a), vals
    F2, emb = _enlarge_field(field, count)
    vals = _distinct_elements(F2, count)
    if vals is None:
        raise ValueError("field enlargement did not produce enough elements")
    return F2, emb, vals


def _simplex_indices(m, D):
    if m == 1:
        for i in range(D + 1):
            yield (i,)
        return
    for i in range(D + 1):
        for rest in _simplex_indices(m - 1, D - i):
            yield (i,) + rest


_GRID_CAP = 4096


def bounded_degree_hitting_set(m_vars, D, field, grid_cap=_GRID_CAP):
    """A point set hitting every nonzero m-variate polynomial of total
    degree at most D over the field (or over the returned extension when
    the field has at most D elements).

    Two deterministic generators: the full grid A^m over D+1 anchor values
    when it fits under grid_cap, and otherwise the simplex
    {a in A^m : sum of anchor indices <= D} with C(m+D, m) points.  The
    simplex suffices by induction on m: a polynomial vanishing on the whole
    simplex vanishes on the slice with last index j for every j <= D, and
    peeling anchor roots off the last coordinate reduces each slice to a
    smaller simplex.  No correct set can be smaller, because evaluation on
    a hitting set must be injective on the C(m+D, m)-dimensional
    coefficient space, so the size is optimal for this polynomial class.
    """
    if m_vars < 1:
        raise ValueError("need at least one variable")
    if D < 0:
        raise ValueError("degree bound must be nonnegative")
    F2, _, anchors = _anchors(field, D + 1)
    if (D + 1) ** m_vars <= grid_cap:
        pts = itertools.product(anchors, repeat=m_vars)
        return HittingSet(F2, [tuple(p) for p in pts], "grid")
    pts = [tuple(anchors[i] for i in idx) for idx in _simplex_indices(m_vars, D)]
    return HittingSet(F2, pts, "grid")


def boost_epsilon(H, eps, degree_bound):
    """Spread a hitting set along one interpolated curve so that hitting
    becomes abundant: on the output, any polynomial of degree at most
    degree_bound that is nonzero somewhere on H is nonzero on at least a
    (1-eps) fraction of the points.

    The curve has degree |H|-1 and passes through every point of H (the
    output therefore contains H), so a degree-D polynomial composed with
    it is a nonzero univariate of degree at most D(|H|-1); emitting
    ceil(D(|H|-1)/eps)+1 distinct parameter values caps the vanishing
    fraction at eps.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must be strictly between 0 and 1")
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    pts = H.points
    if len(pts) <= 1:
        return H
    count = math.ceil(Fraction(degree_bound * (len(pts) - 1)) / eps) + 1
    F2, emb, vals = _anchors(H.field, max(count, len(pts)))
    nodes = vals[:len(pts)]
    samples = vals[:count]
    coords = len(pts[0])
    data = [[emb(x) for x in p] for p in pts]
    # Newton interpolation per coordinate, then Horner evaluation
    tables = []
    for cidx in range(coords):
        dd = [data[i][cidx] for i in range(len(pts))]
        coefs = [dd[0]]
        for lvl in range(1, len(pts)):
            for i in range(len(pts) - lvl):
                dd[i] = F2.div(F2.sub(dd[i + 1], dd[i]),
                               F2.sub(nodes[i + lvl], nodes[i]))
            coefs.append(dd[0])
        tables.append(coefs)
    out = []
    for t in samples:
        pt = []
        for coefs in tables:
            acc = coefs[-1]
            for lvl in range(len(coefs) - 2, -1, -1):
                acc = F2.add(F2.mul(acc, F2.sub(t, nodes[lvl])), coefs[lvl])
            pt.append(acc)
        out.append(tuple(pt))
    return HittingSet(F2, out, "certified")


_PLANE_PROVIDERS = {}


def register_plane_provider(name, fn):
    """Register fn(n, delta, d, field) -> list of point-mode
    PlaneRestriction under the given provider name."""
    _PLANE_PROVIDERS[name] = fn


def plane_family(n, delta, d, field, provider="default"):
    """Candidate affine planes for restriction arguments.

    The default provider parameterizes planes by a bounded-degree hitting
    set over the 3n row coordinates.  Usage sites re-validate each plane
    (dimension checks after restriction), so the family only has to be
    rich enough, not individually guaranteed.
    """
    try:
        fn = _PLANE_PROVIDERS[provider]
    except KeyError:
        raise ValueError(f"no plane family provider named {provider!r}") \
            from None
    return fn(n, delta, d, field)


def _default_planes(n, delta, d, field):
    H = bounded_degree_hitting_set(3 * n, max(2, 2 * delta), field)
    F2 = H.field
    pts = list(H.points)
    # low-weight grid points alone make degenerate planes too often; mix in
    # dense pseudorandom rows from a fixed stream so the family stays usable
    pts.extend(_candidate_planes(F2, n, 0, 32))
    out, seen = [], set()
    for p in pts:
        if all(F2.is_zero(x) for x in p):
            continue
        key = tuple(F2.fmt(x) for x in p)
        if key in seen:
            continue
        seen.add(key)
        out.append(PlaneRestriction(F2, n, "affine", point=p))
    return out


register_plane_provider("default", _default_planes)


# ---------------------------------------------------------------------------
# certified nonzero search


class SStarCertificate:
    """Audit data for one hard-case specialization.

    Everything lives in the presentation ring of the normalized specialized
    plane curve.  For each non-squarefree-summand factor, with restricted
    value v of order k at m_hat, the stored cofactors witness three exact
    identities against the maximal-ideal generators g and the presentation
    relations h:

        t*v  = u^k * (1 + sum a*g) + sum b*h      (t a unit at m_hat)
        s*t  = 1 + sum c*g
        u    = sum d*g,   h = sum e*g per relation

    n1 < n2 is the summand-order inequality that forces the sum of the two
    non-squarefree summands off the curve ideal.  sstar groups the side
    conditions: S0 denominators cleared while specializing, S1 the
    properness witness for m_hat, S2 the non-zero-divisor witness for the
    uniformizer, S3 the membership of the restricted squarefree factor in
    the presentation ideal.  verify() re-expands every identity exactly.
    """

    def __init__(self, ring, m_hat, uniformizer, relations, d_cofactors,
                 e_cofactors, n1, n2, sstar):
        self.ring = ring
        self.m_hat = m_hat
        self.uniformizer = uniformizer
        self.relations = relations
        self.d_cofactors = d_cofactors
        self.e_cofactors = e_cofactors
        self.n1 = n1
        self.n2 = n2
        self.sstar = sstar

    def verify(self):
        """Re-expand every stored identity; True only when all are exact."""
        G = list(self.m_hat.gb)
        H = list(self.ring.generators)
        u = self.uniformizer
        K = u.field

        def combo(cofs, gens):
            acc = MPoly.zero(K, u.vars)
            for cf, g in zip(cofs, gens):
                acc = acc + cf * g
            return acc

        if not 0 <= self.n1 < self.n2:
            return False
        for rel in self.relations:
            uk = u ** rel["k"]
            lhs = rel["t"] * rel["value"]
            rhs = uk + combo(rel["a"], [uk * g for g in G]) \
                + combo(rel["b"], H)
            if not (lhs - rhs).is_zero():
                return False
            one = MPoly.one(K, u.vars)
            if not (rel["s"] * rel["t"] - one - combo(rel["c"], G)).is_zero():
                return False
        if not (u - combo(self.d_cofactors, G)).is_zero():
            return False
        for h, cofs in zip(H, self.e_cofactors):
            if not (h - combo(cofs, G)).is_zero():
                return False
        ks1 = sum(r["k"] for r in self.relations if r["summand"] == 1)
        ks2 = sum(r["k"] for r in self.relations if r["summand"] == 2)
        return ks1 == self.n1 and ks2 == self.n2


class CertifyResult:
    """Outcome of certify_nonzero.

    verdict is "zero" or "nonzero".  For "nonzero", point holds
    coordinates with C(point) != 0, re-evaluated against the input
    circuit, and point_field names the field those coordinates live in.
    plane and plane_point record the restriction step when the witness
    came from a plane; certificate is a case-dependent audit dict, with
    an SStarCertificate under "sstar" on the hard route.
    """

    def __init__(self, verdict, case, normal, point=None, point_field=None,
                 plane=None, plane_point=None, certificate=None):
        self.verdict = verdict
        self.case = case
        self.normal = normal
        self.point = point
        self.point_field = point_field
        self.plane = plane
        self.plane_point = plane_point
        self.certificate = certificate or {}


def _witness_by_points(c, nf, case=None, extra=None):
    H = bounded_degree_hitting_set(c.n, c.degree, c.field)
    for p in H.points:
        v = _value_at(c, H.field, p)
        if not H.field.is_zero(v):
            cert = {"search": "point-grid", "grid_size": len(H)}
            if extra:
                cert.update(extra)
            return CertifyResult("nonzero", case or nf.case, nf, point=p,
                                 point_field=H.field, certificate=cert)
    # the set hits every nonzero polynomial of this degree
    raise AssertionError("nonzero circuit vanished on a complete grid")


def _chart_rows(rows, chart):
    """Reorder each parameter row so that slot `chart` is the constant
    term of an affine plane map and the other two slots multiply the two
    free coordinates."""
    out = []
    for r in rows:
        free = [r[j] for j in range(3) if j != chart]
        out.append((r[chart], free[0], free[1]))
    return out


def _chart_plane(base_field, n, rows, chart):
    flat = []
    for r in _chart_rows(rows, chart):
        flat.extend(r)
    return PlaneRestriction(base_field, n, "affine", point=flat)


def _plane_search(c, nf, planes, grid_field, grid, validator=None,
                  extra=None, case=None, max_planes=None):
    checked = 0
    validated = 0
    use = planes if max_planes is None else planes[:max_planes]
    for plane in use:
        checked += 1
        if validator is not None and not validator(plane):
            continue
        validated += 1
        rows = [[_into(grid_field, plane.base_field, x) for x in r]
                for r in plane.rows()]
        for z1 in grid:
            for z2 in grid:
                pt = tuple(grid_field.add(
                    grid_field.add(a0, grid_field.mul(a1, z1)),
                    grid_field.mul(a2, z2)) for a0, a1, a2 in rows)
                val = _value_at(c, grid_field, pt)
                if not grid_field.is_zero(val):
                    cert = {"search": "plane-grid",
                            "planes_checked": checked,
                            "planes_validated": validated}
                    if extra:
                        cert.update(extra)
                    return CertifyResult("nonzero", case or nf.case, nf,
                                         point=pt, point_field=grid_field,
                                         plane=plane, plane_point=(z1, z2),
                                         certificate=cert)
    raise ResourceLimitError(
        "no plane in the family produced a witness",
        partial={"stage": "plane search", "planes_checked": checked,
                 "planes_validated": validated})


def _dimension_validator(q, opposite_factors):
    """Accept planes where q restricts to a curve and each paired factor
    meets that curve in dimension zero."""

    def validator(plane):
        rq = restrict(q, plane)
        if rq.is_constant():
            return False
        if krull_dimension(Ideal([rq])) != 1:
            return False
        for f in opposite_factors:
            rf = restrict(f, plane)
            if rf.is_zero():
                return False
            if krull_dimension(Ideal([rq, rf])) != 0:
                return False
        return True

    return validator


def _witness_by_planes(c, nf, max_planes, validator=None, extra=None,
                       case=None):
    planes = plane_family(c.n, c.delta, c.degree, c.field)
    if not planes:
        raise ResourceLimitError("empty plane family",
                                 partial={"stage": "plane search"})
    pf = planes[0].base_field
    grid_field, _, grid = _anchors(pf, c.degree + 1)
    return _plane_search(c, nf, planes, grid_field, grid,
                         validator=validator, extra=extra, case=case,
                         max_planes=max_planes)


def _restrict_rows(f, field, rows, chart, znames=("U", "V")):
    """Affine chart substitution with explicit coefficient rows."""
    if not isinstance(field, FnField):
        f = _embed_poly(f, field)
    zu = MPoly.var(field, znames, znames[0])
    zv = MPoly.var(field, znames, znames[1])
    one = MPoly.one(field, znames)
    images = []
    for a0, a1, a2 in _chart_rows(rows, chart):
        img = one.scale(a0) + zu.scale(a1) + zv.scale(a2)
        images.append(img)
    return f.subst_polys(images)


def _candidate_planes(field, n, seed, count):
    """Deterministic pseudorandom plane rows with entries from a small
    anchor pool.  Hitting-set points are too sparse here: most have a
    single nonzero coordinate, which collapses the restriction, so the
    specialization search draws dense rows instead."""
    pool = _distinct_elements(field, 16)
    if pool is None:
        pool = list(field.element_sequence())
    rng = random.Random(seed * 1000003 + 12345)
    out = []
    while len(out) < count:
        a = tuple(pool[rng.randrange(len(pool))] for _ in range(3 * n))
        if all(field.is_zero(x) for x in a):
            continue
        out.append(a)
    return out


def _nf_in(gb, f):
    return poly_reduce(f, gb).remainder


def _solve_scaled_unit(F, ring_gens, G, u, v, k, names):
    """Find t with t*v = u^k modulo (ring relations + u^k * m_hat).

    Any solution is automatically a unit at m_hat: a t inside the maximal
    ideal would push the order of t*v strictly above k while the right
    side has order exactly k.  Returns None when no solution exists in
    the degree pools tried.
    """
    uk = u ** k
    W = Ideal(list(ring_gens) + [uk * g for g in G],
              field=F, varnames=names)
    gbW = W.groebner().polys
    try:
        qb = quotient_basis(W)
    except (ValueError, AssertionError):
        return None
    index = {m: i for i, m in enumerate(qb.monomials)}
    b = [F.zero] * len(qb.monomials)
    for e, cf in _nf_in(gbW, uk).terms.items():
        if e not in index:
            return None
        b[index[e]] = cf
    base_deg = max(u.degree() * k, v.degree(), 2)
    for bound in (base_deg, base_deg + 2, base_deg + 4):
        pool = [e for e in itertools.product(range(bound + 1),
                                             repeat=len(names))
                if sum(e) <= bound]
        pool.sort(key=GREVLEX.key)
        cols = []
        ok = True
        for e in pool:
            mono = MPoly(F, names, {e: F.one})
            nf = _nf_in(gbW, mono * v)
            col = [F.zero] * len(qb.monomials)
            for ee, cf in nf.terms.items():
                if ee not in index:
                    ok = False
                    break
                col[index[ee]] = cf
            if not ok:
                break
            cols.append(col)
        if not ok:
            return None
        A = [[cols[j][i] for j in range(len(pool))]
             for i in range(len(qb.monomials))]
        sol = solve_linear(F, A, b)
        if sol is not None:
            terms = {}
            for e, cf in zip(pool, sol):
                if not F.is_zero(cf):
                    terms[e] = cf
            if terms:
                return MPoly(F, names, terms)
    return None


def _solve_inverse_mod(F, G, t, names):
    """s with s*t = 1 modulo the maximal ideal generated by G; the
    candidate lives in the residue-field monomial basis."""
    Im = Ideal(list(G), field=F, varnames=names)
    try:
        qb = quotient_basis(Im)
    except (ValueError, AssertionError):
        return None
    gbm = Im.groebner().polys
    index = {m: i for i, m in enumerate(qb.monomials)}
    b = [F.zero] * len(qb.monomials)
    for e, cf in _nf_in(gbm, MPoly.one(F, names)).terms.items():
        b[index[e]] = cf
    cols = []
    for e in qb.monomials:
        mono = MPoly(F, names, {e: F.one})
        nf = _nf_in(gbm, mono * t)
        col = [F.zero] * len(qb.monomials)
        for ee, cf in nf.terms.items():
            col[index[ee]] = cf
        cols.append(col)
    A = [[cols[j][i] for j in range(len(qb.monomials))]
         for i in range(len(qb.monomials))]
    sol = solve_linear(F, A, b)
    if sol is None:
        return None
    terms = {}
    for e, cf in zip(qb.monomials, sol):
        if not F.is_zero(cf):
            terms[e] = cf
    return MPoly(F, names, terms) if terms else None


def _ideal_equal(I, J):
    gi = I.groebner().polys
    gj = J.groebner().polys
    return all(poly_reduce(g, gj).remainder.is_zero() for g in gi) and \
        all(poly_reduce(g, gi).remainder.is_zero() for g in gj)


def _candidate_certificate(c, nf, chart, F, a, seed, rejects):
    """Try to complete an order-inequality certificate on the plane with
    parameter rows a.  Returns a CertifyResult or None (with the
    rejection reason tallied)."""
    (sc0, fl0), (sc1, fl1), (sc2, fl2) = nf.summands
    f01 = fl0[0]
    n = c.n
    rows = [tuple(a[3 * i + r] for r in range(3)) for i in range(n)]

    def rest(f):
        return _restrict_rows(f, F, rows, chart)

    cp = rest(f01)
    if cp.degree() != f01.degree():
        rejects["degree-drop"] += 1
        return None
    try:
        ctx = CurveContext(F, cp)
        Pa = trager_normalize(ctx)
    except (ContextError, SeparabilityError, FactorizationUnsupported,
            ExtendFieldError, RuntimeError):
        rejects["curve-rejected"] += 1
        return None
    coords = Pa.coord_images
    ring = Pa.ring
    names = ring.vars
    gbR = ring.groebner().polys

    def on_curve(f):
        return _nf_in(gbR, f).is_zero()

    vals1 = [rest(f).subst_polys(coords) for f in fl1]
    vals2 = [rest(f).subst_polys(coords) for f in fl2]
    if any(on_curve(v) for v in vals1 + vals2):
        rejects["factor-on-curve"] += 1
        return None
    v2prod = MPoly.one(F, names)
    for v in vals2:
        v2prod = v2prod * v
    try:
        support = extract_maximal(Ideal(list(ring.generators) + [v2prod],
                                        field=F, varnames=names))
    except (ValueError, SeparabilityError, ExtendFieldError,
            FactorizationUnsupported):
        rejects["support"] += 1
        return None
    m_hat = None
    k1s = k2s = None
    for m in support:
        o1 = [ord_at(Pa, m, v) for v in vals1]
        o2 = [ord_at(Pa, m, v) for v in vals2]
        if sum(o1) < sum(o2):
            m_hat, k1s, k2s = m, o1, o2
            break
    if m_hat is None:
        rejects["no-inequality"] += 1
        return None
    n1, n2 = sum(k1s), sum(k2s)

    G = list(m_hat.gb)
    gbG = Ideal(G, field=F, varnames=names).groebner().polys
    if _nf_in(gbG, MPoly.one(F, names)).is_zero():
        raise AssertionError("maximal ideal reduced 1 to 0")
    try:
        u = valuation_witness(Pa, m_hat, seed=seed).uniformizer
    except (ValueError, SeparabilityError, RuntimeError):
        rejects["uniformizer"] += 1
        return None
    ring_ideal = Ideal(list(ring.generators), field=F, varnames=names)
    nzd = _ideal_equal(ideal_quotient(ring_ideal,
                                      Ideal([u], field=F, varnames=names)),
                       ring_ideal)
    if not nzd:
        rejects["zero-divisor"] += 1
        return None
    relations = []
    for summand, vals, ks in ((1, vals1, k1s), (2, vals2, k2s)):
        for v, k in zip(vals, ks):
            t = _solve_scaled_unit(F, ring.generators, G, u, v, k, names)
            if t is None:
                rejects["unit-solve"] += 1
                return None
            if _nf_in(gbG, t).is_zero():
                raise AssertionError("scaled unit landed in the maximal ideal")
            uk = u ** k
            rel1 = ideal_member(t * v - uk,
                                Ideal([uk * g for g in G]
                                      + list(ring.generators),
                                      field=F, varnames=names))
            if rel1 is None:
                rejects["relation1"] += 1
                return None
            s = _solve_inverse_mod(F, G, t, names)
            if s is None:
                rejects["inverse-solve"] += 1
                return None
            rel2 = ideal_member(s * t - MPoly.one(F, names),
                                Ideal(G, field=F, varnames=names))
            if rel2 is None:
                rejects["relation2"] += 1
                return None
            relations.append({"summand": summand, "value": v, "k": k,
                              "t": t, "s": s, "a": rel1[:len(G)],
                              "b": rel1[len(G):], "c": rel2})
    d_cofs = ideal_member(u, Ideal(G, field=F, varnames=names))
    e_cofs = [ideal_member(h, Ideal(G, field=F, varnames=names))
              for h in ring.generators]
    if d_cofs is None or any(e is None for e in e_cofs):
        rejects["membership"] += 1
        return None
    v0 = cp.subst_polys(coords)
    q_cofs = ideal_member(v0, ring_ideal)
    if q_cofs is None:
        raise AssertionError("curve relation escaped the presentation ideal")
    sstar = {
        "S0": {"denominators": [],
               "note": "restriction computed directly over the base field"},
        "S1": {"proper": True, "residue_degree": m_hat.residue_degree},
        "S2": {"non_zero_divisor": True},
        "S3": {"curve_membership_cofactors": q_cofs},
    }

    # the certified inequality forces the sum of the two non-squarefree
    # restricted summands off the curve ideal; check it directly
    p1 = MPoly.one(F, names)
    for v in vals1:
        p1 = p1 * v
    p2 = MPoly.one(F, names)
    for v in vals2:
        p2 = p2 * v
    combined = p1.scale(_into(F, c.field, sc1)) \
        + p2.scale(_into(F, c.field, sc2))
    if on_curve(combined):
        rejects["conclusion"] += 1
        return None

    cert = SStarCertificate(ring, m_hat, u, relations, d_cofs, e_cofs,
                            n1, n2, sstar)
    if not cert.verify():
        raise AssertionError("assembled certificate failed re-verification")

    # witness on this plane: the restricted circuit equals the restricted
    # pair sum modulo the curve relation, so it is a nonzero bivariate of
    # degree at most c.degree; a full grid must then hit it
    grid_field, gemb, grid = _anchors(F, c.degree + 1)
    plane = _chart_plane(F, n, rows, chart)
    crows = _chart_rows(rows, chart)
    for z1 in grid:
        for z2 in grid:
            pt = tuple(grid_field.add(
                grid_field.add(gemb(a0), grid_field.mul(gemb(a1), z1)),
                grid_field.mul(gemb(a2), z2)) for a0, a1, a2 in crows)
            val = _value_at(c, grid_field, pt)
            if not grid_field.is_zero(val):
                return CertifyResult(
                    "nonzero", "main", nf, point=pt, point_field=grid_field,
                    plane=plane, plane_point=(z1, z2),
                    certificate={"route": "order-inequality", "chart": chart,
                                 "n1": n1, "n2": n2, "sstar": cert})
    raise AssertionError("restricted circuit vanished on a full bivariate grid")


_PROBE_BUDGET = 5

# rejection reasons only reachable after an order inequality was found at
# some maximal ideal; seeing one means the chart is worth more candidates
_POST_INEQUALITY = ("uniformizer", "zero-divisor", "unit-solve", "relation1",
                    "inverse-solve", "relation2", "membership", "conclusion")


def _witness_main(c, nf, seed, max_candidates, max_planes, grid_fallback):
    """Witness search for the three-summand case with a separating
    squarefree factor.

    Specialized planes are probed directly: each candidate restricts the
    squarefree factor to a plane curve over the base field, normalizes
    it, and looks for a maximal ideal where the two remaining summands
    have different total valuation.  A completed certificate also pins a
    witness on that plane.  When a few probes per chart never even reach
    an order inequality, the ratio obstruction is absent and a validated
    plane search settles the instance; a complete grid is the final
    resort (or ResourceLimitError when grid_fallback is off).
    """
    field = c.field
    n = c.n
    (sc0, fl0), (sc1, fl1), (sc2, fl2) = nf.summands
    charts = (0, 1, 2) if nf.circuit.homogeneous else (0,)
    candidates = _candidate_planes(field, n, seed, max_candidates)
    rejects = Counter()
    tried = 0
    probe_log = []
    for chart in charts:
        probes = 0
        inequality_seen = False
        for a in candidates:
            if tried >= max_candidates:
                break
            if probes >= _PROBE_BUDGET and not inequality_seen:
                break
            before = sum(rejects[r] for r in _POST_INEQUALITY)
            tried += 1
            probes += 1
            result = _candidate_certificate(c, nf, chart, field, a, seed,
                                            rejects)
            if result is not None:
                result.certificate["candidates_tried"] = tried
                return result
            if sum(rejects[r] for r in _POST_INEQUALITY) > before:
                inequality_seen = True
        probe_log.append({"chart": chart, "probes": probes,
                          "order_inequality": inequality_seen})
    summary = {"probes": probe_log, "rejects": dict(rejects),
               "candidates_tried": tried}
    route = "order-inequality-incomplete" if any(
        p["order_inequality"] for p in probe_log) else "regular-restriction"
    easy_validator = _dimension_validator(fl0[0], fl2)
    try:
        return _witness_by_planes(c, nf, max_planes,
                                  validator=easy_validator,
                                  extra={"route": route, "search": summary},
                                  case="main")
    except ResourceLimitError as err:
        if not grid_fallback:
            err.partial.update(summary)
            raise
        return _witness_by_points(c, nf, case="main",
                                  extra={"route": route, "search": summary,
                                         "fallback": "complete-grid",
                                         "exhausted": err.partial})


def certify_nonzero(c, seed=0, max_candidates=64, max_planes=None,
                    grid_fallback=True):
    """Decide the circuit exactly and certify the answer.

    Zero verdicts come out of normal_form's exact rewriting (the only
    cancellations a three-summand circuit of this class admits).  Nonzero
    verdicts are backed by a witness point, re-evaluated on the input
    circuit, plus a case-dependent certificate: a plain grid search for
    one or two surviving summands, a validated plane restriction when one
    squarefree factor separates the others, and the normalized-curve
    order inequality with full cofactor identities on the hard route.

    Deterministic for a fixed seed.  grid_fallback controls what happens
    when a certified plane or specialization search exhausts its budget:
    fall back to a complete grid witness (recorded in the certificate),
    or raise ResourceLimitError carrying the partial progress.
    """
    nf = normal_form(c)
    if nf.is_zero:
        reason = dict(nf.justify or {})
        reason.setdefault("subkind", "cancelled")
        return CertifyResult("zero", nf.case, nf,
                             certificate={"reason": reason})
    if nf.case in ("k1", "k2"):
        return _witness_by_points(c, nf)
    if nf.case == "justify":
        sub = nf.justify["subkind"]
        validator = None
        extra = {"route": "justify", "subkind": sub}
        if sub == "split-divisor":
            q = nf.justify["factor"]
            side = nf.justify["side"]
            # pair the dividing factor against the factors of the summand
            # it does not divide
            opposite = nf.summands[2 if side == 1 else 1][1]
            validator = _dimension_validator(q, opposite)
        try:
            return _witness_by_planes(c, nf, max_planes, validator=validator,
                                      extra=extra)
        except ResourceLimitError as err:
            if not grid_fallback:
                raise
            extra = dict(extra)
            extra.update(fallback="complete-grid", exhausted=err.partial)
            return _witness_by_points(c, nf, extra=extra)
    return _witness_main(c, nf, seed, max_candidates, max_planes,
                         grid_fallback)


# ---------------------------------------------------------------------------
# black-box hitting sets


def hitting_set_main(n, d, delta, field, degree_bound_D, eps=Fraction(1, 8)):
    """Black-box hitting set for the homogeneous three-summand class.

    Union of two plane sources, each crossed with a (d+1) x (d+1) grid of
    plane coordinates: the structured family from plane_family, and a
    boosted bounded-degree set over the 3n plane parameters.  The caller
    supplies degree_bound_D, the degree cap for the side conditions a
    certifying run would need; there is no closed formula for it, so
    black-box use calibrates it empirically (certify_nonzero computes the
    instance-specific degrees).  Choosing degree_bound_D >= d also covers
    every plane whose restriction keeps the circuit alive, since the
    restricted coefficients have degree at most d in the plane rows.
    """
    if n < 1 or d < 0 or delta < 0:
        raise ValueError("bad dimensions")
    planes = plane_family(n, delta, d, field)
    base = bounded_degree_hitting_set(3 * n, degree_bound_D, field)
    boosted = boost_epsilon(base, eps, degree_bound_D)
    sources = [(plane.base_field, plane.point) for plane in planes]
    sources.extend((boosted.field, p) for p in boosted.points)
    big = field
    for f, _ in sources:
        fo = getattr(f, "order", None)
        bo = getattr(big, "order", None)
        if fo is not None and bo is not None and bo < fo:
            big = f
    grid_field, _, grid = _anchors(big, d + 1)
    points = []
    seen = set()
    for f, p in sources:
        rows = [tuple(_into(grid_field, f, p[3 * i + r]) for r in range(3))
                for i in range(n)]
        if all(grid_field.is_zero(x) for r in rows for x in r):
            continue
        for z1 in grid:
            for z2 in grid:
                pt = tuple(grid_field.add(
                    grid_field.add(a0, grid_field.mul(a1, z1)),
                    grid_field.mul(a2, z2)) for a0, a1, a2 in rows)
                key = tuple(grid_field.fmt(x) for x in pt)
                if key in seen:
                    continue
                seen.add(key)
                points.append(pt)
    return HittingSet(grid_field, points, "plane-union")


def dehomogenize_points(H, n):
    """Dehomogenize an (n+1)-coordinate hitting set.

    Drops the zero vector, applies the deterministic shear
    x0' = x0 + t*x1 + ... + t^n*xn with the first t making every new
    first coordinate nonzero (the shear is invertible, so sheared points
    still hit homogeneous polynomials), then divides the remaining
    coordinates by it.  Soundness rides on the identity
    F(a1/a0, ..., an/a0) * a0^d0 = (homogenized F)(a0, ..., an).
    """
    G = H.field
    pts = [p for p in H.points if any(not G.is_zero(x) for x in p)]
    if not pts:
        return HittingSet(G, [], H.provenance)
    tcount = min(len(pts) * (n + 1) + 1, _GRID_CAP)
    order = getattr(G, "order", None)
    if order is not None:
        # a full scan of the field is the best the search can do
        tcount = min(tcount, order)
    Gt, emb, tvals = _anchors(G, tcount)

    def sheared_first(p, t):
        acc = Gt.zero
        tp = Gt.one
        for x in p:
            acc = Gt.add(acc, Gt.mul(tp, emb(x)))
            tp = Gt.mul(tp, t)
        return acc

    chosen = None
    for t in tvals:
        # a nonzero point rules out at most n+1 shear values, so the pool
        # above always leaves a survivor when it is bigger than (n+1)|pts|
        if all(not Gt.is_zero(sheared_first(p, t)) for p in pts):
            chosen = t
            break
    if chosen is None:
        raise ValueError("no shear parameter cleared the first coordinates")
    out = []
    seen = set()
    for p in pts:
        inv = Gt.inv(sheared_first(p, chosen))
        q = tuple(Gt.mul(emb(x), inv) for x in p[1:])
        key = tuple(Gt.fmt(x) for x in q)
        if key not in seen:
            seen.add(key)
            out.append(q)
    return HittingSet(Gt, out, H.provenance)


def hitting_set_inhom(n, d, delta, field, D, eps=Fraction(1, 8)):
    """Hitting set for inhomogeneous circuits via homogenization: the
    homogeneous construction over n+1 variables, dehomogenized."""
    H = hitting_set_main(n + 1, d, delta, field, D, eps=eps)
    return dehomogenize_points(H, n)
