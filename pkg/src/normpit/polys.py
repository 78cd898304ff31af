"""Sparse multivariate polynomials over any coefficient field.

MPoly wraps a term dict (exponent tuple -> field value) together with its
variable context and coefficient field, and tracks a degree bound and a
coefficient-complexity bound. Monomial orders are small key-function
objects; block orders compare the eliminated variables first.
"""

import itertools
from fractions import Fraction

from .fields import (
    ContextError, FnField, GFp, QQ, td_add, td_divexact, td_gcd, td_lead,
    td_monic, td_mul, td_neg, td_one, td_scale, td_sqrt, td_sub,
)

NEG_INF = float("-inf")


class FactorizationUnsupported(NotImplementedError):
    pass


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    degree_compatible = False
    tag = "?"

    def key(self, e):
        raise NotImplementedError

    def compare(self, e1, e2):
        k1, k2 = self.key(e1), self.key(e2)
        if k1 < k2:
            return -1
        if k1 > k2:
            return 1
        return 0


class _Grevlex(MonomialOrder):
    degree_compatible = True
    tag = "grevlex"

    def key(self, e):
        return (sum(e), tuple(-x for x in reversed(e)))


class _Grlex(MonomialOrder):
    degree_compatible = True
    tag = "grlex"

    def key(self, e):
        return (sum(e), tuple(e))


class _Lex(MonomialOrder):
    degree_compatible = False
    tag = "lex"

    def key(self, e):
        return tuple(e)


GREVLEX = _Grevlex()
GRLEX = _Grlex()
LEX = _Lex()


class BlockOrder(MonomialOrder):
    """Eliminated variables dominate: compare them by `outer` first, then
    the remaining variables by `inner`."""

    degree_compatible = False

    def __init__(self, elim_vars, inner=GREVLEX, outer=GREVLEX):
        self.elim = tuple(sorted(elim_vars))
        self.inner = inner
        self.outer = outer
        self._elim_set = set(self.elim)
        self.tag = f"block[{','.join(map(str, self.elim))}]{outer.tag}|{inner.tag}"

    def key(self, e):
        eo = tuple(e[i] for i in self.elim)
        ei = tuple(x for i, x in enumerate(e) if i not in self._elim_set)
        return (self.outer.key(eo), self.inner.key(ei))


class WeightedOrder(MonomialOrder):
    def __init__(self, weights, tie=GREVLEX):
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        self.weights = tuple(weights)
        self.tie = tie
        self.degree_compatible = len(set(weights)) == 1
        self.tag = f"wt[{','.join(map(str, weights))}]{tie.tag}"

    def key(self, e):
        return (sum(w * x for w, x in zip(self.weights, e)), self.tie.key(e))


def compare_monomials(order, m1, m2):
    if len(m1) != len(m2):
        raise ContextError("exponent vectors of different length")
    c = order.compare(tuple(m1), tuple(m2))
    return "less" if c < 0 else "greater" if c > 0 else "equal"


# ---------------------------------------------------------------------------
# MPoly


def _coeff_complexity(field, c):
    return c.complexity if isinstance(field, FnField) else 0


class MPoly:
    """Immutable sparse polynomial. terms: exponent tuple -> field value.

    deg_bound is a tracked upper bound on the total degree (NEG_INF for 0);
    cc_bound bounds the complexity of every coefficient.
    """

    __slots__ = ("field", "vars", "terms", "deg_bound", "cc_bound", "_sorted")

    def __init__(self, field, varnames, terms, deg_bound=None, cc_bound=None):
        self.field = field
        self.vars = tuple(varnames)
        self.terms = terms
        if deg_bound is None:
            deg_bound = max((sum(e) for e in terms), default=NEG_INF)
        self.deg_bound = deg_bound
        if cc_bound is None:
            cc_bound = max((_coeff_complexity(field, c) for c in terms.values()),
                           default=0)
        self.cc_bound = cc_bound
        self._sorted = {}

    # constructors ----------------------------------------------------------

    @staticmethod
    def zero(field, varnames):
        return MPoly(field, varnames, {})

    @staticmethod
    def const(field, varnames, c):
        if field.is_zero(c):
            return MPoly(field, varnames, {})
        return MPoly(field, varnames, {(0,) * len(varnames): c})

    @staticmethod
    def one(field, varnames):
        return MPoly.const(field, varnames, field.one)

    @staticmethod
    def var(field, varnames, name):
        i = list(varnames).index(name)
        e = [0] * len(varnames)
        e[i] = 1
        return MPoly(field, varnames, {tuple(e): field.one})

    @staticmethod
    def from_int(field, varnames, n):
        return MPoly.const(field, varnames, field.from_int(n))

    def _like(self, terms, deg_bound=None, cc_bound=None):
        return MPoly(self.field, self.vars, terms, deg_bound, cc_bound)

    # basic queries ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, var):
        i = self._vi(var)
        if not self.terms:
            return NEG_INF
        return max(e[i] for e in self.terms)

    def _vi(self, var):
        if isinstance(var, int):
            return var
        return self.vars.index(var)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.field.zero)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), self.field.zero)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def __eq__(self, other):
        return (isinstance(other, MPoly) and self.vars == other.vars
                and self.terms == other.terms)

    def __hash__(self):
        raise TypeError("MPoly is not hashable")

    def __repr__(self):
        return f"MPoly({self.fmt()})"

    # arithmetic -------------------------------------------------------------

    def _chk(self, other):
        if self.vars != other.vars or self.field != other.field:
            raise ContextError("variable or field context mismatch")

    def __add__(self, other):
        self._chk(other)
        db = max(self.deg_bound, other.deg_bound)
        cc = max(self.cc_bound, other.cc_bound)
        return self._like(td_add(self.field, self.terms, other.terms), db, cc)

    def __sub__(self, other):
        self._chk(other)
        db = max(self.deg_bound, other.deg_bound)
        cc = max(self.cc_bound, other.cc_bound)
        return self._like(td_sub(self.field, self.terms, other.terms), db, cc)

    def __neg__(self):
        return self._like(td_neg(self.field, self.terms),
                          self.deg_bound, self.cc_bound)

    def __mul__(self, other):
        self._chk(other)
        if not self.terms or not other.terms:
            return self._like({}, NEG_INF, 0)
        db = self.deg_bound + other.deg_bound
        return self._like(td_mul(self.field, self.terms, other.terms), db)

    def scale(self, c):
        return self._like(td_scale(self.field, self.terms, c))

    def __pow__(self, n):
        out = MPoly.one(self.field, self.vars)
        base = self
        while n > 0:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divexact(self, other):
        """Exact quotient, or None when other does not divide self."""
        self._chk(other)
        q = td_divexact(self.field, self.terms, other.terms)
        return None if q is None else self._like(q)

    def gcd(self, other):
        self._chk(other)
        return self._like(td_gcd(self.field, self.terms, other.terms))

    def sqrt(self):
        r = td_sqrt(self.field, self.terms)
        return None if r is None else self._like(r)

    def monic(self, order=GREVLEX):
        if not self.terms:
            return self
        _, lc = self.lead_term(order)
        if self.field.eq(lc, self.field.one):
            return self
        return self.scale(self.field.inv(lc))

    # order-dependent views ---------------------------------------------------

    def sorted_terms(self, order):
        got = self._sorted.get(order.tag)
        if got is None or len(got) != len(self.terms):
            got = sorted(self.terms, key=order.key, reverse=True)
            self._sorted[order.tag] = got
        return got

    def lead_term(self, order=GREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = self.sorted_terms(order)[0]
        return e, self.terms[e]

    # evaluation and substitution ---------------------------------------------

    def evaluate(self, point):
        if len(point) != len(self.vars):
            raise ContextError("evaluation point has wrong length")
        F = self.field
        acc = F.zero
        pows = [{0: F.one} for _ in point]
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    cache = pows[i]
                    if k not in cache:
                        p = point[i]
                        best = max(j for j in cache if j <= k)
                        val = cache[best]
                        for _ in range(k - best):
                            val = F.mul(val, p)
                        cache[k] = val
                    v = F.mul(v, cache[k])
            acc = F.add(acc, v)
        return acc

    def subst_polys(self, images):
        """Substitute an MPoly (in any shared target context) per variable.

        images: list aligned with self.vars. All images must share a context;
        the result lives there.
        """
        if len(images) != len(self.vars):
            raise ContextError("need one image per variable")
        tgt = images[0]
        F, tvars = tgt.field, tgt.vars
        out = MPoly.zero(F, tvars)
        pows = [{0: MPoly.one(F, tvars)} for _ in images]
        for e, c in self.terms.items():
            term = MPoly.const(F, tvars, self._convert_coeff(F, c))
            for i, k in enumerate(e):
                if k:
                    cache = pows[i]
                    if k not in cache:
                        best = max(j for j in cache if j <= k)
                        val = cache[best]
                        for _ in range(k - best):
                            val = val * images[i]
                        cache[k] = val
                    term = term * cache[k]
            out = out + term
        return out

    def _convert_coeff(self, tgt_field, c):
        if tgt_field == self.field:
            return c
        if isinstance(tgt_field, FnField) and tgt_field.base == self.field:
            return tgt_field.from_base(c)
        raise ContextError("cannot convert coefficient between these fields")

    def subst_vars(self, assign):
        """Partially substitute field values: {var -> value}. Keeps context."""
        F = self.field
        idx = {self._vi(v): val for v, val in assign.items()}
        out = {}
        for e, c in self.terms.items():
            v = c
            ne = list(e)
            for i, val in idx.items():
                for _ in range(e[i]):
                    v = F.mul(v, val)
                ne[i] = 0
            if F.is_zero(v):
                continue
            key = tuple(ne)
            s = F.add(out.get(key, F.zero), v)
            if F.is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
        return self._like(out)

    # variable-context surgery --------------------------------------------------

    def extend_vars(self, new_varnames):
        """Embed into a larger context; new_varnames must contain self.vars."""
        pos = [new_varnames.index(v) for v in self.vars]
        n = len(new_varnames)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                ne[pos[i]] = k
            out[tuple(ne)] = c
        return MPoly(self.field, new_varnames, out, self.deg_bound, self.cc_bound)

    def restrict_vars(self, sub_varnames):
        """Drop variables that do not occur; they must all have exponent 0."""
        pos = [self.vars.index(v) for v in sub_varnames]
        keep = set(pos)
        for e in self.terms:
            for i, k in enumerate(e):
                if k and i not in keep:
                    raise ContextError(f"variable {self.vars[i]} still occurs")
        out = {tuple(e[i] for i in pos): c for e, c in self.terms.items()}
        return MPoly(self.field, sub_varnames, out, self.deg_bound, self.cc_bound)

    def rename_vars(self, new_varnames):
        if len(new_varnames) != len(self.vars):
            raise ContextError("rename needs the same arity")
        return MPoly(self.field, new_varnames, dict(self.terms),
                     self.deg_bound, self.cc_bound)

    # univariate views ------------------------------------------------------------

    def univar_coeffs(self, var):
        """View as univariate in var: dict degree -> MPoly (var zeroed)."""
        i = self._vi(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = list(e)
            ne[i] = 0
            out.setdefault(k, {})[tuple(ne)] = c
        return {k: self._like(td) for k, td in out.items()}

    def from_univar_coeffs(self, var, coeffs):
        i = self._vi(var)
        out = {}
        for k, g in coeffs.items():
            for e, c in g.terms.items():
                ne = list(e)
                ne[i] = k
                out[tuple(ne)] = c
        return self._like(out)

    def to_dense_univar(self):
        """Low-to-high coefficient list; requires a 1-variable context."""
        if len(self.vars) != 1:
            raise ContextError("not univariate")
        d = int(self.degree()) if self.terms else -1
        out = [self.field.zero] * (d + 1)
        for e, c in self.terms.items():
            out[e[0]] = c
        return out

    @staticmethod
    def from_dense_univar(field, varname, coeffs):
        terms = {}
        for i, c in enumerate(coeffs):
            if not field.is_zero(c):
                terms[(i,)] = c
        return MPoly(field, (varname,), terms)

    # formatting and JSON ---------------------------------------------------------

    def fmt(self, order=GREVLEX):
        if not self.terms:
            return "0"
        parts = []
        for e in self.sorted_terms(order):
            c = self.terms[e]
            mono = "*".join(
                f"{self.vars[i]}^{k}" if k > 1 else self.vars[i]
                for i, k in enumerate(e) if k)
            cs = self.field.fmt(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif any(ch in cs for ch in "+* "):
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def to_json(self):
        out = []
        for e in self.sorted_terms(GREVLEX):
            out.append({"coeff": self.field.fmt(self.terms[e]),
                        "exps": list(e)})
        return {"vars": list(self.vars), "terms": out}

    @staticmethod
    def from_json(doc, field):
        varnames = tuple(doc["vars"])
        terms = {}
        for t in doc["terms"]:
            c = field.parse(t["coeff"])
            if not field.is_zero(c):
                terms[tuple(t["exps"])] = c
        return MPoly(field, varnames, terms)


# ---------------------------------------------------------------------------
# spec operations


def poly_arith(f, g, op):
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(f, var):
    i = f._vi(var)
    F = f.field
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        if k == 0:
            continue
        v = F.mul(c, F.from_int(k))
        if F.is_zero(v):
            continue  # characteristic kills the exponent
        ne = list(e)
        ne[i] = k - 1
        out[tuple(ne)] = v
    return MPoly(f.field, f.vars, out)


def _fresh_hom_var(varnames):
    for cand in itertools.chain(["X0"], (f"X0_{i}" for i in itertools.count())):
        if cand not in varnames:
            return cand


def homogenize(parts):
    """Homogenize a sum of parts with one shared degree d0 = max deg(part)."""
    if not parts:
        raise ValueError("empty part list")
    if any(p.is_zero() for p in parts):
        raise ValueError("zero part")
    base = parts[0]
    for p in parts[1:]:
        base._chk(p)
    d0 = int(max(p.degree() for p in parts))
    hv = _fresh_hom_var(base.vars)
    new_vars = (hv,) + base.vars
    terms = {}
    F = base.field
    for p in parts:
        for e, c in p.terms.items():
            ne = (d0 - sum(e),) + e
            s = F.add(terms.get(ne, F.zero), c)
            if F.is_zero(s):
                terms.pop(ne, None)
            else:
                terms[ne] = s
    return MPoly(F, new_vars, terms), d0


def kronecker(f, d):
    """Collapse to one variable via X_i -> X^((d+1)^i), i counted from 1."""
    if f.degree() > d:
        raise ValueError("degree exceeds the Kronecker bound")
    base = d + 1
    terms = {}
    for e, c in f.terms.items():
        k = 0
        for i, x in enumerate(e):
            k += x * base ** (i + 1)
        terms[(k,)] = c  # injective on terms since all exponents <= d
    return MPoly(f.field, ("X",), terms)


def kronecker_inverse(g, d, varnames):
    """Pull a univariate polynomial back through the Kronecker map.

    Returns None when some term is not in the image.
    """
    base = d + 1
    n = len(varnames)
    terms = {}
    for (k,), c in g.terms.items():
        if k % base:
            return None
        k //= base
        e = []
        for _ in range(n):
            e.append(k % base)
            k //= base
        if k:
            return None
        terms[tuple(e)] = c
    return MPoly(g.field, tuple(varnames), terms)


def content(f):
    """Content of a univariate polynomial over F(Y), exact and multiplicative.

    Computed as gcd(numerators)/lcm(denominators), both monic under grevlex;
    this equals the true content on the nose for reduced coefficients.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    K = f.field
    if not isinstance(K, FnField):
        raise ContextError("content needs F(Y) coefficients")
    B = K.base
    gnum = {}
    lden = td_one(B, K.nvars)
    for c in f.terms.values():
        gnum = td_gcd(B, gnum, c.num)
        g = td_gcd(B, lden, c.den)
        lden = td_divexact(B, td_mul(B, lden, c.den), g)
    lden = td_monic(B, lden)
    return K.make(gnum, lden)


def primitive_part(f):
    c = content(f)
    inv = f.field.inv(c)
    return f.scale(inv), c


def squarefree_check(f):
    """Squarefree over the algebraic closure of the coefficient field.

    Joint gcd with all nonvanishing partials; in characteristic p a
    nonconstant polynomial whose partials all vanish is a p-th power.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.is_constant():
        return True
    g = None
    for v in f.vars:
        df = partial_derivative(f, v)
        if df.is_zero():
            continue
        g = f.gcd(df) if g is None else g.gcd(df)
        if g.is_constant():
            return True
    if g is None:
        return False  # p-th power structure
    return g.is_constant()


def weighted_degree(f, weights):
    if f.is_zero():
        return NEG_INF
    return max(sum(w * x for w, x in zip(weights, e)) for e in f.terms)


# ---------------------------------------------------------------------------
# univariate factorization (Q and F_p via sympy; deterministic order)


def factor_univariate(f, seed=None):
    """Factor a univariate polynomial over Q or F_p into irreducibles.

    Returns [(factor, multiplicity)] with monic factors sorted by degree
    then coefficient sequence. The leading coefficient of f is the implied
    unit. seed is accepted for interface stability; the method used here
    is deterministic.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    if len(f.vars) != 1:
        raise ContextError("not univariate")
    K = f.field
    if isinstance(K, FnField):
        if K.nvars == 0:
            base_f = _fn_drop(f)
            facs = factor_univariate(base_f, seed)
            return [(_fn_wrap(g, K), m) for g, m in facs]
        raise FactorizationUnsupported(
            "unsupported coefficient field (function field with Y present)")
    if isinstance(K, QQ):
        return _factor_q(f)
    if isinstance(K, GFp):
        return _factor_fp(f)
    raise FactorizationUnsupported(
        f"unsupported coefficient field {K.describe()}")


def _fn_drop(f):
    K = f.field
    terms = {}
    for e, c in f.terms.items():
        val = K.base.div(next(iter(c.num.values())), next(iter(c.den.values()))) \
            if c.num else K.base.zero
        if not K.base.is_zero(val):
            terms[e] = val
    return MPoly(K.base, f.vars, terms)


def _fn_wrap(f, K):
    return MPoly(K, f.vars, {e: K.from_base(c) for e, c in f.terms.items()})


def _factor_q(f):
    import sympy
    x = sympy.Symbol(f.vars[0])
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** e[0]
               for e, c in f.terms.items())
    _, facs = sympy.factor_list(sympy.Poly(expr, x))
    out = []
    for poly, mult in facs:
        mono = sympy.Poly(poly, x).monic()
        coeffs = [Fraction(str(v)) for v in reversed(mono.all_coeffs())]
        out.append((MPoly.from_dense_univar(f.field, f.vars[0], coeffs), mult))
    return _sorted_factors(out)


def _factor_fp(f):
    import warnings

    import sympy
    p = f.field.p
    x = sympy.Symbol(f.vars[0])
    expr = sum(int(c) * x ** e[0] for e, c in f.terms.items())
    with warnings.catch_warnings():
        # sympy's own factor ordering trips its modular-integer comparison
        # deprecation; harmless here
        warnings.simplefilter("ignore")
        _, facs = sympy.factor_list(sympy.Poly(expr, x, modulus=p))
    out = []
    for poly, mult in facs:
        pp = sympy.Poly(poly, x, modulus=p).monic()
        coeffs = [int(v) % p for v in reversed(pp.all_coeffs())]
        out.append((MPoly.from_dense_univar(f.field, f.vars[0], coeffs), mult))
    return _sorted_factors(out)


def _sorted_factors(facs):
    def key(item):
        g, _ = item
        d = int(g.degree())
        dense = g.to_dense_univar()
        return (d, [_coeff_sort_key(g.field, c) for c in dense])

    return sorted(facs, key=key)


def _coeff_sort_key(field, c):
    if isinstance(field, GFp):
        return int(c)
    return (c.numerator, c.denominator)
