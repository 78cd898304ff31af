"""Normalization of affine plane curves and the valuations it exposes.

A curve f(z1, z2) = 0 is studied through a finite projection: a linear
coordinate alpha = c1*z1 + c2*z2 makes the coordinate ring a finite
module over K[alpha], presented by generators T1 = alpha, T2 = the
remaining coordinate, and whatever integral elements get adjoined.  The
discriminant of the module measures how far the presentation is from
the integral closure; enlarging the module at the failing maximal
ideals shrinks the discriminant degree by at least two every round, so
the loop ends.  Closed presentations carry discrete valuations at their
maximal ideals, computed by saturating powers of a uniformizer.
"""

import itertools
import random

from .fields import ContextError, FnField
from .groebner import (BlockOrder, Ideal, _fresh_names, buchberger, eliminate,
                       hom_preimage, idealizer_preimage, krull_dimension,
                       mpoly_det, reduce, ring_hom_kernel, saturation)
from .polys import (GREVLEX, FactorizationUnsupported, MPoly,
                    factor_univariate, partial_derivative)
from .zerodim import (ExtendFieldError, SeparabilityError, extract_maximal,
                      min_root_exponent, quotient_basis)

INF = float("inf")


def _pick_name(stem, taken):
    name = stem
    while name in taken:
        name += "_"
    return name


def _gen_names(avoid, count):
    out, i = [], 1
    while len(out) < count:
        name = f"T{i}"
        i += 1
        if name not in avoid:
            out.append(name)
    return tuple(out)


def _nonzero_elements(K, cap):
    out = []
    for v in K.element_sequence():
        if not K.is_zero(v):
            out.append(v)
            if len(out) >= cap:
                break
    return out


# ---------------------------------------------------------------------------
# discriminants


def disc_univariate(f, var=None):
    """Discriminant of a monic polynomial in `var` over the remaining vars.

    Sylvester resultant of f and df/dvar with the usual alternating sign;
    degree one returns 1.  Non-monic input is rejected since everything
    downstream reads f as a module presentation on the power basis.
    """
    if var is None:
        if len(f.vars) != 1:
            raise ValueError("main variable is ambiguous")
        var = f.vars[0]
    K = f.field
    rest = tuple(v for v in f.vars if v != var)
    coeffs = f.univar_coeffs(var)
    d = max(coeffs)
    if d == 0:
        raise ValueError("polynomial is constant in the main variable")
    lc = coeffs[d]
    if not (lc.is_constant() and K.eq(lc.constant_term(), K.one)):
        raise ValueError("discriminant needs a monic polynomial")
    if d == 1:
        return MPoly.one(K, rest)
    co = {k: g.restrict_vars(rest) for k, g in coeffs.items()}
    dco = {}
    for k, g in co.items():
        if k:
            dg = g.scale(K.from_int(k))
            if not dg.is_zero():
                dco[k - 1] = dg
    zero = MPoly.zero(K, rest)
    n = 2 * d - 1
    rows = []
    for s in range(d - 1):
        row = [zero] * n
        for k, g in co.items():
            row[s + (d - k)] = g
        rows.append(row)
    for s in range(d):
        row = [zero] * n
        for k, g in dco.items():
            row[s + (d - 1 - k)] = g
        rows.append(row)
    det = mpoly_det(rows)
    if ((d * (d - 1)) // 2) % 2:
        det = det.scale(K.from_int(-1))
    return det


# ---------------------------------------------------------------------------
# irreducibility certificates

# The curve machinery needs its input to cut out a domain.  Over Q sympy
# factors multivariate polynomials directly; over F_p it does not, so a
# one-variable Hensel lift with subset recombination stands in.  Conics
# in odd characteristic go through the rank of their symmetric matrix,
# which certifies absolute irreducibility and needs no factoring at all.


def _sympy_q_irreducible(terms, ny, nz):
    # terms: exponent tuple (Y..., Z...) -> Fraction; irreducible over Q(Y)
    # means exactly one factor, counted with multiplicity, touches a Z.
    import sympy
    syms = sympy.symbols([f"v{i}" for i in range(ny + nz)])
    expr = sympy.Integer(0)
    for e, c in terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            if k:
                t *= s ** k
        expr += t
    _, facs = sympy.factor_list(expr)
    zsyms = syms[ny:]
    count = 0
    for poly, mult in facs:
        if any(sympy.degree(poly, s) > 0 for s in zsyms):
            count += mult
    return count == 1


def _uni_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _uni_mul(K, a, b):
    if not a or not b:
        return []
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if K.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = K.add(out[i + j], K.mul(x, y))
    while out and K.is_zero(out[-1]):
        out.pop()
    return out


def _uni_divmod(K, a, b):
    a = list(a)
    q = [K.zero] * max(0, len(a) - len(b) + 1)
    inv = K.inv(b[-1])
    while len(a) >= len(b) and _uni_trim(a):
        if K.is_zero(a[-1]):
            a.pop()
            continue
        c = K.mul(a[-1], inv)
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = K.sub(a[s + i], K.mul(c, y))
        a.pop()
    return _uni_trim(q), _uni_trim(a)


def _uni_xgcd(K, a, b):
    # monic gcd with Bezout cofactors
    r0, r1 = list(a), list(b)
    s0, s1 = [K.one], []
    t0, t1 = [], [K.one]
    while r1:
        q, r = _uni_divmod(K, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _uni_trim([K.sub(x, y) for x, y in
                                itertools.zip_longest(s0, _uni_mul(K, q, s1),
                                                      fillvalue=K.zero)])
        t0, t1 = t1, _uni_trim([K.sub(x, y) for x, y in
                                itertools.zip_longest(t0, _uni_mul(K, q, t1),
                                                      fillvalue=K.zero)])
    lc = r0[-1]
    inv = K.inv(lc)
    scl = lambda v: _uni_trim([K.mul(inv, x) for x in v])
    return scl(r0), scl(s0), scl(t0)


def _poly_to_uni(K, g, main_idx, sec_idx, sec_exp):
    out = {}
    for e, c in g.terms.items():
        if e[sec_idx] == sec_exp:
            out[e[main_idx]] = c
    if not out:
        return []
    lst = [K.zero] * (max(out) + 1)
    for k, c in out.items():
        lst[k] = c
    return _uni_trim(lst)


def _uni_to_poly(K, varnames, main_idx, sec_idx, lst, sec_exp):
    terms = {}
    for k, c in enumerate(lst):
        if K.is_zero(c):
            continue
        e = [0, 0]
        e[main_idx] = k
        e[sec_idx] = sec_exp
        terms[tuple(e)] = c
    return MPoly(K, varnames, terms)


def _trunc_sec(g, sec_idx, n):
    terms = {e: c for e, c in g.terms.items() if e[sec_idx] < n}
    return MPoly(g.field, g.vars, terms)


def _hensel_pair(F, u0, v0, n, main_idx, sec_idx):
    """Lift F = u0*v0 (mod sec) to U*V (mod sec^n), U monic matching u0."""
    K = F.field
    _, s, t = _uni_xgcd(K, u0, v0)
    U = _uni_to_poly(K, F.vars, main_idx, sec_idx, u0, 0)
    V = _uni_to_poly(K, F.vars, main_idx, sec_idx, v0, 0)
    for k in range(1, n):
        err = _trunc_sec(F - U * V, sec_idx, k + 1)
        ek = _poly_to_uni(K, err, main_idx, sec_idx, k)
        if not ek:
            continue
        _, du = _uni_divmod(K, _uni_mul(K, t, ek), u0)
        rest = _uni_trim([K.sub(x, y) for x, y in
                          itertools.zip_longest(ek, _uni_mul(K, du, v0),
                                                fillvalue=K.zero)])
        dv, rem = _uni_divmod(K, rest, u0)
        assert not rem, "correction must split along the Bezout identity"
        U = U + _uni_to_poly(K, F.vars, main_idx, sec_idx, du, k)
        V = V + _uni_to_poly(K, F.vars, main_idx, sec_idx, dv, k)
    return _trunc_sec(U, sec_idx, n), _trunc_sec(V, sec_idx, n)


def _hensel_split(F, locs, n, main_idx, sec_idx):
    if len(locs) == 1:
        return [_trunc_sec(F, sec_idx, n)]
    K = F.field
    h = len(locs) // 2
    u0 = [K.one]
    for g in locs[:h]:
        u0 = _uni_mul(K, u0, g)
    v0 = [K.one]
    for g in locs[h:]:
        v0 = _uni_mul(K, v0, g)
    U, V = _hensel_pair(F, u0, v0, n, main_idx, sec_idx)
    return (_hensel_split(U, locs[:h], n, main_idx, sec_idx)
            + _hensel_split(V, locs[h:], n, main_idx, sec_idx))


def _fp_bivariate_irreducible(f):
    """Irreducibility over F_p of a bivariate polynomial, by Hensel lifting
    a squarefree fiber and testing every subset product for exact division.
    Factor degrees in the second variable never exceed the input's, so one
    extra order of precision makes truncation faithful."""
    K = f.field
    xv, yv = f.vars
    for main in (yv, xv):
        co = f.univar_coeffs(main)
        if len(co) > 1:
            g = None
            for c in co.values():
                g = c if g is None else g.gcd(c)
            if g.degree() > 0:
                return False
    if f.degree_in(yv) == 0 or f.degree_in(xv) == 0:
        var = xv if f.degree_in(yv) == 0 else yv
        facs = factor_univariate(f.restrict_vars((var,)))
        return sum(m for _, m in facs) == 1
    fy = partial_derivative(f, yv)
    fx = partial_derivative(f, xv)
    if fy.is_zero() and fx.is_zero():
        return False  # p-th power
    mainv, secv = (yv, xv) if not fy.is_zero() else (xv, yv)
    df = partial_derivative(f, mainv)
    if f.gcd(df).degree() > 0:
        return False
    mi, si = f.vars.index(mainv), f.vars.index(secv)
    work = f
    co = work.univar_coeffs(mainv)
    if co[max(co)].degree() > 0:
        # shear sec -> sec + c*main until the top coefficient is a unit
        d = f.degree()
        main_p = MPoly.var(K, f.vars, mainv)
        sec_p = MPoly.var(K, f.vars, secv)
        work = None
        for cv in _nonzero_elements(K, K.p - 1):
            val = K.zero
            for e, c in f.terms.items():
                if sum(e) == d:
                    v = c
                    for _ in range(e[si]):
                        v = K.mul(v, cv)
                    val = K.add(val, v)
            if K.is_zero(val):
                continue
            images = [None, None]
            images[mi] = main_p
            images[si] = sec_p + main_p.scale(cv)
            work = f.subst_polys(images)
            break
        if work is None:
            raise ContextError("cannot certify irreducibility: "
                               "no shear exposes a unit leading coefficient")
        co = work.univar_coeffs(mainv)
    m = max(co)
    work = work.scale(K.inv(co[m].constant_term()))
    fiber = None
    for a in K.element_sequence():
        ua = work.subst_vars({secv: a}).restrict_vars((mainv,))
        dua = partial_derivative(ua, mainv)
        if dua.is_zero() or ua.gcd(dua).degree() > 0:
            continue
        fiber = (a, ua)
        break
    if fiber is None:
        raise ContextError("cannot certify irreducibility: "
                           "every fiber of the chosen projection is multiple")
    a, ua = fiber
    facs = factor_univariate(ua)
    if sum(mm for _, mm in facs) == 1:
        return True
    locs = [_poly_to_uni(K, q.extend_vars(work.vars), mi, si, 0)
            for q, _ in facs]
    images = [None, None]
    images[mi] = MPoly.var(K, work.vars, mainv)
    images[si] = MPoly.var(K, work.vars, secv) + MPoly.const(K, work.vars, a)
    ws = work.subst_polys(images)
    n = ws.degree_in(secv) + 1
    lifted = _hensel_split(ws, locs, n, mi, si)
    r = len(lifted)
    for size in range(1, r // 2 + 1):
        for S in itertools.combinations(range(r), size):
            cand = MPoly.one(K, work.vars)
            for i in S:
                cand = _trunc_sec(cand * lifted[i], si, n)
            if ws.divexact(cand) is not None:
                return False
    return True


def _conic_absolutely_irreducible(f):
    # rank-3 symmetric matrix of a conic: smooth, hence irreducible over
    # any extension; only valid away from characteristic 2
    K = f.field
    if K.char == 2:
        raise ContextError("conic certificate unavailable in characteristic 2")
    half = K.inv(K.from_int(2))
    c = lambda i, j: f.coefficient((i, j))
    m = [[c(2, 0), K.mul(half, c(1, 1)), K.mul(half, c(1, 0))],
         [K.mul(half, c(1, 1)), c(0, 2), K.mul(half, c(0, 1))],
         [K.mul(half, c(1, 0)), K.mul(half, c(0, 1)), c(0, 0)]]
    det = K.zero
    for p in itertools.permutations(range(3)):
        sgn = 1 if p in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
        v = K.one
        for i in range(3):
            v = K.mul(v, m[i][p[i]])
        det = K.add(det, v if sgn > 0 else K.neg(v))
    return not K.is_zero(det)


def _fn_cleared_terms(f):
    """Coefficients of f over a function field, with denominators cleared:
    exponent tuple (Y..., Z...) -> base element."""
    K = f.field
    acc = f
    seen = set()
    for _, c in f.terms.items():
        key = tuple(sorted(c.den.items()))
        if key in seen:
            continue
        seen.add(key)
        acc = acc.scale(K.make(dict(c.den)))
    out = {}
    base = K.base
    for e, c in acc.terms.items():
        dk, = c.den.keys()
        if any(dk):
            raise ContextError("denominators failed to clear")
        dv, = c.den.values()
        for ye, bc in c.num.items():
            key = tuple(ye) + tuple(e)
            val = base.div(bc, dv)
            cur = out.get(key)
            s = base.add(cur, val) if cur is not None else val
            if base.is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
    return out


def _fn_specialized(f, point):
    """Evaluate the Y-part of cleared coefficients at a base point."""
    K = f.field
    base = K.base
    cleared = _fn_cleared_terms(f)
    ny = K.nvars
    out = {}
    for e, c in cleared.items():
        v = c
        for i in range(ny):
            for _ in range(e[i]):
                v = base.mul(v, point[i])
        ze = e[ny:]
        cur = out.get(ze, base.zero)
        s = base.add(cur, v)
        if base.is_zero(s):
            out.pop(ze, None)
        else:
            out[ze] = s
    return MPoly(base, f.vars, out)


def _assert_irreducible(f):
    K = f.field
    if f.degree() == 1:
        return
    if f.degree() == 2 and K.char != 2:
        if _conic_absolutely_irreducible(f):
            return
        # degenerate conics may still be irreducible over the base field;
        # fall through to the field-specific certificates
    kind = getattr(K, "kind", None)
    if kind == "q":
        if _sympy_q_irreducible(dict(f.terms), 0, 2):
            return
        raise ContextError("curve polynomial is reducible")
    if kind == "fp":
        if _fp_bivariate_irreducible(f):
            return
        raise ContextError("curve polynomial is reducible")
    if kind == "fn":
        base = K.base
        if K.nvars == 0:
            terms = {}
            for e, c in f.terms.items():
                nv, = c.num.values() or (base.zero,)
                dv, = c.den.values()
                terms[e] = base.div(nv, dv)
            return _assert_irreducible(MPoly(base, f.vars, terms))
        if getattr(base, "kind", None) == "q":
            if _sympy_q_irreducible(_fn_cleared_terms(f), K.nvars, 2):
                return
            raise ContextError("curve polynomial is reducible")
        if getattr(base, "kind", None) == "fp":
            # a degree-preserving specialization that stays irreducible
            # certifies irreducibility upstairs
            probes = 0
            vals = [base.from_int(i) for i in range(base.p)]
            for point in itertools.product(vals, repeat=K.nvars):
                fs = _fn_specialized(f, point)
                if fs.is_zero() or fs.degree() != f.degree():
                    continue
                probes += 1
                try:
                    if _fp_bivariate_irreducible(fs):
                        return
                except ContextError:
                    pass
                if probes >= 24:
                    break
            raise ContextError("cannot certify irreducibility over this "
                               "coefficient field")
    raise ContextError("cannot certify irreducibility over this "
                       "coefficient field")


# ---------------------------------------------------------------------------
# curve contexts


class CurveContext:
    """An irreducible plane curve with a chosen finite, separable projection.

    direction (c1, c2) cuts alpha = c1*z1 + c2*z2; the coordinate not
    spanned by the projection serves as the module generator.  With no
    direction given, small pairs with both entries nonzero are tried
    until the induced extension is finite and separable; exhausting the
    supply raises ExtendFieldError.
    """

    def __init__(self, base, f, direction=None):
        if len(f.vars) != 2:
            raise ContextError("expected a plane curve in two variables")
        if f.field != base:
            raise ContextError("curve polynomial is not over the stated field")
        if f.is_zero() or f.is_constant():
            raise ContextError("curve polynomial is constant")
        self.base = base
        self.f = f
        self.e = getattr(base, "root_exp", 0)
        self.avar = _pick_name("A", set(f.vars))
        self.tvar = _pick_name("T", set(f.vars) | {self.avar})
        _assert_irreducible(f)
        if direction is not None:
            c1, c2 = (self._coerce(c) for c in direction)
            if base.is_zero(c1) and base.is_zero(c2):
                raise ContextError("projection direction must be nonzero")
            self._try_direction(c1, c2)
        else:
            self._auto_direction()

    def _coerce(self, c):
        return self.base.from_int(c) if isinstance(c, int) else c

    def _try_direction(self, c1, c2):
        self.direction = (c1, c2)
        self.xbar_name = self.f.vars[1] if not self.base.is_zero(c1) \
            else self.f.vars[0]
        self.minpoly = _minimal_polynomial(self)
        self.s = max(self.minpoly.univar_coeffs(self.tvar))
        self.disc0 = disc_univariate(self.minpoly, self.tvar)
        if self.disc0.is_zero():
            raise SeparabilityError(
                min_root_exponent(self.s, self.base.char or 2))

    def _auto_direction(self):
        K = self.base
        d = max(2, int(self.f.degree()))
        cap = 2 * d * d + 8
        pool = _nonzero_elements(K, max(4, int(cap ** 0.5) + 2))
        pairs = sorted(itertools.product(range(len(pool)), repeat=2),
                       key=lambda ij: (max(ij), ij))
        for i, j in pairs[:cap]:
            try:
                self._try_direction(pool[i], pool[j])
                return
            except (ValueError, SeparabilityError):
                continue
        raise ExtendFieldError(
            "no projection direction over this field is finite and separable")


def _minimal_polynomial(ctx):
    f = ctx.f
    K = f.field
    z1n, z2n = f.vars
    ext = (z1n, z2n, ctx.tvar, ctx.avar)
    c1, c2 = ctx.direction
    z1 = MPoly.var(K, ext, z1n)
    z2 = MPoly.var(K, ext, z2n)
    alpha = z1.scale(c1) + z2.scale(c2)
    xbar = MPoly.var(K, ext, ctx.xbar_name)
    gens = [f.extend_vars(ext),
            MPoly.var(K, ext, ctx.tvar) - xbar,
            MPoly.var(K, ext, ctx.avar) - alpha]
    gb = eliminate(Ideal(gens, K, ext), [z1n, z2n])
    g = gb.polys[0]
    co = g.univar_coeffs(ctx.tvar)
    dt = max(co)
    if dt == 0:
        raise ValueError("projection direction is not finite on the curve")
    lc = co[dt]
    if not lc.is_constant():
        raise ValueError("projection direction is not finite on the curve")
    return g.scale(K.inv(lc.constant_term()))


def minpoly_over_Kalpha(ctx):
    """Monic minimal polynomial of the module generator over the projection
    coordinate, with the generator first and the coordinate second."""
    return ctx.minpoly


# ---------------------------------------------------------------------------
# module presentations over the projection coordinate


class _AlphaView:
    """The presentation rewritten over K(alpha): alpha turns into a field
    element, the other generators stay, and traces against the standard
    monomials give the bilinear trace form."""

    def __init__(self, O):
        K = O.field
        if isinstance(K, FnField):
            self.KA = FnField(K.base, tuple(K.varnames) + (O.avar,),
                              K.root_exp)
            kn = K.nvars
            self.up = lambda c: self.KA.promote(K, c, list(range(kn)))
        else:
            self.KA = FnField(K, (O.avar,))
            self.up = self.KA.from_base
        self.apos = O.ring.vars.index(O.alpha_name)
        self.rv = tuple(v for i, v in enumerate(O.ring.vars)
                        if i != self.apos)
        gens = [self._split(g) for g in O.ring.nonzero_gens()]
        gb = buchberger(gens, GREVLEX)
        self.gb_polys = list(gb.polys)
        I = Ideal(self.gb_polys, self.KA, self.rv)
        I._gb_cache[(GREVLEX.tag, False)] = gb
        qb = quotient_basis(I)
        self.monomials = qb.monomials
        self.dim = qb.dim

    def _split(self, g):
        KA, up, apos = self.KA, self.up, self.apos
        A = KA.var(KA.nvars - 1)
        pows = {0: KA.one}
        out = {}
        for e, c in g.terms.items():
            k = e[apos]
            if k not in pows:
                best = max(j for j in pows if j < k)
                v = pows[best]
                for _ in range(k - best):
                    v = KA.mul(v, A)
                pows[k] = v
            ne = tuple(x for i, x in enumerate(e) if i != apos)
            s = KA.add(out.get(ne, KA.zero), KA.mul(up(c), pows[k]))
            if KA.is_zero(s):
                out.pop(ne, None)
            else:
                out[ne] = s
        return MPoly(KA, self.rv, out)

    def trace(self, x):
        KA = self.KA
        tot = KA.zero
        for m in self.monomials:
            mp = MPoly(KA, self.rv, {m: KA.one})
            nf = reduce(x * mp, self.gb_polys).remainder
            c = nf.terms.get(m)
            if c is not None:
                tot = KA.add(tot, c)
        return tot

    def disc(self, basis):
        bs = [reduce(self._split(b), self.gb_polys).remainder for b in basis]
        n = len(bs)
        gram = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                t = self.trace(reduce(bs[i] * bs[j], self.gb_polys).remainder)
                gram[i][j] = gram[j][i] = t
        return _field_det(self.KA, gram)


def _field_det(K, M):
    n = len(M)
    M = [row[:] for row in M]
    det = K.one
    for j in range(n):
        piv = next((i for i in range(j, n) if not K.is_zero(M[i][j])), None)
        if piv is None:
            return K.zero
        if piv != j:
            M[j], M[piv] = M[piv], M[j]
            det = K.neg(det)
        det = K.mul(det, M[j][j])
        inv = K.inv(M[j][j])
        for i in range(j + 1, n):
            if K.is_zero(M[i][j]):
                continue
            fac = K.mul(M[i][j], inv)
            M[i] = [K.sub(a, K.mul(fac, b)) for a, b in zip(M[i], M[j])]
    return det


def _unflatten_alpha(fe, K, avar, KA):
    na = KA.nvars - 1
    if any(e[na] for e in fe.den):
        raise ValueError("value is not polynomial in the projection "
                         "coordinate")
    if isinstance(K, FnField):
        den = {tuple(e[:na]): c for e, c in fe.den.items()}
        grouped = {}
        for e, c in fe.num.items():
            grouped.setdefault(e[na], {})[tuple(e[:na])] = c
        terms = {(a,): K.make(num, dict(den)) for a, num in grouped.items()}
    else:
        (dexp, dc), = fe.den.items()
        terms = {(e[na],): K.div(c, dc) for e, c in fe.num.items()}
    return MPoly(K, (avar,), terms)


class OrderPresentation:
    """A module-finite order inside the curve's function field.

    ring          ideal in T1..Tm presenting the order; T1 is the
                  projection coordinate
    images        value of each ring generator in the localized ambient
                  ring K[z1, z2, U] / (f, disc0(alpha) * U - 1)
    coord_images  the curve coordinates written in the ring generators
    disc_gen      monic generator of the discriminant of the order,
                  a polynomial in the projection coordinate
    """

    def __init__(self, ctx, ring, images, coord_images, ambient=None,
                 steps=()):
        self.ctx = ctx
        self.field = ring.field
        self.ring = ring
        self.images = list(images)
        self.coord_images = list(coord_images)
        self.alpha_name = ring.vars[0]
        self.avar = ctx.avar
        self.disc0 = ctx.disc0
        self.e = ctx.e
        self.s = ctx.s
        self.steps = list(steps)
        self.ambient = ambient if ambient is not None else _ambient(ctx)
        self._certified_closed = False
        self._aview = None
        self._val_cache = {}
        self._validate()
        self.disc_gen = _discriminant_generator(self)

    @property
    def alpha_image(self):
        return self.images[0]

    def _alpha_view(self):
        if self._aview is None:
            self._aview = _AlphaView(self)
            if self._aview.dim != self.s:
                raise ValueError("presentation rank does not match the "
                                 "generic fiber degree")
        return self._aview

    def _validate(self):
        ring = self.ring
        K = self.field
        if krull_dimension(ring) != 1:
            raise ValueError("presentation is not one-dimensional")
        if len(self.images) != len(ring.vars):
            raise ValueError("need one ambient image per ring generator")
        gb = ring.groebner()
        fc = self.ctx.f.subst_polys(self.coord_images)
        if not reduce(fc, gb.polys).remainder.is_zero():
            raise ValueError("coordinates do not satisfy the curve equation")
        c1, c2 = self.ctx.direction
        t1 = MPoly.var(K, ring.vars, self.alpha_name)
        comb = self.coord_images[0].scale(c1) + self.coord_images[1].scale(c2)
        if not reduce(comb - t1, gb.polys).remainder.is_zero():
            raise ValueError("projection coordinate disagrees with the "
                             "curve coordinates")
        amb_gb = self.ambient.groebner()
        for g in ring.nonzero_gens():
            img = g.subst_polys(self.images)
            if not reduce(img, amb_gb.polys).remainder.is_zero():
                raise ValueError("ring relation fails on the ambient images")
        self.gen_degrees = {}
        for v in ring.vars:
            if v == self.alpha_name:
                continue
            others = [w for w in ring.vars if w not in (self.alpha_name, v)]
            pair_gb = eliminate(ring, others) if others else ring.groebner()
            g = pair_gb.polys[0]
            co = g.univar_coeffs(v)
            dv = max(co)
            if dv == 0 or not co[dv].is_constant():
                raise ValueError(f"generator {v} is not integral over the "
                                 "projection coordinate")
            self.gen_degrees[v] = dv

    def __repr__(self):
        return (f"OrderPresentation(vars={self.ring.vars}, "
                f"disc_gen_degree={self.disc_gen.degree()})")


def _ambient(ctx):
    K = ctx.base
    f = ctx.f
    (uvar,) = _fresh_names("U", f.vars, 1)
    avars = tuple(f.vars) + (uvar,)
    c1, c2 = ctx.direction
    z1 = MPoly.var(K, avars, f.vars[0])
    z2 = MPoly.var(K, avars, f.vars[1])
    alpha = z1.scale(c1) + z2.scale(c2)
    disc0_z = ctx.disc0.subst_polys([alpha])
    u = MPoly.var(K, avars, uvar)
    return Ideal([f.extend_vars(avars), disc0_z * u - MPoly.one(K, avars)],
                 K, avars)


def _into_ring(p, O):
    return p.rename_vars((O.alpha_name,)).extend_vars(O.ring.vars)


def _discriminant_generator(O):
    view = O._alpha_view()
    K = O.field
    rvars = O.ring.vars
    pool = []
    for exps in itertools.product(*[range(O.gen_degrees[v])
                                    for v in view.rv]):
        e = [0] * len(rvars)
        for v, k in zip(view.rv, exps):
            e[rvars.index(v)] = k
        pool.append(MPoly(K, rvars, {tuple(e): K.one}))
    pool.sort(key=lambda g: GREVLEX.key(g.lead_term(GREVLEX)[0]))
    g = None
    for comb in itertools.combinations(pool, O.s):
        d = view.disc(list(comb))
        if view.KA.is_zero(d):
            continue
        dp = _unflatten_alpha(d, K, O.avar, view.KA)
        g = dp if g is None else g.gcd(dp)
        if g.degree() == 0:
            break
    if g is None:
        raise ValueError("module generators do not contain a basis")
    return g.monic()


def disc_tuple(O, basis):
    """Discriminant of an s-tuple of order elements, as a polynomial in the
    projection coordinate.  The flag marks tuples that are linearly
    dependent over the rational functions in that coordinate, where the
    trace form degenerates."""
    if len(basis) != O.s:
        raise ValueError("tuple length must match the generic fiber degree")
    view = O._alpha_view()
    d = view.disc(list(basis))
    if view.KA.is_zero(d):
        return MPoly.zero(O.field, (O.avar,)), True
    return _unflatten_alpha(d, O.field, O.avar, view.KA), False


# ---------------------------------------------------------------------------
# integral closure


def is_integrally_closed(O):
    """(closed, witnesses): witnesses are maximal ideals over the
    discriminant where the idealizer is strictly larger than the order.
    Factoring the discriminant generator is unavoidable here, so fields
    without univariate factoring raise FactorizationUnsupported."""
    c = O.disc_gen
    if c.degree() == 0:
        return True, []
    K = O.field
    ring = O.ring
    c_ring = _into_ring(c, O)
    closed_gb = Ideal(list(ring.generators) + [c_ring], K,
                      ring.vars).groebner()
    closed_key = [g.fmt() for g in closed_gb.polys]
    wits = []
    for q, _ in factor_univariate(c):
        q_ring = _into_ring(q, O)
        fiber = Ideal(list(ring.generators) + [q_ring], K, ring.vars)
        for m in extract_maximal(fiber):
            W = idealizer_preimage(ring, list(m.gb.polys), c_ring)
            if [g.fmt() for g in W.polys] != closed_key:
                wits.append(m)
    return (not wits, wits)


def _closed_check(O):
    # squarefree discriminant already certifies closedness, and the gcd
    # needs no factoring; fall back to the fiber-by-fiber test otherwise
    c = O.disc_gen
    if c.degree() == 0:
        return True, []
    dc = partial_derivative(c, O.avar)
    if not dc.is_zero() and c.gcd(dc).degree() == 0:
        return True, []
    return is_integrally_closed(O)


def enlarge_order(O, m):
    """Adjoin the first idealizer element at a witness maximal ideal.

    The element w/c (w from the scaled-idealizer basis, c the
    discriminant generator) is integral; multiplying by disc0/c and
    reducing against the localized ambient ring expresses it without the
    inverted variable, which realizes the containment of the enlarged
    order inside (1/disc0) times the original."""
    K = O.field
    ring = O.ring
    c = O.disc_gen
    c_ring = _into_ring(c, O)
    W = idealizer_preimage(ring, list(m.gb.polys), c_ring)
    closed_gb = Ideal(list(ring.generators) + [c_ring], K,
                      ring.vars).groebner()
    gamma = next((w for w in W.polys
                  if not reduce(w, closed_gb.polys).remainder.is_zero()),
                 None)
    if gamma is None:
        raise ValueError("maximal ideal is not a closure witness")
    q = O.disc0.divexact(c)
    assert q is not None, \
        "the discriminant generator divides the power-basis discriminant"
    amb = O.ambient
    ui = len(amb.vars) - 1
    order_u = BlockOrder([ui])
    G2 = amb.groebner(order_u)
    w_img = gamma.subst_polys(O.images)
    q_img = q.subst_polys([O.alpha_image])
    n_poly = reduce(w_img * q_img, G2.polys, order_u).remainder
    assert all(e[ui] == 0 for e in n_poly.terms), \
        "idealizer element times cofactor must avoid the inverted variable"
    new_img = n_poly * MPoly.var(K, amb.vars, amb.vars[ui])
    new_name = _gen_names(set(ring.vars) | set(amb.vars), 1)[0]
    new_vars = tuple(ring.vars) + (new_name,)
    kernel = ring_hom_kernel(amb, O.images + [new_img],
                             znames=list(new_vars))
    new_ring = Ideal(list(kernel.polys), K, new_vars)
    coords = [hom_preimage(MPoly.var(K, amb.vars, zn), amb,
                           O.images + [new_img], znames=list(new_vars))
              for zn in O.ctx.f.vars]
    O2 = OrderPresentation(O.ctx, new_ring, O.images + [new_img], coords,
                           ambient=amb, steps=O.steps)
    if O2.disc_gen.degree() > c.degree() - 2:
        raise ValueError("enlargement did not shrink the discriminant")
    O2.steps.append({"disc_degree": O2.disc_gen.degree(),
                     "adjoined": new_name})
    return O2


def trager_normalize(ctx):
    """Integral closure of the power-basis order of the curve, by repeated
    idealizer enlargements at the maximal ideals the discriminant flags."""
    try:
        O = _initial_presentation(ctx)
        bound = max(1, ctx.disc0.degree() // 2)
        while True:
            closed, wits = _closed_check(O)
            if closed:
                O._certified_closed = True
                return O
            if len(O.steps) >= bound:
                raise RuntimeError("normalization exceeded its discriminant "
                                   "degree budget")
            O = enlarge_order(O, wits[0])
    except SeparabilityError as err:
        K = ctx.base
        if isinstance(K, FnField) and K.char:
            return trager_normalize(_lift_context(ctx, err.required_exponent))
        raise


def _initial_presentation(ctx):
    K = ctx.base
    f = ctx.f
    amb = _ambient(ctx)
    names = _gen_names(set(f.vars) | set(amb.vars), 2)
    F = ctx.minpoly.rename_vars((names[1], names[0])).extend_vars(names)
    c1, c2 = ctx.direction
    z1 = MPoly.var(K, amb.vars, f.vars[0])
    z2 = MPoly.var(K, amb.vars, f.vars[1])
    alpha = z1.scale(c1) + z2.scale(c2)
    xbar = MPoly.var(K, amb.vars, ctx.xbar_name)
    t1 = MPoly.var(K, names, names[0])
    t2 = MPoly.var(K, names, names[1])
    if not K.is_zero(c1):
        coords = [(t1 - t2.scale(c2)).scale(K.inv(c1)), t2]
    else:
        coords = [t2, t1.scale(K.inv(c2))]
    return OrderPresentation(ctx, Ideal([F], K, names), [alpha, xbar],
                             coords, ambient=amb, steps=[])


def _lift_context(ctx, required):
    K = ctx.base
    e_new = K.root_exp + max(1, required)
    K2 = FnField(K.base, K.varnames, e_new)
    f2 = MPoly(K2, ctx.f.vars,
               {e: K.lift_to_root_extension(c, e_new)
                for e, c in ctx.f.terms.items()})
    c1, c2 = ctx.direction
    return CurveContext(K2, f2, (K.lift_to_root_extension(c1, e_new),
                                 K.lift_to_root_extension(c2, e_new)))


def localization_presentation(I, f):
    """Present I's coordinate ring with f inverted: a fresh variable U with
    the relation f * U = 1."""
    gb = I.groebner()
    r = reduce(f, gb.polys).remainder if gb.polys else f
    if r.is_zero():
        raise ValueError("localizing at zero")
    (uvar,) = _fresh_names("U", I.vars, 1)
    ext = tuple(I.vars) + (uvar,)
    gens = [g.extend_vars(ext) for g in I.nonzero_gens()]
    gens.append(f.extend_vars(ext) * MPoly.var(I.field, ext, uvar)
                - MPoly.one(I.field, ext))
    return Ideal(gens, I.field, ext)


# ---------------------------------------------------------------------------
# valuations


class ValuationWitness:
    """A maximal ideal of a closed presentation together with a uniformizer:
    an element of the ideal that stays out of its square."""

    def __init__(self, maximal_ideal, uniformizer):
        self.maximal_ideal = maximal_ideal
        self.uniformizer = uniformizer


def valuation_witness(O, m, seed=0):
    ring = O.ring
    K = O.field
    mg = list(m.gb.polys)
    sq = list(ring.generators)
    sq += [a * b for a, b in
           itertools.combinations_with_replacement(mg, 2)]
    sq_gb = Ideal(sq, K, ring.vars).groebner()
    for g in mg:
        if not reduce(g, sq_gb.polys).remainder.is_zero():
            return ValuationWitness(m, g)
    # a generating set never lies entirely inside the square, but random
    # combinations keep this total if a degenerate basis shows up
    rng = random.Random(seed)
    pool = _nonzero_elements(K, 8)
    for _ in range(64):
        cand = MPoly.zero(K, ring.vars)
        for g in mg:
            cand = cand + g.scale(rng.choice(pool))
        if not reduce(cand, sq_gb.polys).remainder.is_zero():
            return ValuationWitness(m, cand)
    raise RuntimeError("no uniformizer below the square of the maximal ideal")


def _uniformizer_data(O, m):
    key = tuple(g.fmt() for g in m.gb.polys)
    got = O._val_cache.get(key)
    if got is not None:
        return got
    u = valuation_witness(O, m).uniformizer
    supp = extract_maximal(Ideal(list(O.ring.generators) + [u],
                                 O.field, O.ring.vars))
    w = None
    for n in supp:
        if tuple(g.fmt() for g in n.gb.polys) == key:
            continue
        pick = next(g for g in n.gb.polys
                    if not reduce(g, m.gb.polys).remainder.is_zero())
        w = pick if w is None else w * pick
    O._val_cache[key] = (u, w)
    return u, w


def ord_at(O, m, num, den=None):
    """Order of vanishing of num (or num/den) at the maximal ideal m.

    Only meaningful on presentations certified closed, where the local
    ring is a discrete valuation ring; anything else is rejected.  The
    value is the largest k with the element inside the m-primary part of
    the k-th power of the uniformizer, computed by saturating away the
    other maximal ideals sharing the fiber."""
    if not getattr(O, "_certified_closed", False):
        raise ValueError("valuations need a presentation certified closed")
    gb = O.ring.groebner()
    vn = _ord_raw(O, m, gb, num)
    if den is None:
        return vn
    vd = _ord_raw(O, m, gb, den)
    if vd == INF:
        raise ValueError("denominator vanishes identically on the curve")
    if vn == INF:
        return INF
    return vn - vd


def _ord_raw(O, m, gb, x):
    if reduce(x, gb.polys).remainder.is_zero():
        return INF
    u, w = _uniformizer_data(O, m)
    K = O.field
    rvars = O.ring.vars
    cap = 2 * (int(x.degree()) + 1) * max(1, O.s) \
        * max(1, O.disc0.degree()) + 8
    k = 0
    upow = MPoly.one(K, rvars)
    while True:
        upow = upow * u
        J = Ideal(list(O.ring.generators) + [upow], K, rvars)
        if w is not None:
            J = saturation(J, w)
        if reduce(x, J.groebner().polys).remainder.is_zero():
            k += 1
            if k > cap:
                raise RuntimeError("valuation exceeded its degree bound")
        else:
            return k
