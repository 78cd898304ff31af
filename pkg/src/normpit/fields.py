"""Exact coefficient fields.

Rationals, prime fields, algebraic extensions, and multivariate rational
function fields F(Y1..Yl) with tracked numerator/denominator degree bounds.
Positive-characteristic function fields carry a root exponent e and work in
substitution variables W_i with Y_i = W_i^(p^e), so no fractional exponents
ever appear.

Values are plain Python data (Fraction, int, tuple, FracElement); the field
objects carry the arithmetic. Everything is immutable after construction.

The term-dict helpers (td_*) below implement raw sparse polynomial
arithmetic over a base field: a polynomial is a dict mapping exponent
tuples to nonzero base values. FracElement and the higher polynomial layer
both build on them.
"""

import itertools
import math
import os
from fractions import Fraction


class ContextError(ValueError):
    """Operands belong to different field contexts."""


class SpecializationError(ArithmeticError):
    """A denominator vanished at a specialization point.

    The offending denominator (a term dict over the base field) is kept on
    the exception; certificate construction collects exactly these.
    """

    def __init__(self, denominator, point=None):
        super().__init__("denominator vanishes at specialization point")
        self.denominator = denominator
        self.point = point


class InvalidRootExtension(ValueError):
    pass


def default_seed(seed=None):
    if seed is not None:
        return int(seed)
    env = os.environ.get("NORMPIT_SEED")
    return int(env) if env else 0


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, valid for n < 3.3e24 (covers p < 2^61)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# term-dict polynomial arithmetic over an arbitrary base field object


def td_zero():
    return {}


def td_const(field, nvars, c):
    if field.is_zero(c):
        return {}
    return {(0,) * nvars: c}


def td_one(field, nvars):
    return {(0,) * nvars: field.one}


def td_var(field, nvars, i):
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): field.one}


def td_is_zero(a):
    return not a


def td_deg(a):
    # total degree; -1 for the zero polynomial (internal sentinel)
    if not a:
        return -1
    return max(sum(e) for e in a)


def td_deg_in(a, i):
    if not a:
        return -1
    return max(e[i] for e in a)


def td_add(field, a, b):
    out = dict(a)
    for e, c in b.items():
        if e in out:
            s = field.add(out[e], c)
            if field.is_zero(s):
                del out[e]
            else:
                out[e] = s
        else:
            out[e] = c
    return out


def td_neg(field, a):
    return {e: field.neg(c) for e, c in a.items()}


def td_sub(field, a, b):
    return td_add(field, a, td_neg(field, b))


def td_scale(field, a, c):
    if field.is_zero(c):
        return {}
    return {e: field.mul(v, c) for e, v in a.items()}


def td_mul(field, a, b):
    if not a or not b:
        return {}
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            p = field.mul(ca, cb)
            if e in out:
                s = field.add(out[e], p)
                if field.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            elif not field.is_zero(p):
                out[e] = p
    return out


def td_pow(field, a, n):
    nv = None
    for e in a:
        nv = len(e)
        break
    out = td_one(field, nv if nv is not None else 0)
    base = a
    while n > 0:
        if n & 1:
            out = td_mul(field, out, base)
        base = td_mul(field, base, base)
        n >>= 1
    return out


def td_eval(field, a, point):
    """Full evaluation at a tuple of base-field values."""
    acc = field.zero
    for e, c in a.items():
        v = c
        for i, k in enumerate(e):
            if k:
                v = field.mul(v, _field_pow(field, point[i], k))
        acc = field.add(acc, v)
    return acc


def td_subst(field, a, assign):
    """Substitute base values for some variables (index -> value).

    Exponents of substituted variables are zeroed; arity is preserved.
    """
    out = {}
    for e, c in a.items():
        v = c
        ne = list(e)
        for i, val in assign.items():
            if e[i]:
                v = field.mul(v, _field_pow(field, val, e[i]))
                ne[i] = 0
        key = tuple(ne)
        if field.is_zero(v):
            continue
        if key in out:
            s = field.add(out[key], v)
            if field.is_zero(s):
                del out[key]
            else:
                out[key] = s
        else:
            out[key] = v
    return out


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def td_lead(field, a):
    """Leading (exponent, coeff) under grevlex. a must be nonzero."""
    e = max(a, key=_grevlex_key)
    return e, a[e]


def td_monic(field, a):
    if not a:
        return a
    _, lc = td_lead(field, a)
    if field.eq(lc, field.one):
        return a
    inv = field.inv(lc)
    return {e: field.mul(c, inv) for e, c in a.items()}


def td_divides_mono(ea, eb):
    return all(x <= y for x, y in zip(ea, eb))


def td_divexact(field, a, b):
    """Exact division a / b; returns None if b does not divide a."""
    if not b:
        raise ZeroDivisionError("term-dict division by zero")
    if not a:
        return {}
    rem = dict(a)
    eb, cb = td_lead(field, b)
    cbinv = field.inv(cb)
    quo = {}
    while rem:
        ea, ca = td_lead(field, rem)
        if not td_divides_mono(eb, ea):
            return None
        eq = tuple(x - y for x, y in zip(ea, eb))
        cq = field.mul(ca, cbinv)
        quo[eq] = cq
        # rem -= (cq * X^eq) * b
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(eq, e2))
            p = field.mul(cq, c2)
            if e in rem:
                s = field.sub(rem[e], p)
                if field.is_zero(s):
                    del rem[e]
                else:
                    rem[e] = s
            else:
                rem[e] = field.neg(p)
    return quo


def _td_univar(a, i):
    """View a as univariate in variable i: dict deg -> term-dict coefficient."""
    out = {}
    for e, c in a.items():
        k = e[i]
        ne = list(e)
        ne[i] = 0
        out.setdefault(k, {})[tuple(ne)] = c
    return out


def _td_from_univar(coeffs, i):
    out = {}
    for k, td in coeffs.items():
        for e, c in td.items():
            ne = list(e)
            ne[i] = k
            out[tuple(ne)] = c
    return out


def _mono_gcd(a):
    it = iter(a)
    g = list(next(it))
    for e in it:
        g = [min(x, y) for x, y in zip(g, e)]
        if not any(g):
            break
    return tuple(g)


def _td_shift_down(a, mono):
    if not any(mono):
        return a
    return {tuple(x - y for x, y in zip(e, mono)): c for e, c in a.items()}


_SYMPY_RING_CACHE = {}


def _sympy_ring(field, nvars):
    key = (field.kind, getattr(field, "p", 0), nvars)
    got = _SYMPY_RING_CACHE.get(key)
    if got is None:
        from sympy.polys.domains import GF, QQ as SYM_QQ
        from sympy.polys.rings import ring
        dom = SYM_QQ if field.kind == "q" else GF(field.p)
        names = ",".join(f"v{i}" for i in range(nvars))
        got = (ring(names, dom)[0], dom)
        _SYMPY_RING_CACHE[key] = got
    return got


def _td_gcd_sympy(field, a, b, nvars):
    R, dom = _sympy_ring(field, nvars)
    rational = field.kind == "q"

    def conv(td):
        if rational:
            return R.from_dict({e: dom(c.numerator, c.denominator)
                                for e, c in td.items()})
        return R.from_dict({e: dom(int(c)) for e, c in td.items()})

    g = conv(a).gcd(conv(b))
    if rational:
        back = {tuple(e): Fraction(int(c.numerator), int(c.denominator))
                for e, c in g.to_dict().items()}
    else:
        p = field.p
        back = {tuple(e): int(c) % p for e, c in g.to_dict().items()}
    return td_monic(field, back)


def td_gcd(field, a, b):
    """Multivariate gcd over a field, normalized monic under grevlex.

    Over Q and F_p the work is delegated to sympy's ring gcd; other
    coefficient fields use a recursive content/primitive-part scheme with a
    primitive remainder sequence and a specialization probe shortcut.
    """
    if not a:
        return td_monic(field, dict(b))
    if not b:
        return td_monic(field, dict(a))
    nv = len(next(iter(a)))
    if field.kind in ("q", "fp") and nv >= 1:
        return _td_gcd_sympy(field, a, b, nv)
    ga, gb = _mono_gcd(a), _mono_gcd(b)
    gmono = tuple(min(x, y) for x, y in zip(ga, gb))
    a = _td_shift_down(a, ga)
    b = _td_shift_down(b, gb)
    g = _td_gcd_primpart(field, a, b, nv)
    if any(gmono):
        g = {tuple(x + y for x, y in zip(e, gmono)): c for e, c in g.items()}
    return td_monic(field, g)


def _td_gcd_primpart(field, a, b, nv):
    if td_deg(a) == 0 or td_deg(b) == 0:
        return td_one(field, nv)
    active = [i for i in range(nv) if td_deg_in(a, i) > 0 or td_deg_in(b, i) > 0]
    main = None
    for i in reversed(active):
        if td_deg_in(a, i) > 0 and td_deg_in(b, i) > 0:
            main = i
            break
    if main is None:
        # no shared variable: gcd of contents only, and contents here are
        # full polynomials in disjoint variables, so the gcd is 1
        return td_one(field, nv)
    ua, ub = _td_univar(a, main), _td_univar(b, main)
    ca = _td_list_gcd(field, list(ua.values()), nv)
    cb = _td_list_gcd(field, list(ub.values()), nv)
    pa = {k: td_divexact(field, v, ca) for k, v in ua.items()}
    pb = {k: td_divexact(field, v, cb) for k, v in ub.items()}
    cg = _td_gcd_primpart(field, ca, cb, nv)
    # the probe may only shortcut the primitive parts; shared content is
    # already accounted for in cg
    pa_td, pb_td = _td_from_univar(pa, main), _td_from_univar(pb, main)
    if len(active) > 1 and _td_probe_coprime(field, pa_td, pb_td, main, active):
        return cg
    g = _td_prs(field, pa, pb, main, nv)
    return td_mul(field, _td_from_univar(g, main), cg)


def _td_list_gcd(field, tds, nv):
    g = {}
    for t in tds:
        g = td_gcd(field, g, t)
        if td_deg(g) == 0 and g:
            return td_one(field, nv)
    return g if g else td_one(field, nv)


def _td_probe_coprime(field, a, b, main, active):
    """Specialize all non-main variables and test univariate coprimality.

    Valid only when the probe keeps the main-variable leading coefficient of
    one input nonzero; a degree-0 gcd of the primitive parts then certifies
    coprimality up to content.
    """
    seq = field.probe_values(8)
    if seq is None:
        return False
    others = [i for i in active if i != main]
    da, db = td_deg_in(a, main), td_deg_in(b, main)
    for vals in seq:
        assign = {i: vals[k % len(vals)] for k, i in enumerate(others)}
        sa = td_subst(field, a, assign)
        sb = td_subst(field, b, assign)
        if td_deg_in(sa, main) != da and td_deg_in(sb, main) != db:
            continue
        ga = _univar_gcd_deg(field, _td_univar(sa, main), _td_univar(sb, main))
        if ga == 0:
            return True
        return False
    return False


def _univar_gcd_deg(field, ua, ub):
    fa = {k: v for k, v in ((k, next(iter(td.values()))) for k, td in ua.items())}
    fb = {k: v for k, v in ((k, next(iter(td.values()))) for k, td in ub.items())}

    def norm(f):
        return {k: c for k, c in f.items() if not field.is_zero(c)}

    fa, fb = norm(fa), norm(fb)
    while fb:
        db = max(fb)
        lb = fb[db]
        linv = field.inv(lb)
        while fa and max(fa) >= db:
            da = max(fa)
            q = field.mul(fa[da], linv)
            for k, c in fb.items():
                e = k + da - db
                s = field.sub(fa.get(e, field.zero), field.mul(q, c))
                if field.is_zero(s):
                    fa.pop(e, None)
                else:
                    fa[e] = s
        fa, fb = fb, fa
    return max(fa) if fa else -1


def _td_prs(field, ua, ub, main, nv):
    """Primitive remainder sequence on univariate views (deg -> td coeff)."""

    def degu(u):
        return max(u) if u else -1

    def prim(u):
        if not u:
            return u
        c = _td_list_gcd(field, list(u.values()), nv)
        return {k: td_divexact(field, v, c) for k, v in u.items()}

    f, g = dict(ua), dict(ub)
    if degu(f) < degu(g):
        f, g = g, f
    while g:
        r = _td_prem(field, f, g, nv)
        f, g = g, prim(r)
    return f


def _td_prem(field, f, g, nv):
    """Pseudo-remainder of univariate views: lc(g)^k * f mod g."""
    dg = max(g)
    lg = g[dg]
    r = {k: dict(v) for k, v in f.items()}
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        # r = lg * r - lr * x^(dr-dg) * g
        nr = {}
        for k, v in r.items():
            nr[k] = td_mul(field, v, lg)
        for k, v in g.items():
            e = k + dr - dg
            t = td_mul(field, v, lr)
            nr[e] = td_sub(field, nr.get(e, {}), t)
        r = {k: v for k, v in nr.items() if v}
    return r


def td_sqrt(field, a):
    """Exact square root of a term dict, or None. Characteristic 2 excluded."""
    if not a:
        return {}
    if field.char == 2:
        return None
    nv = len(next(iter(a)))
    active = [i for i in range(nv) if td_deg_in(a, i) > 0]
    if not active:
        e, c = next(iter(a.items()))
        s = field.sqrt(c)
        return None if s is None else {e: s}
    v = active[-1]
    u = _td_univar(a, v)
    d = max(u)
    if d % 2:
        return None
    lc = td_sqrt(field, u[d])
    if lc is None:
        return None
    half = d // 2
    two = field.from_int(2)
    r = {half: lc}
    r_td = _td_from_univar(r, v)
    twolc = td_scale(field, lc, two)
    while True:
        rem = td_sub(field, a, td_mul(field, r_td, r_td))
        if not rem:
            return r_td
        urem = _td_univar(rem, v)
        e = max(urem)
        k = e - half
        if k < 0 or k >= half:
            return None
        c = td_divexact(field, urem[e], twolc)
        if c is None:
            return None
        r[k] = td_add(field, r.get(k, {}), c)
        if not r[k]:
            del r[k]
        r_td = _td_from_univar(r, v)


def td_fmt(field, a, varnames):
    if not a:
        return "0"
    parts = []
    for e in sorted(a, key=_grevlex_key, reverse=True):
        c = a[e]
        mono = "*".join(
            f"{varnames[i]}^{k}" if k > 1 else varnames[i]
            for i, k in enumerate(e) if k
        )
        cs = field.fmt(c)
        if mono:
            parts.append(mono if cs == "1" else f"{cs}*{mono}")
        else:
            parts.append(cs)
    return " + ".join(parts)


def _field_pow(field, a, n):
    if n == 0:
        return field.one
    out = field.one
    base = a
    while n > 0:
        if n & 1:
            out = field.mul(out, base)
        base = field.mul(base, base)
        n >>= 1
    return out


# ---------------------------------------------------------------------------
# base fields


class QQ:
    """The rational numbers. Values are fractions.Fraction."""

    char = 0
    kind = "q"
    order = None

    def __init__(self):
        self.one = Fraction(1)
        self.zero = Fraction(0)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / self._nz(b)

    @staticmethod
    def _nz(b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return b

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def sqrt(self, a):
        if a < 0:
            return None
        n, d = a.numerator, a.denominator
        rn, rd = math.isqrt(n), math.isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return None

    def fmt(self, a):
        return str(a)

    def parse(self, s):
        return Fraction(s)

    def element_sequence(self):
        i = 0
        while True:
            yield Fraction(i)
            i += 1

    def iter_elements(self):
        return None  # infinite

    def probe_values(self, width):
        # deterministic probe tuples for gcd shortcuts
        return [tuple(Fraction(2 + 3 * j + k) for k in range(width)) for j in range(4)]

    def describe(self):
        return "Q"

    def to_json(self):
        return {"type": "q"}

    def __eq__(self, other):
        return isinstance(other, QQ)

    def __hash__(self):
        return hash("QQ")


class GFp:
    """Prime field F_p, p < 2^61. Values are ints in [0, p)."""

    kind = "fp"

    def __init__(self, p):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 1 << 61:
            raise ValueError("p must be < 2^61")
        self.p = p
        self.char = p
        self.order = p
        self.one = 1 % p
        self.zero = 0

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def is_zero(self, a):
        return a % self.p == 0

    def from_int(self, n):
        return n % self.p

    def sqrt(self, a):
        a %= self.p
        if a == 0:
            return 0
        if self.p == 2:
            return a
        if pow(a, (self.p - 1) // 2, self.p) != 1:
            return None
        return _tonelli(a, self.p)

    def fmt(self, a):
        return str(a % self.p)

    def parse(self, s):
        return int(s) % self.p

    def element_sequence(self):
        return iter(range(self.p))

    def iter_elements(self):
        return iter(range(self.p))

    def probe_values(self, width):
        vals = []
        for j in range(4):
            vals.append(tuple((2 + 3 * j + k) % self.p for k in range(width)))
        return vals

    def describe(self):
        return f"F_{self.p}"

    def to_json(self):
        return {"type": "fp", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, GFp) and other.p == self.p

    def __hash__(self):
        return hash(("GFp", self.p))


def _tonelli(a, p):
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# ---------------------------------------------------------------------------
# univariate helpers over an arbitrary field (for extension arithmetic)


def _upoly_trim(field, f):
    while f and field.is_zero(f[-1]):
        f.pop()
    return f


def _upoly_mul(field, f, g):
    if not f or not g:
        return []
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if field.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = field.add(out[i + j], field.mul(a, b))
    return _upoly_trim(field, out)


def _upoly_divmod(field, f, g):
    f = list(f)
    dg = len(g) - 1
    inv = field.inv(g[-1])
    q = [field.zero] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and f:
        c = field.mul(f[-1], inv)
        k = len(f) - 1 - dg
        q[k] = c
        for j, b in enumerate(g):
            f[k + j] = field.sub(f[k + j], field.mul(c, b))
        _upoly_trim(field, f)
    return q, f


def _upoly_gcdext(field, f, g):
    """Returns (gcd, s, t) with s*f + t*g = gcd."""
    r0, r1 = list(f), list(g)
    s0, s1 = [field.one], []
    t0, t1 = [], [field.one]
    while r1:
        q, r = _upoly_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _upoly_sub(field, s0, _upoly_mul(field, q, s1))
        t0, t1 = t1, _upoly_sub(field, t0, _upoly_mul(field, q, t1))
    return r0, s0, t0


def _upoly_sub(field, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else field.zero
        b = g[i] if i < len(g) else field.zero
        out.append(field.sub(a, b))
    return _upoly_trim(field, out)


def _upoly_powmod(field, f, n, mod):
    out = [field.one]
    base = _upoly_divmod(field, f, mod)[1]
    while n > 0:
        if n & 1:
            out = _upoly_divmod(field, _upoly_mul(field, out, base), mod)[1]
        base = _upoly_divmod(field, _upoly_mul(field, base, base), mod)[1]
        n >>= 1
    return out


def _is_irreducible_fp(p, coeffs):
    """Rabin test for a monic polynomial over F_p given as low-to-high list."""
    F = GFp(p)
    k = len(coeffs) - 1
    x = [0, 1]
    xq = _upoly_powmod(F, x, p ** k, coeffs)
    if _upoly_sub(F, xq, x):
        return False
    for q in set(_prime_factors(k)):
        xe = _upoly_powmod(F, x, p ** (k // q), coeffs)
        g, _, _ = _upoly_gcdext(F, _upoly_sub(F, xe, x), coeffs)
        if len(g) - 1 > 0:
            return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class ExtensionField:
    """Algebraic extension base[theta]/(modulus), modulus monic.

    modulus is given low-to-high including the leading 1. Values are tuples
    of base values of length deg(modulus).
    """

    kind = "ext"

    def __init__(self, base, modulus, varname="t"):
        self.base = base
        self.modulus = list(modulus)
        self.deg = len(modulus) - 1
        if self.deg < 1 or not base.eq(modulus[-1], base.one):
            raise ValueError("modulus must be monic of degree >= 1")
        self.varname = varname
        self.char = base.char
        self.order = base.order ** self.deg if base.order else None
        self.zero = tuple([base.zero] * self.deg)
        self.one = tuple([base.one] + [base.zero] * (self.deg - 1))

    def embed(self, a):
        return tuple([a] + [self.base.zero] * (self.deg - 1))

    def gen(self):
        v = [self.base.zero] * self.deg
        if self.deg == 1:
            # theta is a base element: -c0
            return (self.base.neg(self.modulus[0]),)
        v[1] = self.base.one
        return tuple(v)

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        prod = _upoly_mul(self.base, list(a), list(b))
        _, r = _upoly_divmod(self.base, prod, self.modulus)
        return tuple(r + [self.base.zero] * (self.deg - len(r)))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        f = _upoly_trim(self.base, list(a))
        g, s, _ = _upoly_gcdext(self.base, f, self.modulus)
        c = self.base.inv(g[0])
        s = [self.base.mul(x, c) for x in s]
        _, r = _upoly_divmod(self.base, s, self.modulus)
        return tuple(r + [self.base.zero] * (self.deg - len(r)))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b):
        return all(self.base.eq(x, y) for x, y in zip(a, b))

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def fmt(self, a):
        parts = []
        for i, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            if i == 0:
                parts.append(self.base.fmt(c))
            else:
                v = self.varname if i == 1 else f"{self.varname}^{i}"
                cs = self.base.fmt(c)
                parts.append(v if cs == "1" else f"{cs}*{v}")
        return " + ".join(parts) if parts else "0"

    def element_sequence(self):
        base_seq = self.base.iter_elements()
        if base_seq is None:
            # characteristic 0: walk the moment curve of the generator
            def seq():
                i = 0
                while True:
                    yield self.from_int(i)
                    i += 1
            return seq()
        return (tuple(v) for v in itertools.product(
            list(self.base.iter_elements()), repeat=self.deg))

    def iter_elements(self):
        if self.order is None:
            return None
        return self.element_sequence()

    def probe_values(self, width):
        if self.base.probe_values(width) is None:
            return None
        return [tuple(self.embed(v) for v in row)
                for row in self.base.probe_values(width)]

    def sqrt(self, a):
        if self.is_zero(a):
            return self.zero
        if self.order is not None:
            q = self.order
            if q % 2 == 0:
                return _field_pow(self, a, q // 2)
            if _field_pow(self, a, (q - 1) // 2) != self.one:
                return None
            if q % 4 == 3:
                return _field_pow(self, a, (q + 1) // 4)
            return _tonelli_generic(self, a)
        if self.deg == 2 and self.char != 2:
            return self._sqrt_quadratic(a)
        return None

    def _sqrt_quadratic(self, x):
        """Nested square root in a quadratic extension of a field with sqrt.

        Completes the square so theta' ^ 2 = m in the base, then denests
        sqrt(a + b*theta') via the norm. Sound both ways: failure of every
        branch means x is not a square.
        """
        B = self.base
        c0, c1 = self.modulus[0], self.modulus[1]
        half = B.inv(B.from_int(2))
        # theta = theta' - c1/2, theta'^2 = m
        shift = B.mul(c1, half)
        m = B.sub(B.mul(shift, shift), c0)
        a0, b0 = x
        # x = a + b*theta', with theta = theta' - shift
        a = B.sub(a0, B.mul(b0, shift))
        b = b0
        for cand in self._denest(a, b, m):
            c, d = cand
            # translate y = c + d*theta' back to the theta basis
            y = (B.add(c, B.mul(d, shift)), d)
            if self.eq(self.mul(y, y), x):
                return y
        return None

    def _denest(self, a, b, m):
        B = self.base
        half = B.inv(B.from_int(2))
        out = []
        if B.is_zero(b):
            s = B.sqrt(a)
            if s is not None:
                out.append((s, B.zero))
            if not B.is_zero(m):
                d2 = B.div(a, m)
                d = B.sqrt(d2)
                if d is not None:
                    out.append((B.zero, d))
            return out
        norm = B.sub(B.mul(a, a), B.mul(B.mul(b, b), m))
        lam = B.sqrt(norm)
        if lam is None:
            return out
        for sign in (lam, B.neg(lam)):
            c2 = B.mul(B.add(a, sign), half)
            c = B.sqrt(c2)
            if c is None or B.is_zero(c):
                continue
            d = B.div(B.mul(b, half), c)
            out.append((c, d))
        return out

    def describe(self):
        return f"{self.base.describe()}[{self.varname}]/deg{self.deg}"

    def to_json(self):
        if isinstance(self.base, GFp):
            return {"type": "fpext", "p": self.base.p, "k": self.deg}
        return {"type": "ext", "base": self.base.to_json(), "deg": self.deg}

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.base == self.base
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("ext", id(self.base), self.deg))


def _tonelli_generic(F, a):
    q = F.order
    s, m = q - 1, 0
    while s % 2 == 0:
        s //= 2
        m += 1
    z = None
    for cand in F.element_sequence():
        if F.is_zero(cand):
            continue
        if _field_pow(F, cand, (q - 1) // 2) != F.one:
            z = cand
            break
    c = _field_pow(F, z, s)
    t = _field_pow(F, a, s)
    r = _field_pow(F, a, (s + 1) // 2)
    while not F.eq(t, F.one):
        i, t2 = 0, t
        while not F.eq(t2, F.one):
            t2 = F.mul(t2, t2)
            i += 1
        b = _field_pow(F, c, 1 << (m - i - 1))
        m, c = i, F.mul(b, b)
        t, r = F.mul(t, c), F.mul(r, b)
    return r


def gf_ext(p, k, varname="t"):
    """F_{p^k} with a deterministic modulus: first monic irreducible when
    coefficient vectors are ordered high-degree-first, which favors sparse
    binomials like t^2 + 2."""
    if k == 1:
        return GFp(p)
    for tail in itertools.product(range(p), repeat=k):
        # tail = (c_{k-1}, ..., c_0)
        coeffs = list(reversed(tail)) + [1]
        if _is_irreducible_fp(p, coeffs):
            return ExtensionField(GFp(p), coeffs, varname)
    raise RuntimeError("no irreducible modulus found")  # unreachable


# ---------------------------------------------------------------------------
# rational function fields


class FracElement:
    """One element of an FnField: num/den term dicts, gcd-reduced, den monic.

    complexity is a cached upper bound on max(deg num, deg den); arithmetic
    keeps it exact by re-measuring at construction, which never exceeds the
    additive bounds d_a + d_b for sums and products and d_a for inverses.
    """

    __slots__ = ("num", "den", "complexity")

    def __init__(self, num, den, complexity):
        self.num = num
        self.den = den
        self.complexity = complexity

    def __eq__(self, other):
        # canonical form makes structural comparison sound
        return (isinstance(other, FracElement) and self.num == other.num
                and self.den == other.den)

    def __repr__(self):
        return f"FracElement({self.num!r}, {self.den!r})"


class FnField:
    """F(Y1..Yl) or its root extension K^(e), over a QQ or GFp base.

    With root exponent e > 0 (positive characteristic only) the working
    variables W_i satisfy Y_i = W_i^(p^e); e = 0 keeps W_i = Y_i.
    """

    kind = "fn"

    def __init__(self, base, varnames, root_exp=0):
        if len(set(varnames)) != len(varnames):
            raise ValueError("variable names must be distinct")
        if root_exp and base.char == 0:
            raise InvalidRootExtension("root exponent needs characteristic p")
        if root_exp < 0:
            raise InvalidRootExtension("root exponent must be >= 0")
        self.base = base
        self.varnames = tuple(varnames)
        self.nvars = len(varnames)
        self.root_exp = root_exp
        self.char = base.char
        self.order = None
        one_td = td_one(base, self.nvars)
        self.one = FracElement(dict(one_td), dict(one_td), 0)
        self.zero = FracElement({}, dict(one_td), 0)

    # construction ---------------------------------------------------------

    def make(self, num, den=None):
        B = self.base
        num = {e: c for e, c in num.items() if not B.is_zero(c)}
        if den is None:
            den = td_one(B, self.nvars)
        else:
            den = {e: c for e, c in den.items() if not B.is_zero(c)}
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return FracElement({}, td_one(B, self.nvars), 0)
        den_is_one = den == td_one(B, self.nvars)
        if not den_is_one:
            g = td_gcd(B, num, den)
            if td_deg(g) > 0:
                num = td_divexact(B, num, g)
                den = td_divexact(B, den, g)
            _, lc = td_lead(B, den)
            if not B.eq(lc, B.one):
                inv = B.inv(lc)
                num = td_scale(B, num, inv)
                den = td_scale(B, den, inv)
        comp = max(td_deg(num), td_deg(den), 0)
        return FracElement(num, den, comp)

    def from_int(self, n):
        return self.make(td_const(self.base, self.nvars, self.base.from_int(n)))

    def from_base(self, c):
        return self.make(td_const(self.base, self.nvars, c))

    def var(self, i):
        return self.make(td_var(self.base, self.nvars, i))

    # predicates -----------------------------------------------------------

    def is_zero(self, a):
        return not a.num

    def eq(self, a, b):
        return a.num == b.num and a.den == b.den

    def _den_one(self, a):
        return a.den == td_one(self.base, self.nvars)

    # arithmetic -----------------------------------------------------------
    #
    # Operands are always reduced with monic denominators, so reduction can
    # be maintained incrementally: products cancel cross gcds only, sums use
    # Henrici's trick (common factors of the new numerator and denominator
    # live inside gcd(d1, d2)), and inversion just swaps.

    def _norm_pair(self, num, den):
        """Normalize a known-coprime pair: monic denominator, measured bound."""
        B = self.base
        if not num:
            return FracElement({}, td_one(B, self.nvars), 0)
        if den != td_one(B, self.nvars):
            _, lc = td_lead(B, den)
            if not B.eq(lc, B.one):
                inv = B.inv(lc)
                num = td_scale(B, num, inv)
                den = td_scale(B, den, inv)
        return FracElement(num, den, max(td_deg(num), td_deg(den), 0))

    def add(self, a, b):
        B = self.base
        if not a.num:
            return b
        if not b.num:
            return a
        one = td_one(B, self.nvars)
        if a.den == one and b.den == one:
            return self._norm_pair(td_add(B, a.num, b.num), dict(one))
        g = td_gcd(B, a.den, b.den)
        if td_deg(g) == 0:
            num = td_add(B, td_mul(B, a.num, b.den), td_mul(B, b.num, a.den))
            return self._norm_pair(num, td_mul(B, a.den, b.den))
        q1 = td_divexact(B, a.den, g)
        q2 = td_divexact(B, b.den, g)
        t = td_add(B, td_mul(B, a.num, q2), td_mul(B, b.num, q1))
        if not t:
            return self.zero
        h = td_gcd(B, t, g)
        if td_deg(h) > 0:
            t = td_divexact(B, t, h)
            den = td_mul(B, td_divexact(B, a.den, h), q2)
        else:
            den = td_mul(B, a.den, q2)
        return self._norm_pair(t, den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return FracElement(td_neg(self.base, a.num), a.den, a.complexity)

    def mul(self, a, b):
        B = self.base
        if not a.num or not b.num:
            return self.zero
        one = td_one(B, self.nvars)
        a1, b1 = a.den == one, b.den == one
        if a1 and b1:
            return self._norm_pair(td_mul(B, a.num, b.num), dict(one))
        n1, d1, n2, d2 = a.num, a.den, b.num, b.den
        if not b1:
            g = td_gcd(B, n1, d2)
            if td_deg(g) > 0:
                n1 = td_divexact(B, n1, g)
                d2 = td_divexact(B, d2, g)
        if not a1:
            g = td_gcd(B, n2, d1)
            if td_deg(g) > 0:
                n2 = td_divexact(B, n2, g)
                d1 = td_divexact(B, d1, g)
        return self._norm_pair(td_mul(B, n1, n2), td_mul(B, d1, d2))

    def inv(self, a):
        if not a.num:
            raise ZeroDivisionError("inverse of zero")
        return self._norm_pair(dict(a.den), dict(a.num))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # spec surface ---------------------------------------------------------

    def arith(self, a, b, op):
        """Binary field arithmetic dispatch: add, mul, or inv (unary on a)."""
        if op == "add":
            return self.add(a, b)
        if op == "mul":
            return self.mul(a, b)
        if op == "inv":
            return self.inv(a)
        raise ValueError(f"unknown op {op!r}")

    def specialize(self, a, point):
        if len(point) != self.nvars:
            raise ContextError("specialization point has wrong length")
        B = self.base
        dv = td_eval(B, a.den, point)
        if B.is_zero(dv):
            raise SpecializationError(dict(a.den), tuple(point))
        nv = td_eval(B, a.num, point)
        return B.div(nv, dv)

    def lifted_field(self, e_new):
        if e_new < self.root_exp:
            raise InvalidRootExtension("root exponent cannot decrease")
        return FnField(self.base, self.varnames, e_new)

    def lift_to_root_extension(self, a, e_new):
        """Re-express a in the W-variables of exponent e_new >= e."""
        if e_new < self.root_exp:
            raise InvalidRootExtension("root exponent cannot decrease")
        if e_new == self.root_exp:
            return a
        scale = self.char ** (e_new - self.root_exp)

        def blow(td):
            return {tuple(x * scale for x in e): c for e, c in td.items()}

        return FracElement(blow(a.num), blow(a.den), a.complexity * scale)

    # misc -----------------------------------------------------------------

    def sqrt(self, a):
        if not a.num:
            return self.zero
        sn = td_sqrt(self.base, a.num)
        if sn is None:
            return None
        sd = td_sqrt(self.base, a.den)
        if sd is None:
            return None
        return self.make(sn, sd)

    def fmt(self, a):
        if not a.num:
            return "0"
        ns = td_fmt(self.base, a.num, self.varnames)
        if self._den_one(a):
            return ns
        ds = td_fmt(self.base, a.den, self.varnames)
        return f"({ns})/({ds})"

    def parse(self, s):
        # only numeric literals; polynomial input goes through the poly layer
        s = s.strip()
        if "/" in s and s.lstrip("-").replace("/", "").isdigit():
            n, d = s.split("/")
            return self.div(self.from_int(int(n)), self.from_int(int(d)))
        return self.from_int(int(s))

    def element_sequence(self):
        return (self.from_int(i) for i in itertools.count()) \
            if self.char == 0 else \
            (self.from_int(i) for i in range(self.char))

    def iter_elements(self):
        return None

    def probe_values(self, width):
        rows = self.base.probe_values(width)
        if rows is None:
            return None
        return [tuple(self.from_base(v) for v in row) for row in rows]

    def promote(self, other, a, var_map):
        """Embed a value of FnField `other` into this field.

        var_map[i] is the index in this field of other's variable i.
        """
        def remap(td):
            out = {}
            for e, c in td.items():
                ne = [0] * self.nvars
                for i, k in enumerate(e):
                    ne[var_map[i]] = k
                out[tuple(ne)] = c
            return out

        return FracElement(remap(a.num), remap(a.den), a.complexity)

    def describe(self):
        e = f"^(1/{self.char ** self.root_exp})" if self.root_exp else ""
        return f"{self.base.describe()}({', '.join(self.varnames)}){e}"

    def to_json(self):
        return {"field": self.base.to_json(),
                "fnvars": list(self.varnames),
                "root_exp": self.root_exp}

    def __eq__(self, other):
        return (isinstance(other, FnField) and other.base == self.base
                and other.varnames == self.varnames
                and other.root_exp == self.root_exp)

    def __hash__(self):
        return hash(("fn", self.base, self.varnames, self.root_exp))


def field_arith(field, a, b, op):
    return field.arith(a, b, op)


def lift_to_root_extension(field, a, e_new):
    return field.lift_to_root_extension(a, e_new)


def specialize(field, a, point):
    return field.specialize(a, point)


def field_from_json(doc):
    """Reconstruct a field from its JSON context header."""
    fdoc = doc.get("field", doc)
    t = fdoc["type"]
    if t == "q":
        base = QQ()
    elif t == "fp":
        base = GFp(fdoc["p"])
    elif t == "fpext":
        base = gf_ext(fdoc["p"], fdoc["k"])
    else:
        raise ValueError(f"unknown field type {t!r}")
    if "fnvars" in doc:
        return FnField(base, doc["fnvars"], doc.get("root_exp", 0))
    return base
