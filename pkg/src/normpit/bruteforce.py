"""Reference implementations for checking the optimized modules.

Everything here recomputes results the slow, obvious way: dense expansion
by schoolbook multiplication, exhaustive evaluation grids, handwritten
Gaussian elimination and long division.  None of the Groebner, curve, or
identity-testing machinery is imported; agreement between the two sides
is what the test suites assert.
"""

import itertools

from .fields import ExtensionField, FnField

__all__ = [
    "DensePoly", "dense_expand", "brute_force_nonzero",
    "verify_hitting_set", "integrality_witness_check",
    "generator_eliminants",
]

_DENSE_CAP = 200000


class DensePoly:
    """Dense exact polynomial: every coefficient keyed by exponent tuple.

    Arithmetic is double-loop schoolbook over the coefficient field, with
    an entry cap so runaway expansions fail loudly instead of thrashing.
    """

    def __init__(self, field, nvars, coeffs=None):
        self.field = field
        self.nvars = nvars
        self.coeffs = {} if coeffs is None else dict(coeffs)

    @staticmethod
    def zero(field, nvars):
        return DensePoly(field, nvars)

    @staticmethod
    def one(field, nvars):
        return DensePoly(field, nvars, {(0,) * nvars: field.one})

    @staticmethod
    def from_terms(field, nvars, terms):
        out = {}
        for e, c in terms.items():
            if not field.is_zero(c):
                out[tuple(e)] = c
        return DensePoly(field, nvars, out)

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return max((sum(e) for e in self.coeffs), default=-1)

    def add(self, other):
        K = self.field
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = K.add(out.get(e, K.zero), c)
            if K.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return DensePoly(K, self.nvars, out)

    def neg(self):
        K = self.field
        return DensePoly(K, self.nvars,
                         {e: K.neg(c) for e, c in self.coeffs.items()})

    def sub(self, other):
        return self.add(other.neg())

    def mul(self, other, cap=_DENSE_CAP):
        K = self.field
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = K.add(out.get(e, K.zero), K.mul(c1, c2))
                if K.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
                if len(out) > cap:
                    raise ValueError("dense expansion exceeds the size cap")
        return DensePoly(K, self.nvars, out)

    def scale(self, c):
        K = self.field
        if K.is_zero(c):
            return DensePoly(K, self.nvars)
        return DensePoly(K, self.nvars,
                         {e: K.mul(v, c) for e, v in self.coeffs.items()})

    def eval_in(self, E, conv, point):
        acc = E.zero
        for exps, c in self.coeffs.items():
            t = conv(c)
            for x, e in zip(point, exps):
                for _ in range(e):
                    t = E.mul(t, x)
            acc = E.add(acc, t)
        return acc


def dense_expand(c, cap=_DENSE_CAP):
    """Expand a circuit to a DensePoly; exact, no sharing, no shortcuts."""
    out = DensePoly.zero(c.field, c.n)
    for s in c.summands:
        term = DensePoly.one(c.field, c.n)
        for f in s:
            term = term.mul(DensePoly.from_terms(c.field, c.n, f.terms),
                            cap=cap)
        out = out.add(term)
    return out


def _udiv_lists(F, num, den):
    """Remainder of dense univariate division, coefficients low to high."""
    num = list(num)
    dd = len(den) - 1
    inv = F.inv(den[-1])
    for i in range(len(num) - 1, dd - 1, -1):
        q = F.mul(num[i], inv)
        if F.is_zero(q):
            continue
        for j in range(dd + 1):
            num[i - dd + j] = F.sub(num[i - dd + j], F.mul(q, den[j]))
    return num[:dd]


def _own_irreducible_modulus(F, k):
    """Smallest monic irreducible of degree k over a prime field, found by
    trial division against every lower-degree monic polynomial."""
    for tail in itertools.product(range(F.p), repeat=k):
        if tail[0] == 0:
            continue
        cand = [F.from_int(t) for t in tail] + [F.one]
        good = True
        for dd in range(1, k // 2 + 1):
            for dtail in itertools.product(range(F.p), repeat=dd):
                den = [F.from_int(t) for t in dtail] + [F.one]
                if all(F.is_zero(r) for r in _udiv_lists(F, cand, den)):
                    good = False
                    break
            if not good:
                break
        if good:
            return cand
    raise ValueError("no irreducible modulus found")


def _coercion(E, F):
    if E is F or E == F:
        return lambda a: a
    if isinstance(E, ExtensionField) and E.base == F:
        return E.embed
    if isinstance(E, FnField) and E.base == F:
        return E.from_base
    raise ValueError("no coercion from the circuit field into this field")


def _eval_circuit(c, E, conv, point):
    total = E.zero
    for s in c.summands:
        term = E.one
        for f in s:
            acc = E.zero
            for exps, cf in f.terms.items():
                t = conv(cf)
                for x, e in zip(point, exps):
                    for _ in range(e):
                        t = E.mul(t, x)
                acc = E.add(acc, t)
            term = E.mul(term, acc)
        total = E.add(total, term)
    return total


def brute_force_nonzero(c, ext_degree=1, cap=_DENSE_CAP, grid_cap=_DENSE_CAP):
    """Ground-truth zero test by two independent methods.

    Method one expands the circuit densely and looks for a surviving
    coefficient.  Method two evaluates the circuit (factor by factor, no
    expansion) on a full (d+1)^n product grid, in a degree-ext_degree
    extension when the base field is too small to supply d+1 distinct
    values.  A nonzero polynomial of total degree d cannot vanish on such
    a grid, so the two verdicts must agree, and that agreement is
    asserted before the answer is returned.
    """
    dense = dense_expand(c, cap=cap)
    dense_verdict = not dense.is_zero()

    d = max(c.degree, 0)
    need = d + 1
    F = c.field
    E = F
    if getattr(F, "order", None) is not None and F.order < need:
        if ext_degree < 2:
            raise ValueError("field too small for the evaluation grid; "
                             "raise ext_degree")
        if not hasattr(F, "p"):
            raise ValueError("cannot extend this field")
        E = ExtensionField(F, _own_irreducible_modulus(F, ext_degree))
        if E.order < need:
            raise ValueError("extension still too small for the grid")
    conv = _coercion(E, F)
    vals = []
    for v in E.element_sequence():
        vals.append(v)
        if len(vals) == need:
            break
    if len(vals) < need:
        raise ValueError("not enough grid values")
    if need ** c.n > grid_cap:
        raise ValueError("evaluation grid exceeds the size cap")
    eval_verdict = False
    for point in itertools.product(vals, repeat=c.n):
        if not E.is_zero(_eval_circuit(c, E, conv, point)):
            eval_verdict = True
            break
    if dense_verdict != eval_verdict:
        raise AssertionError("dense expansion and grid evaluation disagree")
    return dense_verdict


def verify_hitting_set(H, c, cap=_DENSE_CAP):
    """True when the circuit is zero or some point of H evaluates nonzero."""
    if dense_expand(c, cap=cap).is_zero():
        return True
    E = H.field
    conv = _coercion(E, c.field)
    for point in H.points:
        if not E.is_zero(_eval_circuit(c, E, conv, point)):
            return True
    return False


# ---------------------------------------------------------------------------
# integrality of normalization presentations


def _usum(A, a, b):
    n = max(len(a), len(b))
    a = a + [A.zero] * (n - len(a))
    b = b + [A.zero] * (n - len(b))
    return [A.add(x, y) for x, y in zip(a, b)]


def _uscale(A, a, c):
    return [A.mul(x, c) for x in a]


def _umul(A, a, b):
    out = [A.zero] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = A.add(out[i + j], A.mul(x, y))
    return out


def _utrim(A, a):
    while a and A.is_zero(a[-1]):
        a.pop()
    return a


def _solve_columns(A, cols, b):
    """Solve sum x_j * cols[j] = b by Gaussian elimination; None when
    inconsistent.  Free variables are set to zero."""
    m = len(b)
    k = len(cols)
    M = [[cols[j][i] for j in range(k)] + [b[i]] for i in range(m)]
    where = [-1] * k
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, m) if not A.is_zero(M[r][col])),
                   None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = A.inv(M[row][col])
        M[row] = [A.mul(x, inv) for x in M[row]]
        for r in range(m):
            if r != row and not A.is_zero(M[r][col]):
                fac = M[r][col]
                M[r] = [A.sub(x, A.mul(fac, y))
                        for x, y in zip(M[r], M[row])]
        where[col] = row
        row += 1
    for r in range(row, m):
        if not A.is_zero(M[r][k]):
            return None
    x = [A.zero] * k
    for col in range(k):
        if where[col] >= 0:
            x[col] = M[where[col]][k]
    return x


class _FieldTower:
    """K(alpha)[xbar] modulo the monic curve equation: the function field
    of the curve, with elements as coefficient vectors over K(alpha)."""

    def __init__(self, O):
        K = O.field
        if getattr(K, "kind", None) not in ("q", "fp"):
            raise ValueError("integrality check needs a rational or "
                             "prime-field base")
        self.A = FnField(K, (O.avar,))
        A = self.A
        alpha = A.var(0)
        conv = A.from_base
        f = O.ctx.f
        c1, c2 = O.ctx.direction
        if O.ctx.xbar_name == f.vars[1]:
            inv = A.inv(conv(c1))
            z1 = [A.mul(alpha, inv), A.neg(A.mul(conv(c2), inv))]
            z2 = [A.zero, A.one]
        else:
            inv = A.inv(conv(c2))
            z2 = [A.mul(alpha, inv), A.neg(A.mul(conv(c1), inv))]
            z1 = [A.zero, A.one]
        eqn = []
        for (e1, e2), cf in f.terms.items():
            part = [conv(cf)]
            for _ in range(e1):
                part = _umul(A, part, z1)
            for _ in range(e2):
                part = _umul(A, part, z2)
            eqn = _usum(A, eqn, part)
        eqn = _utrim(A, eqn)
        lead_inv = A.inv(eqn[-1])
        self.modulus = [A.mul(x, lead_inv) for x in eqn]
        self.s = len(self.modulus) - 1
        self.z1 = self.reduce(z1)
        self.z2 = self.reduce(z2)
        dval = A.zero
        for (e,), cf in O.disc0.terms.items():
            t = conv(cf)
            for _ in range(e):
                t = A.mul(t, alpha)
            dval = A.add(dval, t)
        self.u = self.reduce([A.inv(dval)])

    def reduce(self, vec):
        A = self.A
        vec = _utrim(A, list(vec))
        dd = self.s
        for i in range(len(vec) - 1, dd - 1, -1):
            q = vec[i]
            if A.is_zero(q):
                continue
            for j in range(dd + 1):
                vec[i - dd + j] = A.sub(vec[i - dd + j],
                                        A.mul(q, self.modulus[j]))
        vec = vec[:dd]
        return vec + [A.zero] * (dd - len(vec))

    def mul(self, a, b):
        return self.reduce(_umul(self.A, a, b))

    def image_value(self, img):
        """An ambient polynomial in (z1, z2, U) as a field element."""
        A = self.A
        acc = [A.zero] * self.s
        for (e1, e2, eu), cf in img.terms.items():
            part = self.reduce([A.from_base(cf)])
            for _ in range(e1):
                part = self.mul(part, self.z1)
            for _ in range(e2):
                part = self.mul(part, self.z2)
            for _ in range(eu):
                part = self.mul(part, self.u)
            acc = _usum(A, acc, part)
        return self.reduce(acc)


def generator_eliminants(O):
    """Monic minimal polynomial of each presentation generator over the
    rational functions in the projection coordinate.

    Returns one coefficient list per generator, low to high, with entries
    in K(alpha) and leading entry 1; computed by stacking powers of the
    generator's function-field value until Gaussian elimination finds the
    first linear dependence.
    """
    tower = _FieldTower(O)
    A = tower.A
    out = []
    for img in O.images:
        t = tower.image_value(img)
        powers = [tower.reduce([A.one])]
        coeffs = None
        for k in range(1, tower.s + 1):
            powers.append(tower.mul(powers[-1], t))
            sol = _solve_columns(A, powers[:k], powers[k])
            if sol is not None:
                coeffs = [A.neg(x) for x in sol] + [A.one]
                break
        if coeffs is None:
            raise AssertionError("generator has no dependence of degree "
                                 "at most the field extension degree")
        out.append(coeffs)
    return out


def _denominator_free(el):
    return all(not any(e) for e in el.den)


def _clear_and_divide(O, h):
    """Substitute generator images into a relation, clear the localized
    inverse, and long-divide by the curve polynomial.  True when the
    remainder is zero."""
    K = O.field
    amb_vars = 3  # z1, z2, U
    imgs = [DensePoly.from_terms(K, amb_vars, im.terms) for im in O.images]
    val = DensePoly.zero(K, amb_vars)
    for exps, cf in h.terms.items():
        part = DensePoly(K, amb_vars, {(0, 0, 0): cf})
        for img, e in zip(imgs, exps):
            for _ in range(e):
                part = part.mul(img)
        val = val.add(part)
    max_u = max((e[2] for e in val.coeffs), default=0)
    c1, c2 = O.ctx.direction
    alpha = DensePoly(K, amb_vars, {k: v for k, v in
                                    (((1, 0, 0), c1), ((0, 1, 0), c2))
                                    if not K.is_zero(v)})
    disc_z = DensePoly.zero(K, amb_vars)
    for (e,), cf in O.disc0.terms.items():
        part = DensePoly(K, amb_vars, {(0, 0, 0): cf})
        for _ in range(e):
            part = part.mul(alpha)
        disc_z = disc_z.add(part)
    cleared = DensePoly.zero(K, amb_vars)
    for (e1, e2, eu), cf in val.coeffs.items():
        part = DensePoly(K, amb_vars, {(e1, e2, 0): cf})
        for _ in range(max_u - eu):
            part = part.mul(disc_z)
        cleared = cleared.add(part)
    # exact division by the irreducible curve polynomial decides ideal
    # membership; leading terms under any fixed order must keep cancelling
    fden = {(e1, e2, 0): cf for (e1, e2), cf in O.ctx.f.terms.items()}

    def lead(coeffs):
        return max(coeffs, key=lambda e: (sum(e), e))

    lf = lead(fden)
    rem = dict(cleared.coeffs)
    while rem:
        lr = lead(rem)
        if any(a < b for a, b in zip(lr, lf)):
            return False
        q = K.div(rem[lr], fden[lf])
        shift = tuple(a - b for a, b in zip(lr, lf))
        for e, cf in fden.items():
            ee = tuple(a + b for a, b in zip(e, shift))
            s = K.sub(rem.get(ee, K.zero), K.mul(q, cf))
            if K.is_zero(s):
                rem.pop(ee, None)
            else:
                rem[ee] = s
    return True


def integrality_witness_check(O):
    """Verify a normalization presentation against first principles.

    Part one: every generator's eliminant over the projection coordinate
    is monic with denominator-free coefficients, which is exactly
    integrality over the polynomial ring in that coordinate.  Part two:
    every presentation relation vanishes identically on the curve once
    the generators are replaced by their ambient values, checked by
    clearing the localized inverse and long-dividing by the curve
    polynomial.
    """
    try:
        elims = generator_eliminants(O)
    except (ValueError, ZeroDivisionError):
        return False
    for coeffs in elims:
        if not all(_denominator_free(cf) for cf in coeffs[:-1]):
            return False
    for h in O.ring.generators:
        if not _clear_and_divide(O, h):
            return False
    return True
