"""Groebner engine: Buchberger construction, reduction with exact cofactor
identities, elimination, ideal arithmetic, idealizer preimages, kernels and
preimages of ring maps, and a fraction-free linear solver.

Internally, reduction over a function field clears denominators and works
with pseudo-division (multiply through by leading coefficients instead of
inverting them); the accumulated multiplier is divided back out at the API
boundary so the published identity f = remainder + sum(cofactor_i * g_i) is
exact over the field. Over Q and F_p plain division is cheap and is used
directly.

An optional coeff_log list collects every intermediate coefficient created
during reduction; downstream certificate construction records these so that
a specialization keeping them nonzero replays the same division path.
"""

import heapq
import itertools

from .fields import FnField, td_deg, td_divexact, td_gcd, td_mul, td_one
from .polys import GREVLEX, BlockOrder, ContextError, MPoly


class PairBudget(RuntimeError):
    """Raised when buchberger exceeds its max_pairs budget."""


class GroebnerBasis:
    """A reduced, monic basis sorted ascending by leading monomial.

    transform_rows[i], when tracked, expresses polys[i] as sum over j of
    transform_rows[i][j] * source_gens[j].
    """

    def __init__(self, polys, order, field, varnames,
                 transform_rows=None, source_gens=None):
        self.polys = polys
        self.order = order
        self.field = field
        self.vars = tuple(varnames)
        self.transform_rows = transform_rows
        self.source_gens = source_gens

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __repr__(self):
        return f"GroebnerBasis({[g.fmt() for g in self.polys]})"


class ReductionResult:

    def __init__(self, remainder, cofactors):
        self.remainder = remainder
        self.cofactors = cofactors


class Ideal:
    """Generators plus cached Groebner data. Treat as immutable."""

    def __init__(self, generators, field=None, varnames=None):
        gens = list(generators)
        if gens:
            field = gens[0].field
            varnames = gens[0].vars
            for g in gens[1:]:
                if g.vars != varnames or g.field != field:
                    raise ContextError("mixed contexts in ideal generators")
        elif field is None or varnames is None:
            raise ValueError("empty generator list needs explicit context")
        self.generators = gens
        self.field = field
        self.vars = tuple(varnames)
        self._gb_cache = {}
        self.dimension_cache = None

    def nonzero_gens(self):
        return [g for g in self.generators if not g.is_zero()]

    def groebner(self, order=GREVLEX, with_transform=False):
        key = (order.tag, bool(with_transform))
        got = self._gb_cache.get(key)
        if got is None and not with_transform:
            got = self._gb_cache.get((order.tag, True))
        if got is None:
            got = buchberger(self.generators, order, with_transform,
                             field=self.field, varnames=self.vars)
            self._gb_cache[key] = got
        return got

    def __repr__(self):
        return f"Ideal({[g.fmt() for g in self.generators]})"


def _divides(ea, eb):
    return all(x <= y for x, y in zip(ea, eb))


def _mono_mul(field, varnames, e, c):
    return MPoly(field, varnames, {tuple(e): c})


def _is_fn(field):
    return isinstance(field, FnField) and field.nvars > 0


def _log_terms(coeff_log, terms):
    if coeff_log is not None:
        coeff_log.extend(terms.values())


# ---------------------------------------------------------------------------
# reduction


def _clear_denominators(f):
    """Return (g, s) with g = s*f, s a nonzero scalar, g denominator-free
    with content-stripped numerators. Identity over scalar fields."""
    K = f.field
    if not _is_fn(K) or f.is_zero():
        return f, K.one
    B = K.base
    lcmden = td_one(B, K.nvars)
    for c in f.terms.values():
        g = td_gcd(B, lcmden, c.den)
        lcmden = td_divexact(B, td_mul(B, lcmden, c.den), g)
    cont = {}
    scaled = {}
    for e, c in f.terms.items():
        num = td_mul(B, c.num, td_divexact(B, lcmden, c.den))
        scaled[e] = num
        cont = td_gcd(B, cont, num)
    if td_deg(cont) > 0:
        scaled = {e: td_divexact(B, n, cont) for e, n in scaled.items()}
    terms = {e: K.make(n) for e, n in scaled.items()}
    g = MPoly(K, f.vars, terms)
    s = K.div(K.make(lcmden), K.make(cont))
    return g, s


def _strip_content(f):
    """Divide out the numerator content of a denominator-free poly.

    Returns (g, gamma) with f = gamma * g. Over scalar fields gamma = 1.
    """
    K = f.field
    if not _is_fn(K) or f.is_zero():
        return f, K.one
    B = K.base
    cont = {}
    for c in f.terms.values():
        cont = td_gcd(B, cont, c.num)
        if td_deg(cont) == 0:
            return f, K.one
    terms = {e: K.make(td_divexact(B, c.num, cont))
             for e, c in f.terms.items()}
    return MPoly(K, f.vars, terms), K.make(cont)


def _reduce_raw(f, G, order, coeff_log=None, need_cof=True):
    """Divide f by G. Returns (rem_terms, cofactor_term_dicts, mult) with

        mult * f = rem + sum_i cof_i * G_i

    exactly. Over a function field mult accumulates the leading coefficients
    used in pseudo-division steps; over scalar fields mult = 1.
    """
    K = f.field
    pseudo = _is_fn(K)
    lts = [g.lead_term(order) for g in G]
    p = dict(f.terms)
    rem = {}
    cof = [dict() for _ in G]
    mult = K.one
    _log_terms(coeff_log, p)
    while p:
        e = max(p, key=order.key)
        c = p[e]
        for i, (le, lc) in enumerate(lts):
            if _divides(le, e):
                qe = tuple(x - y for x, y in zip(e, le))
                if pseudo:
                    # p <- lc*p - c*X^qe*G_i ; rescale everything else by lc
                    mult = K.mul(mult, lc)
                    piles = itertools.chain([rem], cof) if need_cof else [rem]
                    for d in piles:
                        for k in list(d):
                            d[k] = K.mul(d[k], lc)
                    newp = {}
                    for k, v in p.items():
                        newp[k] = K.mul(v, lc)
                    changed = []
                    for ge, gc in G[i].terms.items():
                        t = tuple(x + y for x, y in zip(qe, ge))
                        s = K.sub(newp.get(t, K.zero), K.mul(c, gc))
                        if K.is_zero(s):
                            newp.pop(t, None)
                        else:
                            newp[t] = s
                            changed.append(s)
                    p = newp
                    if need_cof:
                        cof[i][qe] = K.add(cof[i].get(qe, K.zero), c)
                else:
                    q = K.div(c, lc)
                    changed = []
                    for ge, gc in G[i].terms.items():
                        t = tuple(x + y for x, y in zip(qe, ge))
                        s = K.sub(p.get(t, K.zero), K.mul(q, gc))
                        if K.is_zero(s):
                            p.pop(t, None)
                        else:
                            p[t] = s
                            changed.append(s)
                    if need_cof:
                        cof[i][qe] = K.add(cof[i].get(qe, K.zero), q)
                if coeff_log is not None:
                    coeff_log.extend(changed)
                break
        else:
            rem[e] = c
            del p[e]
    return rem, cof, mult


def reduce(f, G, order=GREVLEX, coeff_log=None):
    """Multivariate division: largest reducible term first, divisor
    tie-break by lowest index. The identity f = rem + sum h_i g_i is exact.
    """
    if not G or any(g.is_zero() for g in G):
        raise ValueError("divisor list must be nonempty with nonzero entries")
    K = f.field
    rem_t, cof_t, mult = _reduce_raw(f, G, order, coeff_log)
    if not K.eq(mult, K.one):
        minv = K.inv(mult)
        rem_t = {e: K.mul(c, minv) for e, c in rem_t.items()}
        cof_t = [{e: K.mul(c, minv) for e, c in d.items()} for d in cof_t]
    rem = MPoly(K, f.vars, rem_t)
    cofs = [MPoly(K, f.vars, d) for d in cof_t]
    if order.degree_compatible and not f.is_zero():
        df = f.degree()
        assert rem.degree() <= df
        for h, g in zip(cofs, G):
            if not h.is_zero():
                assert h.degree() + g.degree() <= df
    return ReductionResult(rem, cofs)


# ---------------------------------------------------------------------------
# Buchberger


def _spair_data(wi, wj, order):
    ei, ci = wi.lead_term(order)
    ej, cj = wj.lead_term(order)
    lcm = tuple(max(x, y) for x, y in zip(ei, ej))
    return ei, ci, ej, cj, lcm


def spoly(f, g, order=GREVLEX):
    """Cross-scaled S-polynomial: lc(g) X^(L-lt f) f - lc(f) X^(L-lt g) g."""
    ei, ci, ej, cj, lcm = _spair_data(f, g, order)
    K = f.field
    a = _mono_mul(K, f.vars, tuple(x - y for x, y in zip(lcm, ei)), cj)
    b = _mono_mul(K, f.vars, tuple(x - y for x, y in zip(lcm, ej)), ci)
    return a * f - b * g


def buchberger(gens, order=GREVLEX, with_transform=False, coeff_log=None,
               field=None, varnames=None, max_pairs=None):
    """Reduced Groebner basis by Buchberger's algorithm.

    Normal selection strategy: pairs ascend by total degree of the lcm with
    creation index as the tie-break. First (coprime) and second (chain)
    criteria prune pairs. Deterministic throughout. A max_pairs budget
    bounds the number of treated pairs; exceeding it raises PairBudget.
    """
    nz = [(j, g) for j, g in enumerate(gens) if not g.is_zero()]
    if not nz:
        if field is None:
            raise ValueError("zero ideal needs explicit context")
        return GroebnerBasis([], order, field, varnames,
                             [] if with_transform else None, list(gens))
    field = nz[0][1].field
    varnames = nz[0][1].vars
    K = field

    W = []
    rows = [] if with_transform else None

    def unit_row(j, scal):
        row = [MPoly.zero(K, varnames) for _ in gens]
        row[j] = MPoly.const(K, varnames, scal)
        return row

    for j, g in nz:
        cleared, s = _clear_denominators(g)
        W.append(cleared)
        if with_transform:
            rows.append(unit_row(j, s))

    pairs = []
    counter = itertools.count()
    treated = set()

    def push_pair(i, j):
        _, _, _, _, lcm = _spair_data(W[i], W[j], order)
        heapq.heappush(pairs, (sum(lcm), next(counter), i, j, lcm))

    for i in range(len(W)):
        for j in range(i + 1, len(W)):
            push_pair(i, j)

    while pairs:
        _, _, i, j, lcm = heapq.heappop(pairs)
        key = (i, j)
        if key in treated:
            continue
        treated.add(key)
        if max_pairs is not None and len(treated) > max_pairs:
            raise PairBudget(f"pair budget {max_pairs} exhausted")
        ei, ci, ej, cj, lcm = _spair_data(W[i], W[j], order)
        # first criterion: coprime leading monomials
        if all(x + y == z for x, y, z in zip(ei, ej, lcm)):
            continue
        # second criterion: some treated k splits the pair
        skip = False
        for k in range(len(W)):
            if k in (i, j):
                continue
            ek, _ = W[k].lead_term(order)
            if _divides(ek, lcm):
                kij = (min(i, k), max(i, k))
                kkj = (min(j, k), max(j, k))
                if kij in treated and kkj in treated:
                    skip = True
                    break
        if skip:
            continue
        a = _mono_mul(K, varnames, tuple(x - y for x, y in zip(lcm, ei)), cj)
        b = _mono_mul(K, varnames, tuple(x - y for x, y in zip(lcm, ej)), ci)
        S = a * W[i] - b * W[j]
        if S.is_zero():
            continue
        rem_t, cof_t, mult = _reduce_raw(S, W, order, coeff_log,
                                         need_cof=with_transform)
        if not rem_t:
            continue
        rem = MPoly(K, varnames, rem_t)
        new, gamma = _strip_content(rem)
        if with_transform:
            row_s = [a * rows[i][m] - b * rows[j][m] for m in range(len(gens))]
            if not K.eq(mult, K.one):
                mm = MPoly.const(K, varnames, mult)
                row_s = [mm * r for r in row_s]
            for k, d in enumerate(cof_t):
                if not d:
                    continue
                hk = MPoly(K, varnames, d)
                row_s = [rs - hk * rk for rs, rk in zip(row_s, rows[k])]
            if not K.eq(gamma, K.one):
                ginv = K.inv(gamma)
                row_s = [r.scale(ginv) for r in row_s]
            rows.append(row_s)
        W.append(new)
        for k in range(len(W) - 1):
            push_pair(k, len(W) - 1)

    return _interreduce(W, rows, gens, order, K, varnames)


def _interreduce(W, rows, gens, order, K, varnames):
    # minimalize: drop elements whose leading monomial another one divides
    keep = []
    lts = [w.lead_term(order)[0] for w in W]
    for i in range(len(W)):
        drop = False
        for j in range(len(W)):
            if i == j:
                continue
            if _divides(lts[j], lts[i]) and (lts[j] != lts[i] or j < i):
                drop = True
                break
        if not drop:
            keep.append(i)
    W = [W[i] for i in keep]
    if rows is not None:
        rows = [rows[i] for i in keep]

    # tail-reduce each element against the others
    for i in range(len(W)):
        others = W[:i] + W[i + 1:]
        if not others:
            continue
        rem_t, cof_t, mult = _reduce_raw(W[i], others, order,
                                         need_cof=rows is not None)
        rem = MPoly(K, varnames, rem_t)
        new, gamma = _strip_content(rem)
        if rows is not None:
            row = rows[i]
            if not K.eq(mult, K.one):
                mm = MPoly.const(K, varnames, mult)
                row = [mm * r for r in row]
            for k, d in enumerate(cof_t):
                if not d:
                    continue
                hk = MPoly(K, varnames, d)
                src = rows[k] if k < i else rows[k + 1]
                row = [r - hk * rs for r, rs in zip(row, src)]
            if not K.eq(gamma, K.one):
                ginv = K.inv(gamma)
                row = [r.scale(ginv) for r in row]
            rows[i] = row
        W[i] = new

    # monic normalization and canonical sort
    out = []
    for i, w in enumerate(W):
        _, lc = w.lead_term(order)
        if not K.eq(lc, K.one):
            inv = K.inv(lc)
            w = w.scale(inv)
            if rows is not None:
                rows[i] = [r.scale(inv) for r in rows[i]]
        out.append(w)
    idx = sorted(range(len(out)), key=lambda i: order.key(out[i].lead_term(order)[0]))
    polys = [out[i] for i in idx]
    trows = [rows[i] for i in idx] if rows is not None else None
    return GroebnerBasis(polys, order, K, varnames, trows, list(gens))


# ---------------------------------------------------------------------------
# elimination and ideal arithmetic


def eliminate(I, elim_vars, inner=GREVLEX):
    """Groebner basis of I intersected with the subring without elim_vars."""
    elim_idx = sorted(I.vars.index(v) if not isinstance(v, int) else v
                      for v in elim_vars)
    elim_set = set(elim_idx)
    remaining = tuple(v for i, v in enumerate(I.vars) if i not in elim_set)
    order = BlockOrder(elim_idx, inner=inner, outer=GREVLEX)
    gb = I.groebner(order)
    kept = []
    for g in gb.polys:
        if all(all(e[i] == 0 for i in elim_idx) for e in g.terms):
            kept.append(g.restrict_vars(remaining))
    kept.sort(key=lambda g: inner.key(g.lead_term(inner)[0]))
    return GroebnerBasis(kept, inner, I.field, remaining)


def ideal_member(f, I, order=GREVLEX):
    """None when f is not in I; otherwise cofactors against I.generators."""
    K = I.field
    nz = I.nonzero_gens()
    if not nz:
        if f.is_zero():
            return [MPoly.zero(K, I.vars) for _ in I.generators]
        return None
    gb = I.groebner(order, with_transform=True)
    res = reduce(f, gb.polys, order)
    if not res.remainder.is_zero():
        return None
    out = [MPoly.zero(K, I.vars) for _ in I.generators]
    for h, row in zip(res.cofactors, gb.transform_rows):
        if h.is_zero():
            continue
        for j in range(len(out)):
            if not row[j].is_zero():
                out[j] = out[j] + h * row[j]
    return out


def _fresh_names(prefix, taken, count):
    out = []
    i = 0
    while len(out) < count:
        i += 1
        cand = prefix if i == 1 else f"{prefix}{i}"
        if cand not in taken and cand not in out:
            out.append(cand)
    return out


def _default_znames(xvars, count):
    out = []
    i = 0
    while len(out) < count:
        i += 1
        cand = f"Z{i}"
        if cand not in xvars:
            out.append(cand)
    return out


def ideal_intersect(I, J):
    """I cap J via eliminating t from t*I + (1-t)*J."""
    if I.vars != J.vars or I.field != J.field:
        raise ContextError("context mismatch")
    K = I.field
    (tname,) = _fresh_names("T#", I.vars, 1)
    ext = (tname,) + I.vars
    t = MPoly.var(K, ext, tname)
    one = MPoly.one(K, ext)
    gens = [t * g.extend_vars(ext) for g in I.nonzero_gens()]
    gens += [(one - t) * g.extend_vars(ext) for g in J.nonzero_gens()]
    if not gens:
        return Ideal([], K, I.vars)
    gb = eliminate(Ideal(gens), [tname])
    return Ideal(list(gb.polys), K, I.vars)


def multi_intersect(ideals):
    """Intersection of several ideals with one tagged elimination."""
    if not ideals:
        raise ValueError("empty ideal list")
    if len(ideals) == 1:
        return Ideal(list(ideals[0].generators), ideals[0].field,
                     ideals[0].vars)
    first = ideals[0]
    K = first.field
    for J in ideals[1:]:
        if J.vars != first.vars or J.field != K:
            raise ContextError("context mismatch")
    m = len(ideals)
    tnames = _fresh_names("T#", first.vars, m)
    ext = tuple(tnames) + first.vars
    one = MPoly.one(K, ext)
    tsum = MPoly.zero(K, ext)
    gens = []
    for tn, J in zip(tnames, ideals):
        t = MPoly.var(K, ext, tn)
        tsum = tsum + t
        for g in J.nonzero_gens():
            gens.append(t * g.extend_vars(ext))
    gens.append(one - tsum)
    gb = eliminate(Ideal(gens), tnames)
    return Ideal(list(gb.polys), K, first.vars)


def ideal_quotient(I, J):
    """(I : J) as the intersection over generators of (1/g)(I cap <g>)."""
    gens_j = J.nonzero_gens()
    if not gens_j:
        raise ValueError("undefined quotient by the zero ideal")
    parts = []
    for g in gens_j:
        L = ideal_intersect(I, Ideal([g]))
        quots = []
        for h in L.nonzero_gens():
            q = h.divexact(g)
            assert q is not None, "intersection element not divisible"
            quots.append(q)
        parts.append(Ideal(quots, I.field, I.vars))
    return multi_intersect(parts)


def idealizer_preimage(A_presentation, J_gens, c, order=GREVLEX):
    """Preimage in K[X] of c * Id_A(J) for A = K[X]/I prime.

    Id_A(J) = (J : J) inside Frac(A); scaled by c it lands in A, and its
    preimage is the ideal quotient ((I + cJ) : J) upstairs.
    """
    I = A_presentation
    gb = I.groebner(order)
    if gb.polys:
        r = reduce(c, gb.polys, order).remainder
        if r.is_zero():
            raise ValueError("scaling element vanishes on the presentation")
    elif c.is_zero():
        raise ValueError("scaling element vanishes on the presentation")
    up = Ideal(list(I.generators) + [c * g for g in J_gens], I.field, I.vars)
    q = ideal_quotient(up, Ideal(list(J_gens), I.field, I.vars))
    return q.groebner(order)


def ring_hom_kernel(I, images, znames=None):
    """Kernel of K[Z] -> K[X]/I sending Z_j to images[j], as a GB in K[Z]."""
    if not images:
        raise ValueError("need at least one image")
    K = images[0].field
    xvars = images[0].vars
    if znames is None:
        znames = _default_znames(xvars, len(images))
    ext = tuple(xvars) + tuple(znames)
    gens = [g.extend_vars(ext) for g in I.nonzero_gens()]
    for zn, g in zip(znames, images):
        gens.append(MPoly.var(K, ext, zn) - g.extend_vars(ext))
    gb = eliminate(Ideal(gens, K, ext), list(xvars))
    return gb


def hom_preimage(f, I, images, znames=None):
    """h in K[Z] with h(images) = f mod I, via reduction under X-elimination."""
    K = f.field
    xvars = f.vars
    if znames is None:
        znames = _default_znames(xvars, len(images))
    ext = tuple(xvars) + tuple(znames)
    gens = [g.extend_vars(ext) for g in I.nonzero_gens()]
    for zn, g in zip(znames, images):
        gens.append(MPoly.var(K, ext, zn) - g.extend_vars(ext))
    order = BlockOrder(list(range(len(xvars))), inner=GREVLEX, outer=GREVLEX)
    gb = buchberger(gens, order)
    r = reduce(f.extend_vars(ext), gb.polys, order).remainder
    for e in r.terms:
        if any(e[i] for i in range(len(xvars))):
            raise ValueError("element is not in the image subring")
    return r.restrict_vars(tuple(znames))


# ---------------------------------------------------------------------------
# linear algebra


def _eliminate_rows(K, rows, ncols=None):
    """Fraction-free forward elimination (Bareiss-style updates).

    Pivot selection: for each column left to right, the first not-yet-used
    row with a nonzero entry. Used rows are frozen; the surviving rows end
    in echelon form with zeros before each pivot column. Pivoting stops at
    ncols, so trailing columns (an augmented RHS) are carried along only.
    """
    m = len(rows)
    n = len(rows[0]) if ncols is None else ncols
    prev = K.one
    pivots = []
    used = set()
    for col in range(n):
        piv = None
        for r in range(m):
            if r not in used and not K.is_zero(rows[r][col]):
                piv = r
                break
        if piv is None:
            continue
        used.add(piv)
        pivots.append((piv, col))
        pv = rows[piv][col]
        for r in range(m):
            if r in used:
                continue
            f = rows[r][col]
            rows[r] = [K.div(K.sub(K.mul(x, pv), K.mul(f, y)), prev)
                       for x, y in zip(rows[r], rows[piv])]
        prev = pv
    return rows, pivots


def solve_linear(K, A, b):
    """Solve A x = b over the field K by fraction-free elimination.

    Free variables are fixed to 0, so pivot entries come out as ratios of
    minors of (A|b). Returns None exactly when the system is inconsistent.
    """
    if not A:
        return [] if not b else None
    m, n = len(A), len(A[0])
    rows = [list(r) + [bv] for r, bv in zip(A, b)]
    rows, pivots = _eliminate_rows(K, rows, ncols=n)
    used = {p for p, _ in pivots}
    for r in range(m):
        if r not in used and not K.is_zero(rows[r][n]):
            return None
    x = [K.zero] * n
    for piv, col in reversed(pivots):
        acc = rows[piv][n]
        for j in range(col + 1, n):
            if not K.is_zero(rows[piv][j]) and not K.is_zero(x[j]):
                acc = K.sub(acc, K.mul(rows[piv][j], x[j]))
        x[col] = K.div(acc, rows[piv][col])
    return x


def linear_nullspace(K, A):
    """Basis of the nullspace of A over K, one vector per free column."""
    if not A:
        return []
    n = len(A[0])
    rows, pivots = _eliminate_rows(K, [list(r) for r in A])
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        v = [K.zero] * n
        v[free] = K.one
        for piv, col in reversed(pivots):
            acc = K.neg(K.mul(rows[piv][free], v[free]))
            for j in range(col + 1, n):
                if j == free:
                    continue
                if not K.is_zero(rows[piv][j]) and not K.is_zero(v[j]):
                    acc = K.sub(acc, K.mul(rows[piv][j], v[j]))
            v[col] = K.div(acc, rows[piv][col])
        basis.append(v)
    return basis


def mpoly_det(rows):
    """Fraction-free (Bareiss) determinant of a square MPoly matrix."""
    if not rows:
        raise ValueError("empty matrix")
    n = len(rows)
    K = rows[0][0].field
    varnames = rows[0][0].vars
    M = [list(r) for r in rows]
    sign = 1
    prev = MPoly.one(K, varnames)
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = None
            for r in range(k + 1, n):
                if not M[r][k].is_zero():
                    swap = r
                    break
            if swap is None:
                return MPoly.zero(K, varnames)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[k][k] * M[i][j] - M[i][k] * M[k][j]
                q = num.divexact(prev)
                assert q is not None, "Bareiss division must be exact"
                M[i][j] = q
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def saturation(I, g):
    """(I : g^infinity) via eliminating U from I + <U*g - 1>."""
    if g.is_zero():
        raise ValueError("saturation by zero")
    K = I.field
    (uname,) = _fresh_names("U#", I.vars, 1)
    ext = (uname,) + I.vars
    u = MPoly.var(K, ext, uname)
    gens = [h.extend_vars(ext) for h in I.nonzero_gens()]
    gens.append(u * g.extend_vars(ext) - MPoly.one(K, ext))
    gb = eliminate(Ideal(gens), [uname])
    return Ideal(list(gb.polys), K, I.vars)


def measure_basis(I, order=GREVLEX, cc_threshold=None):
    """Instrumentation: measured degree and coefficient complexity of the
    reduced basis together with its cofactor representations. Outliers
    against cc_threshold are flagged, never failed.
    """
    from .polys import _coeff_complexity
    gb = I.groebner(order, with_transform=True)
    K = I.field
    deg = 0
    cc = 0
    for g in gb.polys:
        deg = max(deg, int(g.degree()))
        for c in g.terms.values():
            cc = max(cc, _coeff_complexity(K, c))
        hs = ideal_member(g, I, order)
        assert hs is not None, "basis element lost from its own ideal"
        for h in hs:
            for c in h.terms.values():
                cc = max(cc, _coeff_complexity(K, c))
    return {
        "degree": deg,
        "coeff_complexity": cc,
        "flagged": cc_threshold is not None and cc > cc_threshold,
    }


# ---------------------------------------------------------------------------
# dimension


def krull_dimension(I, order=GREVLEX):
    """Dimension of K[X]/I via maximal independent variable sets mod lt(I).

    Zero ideal: number of variables. Unit ideal: -1.
    """
    if I.dimension_cache is not None:
        return I.dimension_cache
    n = len(I.vars)
    gb = I.groebner(order)
    if not gb.polys:
        I.dimension_cache = n
        return n
    lts = [g.lead_term(order)[0] for g in gb.polys]
    if any(not any(e) for e in lts):
        I.dimension_cache = -1
        return -1
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in lts]
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            sset = set(S)
            if all(not sup <= sset for sup in supports):
                I.dimension_cache = size
                return size
    I.dimension_cache = 0
    return 0
