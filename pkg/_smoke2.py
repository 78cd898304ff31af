import random

from normpit.fields import GFp, QQ
from normpit.polys import MPoly
from normpit.curves import CurveContext, trager_normalize
from normpit.pit import Circuit, bounded_degree_hitting_set
from normpit.bruteforce import (dense_expand, brute_force_nonzero,
                                verify_hitting_set, integrality_witness_check,
                                generator_eliminants)

Q = QQ()
F7 = GFp(7)

# node Y^2 - X^2(X+1) over QQ, projection onto X
f = MPoly(Q, ("X", "Y"), {(0, 2): Q.one, (3, 0): Q.neg(Q.one),
                          (2, 0): Q.neg(Q.one)})
ctx = CurveContext(Q, f, direction=(1, 0))
O = trager_normalize(ctx)
print("node steps:", len(O.steps), "gens:", O.ring.vars)
els = generator_eliminants(O)
A = els[0][0]  # FracElement
for name, coeffs in zip(O.ring.vars, els):
    from normpit.fields import FnField
    AA = FnField(Q, (O.avar,))
    print(f"  {name}: deg {len(coeffs)-1}:",
          [AA.fmt(c) for c in coeffs])
print("node integrality:", integrality_witness_check(O))

# cusp Y^2 - X^3
fc = MPoly(Q, ("X", "Y"), {(0, 2): Q.one, (3, 0): Q.neg(Q.one)})
Oc = trager_normalize(CurveContext(Q, fc, direction=(1, 0)))
print("cusp steps:", len(Oc.steps), "integrality:",
      integrality_witness_check(Oc))

# parabola Y - X^2 (already closed)
fp = MPoly(Q, ("X", "Y"), {(0, 1): Q.one, (2, 0): Q.neg(Q.one)})
Op = trager_normalize(CurveContext(Q, fp, direction=(1, 0)))
print("parabola steps:", len(Op.steps), "integrality:",
      integrality_witness_check(Op))

# node over F7
f7 = MPoly(F7, ("X", "Y"), {(0, 2): F7.one, (3, 0): F7.neg(F7.one),
                            (2, 0): F7.neg(F7.one)})
O7 = trager_normalize(CurveContext(F7, f7, direction=(1, 0)))
print("node/F7 integrality:", integrality_witness_check(O7))

# dense expansion + dual-method zero test
names = ("X1", "X2", "X3")
rng = random.Random(3)


def rand_poly(deg):
    import itertools
    while True:
        terms = {}
        for e in itertools.product(range(deg + 1), repeat=3):
            if sum(e) <= deg and rng.randrange(3) == 0:
                c = rng.randrange(1, 7)
                terms[e] = F7.from_int(c)
        if terms:
            return MPoly(F7, names, terms)


x1 = MPoly.var(F7, names, "X1")
c1 = Circuit(F7, [[x1]])
d = dense_expand(c1)
print("dense X1:", d.coeffs)
assert brute_force_nonzero(c1)

p = rand_poly(2)
zero = Circuit(F7, [[p], [p.scale(F7.from_int(6))]])
assert not brute_force_nonzero(zero)
print("zero circuit detected")

for _ in range(5):
    c = Circuit(F7, [[rand_poly(2), rand_poly(2)] for _ in range(3)])
    assert brute_force_nonzero(c) in (True, False)
print("random dual-method agreement ok")

H = bounded_degree_hitting_set(3, 4, F7)
c = Circuit(F7, [[rand_poly(2), rand_poly(2)] for _ in range(3)])
print("verify_hitting_set:", verify_hitting_set(H, c))

# X1 misses the all-zero point
from normpit.pit import HittingSet
H0 = HittingSet(F7, [(F7.zero, F7.zero, F7.zero)], "grid")
print("X1 on origin only:", verify_hitting_set(H0, c1))
print("smoke2 ok")
