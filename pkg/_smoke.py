import random
import sys

sys.setrecursionlimit(100000)

from normpit.fields import GFp
from normpit.polys import MPoly
from normpit.pit import (Circuit, normal_form, certify_nonzero, restrict,
                         PlaneRestriction, bounded_degree_hitting_set,
                         boost_epsilon, hitting_set_main, hitting_set_inhom,
                         check_restricted_separability)

F = GFp(7)
names = ("X1", "X2", "X3")


def rand_linear(rng, homogeneous=False):
    while True:
        terms = {}
        for i in range(3):
            c = rng.randrange(7)
            if c:
                e = [0, 0, 0]
                e[i] = 1
                terms[tuple(e)] = F.from_int(c)
        if not homogeneous:
            c = rng.randrange(7)
            if c:
                terms[(0, 0, 0)] = F.from_int(c)
        if terms:
            return MPoly(F, names, terms)


rng = random.Random(11)

# --- homogeneous delta=1 instance: three summands, each a product of 4 linear forms
for trial in range(5):
    summands = [[rand_linear(rng, homogeneous=True) for _ in range(4)]
                for _ in range(3)]
    c = Circuit(F, summands, squarefree_summand=0, homogeneous=True)
    nf = normal_form(c)
    print(f"trial {trial}: case={nf.case} zero={nf.is_zero} notes={nf.notes}")
    res = certify_nonzero(c, seed=0, max_candidates=24)
    print(f"  verdict={res.verdict} case={res.case} "
          f"route={res.certificate.get('route')} "
          f"fallback={res.certificate.get('fallback')}")
    if res.verdict == "nonzero":
        v = c.evaluate_in(res.point_field, res.point) \
            if res.point_field is not c.field else c.evaluate(res.point)
        assert not res.point_field.is_zero(v), "witness failed re-evaluation"
        print("  witness ok")

# --- zero circuit: F0 + F1 + (-(F0+F1)) as factored products won't expand;
# use proportional cancellation: A*B + A*B*(scaled) with scalars summing to 0
A = rand_linear(rng, homogeneous=True)
B = rand_linear(rng, homogeneous=True)
Cf = rand_linear(rng, homogeneous=True)
z = Circuit(F, [[A, B, Cf], [A.scale(F.from_int(3)), B, Cf],
                [A.scale(F.from_int(3)), B, Cf]], homogeneous=True)
nfz = normal_form(z)
print(f"zero-merge: case={nfz.case} zero={nfz.is_zero} notes={nfz.notes}")
resz = certify_nonzero(z)
print(f"  verdict={resz.verdict} reason={resz.certificate.get('reason')}")
assert resz.verdict == "zero"

# --- opposite-sum zero: P0 = A*B, then two summands whose sum is -P0
# pick P1 = A*(B+L), P2 = -A*(2B+L) scaled so P1+P2 = -A*B: A*(B+L) - A*(2B+L) = -A*B
L = rand_linear(rng, homogeneous=True)
P1f = [A, B + L]
P2f = [A.scale(F.neg(F.one)), B + B + L]
z2 = Circuit(F, [[A, B], P1f, P2f], squarefree_summand=0, homogeneous=True)
assert z2.expand().is_zero()
nfz2 = normal_form(z2)
print(f"opposite-sum: case={nfz2.case} zero={nfz2.is_zero} "
      f"justify={nfz2.justify}")
resz2 = certify_nonzero(z2)
print(f"  verdict={resz2.verdict}")
assert resz2.verdict == "zero"

# --- inhomogeneous instance (single chart) through the pipeline
for trial in range(3):
    summands = [[rand_linear(rng) for _ in range(3)] for _ in range(3)]
    c = Circuit(F, summands, squarefree_summand=0)
    nf = normal_form(c)
    res = certify_nonzero(c, seed=0, max_candidates=24)
    print(f"inhom {trial}: case={nf.case} verdict={res.verdict} "
          f"route={res.certificate.get('route')} "
          f"fallback={res.certificate.get('fallback')}")
    if res.verdict == "nonzero":
        v = c.evaluate_in(res.point_field, res.point) \
            if res.point_field is not c.field else c.evaluate(res.point)
        assert not res.point_field.is_zero(v)

# --- restriction + separability sanity
pl = PlaneRestriction(F, 3, "affine")
f = MPoly(F, names, {(2, 0, 0): F.one, (0, 1, 1): F.from_int(3)})
rf = restrict(f, pl)
print("restrict symbolic ok, degree", rf.degree())
print("separability:", check_restricted_separability(f, 1, 1))

# --- hitting sets
H = bounded_degree_hitting_set(2, 3, F)
print("grid |H| =", len(H), H.provenance)
Hb = boost_epsilon(bounded_degree_hitting_set(1, 2, F), 1, 2) \
    if False else boost_epsilon(H, "1/2", 3)
print("boosted |H| =", len(Hb), Hb.provenance)

print("smoke ok")
