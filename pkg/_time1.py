import random
import sys
import time

from normpit.fields import GFp, FnField
from normpit.polys import MPoly
from normpit.groebner import Ideal, reduce as poly_reduce
from normpit.curves import CurveContext, trager_normalize
from normpit.pit import (Circuit, normal_form, plane_parameter_names,
                         _restrict_rows, _restrict_product)

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
summands = [[rand_linear(rng, homogeneous=True) for _ in range(4)]
            for _ in range(3)]
c = Circuit(F, summands, squarefree_summand=0, homogeneous=True)

t0 = time.time()
nf = normal_form(c)
print(f"normal_form: {time.time()-t0:.2f}s case={nf.case}", flush=True)

(sc0, fl0), (sc1, fl1), (sc2, fl2) = nf.summands

K = FnField(F, plane_parameter_names(3))
rows = [tuple(K.var(3 * i + r) for r in range(3)) for i in range(3)]
chart = 0

t0 = time.time()
cp = _restrict_rows(fl0[0], K, rows, chart)
print(f"cp restrict: {time.time()-t0:.2f}s terms={len(cp.terms)}", flush=True)

t0 = time.time()
ctx = CurveContext(K, cp)
print(f"CurveContext: {time.time()-t0:.2f}s", flush=True)

t0 = time.time()
O = trager_normalize(ctx)
print(f"trager: {time.time()-t0:.2f}s steps={len(O.steps)} "
      f"gens={len(O.ring.generators)} ringvars={O.ring.vars}", flush=True)

t0 = time.time()
v1 = _restrict_product(K, fl1, rows, chart).scale(K.from_base(sc1))
v2 = _restrict_product(K, fl2, rows, chart).scale(K.from_base(sc2))
print(f"v1,v2: {time.time()-t0:.2f}s terms={len(v1.terms)},{len(v2.terms)}",
      flush=True)

t0 = time.time()
g1 = v1.subst_polys(O.coord_images)
g2 = v2.subst_polys(O.coord_images)
print(f"subst: {time.time()-t0:.2f}s", flush=True)

t0 = time.time()
J = Ideal(list(O.ring.generators) + [g2])
gb = J.groebner().polys
print(f"groebner: {time.time()-t0:.2f}s |gb|={len(gb)}", flush=True)

t0 = time.time()
r = poly_reduce(g1, gb).remainder
print(f"reduce: {time.time()-t0:.2f}s regular={r.is_zero()}", flush=True)
