import random
import time

from normpit.fields import GFp
from normpit.polys import MPoly
from normpit.pit import Circuit, certify_nonzero


def rand_poly(rng, F, names, deg, homogeneous):
    n = len(names)
    while True:
        terms = {}
        for e in _exps(n, deg, homogeneous):
            c = rng.randrange(F.p)
            if c:
                terms[e] = F.from_int(c)
        if terms:
            p = MPoly(F, names, terms)
            if p.degree() == deg:
                return p


def _exps(n, deg, homogeneous):
    import itertools
    for e in itertools.product(range(deg + 1), repeat=n):
        s = sum(e)
        if s == deg or (not homogeneous and s <= deg):
            yield e


def sample(rng, F, names, d, delta, homogeneous):
    summands = []
    for _ in range(3):
        facs = []
        left = d
        while left > 0:
            dd = min(delta, left)
            facs.append(rand_poly(rng, F, names, dd, homogeneous))
            left -= dd
        summands.append(facs)
    return Circuit(F, summands, squarefree_summand=0, homogeneous=homogeneous)


names = ("X1", "X2", "X3")

for p, delta, hom, tag in ((7, 1, False, "F7 d=4 delta=1 inhom"),
                           (5, 2, False, "F5 d=4 delta=2 inhom"),
                           (7, 1, True, "F7 d=4 delta=1 hom"),
                           (5, 2, True, "F5 d=4 delta=2 hom")):
    F = GFp(p)
    rng = random.Random(p * 100 + delta)
    times = []
    cases = {}
    for i in range(8):
        c = sample(rng, F, names, 4, delta, hom)
        t0 = time.time()
        try:
            res = certify_nonzero(c, seed=0)
            el = time.time() - t0
            times.append(el)
            key = (res.verdict, res.case, res.certificate.get("route"),
                   res.certificate.get("fallback"))
            cases[key] = cases.get(key, 0) + 1
            if res.verdict == "nonzero":
                v = c.evaluate_in(res.point_field, res.point)
                assert not res.point_field.is_zero(v)
        except Exception as exc:
            el = time.time() - t0
            times.append(el)
            key = ("ERR", type(exc).__name__, str(exc)[:60])
            cases[key] = cases.get(key, 0) + 1
    print(f"{tag}: avg={sum(times)/len(times):.2f}s max={max(times):.2f}s")
    for k, v in cases.items():
        print(f"   {v}x {k}", flush=True)
