import time
from skeinx.boxspace import basis, admissible_points, point_ctx
from skeinx.rewrite import engine, IrreducibleResidue
pt = admissible_points(3, seed=9)[0]
b6 = basis(6).elements
eng = engine()
ctx = point_ctx(pt)
t00 = time.time()
slowest = []
for i in range(80):
    t0 = time.time()
    for j in range(i, 80):
        t1 = time.time()
        try:
            eng.pair(b6[i], b6[j], ctx)
        except IrreducibleResidue as e:
            print('RESIDUE', i, j, flush=True)
        dt = time.time()-t1
        if dt > 2: slowest.append((round(dt,1), i, j))
    print(f'row {i}: {time.time()-t0:.1f}s total {time.time()-t00:.0f}s dag={len(eng.dag)}', flush=True)
slowest.sort(reverse=True)
print(slowest[:10], flush=True)
