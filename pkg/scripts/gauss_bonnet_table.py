"""Total curvature and genus for a few tori and the sphere over a range of grids."""

import numpy as np

from torusberry import topology as tp
from torusberry.geometry import TorusShape

surfaces = [tp.torus_surface(TorusShape(a, b)) for a, b in [(1, 2), (0.5, 5), (2, 2.1)]]
surfaces.append(tp.sphere_surface())

print(f"{'surface':<26} {'grid':>5} {'total':>22} {'genus est':>14} genus")
for s in surfaces:
    for n in (16, 64, 256):
        r = tp.genus_of(s, n)
        print(f"{s.name:<26} {n:5d} {r.total_curvature:22.15e} {r.genus_estimate:14.10f} {r.genus}")

pos, neg = tp.curvature_sign_regions(TorusShape(1, 2), 1024)
print(f"torus(1, 2) outer/inner split at 1024: {pos:.9f} / {neg:.9f}  (4 pi = {4 * np.pi:.9f})")
