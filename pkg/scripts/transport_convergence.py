"""RK4 parallel-transport defect against the closed-form rotation, halving the step each row."""

import numpy as np

from torusberry import transport as tr

path = tr.fourier_loop(0.0, 0.3, 2, 1, [(0.3, 1, 0.2)], [(0.4, 2, 1.0)])
exact = np.exp(1j * tr.holonomy(path, 4096).gamma_raw)
prev = None
print(f"{'steps':>6} {'defect':>12} {'ratio':>8}")
for n in (64, 128, 256, 512, 1024, 2048):
    d = abs(tr.transport_plus(path, 1.0, n) - exact)
    print(f"{n:6d} {d:12.3e} {'' if prev is None else f'{prev / d:8.2f}'}")
    prev = d
