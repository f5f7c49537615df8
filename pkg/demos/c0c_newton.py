"""
Recover the C0c class by solving its three trigonometric equations.

The class is fixed by a triple (a, b, c) of s-unit offsets. Newton from a
nearby guess converges in a few steps; a multistart over [0, 8)^3 turns up
every root, some of which build Popovic sequences instead.
"""

import numpy as np

from cazac import classify8, discrepancy, families
from cazac.newton import fourth_form_residual, multistart, newton_solve

hist = []
t, its = newton_solve((0.1, 0.3, 0.1), history=hist)
print(f"Newton: {its} iterations to (a, b, c) = ({t.a:.7f}, {t.b:.7f}, {t.c:.7f})")
for x, r in hist:
    print(f"  |r| = {r:.2e}")

seqs = families.c0c_sequences(t)
print("the eight built sequences:", ", ".join(f"D={discrepancy(x).d:.0e}" for x in seqs))

roots = multistart(grid=8)
print(f"multistart found {len(roots)} roots:")
for root in roots:
    r = np.max(np.abs(fourth_form_residual(root.a, root.b, root.c)))
    cls = classify8(families.c0c_sequences(root)[0]).cls
    print(f"  ({root.a:.4f}, {root.b:.4f}, {root.c:.4f})  |r|={r:.0e}  class {cls}")
