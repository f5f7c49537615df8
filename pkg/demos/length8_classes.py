"""
Sort random length-8 CAZAC sequences into their equivalence classes.

Every length-8 CAZAC sequence is, up to conjugation, modulation, decimation,
translation and a constant phase, either a Popovic sequence (one free phase)
or one of three isolated sequences C0a, C0b, C0c. We draw IPUC outputs and
count how often each class shows up.
"""

from collections import Counter

import numpy as np

from cazac import IpucConfig, classify8, ipuc_batch
from cazac.seqcore import canonicalize

runs = ipuc_batch(8, 300, IpucConfig(n=8, rng_seed=1))
labels = [classify8(r.sequence) for r in runs if r.converged]
counts = Counter(lab.cls for lab in labels)
print(f"{len(labels)} converged runs")
for cls in ("P", "C0a", "C0b", "C0c", "Unknown"):
    print(f"  {cls:8s} {counts[cls]:4d}  ({100 * counts[cls] / len(labels):.1f}%)")

# one member of each zero-degree class, with the chain that maps it home
seen = set()
for r, lab in zip(runs, labels):
    if lab.cls.startswith("C0") and lab.cls not in seen:
        seen.add(lab.cls)
        s = canonicalize(r.sequence / np.abs(r.sequence)).to_s()
        print(f"{lab.cls}: s = {np.round(s, 3)} maps to the representative via {lab.chain.label}")

popovic = [lab.theta_hat for lab in labels if lab.cls == "P"]
if popovic:
    print(f"Popovic free phase spread: min {min(popovic):.3f}, max {max(popovic):.3f} rad")
