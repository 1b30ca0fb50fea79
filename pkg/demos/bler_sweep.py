"""BLER sweep of a short row-merged code against its union bound.

Runs a quick Monte-Carlo campaign (a minute or so) on a (32, 16) code and
prints the simulated block error rate next to the truncated union bound.
At high SNR and a generous list size the two converge.
"""

import numpy as np

import polarforge as pf
from polarforge.sim import monte_carlo, union_bound, write_csv

profile = pf.RateProfile(5, pf.expand_minimal_set([7, 21], 5))
pairs = pf.merge_rows(profile)
code = pf.PolarCode(profile, pf.row_merge_matrix(profile, pairs))
w, a, _ = pf.min_weight_enumeration(profile, code.T)
spectrum = {wt: ct for wt, ct in pf.brute_force_spectrum(profile, code.T).items()
            if 0 < wt <= w + 4}
print("%s  w_min=%d  A=%d  merges=%s" % (code, w, a, pairs))

points = [1.0, 2.0, 3.0, 4.0, 5.0]
records = monte_carlo(code, pf.DecoderConfig(L=8), points,
                      min_errors=100, max_frames=200_000, seed=3)

print("\n Eb/N0    frames     BLER       union bound")
for r in records:
    ub = union_bound(spectrum, code.K / code.N, r.ebn0_db)
    print(" %4.1f  %8d   %.3e   %.3e" % (r.ebn0_db, r.frames, r.bler, ub))

write_csv(records, "bler_sweep.csv")
print("\nwrote bler_sweep.csv")
