"""Step through list decoding of a small code with repeated bits.

The C(16,7) code repeats information bits 5 and 6 into frozen slots 10
and 12, so the decoder has to reproduce those parities on every path.
"""

import numpy as np

import polarforge as pf
from polarforge.decoder import build_pft

profile = pf.RateProfile(4, [5, 6, 7, 11, 13, 14, 15])
code = pf.PolarCode(profile, pf.row_merge_matrix(profile, [(5, 10), (6, 12)]))
print(code)
print("dynamic frozen bits:", code.deps)


def show(node, depth=0):
    span = "u[%d:%d]" % (node.lo, node.lo + node.size)
    print("  " * depth + "%-9s %s" % (node.kind, span))
    if node.kind == "branch":
        show(node.left, depth + 1)
        show(node.right, depth + 1)


print("\npruned factor tree:")
show(build_pft(code, pf.DecoderConfig(L=4)))

rng = np.random.default_rng(7)
m = rng.integers(0, 2, code.K, dtype=np.uint8)
c = code.encode(m)
print("\nmessage  ", m)
print("codeword ", c)

# BPSK over AWGN at a noisy operating point.
sigma = 0.7
y = 1.0 - 2.0 * c.astype(float) + sigma * rng.standard_normal(code.N)
llr = 2.0 * y / sigma**2

u, pm = pf.fsscl_decode(llr, code, L=4)
print("\npath metrics:", np.round(pm[0], 3))
m_hat = pf.select_output(u, pm, code)
print("decoded  ", m_hat[0], "->", "ok" if np.array_equal(m_hat[0], m) else "error")

# The pruned-tree decoder and the plain list decoder agree bit for bit.
u2, pm2 = pf.scl_decode(llr, code, L=4)
assert np.array_equal(u, u2) and np.allclose(pm, pm2)
print("pruned-tree and leaf-by-leaf decoders agree")
