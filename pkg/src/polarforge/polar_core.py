"""Bit-index arithmetic, the polar transform and synthetic-channel ordering.

Indices follow the natural (Arikan) convention: the n-bit binary expansion
of a channel index i is read MSB first, and row i of the transform matrix
G_N = [[1,0],[1,1]]^(kron n) has support {j : j & i == j}, hence Hamming
weight 2^w(i).
"""

import numpy as np

__all__ = [
    "hamming_weight",
    "row_weight",
    "polar_transform",
    "partial_order_leq",
    "expand_minimal_set",
    "is_decreasing",
    "RateProfile",
]


def hamming_weight(i):
    """Number of ones in the binary expansion of a nonnegative index."""
    return int(i).bit_count()


def row_weight(i):
    """Hamming weight of row g_i of G_N, which is 2^w(i)."""
    return 1 << hamming_weight(i)


def polar_transform(u):
    """Multiply a binary vector by G_N in place of an explicit matrix.

    The n-stage butterfly is self-inverse over GF(2), so the same call
    maps u -> u G_N and back.  Accepts a 1-D array or any array whose
    last axis has power-of-two length; the transform acts on that axis.
    """
    u = np.asarray(u)
    N = u.shape[-1]
    if N & (N - 1):
        raise ValueError("length must be a power of two, got %d" % N)
    c = (u.copy() & 1).astype(np.uint8)
    h = 1
    while h < N:
        for lo in range(0, N, 2 * h):
            c[..., lo : lo + h] ^= c[..., lo + h : lo + 2 * h]
        h *= 2
    return c


def partial_order_leq(i, j, n):
    """Synthetic-channel partial order: True iff channel j is universally
    at least as reliable as channel i.

    Decision rule: for every bit position l, the count of ones of j at
    positions >= l must be at least that of i.  This is equivalent to the
    transitive closure of the two generating rules (swapping a 10 bit
    pattern to 01 toward the MSB, and turning a 0 into a 1).
    """
    i, j = int(i), int(j)
    ci = cj = 0
    for l in range(n - 1, -1, -1):
        ci += (i >> l) & 1
        cj += (j >> l) & 1
        if cj < ci:
            return False
    return True


def expand_minimal_set(i_min, n):
    """Upward closure of a minimal information set under the partial order.

    Returns the sorted information set {j | exists i in i_min with i <= j}.
    An RM(r, n) profile is the closure of the single index 2^(n-r) - 1.
    """
    N = 1 << n
    out = set()
    for i in i_min:
        if not 0 <= i < N:
            raise ValueError("index %d out of range for n=%d" % (i, n))
        out.update(j for j in range(N) if partial_order_leq(i, j, n))
    return sorted(out)


def is_decreasing(info_set, n):
    """True iff the information set is closed upward under the partial order."""
    s = set(info_set)
    N = 1 << n
    for i in s:
        for j in range(i + 1, N):
            if j not in s and partial_order_leq(i, j, n):
                return False
    return True


class RateProfile:
    """An (N, K) rate profile: the split of Z_N into information and
    frozen synthetic channels."""

    def __init__(self, n, info_set):
        self.n = int(n)
        self.N = 1 << self.n
        info = sorted(int(i) for i in set(info_set))
        if info and not (0 <= info[0] and info[-1] < self.N):
            raise ValueError("information indices out of range")
        self.info_set = info
        self.K = len(info)
        self._info = frozenset(info)
        self.frozen_set = [f for f in range(self.N) if f not in self._info]

    def is_info(self, i):
        return i in self._info

    def is_decreasing(self):
        return is_decreasing(self.info_set, self.n)

    @property
    def w_min_exp(self):
        """min_{i in I} w(i); the minimum codeword weight of the plain
        polar code is 2^w_min_exp when the profile is decreasing."""
        return min(hamming_weight(i) for i in self.info_set)

    @property
    def w_min(self):
        return 1 << self.w_min_exp

    def min_weight_rows(self):
        """Information indices whose generator rows have weight w_min."""
        e = self.w_min_exp
        return [i for i in self.info_set if hamming_weight(i) == e]

    def __repr__(self):
        return "RateProfile(N=%d, K=%d)" % (self.N, self.K)

    def __eq__(self, other):
        return (
            isinstance(other, RateProfile)
            and self.n == other.n
            and self.info_set == other.info_set
        )

    def __hash__(self):
        return hash((self.n, tuple(self.info_set)))
