"""Exact enumeration of minimum-weight codewords of pre-transformed
polar codes.

The count is assembled coset by coset: every minimum-weight codeword has
a unique lowest message index i with w(i) = w_min-exponent, and within
that coset the codewords of weight 2^w(i) are exactly the messages

    supp(u) = {i} + J + M_i(J),   J subset of K_i,

where K_i = {j > i : w(~i & j) = 1} are the rows whose addition keeps the
weight at 2^w(i) and M_i(J) is the unique balancing set that repairs each
pairwise overlap.  A depth-first walk over J (in index order) checks the
dynamic-frozen constraints of the pre-transform as soon as they are
reachable and prunes dead branches; everything beyond the last frozen
constraint contributes an exact power-of-two factor.
"""

import numpy as np

from .polar_core import hamming_weight, row_weight, polar_transform
from .pretransform import encode, to_systematic

__all__ = [
    "merged_pair_weight",
    "core_rows",
    "mu",
    "update_message",
    "error_coefficient",
    "min_weight_enumeration",
    "classify_cosets",
    "brute_force_spectrum",
    "CosetClassification",
]


def merged_pair_weight(i, j):
    """Hamming weight of g_i xor g_j: 2^w(i) + 2^w(j) - 2^(w(i & j) + 1)."""
    if i == j:
        raise ValueError("rows must differ")
    return (
        row_weight(i)
        + row_weight(j)
        - (1 << (hamming_weight(i & j) + 1))
    )


def core_rows(i, N):
    """(K_i, K_i^c): indices j > i split by whether adding row j keeps the
    coset-leader weight, i.e. whether w(~i & j) = 1."""
    mask = N - 1
    ki, kic = [], []
    for j in range(i + 1, N):
        if hamming_weight(~i & j & mask) == 1:
            ki.append(j)
        else:
            kic.append(j)
    return ki, kic


def mu(i, j, k):
    """Index of the balancing row for the overlap of rows j and k inside
    coset i: (~i & (j | k)) | (j & k).  Requires ~i & j & k = 0; the result
    always exceeds max(j, k)."""
    if ~i & j & k:
        raise ValueError("rows %d and %d collide outside the leader %d" % (j, k, i))
    return (~i & (j | k)) | (j & k)


def update_message(i, j, u, mask):
    """Add core row j to the message support u (an int bitmask) and toggle
    the balancing row for every earlier support index it overlaps with."""
    rem = u & (((1 << j) - 1) ^ ((1 << (i + 1)) - 1))
    while rem:
        k = (rem & -rem).bit_length() - 1
        rem &= rem - 1
        if ~i & j & k & mask == 0:
            u ^= 1 << (((~i & (j | k)) | (j & k)) & mask)
    return u | (1 << j)


def _coset_count(n, info_mask, col_masks, i):
    """Number of weight-2^w(i) codewords whose lowest message index is i,
    under the dynamic-frozen constraints encoded in col_masks."""
    N = 1 << n
    mask = N - 1
    ibar = ~i
    ki_mask = 0
    for j in range(i + 1, N):
        if hamming_weight(ibar & j & mask) == 1:
            ki_mask |= 1 << j
    kic_mask = ((1 << N) - (1 << (i + 1))) & ~ki_mask
    # last frozen index carrying a hard constraint for this coset
    f_last = i
    frozen_kic = kic_mask & ~info_mask
    if frozen_kic:
        f_last = frozen_kic.bit_length() - 1
    # core rows beyond every constraint are unconstrained free choices
    free = bin((info_mask & ki_mask) & ~((1 << (f_last + 1)) - 1)).count("1")

    def walk(j, u):
        count = 0
        u = update_message(i, j, u, mask) if j != i else u | (1 << i)
        for k in range(j + 1, f_last + 1):
            b = 1 << k
            if info_mask & b:
                if ki_mask & b:
                    count += walk(k, u)
                # an information index outside K_i simply takes whatever
                # value the balancing set dictates; no constraint, no split
            else:
                d = bin(u & col_masks.get(k, 0)).count("1") & 1
                if kic_mask & b:
                    if d != (u >> k) & 1:
                        return count  # frozen constraint violated
                elif d:
                    u = update_message(i, k, u, mask)
        return count + 1

    return walk(i, 0) << free


def min_weight_enumeration(profile, T=None):
    """(w_min, A_wmin, per-coset counts) for the code (profile, T)."""
    from .pretransform import identity_matrix

    if T is None:
        T = identity_matrix(profile)
    if not (T.meta.get("systematic") or T.kind in ("identity", "row_merge", "crc")):
        T = to_systematic(T, profile)
    cols = T.column_support(profile)
    col_masks = {}
    for c, deps in cols.items():
        m = 0
        for h in deps:
            m |= 1 << h
        col_masks[c] = m
    info_mask = 0
    for i in profile.info_set:
        info_mask |= 1 << i
    per = {}
    for i in profile.min_weight_rows():
        per[i] = _coset_count(profile.n, info_mask, col_masks, i)
    return profile.w_min, sum(per.values()), per


def error_coefficient(profile, T=None):
    """Exact count of codewords at the minimum row weight w_min(I).

    A return of 0 certifies that the pre-transform eliminated every
    w_min-weight codeword (the true minimum distance then exceeds w_min;
    weights above w_min are not enumerated here).
    """
    return min_weight_enumeration(profile, T)[1]


class CosetClassification:
    """Per-coset split of the frozen rows by whether adding them to the
    coset leader increases its weight (F_i_star) or keeps it (F_i_circ),
    and the induced split of the minimum-weight information rows into
    pre-transformable (star) and non-pre-transformable (circ) ones."""

    def __init__(self, w_min, i_wmin, f_star, f_circ):
        self.w_min = w_min
        self.i_wmin = list(i_wmin)
        self.f_star = f_star
        self.f_circ = f_circ
        self.i_wmin_star = [i for i in i_wmin if f_star[i]]
        self.i_wmin_circ = [i for i in i_wmin if not f_star[i]]


def classify_cosets(profile):
    frozen = profile.frozen_set
    i_wmin = profile.min_weight_rows()
    f_star, f_circ = {}, {}
    for i in i_wmin:
        star = [f for f in frozen if f > i and hamming_weight(f) > hamming_weight(i & f) + 1]
        circ = [f for f in frozen if f > i and hamming_weight(f) == hamming_weight(i & f) + 1]
        f_star[i] = star
        f_circ[i] = circ
    return CosetClassification(profile.w_min, i_wmin, f_star, f_circ)


def brute_force_spectrum(profile, T=None, cap=24):
    """Exhaustive weight histogram over all 2^K codewords (test oracle)."""
    from .pretransform import identity_matrix

    if T is None:
        T = identity_matrix(profile)
    K = profile.K
    if K > cap:
        raise ValueError("K=%d exceeds brute-force cap %d" % (K, cap))
    hist = np.zeros(profile.N + 1, dtype=np.int64)
    if K == 0:
        hist[0] = 1
        return {0: 1}
    msgs = ((np.arange(1 << K)[:, None] >> np.arange(K)[None, :]) & 1).astype(np.uint8)
    for chunk in np.array_split(msgs, max(1, (1 << K) >> 12)):
        c = encode(chunk, profile, T)
        w = c.sum(axis=-1)
        hist += np.bincount(w, minlength=profile.N + 1)
    return {int(w): int(hist[w]) for w in np.nonzero(hist)[0]}
