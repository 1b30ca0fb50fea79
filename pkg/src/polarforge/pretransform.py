"""Upper-triangular pre-transforms for polar codes.

A pre-transformed code maps a message m to v (v_I = m, v_F = 0), then
u = v T with T upper triangular and unit diagonal on the information
rows, and finally c = u G_N.  Every frozen position d whose column of T
meets an information row becomes a dynamic frozen bit

    u_d = xor_{h < d} v_h t_{h,d}

which is the whole decoding-side cost of the pre-transform.
"""

import numpy as np

from .polar_core import RateProfile, polar_transform

__all__ = [
    "PreTransform",
    "identity_matrix",
    "row_merge_matrix",
    "crc_matrix",
    "conv_matrix",
    "generic_matrix",
    "encode",
    "to_systematic",
    "frozen_structure",
    "complexity_metrics",
    "FrozenStructure",
]


class PreTransform:
    """Sparse upper-triangular binary matrix, stored row-wise.

    rows[h] is the sorted support of row h restricted to columns >= h.
    Rows of frozen indices are kept empty: v_F = 0 makes them irrelevant
    to the codebook.
    """

    def __init__(self, n, rows, kind="generic", meta=None):
        self.n = int(n)
        self.N = 1 << self.n
        self.kind = kind
        self.meta = dict(meta or {})
        self.rows = {}
        for h, supp in rows.items():
            h = int(h)
            supp = sorted(int(c) for c in set(supp))
            if supp and supp[0] < h:
                raise ValueError("row %d has support below the diagonal" % h)
            if supp:
                self.rows[h] = supp

    def is_identity(self):
        return all(supp == [h] for h, supp in self.rows.items())

    def column_support(self, profile):
        """Per-column dependency lists {d: [h in I, h < d, t_{h,d}=1]}."""
        cols = {}
        info = set(profile.info_set)
        for h, supp in self.rows.items():
            if h not in info:
                continue
            for c in supp:
                if c != h:
                    cols.setdefault(c, []).append(h)
        return {c: sorted(v) for c, v in cols.items()}

    def __repr__(self):
        nz = sum(len(s) for s in self.rows.values())
        return "PreTransform(N=%d, kind=%s, nnz=%d)" % (self.N, self.kind, nz)


class FrozenStructure:
    """Split of the frozen set into static and dynamic bits, with the
    dependency list of every dynamic bit."""

    def __init__(self, dynamic, static, deps):
        self.dynamic = sorted(dynamic)
        self.static = sorted(static)
        self.deps = {int(d): sorted(deps[d]) for d in deps}

    def __repr__(self):
        return "FrozenStructure(|D|=%d, static=%d)" % (
            len(self.dynamic),
            len(self.static),
        )


def identity_matrix(profile):
    return PreTransform(
        profile.n, {i: [i] for i in profile.info_set}, kind="identity"
    )


def row_merge_matrix(profile, pairs):
    """Repetition pre-transform: each pair (i, d) repeats information bit
    u_i in the frozen position u_d.  A frozen target may be used once."""
    rows = {i: [i] for i in profile.info_set}
    seen = set()
    for i, d in pairs:
        i, d = int(i), int(d)
        if not profile.is_info(i):
            raise ValueError("merge source %d is not an information index" % i)
        if profile.is_info(d):
            raise ValueError("merge target %d is not frozen" % d)
        if i >= d:
            raise ValueError("merge pair (%d, %d) is not upper triangular" % (i, d))
        if d in seen:
            raise ValueError("frozen target %d used twice" % d)
        seen.add(d)
        rows[i].append(d)
    return PreTransform(profile.n, rows, kind="row_merge", meta={"pairs": sorted(map(tuple, pairs))})


def crc_matrix(base_profile, generator_poly, q):
    """Systematic CRC pre-transform.

    The last q information positions of the (K+q)-bit base profile hold
    the check bits; each check position becomes a dynamic frozen bit equal
    to one CRC remainder bit over the K message positions.  The register
    runs MSB first over the message bits in ascending channel order, and
    check bit j carries the remainder coefficient of x^(q-1-j).

    Returns (profile, T): the effective K-bit profile (check positions
    reclassified as frozen) together with the pre-transform.
    """
    q = int(q)
    g = int(generator_poly)
    if q == 0:
        return base_profile, identity_matrix(base_profile)
    deg = g.bit_length() - 1
    if deg != q:
        raise ValueError("generator degree %d does not match q=%d" % (deg, q))
    if base_profile.K <= q:
        raise ValueError("profile too small for %d check bits" % q)
    data = base_profile.info_set[: base_profile.K - q]
    checks = base_profile.info_set[base_profile.K - q :]
    rows = {i: [i] for i in data}
    kmsg = len(data)
    for a, h in enumerate(data):
        # remainder of x^q * x^(kmsg-1-a) modulo g
        r = 1 << (q + kmsg - 1 - a)
        for sh in range(q + kmsg - 1 - a, q - 1, -1):
            if (r >> sh) & 1:
                r ^= g << (sh - q)
        for j in range(q):
            if (r >> (q - 1 - j)) & 1:
                rows[h].append(checks[j])
    profile = RateProfile(base_profile.n, data)
    T = PreTransform(base_profile.n, rows, kind="crc", meta={"poly": g, "q": q})
    return profile, T


def conv_matrix(profile, coeffs):
    """Convolutional (PAC-style) pre-transform.

    coeffs = (c_0, ..., c_m) with c_0 = 1 gives the Toeplitz band
    t_{h,h+e} = c_e.  Octal generator notation maps onto coeffs with the
    least significant octal bit as c_0.
    """
    coeffs = [int(c) & 1 for c in coeffs]
    if not coeffs or coeffs[0] != 1:
        raise ValueError("leading coefficient must be 1")
    N = profile.N
    rows = {}
    for h in profile.info_set:
        rows[h] = [h + e for e, c in enumerate(coeffs) if c and h + e < N]
    return PreTransform(profile.n, rows, kind="convolution", meta={"coeffs": coeffs})


def conv_coeffs_from_octal(octal_str):
    """Map an octal generator such as "1047" to the coefficient list
    (c_0 first).  The binary expansion of the octal value is reversed so
    that the generator's trailing bit becomes the memory-m tap."""
    val = int(str(octal_str), 8)
    bits = [int(b) for b in bin(val)[2:]]
    return bits[::-1]


def generic_matrix(profile, rows):
    """Pre-transform from explicit sparse row supports; information rows
    get their unit diagonal added if missing."""
    full = {i: {i} for i in profile.info_set}
    for h, supp in rows.items():
        h = int(h)
        full.setdefault(h, set()).update(int(c) for c in supp)
    return PreTransform(profile.n, full, kind="generic")


def encode(m, profile, T):
    """Encode a K-bit message: v_I = m, v_F = 0, u = v T, c = u G_N."""
    m = np.asarray(m, dtype=np.uint8) & 1
    if m.shape[-1] != profile.K:
        raise ValueError("message length %d, expected K=%d" % (m.shape[-1], profile.K))
    u = np.zeros(m.shape[:-1] + (profile.N,), dtype=np.uint8)
    for a, i in enumerate(profile.info_set):
        supp = T.rows.get(i, [i])
        for c in supp:
            u[..., c] ^= m[..., a]
    return polar_transform(u)


def to_systematic(T, profile):
    """Reduced-row-echelon form of the information rows.

    Pivots sit on the diagonal (unit upper-triangular), so the reduction
    clears every information column off its own row: u_I = v_I for the
    systematic form, and the row space (hence the codebook) is unchanged.
    """
    info = profile.info_set
    masks = {}
    for h in info:
        m = 0
        for c in T.rows.get(h, [h]):
            m |= 1 << c
        m |= 1 << h
        masks[h] = m
    # clear information columns; scanning pivots in descending order makes
    # a single pass sufficient for an upper-triangular matrix
    for p in reversed(info):
        pm = masks[p]
        for h in info:
            if h != p and (masks[h] >> p) & 1:
                masks[h] ^= pm
    rows = {}
    for h in info:
        m = masks[h]
        supp = []
        while m:
            low = m & -m
            supp.append(low.bit_length() - 1)
            m ^= low
        rows[h] = supp
    return PreTransform(T.n, rows, kind=T.kind, meta=dict(T.meta, systematic=True))


def frozen_structure(T, profile):
    """Dynamic/static split of the frozen set, with dependency lists taken
    from the systematic form so every list references information bits only."""
    Ts = T if T.meta.get("systematic") or T.kind in ("identity", "row_merge", "crc") else to_systematic(T, profile)
    cols = Ts.column_support(profile)
    dynamic = {d: cols[d] for d in cols if not profile.is_info(d)}
    static = [f for f in profile.frozen_set if f not in dynamic]
    return FrozenStructure(list(dynamic), static, dynamic)


def complexity_metrics(T, profile):
    """(number of dynamic frozen bits, XOR count to evaluate them all),
    measured on the pre-transform as constructed."""
    cols = T.column_support(profile)
    dyn = [d for d in cols if not profile.is_info(d)]
    n_xor = sum(len(cols[d]) - 1 for d in dyn)
    return len(dyn), n_xor
