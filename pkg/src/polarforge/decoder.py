"""Successive-cancellation list decoding of pre-transformed polar codes.

All decoders run batched: LLR inputs of shape (B, N) are decoded as B
independent frames, each carrying its own L paths.  Dynamic frozen bits
are evaluated per path from the decoded u-history, which makes repeated
information bits (row merges), CRC checks and convolutional parity all
look the same to the decoder.

The fast decoder prunes the factor tree into Rate-0 / Rate-1 / repetition
/ single-parity-check nodes and processes each node with the standard
split-count bounds (min(L-1, Nv) for Rate-1, min(L, Nv) for SPC).  Those
shortcuts are exactly list-decoding-equivalent under the min-sum
f-function, where the node path-metric penalty sum(|alpha|) over
mismatches equals the accumulated leaf penalties.  Under the exact
(boxplus) f-function no such node-level identity holds, so special nodes
then replay the leaf schedule instead; outputs stay bit-exact with plain
list decoding for both variants.
"""

import numpy as np

from .polar_core import RateProfile, polar_transform
from .pretransform import frozen_structure, to_systematic, identity_matrix, encode

__all__ = [
    "DecoderConfig",
    "PolarCode",
    "node_bit_index",
    "build_pft",
    "f_func",
    "g_func",
    "h_combine",
    "sc_decode",
    "scl_decode",
    "fsscl_decode",
    "select_output",
]

_INF = np.inf


def f_func(a, b, variant="minsum"):
    """Check-node LLR update."""
    if variant == "minsum":
        return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    # exact boxplus via the stable log-domain form
    return np.logaddexp(0.0, a + b) - np.logaddexp(a, b)


def g_func(a, b, beta):
    """Variable-node LLR update with the left partial sum folded in."""
    return b + (1.0 - 2.0 * beta) * a


def h_combine(beta_left, beta_right):
    """Stitch child partial sums: (beta_l xor beta_r, beta_r)."""
    return np.concatenate([beta_left ^ beta_right, beta_right], axis=-1)


def node_bit_index(v, s, i_v, n):
    """Global index of leaf i_v inside node v of layer s.

    Layer s holds nodes v in [2^(n-s) - 1, 2^(n-s+1) - 1); the root is
    node 0 at s = n and leaves are nodes N-1+i at s = 0.
    """
    lo = (1 << (n - s)) - 1
    hi = (1 << (n - s + 1)) - 1
    if not lo <= v < hi:
        raise ValueError("node %d not in layer %d" % (v, s))
    return (v << s) + (1 << s) - (1 << n) + i_v


class DecoderConfig:
    def __init__(self, L=1, variant="minsum", use_special_nodes=True,
                 max_node_size=None):
        if L < 1:
            raise ValueError("list size must be positive")
        if variant not in ("minsum", "boxplus"):
            raise ValueError("unknown f-function variant %r" % variant)
        self.L = int(L)
        self.variant = variant
        self.use_special_nodes = bool(use_special_nodes)
        self.max_node_size = max_node_size

    def snapshot(self):
        return {
            "L": self.L,
            "variant": self.variant,
            "use_special_nodes": self.use_special_nodes,
            "max_node_size": self.max_node_size,
        }


class PolarCode:
    """A rate profile plus (systematized) pre-transform, ready to encode
    and decode.  Message bits ride on u_I directly."""

    def __init__(self, profile, T=None):
        self.profile = profile
        raw = T if T is not None else identity_matrix(profile)
        self.T = raw if raw.meta.get("systematic") or raw.kind in (
            "identity", "row_merge", "crc") else to_systematic(raw, profile)
        self.frozen = frozen_structure(self.T, profile)
        self.N = profile.N
        self.K = profile.K
        self.n = profile.n
        # dense dependency table: deps[f] = sorted info indices feeding u_f
        self.deps = {f: self.frozen.deps.get(f, []) for f in profile.frozen_set}
        self._info_idx = np.array(profile.info_set, dtype=np.int64)

    def encode(self, m):
        return encode(m, self.profile, self.T)

    def message_from_u(self, u):
        return u[..., self._info_idx]

    def __repr__(self):
        return "PolarCode(N=%d, K=%d, kind=%s)" % (self.N, self.K, self.T.kind)


class _Node:
    __slots__ = ("lo", "size", "kind", "left", "right", "frozen_pos", "deps")

    def __init__(self, lo, size, kind, frozen_pos=(), deps=()):
        self.lo = lo
        self.size = size
        self.kind = kind
        self.left = None
        self.right = None
        self.frozen_pos = list(frozen_pos)
        self.deps = list(deps)


def build_pft(code, config=None):
    """Prune the factor tree into typed constituent nodes.

    Classification looks only at the frozen/information pattern; dynamic
    frozen bits count as frozen.  Nodes record, for each contained frozen
    position, the dependency list of its dynamic value.
    """
    config = config or DecoderConfig()
    info = set(code.profile.info_set)
    cap = config.max_node_size or code.N

    def build(lo, size):
        pattern = [(lo + t) in info for t in range(size)]
        k = sum(pattern)
        frozen_pos = [t for t in range(size) if not pattern[t]]
        deps = [code.deps.get(lo + t, []) for t in frozen_pos]
        if config.use_special_nodes and 2 <= size <= cap:
            if k == 0:
                return _Node(lo, size, "rate0", frozen_pos, deps)
            if k == size:
                return _Node(lo, size, "rate1")
            if k == 1 and pattern[-1]:
                return _Node(lo, size, "rep", frozen_pos, deps)
            if k == size - 1 and not pattern[0] and size >= 4:
                return _Node(lo, size, "spc", frozen_pos, deps)
        if size == 1:
            kind = "info_leaf" if pattern[0] else "frozen_leaf"
            return _Node(lo, size, kind, frozen_pos, deps)
        node = _Node(lo, size, "branch")
        node.left = build(lo, size // 2)
        node.right = build(lo + size // 2, size // 2)
        return node

    return build(0, code.N)


class _ListState:
    """Shared per-batch decoding state.  Arrays live on the stack while a
    subtree is being decoded so that path reordering can be applied to
    every pending intermediate in place."""

    def __init__(self, B, L, N):
        self.B = B
        self.L = L
        self.pm = np.zeros((B, L))
        self.pm[:, 1:] = _INF
        self.u = np.zeros((B, L, N), dtype=np.uint8)
        self.stack = []
        self._rows = np.arange(B)[:, None]

    def permute(self, origins):
        r = self._rows
        self.u[...] = self.u[r, origins]
        for arr in self.stack:
            arr[...] = arr[r, origins]

    def prune(self, pm_cand, payload):
        """Keep the best L of the 2L candidates per frame.

        pm_cand: (B, 2L) with candidate c < L meaning path c unchanged and
        c >= L meaning path c - L takes the alternative.  Stable sort makes
        ties deterministic (lower path first, unchanged before flipped).
        Returns (origins, flip) and applies the reordering.
        """
        L = self.L
        order = np.argsort(pm_cand, axis=-1, kind="stable")[:, :L]
        origins = order % L
        flip = (order >= L)
        self.pm = np.take_along_axis(pm_cand, order, axis=-1)
        self.permute(origins)
        return origins, flip


def _dyn_value(state, deps):
    """Per-path dynamic frozen value: xor of already-decoded u bits."""
    if not deps:
        return np.zeros((state.B, state.L), dtype=np.uint8)
    return state.u[..., deps].sum(axis=-1).astype(np.uint8) & 1


def _leaf_frozen(state, alpha, lo, deps):
    b = _dyn_value(state, deps)
    a = alpha[..., 0]
    state.pm = state.pm + np.where((1.0 - 2.0 * b) * a < 0, np.abs(a), 0.0)
    state.u[..., lo] = b
    return b[..., None]


def _leaf_info(state, alpha, lo):
    a = alpha[..., 0]
    hd = (a < 0).astype(np.uint8)
    pm_cand = np.concatenate([state.pm, state.pm + np.abs(a)], axis=-1)
    origins, flip = state.prune(pm_cand, None)
    bits = np.take_along_axis(hd, origins, axis=-1) ^ flip
    bits = bits.astype(np.uint8)
    state.u[..., lo] = bits
    return bits[..., None]


def _delta_chi(state, node):
    """Dynamic frozen vector of the node and its polar image."""
    B, L = state.B, state.L
    delta = np.zeros((B, L, node.size), dtype=np.uint8)
    for t, deps in zip(node.frozen_pos, node.deps):
        if deps:
            delta[..., t] = _dyn_value(state, deps)
    return delta, polar_transform(delta)


def _node_rate0(state, alpha, node):
    delta, chi = _delta_chi(state, node)
    mismatch = (alpha < 0).astype(np.uint8) != chi
    state.pm = state.pm + np.where(mismatch, np.abs(alpha), 0.0).sum(axis=-1)
    state.u[..., node.lo : node.lo + node.size] = delta
    return chi


def _node_rep(state, alpha, node):
    delta, chi = _delta_chi(state, node)
    absa = np.abs(alpha)
    p0 = np.where((alpha < 0).astype(np.uint8) != chi, absa, 0.0).sum(axis=-1)
    p1 = absa.sum(axis=-1) - p0
    pm_cand = np.concatenate([state.pm + p0, state.pm + p1], axis=-1)
    origins, flip = state.prune(pm_cand, None)
    r = state._rows
    delta = delta[r, origins]
    chi = chi[r, origins] ^ flip[..., None]
    span = slice(node.lo, node.lo + node.size)
    state.u[..., span] = delta
    state.u[..., node.lo + node.size - 1] ^= flip.astype(np.uint8)
    return chi


def _node_rate1(state, alpha, node):
    beta = (alpha < 0).astype(np.uint8)
    absa = np.abs(alpha)
    order = np.argsort(absa, axis=-1, kind="stable").astype(np.int64)
    r = state._rows
    lcols = np.arange(state.L)[None, :]
    splits = min(state.L - 1, node.size)
    for t in range(splits):
        pen = np.take_along_axis(absa, order[..., t : t + 1], axis=-1)[..., 0]
        pm_cand = np.concatenate([state.pm, state.pm + pen], axis=-1)
        state.stack += [beta, order, absa]
        _, flip = state.prune(pm_cand, None)
        del state.stack[-3:]
        # all three arrays were reordered in place; flip the t-th least
        # reliable bit of every path that took the alternative
        pos = order[..., t]
        beta[r, lcols, pos] ^= flip
    state.u[..., node.lo : node.lo + node.size] = polar_transform(beta)
    return beta


def _node_spc(state, alpha, node):
    delta0 = _dyn_value(state, node.deps[0])
    beta = (alpha < 0).astype(np.uint8)
    absa = np.abs(alpha)
    order = np.argsort(absa, axis=-1, kind="stable").astype(np.int64)
    r = state._rows
    lcols = np.arange(state.L)[None, :]
    m0 = order[..., 0]
    amin = np.take_along_axis(absa, order[..., :1], axis=-1)[..., 0]
    gamma = (beta.sum(axis=-1).astype(np.uint8) & 1) ^ delta0
    # force the parity constraint by flipping the least reliable position
    state.pm = state.pm + np.where(gamma == 1, amin, 0.0)
    beta[r, lcols, m0] ^= gamma
    sigma = gamma.copy()  # current flip state of the least reliable bit
    splits = min(state.L, node.size) - 1
    for t in range(1, splits + 1):
        pen = np.take_along_axis(absa, order[..., t : t + 1], axis=-1)[..., 0]
        # flipping any other bit toggles the least reliable one to keep parity
        pen = pen + (1.0 - 2.0 * sigma) * amin
        pm_cand = np.concatenate([state.pm, state.pm + pen], axis=-1)
        state.stack += [beta, order, absa, sigma[..., None], amin[..., None]]
        _, flip = state.prune(pm_cand, None)
        sigma = state.stack[-2][..., 0]
        amin = state.stack[-1][..., 0]
        del state.stack[-5:]
        m0 = order[..., 0]
        pos = order[..., t]
        beta[r, lcols, pos] ^= flip
        beta[r, lcols, m0] ^= flip.astype(np.uint8)
        sigma ^= flip
    state.u[..., node.lo : node.lo + node.size] = polar_transform(beta)
    return beta


def _decode_tree(state, node, alpha, variant, fast):
    if fast and node.kind == "rate0":
        return _node_rate0(state, alpha, node)
    if fast and node.kind == "rate1":
        return _node_rate1(state, alpha, node)
    if fast and node.kind == "rep":
        return _node_rep(state, alpha, node)
    if fast and node.kind == "spc":
        return _node_spc(state, alpha, node)
    if node.size == 1:
        if node.kind == "info_leaf":
            return _leaf_info(state, alpha, node.lo)
        return _leaf_frozen(state, alpha, node.lo, node.deps[0])
    if node.left is None:
        # typed node decoded leaf-by-leaf (exact f-function): expand on the fly
        left = _expand(node, 0)
        right = _expand(node, 1)
    else:
        left, right = node.left, node.right
    half = node.size // 2
    state.stack.append(alpha)
    al = f_func(alpha[..., :half], alpha[..., half:], variant)
    bl = _decode_tree(state, left, al, variant, fast)
    state.stack.append(bl)
    ar = g_func(alpha[..., :half], alpha[..., half:], bl)
    br = _decode_tree(state, right, ar, variant, fast)
    state.stack.pop()
    state.stack.pop()
    return h_combine(bl, br)


def _expand(node, side):
    """Child of a typed node, re-derived from its position pattern (used
    when a typed node must be decoded leaf-by-leaf)."""
    half = node.size // 2
    lo = node.lo + side * half
    fp = [t - side * half for t in node.frozen_pos if side * half <= t < (side + 1) * half]
    dp = [d for t, d in zip(node.frozen_pos, node.deps) if side * half <= t < (side + 1) * half]
    if half == 1:
        kind = "frozen_leaf" if fp else "info_leaf"
        return _Node(lo, 1, kind, fp, dp)
    child = _Node(lo, half, "branch", fp, dp)
    child.left = None
    return child


def _decode_batch(llr, code, config, tree=None):
    llr = np.atleast_2d(np.asarray(llr, dtype=np.float64))
    B, N = llr.shape
    if N != code.N:
        raise ValueError("LLR length %d, expected %d" % (N, code.N))
    L = config.L
    tree = tree if tree is not None else build_pft(code, config)
    state = _ListState(B, L, N)
    alpha = np.repeat(llr[:, None, :], L, axis=1)
    fast = config.use_special_nodes and config.variant == "minsum"
    _decode_tree(state, tree, alpha, config.variant, fast)
    order = np.argsort(state.pm, axis=-1, kind="stable")
    pm = np.take_along_axis(state.pm, order, axis=-1)
    u = state.u[state._rows, order]
    return u, pm


def sc_decode(llr, code, variant="minsum"):
    """Plain successive cancellation; returns the decoded u vector(s)."""
    u, _ = _decode_batch(llr, code, DecoderConfig(1, variant, use_special_nodes=False))
    return u[..., 0, :] if np.asarray(llr).ndim > 1 else u[0, 0]


def scl_decode(llr, code, L, variant="minsum"):
    """List decoding, splitting leaf by leaf.  Returns (u, pm) with paths
    sorted by ascending path metric; u has shape (B, L, N)."""
    cfg = DecoderConfig(L, variant, use_special_nodes=False)
    return _decode_batch(llr, code, cfg)


def fsscl_decode(llr, code, L, variant="minsum", config=None, tree=None):
    """Fast list decoding over the pruned factor tree.  Output contract
    identical to scl_decode."""
    cfg = config or DecoderConfig(L, variant, use_special_nodes=True)
    return _decode_batch(llr, code, cfg, tree=tree)


def select_output(u, pm, code):
    """Message of the most plausible path (ties already resolved by the
    stable path ordering)."""
    return code.message_from_u(u[..., 0, :])
