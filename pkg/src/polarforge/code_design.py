"""Rate-profile construction and greedy row-merge selection.

Profiles come from a Gaussian-approximation density evolution: the mean
of the channel LLR (2/sigma^2 for BPSK on AWGN) is pushed through the
polar recursion, with the check-node update approximated by the usual
piecewise fit of phi^-1(1 - (1 - phi(m))^2).  The K most reliable
synthetic channels form the information set.

Row merges are chosen greedily: each committed pair (i, f) repeats a
minimum-weight information row i in a later frozen position f, picked to
give the largest drop of the minimum-weight codeword count.  The search
first restricts targets to the frozen rows that strictly increase the
merged row weight, then widens to the weight-preserving ones once no
further improvement is found.
"""

import numpy as np
from scipy.special import erfc

from .polar_core import RateProfile, hamming_weight
from .weight_enum import classify_cosets, min_weight_enumeration, _coset_count

__all__ = [
    "ga_density_evolution",
    "design_rate_profile",
    "nr_profile",
    "merge_rows",
    "design_nondecreasing",
    "theoretical_dmin",
    "ChannelRanking",
    "DesignResult",
]


def _phi_inv_check(x):
    """Piecewise fit for the degraded mean after a check-node step."""
    out = np.empty_like(x)
    a = x > 12.0
    b = (x > 3.5) & ~a
    c = (x > 1.0) & ~a & ~b
    d = ~(a | b | c)
    out[a] = 0.9861 * x[a] - 2.3152
    out[b] = x[b] * (0.009005 * x[b] + 0.7694) - 0.9507
    out[c] = x[c] * (0.062883 * x[c] + 0.3678) - 0.1627
    out[d] = x[d] * (0.2202 * x[d] + 0.06448)
    return out


class ChannelRanking:
    """Synthetic channels ordered best to worst at a design SNR."""

    def __init__(self, n, design_snr_db, error_probs):
        self.n = n
        self.design_snr_db = design_snr_db
        self.error_probs = np.asarray(error_probs)
        # ascending error probability, ties broken toward the lower index
        self.order = np.lexsort((np.arange(1 << n), self.error_probs))

    def top(self, K):
        return sorted(int(i) for i in self.order[:K])


def ga_density_evolution(n, design_snr_db):
    """Per-channel error probabilities at Es/N0 = design_snr_db (dB)."""
    mean = np.array([4.0 * 10.0 ** (design_snr_db / 10.0)])
    for _ in range(n):
        nxt = np.empty(2 * mean.size)
        nxt[0::2] = _phi_inv_check(mean)
        nxt[1::2] = 2.0 * mean
        mean = nxt
    pe = 0.5 * erfc(np.sqrt(mean) / 2.0)
    return ChannelRanking(n, design_snr_db, pe)


def design_rate_profile(N, K, design_snr_db):
    n = int(N).bit_length() - 1
    if 1 << n != N:
        raise ValueError("N must be a power of two")
    if K > N:
        raise ValueError("K exceeds N")
    return RateProfile(n, ga_density_evolution(n, design_snr_db).top(K))


def nr_profile(N, K):
    """Rate profile from the 3GPP NR universal reliability sequence,
    truncated to block length N <= 1024."""
    from importlib import resources

    n = int(N).bit_length() - 1
    if 1 << n != N or N > 1024:
        raise ValueError("N must be a power of two, at most 1024")
    ref = resources.files("polarforge.data").joinpath("nr_reliability_1024.txt")
    seq = np.loadtxt(str(ref), dtype=np.int64)
    seq = seq[seq < N]
    return RateProfile(n, seq[-K:].tolist())


class DesignResult:
    def __init__(self, profile, merges, w_min, a_wmin, kappa=0):
        self.profile = profile
        self.merges = list(merges)
        self.w_min = w_min
        self.a_wmin = a_wmin
        self.kappa = kappa

    @property
    def eliminated(self):
        """True when no codeword of weight w_min survives the merges."""
        return self.a_wmin == 0

    def __repr__(self):
        return "DesignResult(K=%d, w_min=%d, A=%d, merges=%d, kappa=%d)" % (
            self.profile.K, self.w_min, self.a_wmin, len(self.merges), self.kappa)


def _enum_state(profile, cls):
    """Per-coset counts for the current merge set, plus each coset's last
    constrained index: a candidate target f only disturbs the cosets whose
    constraint window [i+1, f_last] contains f."""
    info_mask = 0
    for i in profile.info_set:
        info_mask |= 1 << i
    frozen = set(profile.frozen_set)
    f_last = {}
    for i in cls.i_wmin:
        last = i
        for f in range(i + 1, profile.N):
            if f in frozen and hamming_weight(~i & f & (profile.N - 1)) != 1:
                last = f
        f_last[i] = last
    return info_mask, f_last


def _col_masks(pairs):
    cols = {}
    for i, f in pairs:
        cols[f] = cols.get(f, 0) | (1 << i)
    return cols


def merge_rows(profile, mode="full"):
    """Greedy row-merge selection.

    mode="simplified" restricts each coset's candidate targets to its two
    smallest unused frozen indices, which is much faster and typically
    reaches the same count.  The search stops early with an empty-spectrum
    certificate once every w_min-weight codeword is eliminated; it never
    re-optimizes at higher weights.
    """
    if mode not in ("full", "simplified"):
        raise ValueError("mode must be 'full' or 'simplified'")
    cls = classify_cosets(profile)
    info_mask, f_last = _enum_state(profile, cls)
    counts = {
        i: _coset_count(profile.n, info_mask, {}, i) for i in cls.i_wmin
    }
    a_star = sum(counts.values())
    used, pairs = set(), []
    widened = False
    while a_star > 0:
        a_prev = a_star
        best = best_counts = None
        for i in cls.i_wmin_star:
            cand = cls.f_star[i] if not widened else cls.f_star[i] + cls.f_circ[i]
            cand = sorted(set(cand) - used)
            if mode == "simplified":
                cand = cand[:2]
            for f in cand:
                masks = _col_masks(pairs + [(i, f)])
                touched = [j for j in cls.i_wmin if j < f <= f_last[j]]
                trial = a_prev - sum(counts[j] for j in touched)
                fresh = {}
                for j in touched:
                    fresh[j] = _coset_count(profile.n, info_mask, masks, j)
                    trial += fresh[j]
                if trial < a_star:
                    a_star, best = trial, (i, f)
                    best_counts = dict(counts)
                    best_counts.update(fresh)
        if a_star < a_prev:
            used.add(best[1])
            pairs.append(best)
            counts = best_counts
        elif not widened:
            widened = True
        else:
            break
    return pairs


def design_nondecreasing(ranking, N, K, dmin_target):
    """Trade the worst minimum-weight generators for extra reliable
    channels until the row-merged code certifies d_min >= dmin_target.

    Certification is per weight level: a level w_min < dmin_target is
    passed once the merge search reports zero surviving codewords at that
    level.  Raises RuntimeError when the channel ranking is exhausted.
    """
    from .pretransform import row_merge_matrix

    if dmin_target & (dmin_target - 1):
        raise ValueError("dmin_target must be a power of two")
    n = int(N).bit_length() - 1
    info = set(ranking.top(K))
    kappa = 0
    while True:
        profile = RateProfile(n, info)
        pairs = merge_rows(profile)
        T = row_merge_matrix(profile, pairs)
        w_min, a_merged, _ = min_weight_enumeration(profile, T)
        if w_min >= dmin_target or (a_merged == 0 and 2 * w_min >= dmin_target):
            return DesignResult(profile, pairs, w_min, a_merged, kappa)
        if K + kappa >= N:
            raise RuntimeError("design failure: ranking exhausted")
        # swap the least reliable minimum-weight generator for the next
        # channel in the ranking; the profile stops being decreasing here
        info.discard(max(profile.min_weight_rows()))
        info.add(int(ranking.order[K + kappa]))
        kappa += 1


def theoretical_dmin(profile, T=None):
    """(d_min, exact?) - w_min(I) is the exact minimum distance for
    decreasing profiles under any upper-triangular pre-transform, and a
    lower bound otherwise."""
    exact = profile.is_decreasing()
    return profile.w_min, exact
