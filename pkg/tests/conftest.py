"""Shared fixtures: reference codes used across the test suite."""

import numpy as np
import pytest

import polarforge as pf

# Repetition (row-merge) assignments for the three reference designs.
MERGES_128_60 = [
    (29, 34), (30, 35), (43, 70), (45, 50), (46, 73), (51, 68),
    (53, 74), (54, 69), (57, 66), (58, 67), (60, 65), (75, 100),
    (78, 81), (83, 104), (85, 98), (86, 112), (92, 97),
]
MERGES_256_75 = [
    (115, 133), (117, 134), (118, 129), (121, 131), (122, 135),
    (124, 130), (157, 162), (158, 163), (167, 201), (171, 198),
    (173, 178), (174, 208), (179, 197), (181, 194), (182, 202),
    (185, 204), (186, 195), (188, 193), (199, 232), (206, 209),
    (211, 240), (213, 226), (217, 228), (218, 225),
]
MERGES_1024_512 = [
    (720, 769), (720, 774), (736, 770), (736, 777), (808, 833),
    (808, 912), (816, 960), (834, 904), (836, 928), (840, 900),
    (848, 898), (864, 897),
]

CRC11_POLY = 0xE21  # x^11 + x^10 + x^9 + x^5 + 1, as used by 5G NR


@pytest.fixture(scope="session")
def profile_128_60():
    return pf.RateProfile(7, pf.expand_minimal_set([29, 43, 71], 7))


@pytest.fixture(scope="session")
def profile_256_75():
    return pf.RateProfile(8, pf.expand_minimal_set([63, 115, 157, 167], 8))


@pytest.fixture(scope="session")
def merged_code_128_60(profile_128_60):
    T = pf.row_merge_matrix(profile_128_60, MERGES_128_60)
    return pf.PolarCode(profile_128_60, T)


@pytest.fixture(scope="session")
def crc_code_128_60():
    base = pf.nr_profile(128, 60 + 11)
    eff, T = pf.crc_matrix(base, CRC11_POLY, 11)
    return pf.PolarCode(eff, T)


@pytest.fixture(scope="session")
def toy_code():
    """C(16,7) with two repeated bits; small enough for exhaustive checks."""
    prof = pf.RateProfile(4, [5, 6, 7, 11, 13, 14, 15])
    T = pf.row_merge_matrix(prof, [(5, 10), (6, 12)])
    return pf.PolarCode(prof, T)


def random_decreasing_profile(rng, n, k_max=16):
    """Upward-closed rate profile with 1 <= K <= k_max, by rejection."""
    N = 1 << n
    while True:
        seeds = rng.choice(N, size=rng.integers(1, 4), replace=False)
        info = pf.expand_minimal_set([int(s) for s in seeds], n)
        if 1 <= len(info) <= k_max:
            return pf.RateProfile(n, info)


def random_upper_triangular(rng, profile, density=0.25):
    """Random sparse pre-transform with unit diagonal on the info rows."""
    rows = {}
    for i in profile.info_set:
        later = [d for d in profile.frozen_set if d > i]
        picked = [d for d in later if rng.random() < density]
        rows[i] = {i, *picked}
    return pf.generic_matrix(profile, rows)


def random_row_merges(rng, profile):
    """Random valid repetition set: distinct frozen targets, i < d."""
    pairs = []
    used = set()
    for i in profile.info_set:
        later = [d for d in profile.frozen_set if d > i and d not in used]
        if later and rng.random() < 0.6:
            d = int(rng.choice(later))
            pairs.append((i, d))
            used.add(d)
    return pairs
