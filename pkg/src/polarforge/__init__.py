"""polarforge: design, weight-spectrum analysis and list decoding of
pre-transformed polar codes on the binary-input AWGN channel."""

from .polar_core import (
    RateProfile,
    expand_minimal_set,
    hamming_weight,
    is_decreasing,
    partial_order_leq,
    polar_transform,
    row_weight,
)
from .pretransform import (
    PreTransform,
    complexity_metrics,
    conv_matrix,
    conv_coeffs_from_octal,
    crc_matrix,
    encode,
    frozen_structure,
    generic_matrix,
    identity_matrix,
    row_merge_matrix,
    to_systematic,
)
from .weight_enum import (
    brute_force_spectrum,
    classify_cosets,
    error_coefficient,
    min_weight_enumeration,
)
from .code_design import (
    design_nondecreasing,
    design_rate_profile,
    ga_density_evolution,
    merge_rows,
    nr_profile,
    theoretical_dmin,
)
from .decoder import (
    DecoderConfig,
    PolarCode,
    build_pft,
    fsscl_decode,
    sc_decode,
    scl_decode,
    select_output,
)
from .sim import ChannelModel, monte_carlo, run_experiment, transmit, union_bound

__version__ = "0.1.0"
