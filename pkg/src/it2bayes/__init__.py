"""Interval type-2 fuzzy Bayes' theorem from expert interval estimates."""

from .bayes import (
    AlphaCutFOU,
    BayesInputs,
    PosteriorResult,
    SampledFOU,
    adjust_denominator,
    alpha_cuts,
    crisp_cuts,
    fou_from_cuts,
    posterior_fou,
    product_fou,
)
from .centroid import CentroidResult, centroid_of, ekm_centroid
from .errors import ComputationError, DegenerateInputsError, InputError, IT2Error
from .intervals import Interval, IntervalSet, iv_div, iv_mul
from .synthesis import (
    DroopHeights,
    FOUCategory,
    IT2MembershipFunction,
    OverlapResult,
    ReducedSets,
    SynthesisConfig,
    TrapezoidSpec,
    axis_intercept_fractions,
    classify_fou,
    compute_overlap,
    droop_params,
    eval_trapezoid,
    expand_single_sme,
    reduce_intervals,
    select_r,
    shoulder_interior_params,
    synthesize,
    synthesize_signed,
)
from .wpm import wpm

__version__ = "0.1.0"
