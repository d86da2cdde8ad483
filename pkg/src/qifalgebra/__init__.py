"""Compositional quantitative information flow.

Channels, the parallel / visible-choice / hidden-choice operators,
g-vulnerability and capacities, refinement, compositional leakage bounds,
and the Crowds and Dining Cryptographers case studies.
"""

from .algebra import (
    PermutationWitness,
    cascade,
    channels_equal,
    equal_up_to_permutation,
    hidden_choice,
    identity_channel,
    is_null,
    is_transparent,
    null_channel,
    parallel,
    parallel_post,
    transparent_channel,
    visible_choice,
    visible_post,
)
from .bounds import (
    BoundInterval,
    hidden_choice_bounds,
    monotonicity_counterexamples,
    operator_ordering_check,
    parallel_bounds,
    visible_choice_exact,
)
from .channel import (
    EPS_ROW,
    Channel,
    GainFunction,
    Pair,
    Prior,
    Tag,
    check_stochastic,
    joint_distribution,
    posteriors,
    validate_channel,
)
from .errors import *  # noqa: F401,F403
from .measures import (
    LeakageReport,
    additive_capacity,
    identity_gain,
    leakage,
    multiplicative_capacity,
    posterior_vulnerability,
    prior_vulnerability,
)
from .refinement import EPS_REF, RefinementVerdict, coriaceous_falsify, equivalent, refines

__version__ = "0.1.0"
