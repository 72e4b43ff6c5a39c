"""Variance- and entropy-based measures of total, aleatoric and epistemic
uncertainty over second-order distributions on the probability simplex."""

__version__ = "0.1.0"

from .entropy import EntropyTriple, entropy_triple, entropy_triples, kl_divergence, shannon_entropy
from .errors import (
    CannotSpreadError,
    ConstrainedMaximumError,
    DimensionError,
    DivergenceError,
    InfeasibleShiftError,
    SchemaError,
    SimplexError,
    VarUQError,
)
from .kernels import BACKEND, available_backends
from .simplex import (
    AtomMixture,
    Categorical,
    DirichletQ,
    WeightVector,
    dirac,
    dirac_mixture,
    from_ensemble,
    mean,
)
from .transforms import SpreadSpec, center_shift, location_shift, mean_preserving_spread
from .variance import (
    AggregateTriple,
    LabelwiseTriple,
    aggregate,
    beta_maximizer,
    constrained_maximizer,
    labelwise,
    max_total_variance,
)
