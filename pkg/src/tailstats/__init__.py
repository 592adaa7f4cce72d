"""Monte Carlo and analytic references for heavy-tailed unitarily invariant random matrices."""
from .ensembles import EnsembleSpec, ComplexMatrix, trial_rng, sample
from .densities import AnalyticDensity, get_density
from .stats import SpectrumSample, DensityEstimate, SpacingSeries, eigenvalues

__version__ = "0.1.0"

__all__ = [
    "EnsembleSpec",
    "ComplexMatrix",
    "trial_rng",
    "sample",
    "AnalyticDensity",
    "get_density",
    "SpectrumSample",
    "DensityEstimate",
    "SpacingSeries",
    "eigenvalues",
]
