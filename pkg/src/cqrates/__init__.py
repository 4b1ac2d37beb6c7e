"""Finite-blocklength achievable rates for pure-state cq channels and DMCs."""

from .bounds import (
    BoundCurve,
    BoundPoint,
    ModelSpec,
    bpsk_simplified_bound,
    cor1_bpsk_bound,
    equierror_capacity,
    equierror_capacity_weak,
    equierror_channel,
    sweep,
    thm1_bound,
    thm2_bound,
    thm3_bound,
)
from .capacities import (
    DiscreteChannel,
    c1_binary,
    gaussian_holevo,
    holevo_binary,
    holevo_general,
    max_mutual_information,
    mutual_information,
    pie,
)
from .dmcsim import (
    InnerCode,
    Superchannel,
    brute_force_cn,
    lemma2_check,
    random_inner_code,
    superchannel_exact,
    superchannel_mc,
)
from .errors import (
    ConvergenceError,
    CqratesError,
    DomainError,
    FeasibilityError,
    NumericalError,
    RegimeError,
)
from .exponents import (
    ExponentPoint,
    awgn_vc_ratio_lowsnr,
    classical_dispersion,
    classical_e0,
    classical_error_exponent,
    quadratic_exponent,
    quantum_dispersion,
    quantum_e0,
    quantum_error_exponent,
)
from .optical import (
    CoherentConstellation,
    Lemma1Result,
    bpsk_ensemble,
    c1_bpsk,
    c_bpsk,
    coherent_overlap,
    lemma1_optimal_binary,
)
from .spectral import (
    GramEnsemble,
    Spectrum,
    binary_entropy,
    binary_spectrum,
    ensemble_spectrum,
    hermitian_eigenvalues,
    von_neumann_entropy,
)

__version__ = "0.1.0"
