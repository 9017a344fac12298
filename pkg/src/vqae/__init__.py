"""Variational quantum amplitude estimation on a dense statevector simulator."""

from .ansatz import AnsatzSpec, build_layered, build_minimal, evaluate, random_init
from .errors import VqaeError
from .estimator import (
    EstimateResult,
    QueryLedger,
    SampleRecord,
    VqaeConfig,
    mlae_search,
    predicted_costs,
    run_adaptive,
    run_mc,
    run_mlae,
    run_vqae,
)
from .grover import GroverOracle, apply_grover, build_oracle, closed_form_good_probability, infidelity, reflect
from .optimizer import OptimizerConfig, objective, optimize, parameter_shift, sampled_objective
from .problem import (
    ProblemSpec,
    exact_amplitude,
    exact_theta,
    loose_estimate,
    prepare_chi0,
    rescale,
    tabulate,
)
from .simulator import (
    Statevector,
    ancilla_one_probability,
    apply_cnot,
    apply_ry,
    basis_state,
    draw_binomial,
    inner_product,
    seeded_rng,
)

__version__ = "0.1.0"
