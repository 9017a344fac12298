import numpy as np
import pytest

from vqae.ansatz import build_layered, build_minimal, evaluate, random_init
from vqae.errors import IndexOutOfRange, InvalidTrials
from vqae.estimator import QueryLedger
from vqae.grover import apply_grover, build_oracle
from vqae.optimizer import (
    SHIFT_TO_DERIVATIVE,
    OptimizerConfig,
    initial_state,
    objective,
    optimize,
    parameter_shift,
    sampled_objective,
)
from vqae.problem import ProblemSpec
from vqae.simulator import seeded_rng


@pytest.fixture
def oracle():
    return build_oracle(ProblemSpec(kind="gaussian", n=4))


def test_objective_is_overlap_with_target(oracle):
    spec = build_layered(5, 1)
    params = random_init(spec, seeded_rng(0))
    target = apply_grover(oracle, oracle.chi0, 2)
    var = evaluate(spec, params, initial_state(spec, oracle))
    expect = float(np.real(np.vdot(var.amplitudes, target.amplitudes)))
    assert objective(spec, params, oracle, oracle.chi0, 2) == pytest.approx(expect)


def test_objective_perfect_for_exact_solution(oracle):
    # the minimal ansatz at zero parameters is the identity, so with
    # phi_i = chi0 and k = 0 the overlap is exactly 1
    spec = build_minimal(5)
    assert objective(spec, np.zeros(6), oracle, oracle.chi0, 0) == pytest.approx(1.0)


def test_shift_difference_matches_derivative(oracle):
    """The two-point shift equals 4 sin(pi/8) times the true derivative."""
    spec = build_layered(5, 2)
    rng = seeded_rng(5)
    params = random_init(spec, rng)
    eps = 1e-6
    for j in (0, 7, spec.n_params - 1):
        up = params.copy()
        up[j] += eps
        dn = params.copy()
        dn[j] -= eps
        deriv = (
            objective(spec, up, oracle, oracle.chi0, 1)
            - objective(spec, dn, oracle, oracle.chi0, 1)
        ) / (2 * eps)
        shift = parameter_shift(spec, params, j, oracle, oracle.chi0, 1)
        assert shift == pytest.approx(SHIFT_TO_DERIVATIVE * deriv, abs=1e-8)


def test_parameter_shift_index_checked(oracle):
    spec = build_minimal(5)
    with pytest.raises(IndexOutOfRange):
        parameter_shift(spec, np.zeros(6), 6, oracle, oracle.chi0, 1)


def test_sampled_objective_statistics():
    rng = seeded_rng(6)
    draws = [sampled_objective(0.6, 400, rng) for _ in range(200)]
    assert np.mean(draws) == pytest.approx(0.6, abs=0.01)
    assert np.all(np.abs(draws) <= 1.0)
    with pytest.raises(InvalidTrials):
        sampled_objective(0.5, 0, rng)


def test_optimizer_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(learning_rate=0.0)
    with pytest.raises(ValueError):
        OptimizerConfig(sweeps=0)
    with pytest.raises(InvalidTrials):
        OptimizerConfig(trials=-1)


def test_exact_optimization_improves_overlap(oracle):
    spec = build_layered(5, 3)
    params0 = random_init(spec, seeded_rng(7))
    start = objective(spec, params0, oracle, oracle.chi0, 1)
    config = OptimizerConfig(learning_rate=0.1, sweeps=300, trials=0)
    best, value = optimize(spec, params0, oracle, oracle.chi0, 1, config, seeded_rng(8))
    assert value > start
    assert value > 0.99
    assert value == pytest.approx(objective(spec, best, oracle, oracle.chi0, 1))


def test_sampled_optimization_near_identity_target(oracle):
    # commensurate-style task: target almost equals the initial state, the
    # minimal ansatz only needs a small correction
    spec = build_minimal(5)
    config = OptimizerConfig(learning_rate=1e-3, sweeps=100, trials=100)
    best, value = optimize(
        spec, np.zeros(6), oracle, oracle.chi0, 0, config, seeded_rng(9)
    )
    assert value == pytest.approx(1.0, abs=1e-6)


def test_optimize_returns_best_seen_not_last(oracle):
    # with an absurdly large learning rate the final iterate is worse than
    # the best visited one; optimize must report the best
    spec = build_layered(5, 2)
    params0 = random_init(spec, seeded_rng(10))
    config = OptimizerConfig(learning_rate=2.0, sweeps=50, trials=0)
    best, value = optimize(spec, params0, oracle, oracle.chi0, 1, config, seeded_rng(11))
    assert value >= objective(spec, params0, oracle, oracle.chi0, 1) - 1e-12
    assert value == pytest.approx(objective(spec, best, oracle, oracle.chi0, 1))


def test_gradient_circuit_accounting(oracle):
    spec = build_minimal(5)
    config = OptimizerConfig(learning_rate=1e-3, sweeps=40, trials=25)
    for k in (1, 3):
        ledger = QueryLedger()
        optimize(spec, np.zeros(6), oracle, oracle.chi0, k, config, seeded_rng(12),
                 ledger=ledger)
        assert ledger.variational == 2 * 25 * 40 * 6 * (2 * k + 2)


def test_exact_mode_charges_nothing(oracle):
    spec = build_minimal(5)
    config = OptimizerConfig(learning_rate=1e-3, sweeps=10, trials=0)
    ledger = QueryLedger()
    optimize(spec, np.zeros(6), oracle, oracle.chi0, 1, config, seeded_rng(13),
             ledger=ledger)
    assert ledger.total == 0


def test_param_count_checked(oracle):
    spec = build_minimal(5)
    config = OptimizerConfig()
    with pytest.raises(IndexOutOfRange):
        optimize(spec, np.zeros(4), oracle, oracle.chi0, 1, config, seeded_rng(14))
