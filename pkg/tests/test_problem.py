import math

import numpy as np
import pytest

from vqae.errors import (
    DegenerateDistribution,
    EncodingInfeasible,
    InfeasibleRescaling,
)
from vqae.problem import (
    PAPER_PARAMS,
    ProblemSpec,
    exact_amplitude,
    exact_theta,
    loose_estimate,
    prepare_chi0,
    rescale,
    tabulate,
)
from vqae.simulator import ancilla_one_probability, seeded_rng

# reference amplitudes at the headline parameters, computed by independent
# scalar summation (see reference_amplitude below)
GOLDEN = {
    "gaussian": 0.49999976769991555,
    "cauchy": 0.49781194901152204,
    "lognormal": 0.4571989079482956,
}


def reference_amplitude(spec):
    """Plain-Python re-derivation of sum_j p(x_j) C x_j."""
    size = 2**spec.n
    weights = []
    for j in range(size):
        x = j / size
        if spec.kind == "gaussian":
            w = math.exp(-((x - spec.mu) ** 2) / (2 * spec.sigma**2))
        elif spec.kind == "cauchy":
            w = spec.sigma / ((x - spec.mu) ** 2 + spec.sigma**2)
        else:
            t = spec.c0 + spec.c1 * x
            w = 0.0 if t <= 0 else math.exp(
                -((math.log(t) - spec.mu) ** 2) / (2 * spec.sigma**2)
            ) / t
        weights.append(w)
    z = sum(weights)
    return sum(w * spec.C * (j / size) for j, w in enumerate(weights)) / z


@pytest.mark.parametrize("kind", sorted(PAPER_PARAMS))
def test_amplitude_matches_independent_summation(kind):
    spec = ProblemSpec(kind=kind, n=5, **PAPER_PARAMS[kind])
    a = exact_amplitude(spec)
    assert a == pytest.approx(GOLDEN[kind], abs=1e-14)
    assert a == pytest.approx(reference_amplitude(spec), abs=1e-13)


@pytest.mark.parametrize("kind", sorted(PAPER_PARAMS))
@pytest.mark.parametrize("n", [3, 5, 8])
def test_reference_amplitude_other_widths(kind, n):
    spec = ProblemSpec(kind=kind, n=n, **PAPER_PARAMS[kind], C=0.7)
    assert exact_amplitude(spec) == pytest.approx(reference_amplitude(spec), abs=1e-13)


def test_table_is_normalized_probability():
    spec = ProblemSpec(kind="cauchy", n=6, mu=0.4, sigma=0.05)
    p = tabulate(spec)
    assert p.shape == (64,)
    assert np.all(p >= 0)
    assert p.sum() == pytest.approx(1.0)


def test_lognormal_zero_point_gets_zero_weight():
    spec = ProblemSpec(kind="lognormal", n=4, mu=1.5, sigma=0.2, c0=0.0, c1=10.0)
    assert tabulate(spec)[0] == 0.0


def test_prepare_chi0_encodes_amplitude():
    for kind in PAPER_PARAMS:
        spec = ProblemSpec(kind=kind, n=5, **PAPER_PARAMS[kind])
        chi0 = prepare_chi0(spec)
        assert chi0.norm_squared() == pytest.approx(1.0, abs=1e-12)
        assert ancilla_one_probability(chi0) == pytest.approx(
            exact_amplitude(spec), abs=1e-12
        )


def test_theta_amplitude_relation():
    spec = ProblemSpec(kind="gaussian", n=5)
    assert np.sin(exact_theta(spec)) ** 2 == pytest.approx(exact_amplitude(spec))


def test_spec_validation():
    with pytest.raises(DegenerateDistribution):
        ProblemSpec(kind="uniform", n=5)
    with pytest.raises(DegenerateDistribution):
        ProblemSpec(kind="gaussian", n=5, sigma=0.0)
    with pytest.raises(EncodingInfeasible):
        ProblemSpec(kind="gaussian", n=5, C=1.1)
    with pytest.raises(EncodingInfeasible):
        ProblemSpec(kind="gaussian", n=5, C=-0.1)


def test_rescale_scales_amplitude_linearly():
    spec = ProblemSpec(kind="gaussian", n=5, C=0.5)
    scaled = rescale(spec, 1.5)
    assert scaled.C == pytest.approx(0.75)
    assert exact_amplitude(scaled) == pytest.approx(1.5 * exact_amplitude(spec))


def test_rescale_rejects_out_of_range():
    spec = ProblemSpec(kind="gaussian", n=5, C=0.9)
    with pytest.raises(InfeasibleRescaling):
        rescale(spec, 1.5)
    with pytest.raises(InfeasibleRescaling):
        rescale(spec, -1.0)


def test_loose_estimate_charges_ledger():
    from vqae.estimator import QueryLedger

    spec = ProblemSpec(kind="gaussian", n=5)
    ledger = QueryLedger()
    a_hat = loose_estimate(spec, 200_000, seeded_rng(3), ledger)
    assert ledger.loose == 200_000
    assert ledger.total == 200_000
    assert a_hat == pytest.approx(exact_amplitude(spec), abs=0.01)
    with pytest.raises(ValueError):
        loose_estimate(spec, 0, seeded_rng(3))
