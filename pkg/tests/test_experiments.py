# tests/test_experiments.py
import json
import math

import numpy as np
import pytest

from hamlim.core.errors import DomainError, PromiseViolationError
from hamlim.services.experiments import (
    CountedPhaseOracle,
    dense_scaling_report,
    fastforward_witness,
    line_transfer_experiment,
    parity_experiment,
    parity_sweep,
    rebuild_from_oracle,
    sign_detection_experiment,
    sign_sweep,
    trotter_convergence,
)
from hamlim.services.graphdecomp import Star, random_star, random_tree, star_matrix
from hamlim.services.instances import BitString, SignString, circulant_from_string
from hamlim.services.matcore import hermitian
from hamlim.services.serialization import dumps_json
from hamlim.services.stochastic import PromiseConfig


def test_parity_of_all_zero_string():
    outcome = parity_experiment(BitString.parse("00000000"))

    assert outcome.parity == 0
    assert outcome.fidelity >= 1 - 1e-6
    assert outcome.report.passed
    assert outcome.report.metrics["subspace_deviation"] <= 1e-8


def test_parity_of_single_one_bit():
    outcome = parity_experiment(BitString.parse("1"))

    assert outcome.parity == 1
    assert outcome.report.passed


def test_parity_sweep_agrees_on_random_strings():
    report = parity_sweep(8, 100, seed=0)

    assert report.passed
    assert report.metrics["agreement"] == 1.0
    assert report.metrics["max_subspace_deviation"] <= 1e-8


def test_sign_detection_on_the_smallest_promise():
    cfg = PromiseConfig(M=2, B=2)
    plus = sign_detection_experiment(SignString.parse("++"), cfg)
    minus = sign_detection_experiment(SignString.parse("--"), cfg)

    assert plus.sign == 1
    assert minus.sign == -1
    assert plus.report.metrics["inner_im"] == pytest.approx(-1.0, abs=1e-8)
    assert minus.report.metrics["inner_im"] == pytest.approx(1.0, abs=1e-8)
    assert plus.report.passed and minus.report.passed


def test_sign_detection_rejects_strings_outside_the_promise():
    with pytest.raises(PromiseViolationError):
        sign_detection_experiment(SignString.parse("+-"), PromiseConfig(M=2, B=2))
    with pytest.raises(PromiseViolationError):
        sign_detection_experiment(SignString.parse("+++"), PromiseConfig(M=2, B=2))


def test_sign_detection_counts_string_queries():
    cfg = PromiseConfig(M=4, B=2)
    report = sign_detection_experiment(SignString.parse("++-+"), cfg).report

    n = 2 * cfg.M + 1
    assert report.metrics["matrix_queries"] == n * n
    assert report.metrics["string_queries"] == n * n - n
    assert report.metrics["oracle_matches"]


@pytest.mark.parametrize("randomize", [False, True])
def test_sign_sweep_detects_every_sampled_sign(randomize):
    report = sign_sweep(60, 50, seed=3, randomize=randomize)

    assert report.passed
    assert report.metrics["agreement"] == 1.0
    assert report.metrics["max_string_queries_per_matrix_query"] <= 1.0


def test_string_backed_oracle_rebuilds_the_circulant():
    s = SignString.parse("+--+-")
    oracle = CountedPhaseOracle.from_sign_string(s)

    assert oracle.query(3, 3) == 1.0
    assert oracle.string_query_count == 0
    assert oracle.query(0, 2) == -1.0
    assert oracle.string_query_count == 1

    oracle.reset()
    n = oracle.n
    rebuilt = rebuild_from_oracle(oracle, np.ones((n, n)) - np.eye(n))
    assert rebuilt == circulant_from_string(s)
    assert oracle.query_count == n * n


def test_matrix_backed_oracle_returns_unit_phases():
    h = hermitian([[2.0, 3j], [-3j, 0.0]])
    oracle = CountedPhaseOracle.from_matrix(h)

    assert oracle.query(0, 1) == pytest.approx(1j)
    assert oracle.query(1, 1) == 1.0
    assert oracle.query(0, 0) == 1.0
    assert oracle.query_count == 3

    with pytest.raises(DomainError):
        CountedPhaseOracle()


def test_fastforward_returns_to_identity():
    single = fastforward_witness(1, 2 * math.pi)
    assert single.passed
    assert single.metrics["identity_deviation"] <= 1e-12

    report = fastforward_witness(6, 2 * math.pi)
    assert report.passed
    assert report.metrics["abs_to_spectral_ratio"] == pytest.approx(8.0, rel=1e-9)


def test_fastforward_half_period_is_minus_identity():
    report = fastforward_witness(1, math.pi)

    assert report.passed
    assert not report.metrics["full_period"]
    assert report.metrics["identity_deviation"] == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 8, 16, 32])
def test_line_transfer_is_perfect(n):
    report = line_transfer_experiment(n)

    assert report.passed
    assert report.metrics["magnitude"] == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n", [8, 16])
def test_dense_scaling_ranges(n):
    report = dense_scaling_report(n)

    assert report.passed
    assert report.metrics["in_ranges"]
    assert report.metrics["spectral_t"] == pytest.approx(math.pi * n / 2, rel=1e-9)


def test_trotter_convergence_report(rng):
    h = random_tree(32, rng, magnitude=(0.2, 0.6))
    psi = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    psi = psi / np.linalg.norm(psi)

    report = trotter_convergence(h, 1.0, [8, 16, 32, 64, 128, 256, 512, 1024], psi)

    assert report.passed
    assert -1.1 <= report.metrics["slope"] <= -0.9
    assert not report.metrics["exact_formula"]
    assert report.metrics["ratio_ok"]
    errors = report.metrics["errors"]
    assert errors[-1] <= errors[0] / 64 * 4
    assert report.metrics["k_prime"] == 1

    with pytest.raises(DomainError):
        trotter_convergence(h, 1.0, [8], psi)


def test_trotter_convergence_is_exact_for_stars(rng):
    psi = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    psi = psi / np.linalg.norm(psi)
    steps = [8, 16, 32, 64, 128, 256, 512, 1024]

    for star in (random_star(5, rng), Star(center=3, leaves=(0, 1, 2, 4, 5), weights=(1.0,) * 5)):
        report = trotter_convergence(star_matrix(star, 6), 1.0, steps, psi)

        assert report.passed
        assert report.metrics["exact_formula"]
        assert report.metrics["terms"] == 1
        assert max(report.metrics["errors"]) <= 1e-10


def test_reports_serialize_with_the_pass_key():
    report = line_transfer_experiment(4)
    data = json.loads(dumps_json(report, drop=("generated_at", "wall_time_seconds")))

    assert data["pass"] is True
    assert data["name"] == "line-transfer"
    assert "generated_at" not in data
    assert "passed" not in data
