import numpy as np
import pytest

from elegant_bell import (
    QUANTUM_MAX,
    Observable,
    Scenario,
    bell_operator,
    ebi_value,
    extract_blocks,
    necessary_correlator,
)
from elegant_bell.family import reference_experiment
from elegant_bell.linalg import hermitian_eig
from elegant_bell.optimizer import (
    SeesawConfig,
    random_start,
    seesaw,
    update_alice,
    update_bob,
    update_state,
)

pytestmark = pytest.mark.filterwarnings("ignore::elegant_bell.errors.ZeroEigenvalueWarning")


def test_random_start_is_deterministic():
    a = random_start(SeesawConfig(seed=11))
    b = random_start(SeesawConfig(seed=11))
    assert np.array_equal(a.state, b.state)
    for x, y in zip(a.alice + a.bob, b.alice + b.bob):
        assert np.array_equal(x.matrix, y.matrix)
    c = random_start(SeesawConfig(seed=12))
    assert not np.allclose(a.state, c.state)


def test_random_start_satisfies_invariants():
    for seed in range(5):
        s = random_start(SeesawConfig(d_a=3, d_b=4, seed=seed))
        assert s.d_a == 3 and s.d_b == 4
        assert abs(np.linalg.norm(s.state) - 1.0) < 1e-10


def test_random_start_value_within_quantum_bounds():
    for seed in range(50):
        s = random_start(SeesawConfig(seed=seed))
        assert abs(ebi_value(s)) <= QUANTUM_MAX + 1e-9


def test_operator_top_eigenvalue_respects_quantum_bound():
    # Spot check of the known operator norm bound over random involutions.
    rng = np.random.default_rng(40)
    from conftest import random_involution

    for _ in range(1000):
        d_a = int(rng.integers(2, 4))
        d_b = int(rng.integers(2, 4))
        alice = [random_involution(rng, d_a) for _ in range(3)]
        bob = [random_involution(rng, d_b) for _ in range(4)]
        w, _ = hermitian_eig(bell_operator(alice, bob))
        assert w[-1] <= QUANTUM_MAX + 1e-9


def test_reference_is_fixed_point_of_updates():
    ref = reference_experiment()
    for k in range(3):
        assert np.max(np.abs(update_alice(ref, k).matrix - ref.alice[k].matrix)) < 1e-9
    for l in range(4):
        assert np.max(np.abs(update_bob(ref, l).matrix - ref.bob[l].matrix)) < 1e-9
    state = update_state(ref)
    sigma = bell_operator(ref.alice, ref.bob)
    assert abs(float(np.vdot(state, sigma @ state).real) - QUANTUM_MAX) < 1e-9
    # The optimal state stays maximally entangled (local-unitary freedom only).
    from elegant_bell.linalg import schmidt

    coeffs, _, _ = schmidt(state, 2, 2)
    assert np.allclose(coeffs, [1 / np.sqrt(2)] * 2, atol=1e-9)


def test_update_recovers_flipped_observable():
    ref = reference_experiment()
    flipped = Scenario(
        state=ref.state,
        alice=(Observable(-ref.alice[0].matrix), ref.alice[1], ref.alice[2]),
        bob=ref.bob,
    )
    repaired = update_alice(flipped, 0)
    restored = Scenario(
        state=ref.state, alice=(repaired, ref.alice[1], ref.alice[2]), bob=ref.bob
    )
    assert abs(ebi_value(restored) - QUANTUM_MAX) < 1e-9


def test_updates_never_decrease_value():
    rng_seeds = range(4)
    for seed in rng_seeds:
        s = random_start(SeesawConfig(seed=seed))
        value = ebi_value(s)
        for k in range(3):
            new_alice = list(s.alice)
            new_alice[k] = update_alice(s, k)
            s = Scenario(state=s.state, alice=tuple(new_alice), bob=s.bob)
            new_value = ebi_value(s)
            assert new_value >= value - 1e-12
            value = new_value
        for l in range(4):
            new_bob = list(s.bob)
            new_bob[l] = update_bob(s, l)
            s = Scenario(state=s.state, alice=s.alice, bob=tuple(new_bob))
            new_value = ebi_value(s)
            assert new_value >= value - 1e-12
            value = new_value


def test_seesaw_trace_is_monotone():
    result = seesaw(SeesawConfig(seed=3))
    diffs = np.diff(np.asarray(result.trace))
    assert np.all(diffs >= -1e-12)
    assert result.value <= QUANTUM_MAX + 1e-9


def test_seesaw_reaches_quantum_max_from_random_starts():
    wins = 0
    for seed in range(10):
        result = seesaw(SeesawConfig(seed=seed))
        if abs(result.value - QUANTUM_MAX) < 1e-6:
            wins += 1
            assert result.converged
    assert wins >= 9


def test_seesaw_fixed_point_from_reference_start():
    result = seesaw(SeesawConfig(seed=0), start=reference_experiment())
    assert result.iterations <= 2
    assert abs(result.value - QUANTUM_MAX) < 1e-9


def test_seesaw_both_signatures_and_matching_correlator():
    signatures = {}
    for seed in range(12):
        result = seesaw(SeesawConfig(seed=seed))
        if abs(result.value - QUANTUM_MAX) >= 1e-6:
            continue
        d = extract_blocks(result.scenario, tol=1e-5)
        block = d.spec.blocks[0]
        assert block.n == 1
        expected = 2j / np.sqrt(3) if block.r == 1 else -2j / np.sqrt(3)
        assert abs(necessary_correlator(result.scenario) - expected) < 1e-6
        signatures[block.r] = signatures.get(block.r, 0) + 1
    assert set(signatures) == {0, 1}


def test_seesaw_higher_dimension_converges():
    result = seesaw(SeesawConfig(d_a=4, d_b=4, seed=1))
    assert abs(result.value - QUANTUM_MAX) < 1e-6
    d = extract_blocks(result.scenario, tol=1e-5)
    # The top-eigenvector state step collapses onto a single extremal block,
    # so the support is one qubit pair even in dimension four.
    assert d.spec.total_dim == 2


def test_config_validation():
    with pytest.raises(ValueError):
        SeesawConfig(d_a=1)
    with pytest.raises(ValueError):
        SeesawConfig(conv_tol=0.0)
