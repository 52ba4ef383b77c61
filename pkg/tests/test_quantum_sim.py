import math

import numpy as np
import pytest

from levrot.coupling import DecoherenceBudget
from levrot.nv_spin import TWO_PI
from levrot.quantum_sim import (QuantumModel, LindbladChannels, EvolutionResult,
                                NoOscillationError, PositivityError, build_model,
                                resonant_model, evolve, exchange_frequency,
                                thermal_initial_state, SPIN_LABELS)

LAM = 57e3                 # Hz, reference exchange rate
OMEGA_PHI = TWO_PI * 5e6   # rad/s


def test_zero_coupling_gives_diagonal_hamiltonian():
    model = resonant_model(0.0, OMEGA_PHI, N_max=3)
    assert np.count_nonzero(model.H - np.diag(np.diag(model.H))) == 0


def test_jc_coupling_blocks():
    model = resonant_model(LAM, OMEGA_PHI, N_max=4)
    g = TWO_PI * LAM
    assert model.H[model.index("e", 0), model.index("plus", 1)] \
        == pytest.approx(g, rel=1e-14)
    assert model.H[model.index("e", 3), model.index("plus", 4)] \
        == pytest.approx(g * 2.0, rel=1e-14)  # sqrt(4) ladder factor
    # excitation-conserving only: no a^dag |e><+| term
    assert model.H[model.index("e", 1), model.index("plus", 0)] == 0.0


def test_full_rabi_keeps_counter_rotating_terms():
    model = resonant_model(LAM, OMEGA_PHI, N_max=2, kind="full_rabi")
    g = TWO_PI * LAM
    assert model.H[model.index("e", 1), model.index("plus", 0)] \
        == pytest.approx(g, rel=1e-14)
    np.testing.assert_allclose(model.H, model.H.conj().T, atol=1e-9)


def test_hamiltonian_invariants():
    model = resonant_model(LAM, OMEGA_PHI, N_max=6)
    H = model.H
    np.testing.assert_allclose(H, H.conj().T, atol=1e-12 * np.abs(H).max())
    N_ex = model.excitation_operator()
    comm = H @ N_ex - N_ex @ H
    assert np.max(np.abs(comm)) <= 1e-12 * np.abs(H).max()
    # |-> never couples
    for n in range(model.N_max + 1):
        row = model.H[model.index("minus", n)].copy()
        row[model.index("minus", n)] = 0.0
        assert np.max(np.abs(row)) == 0.0


def test_build_model_validation():
    with pytest.raises(ValueError):
        resonant_model(LAM, OMEGA_PHI, N_max=0)
    with pytest.raises(ValueError):
        resonant_model(LAM, OMEGA_PHI, kind="bogus")


def test_resonant_rabi_transfer_analytic():
    model = resonant_model(LAM, OMEGA_PHI, N_max=2)
    t_transfer = 1.0 / (4.0 * LAM)
    times = np.linspace(0.0, 2.0 * t_transfer, 801)
    result = evolve(model, model.basis_state("plus", 1), times)
    expected = np.sin(TWO_PI * LAM * times) ** 2
    np.testing.assert_allclose(result.spin_population("e"), expected, atol=1e-9)
    # full transfer at exactly 1/(4 lambda)
    k = int(np.argmin(np.abs(times - t_transfer)))
    assert result.spin_population("e")[k] >= 0.999


def test_transfer_time_for_reference_rate():
    # 57 kHz -> complete population transfer near 4.39 microseconds
    assert 1.0 / (4.0 * LAM) == pytest.approx(4.39e-6, rel=1e-3)


def test_unitary_conservation_laws():
    model = resonant_model(LAM, OMEGA_PHI, N_max=4)
    times = np.linspace(0.0, 3.0 / LAM, 600)
    result = evolve(model, model.basis_state("plus", 2), times)
    assert np.max(np.abs(result.populations.sum(axis=1) - 1.0)) <= 1e-9
    assert np.max(np.abs(result.purity - 1.0)) <= 1e-9
    e0 = result.energy[0]
    assert np.max(np.abs(result.energy - e0)) <= 1e-9 * abs(e0)


def test_jc_conserves_excitation_number():
    model = resonant_model(LAM, OMEGA_PHI, N_max=4)
    times = np.linspace(0.0, 2.0 / LAM, 400)
    result = evolve(model, model.basis_state("plus", 3), times, store_states=True)
    N_ex = model.excitation_operator()
    values = [float(np.real(np.trace(N_ex @ rho))) for rho in result.states]
    np.testing.assert_allclose(values, values[0], rtol=0.0, atol=1e-9 * values[0])


def test_truncation_insensitivity():
    times = np.linspace(0.0, 2.0 / LAM, 300)
    pops = []
    for n_max in (4, 6):
        model = resonant_model(LAM, OMEGA_PHI, N_max=n_max)
        result = evolve(model, model.basis_state("plus", 2), times)
        pops.append(result.spin_population("e"))
    np.testing.assert_allclose(pops[0], pops[1], atol=1e-6)


def test_sqrt_n_scaling_of_exchange():
    times1 = np.linspace(0.0, 4.0 / LAM, 4000)
    model = resonant_model(LAM, OMEGA_PHI, N_max=5)
    r1 = evolve(model, model.basis_state("plus", 1), times1)
    f1 = exchange_frequency(r1)
    r4 = evolve(model, model.basis_state("plus", 4), times1)
    f4 = exchange_frequency(r4)
    assert f1 == pytest.approx(2.0 * LAM, rel=1e-3)
    assert f4 / f1 == pytest.approx(2.0, rel=0.01)


def test_full_rabi_agrees_with_jc_in_weak_coupling():
    lam = 1e-3 * OMEGA_PHI / TWO_PI
    times = np.linspace(0.0, 1.5 / lam, 1500)
    pops = {}
    for kind in ("jaynes_cummings", "full_rabi"):
        model = resonant_model(lam, OMEGA_PHI, N_max=3, kind=kind)
        result = evolve(model, model.basis_state("plus", 1), times)
        pops[kind] = result.spin_population("e")
    gap = np.max(np.abs(pops["jaynes_cummings"] - pops["full_rabi"]))
    assert gap <= 1e-3


def test_exchange_frequency_synthetic():
    times = np.linspace(0.0, 5e-5, 4096)
    populations = np.zeros((times.size, 6))
    populations[:, 4] = np.sin(TWO_PI * LAM * times) ** 2   # "e" block, n=0
    populations[:, 0] = 1.0 - populations[:, 4]
    model = resonant_model(LAM, OMEGA_PHI, N_max=1)
    result = EvolutionResult(times=times, populations=populations,
                             purity=np.ones(times.size),
                             energy=np.zeros(times.size),
                             coherence_pe=np.zeros(times.size, complex),
                             model=model)
    assert exchange_frequency(result) == pytest.approx(2 * LAM, rel=1e-3)


def test_exchange_frequency_needs_oscillation():
    times = np.linspace(0.0, 1e-5, 256)
    populations = np.zeros((times.size, 6))
    populations[:, 0] = 1.0
    model = resonant_model(LAM, OMEGA_PHI, N_max=1)
    result = EvolutionResult(times=times, populations=populations,
                             purity=np.ones(times.size),
                             energy=np.zeros(times.size),
                             coherence_pe=np.zeros(times.size, complex),
                             model=model)
    with pytest.raises(NoOscillationError):
        exchange_frequency(result)


def test_strong_dephasing_overdamps_oscillation():
    model = resonant_model(LAM, OMEGA_PHI, N_max=1)
    channels = LindbladChannels(pure_dephasing_rate=10.0 * TWO_PI * LAM)
    t_transfer = 1.0 / (4.0 * LAM)
    times = np.linspace(0.0, 4.0 * t_transfer, 400)
    result = evolve(model, model.basis_state("plus", 1), times, channels)
    p_e = result.spin_population("e")
    # where the coherent run reaches unity, the overdamped one stays below 1/e
    k = int(np.argmin(np.abs(times - t_transfer)))
    assert p_e[k] < 1.0 / math.e
    # and the transfer is incoherent: monotone rise toward 1/2, no oscillation
    assert np.all(np.diff(p_e) > -1e-12)
    assert p_e[-1] < 0.5


def test_coherence_decays_at_composite_rate():
    budget = DecoherenceBudget(T1=40e-6, T2_star=60e-6)
    channels = LindbladChannels.from_budget(budget)
    # detuned ladder so the coherence just precesses while it decays
    model = resonant_model(0.0, OMEGA_PHI, N_max=1)
    rho0 = np.zeros((model.dim, model.dim), dtype=complex)
    ip, ie = model.index("plus", 0), model.index("e", 0)
    rho0[ip, ip] = rho0[ie, ie] = 0.5
    rho0[ip, ie] = rho0[ie, ip] = 0.5
    times = np.linspace(0.0, 2.0 * budget.T2, 400)
    result = evolve(model, rho0, times, channels)
    envelope = np.abs(result.coherence_pe)
    fitted_rate = -np.polyfit(times, np.log(envelope), 1)[0]
    assert fitted_rate == pytest.approx(1.0 / budget.T2, rel=0.02)


def test_relaxation_moves_population_down():
    model = resonant_model(0.0, OMEGA_PHI, N_max=1)
    channels = LindbladChannels(spin_relaxation_rate=1.0 / 10e-6)
    times = np.linspace(0.0, 50e-6, 200)
    result = evolve(model, model.basis_state("e", 0), times, channels)
    assert result.spin_population("e")[-1] < 1e-2
    assert result.spin_population("plus")[-1] > 0.99


def test_phonon_loss_drains_fock_ladder():
    model = resonant_model(0.0, OMEGA_PHI, N_max=3)
    channels = LindbladChannels(phonon_decoherence_rate=1e6)
    times = np.linspace(0.0, 5e-6, 200)
    result = evolve(model, model.basis_state("plus", 3), times, channels)
    n_mean = sum(n * result.level_population("plus", n)[-1] for n in range(4))
    assert n_mean < 3.0 * math.exp(-5.0) * 1.5


def test_thermal_initial_state():
    model = resonant_model(LAM, OMEGA_PHI, N_max=6)
    rho = thermal_initial_state(model, "plus", mean_occupation=0.5)
    assert float(np.trace(rho).real) == pytest.approx(1.0, rel=1e-14)
    weights = [rho[model.index("plus", n), model.index("plus", n)].real
               for n in range(7)]
    assert all(a > b for a, b in zip(weights, weights[1:]))
    result = evolve(model, rho, np.linspace(0.0, 1.0 / LAM, 100))
    assert np.max(np.abs(result.populations.sum(axis=1) - 1.0)) <= 1e-9


def test_evolve_input_validation():
    model = resonant_model(LAM, OMEGA_PHI, N_max=1)
    good = model.basis_state("plus", 0)
    with pytest.raises(ValueError):
        evolve(model, good, np.array([0.0]))
    with pytest.raises(ValueError):
        evolve(model, good, np.array([0.0, 2.0, 3.0]))  # non-uniform
    with pytest.raises(ValueError):
        evolve(model, 2.0 * good, np.linspace(0, 1e-6, 10))
    with pytest.raises(ValueError):
        model.basis_state("plus", 5)


def test_spin_labels_cover_basis():
    model = resonant_model(LAM, OMEGA_PHI, N_max=2)
    assert model.dim == 9
    assert [model.index(s, 0) for s in SPIN_LABELS] == [0, 3, 6]
