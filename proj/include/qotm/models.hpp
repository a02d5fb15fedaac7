// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qotm/otm.hpp"

namespace qotm::models {

// ---------------------------------------------------------------------------
// Two-qubit dephasing: H = omega_s sz ⊗ 1 + omega_b 1 ⊗ sz + j sz ⊗ sx.
// Populations are preserved, so the guessed state is the exact state and the
// heat has a closed form.
// ---------------------------------------------------------------------------

struct TwoQubitDephasingParams {
  double omega_s;
  double omega_b;
  double j;
  double beta;
  double t;
};

otm::ThermalModel two_qubit_dephasing_model(const TwoQubitDephasingParams& p);

/// -2 j^2 omega_b tanh(beta omega_b) sin^2(t sqrt(j^2+omega_b^2)) / (j^2+omega_b^2).
double two_qubit_analytic_heat(const TwoQubitDephasingParams& p);

/// Same closed form with the bath prepared at a different temperature
/// (tanh(beta_bath omega_b) replaces tanh(beta omega_b)).
double two_qubit_analytic_heat(const TwoQubitDephasingParams& p, double beta_bath);

/// Companion oracle: D[Theta||tau ⊗ tau] = -beta * heat for this model.
double two_qubit_analytic_relative_entropy(const TwoQubitDephasingParams& p);

// ---------------------------------------------------------------------------
// Spin-boson dephasing on a truncated Fock space:
// H = (omega0/2) sz + sum_k omega_k n_k + sz ⊗ sum_k (g_k a_k + g_k* a_k†).
// The model's propagator is the interaction-picture Magnus generator
// exp(-it(H0 + H1)), which is exact before truncation.
// ---------------------------------------------------------------------------

struct BosonMode {
  double omega;           // > 0
  std::complex<double> g;
};

struct SpinBosonParams {
  double omega0;
  std::vector<BosonMode> modes;
  int fock_cutoff;        // levels per mode (>= 2)
  double beta;
  double t;
};

enum class CutoffPolicy { enforce, relaxed };

/// Truncation is accepted when, for every mode, the thermal tail
/// e^{-beta omega N} <= 1e-10 and the displacement |G_k(t)| t <= 0.3 sqrt(N).
/// CutoffPolicy::relaxed skips the check (convergence-ladder studies).
otm::ThermalModel spin_boson_model(const SpinBosonParams& p,
                                   CutoffPolicy policy = CutoffPolicy::enforce);

/// Smallest per-mode Fock cutoff passing both constructor conditions.
int suggest_fock_cutoff(const SpinBosonParams& p);

/// Exact (untruncated) guessed heat: -sum_k omega_k |g_k|^2 (sin(w t/2)/(w/2))^2.
double spin_boson_analytic_heat(const SpinBosonParams& p);

/// d<Q~>_B/dt = -sum_k 2 |g_k|^2 sin(omega_k t).
double spin_boson_analytic_heat_current(const std::vector<BosonMode>& modes, double t);

/// G_k(t) = g sinc(w t/2) e^{-i w t/2}.
std::complex<double> magnus_mode_amplitude(const BosonMode& mode, double t);

/// Scalar phase term per mode: |g|^2/w (1 - sinc(w t)).
double magnus_mode_phase(const BosonMode& mode, double t);

/// H0 + H1 on the truncated space (t > 0).
qcore::Operator magnus_generator(const SpinBosonParams& p);

/// Thermally weighted distance ||(U_magnus - U_trotter)(1 ⊗ tau_B^{1/2})||_F
/// against a midpoint-rule product integrator of the interaction-picture
/// Hamiltonian with n_steps steps.
double magnus_vs_trotter_residual(const SpinBosonParams& p, int n_steps);

/// Lab-frame variant: the protocol carries the full time-independent
/// Hamiltonian instead of the Magnus generator. Physical quantities agree
/// with the Magnus route up to truncation error (frame-convention guard).
otm::ThermalModel spin_boson_model_lab_frame(const SpinBosonParams& p,
                                             CutoffPolicy policy = CutoffPolicy::enforce);

// ---------------------------------------------------------------------------
// Random models and the closed-system reduction.
// ---------------------------------------------------------------------------

/// Deterministic Gaussian-ensemble model: Hermitian H_S (per segment when
/// time_dependent_system), H_B, and interaction V_j scaled by
/// interaction_scale; beta_s = beta_b drawn from the seed.
otm::ThermalModel random_model(std::uint64_t seed, int d_system, int d_bath, int n_segments,
                               bool time_dependent_system, double interaction_scale = 1.0);

struct ClosedSystemReport {
  double heat_abs;             // |<Q~>_B|, expected 0
  double work_minus_delta_e;   // |<W~> - <dE>|, expected 0
  double d_full_minus_reduced; // |D_full - D_reduced|, expected 0
  double rho_residual;         // max-norm vs the system-only guessed state
  double jarzynski_residual;   // closed-system modified Jarzynski, relative
  bool ok;
};

/// Requires V = 0 in every segment (each generator splits as
/// H_S ⊗ 1 + 1 ⊗ H_B within 1e-10); verifies the closed-system collapse.
ClosedSystemReport closed_system_reduction_check(const otm::ThermalModel& m);

// ---------------------------------------------------------------------------
// Ohmic spectral-density sampling (analytic finite-mode sums only).
// ---------------------------------------------------------------------------

struct OhmicSpectrum {
  int n_modes = 200;
  double omega_c = 1.0;        // exponential cutoff of J(w) = eta w e^{-w/w_c}
  double coupling = 0.1;       // eta
  double omega_max_factor = 10.0;
};

std::vector<BosonMode> sample_ohmic_modes(const OhmicSpectrum& s);

struct DecayReport {
  double early_peak;   // max |dQ/dt| over t in (0, 5/w_c]
  double late_value;   // |dQ/dt| at t = 50/w_c
  bool ok;             // late_value <= 0.1 * early_peak
};

/// Dephasing of the bath-energy flow for a sampled ohmic spectrum: the heat
/// current must fall below 10% of its early-time peak by t = 50/w_c.
DecayReport ohmic_heat_current_decay_check(const OhmicSpectrum& s);

}  // namespace qotm::models
