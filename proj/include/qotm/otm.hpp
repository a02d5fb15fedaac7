// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "qotm/operators.hpp"
#include "qotm/thermo.hpp"

namespace qotm::otm {

/// A driven system+bath instance: full-space generator schedule, the system
/// Hamiltonian endpoints, the bath Hamiltonian, and the initial inverse
/// temperatures. beta_s == beta_b is the single-temperature configuration;
/// they differ only in the two-temperature extension.
///
/// An empty protocol means no evolution (U = identity).
struct ThermalModel {
  int n_system_factors;
  qcore::Protocol protocol;
  qcore::Operator h_s_initial;
  qcore::Operator h_s_final;
  qcore::Operator h_b;
  double beta_s;
  double beta_b;

  int d_system() const { return h_s_initial.dim(); }
  int d_bath() const { return h_b.dim(); }
  int d_total() const { return d_system() * d_bath(); }
  std::vector<int> full_dims() const;

  qcore::Operator propagator_or_identity() const;
  void validate() const;
};

/// One initial-energy measurement branch.
struct OutcomeRecord {
  double epsilon;                       // eigenvalue of H_S(0)
  double prob_initial;                  // e^{-beta_s eps}/Z_S(0)
  qcore::DensityOperator evolved_state; // Phi_t(|eps><eps|)
  double final_mean_energy;             // Tr[H_S(t) Phi_t(|eps><eps|)]
  double delta_e_tilde;                 // final_mean_energy - eps
};

std::vector<OutcomeRecord> build_outcome_ensemble(const ThermalModel& m);

/// <e^{-beta_s dE}>_P = sum_eps prob_initial(eps) e^{-beta_s dE(eps)}.
double exp_average_delta_e(const std::vector<OutcomeRecord>& ensemble, double beta_s);

/// sum_eps prob_initial(eps) * delta_e_tilde(eps).
double mean_delta_e(const std::vector<OutcomeRecord>& ensemble);

/// Everything the guessed-state construction yields for one model.
struct GuessedEnsemble {
  std::vector<OutcomeRecord> outcomes;  // ascending epsilon
  double z_tilde;
  double log_z_tilde;
  double f_tilde;                       // -ln(z_tilde)/beta_s
  std::vector<double> p_guess;          // e^{-beta_s final_mean_energy}/z_tilde
  qcore::DensityOperator theta_sb;      // guessed joint state
  qcore::DensityOperator rho_s_tilde;   // Tr_B[theta_sb]
  double guessed_heat;                  // Tr[H_B tau_B] - Tr[(1 ⊗ H_B) theta_sb]
  double relative_entropy_full;         // D[theta_sb || tau_S(t) ⊗ tau_B]
  double relative_entropy_reduced;      // D[rho_s_tilde || tau_S(t)]
  bool degenerate_initial_spectrum;     // H_S(0) had a numerically degenerate cluster

  double mean_guessed_work() const;     // <dE> - guessed_heat
};

GuessedEnsemble build_guessed_ensemble(const ThermalModel& m);

/// F_S(t) - F_S(0) at the system temperature beta_s.
double delta_f_s(const ThermalModel& m);

/// |D + ln(z_tilde/Z_S(t)) + beta <Q>_B| for the single-temperature identity.
double guessed_heat_identity_residual(const GuessedEnsemble& g, const ThermalModel& m);

struct TheoremReport {
  double lhs;
  double rhs;
  double residual;  // |lhs - rhs| / rhs
};

/// Jarzynski equality for the guessed work at beta_s == beta_b.
TheoremReport theorem1_residual(const GuessedEnsemble& g, const ThermalModel& m);

struct WorkGapReport {
  double gap_full;     // <W~> - dF_S - D_full/beta
  double gap_reduced;  // <W~> - dF_S - D_reduced/beta
};

WorkGapReport max_guessed_work_gap(const GuessedEnsemble& g, const ThermalModel& m);

struct Theorem2Report {
  double lhs;
  double rhs;
  double residual;
  double work_bound_gap;  // <W~> - dF_S - D_reduced/beta_s - (dbeta/beta_s)<Q>_B
};

/// Two-temperature extension; reduces bitwise to the theorem-1 path when
/// beta_s == beta_b.
Theorem2Report theorem2_residual(const GuessedEnsemble& g, const ThermalModel& m);
Theorem2Report theorem2_residual(const ThermalModel& m);

struct MaxEntropyReport {
  bool skipped;            // fewer than 3 outcomes: constraint set has no interior
  bool ok;
  int n_tested;
  double worst_increase;   // max over perturbations of S(perturbed) - S(p)
};

/// Verifies that the guessed weights maximize S(Theta_SB) on the constrained
/// simplex: random directions with sum(dp) = 0 and sum(dp * E_final) = 0 must
/// not increase the entropy beyond 1e-9.
MaxEntropyReport max_entropy_property_check(const GuessedEnsemble& g, const ThermalModel& m,
                                            int n_perturbations, std::uint64_t seed = 20240);

/// Stein-lemma type-II error exponent: -D[theta_sb || tau_S(t) ⊗ tau_B].
double stein_asymptotic_rate(const GuessedEnsemble& g);

/// |<e^{-beta(W~ - dF_S)}> - e^{-D}| / e^{-D}, the operational-meaning
/// cross-check of the rate.
double stein_consistency_residual(const GuessedEnsemble& g, const ThermalModel& m);

}  // namespace qotm::otm
