// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qotm/otm.hpp"

namespace qotm::tpm {

/// Exhaustive-enumeration guard: beyond this total dimension the d_S^2 d_B^2
/// trajectory table is refused.
inline constexpr int kMaxTotalDim = 256;

struct Trajectory {
  double epsilon;        // initial system eigenvalue, H_S(0)
  double q;              // initial bath eigenvalue
  double epsilon_prime;  // final system eigenvalue, H_S(t)
  double q_prime;        // final bath eigenvalue
  double probability;
  double work;           // (q' + eps') - (q + eps)
};

/// Joint two-point-measurement work distribution over all trajectories.
struct TpmDistribution {
  std::vector<Trajectory> trajectories;
};

TpmDistribution build_tpm_distribution(const otm::ThermalModel& m);

/// sum_traj p e^{-beta W}; equals e^{-beta dF_S} as an identity of the
/// construction.
double standard_jarzynski_average(const TpmDistribution& d, double beta);

/// sum_traj p W.
double mean_work(const TpmDistribution& d);

/// Tr[(H_S(t) ⊗ 1 + 1 ⊗ H_B) U (tau_S ⊗ tau_B) U†] minus the initial energies
/// (operator-trace route, independent of the trajectory table).
double exact_work_expectation(const otm::ThermalModel& m);

/// |<W~> - <W> - Tr[(1 ⊗ H_B)(Theta_SB - U(tau_S ⊗ tau_B)U†)]|.
double work_relation_residual(const otm::ThermalModel& m, const otm::GuessedEnsemble& g);

struct DeviationReport {
  double lhs_exact_around_guessed;    // <e^{-beta(W - <W~>)}> over TPM
  double lhs_guessed_around_exact;    // <e^{-beta(W~ - <W>)}> over P~
  double bound_full;                  // e^{+D_full} and e^{-D_full} resp.
  double product;
  bool ineq1_ok;
  bool ineq2_ok;
  bool product_ok;
};

DeviationReport deviation_inequalities(const otm::ThermalModel& m,
                                       const otm::GuessedEnsemble& g);

}  // namespace qotm::tpm
