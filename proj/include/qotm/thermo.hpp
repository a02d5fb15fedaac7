// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qotm/operators.hpp"

namespace qotm::thermo {

/// Thermal state e^{-beta H}/Z with its partition function and free energy.
/// Boltzmann weights are evaluated in the spectrum-shifted representation
/// e^{-beta(eps - eps_min)}, so large beta*||H|| never overflows; Z and F are
/// recovered from log_partition_function.
struct GibbsState {
  qcore::DensityOperator state;
  double partition_function;      // Z
  double log_partition_function;  // ln Z
  double free_energy;             // -ln(Z)/beta
  double beta;
};

GibbsState gibbs(const qcore::Operator& h, double beta);

/// -Tr[rho ln rho] with eigenvalues clipped to [0,1] and 0 ln 0 := 0.
double von_neumann_entropy(const qcore::DensityOperator& rho);

/// D[rho||sigma] = Tr[rho ln rho] - Tr[rho ln sigma], each trace evaluated in
/// its own eigenbasis. Returns +infinity when rho has weight on a sigma
/// eigenvector whose eigenvalue is below 1e-14.
double relative_entropy(const qcore::DensityOperator& rho,
                        const qcore::DensityOperator& sigma);

/// Re Tr[h rho]; throws if the imaginary residual exceeds tolerance.
double energy_expectation(const qcore::Operator& h, const qcore::DensityOperator& rho);

}  // namespace qotm::thermo
