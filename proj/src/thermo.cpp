// SPDX-License-Identifier: Apache-2.0
#include "qotm/thermo.hpp"

#include <cmath>
#include <limits>

namespace qotm::thermo {

using qcore::Complex;
using qcore::Matrix;

GibbsState gibbs(const qcore::Operator& h, double beta) {
  if (!(beta > 0.0)) throw ParameterError("gibbs: beta must be > 0");
  const qcore::Spectrum s = qcore::eig_hermitian(h);
  const int n = h.dim();

  const double e_min = s.eigenvalues(0);
  Eigen::VectorXd weights(n);
  for (int i = 0; i < n; ++i) weights(i) = std::exp(-beta * (s.eigenvalues(i) - e_min));
  const double z_shifted = weights.sum();
  const double log_z = -beta * e_min + std::log(z_shifted);

  Matrix rho = s.eigenvectors * (weights / z_shifted).asDiagonal().toDenseMatrix().cast<Complex>() *
               s.eigenvectors.adjoint();
  qcore::DensityOperator state(qcore::Operator(h.dims(), std::move(rho)),
                               qcore::DensityOperator::Trusted{});
  return GibbsState{std::move(state), std::exp(log_z), log_z, -log_z / beta, beta};
}

double von_neumann_entropy(const qcore::DensityOperator& rho) {
  const qcore::Spectrum s = qcore::eig_hermitian(rho.op());
  double entropy = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    const double lam = std::min(1.0, std::max(0.0, s.eigenvalues(i)));
    if (lam > 0.0) entropy -= lam * std::log(lam);
  }
  return entropy;
}

double relative_entropy(const qcore::DensityOperator& rho,
                        const qcore::DensityOperator& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionError("relative_entropy: states live on different spaces");

  const qcore::Spectrum sr = qcore::eig_hermitian(rho.op());
  double tr_rho_ln_rho = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    const double lam = std::min(1.0, std::max(0.0, sr.eigenvalues(i)));
    if (lam > 0.0) tr_rho_ln_rho += lam * std::log(lam);
  }

  const qcore::Spectrum ss = qcore::eig_hermitian(sigma.op());
  double tr_rho_ln_sigma = 0.0;
  for (int j = 0; j < sigma.dim(); ++j) {
    const double overlap =
        std::max(0.0, (ss.eigenvectors.col(j).adjoint() * rho.matrix() *
                       ss.eigenvectors.col(j))(0, 0).real());
    const double sj = ss.eigenvalues(j);
    if (sj <= 1e-14) {
      if (overlap > 1e-12) return std::numeric_limits<double>::infinity();
      continue;  // no weight on the null direction
    }
    tr_rho_ln_sigma += overlap * std::log(sj);
  }
  return tr_rho_ln_rho - tr_rho_ln_sigma;
}

double energy_expectation(const qcore::Operator& h, const qcore::DensityOperator& rho) {
  if (h.dim() != rho.dim())
    throw DimensionError("energy_expectation: operator and state dims differ");
  const Complex tr = qcore::trace_product(h.matrix(), rho.matrix());
  if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::abs(tr.real())))
    throw ValidationError("energy_expectation: imaginary residual above tolerance");
  return tr.real();
}

}  // namespace qotm::thermo
