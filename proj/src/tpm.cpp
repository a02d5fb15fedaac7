// SPDX-License-Identifier: Apache-2.0
#include "qotm/tpm.hpp"

#include <cmath>

namespace qotm::tpm {

using qcore::Complex;
using qcore::Matrix;
using qcore::Operator;

namespace {

void require_common_beta(const otm::ThermalModel& m, const char* who) {
  if (m.beta_s != m.beta_b)
    throw ParameterError(std::string(who) + ": defined at a common inverse temperature");
}

std::vector<double> gibbs_weights(const qcore::RealVector& evals, double beta) {
  const double e_min = evals.minCoeff();
  std::vector<double> w(evals.size());
  double z = 0.0;
  for (int i = 0; i < evals.size(); ++i) {
    w[i] = std::exp(-beta * (evals(i) - e_min));
    z += w[i];
  }
  for (double& x : w) x /= z;
  return w;
}

}  // namespace

TpmDistribution build_tpm_distribution(const otm::ThermalModel& m) {
  m.validate();
  require_common_beta(m, "build_tpm_distribution");
  if (m.d_total() > kMaxTotalDim)
    throw DimensionError("build_tpm_distribution: total dimension exceeds 256");

  const qcore::Spectrum s0 = qcore::eig_hermitian(m.h_s_initial);
  const qcore::Spectrum st = qcore::eig_hermitian(m.h_s_final);
  const qcore::Spectrum sb = qcore::eig_hermitian(m.h_b);
  const Operator u = m.propagator_or_identity();
  const int ds = m.d_system(), db = m.d_bath();

  // Transition amplitudes <eps',q'|U|eps,q> in one pass: columns of U rotated
  // into the initial product eigenbasis, rows into the final one.
  Matrix v_in(ds * db, ds * db), v_fin(ds * db, ds * db);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < db; ++j) {
      const int col = i * db + j;
      for (int r = 0; r < ds; ++r)
        for (int c = 0; c < db; ++c) {
          v_in(r * db + c, col) = s0.eigenvectors(r, i) * sb.eigenvectors(c, j);
          v_fin(r * db + c, col) = st.eigenvectors(r, i) * sb.eigenvectors(c, j);
        }
    }
  const Matrix amps = v_fin.adjoint() * u.matrix() * v_in;

  const std::vector<double> ws = gibbs_weights(s0.eigenvalues, m.beta_s);
  const std::vector<double> wb = gibbs_weights(sb.eigenvalues, m.beta_b);

  TpmDistribution dist;
  dist.trajectories.reserve(static_cast<size_t>(ds) * db * ds * db);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < db; ++j) {
      const double p_init = ws[i] * wb[j];
      const double e0 = s0.eigenvalues(i), q0 = sb.eigenvalues(j);
      for (int ip = 0; ip < ds; ++ip)
        for (int jp = 0; jp < db; ++jp) {
          const double amp2 = std::norm(amps(ip * db + jp, i * db + j));
          const double e1 = st.eigenvalues(ip), q1 = sb.eigenvalues(jp);
          dist.trajectories.push_back(
              Trajectory{e0, q0, e1, q1, p_init * amp2, (q1 + e1) - (q0 + e0)});
        }
    }
  return dist;
}

double standard_jarzynski_average(const TpmDistribution& d, double beta) {
  double acc = 0.0;
  for (const auto& tr : d.trajectories) acc += tr.probability * std::exp(-beta * tr.work);
  return acc;
}

double mean_work(const TpmDistribution& d) {
  double acc = 0.0;
  for (const auto& tr : d.trajectories) acc += tr.probability * tr.work;
  return acc;
}

double exact_work_expectation(const otm::ThermalModel& m) {
  m.validate();
  require_common_beta(m, "exact_work_expectation");
  const thermo::GibbsState tau_s = thermo::gibbs(m.h_s_initial, m.beta_s);
  const thermo::GibbsState tau_b = thermo::gibbs(m.h_b, m.beta_b);
  const qcore::DensityOperator joint0 = qcore::tensor(tau_s.state, tau_b.state);
  const Operator u = m.propagator_or_identity();
  const Matrix evolved = u.matrix() * joint0.matrix() * u.matrix().adjoint();

  const Matrix h_total_final =
      qcore::tensor(m.h_s_final, Operator::identity(m.h_b.dims())).matrix() +
      qcore::tensor(Operator::identity(m.h_s_initial.dims()), m.h_b).matrix();

  const double final_energy = qcore::trace_product(h_total_final, evolved).real();
  const double initial_energy = thermo::energy_expectation(m.h_s_initial, tau_s.state) +
                                thermo::energy_expectation(m.h_b, tau_b.state);
  return final_energy - initial_energy;
}

double work_relation_residual(const otm::ThermalModel& m, const otm::GuessedEnsemble& g) {
  require_common_beta(m, "work_relation_residual");
  const thermo::GibbsState tau_s = thermo::gibbs(m.h_s_initial, m.beta_s);
  const thermo::GibbsState tau_b = thermo::gibbs(m.h_b, m.beta_b);
  const Operator u = m.propagator_or_identity();
  const Matrix exact_final =
      u.matrix() * qcore::tensor(tau_s.state, tau_b.state).matrix() * u.matrix().adjoint();

  const Operator h_b_full =
      qcore::tensor(Operator::identity(m.h_s_initial.dims()), m.h_b);
  const double bath_energy_diff =
      qcore::trace_product(h_b_full.matrix(), (g.theta_sb.matrix() - exact_final).eval())
          .real();
  return std::abs(g.mean_guessed_work() - exact_work_expectation(m) - bath_energy_diff);
}

DeviationReport deviation_inequalities(const otm::ThermalModel& m,
                                       const otm::GuessedEnsemble& g) {
  require_common_beta(m, "deviation_inequalities");
  const double beta = m.beta_s;
  const TpmDistribution dist = build_tpm_distribution(m);

  const double w_guessed_mean = g.mean_guessed_work();
  double lhs1 = 0.0;
  for (const auto& tr : dist.trajectories)
    lhs1 += tr.probability * std::exp(-beta * (tr.work - w_guessed_mean));

  const double w_exact_mean = mean_work(dist);
  double lhs2 = 0.0;
  for (const auto& rec : g.outcomes) {
    const double w_tilde = rec.delta_e_tilde - g.guessed_heat;
    lhs2 += rec.prob_initial * std::exp(-beta * (w_tilde - w_exact_mean));
  }

  DeviationReport rep;
  rep.lhs_exact_around_guessed = lhs1;
  rep.lhs_guessed_around_exact = lhs2;
  rep.bound_full = std::exp(g.relative_entropy_full);
  rep.product = lhs1 * lhs2;
  rep.ineq1_ok = lhs1 >= std::exp(g.relative_entropy_full) - 1e-9;
  rep.ineq2_ok = lhs2 >= std::exp(-g.relative_entropy_full) - 1e-9;
  rep.product_ok = rep.product >= 1.0 - 1e-9;
  return rep;
}

}  // namespace qotm::tpm
