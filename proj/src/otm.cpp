// SPDX-License-Identifier: Apache-2.0
#include "qotm/otm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qotm::otm {

using qcore::Complex;
using qcore::Matrix;
using qcore::Operator;

std::vector<int> ThermalModel::full_dims() const {
  std::vector<int> dims = h_s_initial.dims();
  dims.insert(dims.end(), h_b.dims().begin(), h_b.dims().end());
  return dims;
}

qcore::Operator ThermalModel::propagator_or_identity() const {
  if (protocol.empty()) return Operator::identity(full_dims());
  Operator u = qcore::propagator(protocol);
  if (u.dim() != d_total())
    throw DimensionError("ThermalModel: protocol generators do not act on system ⊗ bath");
  return Operator(full_dims(), u.matrix());
}

void ThermalModel::validate() const {
  if (n_system_factors != static_cast<int>(h_s_initial.dims().size()))
    throw DimensionError("ThermalModel: n_system_factors and h_s_initial dims disagree");
  if (h_s_initial.dim() != h_s_final.dim())
    throw DimensionError("ThermalModel: initial/final system Hamiltonian dims differ");
  if (!h_s_initial.is_hermitian() || !h_s_final.is_hermitian() || !h_b.is_hermitian())
    throw ValidationError("ThermalModel: Hamiltonians must be Hermitian");
  if (!(beta_s > 0.0) || !(beta_b > 0.0))
    throw ParameterError("ThermalModel: inverse temperatures must be > 0");
  if (!protocol.empty() && protocol.segments().front().generator.dim() != d_total())
    throw DimensionError("ThermalModel: protocol generators must act on the full space");
}

namespace {

// Shift-stable weights e^{-beta e_i} / sum_j e^{-beta e_j}; also returns
// ln(sum e^{-beta e}).
std::pair<std::vector<double>, double> softmax_weights(const std::vector<double>& energies,
                                                       double beta) {
  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> w(energies.size());
  double z_shifted = 0.0;
  for (size_t i = 0; i < energies.size(); ++i) {
    w[i] = std::exp(-beta * (energies[i] - e_min));
    z_shifted += w[i];
  }
  for (double& x : w) x /= z_shifted;
  return {std::move(w), -beta * e_min + std::log(z_shifted)};
}

bool has_degenerate_cluster(const qcore::Spectrum& s, double h_max_abs) {
  const double tol = 1e-9 * h_max_abs;
  for (int i = 1; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues(i) - s.eigenvalues(i - 1) < tol) return true;
  return false;
}

}  // namespace

std::vector<OutcomeRecord> build_outcome_ensemble(const ThermalModel& m) {
  m.validate();
  const qcore::Spectrum spec0 = qcore::eig_hermitian(m.h_s_initial);
  const thermo::GibbsState tau_b = thermo::gibbs(m.h_b, m.beta_b);
  const Operator u = m.propagator_or_identity();

  std::vector<double> epsilons(spec0.eigenvalues.data(),
                               spec0.eigenvalues.data() + spec0.eigenvalues.size());
  const auto [probs, log_z0] = softmax_weights(epsilons, m.beta_s);
  (void)log_z0;

  std::vector<OutcomeRecord> ensemble;
  ensemble.reserve(epsilons.size());
  for (size_t i = 0; i < epsilons.size(); ++i) {
    const Matrix projector =
        spec0.eigenvectors.col(i) * spec0.eigenvectors.col(i).adjoint();
    Matrix evolved = qcore::channel_apply_raw(u, tau_b.state.matrix(), projector);
    qcore::DensityOperator state(Operator(m.h_s_initial.dims(), std::move(evolved)));
    const double e_final = thermo::energy_expectation(m.h_s_final, state);
    ensemble.push_back(OutcomeRecord{epsilons[i], probs[i], std::move(state), e_final,
                                     e_final - epsilons[i]});
  }
  return ensemble;
}

double exp_average_delta_e(const std::vector<OutcomeRecord>& ensemble, double beta_s) {
  if (ensemble.empty()) throw ValidationError("exp_average_delta_e: empty ensemble");
  double acc = 0.0;
  for (const auto& rec : ensemble)
    acc += rec.prob_initial * std::exp(-beta_s * rec.delta_e_tilde);
  return acc;
}

double mean_delta_e(const std::vector<OutcomeRecord>& ensemble) {
  double acc = 0.0;
  for (const auto& rec : ensemble) acc += rec.prob_initial * rec.delta_e_tilde;
  return acc;
}

double GuessedEnsemble::mean_guessed_work() const {
  return mean_delta_e(outcomes) - guessed_heat;
}

GuessedEnsemble build_guessed_ensemble(const ThermalModel& m) {
  m.validate();
  const qcore::Spectrum spec0 = qcore::eig_hermitian(m.h_s_initial);
  const thermo::GibbsState tau_b = thermo::gibbs(m.h_b, m.beta_b);
  const Operator u = m.propagator_or_identity();
  const int ds = m.d_system(), db = m.d_bath(), dt = m.d_total();

  std::vector<double> epsilons(spec0.eigenvalues.data(),
                               spec0.eigenvalues.data() + spec0.eigenvalues.size());
  const auto [probs, log_z0] = softmax_weights(epsilons, m.beta_s);
  (void)log_z0;

  // Evolved joint states U (|eps><eps| ⊗ tau_B) U†, kept on the full space so
  // the guessed state can be assembled from them.
  std::vector<Matrix> joint_states;
  joint_states.reserve(epsilons.size());
  std::vector<OutcomeRecord> ensemble;
  ensemble.reserve(epsilons.size());
  for (size_t i = 0; i < epsilons.size(); ++i) {
    Matrix joint(dt, dt);
    for (int r = 0; r < ds; ++r)
      for (int c = 0; c < ds; ++c)
        joint.block(r * db, c * db, db, db) =
            spec0.eigenvectors(r, i) * std::conj(spec0.eigenvectors(c, i)) *
            tau_b.state.matrix();
    Matrix evolved = u.matrix() * joint * u.matrix().adjoint();
    qcore::DensityOperator reduced(
        Operator(m.h_s_initial.dims(), qcore::partial_trace_block(evolved, ds, db)));
    const double e_final = thermo::energy_expectation(m.h_s_final, reduced);
    ensemble.push_back(OutcomeRecord{epsilons[i], probs[i], std::move(reduced), e_final,
                                     e_final - epsilons[i]});
    joint_states.push_back(std::move(evolved));
  }

  std::vector<double> final_energies;
  final_energies.reserve(ensemble.size());
  for (const auto& rec : ensemble) final_energies.push_back(rec.final_mean_energy);
  const auto [p_guess, log_z_tilde] = softmax_weights(final_energies, m.beta_s);

  Matrix theta = Matrix::Zero(dt, dt);
  for (size_t i = 0; i < joint_states.size(); ++i) theta += p_guess[i] * joint_states[i];
  qcore::DensityOperator theta_sb(Operator(m.full_dims(), std::move(theta)));
  qcore::DensityOperator rho_s_tilde(
      qcore::partial_trace_bath(theta_sb.op(), m.n_system_factors));

  const Operator h_b_full = qcore::tensor(
      Operator::identity(m.h_s_initial.dims()), m.h_b);
  const double heat = thermo::energy_expectation(m.h_b, tau_b.state) -
                      thermo::energy_expectation(h_b_full, theta_sb);

  const thermo::GibbsState tau_s_final = thermo::gibbs(m.h_s_final, m.beta_s);
  const qcore::DensityOperator product_gibbs = qcore::tensor(tau_s_final.state, tau_b.state);
  const double d_full = thermo::relative_entropy(theta_sb, product_gibbs);
  const double d_reduced = thermo::relative_entropy(rho_s_tilde, tau_s_final.state);

  return GuessedEnsemble{std::move(ensemble),
                         std::exp(log_z_tilde),
                         log_z_tilde,
                         -log_z_tilde / m.beta_s,
                         p_guess,
                         std::move(theta_sb),
                         std::move(rho_s_tilde),
                         heat,
                         d_full,
                         d_reduced,
                         has_degenerate_cluster(spec0, m.h_s_initial.max_abs())};
}

double delta_f_s(const ThermalModel& m) {
  return thermo::gibbs(m.h_s_final, m.beta_s).free_energy -
         thermo::gibbs(m.h_s_initial, m.beta_s).free_energy;
}

double guessed_heat_identity_residual(const GuessedEnsemble& g, const ThermalModel& m) {
  if (m.beta_s != m.beta_b)
    throw ParameterError(
        "guessed_heat_identity_residual: two-temperature model; use theorem2_residual");
  const double log_z_s_final = thermo::gibbs(m.h_s_final, m.beta_s).log_partition_function;
  return std::abs(g.relative_entropy_full + (g.log_z_tilde - log_z_s_final) +
                  m.beta_s * g.guessed_heat);
}

namespace {

// Shared single/two-temperature Jarzynski evaluation; dbeta = beta_b - beta_s
// is exactly 0.0 on the theorem-1 path, making the two reports bitwise equal.
TheoremReport jarzynski_guessed_work_report(const GuessedEnsemble& g, const ThermalModel& m) {
  const double beta = m.beta_s;
  const double dbeta = m.beta_b - m.beta_s;
  const double lhs =
      std::exp(beta * g.guessed_heat) * exp_average_delta_e(g.outcomes, beta);
  const double rhs = std::exp(-beta * delta_f_s(m)) *
                     std::exp(-g.relative_entropy_full) *
                     std::exp(-dbeta * g.guessed_heat);
  return TheoremReport{lhs, rhs, std::abs(lhs - rhs) / rhs};
}

double work_bound_gap(const GuessedEnsemble& g, const ThermalModel& m) {
  const double dbeta = m.beta_b - m.beta_s;
  return g.mean_guessed_work() - delta_f_s(m) - g.relative_entropy_reduced / m.beta_s -
         (dbeta / m.beta_s) * g.guessed_heat;
}

}  // namespace

TheoremReport theorem1_residual(const GuessedEnsemble& g, const ThermalModel& m) {
  if (m.beta_s != m.beta_b)
    throw ParameterError("theorem1_residual: two-temperature model; use theorem2_residual");
  return jarzynski_guessed_work_report(g, m);
}

WorkGapReport max_guessed_work_gap(const GuessedEnsemble& g, const ThermalModel& m) {
  if (m.beta_s != m.beta_b)
    throw ParameterError("max_guessed_work_gap: two-temperature model; use theorem2_residual");
  const double w = g.mean_guessed_work();
  const double df = delta_f_s(m);
  return WorkGapReport{w - df - g.relative_entropy_full / m.beta_s,
                       w - df - g.relative_entropy_reduced / m.beta_s};
}

Theorem2Report theorem2_residual(const GuessedEnsemble& g, const ThermalModel& m) {
  const TheoremReport r = jarzynski_guessed_work_report(g, m);
  return Theorem2Report{r.lhs, r.rhs, r.residual, work_bound_gap(g, m)};
}

Theorem2Report theorem2_residual(const ThermalModel& m) {
  return theorem2_residual(build_guessed_ensemble(m), m);
}

MaxEntropyReport max_entropy_property_check(const GuessedEnsemble& g, const ThermalModel& m,
                                            int n_perturbations, std::uint64_t seed) {
  const int n = static_cast<int>(g.outcomes.size());
  if (n < 3) return MaxEntropyReport{true, true, 0, 0.0};

  // Rebuild the per-outcome joint terms so perturbed guessed states can be
  // assembled without re-running the channel.
  const qcore::Spectrum spec0 = qcore::eig_hermitian(m.h_s_initial);
  const thermo::GibbsState tau_b = thermo::gibbs(m.h_b, m.beta_b);
  const Operator u = m.propagator_or_identity();
  const int ds = m.d_system(), db = m.d_bath(), dt = m.d_total();
  std::vector<Matrix> terms;
  terms.reserve(n);
  for (int i = 0; i < n; ++i) {
    Matrix joint(dt, dt);
    for (int r = 0; r < ds; ++r)
      for (int c = 0; c < ds; ++c)
        joint.block(r * db, c * db, db, db) =
            spec0.eigenvectors(r, i) * std::conj(spec0.eigenvectors(c, i)) *
            tau_b.state.matrix();
    terms.push_back(u.matrix() * joint * u.matrix().adjoint());
  }

  const double s_base = thermo::von_neumann_entropy(g.theta_sb);

  // Orthonormal basis of the constraint normals: the all-ones direction and
  // the component of the final-energy vector orthogonal to it.
  Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  Eigen::VectorXd energy(n);
  for (int i = 0; i < n; ++i) energy(i) = g.outcomes[i].final_mean_energy;
  Eigen::VectorXd e_perp = energy - ones.dot(energy) * ones;
  const bool energy_constraint_active = e_perp.norm() > 1e-12 * std::max(1.0, energy.norm());
  if (energy_constraint_active) e_perp.normalize();

  std::mt19937_64 eng(seed);
  auto uniform = [&eng]() { return (eng() >> 11) * 0x1.0p-53; };

  MaxEntropyReport report{false, true, 0, 0.0};
  for (int k = 0; k < n_perturbations; ++k) {
    Eigen::VectorXd dp(n);
    for (int i = 0; i < n; ++i) {
      // Box-Muller; stdlib distributions are implementation-defined.
      const double u1 = std::max(uniform(), 1e-300), u2 = uniform();
      dp(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    dp -= ones.dot(dp) * ones;
    if (energy_constraint_active) dp -= e_perp.dot(dp) * e_perp;
    if (dp.norm() < 1e-12) continue;

    // Step halfway to the nearest simplex face so p + dp stays strictly positive.
    double scale = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      if (dp(i) < 0.0) scale = std::min(scale, g.p_guess[i] / -dp(i));
    dp *= 0.5 * scale;

    Matrix theta = Matrix::Zero(dt, dt);
    for (int i = 0; i < n; ++i) theta += (g.p_guess[i] + dp(i)) * terms[i];
    const double s_pert = thermo::von_neumann_entropy(
        qcore::DensityOperator(Operator(m.full_dims(), std::move(theta))));
    report.worst_increase = std::max(report.worst_increase, s_pert - s_base);
    ++report.n_tested;
  }
  report.ok = report.worst_increase <= 1e-9;
  return report;
}

double stein_asymptotic_rate(const GuessedEnsemble& g) {
  return -g.relative_entropy_full;
}

double stein_consistency_residual(const GuessedEnsemble& g, const ThermalModel& m) {
  const double beta = m.beta_s;
  const double lhs = std::exp(beta * g.guessed_heat) *
                     exp_average_delta_e(g.outcomes, beta) *
                     std::exp(beta * delta_f_s(m));
  const double rhs = std::exp(stein_asymptotic_rate(g));
  return std::abs(lhs - rhs) / rhs;
}

}  // namespace qotm::otm
