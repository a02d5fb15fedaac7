// SPDX-License-Identifier: Apache-2.0
#include "qotm/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qotm::models {

using qcore::Complex;
using qcore::Matrix;
using qcore::Operator;
using qcore::ProtocolSegment;

namespace {

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

otm::ThermalModel two_qubit_dephasing_model(const TwoQubitDephasingParams& p) {
  if (!(p.beta > 0.0)) throw ParameterError("two_qubit_dephasing_model: beta must be > 0");
  if (p.t < 0.0) throw ParameterError("two_qubit_dephasing_model: t must be >= 0");

  Operator h_s({2}, p.omega_s * pauli_z());
  Operator h_b({2}, p.omega_b * pauli_z());
  Operator coupling = qcore::tensor(Operator({2}, pauli_z()), Operator({2}, p.j * pauli_x()));
  Matrix h_full = qcore::tensor(h_s, Operator::identity({2})).matrix() +
                  qcore::tensor(Operator::identity({2}), h_b).matrix() + coupling.matrix();

  qcore::Protocol protocol;
  if (p.t > 0.0)
    protocol = qcore::Protocol({ProtocolSegment{p.t, Operator({2, 2}, h_full)}});

  otm::ThermalModel m{1, std::move(protocol), h_s, h_s, h_b, p.beta, p.beta};
  m.validate();
  return m;
}

double two_qubit_analytic_heat(const TwoQubitDephasingParams& p) {
  return two_qubit_analytic_heat(p, p.beta);
}

double two_qubit_analytic_heat(const TwoQubitDephasingParams& p, double beta_bath) {
  const double omega2 = p.j * p.j + p.omega_b * p.omega_b;
  if (omega2 == 0.0) return 0.0;
  const double s = std::sin(p.t * std::sqrt(omega2));
  return -2.0 * p.j * p.j * p.omega_b * std::tanh(beta_bath * p.omega_b) * s * s / omega2;
}

double two_qubit_analytic_relative_entropy(const TwoQubitDephasingParams& p) {
  return -p.beta * two_qubit_analytic_heat(p);
}

// ---------------------------------------------------------------------------
// Spin-boson
// ---------------------------------------------------------------------------

namespace {

// Truncated lowering operator on one mode.
Matrix lowering(int n_levels) {
  Matrix a = Matrix::Zero(n_levels, n_levels);
  for (int n = 1; n < n_levels; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

struct BathOperators {
  std::vector<int> dims;               // one entry per mode
  std::vector<Matrix> lower;           // a_k embedded on the full bath space
  Matrix h_b;                          // sum_k omega_k a_k† a_k
};

BathOperators build_bath(const SpinBosonParams& p) {
  if (p.modes.empty()) throw ParameterError("spin-boson model needs at least one mode");
  if (p.fock_cutoff < 2) throw ParameterError("fock_cutoff must be >= 2");
  for (const auto& mode : p.modes)
    if (!(mode.omega > 0.0)) throw ParameterError("mode frequencies must be > 0");

  const int n_modes = static_cast<int>(p.modes.size());
  const int n = p.fock_cutoff;
  BathOperators bath;
  bath.dims.assign(n_modes, n);

  int d_bath = 1;
  for (int k = 0; k < n_modes; ++k) d_bath *= n;
  bath.h_b = Matrix::Zero(d_bath, d_bath);

  const Matrix a = lowering(n);
  const Matrix identity_n = Matrix::Identity(n, n);
  for (int k = 0; k < n_modes; ++k) {
    Matrix op = Matrix::Identity(1, 1);
    for (int j = 0; j < n_modes; ++j) {
      const Matrix& factor = (j == k) ? a : identity_n;
      Matrix next(op.rows() * n, op.cols() * n);
      for (int r = 0; r < op.rows(); ++r)
        for (int c = 0; c < op.cols(); ++c)
          next.block(r * n, c * n, n, n) = op(r, c) * factor;
      op = std::move(next);
    }
    bath.h_b += p.modes[k].omega * (op.adjoint() * op);
    bath.lower.push_back(std::move(op));
  }
  return bath;
}

void enforce_cutoff(const SpinBosonParams& p) {
  std::ostringstream problems;
  for (size_t k = 0; k < p.modes.size(); ++k) {
    const auto& mode = p.modes[k];
    const double tail = std::exp(-p.beta * mode.omega * p.fock_cutoff);
    const double displacement = std::abs(magnus_mode_amplitude(mode, p.t)) * p.t;
    if (tail > 1e-10 || displacement > 0.3 * std::sqrt(double(p.fock_cutoff)))
      problems << " mode " << k << " (tail " << tail << ", displacement " << displacement
               << ")";
  }
  const std::string s = problems.str();
  if (!s.empty()) {
    std::ostringstream os;
    os << "spin_boson_model: fock_cutoff " << p.fock_cutoff
       << " insufficient for:" << s << "; suggested cutoff " << suggest_fock_cutoff(p);
    throw ParameterError(os.str());
  }
}

otm::ThermalModel assemble_spin_boson(const SpinBosonParams& p, const Operator& generator_full,
                                      const BathOperators& bath) {
  Operator h_s({2}, 0.5 * p.omega0 * pauli_z());
  Operator h_b(bath.dims, bath.h_b);

  qcore::Protocol protocol;
  if (p.t > 0.0) protocol = qcore::Protocol({ProtocolSegment{p.t, generator_full}});

  otm::ThermalModel m{1, std::move(protocol), h_s, h_s, std::move(h_b), p.beta, p.beta};
  m.validate();
  return m;
}

}  // namespace

std::complex<double> magnus_mode_amplitude(const BosonMode& mode, double t) {
  const double half = 0.5 * mode.omega * t;
  return mode.g * sinc(half) * std::exp(Complex(0.0, -half));
}

double magnus_mode_phase(const BosonMode& mode, double t) {
  return std::norm(mode.g) / mode.omega * (1.0 - sinc(mode.omega * t));
}

qcore::Operator magnus_generator(const SpinBosonParams& p) {
  if (!(p.t > 0.0)) throw ParameterError("magnus_generator: t must be > 0");
  const BathOperators bath = build_bath(p);
  const int d_bath = static_cast<int>(bath.h_b.rows());

  Matrix coupling = Matrix::Zero(d_bath, d_bath);
  double phase = 0.0;
  for (size_t k = 0; k < p.modes.size(); ++k) {
    const Complex gk = magnus_mode_amplitude(p.modes[k], p.t);
    coupling += gk * bath.lower[k] + std::conj(gk) * bath.lower[k].adjoint();
    phase += magnus_mode_phase(p.modes[k], p.t);
  }

  std::vector<int> dims{2};
  dims.insert(dims.end(), bath.dims.begin(), bath.dims.end());
  Matrix h0 = qcore::tensor(Operator({2}, pauli_z()), Operator(bath.dims, coupling)).matrix();
  h0 -= phase * Matrix::Identity(2 * d_bath, 2 * d_bath);
  return Operator(std::move(dims), std::move(h0));
}

otm::ThermalModel spin_boson_model(const SpinBosonParams& p, CutoffPolicy policy) {
  if (!(p.beta > 0.0)) throw ParameterError("spin_boson_model: beta must be > 0");
  if (p.t < 0.0) throw ParameterError("spin_boson_model: t must be >= 0");
  if (policy == CutoffPolicy::enforce) enforce_cutoff(p);
  const BathOperators bath = build_bath(p);
  if (p.t == 0.0) return assemble_spin_boson(p, Operator::identity({2}), bath);
  return assemble_spin_boson(p, magnus_generator(p), bath);
}

otm::ThermalModel spin_boson_model_lab_frame(const SpinBosonParams& p, CutoffPolicy policy) {
  if (!(p.beta > 0.0)) throw ParameterError("spin_boson_model_lab_frame: beta must be > 0");
  if (p.t < 0.0) throw ParameterError("spin_boson_model_lab_frame: t must be >= 0");
  if (policy == CutoffPolicy::enforce) enforce_cutoff(p);
  const BathOperators bath = build_bath(p);
  const int d_bath = static_cast<int>(bath.h_b.rows());

  Matrix coupling = Matrix::Zero(d_bath, d_bath);
  for (size_t k = 0; k < p.modes.size(); ++k)
    coupling += p.modes[k].g * bath.lower[k] +
                std::conj(p.modes[k].g) * bath.lower[k].adjoint();

  std::vector<int> dims{2};
  dims.insert(dims.end(), bath.dims.begin(), bath.dims.end());
  Matrix h_full =
      qcore::tensor(Operator({2}, 0.5 * p.omega0 * pauli_z()), Operator(bath.dims, Matrix::Identity(d_bath, d_bath)))
          .matrix() +
      qcore::tensor(Operator({2}, Matrix::Identity(2, 2)), Operator(bath.dims, bath.h_b)).matrix() +
      qcore::tensor(Operator({2}, pauli_z()), Operator(bath.dims, coupling)).matrix();

  return assemble_spin_boson(p, Operator(dims, std::move(h_full)), bath);
}

int suggest_fock_cutoff(const SpinBosonParams& p) {
  int cutoff = 2;
  for (const auto& mode : p.modes) {
    // thermal tail: e^{-beta omega N} <= 1e-10
    const int n_tail = static_cast<int>(std::ceil(-std::log(1e-10) / (p.beta * mode.omega)));
    // displacement bound uses |G| <= |g| (sinc <= 1)
    const double disp = std::abs(mode.g) * p.t;
    const int n_disp = static_cast<int>(std::ceil((disp / 0.3) * (disp / 0.3)));
    cutoff = std::max({cutoff, n_tail, n_disp});
  }
  return cutoff;
}

double spin_boson_analytic_heat(const SpinBosonParams& p) {
  double heat = 0.0;
  for (const auto& mode : p.modes) {
    const double half_omega = 0.5 * mode.omega;
    const double amp = std::sin(half_omega * p.t) / half_omega;
    heat -= mode.omega * std::norm(mode.g) * amp * amp;
  }
  return heat;
}

double spin_boson_analytic_heat_current(const std::vector<BosonMode>& modes, double t) {
  double current = 0.0;
  for (const auto& mode : modes) current -= 2.0 * std::norm(mode.g) * std::sin(mode.omega * t);
  return current;
}

double magnus_vs_trotter_residual(const SpinBosonParams& p, int n_steps) {
  if (n_steps < 1) throw ParameterError("magnus_vs_trotter_residual: n_steps must be >= 1");
  const BathOperators bath = build_bath(p);
  const int d_bath = static_cast<int>(bath.h_b.rows());
  std::vector<int> dims{2};
  dims.insert(dims.end(), bath.dims.begin(), bath.dims.end());

  const Operator gen = magnus_generator(p);
  const Matrix u_magnus = qcore::expm_unitary(gen, p.t).matrix();

  // Midpoint product integrator of H(s) = sz ⊗ sum_k (g a e^{-iws} + h.c.).
  const double dt = p.t / n_steps;
  Matrix u_trotter = Matrix::Identity(2 * d_bath, 2 * d_bath);
  for (int step = 0; step < n_steps; ++step) {
    const double s = (step + 0.5) * dt;
    Matrix coupling = Matrix::Zero(d_bath, d_bath);
    for (size_t k = 0; k < p.modes.size(); ++k) {
      const Complex phase = std::exp(Complex(0.0, -p.modes[k].omega * s));
      coupling += p.modes[k].g * phase * bath.lower[k] +
                  std::conj(p.modes[k].g * phase) * bath.lower[k].adjoint();
    }
    const Operator h_step(dims, qcore::tensor(Operator({2}, pauli_z()),
                                              Operator(bath.dims, coupling))
                                    .matrix());
    u_trotter = (qcore::expm_unitary(h_step, dt).matrix() * u_trotter).eval();
  }

  // Thermal weighting: only the occupied corner of the Fock space matters.
  const thermo::GibbsState tau_b = thermo::gibbs(Operator(bath.dims, bath.h_b), p.beta);
  const qcore::Spectrum sb = qcore::eig_hermitian(tau_b.state.op());
  Matrix sqrt_tau = sb.eigenvectors *
                    sb.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal().toDenseMatrix().cast<Complex>() *
                    sb.eigenvectors.adjoint();
  const Matrix weight =
      qcore::tensor(Operator::identity({2}), Operator(bath.dims, std::move(sqrt_tau))).matrix();
  return ((u_magnus - u_trotter) * weight).norm();
}

// ---------------------------------------------------------------------------
// Random models
// ---------------------------------------------------------------------------

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = std::max(uniform(), 1e-300), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  // Gaussian Hermitian matrix, spectrum O(1) independent of dimension.
  Matrix gue(int d) {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = Complex(normal(), normal());
    return (g + g.adjoint()) / (2.0 * std::sqrt(double(d)));
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

otm::ThermalModel random_model(std::uint64_t seed, int d_system, int d_bath, int n_segments,
                               bool time_dependent_system, double interaction_scale) {
  if (d_system < 2) throw DimensionError("random_model: d_system must be >= 2");
  if (d_bath < 1) throw DimensionError("random_model: d_bath must be >= 1");
  const int d_total = d_system * d_bath;
  if (d_total < 2 || d_total > 256)
    throw DimensionError("random_model: total dimension must lie in [2, 256]");
  if (n_segments < 1) throw ParameterError("random_model: n_segments must be >= 1");

  Sampler rng(seed);
  const Matrix h_b = rng.gue(d_bath);
  const Matrix h_s0 = rng.gue(d_system);
  const double beta = 0.25 + 1.75 * rng.uniform();

  const Operator id_s = Operator::identity({d_system});
  const Operator id_b = Operator::identity({d_bath});

  std::vector<ProtocolSegment> segments;
  Matrix h_s_last = h_s0;
  for (int j = 0; j < n_segments; ++j) {
    const Matrix h_s_j = (time_dependent_system && j > 0) ? rng.gue(d_system) : h_s0;
    const Matrix v = interaction_scale * rng.gue(d_total);
    const double duration = 0.3 + 0.9 * rng.uniform();
    Matrix gen = qcore::tensor(Operator({d_system}, h_s_j), id_b).matrix() +
                 qcore::tensor(id_s, Operator({d_bath}, h_b)).matrix() + v;
    segments.push_back(ProtocolSegment{duration, Operator({d_system, d_bath}, std::move(gen))});
    h_s_last = h_s_j;
  }

  otm::ThermalModel m{1,
                      qcore::Protocol(std::move(segments)),
                      Operator({d_system}, h_s0),
                      Operator({d_system}, h_s_last),
                      Operator({d_bath}, h_b),
                      beta,
                      beta};
  m.validate();
  return m;
}

ClosedSystemReport closed_system_reduction_check(const otm::ThermalModel& m) {
  m.validate();
  const int ds = m.d_system(), db = m.d_bath();

  // Split each generator as H_S ⊗ 1 + 1 ⊗ H_B; any remainder is interaction.
  std::vector<ProtocolSegment> system_segments;
  for (const auto& seg : m.protocol.segments()) {
    const Matrix traced = qcore::partial_trace_block(seg.generator.matrix(), ds, db);
    const Matrix h_s_j = (traced - (m.h_b.matrix().trace() / double(db)) *
                                       Matrix::Identity(ds, ds)) /
                         double(db);
    const Matrix rebuilt =
        qcore::tensor(Operator(m.h_s_initial.dims(), h_s_j), Operator::identity(m.h_b.dims()))
            .matrix() +
        qcore::tensor(Operator::identity(m.h_s_initial.dims()), m.h_b).matrix();
    if ((seg.generator.matrix() - rebuilt).cwiseAbs().maxCoeff() > 1e-10)
      throw ParameterError("closed_system_reduction_check: interaction is not zero");
    system_segments.push_back(ProtocolSegment{seg.duration, Operator(m.h_s_initial.dims(), h_s_j)});
  }

  const Matrix u_s = system_segments.empty()
                         ? Matrix::Identity(ds, ds).eval()
                         : qcore::propagator(qcore::Protocol(system_segments)).matrix();

  // System-only guessed state.
  const qcore::Spectrum spec0 = qcore::eig_hermitian(m.h_s_initial);
  std::vector<Matrix> evolved;
  std::vector<double> final_energies;
  for (int i = 0; i < ds; ++i) {
    Matrix state = (u_s * spec0.eigenvectors.col(i)) * (u_s * spec0.eigenvectors.col(i)).adjoint();
    final_energies.push_back(qcore::trace_product(m.h_s_final.matrix(), state).real());
    evolved.push_back(std::move(state));
  }
  const double e_min = *std::min_element(final_energies.begin(), final_energies.end());
  double z = 0.0;
  std::vector<double> weights(final_energies.size());
  for (size_t i = 0; i < final_energies.size(); ++i) {
    weights[i] = std::exp(-m.beta_s * (final_energies[i] - e_min));
    z += weights[i];
  }
  Matrix rho_closed = Matrix::Zero(ds, ds);
  for (size_t i = 0; i < evolved.size(); ++i) rho_closed += (weights[i] / z) * evolved[i];

  const otm::GuessedEnsemble g = otm::build_guessed_ensemble(m);

  ClosedSystemReport rep;
  rep.heat_abs = std::abs(g.guessed_heat);
  rep.work_minus_delta_e = std::abs(g.mean_guessed_work() - otm::mean_delta_e(g.outcomes));
  rep.d_full_minus_reduced = std::abs(g.relative_entropy_full - g.relative_entropy_reduced);
  rep.rho_residual = (g.rho_s_tilde.matrix() - rho_closed).cwiseAbs().maxCoeff();

  const double lhs = otm::exp_average_delta_e(g.outcomes, m.beta_s);
  const double rhs = std::exp(-m.beta_s * otm::delta_f_s(m)) *
                     std::exp(-g.relative_entropy_reduced);
  rep.jarzynski_residual = std::abs(lhs - rhs) / rhs;

  rep.ok = rep.heat_abs <= 1e-10 && rep.work_minus_delta_e <= 1e-10 &&
           rep.d_full_minus_reduced <= 1e-9 && rep.rho_residual <= 1e-10 &&
           rep.jarzynski_residual <= 1e-8;
  return rep;
}

// ---------------------------------------------------------------------------
// Ohmic sampling
// ---------------------------------------------------------------------------

std::vector<BosonMode> sample_ohmic_modes(const OhmicSpectrum& s) {
  if (s.n_modes < 1) throw ParameterError("sample_ohmic_modes: n_modes must be >= 1");
  if (!(s.omega_c > 0.0)) throw ParameterError("sample_ohmic_modes: omega_c must be > 0");
  const double omega_max = s.omega_max_factor * s.omega_c;
  const double d_omega = omega_max / s.n_modes;
  std::vector<BosonMode> modes;
  modes.reserve(s.n_modes);
  for (int k = 0; k < s.n_modes; ++k) {
    const double omega = (k + 0.5) * d_omega;  // midpoint rule
    // J(w) = eta w e^{-w/w_c} with J(w) = sum |g_k|^2 w delta(w - w_k):
    // |g_k|^2 = J(w_k) dw / w_k.
    const double g2 = s.coupling * std::exp(-omega / s.omega_c) * d_omega;
    modes.push_back(BosonMode{omega, std::sqrt(g2)});
  }
  return modes;
}

DecayReport ohmic_heat_current_decay_check(const OhmicSpectrum& s) {
  const std::vector<BosonMode> modes = sample_ohmic_modes(s);
  double peak = 0.0;
  const int samples = 2000;
  for (int i = 1; i <= samples; ++i) {
    const double t = (5.0 / s.omega_c) * i / samples;
    peak = std::max(peak, std::abs(spin_boson_analytic_heat_current(modes, t)));
  }
  const double late = std::abs(spin_boson_analytic_heat_current(modes, 50.0 / s.omega_c));
  return DecayReport{peak, late, late <= 0.1 * peak};
}

}  // namespace qotm::models
