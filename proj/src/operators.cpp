// SPDX-License-Identifier: Apache-2.0
#include "qotm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qotm::qcore {

namespace {

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("tensor-factor dimensions must be positive");
    p *= d;
  }
  return p;
}

std::string shape_str(const std::vector<int>& dims) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << ")";
  return os.str();
}

}  // namespace

Operator::Operator(std::vector<int> dims, Matrix data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  const int d = product(dims_);
  if (data_.rows() != d || data_.cols() != d) {
    std::ostringstream os;
    os << "matrix is " << data_.rows() << "x" << data_.cols()
       << " but factor dims " << shape_str(dims_) << " require " << d << "x" << d;
    throw DimensionError(os.str());
  }
  if (!data_.allFinite()) throw ValidationError("operator entries must be finite");
}

Operator Operator::identity(std::vector<int> dims) {
  const int d = product(dims);
  return Operator(std::move(dims), Matrix::Identity(d, d));
}

Operator Operator::zero(std::vector<int> dims) {
  const int d = product(dims);
  return Operator(std::move(dims), Matrix::Zero(d, d));
}

bool Operator::is_hermitian(double tol) const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Complex trace_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw DimensionError("trace_product: incompatible shapes");
  return a.transpose().cwiseProduct(b).sum();
}

Operator tensor(const Operator& a, const Operator& b) {
  const int da = a.dim(), db = b.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return Operator(std::move(dims), std::move(out));
}

Matrix partial_trace_block(const Matrix& m, int d_system, int d_bath) {
  if (m.rows() != static_cast<long>(d_system) * d_bath || m.rows() != m.cols())
    throw DimensionError("partial_trace_block: matrix side must equal d_system*d_bath");
  Matrix out = Matrix::Zero(d_system, d_system);
  for (int i = 0; i < d_system; ++i)
    for (int j = 0; j < d_system; ++j)
      out(i, j) = m.block(i * d_bath, j * d_bath, d_bath, d_bath).trace();
  return out;
}

Operator partial_trace_bath(const Operator& o, int n_system_factors) {
  const auto& dims = o.dims();
  if (n_system_factors < 1 || n_system_factors >= static_cast<int>(dims.size()))
    throw DimensionError("partial_trace_bath: need 1 <= n_system_factors < factor count");
  std::vector<int> sys_dims(dims.begin(), dims.begin() + n_system_factors);
  int ds = 1, db = 1;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    (i < n_system_factors ? ds : db) *= dims[i];
  return Operator(std::move(sys_dims), partial_trace_block(o.matrix(), ds, db));
}

Spectrum eig_hermitian(const Operator& h) {
  if (!h.is_hermitian())
    throw ValidationError("eig_hermitian: operator is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      ((h.matrix() + h.matrix().adjoint()) * 0.5).eval());
  if (solver.info() != Eigen::Success)
    throw ValidationError("eig_hermitian: eigensolver failed to converge");

  const int n = h.dim();
  RealVector evals = solver.eigenvalues();
  Matrix evecs = solver.eigenvectors();

  // Gauge fix: largest-magnitude component of each column made real-positive.
  for (int c = 0; c < n; ++c) {
    int imax = 0;
    double best = -1.0;
    for (int r = 0; r < n; ++r) {
      const double mag = std::abs(evecs(r, c));
      if (mag > best) {
        best = mag;
        imax = r;
      }
    }
    if (best > 0.0) evecs.col(c) *= std::conj(evecs(imax, c)) / best;
  }

  // Deterministic order inside numerically degenerate clusters.
  const double gap_tol = 1e-9 * h.max_abs();
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && evals(end) - evals(end - 1) < gap_tol) ++end;
    if (end - start > 1) {
      std::vector<int> idx(end - start);
      std::iota(idx.begin(), idx.end(), start);
      auto lex_less = [&](int a, int b) {
        for (int r = 0; r < n; ++r) {
          const double ra = evecs(r, a).real(), rb = evecs(r, b).real();
          if (ra != rb) return ra < rb;
        }
        for (int r = 0; r < n; ++r) {
          const double ia = evecs(r, a).imag(), ib = evecs(r, b).imag();
          if (ia != ib) return ia < ib;
        }
        return false;
      };
      std::stable_sort(idx.begin(), idx.end(), lex_less);
      Matrix cols(n, end - start);
      RealVector vals(end - start);
      for (int k = 0; k < end - start; ++k) {
        cols.col(k) = evecs.col(idx[k]);
        vals(k) = evals(idx[k]);
      }
      evecs.middleCols(start, end - start) = cols;
      evals.segment(start, end - start) = vals;
    }
    start = end;
  }

  return Spectrum{std::move(evals), std::move(evecs)};
}

Operator expm_unitary(const Operator& h, double t) {
  const Spectrum s = eig_hermitian(h);
  const int n = h.dim();
  Vector phases(n);
  for (int i = 0; i < n; ++i)
    phases(i) = std::exp(Complex(0.0, -s.eigenvalues(i) * t));
  Matrix u = s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
  return Operator(h.dims(), std::move(u));
}

Protocol::Protocol(std::vector<ProtocolSegment> segments)
    : segments_(std::move(segments)) {
  for (const auto& seg : segments_) {
    if (!(seg.duration > 0.0))
      throw ValidationError("protocol segment durations must be > 0");
    if (!seg.generator.is_hermitian())
      throw ValidationError("protocol generators must be Hermitian");
    if (seg.generator.dim() != segments_.front().generator.dim())
      throw DimensionError("protocol generators must share one Hilbert space");
    total_time_ += seg.duration;
  }
}

Protocol Protocol::refined(int subdivisions) const {
  if (subdivisions < 1) throw ParameterError("refined: subdivisions must be >= 1");
  std::vector<ProtocolSegment> out;
  out.reserve(segments_.size() * subdivisions);
  for (const auto& seg : segments_)
    for (int k = 0; k < subdivisions; ++k)
      out.push_back({seg.duration / subdivisions, seg.generator});
  return Protocol(std::move(out));
}

Operator propagator(const Protocol& p) {
  if (p.empty()) throw ValidationError("propagator: protocol has no segments");
  const auto& segs = p.segments();
  Operator u = expm_unitary(segs.front().generator, segs.front().duration);
  for (size_t i = 1; i < segs.size(); ++i) {
    Operator step = expm_unitary(segs[i].generator, segs[i].duration);
    u = Operator(u.dims(), step.matrix() * u.matrix());
  }
  return u;
}

namespace {

void check_density_basics(const Operator& op) {
  if (!op.is_hermitian())
    throw ValidationError("density operator is not Hermitian within tolerance");
  const Complex tr = op.matrix().trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10)
    throw ValidationError("density operator trace differs from 1 beyond tolerance");
}

}  // namespace

DensityOperator::DensityOperator(Operator op) : op_(std::move(op)) {
  check_density_basics(op_);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      ((op_.matrix() + op_.matrix().adjoint()) * 0.5).eval(),
      Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10)
    throw ValidationError("density operator has an eigenvalue below -1e-10");
}

DensityOperator::DensityOperator(Operator op, Trusted) : op_(std::move(op)) {
  check_density_basics(op_);
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(tensor(a.op(), b.op()), DensityOperator::Trusted{});
}

Matrix channel_apply_raw(const Operator& u, const Matrix& bath, const Matrix& x) {
  const int db = static_cast<int>(bath.rows());
  const int ds = static_cast<int>(x.rows());
  if (u.dim() != ds * db)
    throw DimensionError("channel_apply_raw: u must act on system ⊗ bath");
  Matrix joint(ds * db, ds * db);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j)
      joint.block(i * db, j * db, db, db) = x(i, j) * bath;
  const Matrix evolved = u.matrix() * joint * u.matrix().adjoint();
  return partial_trace_block(evolved, ds, db);
}

DensityOperator apply_channel(const Operator& u, const DensityOperator& bath_state,
                              const DensityOperator& system_state) {
  Matrix out = channel_apply_raw(u, bath_state.matrix(), system_state.matrix());
  return DensityOperator(Operator(system_state.dims(), std::move(out)));
}

ChannelReport choi_cptp_check(const Operator& u, const DensityOperator& bath_state,
                              int d_system) {
  const int db = bath_state.dim();
  if (u.dim() != d_system * db)
    throw DimensionError("choi_cptp_check: u must act on system ⊗ bath");

  // Choi matrix C = sum_ij |i><j| ⊗ Phi(|i><j|).
  Matrix choi = Matrix::Zero(d_system * d_system, d_system * d_system);
  double trace_residual = 0.0;
  for (int i = 0; i < d_system; ++i)
    for (int j = 0; j < d_system; ++j) {
      Matrix unit = Matrix::Zero(d_system, d_system);
      unit(i, j) = 1.0;
      const Matrix mapped = channel_apply_raw(u, bath_state.matrix(), unit);
      choi.block(i * d_system, j * d_system, d_system, d_system) = mapped;
      const double expect = (i == j) ? 1.0 : 0.0;
      trace_residual = std::max(trace_residual, std::abs(mapped.trace() - Complex(expect, 0.0)));
    }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(((choi + choi.adjoint()) * 0.5).eval(),
                                               Eigen::EigenvaluesOnly);
  return ChannelReport{trace_residual <= 1e-9, solver.eigenvalues().minCoeff(),
                       trace_residual};
}

}  // namespace qotm::qcore
