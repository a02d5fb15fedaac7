// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qotm/errors.hpp"

namespace qotm::qcore {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Hermiticity tolerance shared by all structural checks (max-norm).
inline constexpr double kHermTol = 1e-10;

/// Dense operator on a finite tensor-product Hilbert space.
///
/// `dims` lists the tensor-factor dimensions in order (system factors first
/// by convention); the matrix side equals their product. Immutable after
/// construction.
class Operator {
 public:
  Operator(std::vector<int> dims, Matrix data);

  static Operator identity(std::vector<int> dims);
  static Operator zero(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  const Matrix& matrix() const { return data_; }

  double max_abs() const { return data_.cwiseAbs().maxCoeff(); }
  bool is_hermitian(double tol = kHermTol) const;

 private:
  std::vector<int> dims_;
  Matrix data_;
};

/// trace(a*b) without forming the product.
Complex trace_product(const Matrix& a, const Matrix& b);

/// Kronecker product; dims concatenate.
Operator tensor(const Operator& a, const Operator& b);

/// Trace out every factor after the first `n_system_factors`. Trace-preserving.
Operator partial_trace_bath(const Operator& o, int n_system_factors);

/// Eigensystem of a Hermitian operator with a deterministic gauge:
/// eigenvalues ascending; each eigenvector's largest-magnitude component made
/// real-positive; within numerically degenerate clusters (gap < 1e-9 * max|h|)
/// vectors are ordered lexicographically by real parts (imaginary tiebreak).
struct Spectrum {
  RealVector eigenvalues;   // ascending (up to degenerate-cluster reordering)
  Matrix eigenvectors;      // orthonormal columns, phase fixed
};

Spectrum eig_hermitian(const Operator& h);

/// exp(-i h t) for Hermitian h, via spectral decomposition (exactly unitary up
/// to eigensolver error).
Operator expm_unitary(const Operator& h, double t);

/// Piecewise-constant generator schedule; all generators Hermitian, durations
/// strictly positive. A default-constructed Protocol is empty (total_time 0).
struct ProtocolSegment {
  double duration;
  Operator generator;
};

class Protocol {
 public:
  Protocol() = default;
  explicit Protocol(std::vector<ProtocolSegment> segments);

  const std::vector<ProtocolSegment>& segments() const { return segments_; }
  double total_time() const { return total_time_; }
  bool empty() const { return segments_.empty(); }

  /// Evenly subdivide every segment (time-ordered-exponential refinement).
  Protocol refined(int subdivisions) const;

 private:
  std::vector<ProtocolSegment> segments_;
  double total_time_ = 0.0;
};

/// Ordered product exp(-i H_n t_n) ... exp(-i H_1 t_1). Errors on an empty
/// protocol.
Operator propagator(const Protocol& p);

/// Validated density operator: Hermitian, unit trace, eigenvalues >= -1e-10.
class DensityOperator {
 public:
  explicit DensityOperator(Operator op);

  /// Skips the eigenvalue (positivity) scan; for states that are positive by
  /// construction (Gibbs states, tensor products of validated states, ...).
  /// Hermiticity and trace are still checked.
  struct Trusted {};
  DensityOperator(Operator op, Trusted);

  const Operator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const std::vector<int>& dims() const { return op_.dims(); }
  int dim() const { return op_.dim(); }

 private:
  Operator op_;
};

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Partial trace over the trailing block of size d_bath (rows = d_system *
/// d_bath). Block form of partial_trace_bath for callers that track sizes,
/// not factor lists.
Matrix partial_trace_block(const Matrix& m, int d_system, int d_bath);

/// Channel action on matrices: Tr_B[u (x ⊗ bath) u†] where x is a d_system
/// square block. No density validation; building block for apply_channel and
/// the Choi construction.
Matrix channel_apply_raw(const Operator& u, const Matrix& bath, const Matrix& x);

/// Phi_t(rho_S) = Tr_B[u (rho_S ⊗ rho_B) u†], validated.
DensityOperator apply_channel(const Operator& u, const DensityOperator& bath_state,
                              const DensityOperator& system_state);

struct ChannelReport {
  bool trace_preserving;        // residual <= 1e-9
  double min_choi_eigenvalue;
  double trace_residual;        // max_ij |Tr[Phi(E_ij)] - delta_ij|
};

/// Choi-matrix CPTP diagnostics for the channel induced by (u, bath_state).
ChannelReport choi_cptp_check(const Operator& u, const DensityOperator& bath_state,
                              int d_system);

}  // namespace qotm::qcore
