#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace kdvb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class OperatorKind { K, M, Q, L };

std::string_view operator_name(OperatorKind kind) noexcept;

/// Scheme matrices of size (N-2)x(N-2), row = test index m, column = trial index n.
///
///   K: k_mn = ((1-x) L_{n+1}, L_{m+1}) + (phi_n, L_{m+1})   (dissipation, -d_xx)
///   M: a_mn = ((1-x) phi_n, phi_m)                           (mass)
///   Q: q_mn = ((1-x) L_{m+1}, L_{n+1}')
///   L: l_mn = (L_{n+1}, L_{m+1})
struct OperatorSet {
  int degree = 0;
  Matrix K;
  Matrix M;
  Matrix Q;
  Matrix L;

  const Matrix& get(OperatorKind kind) const;
};

// Closed-form tables. assemble_K keeps the tabulated entries as given;
// verify_closed_forms is what decides whether it can be trusted.
Matrix assemble_L(int degree);
Matrix assemble_Q(int degree);
Matrix assemble_K(int degree);
/// Upper band from the table, lower band by symmetry.
Matrix assemble_M(int degree);
Matrix assemble(OperatorKind kind, int degree);

/// Gauss quadrature (order 2N+8) of the defining inner products.
Matrix oracle_matrix(OperatorKind kind, int degree);

OperatorSet oracle_operators(int degree);
OperatorSet closed_form_operators(int degree);

struct Discrepancy {
  OperatorKind kind;
  int row;
  int col;
  double closed_form;
  double oracle;
  double abs_diff;
};

struct DiscrepancyReport {
  int degree = 0;
  double tolerance = 0.0;
  std::vector<Discrepancy> entries;
  /// Largest |closed - oracle| per kind, whether or not it exceeded the tolerance.
  double max_deviation[4] = {0.0, 0.0, 0.0, 0.0};

  bool empty() const noexcept { return entries.empty(); }
  std::size_t count(OperatorKind kind) const;
  double deviation(OperatorKind kind) const { return max_deviation[static_cast<int>(kind)]; }
};

inline constexpr double kClosedFormTolerance = 1e-10;

DiscrepancyReport verify_closed_forms(
    int degree,
    const std::vector<OperatorKind>& kinds = {OperatorKind::K, OperatorKind::M,
                                              OperatorKind::Q, OperatorKind::L},
    double tolerance = kClosedFormTolerance);

/// A U^{k+1} = B U^k + C F^{k+1/2}
struct StepMatrices {
  Matrix A;
  Matrix B;
  Matrix C;
  double dt = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Throws ErrorCode::Domain if dt <= 0.
StepMatrices build_step_matrices(const OperatorSet& ops, double dt, double alpha, double beta);

/// LU with partial pivoting that rejects pivots below 1e-13 * max|A|.
class StepFactorization {
 public:
  StepFactorization() = default;
  /// Throws ErrorCode::Singular with (N, dt, alpha, beta) in the message.
  StepFactorization(const StepMatrices& step, int degree);

  Vector solve(const Vector& rhs) const { return lu_.solve(rhs); }

 private:
  Eigen::PartialPivLU<Matrix> lu_;
};

inline constexpr double kSingularPivotRatio = 1e-13;

/// CSV rows "row,col,value" with a header line.
void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace kdvb
