#include "kdvb/operators.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "kdvb/error.hpp"
#include "kdvb/legendre.hpp"
#include "kdvb/quadrature.hpp"

namespace kdvb {
namespace {

int dim_for(int degree) {
  if (degree < 3) {
    throw Error(ErrorCode::Domain, "operator assembly needs N >= 3, got " + std::to_string(degree));
  }
  return degree - 2;
}

double c(int n) { return legendre_c(n); }

double closed_k(int m, int n) {
  if (n == m) return 2.0 * c(m + 1);
  if (n == m + 1) return 2.0 * c(m) - 2.0 * (m + 1) * c(m) * c(m + 1);
  if (n == m - 1) return -2.0 * (1.0 + (m + 2) * c(m + 1)) * c(m + 2);
  return 0.0;
}

double closed_m_upper(int m, int n) {
  if (n == m) return 2.0 * c(m + 1) * c(m + 1) * (c(m) + c(m + 2));
  if (n == m + 1) return -2.0 * c(m + 1) * c(m + 2) * c(m + 2) * (c(m) + (m + 3) * c(m + 3));
  if (n == m + 2) return -2.0 * c(m + 1) * c(m + 2) * c(m + 3);
  if (n == m + 3) return 2.0 * (m + 3) * c(m + 1) * c(m + 2) * c(m + 3) * c(m + 4);
  return 0.0;
}

double closed_q(int m, int n) {
  if (n == m) return c(m + 1) - 1.0;
  if (n >= m + 1) return ((m + n + 1) % 2 == 0) ? 2.0 : -2.0;
  return 0.0;
}

}  // namespace

std::string_view operator_name(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::K: return "K";
    case OperatorKind::M: return "M";
    case OperatorKind::Q: return "Q";
    case OperatorKind::L: return "L";
  }
  return "?";
}

const Matrix& OperatorSet::get(OperatorKind kind) const {
  switch (kind) {
    case OperatorKind::K: return K;
    case OperatorKind::M: return M;
    case OperatorKind::Q: return Q;
    case OperatorKind::L: return L;
  }
  return L;
}

Matrix assemble_L(int degree) {
  const int d = dim_for(degree);
  Matrix out = Matrix::Zero(d, d);
  // diag(2 c_{m+1})
  for (int m = 0; m < d; ++m) out(m, m) = 2.0 * c(m + 1);
  return out;
}

Matrix assemble_Q(int degree) {
  const int d = dim_for(degree);
  Matrix out(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) out(m, n) = closed_q(m, n);
  return out;
}

Matrix assemble_K(int degree) {
  const int d = dim_for(degree);
  Matrix out(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) out(m, n) = closed_k(m, n);
  return out;
}

Matrix assemble_M(int degree) {
  const int d = dim_for(degree);
  Matrix out(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) out(m, n) = n >= m ? closed_m_upper(m, n) : closed_m_upper(n, m);
  return out;
}

Matrix assemble(OperatorKind kind, int degree) {
  switch (kind) {
    case OperatorKind::K: return assemble_K(degree);
    case OperatorKind::M: return assemble_M(degree);
    case OperatorKind::Q: return assemble_Q(degree);
    case OperatorKind::L: return assemble_L(degree);
  }
  return {};
}

Matrix oracle_matrix(OperatorKind kind, int degree) {
  const int d = dim_for(degree);
  const QuadratureRule rule = gauss_legendre(2 * degree + 8);
  Matrix out = Matrix::Zero(d, d);
  std::vector<double> leg(static_cast<std::size_t>(degree) + 1);
  std::vector<double> dleg(static_cast<std::size_t>(degree) + 1);
  std::vector<double> phi(static_cast<std::size_t>(d));
  for (int i = 0; i < rule.order(); ++i) {
    const double x = rule.nodes[static_cast<std::size_t>(i)];
    const double w = rule.weights[static_cast<std::size_t>(i)];
    legendre_table(x, leg);
    legendre_derivative_table(x, dleg);
    auto L = [&](int k) { return leg[static_cast<std::size_t>(k)]; };
    for (int n = 0; n < d; ++n) phi[static_cast<std::size_t>(n)] = c(n + 1) * (L(n) - L(n + 2));
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n < d; ++n) {
        double integrand = 0.0;
        switch (kind) {
          case OperatorKind::K:
            integrand = ((1.0 - x) * L(n + 1) + phi[static_cast<std::size_t>(n)]) * L(m + 1);
            break;
          case OperatorKind::M:
            integrand = (1.0 - x) * phi[static_cast<std::size_t>(n)] *
                        phi[static_cast<std::size_t>(m)];
            break;
          case OperatorKind::Q:
            integrand = (1.0 - x) * L(m + 1) * dleg[static_cast<std::size_t>(n + 1)];
            break;
          case OperatorKind::L:
            integrand = L(n + 1) * L(m + 1);
            break;
        }
        out(m, n) += w * integrand;
      }
    }
  }
  return out;
}

OperatorSet oracle_operators(int degree) {
  return OperatorSet{degree, oracle_matrix(OperatorKind::K, degree),
                     oracle_matrix(OperatorKind::M, degree),
                     oracle_matrix(OperatorKind::Q, degree),
                     oracle_matrix(OperatorKind::L, degree)};
}

OperatorSet closed_form_operators(int degree) {
  return OperatorSet{degree, assemble_K(degree), assemble_M(degree), assemble_Q(degree),
                     assemble_L(degree)};
}

std::size_t DiscrepancyReport::count(OperatorKind kind) const {
  std::size_t total = 0;
  for (const auto& e : entries) total += e.kind == kind ? 1 : 0;
  return total;
}

DiscrepancyReport verify_closed_forms(int degree, const std::vector<OperatorKind>& kinds,
                                      double tolerance) {
  DiscrepancyReport report;
  report.degree = degree;
  report.tolerance = tolerance;
  for (OperatorKind kind : kinds) {
    const Matrix closed = assemble(kind, degree);
    const Matrix oracle = oracle_matrix(kind, degree);
    double worst = 0.0;
    for (Eigen::Index m = 0; m < closed.rows(); ++m) {
      for (Eigen::Index n = 0; n < closed.cols(); ++n) {
        const double diff = std::abs(closed(m, n) - oracle(m, n));
        worst = std::max(worst, diff);
        if (diff > tolerance) {
          report.entries.push_back(Discrepancy{kind, static_cast<int>(m), static_cast<int>(n),
                                               closed(m, n), oracle(m, n), diff});
        }
      }
    }
    report.max_deviation[static_cast<int>(kind)] = worst;
  }
  return report;
}

StepMatrices build_step_matrices(const OperatorSet& ops, double dt, double alpha, double beta) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::Domain, "time step must be positive, got " + std::to_string(dt));
  }
  StepMatrices s;
  s.dt = dt;
  s.alpha = alpha;
  s.beta = beta;
  const double half = 0.5 * dt;
  const Matrix implicit_part = dt * alpha * ops.L - half * alpha * ops.Q + half * beta * ops.K;
  s.A = ops.M + implicit_part;
  s.B = ops.M - implicit_part;
  s.C = dt * ops.M;
  return s;
}

StepFactorization::StepFactorization(const StepMatrices& step, int degree) : lu_(step.A) {
  const double scale = step.A.cwiseAbs().maxCoeff();
  const double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > kSingularPivotRatio * scale) || !std::isfinite(min_pivot)) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "singular step matrix A (N=" << degree << ", dt=" << step.dt
        << ", alpha=" << step.alpha << ", beta=" << step.beta << ", min pivot=" << min_pivot
        << ")";
    throw Error(ErrorCode::Singular, msg.str());
  }
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << "row,col,value\n" << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index col = 0; col < m.cols(); ++col)
      out << r << ',' << col << ',' << m(r, col) << '\n';
}

}  // namespace kdvb
