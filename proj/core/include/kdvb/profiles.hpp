#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kdvb {

/// Time-dependent coefficient alpha(t) or beta(t).
class CoefficientProfile {
 public:
  enum class Kind { Constant, Case1Alpha, Case1Beta, Case2Alpha, Case2Beta, Tabulated };

  CoefficientProfile() : CoefficientProfile(constant(0.0)) {}

  static CoefficientProfile constant(double value);
  /// Piecewise-linear through (t, value) samples, strictly increasing t, at least two samples.
  static CoefficientProfile tabulated(std::vector<std::pair<double, double>> samples);

  Kind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return kind_ == Kind::Constant; }
  double domain_begin() const noexcept { return t_begin_; }
  double domain_end() const noexcept { return t_end_; }

  /// Throws ErrorCode::Domain outside the profile's time domain.
  double operator()(double t) const;

  /// Short human/machine description, e.g. "constant(1)" or "case1.alpha".
  std::string describe() const;

  const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

 private:
  friend struct CoefficientPair;
  CoefficientProfile(Kind kind, double value, double t_begin, double t_end)
      : kind_(kind), value_(value), t_begin_(t_begin), t_end_(t_end) {}

  Kind kind_;
  double value_ = 0.0;
  double t_begin_;
  double t_end_;
  std::vector<std::pair<double, double>> samples_;
};

/// alpha and beta travel together; the time-varying cases are defined as pairs.
struct CoefficientPair {
  CoefficientProfile alpha;
  CoefficientProfile beta;

  static CoefficientPair constant(double alpha, double beta);
  /// alpha = 5 cos(pi t / 4), beta = 1 / cos(pi t / 4) on [0, 1].
  static CoefficientPair case1();
  /// alpha = (t + 1)^2, beta = 0.5 / (t + 1) on [0, 1].
  static CoefficientPair case2();
};

}  // namespace kdvb
