#include "kdvb/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "kdvb/error.hpp"

namespace kdvb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Final-time round-off (k * dt) must not push evaluation out of [0, 1].
constexpr double kDomainSlack = 1e-12;

}  // namespace

CoefficientProfile CoefficientProfile::constant(double value) {
  return CoefficientProfile(Kind::Constant, value, -kInf, kInf);
}

CoefficientProfile CoefficientProfile::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::Config, "tabulated profile needs at least two samples");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first)) {
      throw Error(ErrorCode::Config, "tabulated profile times must be strictly increasing");
    }
  }
  for (const auto& [t, v] : samples) {
    if (!std::isfinite(t) || !std::isfinite(v)) {
      throw Error(ErrorCode::Config, "tabulated profile contains a non-finite sample");
    }
  }
  CoefficientProfile p(Kind::Tabulated, 0.0, samples.front().first, samples.back().first);
  p.samples_ = std::move(samples);
  return p;
}

double CoefficientProfile::operator()(double t) const {
  if (t < t_begin_ - kDomainSlack || t > t_end_ + kDomainSlack) {
    std::ostringstream msg;
    msg << "profile " << describe() << " evaluated at t=" << t << " outside [" << t_begin_
        << ", " << t_end_ << "]";
    throw Error(ErrorCode::Domain, msg.str());
  }
  constexpr double quarter_pi = std::numbers::pi / 4.0;
  switch (kind_) {
    case Kind::Constant: return value_;
    case Kind::Case1Alpha: return 5.0 * std::cos(quarter_pi * t);
    case Kind::Case1Beta: return 1.0 / std::cos(quarter_pi * t);
    case Kind::Case2Alpha: return (t + 1.0) * (t + 1.0);
    case Kind::Case2Beta: return 0.5 / (t + 1.0);
    case Kind::Tabulated: {
      const double tc = std::clamp(t, t_begin_, t_end_);
      std::size_t hi = 1;
      while (hi + 1 < samples_.size() && samples_[hi].first < tc) ++hi;
      const auto& [t0, v0] = samples_[hi - 1];
      const auto& [t1, v1] = samples_[hi];
      const double s = (tc - t0) / (t1 - t0);
      return v0 + s * (v1 - v0);
    }
  }
  return value_;
}

std::string CoefficientProfile::describe() const {
  std::ostringstream out;
  out << std::setprecision(17);
  switch (kind_) {
    case Kind::Constant: out << "constant(" << value_ << ")"; break;
    case Kind::Case1Alpha: out << "case1.alpha"; break;
    case Kind::Case1Beta: out << "case1.beta"; break;
    case Kind::Case2Alpha: out << "case2.alpha"; break;
    case Kind::Case2Beta: out << "case2.beta"; break;
    case Kind::Tabulated:
      out << "tabulated(";
      for (std::size_t i = 0; i < samples_.size(); ++i) {
        out << (i ? "," : "") << samples_[i].first << ':' << samples_[i].second;
      }
      out << ")";
      break;
  }
  return out.str();
}

CoefficientPair CoefficientPair::constant(double alpha, double beta) {
  return {CoefficientProfile::constant(alpha), CoefficientProfile::constant(beta)};
}

CoefficientPair CoefficientPair::case1() {
  using K = CoefficientProfile::Kind;
  return {CoefficientProfile(K::Case1Alpha, 0.0, 0.0, 1.0),
          CoefficientProfile(K::Case1Beta, 0.0, 0.0, 1.0)};
}

CoefficientPair CoefficientPair::case2() {
  using K = CoefficientProfile::Kind;
  return {CoefficientProfile(K::Case2Alpha, 0.0, 0.0, 1.0),
          CoefficientProfile(K::Case2Beta, 0.0, 0.0, 1.0)};
}

}  // namespace kdvb
