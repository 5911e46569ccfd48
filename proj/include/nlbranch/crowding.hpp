// Crowding nonlinearities: nonnegative, gamma-homogeneous functions of the
// two population densities, with declared lower-bound and origin-bound
// constants so the hypothesis checks are executable.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nlbranch/errors.hpp"

namespace nlbranch {

class CrowdingFunction {
 public:
  // c1*t^gamma + c2*s^gamma
  static CrowdingFunction power_sum(double gamma, double c1, double c2) {
    require_gamma(gamma);
    if (c1 < 0.0 || c2 < 0.0) throw ConfigError("power-sum: coefficients must be nonnegative");
    CrowdingFunction f;
    f.tag_ = "power-sum";
    f.gamma_ = gamma;
    f.eval_ = [gamma, c1, c2](double t, double s) {
      return c1 * std::pow(t, gamma) + c2 * std::pow(s, gamma);
    };
    f.eps_first_ = c1;
    f.eps_second_ = c2;
    f.origin_bound_ = c1 + c2;
    f.params_ = {c1, c2};
    return f;
  }

  // t^gamma + s^(gamma-m) * t^m with 0 < m < gamma. The mixing exponent is
  // named m here; it bounds below only through the first argument.
  static CrowdingFunction mixed_power(double gamma, double m) {
    require_gamma(gamma);
    if (!(m > 0.0) || !(m < gamma))
      throw ConfigError("mixed-power: need 0 < m < gamma");
    CrowdingFunction f;
    f.tag_ = "mixed-power";
    f.gamma_ = gamma;
    f.eval_ = [gamma, m](double t, double s) {
      return std::pow(t, gamma) + std::pow(s, gamma - m) * std::pow(t, m);
    };
    f.eps_first_ = 1.0;
    f.eps_second_ = 0.0;
    f.origin_bound_ = 2.0;
    f.params_ = {m};
    return f;
  }

  // r^gamma times a nonnegative profile tabulated over the first-quadrant
  // arc (theta in [0, pi/2], uniform nodes, linear interpolation). Tabulating
  // the angular profile keeps homogeneity exact by construction.
  static CrowdingFunction angular_table(double gamma, std::vector<double> profile) {
    require_gamma(gamma);
    if (profile.size() < 2) throw ConfigError("tabulated crowding: need at least 2 profile values");
    for (double p : profile)
      if (!(p >= 0.0)) throw ConfigError("tabulated crowding: profile values must be nonnegative");
    CrowdingFunction f;
    f.tag_ = "tabulated";
    f.gamma_ = gamma;
    f.params_ = profile;
    const auto table = std::make_shared<std::vector<double>>(std::move(profile));
    f.eval_ = [gamma, table](double t, double s) {
      const double r = std::hypot(t, s);
      if (r == 0.0) return 0.0;
      const double theta = std::atan2(s, t);  // in [0, pi/2] for t,s >= 0
      const double pos = theta / (M_PI / 2.0) * (table->size() - 1);
      const auto i = static_cast<size_t>(std::min(pos, double(table->size() - 2)));
      const double frac = pos - static_cast<double>(i);
      const double p = (*table)[i] * (1.0 - frac) + (*table)[i + 1] * frac;
      return std::pow(r, gamma) * p;
    };
    // Profile lower-bound constants: f >= eps*t^gamma iff profile(theta) >=
    // eps*cos(theta)^gamma for all theta; estimated on a fine angle grid.
    const auto& tab = *table;
    double e1 = std::numeric_limits<double>::infinity();
    double e2 = std::numeric_limits<double>::infinity();
    const int samples = 512;
    for (int i = 0; i <= samples; ++i) {
      const double theta = (M_PI / 2.0) * i / samples;
      const double pos = theta / (M_PI / 2.0) * (tab.size() - 1);
      const auto k = static_cast<size_t>(std::min(pos, double(tab.size() - 2)));
      const double p = tab[k] * (1.0 - (pos - double(k))) + tab[k + 1] * (pos - double(k));
      const double ct = std::pow(std::cos(theta), gamma);
      const double st = std::pow(std::sin(theta), gamma);
      if (ct > 1e-8) e1 = std::min(e1, p / ct);
      if (st > 1e-8) e2 = std::min(e2, p / st);
    }
    f.eps_first_ = std::isfinite(e1) ? std::max(e1, 0.0) : 0.0;
    f.eps_second_ = std::isfinite(e2) ? std::max(e2, 0.0) : 0.0;
    f.origin_bound_ = *std::max_element(tab.begin(), tab.end());
    return f;
  }

  double operator()(double t, double s) const { return eval_(t, s); }

  double gamma() const { return gamma_; }
  const std::string& tag() const { return tag_; }
  const std::vector<double>& parameters() const { return params_; }

  // (f1) constants: f(t,s) >= eps_first * t^gamma and >= eps_second * s^gamma
  // (0 means no bound through that argument).
  double lower_bound_first() const { return eps_first_; }
  double lower_bound_second() const { return eps_second_; }
  // (f3) constant: f <= origin_bound on the Euclidean unit ball t^2+s^2 <= 1.
  double origin_bound() const { return origin_bound_; }

 private:
  static void require_gamma(double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("crowding function: need gamma > 0");
  }

  std::function<double(double, double)> eval_;
  std::string tag_;
  std::vector<double> params_;
  double gamma_ = 1.0;
  double eps_first_ = 0.0;
  double eps_second_ = 0.0;
  double origin_bound_ = 0.0;
};

}  // namespace nlbranch
