#pragma once

#include <string>
#include <vector>

namespace anarchia {

// Growth classes of latency functions. L1: the congestion ratio
// l(x+i)/l(x) stays above 1 in the limit (exponentials, x^x, factorial).
// L2: superpolynomial but with ratio limit 1 (exp of powers of log).
// L3: bounded above by some polynomial.
enum class LatencyClass { L1, L2, L3 };

enum class LatencyFamily {
  PolySum,         // sum a_q x^q, a_q >= 0
  PolyLogProduct,  // (sum a_q x^q) * (sum b_q (ln x)^q), log factor clamped below
  ExpBase,         // c * a^x, a > 1
  PowerSelf,       // c * x^x, flat at c for x <= 1
  Factorial,       // Gamma(x+1), flat at 1 for x <= 1
  ExpLogPower,     // c * exp((ln x)^(1+eps)), flat at c for x <= 1
  PowerLog,        // c * x^((ln x)^eps) == same exponent written differently
  Constant,        // c
};

const char* family_name(LatencyFamily f);

// A non-decreasing cost curve evaluated on congestion values. Immutable after
// construction; eval saturates to +inf, log_eval never overflows for sane x,
// so every ratio downstream is formed in the log domain.
class LatencyFunction {
 public:
  static LatencyFunction poly_sum(std::vector<double> coeffs);
  static LatencyFunction poly_log_product(std::vector<double> poly_coeffs, std::vector<double> log_coeffs);
  static LatencyFunction exp_base(double base, double coeff = 1.0);
  static LatencyFunction power_self(double coeff = 1.0);
  static LatencyFunction factorial();
  static LatencyFunction exp_log_power(double eps, double coeff = 1.0);
  static LatencyFunction power_log(double eps, double coeff = 1.0);
  static LatencyFunction constant(double c);

  // Wire form used by game files and the CLI: family name string plus a flat
  // parameter list. poly_log_product packs both coefficient blocks as
  // [n_poly, poly..., log...].
  static LatencyFunction from_spec(const std::string& family, const std::vector<double>& params);

  double eval(double x) const;      // +inf once past the representable range
  double log_eval(double x) const;  // analytic per family
  double log_ratio(double x, double y) const { return log_eval(x) - log_eval(y); }

  LatencyFamily family() const { return family_; }
  LatencyClass class_tag() const { return class_; }
  const std::vector<double>& params() const { return params_; }

  // Canonical id; resources with equal keys share one cost curve for the
  // purposes of the equivalence-class decomposition.
  const std::string& key() const { return key_; }

  std::string spec_family() const { return family_name(family_); }
  std::vector<double> spec_params() const;

 private:
  LatencyFunction(LatencyFamily f, std::vector<double> params, LatencyClass c);

  LatencyFamily family_;
  std::vector<double> params_;  // family-specific layout, see latency.cpp
  LatencyClass class_;
  std::string key_;
};

}  // namespace anarchia
