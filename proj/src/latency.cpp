#include "anarchia/latency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace anarchia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSaturationLog = 709.0;  // ~ln(DBL_MAX)
// Floor for the clamped log factor of PolyLogProduct; keeps the curve
// strictly positive where the raw factor would cross zero.
constexpr double kLogFactorFloor = 1e-300;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double poly_horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (size_t q = c.size(); q-- > 0;) v = v * x + c[q];
  return v;
}

// ln(sum a_q x^q) over non-negative coefficients without overflow.
double poly_log_sum(const std::vector<double>& c, double x) {
  double lx = std::log(x);
  double m = -kInf;
  for (size_t q = 0; q < c.size(); ++q)
    if (c[q] > 0.0) m = std::max(m, std::log(c[q]) + static_cast<double>(q) * lx);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (size_t q = 0; q < c.size(); ++q)
    if (c[q] > 0.0) s += std::exp(std::log(c[q]) + static_cast<double>(q) * lx - m);
  return m + std::log(s);
}

std::string make_key(LatencyFamily f, const std::vector<double>& params) {
  std::string k = family_name(f);
  k += '(';
  char buf[40];
  for (size_t i = 0; i < params.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", params[i]);
    if (i) k += ',';
    k += buf;
  }
  k += ')';
  return k;
}

}  // namespace

const char* family_name(LatencyFamily f) {
  switch (f) {
    case LatencyFamily::PolySum: return "poly_sum";
    case LatencyFamily::PolyLogProduct: return "poly_log_product";
    case LatencyFamily::ExpBase: return "exp_base";
    case LatencyFamily::PowerSelf: return "power_self";
    case LatencyFamily::Factorial: return "factorial";
    case LatencyFamily::ExpLogPower: return "exp_log_power";
    case LatencyFamily::PowerLog: return "power_log";
    case LatencyFamily::Constant: return "constant";
  }
  return "?";
}

LatencyFunction::LatencyFunction(LatencyFamily f, std::vector<double> params, LatencyClass c)
    : family_(f), params_(std::move(params)), class_(c), key_(make_key(f, params_)) {}

LatencyFunction LatencyFunction::poly_sum(std::vector<double> coeffs) {
  require(!coeffs.empty(), "poly_sum: empty coefficient list");
  bool any = false;
  for (double a : coeffs) {
    require(a >= 0.0 && std::isfinite(a), "poly_sum: coefficients must be finite and >= 0");
    any = any || a > 0.0;
  }
  require(any, "poly_sum: all coefficients zero");
  return LatencyFunction(LatencyFamily::PolySum, std::move(coeffs), LatencyClass::L3);
}

// params layout: [n_poly, poly coeffs..., log coeffs...]
LatencyFunction LatencyFunction::poly_log_product(std::vector<double> poly_coeffs,
                                                  std::vector<double> log_coeffs) {
  require(!poly_coeffs.empty() && !log_coeffs.empty(), "poly_log_product: empty coefficient block");
  bool any = false;
  for (double a : poly_coeffs) {
    require(a >= 0.0 && std::isfinite(a), "poly_log_product: poly coefficients must be >= 0");
    any = any || a > 0.0;
  }
  require(any, "poly_log_product: all poly coefficients zero");
  for (double b : log_coeffs) require(std::isfinite(b), "poly_log_product: non-finite log coefficient");

  std::vector<double> packed;
  packed.reserve(1 + poly_coeffs.size() + log_coeffs.size());
  packed.push_back(static_cast<double>(poly_coeffs.size()));
  packed.insert(packed.end(), poly_coeffs.begin(), poly_coeffs.end());
  packed.insert(packed.end(), log_coeffs.begin(), log_coeffs.end());
  LatencyFunction f(LatencyFamily::PolyLogProduct, std::move(packed), LatencyClass::L3);

  // The clamped log factor can break monotonicity for bad coefficient
  // choices; validate on a log-spaced grid and reject at construction.
  double prev = -kInf;
  for (int k = 0; k < 1000; ++k) {
    double x = std::pow(10.0, -3.0 + 6.0 * k / 999.0);
    double lv = f.log_eval(x);
    require(lv >= prev - 1e-12, "poly_log_product: not non-decreasing on the validation grid");
    prev = lv;
  }
  return f;
}

LatencyFunction LatencyFunction::exp_base(double base, double coeff) {
  require(base > 1.0 && std::isfinite(base), "exp_base: base must be > 1");
  require(coeff > 0.0 && std::isfinite(coeff), "exp_base: coefficient must be > 0");
  return LatencyFunction(LatencyFamily::ExpBase, {base, coeff}, LatencyClass::L1);
}

LatencyFunction LatencyFunction::power_self(double coeff) {
  require(coeff > 0.0 && std::isfinite(coeff), "power_self: coefficient must be > 0");
  return LatencyFunction(LatencyFamily::PowerSelf, {coeff}, LatencyClass::L1);
}

LatencyFunction LatencyFunction::factorial() {
  return LatencyFunction(LatencyFamily::Factorial, {}, LatencyClass::L1);
}

LatencyFunction LatencyFunction::exp_log_power(double eps, double coeff) {
  require(eps > 0.0 && std::isfinite(eps), "exp_log_power: eps must be > 0");
  require(coeff > 0.0 && std::isfinite(coeff), "exp_log_power: coefficient must be > 0");
  return LatencyFunction(LatencyFamily::ExpLogPower, {eps, coeff}, LatencyClass::L2);
}

LatencyFunction LatencyFunction::power_log(double eps, double coeff) {
  require(eps > 0.0 && std::isfinite(eps), "power_log: eps must be > 0");
  require(coeff > 0.0 && std::isfinite(coeff), "power_log: coefficient must be > 0");
  return LatencyFunction(LatencyFamily::PowerLog, {eps, coeff}, LatencyClass::L2);
}

LatencyFunction LatencyFunction::constant(double c) {
  require(c > 0.0 && std::isfinite(c), "constant: value must be > 0");
  return LatencyFunction(LatencyFamily::Constant, {c}, LatencyClass::L3);
}

LatencyFunction LatencyFunction::from_spec(const std::string& family, const std::vector<double>& params) {
  if (family == "poly_sum") return poly_sum(params);
  if (family == "poly_log_product") {
    require(params.size() >= 3, "poly_log_product: params are [n_poly, poly..., log...]");
    double n = params[0];
    require(n == std::floor(n) && n >= 1 && n + 1 < static_cast<double>(params.size()),
            "poly_log_product: bad poly block length");
    size_t np = static_cast<size_t>(n);
    return poly_log_product(std::vector<double>(params.begin() + 1, params.begin() + 1 + np),
                            std::vector<double>(params.begin() + 1 + np, params.end()));
  }
  if (family == "exp_base") {
    require(params.size() == 1 || params.size() == 2, "exp_base: params are [base] or [base, coeff]");
    return exp_base(params[0], params.size() == 2 ? params[1] : 1.0);
  }
  if (family == "power_self") {
    require(params.size() <= 1, "power_self: params are [] or [coeff]");
    return power_self(params.empty() ? 1.0 : params[0]);
  }
  if (family == "factorial") {
    require(params.empty(), "factorial: takes no params");
    return factorial();
  }
  if (family == "exp_log_power") {
    require(params.size() == 1 || params.size() == 2, "exp_log_power: params are [eps] or [eps, coeff]");
    return exp_log_power(params[0], params.size() == 2 ? params[1] : 1.0);
  }
  if (family == "power_log") {
    require(params.size() == 1 || params.size() == 2, "power_log: params are [eps] or [eps, coeff]");
    return power_log(params[0], params.size() == 2 ? params[1] : 1.0);
  }
  if (family == "constant") {
    require(params.size() == 1, "constant: params are [value]");
    return constant(params[0]);
  }
  throw std::invalid_argument("unknown latency family: " + family);
}

std::vector<double> LatencyFunction::spec_params() const { return params_; }

double LatencyFunction::log_eval(double x) const {
  if (!(x > 0.0)) throw std::domain_error("latency: argument must be > 0");
  switch (family_) {
    case LatencyFamily::PolySum:
      return poly_log_sum(params_, x);
    case LatencyFamily::PolyLogProduct: {
      size_t np = static_cast<size_t>(params_[0]);
      double la = poly_log_sum(std::vector<double>(params_.begin() + 1, params_.begin() + 1 + np), x);
      double lx = std::log(x);
      double factor = 0.0, p = 1.0;
      for (size_t q = 1 + np; q < params_.size(); ++q) {
        factor += params_[q] * p;
        p *= lx;
      }
      return la + std::log(std::max(factor, kLogFactorFloor));
    }
    case LatencyFamily::ExpBase:
      return std::log(params_[1]) + x * std::log(params_[0]);
    case LatencyFamily::PowerSelf:
      return std::log(params_[0]) + std::max(0.0, x * std::log(x));
    case LatencyFamily::Factorial:
      return std::max(0.0, std::lgamma(x + 1.0));
    case LatencyFamily::ExpLogPower:
    case LatencyFamily::PowerLog: {
      // Both families are c * exp((ln x)^(1+eps)); held flat at c below x=1
      // where the raw expression stops being non-decreasing (or defined).
      double lx = std::log(x);
      if (lx <= 0.0) return std::log(params_[1]);
      return std::log(params_[1]) + std::pow(lx, 1.0 + params_[0]);
    }
    case LatencyFamily::Constant:
      return std::log(params_[0]);
  }
  return 0.0;
}

double LatencyFunction::eval(double x) const {
  if (!(x > 0.0)) throw std::domain_error("latency: argument must be > 0");
  switch (family_) {
    case LatencyFamily::PolySum:
      return poly_horner(params_, x);
    case LatencyFamily::PolyLogProduct: {
      size_t np = static_cast<size_t>(params_[0]);
      double a = poly_horner(std::vector<double>(params_.begin() + 1, params_.begin() + 1 + np), x);
      double lx = std::log(x);
      double factor = 0.0, p = 1.0;
      for (size_t q = 1 + np; q < params_.size(); ++q) {
        factor += params_[q] * p;
        p *= lx;
      }
      return a * std::max(factor, kLogFactorFloor);
    }
    case LatencyFamily::Constant:
      return params_[0];
    default: {
      double lv = log_eval(x);
      if (lv > kSaturationLog) return kInf;
      return std::exp(lv);
    }
  }
}

}  // namespace anarchia
