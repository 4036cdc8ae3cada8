#include "voipstat/evt/families.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "voipstat/error.hpp"
#include "voipstat/evt/ks.hpp"
#include "voipstat/evt/newton.hpp"
#include "kernels/detail.hpp"

namespace voipstat::evt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FamilyInfo {
  Family family;
  std::string_view name;
  int k;
  bool positive;
  std::array<std::string_view, 3> params;
};

// clang-format off
constexpr std::array<FamilyInfo, 10> kFamilies{{
    {Family::GEV, "GEV", 3, false, {"xi", "sigma", "mu"}},
    {Family::Gumbel, "Gumbel", 2, false, {"sigma", "mu", ""}},
    {Family::Weibull, "Weibull", 2, true, {"shape", "scale", ""}},
    {Family::Normal, "Normal", 2, false, {"mu", "sigma", ""}},
    {Family::LogNormal, "LogNormal", 2, true, {"mu", "sigma", ""}},
    {Family::Exponential, "Exponential", 1, true, {"rate", "", ""}},
    {Family::Gamma, "Gamma", 2, true, {"shape", "scale", ""}},
    {Family::Logistic, "Logistic", 2, false, {"mu", "scale", ""}},
    {Family::GeneralizedPareto, "GeneralizedPareto", 3, false, {"xi", "sigma", "threshold"}},
    {Family::Rayleigh, "Rayleigh", 1, true, {"sigma", "", ""}},
}};
// clang-format on

const FamilyInfo& info(Family f) noexcept { return kFamilies[static_cast<std::size_t>(f)]; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Bisection for a decreasing function h on [lo, hi] in log coordinates.
double bisect_log(double lo, double hi, auto&& h) {
  double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (h(std::exp(m)) > 0.0) a = m; else b = m;
    if (b - a < 1e-14) break;
  }
  return std::exp(0.5 * (a + b));
}

void fit_gumbel(std::span<const double> x, FamilyFit& out) {
  const double lo = *std::min_element(x.begin(), x.end());
  const double m = mean_of(x);
  // sigma = mean - sum(x w) / sum(w), w = exp(-(x - lo) / sigma)
  auto g = [&](double s) {
    double sw = 0.0, sxw = 0.0;
    for (double v : x) {
      const double w = std::exp(-(v - lo) / s);
      sw += w;
      sxw += (v - lo) * w;
    }
    return (m - lo) - sxw / sw - s;  // decreasing in s
  };
  double range = *std::max_element(x.begin(), x.end()) - lo;
  const double sigma = bisect_log(range * 1e-9, range * 1e3, g);
  double sw = 0.0;
  for (double v : x) sw += std::exp(-(v - lo) / sigma);
  const double mu = lo - sigma * std::log(sw / static_cast<double>(x.size()));
  out.params = {sigma, mu};
  double ll = 0.0;
  for (double v : x) {
    const double z = (v - mu) / sigma;
    ll += -z - std::exp(-z);
  }
  out.loglik = ll - static_cast<double>(x.size()) * std::log(sigma);
}

void fit_weibull(std::span<const double> x, FamilyFit& out) {
  const double hi = *std::max_element(x.begin(), x.end());
  std::vector<double> lx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) lx[i] = std::log(x[i] / hi);
  const double mean_lx = mean_of(lx);
  auto h = [&](double k) {
    double s = 0.0, sl = 0.0;
    for (double l : lx) {
      const double w = std::exp(k * l);
      s += w;
      sl += w * l;
    }
    return 1.0 / k + mean_lx - sl / s;
  };
  const double k = bisect_log(1e-4, 1e4, h);
  double s = 0.0;
  for (double l : lx) s += std::exp(k * l);
  const double scale = hi * std::pow(s / static_cast<double>(x.size()), 1.0 / k);
  out.params = {k, scale};
  double ll = 0.0;
  for (double v : x) {
    const double z = v / scale;
    ll += std::log(k / scale) + (k - 1.0) * std::log(z) - std::pow(z, k);
  }
  out.loglik = ll;
}

void fit_normal(std::span<const double> x, FamilyFit& out) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(x.size());
  if (!(var > 0.0)) throw Error(ErrorCode::DegenerateData, "zero variance");
  out.params = {m, std::sqrt(var)};
  out.loglik = -0.5 * static_cast<double>(x.size()) * (std::log(2.0 * std::numbers::pi * var) + 1.0);
}

void fit_lognormal(std::span<const double> x, FamilyFit& out) {
  std::vector<double> lx(x.size());
  double slx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    slx += lx[i];
  }
  fit_normal(lx, out);
  out.loglik -= slx;
}

void fit_exponential(std::span<const double> x, FamilyFit& out) {
  const double rate = 1.0 / mean_of(x);
  out.params = {rate};
  out.loglik = static_cast<double>(x.size()) * (std::log(rate) - 1.0);
}

void fit_gamma(std::span<const double> x, FamilyFit& out) {
  const double m = mean_of(x);
  double slx = 0.0;
  for (double v : x) slx += std::log(v);
  const double s = std::log(m) - slx / static_cast<double>(x.size());
  if (!(s > 0.0)) throw Error(ErrorCode::DegenerateData, "zero log-spread");
  const double a = bisect_log(1e-8, 1e10, [&](double a) {
    return std::log(a) - boost::math::digamma(a) - s;
  });
  const double theta = m / a;
  out.params = {a, theta};
  const double n = static_cast<double>(x.size());
  out.loglik = (a - 1.0) * slx - n * m / theta - n * a * std::log(theta) - n * std::lgamma(a);
}

double logistic_loglik(std::span<const double> x, double mu, double s) {
  if (!(s > 0.0)) return -kInf;
  kernels::detail::CompensatedSum ll;
  for (double v : x) {
    const double z = std::abs((v - mu) / s);
    ll.add(-z - 2.0 * std::log1p(std::exp(-z)));
  }
  return ll.value() - static_cast<double>(x.size()) * std::log(s);
}

void check_newton(const NewtonResult& r, Family f) {
  if (!r.converged) {
    throw Error(ErrorCode::NotConverged,
                std::string(info(f).name) + " fit stopped after " + std::to_string(r.iterations) + " iterations");
  }
}

void fit_logistic(std::span<const double> x, FamilyFit& out) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(x.size()));
  const double s0 = sd * std::sqrt(3.0) / std::numbers::pi;
  const double scales[] = {sd, sd};
  const NewtonResult r = maximize_newton(
      [&](std::span<const double> t) { return logistic_loglik(x, t[0], t[1]); }, {m, s0}, scales);
  check_newton(r, Family::Logistic);
  out.params = r.theta;
  out.loglik = r.value;
  out.iterations = r.iterations;
}

double gpd_loglik(std::span<const double> y, double xi, double sigma) {
  if (!(sigma > 0.0) || !(xi > -1.0)) return -kInf;
  kernels::detail::CompensatedSum s;
  if (std::abs(xi) < kGumbelShapeEps) {
    for (double v : y) s.add(v / sigma);
    return -static_cast<double>(y.size()) * std::log(sigma) - s.value();
  }
  for (double v : y) {
    const double t = xi * v / sigma;
    if (!(t > -1.0)) return -kInf;
    s.add(std::log1p(t));
  }
  return -static_cast<double>(y.size()) * std::log(sigma) - (1.0 + 1.0 / xi) * s.value();
}

void fit_gpd(std::span<const double> x, FamilyFit& out) {
  const double u = *std::min_element(x.begin(), x.end());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - u;
  const double m = mean_of(y);
  const double scales[] = {1.0, m};
  const NewtonResult r = maximize_newton(
      [&](std::span<const double> t) { return gpd_loglik(y, t[0], t[1]); }, {0.1, 0.9 * m}, scales);
  check_newton(r, Family::GeneralizedPareto);
  out.params = {r.theta[0], r.theta[1], u};
  out.loglik = r.value;
  out.iterations = r.iterations;
}

void fit_rayleigh(std::span<const double> x, FamilyFit& out) {
  double s2 = 0.0, slx = 0.0;
  for (double v : x) {
    s2 += v * v;
    slx += std::log(v);
  }
  const double n = static_cast<double>(x.size());
  const double var = s2 / (2.0 * n);
  out.params = {std::sqrt(var)};
  out.loglik = slx - n * std::log(var) - n;
}

}  // namespace

std::string_view to_string(Family family) noexcept { return info(family).name; }

Family family_from_string(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& f : kFamilies) {
    if (lower(f.name) == key) return f.family;
  }
  if (key == "gpd" || key == "pareto") return Family::GeneralizedPareto;
  if (key == "lognormal" || key == "log-normal") return Family::LogNormal;
  throw Error(ErrorCode::BadInput, "unknown distribution family '" + std::string(name) + "'");
}

std::vector<Family> parse_family_list(std::string_view list) {
  std::vector<Family> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    std::string_view tok = list.substr(pos, comma - pos);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (!tok.empty()) {
      if (lower(tok) == "all") {
        const auto& all = all_families();
        out.insert(out.end(), all.begin(), all.end());
      } else {
        out.push_back(family_from_string(tok));
      }
    }
    pos = comma + 1;
  }
  return out;
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> all = [] {
    std::vector<Family> v;
    for (const auto& f : kFamilies) v.push_back(f.family);
    return v;
  }();
  return all;
}

int parameter_count(Family family) noexcept { return info(family).k; }

std::span<const std::string_view> parameter_names(Family family) noexcept {
  const auto& f = info(family);
  return {f.params.data(), f.params.data() + (family == Family::GeneralizedPareto ? 3 : f.k)};
}

bool requires_positive(Family family) noexcept { return info(family).positive; }

FamilyFit fit_family(Family family, std::span<const double> data) {
  if (data.size() < kMinFitPoints) {
    throw Error(ErrorCode::TooFewPoints,
                std::to_string(data.size()) + " points, need at least " + std::to_string(kMinFitPoints));
  }
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  if (!std::isfinite(*lo) || !std::isfinite(*hi)) throw Error(ErrorCode::BadInput, "non-finite value in sample");
  if (!(*hi > *lo)) throw Error(ErrorCode::DegenerateData, "all values are equal");
  if (requires_positive(family) && !(*lo > 0.0)) {
    throw Error(ErrorCode::DomainError, std::string(to_string(family)) + " needs strictly positive data");
  }

  FamilyFit out;
  out.family = family;
  out.k = parameter_count(family);
  out.n = data.size();

  switch (family) {
    case Family::GEV: {
      GevFit g = fit_gev_mle(data);
      out.params = {g.params.xi, g.params.sigma, g.params.mu};
      out.loglik = g.loglik;
      out.iterations = g.iterations;
      out.converged = g.converged;
      out.gev = g;
      break;
    }
    case Family::Gumbel: fit_gumbel(data, out); break;
    case Family::Weibull: fit_weibull(data, out); break;
    case Family::Normal: fit_normal(data, out); break;
    case Family::LogNormal: fit_lognormal(data, out); break;
    case Family::Exponential: fit_exponential(data, out); break;
    case Family::Gamma: fit_gamma(data, out); break;
    case Family::Logistic: fit_logistic(data, out); break;
    case Family::GeneralizedPareto: fit_gpd(data, out); break;
    case Family::Rayleigh: fit_rayleigh(data, out); break;
  }
  if (!std::isfinite(out.loglik)) {
    throw Error(ErrorCode::NotConverged, std::string(to_string(family)) + " log-likelihood is not finite");
  }
  out.bic = out.k * std::log(static_cast<double>(out.n)) - 2.0 * out.loglik;
  out.e_max = out.gev ? out.gev->e_max : ks_distance(data, [&](double x) { return family_cdf(out, x); });
  return out;
}

double family_cdf(const FamilyFit& fit, double x) {
  const auto& p = fit.params;
  switch (fit.family) {
    case Family::GEV: return gev_cdf(GevParams{p[0], p[1], p[2]}, x);
    case Family::Gumbel: return std::exp(-std::exp(-(x - p[1]) / p[0]));
    case Family::Weibull: return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / p[1], p[0]));
    case Family::Normal: return 0.5 * std::erfc(-(x - p[0]) / (p[1] * std::numbers::sqrt2));
    case Family::LogNormal:
      return x <= 0.0 ? 0.0 : 0.5 * std::erfc(-(std::log(x) - p[0]) / (p[1] * std::numbers::sqrt2));
    case Family::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-p[0] * x);
    case Family::Gamma: return x <= 0.0 ? 0.0 : boost::math::gamma_p(p[0], x / p[1]);
    case Family::Logistic: return 1.0 / (1.0 + std::exp(-(x - p[0]) / p[1]));
    case Family::GeneralizedPareto: {
      const double y = x - p[2];
      if (y <= 0.0) return 0.0;
      if (std::abs(p[0]) < kGumbelShapeEps) return -std::expm1(-y / p[1]);
      const double t = 1.0 + p[0] * y / p[1];
      if (t <= 0.0) return 1.0;
      return -std::expm1(-std::log(t) / p[0]);
    }
    case Family::Rayleigh: return x <= 0.0 ? 0.0 : -std::expm1(-x * x / (2.0 * p[0] * p[0]));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace voipstat::evt
