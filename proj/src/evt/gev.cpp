#include "voipstat/evt/gev.hpp"

#include <cmath>
#include <limits>

#include "voipstat/error.hpp"

namespace voipstat::evt {

namespace {

void check_scale(const GevParams& p) {
  if (!(p.sigma > 0.0)) throw Error(ErrorCode::DomainError, "GEV scale must be positive");
}

bool gumbel_band(double xi) { return std::fabs(xi) < kGumbelShapeEps; }

}  // namespace

Classification classify(const GevParams& p) noexcept {
  Classification c{};
  if (gumbel_band(p.xi)) {
    c.tail = Tail::Gumbel;
  } else {
    c.tail = p.xi < 0.0 ? Tail::Weibull : Tail::Frechet;
  }
  if (p.xi > -0.5) {
    c.regime = Regime::Standard;
  } else if (p.xi > -1.0) {
    c.regime = Regime::Attainable;
  } else {
    c.regime = Regime::Unreliable;
  }
  return c;
}

std::string_view to_string(Tail tail) noexcept {
  switch (tail) {
    case Tail::Weibull: return "weibull";
    case Tail::Gumbel: return "gumbel";
    case Tail::Frechet: return "frechet";
  }
  return "unknown";
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Standard: return "standard";
    case Regime::Attainable: return "attainable";
    case Regime::Unreliable: return "unreliable";
  }
  return "unknown";
}

double support_endpoint(const GevParams& p) noexcept {
  if (gumbel_band(p.xi)) return std::numeric_limits<double>::quiet_NaN();
  return p.mu - p.sigma / p.xi;
}

double gev_cdf(const GevParams& p, double x) {
  check_scale(p);
  const double y = (x - p.mu) / p.sigma;
  if (!gumbel_band(p.xi) && !(1.0 + p.xi * y > 0.0)) return p.xi < 0.0 ? 1.0 : 0.0;
  const double omega = kernels::gev_omega(p.xi, y);
  return std::exp(-std::exp(-omega));
}

double gev_pdf(const GevParams& p, double x) {
  check_scale(p);
  const double y = (x - p.mu) / p.sigma;
  if (!gumbel_band(p.xi) && !(1.0 + p.xi * y > 0.0)) return 0.0;
  const double omega = kernels::gev_omega(p.xi, y);
  const double log_density = -(1.0 + p.xi) * omega - std::exp(-omega);
  return std::exp(log_density) / p.sigma;
}

double gev_quantile(const GevParams& p, double u) {
  check_scale(p);
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::DomainError, "quantile level must lie in (0, 1)");
  // omega solves exp(-exp(-omega)) = u; y inverts omega(y).
  const double omega = -std::log(-std::log(u));
  double y;
  if (gumbel_band(p.xi)) {
    y = omega * (1.0 + p.xi * omega / 2.0 + p.xi * p.xi * omega * omega / 6.0);
  } else {
    y = std::expm1(p.xi * omega) / p.xi;
  }
  return p.mu + p.sigma * y;
}

double UniformStream::next() {
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

std::vector<double> gev_sample(const GevParams& p, std::size_t n, std::uint64_t seed) {
  UniformStream uniform(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gev_quantile(p, uniform.next()));
  return out;
}

double gev_loglik(const GevParams& p, std::span<const double> data) {
  if (data.empty()) throw Error(ErrorCode::EmptyData, "log-likelihood of an empty sample");
  if (!(p.sigma > 0.0) || !std::isfinite(p.xi) || !std::isfinite(p.mu)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double terms = kernels::parallel::gev_loglik_terms(data, p.xi, p.sigma, p.mu);
  if (!std::isfinite(terms)) return -std::numeric_limits<double>::infinity();
  return -static_cast<double>(data.size()) * std::log(p.sigma) + terms;
}

}  // namespace voipstat::evt
