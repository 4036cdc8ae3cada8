#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "voipstat/kernels/kernels.hpp"

namespace voipstat::evt {

using kernels::kGumbelShapeEps;

/// Generalized extreme value parameters: shape xi, scale sigma > 0, location mu.
struct GevParams {
  double xi = 0.0;
  double sigma = 1.0;
  double mu = 0.0;

  bool operator==(const GevParams&) const = default;
};

enum class Tail { Weibull, Gumbel, Frechet };

/// Asymptotic validity bands of the maximum-likelihood estimator.
enum class Regime {
  Standard,    // xi > -0.5
  Attainable,  // -1 < xi <= -0.5
  Unreliable,  // xi <= -1
};

struct Classification {
  Tail tail;
  Regime regime;
};

Classification classify(const GevParams& p) noexcept;
std::string_view to_string(Tail tail) noexcept;
std::string_view to_string(Regime regime) noexcept;

/// Finite support endpoint: upper for xi < 0, lower for xi > 0. NaN in the
/// Gumbel band where the support is the whole real line.
double support_endpoint(const GevParams& p) noexcept;

/// Off-support points give 0 or 1 according to the side. Throws
/// `Error(DomainError)` for sigma <= 0.
double gev_cdf(const GevParams& p, double x);
double gev_pdf(const GevParams& p, double x);

/// Analytic inverse of the CDF. Throws `Error(DomainError)` unless 0 < u < 1.
double gev_quantile(const GevParams& p, double u);

/// Seeded uniform variates on the open interval (0, 1). The 53-bit mapping is
/// spelled out so sequences are identical across standard libraries.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
};

/// Inverse-transform sample of size n; identical for identical seeds.
std::vector<double> gev_sample(const GevParams& p, std::size_t n, std::uint64_t seed);

/// -n log(sigma) - (1 + xi) sum(omega_i) - sum(exp(-omega_i)),
/// omega_i = log(1 + xi (z_i - mu) / sigma) / xi. Returns -inf when sigma <= 0
/// or any point violates 1 + xi (z_i - mu) / sigma > 0. Throws
/// `Error(EmptyData)` for no data.
double gev_loglik(const GevParams& p, std::span<const double> data);

}  // namespace voipstat::evt
