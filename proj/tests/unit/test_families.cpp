#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "voipstat/error.hpp"
#include "voipstat/evt/families.hpp"
#include "voipstat/evt/select.hpp"

using namespace voipstat;
using namespace voipstat::evt;

namespace {

// Log-densities written from the textbook forms, parameters in the order of
// parameter_names().
double logpdf(Family f, const std::vector<double>& p, double x) {
  constexpr double kPi = std::numbers::pi;
  switch (f) {
    case Family::GEV:
      return std::log(static_cast<double>(oracle::gev_pdf({p[0], p[1], p[2]}, x)));
    case Family::Gumbel: {
      const double z = (x - p[1]) / p[0];
      return -std::log(p[0]) - z - std::exp(-z);
    }
    case Family::Weibull:
      if (x <= 0) return -INFINITY;
      return std::log(p[0] / p[1]) + (p[0] - 1) * std::log(x / p[1]) - std::pow(x / p[1], p[0]);
    case Family::Normal:
      return -0.5 * std::log(2 * kPi) - std::log(p[1]) - 0.5 * std::pow((x - p[0]) / p[1], 2);
    case Family::LogNormal:
      if (x <= 0) return -INFINITY;
      return -std::log(x) - 0.5 * std::log(2 * kPi) - std::log(p[1]) - 0.5 * std::pow((std::log(x) - p[0]) / p[1], 2);
    case Family::Exponential:
      return x < 0 ? -INFINITY : std::log(p[0]) - p[0] * x;
    case Family::Gamma:
      if (x <= 0) return -INFINITY;
      return -std::lgamma(p[0]) - p[0] * std::log(p[1]) + (p[0] - 1) * std::log(x) - x / p[1];
    case Family::Logistic: {
      const double z = (x - p[0]) / p[1];
      return -z - std::log(p[1]) - 2 * std::log1p(std::exp(-z));
    }
    case Family::GeneralizedPareto: {
      const double y = x - p[2];
      if (y < 0) return -INFINITY;
      if (p[0] == 0) return -std::log(p[1]) - y / p[1];
      const double b = 1 + p[0] * y / p[1];
      if (b <= 0) return -INFINITY;
      return -std::log(p[1]) - (1 / p[0] + 1) * std::log(b);
    }
    case Family::Rayleigh:
      if (x < 0) return -INFINITY;
      return std::log(x / (p[0] * p[0])) - x * x / (2 * p[0] * p[0]);
  }
  return NAN;
}

double loglik(Family f, const std::vector<double>& p, const std::vector<double>& data) {
  double s = 0;
  for (double x : data) s += logpdf(f, p, x);
  return s;
}

// Which entries are strictly positive (searched on the log scale) and which
// stay fixed during the simplex search.
std::vector<bool> positive_mask(Family f) {
  switch (f) {
    case Family::GEV: return {false, true, false};
    case Family::Gumbel: return {true, false};
    case Family::Weibull: return {true, true};
    case Family::Normal: return {false, true};
    case Family::LogNormal: return {false, true};
    case Family::Exponential: return {true};
    case Family::Gamma: return {true, true};
    case Family::Logistic: return {false, true};
    case Family::GeneralizedPareto: return {false, true, false};
    case Family::Rayleigh: return {true};
  }
  return {};
}

// Derivative-free maximization started away from the library optimum.
std::vector<double> simplex_mle(Family f, std::vector<double> start, const std::vector<double>& data) {
  const auto pos = positive_mask(f);
  const bool fix_last = f == Family::GeneralizedPareto;
  const std::size_t d = start.size() - (fix_last ? 1 : 0);
  std::vector<double> x0(d), step(d);
  for (std::size_t i = 0; i < d; ++i) {
    x0[i] = pos[i] ? std::log(start[i]) : start[i];
    step[i] = pos[i] ? 0.1 : 0.1 * std::max(1.0, std::fabs(start[i]));
  }
  auto unpack = [&](const std::vector<double>& x) {
    std::vector<double> p(start);
    for (std::size_t i = 0; i < d; ++i) p[i] = pos[i] ? std::exp(x[i]) : x[i];
    return p;
  };
  auto obj = [&](const std::vector<double>& x) { return loglik(f, unpack(x), data); };
  for (int r = 0; r < 5; ++r) x0 = oracle::nelder_mead_max(obj, x0, step, 20000, 1e-15);
  return unpack(x0);
}

std::vector<double> positive_sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> g(3.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng) + 0.5;
  return v;
}

}  // namespace

TEST(Families, NamesCountsAndParsing) {
  EXPECT_EQ(all_families().size(), 10u);
  for (Family f : all_families()) {
    EXPECT_EQ(family_from_string(to_string(f)), f);
    EXPECT_GE(parameter_count(f), 1);
    EXPECT_EQ(parameter_names(f).size(), static_cast<std::size_t>(parameter_count(f)));
  }
  EXPECT_EQ(parameter_count(Family::GEV), 3);
  EXPECT_EQ(parameter_count(Family::Exponential), 1);
  EXPECT_EQ(family_from_string("gev"), Family::GEV);
  EXPECT_EQ(family_from_string("GPD"), Family::GeneralizedPareto);
  EXPECT_EQ(family_from_string("log-normal"), Family::LogNormal);
  EXPECT_THROW(family_from_string("cauchy"), Error);
  EXPECT_EQ(parse_family_list("all"), all_families());
  EXPECT_EQ(parse_family_list("gev, normal"), (std::vector<Family>{Family::GEV, Family::Normal}));
  EXPECT_TRUE(requires_positive(Family::Gamma));
  EXPECT_FALSE(requires_positive(Family::Normal));
}

TEST(Families, ClosedFormsMatchTextbookEstimators) {
  const auto data = positive_sample(5000, 1);
  const double n = static_cast<double>(data.size());
  double mean = 0, sq = 0, lmean = 0;
  for (double x : data) {
    mean += x / n;
    sq += x * x;
    lmean += std::log(x) / n;
  }
  double var = 0, lvar = 0;
  for (double x : data) {
    var += (x - mean) * (x - mean) / n;
    lvar += (std::log(x) - lmean) * (std::log(x) - lmean) / n;
  }
  const auto normal = fit_family(Family::Normal, data);
  EXPECT_NEAR(normal.params[0], mean, 1e-10 * mean);
  EXPECT_NEAR(normal.params[1], std::sqrt(var), 1e-10 * std::sqrt(var));
  const auto ln = fit_family(Family::LogNormal, data);
  EXPECT_NEAR(ln.params[0], lmean, 1e-10);
  EXPECT_NEAR(ln.params[1], std::sqrt(lvar), 1e-10);
  EXPECT_NEAR(fit_family(Family::Exponential, data).params[0], 1 / mean, 1e-10 / mean);
  EXPECT_NEAR(fit_family(Family::Rayleigh, data).params[0], std::sqrt(sq / (2 * n)), 1e-10 * std::sqrt(sq / n));
}

class FamilyMle : public ::testing::TestWithParam<Family> {};

TEST_P(FamilyMle, AtLeastAsGoodAsDerivativeFreeSearch) {
  const Family f = GetParam();
  const auto data = positive_sample(3000, 7 + static_cast<int>(f));
  const auto fit = fit_family(f, data);
  EXPECT_EQ(fit.k, parameter_count(f));
  EXPECT_EQ(fit.n, data.size());
  EXPECT_NEAR(fit.loglik, loglik(f, fit.params, data), 1e-7 * std::fabs(fit.loglik));
  EXPECT_NEAR(fit.bic, fit.k * std::log(3000.0) - 2 * fit.loglik, 1e-9 * std::fabs(fit.bic));
  EXPECT_GE(fit.e_max, 0.0);
  EXPECT_LE(fit.e_max, 1.0);

  // Start the simplex 20% off the reported optimum in every free coordinate.
  std::vector<double> start(fit.params);
  const auto pos = positive_mask(f);
  for (std::size_t i = 0; i < start.size(); ++i) {
    if (f == Family::GeneralizedPareto && i == 2) continue;
    start[i] = pos[i] ? start[i] * 1.2 : start[i] + 0.2 * std::max(0.1, std::fabs(start[i]));
  }
  const auto nm = simplex_mle(f, start, data);
  const double nm_ll = loglik(f, nm, data);
  EXPECT_GE(fit.loglik, nm_ll - 1e-6 * std::fabs(nm_ll)) << to_string(f);
  for (std::size_t i = 0; i < nm.size(); ++i) {
    EXPECT_NEAR(fit.params[i], nm[i], 2e-3 * std::max(1.0, std::fabs(nm[i]))) << to_string(f) << " param " << i;
  }
}

TEST_P(FamilyMle, CdfIsMonotoneAndBounded) {
  const Family f = GetParam();
  const auto data = positive_sample(500, 3);
  const auto fit = fit_family(f, data);
  double prev = 0;
  for (double x = -5; x < 60; x += 0.05) {
    const double c = family_cdf(fit, x);
    ASSERT_GE(c, 0.0) << x;
    ASSERT_LE(c, 1.0) << x;
    ASSERT_GE(c, prev - 1e-15) << x;
    prev = c;
  }
  EXPECT_NEAR(family_cdf(fit, 1e6), 1.0, 1e-6);
}

INSTANTIATE_TEST_SUITE_P(All, FamilyMle, ::testing::ValuesIn(all_families()),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Families, PositiveSupportRejectsNonPositiveData) {
  auto data = positive_sample(100, 2);
  data[5] = 0.0;
  for (Family f : all_families()) {
    if (!requires_positive(f)) continue;
    try {
      fit_family(f, data);
      ADD_FAILURE() << to_string(f);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DomainError) << to_string(f);
    }
  }
  EXPECT_NO_THROW(fit_family(Family::Normal, data));
}

TEST(Families, DegenerateAndShortData) {
  for (Family f : all_families()) {
    try {
      fit_family(f, std::vector<double>(50, 3.0));
      ADD_FAILURE() << to_string(f);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DegenerateData) << to_string(f);
    }
    try {
      fit_family(f, positive_sample(10, 1));
      ADD_FAILURE() << to_string(f);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::TooFewPoints) << to_string(f);
    }
  }
}

TEST(Families, GevFitCarriesFullReport) {
  const auto data = positive_sample(1000, 4);
  const auto fit = fit_family(Family::GEV, data);
  ASSERT_TRUE(fit.gev.has_value());
  EXPECT_EQ(fit.params, (std::vector<double>{fit.gev->params.xi, fit.gev->params.sigma, fit.gev->params.mu}));
  EXPECT_EQ(fit.loglik, fit.gev->loglik);
}

// ---- model selection ----

TEST(Select, EmptyCandidatesGiveEmptyRanking) {
  const auto sel = select_model(positive_sample(100, 1), {});
  EXPECT_TRUE(sel.ranking.empty());
  EXPECT_TRUE(sel.excluded.empty());
}

TEST(Select, TooFewPoints) {
  const std::vector<Family> c{Family::Normal};
  try {
    select_model(positive_sample(19, 1), c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
}

TEST(Select, RankingOrderedByBicThenKThenName) {
  const auto data = positive_sample(2000, 5);
  const auto sel = select_model(data, all_families());
  EXPECT_EQ(sel.ranking.size() + sel.excluded.size(), 10u);
  for (std::size_t i = 1; i < sel.ranking.size(); ++i) {
    const auto& a = sel.ranking[i - 1];
    const auto& b = sel.ranking[i];
    const bool ordered = a.bic < b.bic || (a.bic == b.bic && (a.k < b.k || (a.k == b.k && to_string(a.family) <= to_string(b.family))));
    EXPECT_TRUE(ordered) << i;
  }
}

TEST(Select, PenaltyPrefersFewerParametersAtEqualFit) {
  // Exponential data: Gamma and Weibull nest the exponential with shape 1,
  // so their likelihood gain is tiny and the ln(n) penalty decides.
  std::mt19937_64 rng(9);
  std::exponential_distribution<double> e(0.25);
  std::vector<double> data(20000);
  for (auto& x : data) x = e(rng);
  const std::vector<Family> c{Family::Gamma, Family::Exponential, Family::Weibull};
  const auto sel = select_model(data, c);
  ASSERT_EQ(sel.ranking.size(), 3u);
  EXPECT_EQ(sel.ranking[0].family, Family::Exponential);
}

TEST(Select, DuplicatesFittedOnceAndFailuresExcluded) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> nd(0, 1);
  std::vector<double> data(500);
  for (auto& x : data) x = nd(rng);  // contains negatives
  const std::vector<Family> c{Family::Normal, Family::Gamma, Family::Normal, Family::Weibull};
  const auto sel = select_model(data, c);
  ASSERT_EQ(sel.ranking.size(), 1u);
  EXPECT_EQ(sel.ranking[0].family, Family::Normal);
  ASSERT_EQ(sel.excluded.size(), 2u);
  EXPECT_EQ(sel.excluded[0].family, Family::Gamma);
  EXPECT_EQ(sel.excluded[1].family, Family::Weibull);
  EXPECT_NE(sel.excluded[0].reason.find("DomainError"), std::string::npos) << sel.excluded[0].reason;
}

TEST(Select, PermutationInvariant) {
  auto data = evt::gev_sample({0.2, 10, 100}, 1500, 3);
  const auto a = select_model(data, all_families());
  std::mt19937_64 rng(2);
  std::shuffle(data.begin(), data.end(), rng);
  const auto b = select_model(data, all_families());
  ASSERT_EQ(a.ranking.size(), b.ranking.size());
  for (std::size_t i = 0; i < a.ranking.size(); ++i) {
    EXPECT_EQ(a.ranking[i].family, b.ranking[i].family);
    EXPECT_EQ(a.ranking[i].bic, b.ranking[i].bic);
  }
}
