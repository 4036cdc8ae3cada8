#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "voipstat/error.hpp"
#include "voipstat/stats/boxplot.hpp"
#include "voipstat/stats/ecdf.hpp"
#include "voipstat/stats/histogram.hpp"
#include "voipstat/stats/pca.hpp"

using namespace voipstat;
using namespace voipstat::stats;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::Io;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

// ---- ECDF ----

TEST(Ecdf, SinglePoint) {
  const EmpiricalCdf f(std::vector<double>{5});
  EXPECT_EQ(f(4.999), 0.0);
  EXPECT_EQ(f(5), 1.0);
  EXPECT_EQ(f(100), 1.0);
}

TEST(Ecdf, HandCountAndTies) {
  const EmpiricalCdf f(std::vector<double>{1, 2, 3, 4});
  EXPECT_EQ(f(2.5), 0.5);
  const EmpiricalCdf g(std::vector<double>{3, 1, 3, 2});
  EXPECT_EQ(g.points(), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(g.probabilities(), (std::vector<double>{0.25, 0.5, 1.0}));
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(code_of([] { EmpiricalCdf e({}); }), ErrorCode::EmptyData);
}

TEST(Ecdf, PermutationInvariantMonotoneAndBounded) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0, 3);
  std::vector<double> data(400);
  for (auto& x : data) x = std::round(nd(rng) * 4) / 4;
  const EmpiricalCdf a(data);
  std::shuffle(data.begin(), data.end(), rng);
  const EmpiricalCdf b(data);
  EXPECT_EQ(a.points(), b.points());
  EXPECT_EQ(a.probabilities(), b.probabilities());
  const double lo = *std::min_element(data.begin(), data.end());
  const double hi = *std::max_element(data.begin(), data.end());
  EXPECT_EQ(a(lo - 1e-9), 0.0);
  EXPECT_EQ(a(hi), 1.0);
  double prev = 0;
  for (double x = lo - 1; x <= hi + 1; x += 0.01) {
    EXPECT_GE(a(x), prev);
    prev = a(x);
  }
}

// ---- histogram ----

TEST(Histogram, IdenticalPointsSingleCell) {
  const std::vector<double> x(10, 2.0), y(10, -1.0);
  const auto h = bivariate_hist(x, y, 5, 5);
  EXPECT_EQ(h.nx(), 1u);
  EXPECT_EQ(h.ny(), 1u);
  EXPECT_EQ(h.counts[0][0], 10u);
  EXPECT_EQ(h.density[0][0], 1.0);
  EXPECT_EQ(h.x_edges, (std::vector<double>{2.0, 2.0}));
}

TEST(Histogram, SquareCornersTwoByTwo) {
  const std::vector<double> x{0, 1, 0, 1}, y{0, 0, 1, 1};
  const auto h = bivariate_hist(x, y, 2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(h.counts[i][j], 1u);
      EXPECT_EQ(h.density[i][j], 0.25);
    }
  }
  EXPECT_EQ(h.x_edges, (std::vector<double>{0, 0.5, 1}));
}

TEST(Histogram, OneByOneHoldsEverything) {
  const std::vector<double> x{3, 1, 4, 1, 5}, y{9, 2, 6, 5, 3};
  const auto h = bivariate_hist(x, y, 1, 1);
  EXPECT_EQ(h.counts[0][0], 5u);
}

TEST(Histogram, Errors) {
  const std::vector<double> a{1, 2}, b{1};
  EXPECT_EQ(code_of([&] { bivariate_hist(a, b); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([] { bivariate_hist({}, {}); }), ErrorCode::EmptyData);
  EXPECT_EQ(code_of([&] { bivariate_hist(a, a, 0, 3); }), ErrorCode::BadInput);
  const std::vector<double> bad{1, NAN};
  EXPECT_EQ(code_of([&] { bivariate_hist(bad, a); }), ErrorCode::BadInput);
}

TEST(Histogram, ConservesCountsAndPermutationInvariant) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0, 1);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 1 + rng() % 500;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = nd(rng);
      y[i] = (round % 5 == 0) ? 1.0 : std::exp(nd(rng));
    }
    const auto h = bivariate_hist(x, y, 1 + rng() % 40, 1 + rng() % 40);
    std::uint64_t total = 0;
    double dsum = 0;
    for (std::size_t i = 0; i < h.nx(); ++i) {
      for (std::size_t j = 0; j < h.ny(); ++j) {
        total += h.counts[i][j];
        dsum += h.density[i][j];
      }
    }
    EXPECT_EQ(total, n);
    EXPECT_NEAR(dsum, 1.0, 1e-12);
    EXPECT_TRUE(std::is_sorted(h.x_edges.begin(), h.x_edges.end()));

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<double> px(n), py(n);
    for (std::size_t i = 0; i < n; ++i) {
      px[i] = x[idx[i]];
      py[i] = y[idx[i]];
    }
    EXPECT_EQ(bivariate_hist(px, py, h.nx(), h.ny()).counts, h.counts);
  }
}

TEST(Histogram, MaximumLandsInLastBin) {
  const std::vector<double> x{0, 10}, y{0, 10};
  const auto h = bivariate_hist(x, y, 10, 10);
  EXPECT_EQ(h.counts[9][9], 1u);
  EXPECT_EQ(h.counts[0][0], 1u);
}

// ---- boxplot ----

TEST(Boxplot, OneToFive) {
  const auto b = boxplot_stats(std::vector<double>{5, 3, 1, 4, 2});
  EXPECT_EQ(b.median, 3.0);
  EXPECT_EQ(b.q1, 2.0);
  EXPECT_EQ(b.q3, 4.0);
  EXPECT_EQ(b.iqr, 2.0);
  EXPECT_EQ(b.whisker_lo, 1.0);
  EXPECT_EQ(b.whisker_hi, 5.0);
  EXPECT_TRUE(b.outliers.empty());
  EXPECT_EQ(b.n, 5u);
}

TEST(Boxplot, ConstantData) {
  const auto b = boxplot_stats(std::vector<double>(7, 1.392));
  EXPECT_EQ(b.median, 1.392);
  EXPECT_EQ(b.q1, 1.392);
  EXPECT_EQ(b.q3, 1.392);
  EXPECT_EQ(b.iqr, 0.0);
  EXPECT_EQ(b.whisker_lo, 1.392);
  EXPECT_EQ(b.whisker_hi, 1.392);
  EXPECT_TRUE(b.outliers.empty());
}

TEST(Boxplot, OutliersAndWhiskers) {
  const std::vector<double> d{1, 2, 3, 4, 5, 6, 7, 8, 9, 100, -50};
  const auto b = boxplot_stats(d);
  EXPECT_EQ(b.outliers, (std::vector<double>{-50, 100}));
  EXPECT_EQ(b.whisker_lo, 1.0);
  EXPECT_EQ(b.whisker_hi, 9.0);
  EXPECT_EQ(code_of([] { boxplot_stats({}); }), ErrorCode::EmptyData);
}

TEST(Boxplot, QuantilesMatchOracleAndShiftEquivariant) {
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> ld(0, 1);
  for (int round = 0; round < 50; ++round) {
    std::vector<double> d(1 + rng() % 300);
    for (auto& x : d) x = ld(rng);
    const auto b = boxplot_stats(d);
    EXPECT_NEAR(b.median, oracle::quantile_naive(d, 0.5), 1e-12);
    EXPECT_NEAR(b.q1, oracle::quantile_naive(d, 0.25), 1e-12);
    EXPECT_NEAR(b.q3, oracle::quantile_naive(d, 0.75), 1e-12);
    EXPECT_LE(b.q1, b.median);
    EXPECT_LE(b.median, b.q3);
    EXPECT_GE(b.iqr, 0.0);

    const double c = 17.25;
    std::vector<double> s(d);
    for (auto& x : s) x += c;
    const auto bs = boxplot_stats(s);
    EXPECT_NEAR(bs.median, b.median + c, 1e-9);
    EXPECT_NEAR(bs.q1, b.q1 + c, 1e-9);
    EXPECT_NEAR(bs.q3, b.q3 + c, 1e-9);
    EXPECT_NEAR(bs.whisker_lo, b.whisker_lo + c, 1e-9);
    EXPECT_NEAR(bs.whisker_hi, b.whisker_hi + c, 1e-9);
    EXPECT_NEAR(bs.iqr, b.iqr, 1e-9);
  }
}

// ---- PCA ----

TEST(Jacobi, DiagonalAndKnownSpectrum) {
  const auto e = jacobi_eigen({{4, 0}, {0, 1}});
  EXPECT_EQ(e.values, (std::vector<double>{4, 1}));
  const auto f = jacobi_eigen({{2, 1}, {1, 2}});
  EXPECT_NEAR(f.values[0], 3, 1e-12);
  EXPECT_NEAR(f.values[1], 1, 1e-12);
  EXPECT_NEAR(std::fabs(f.vectors[0][0]), std::sqrt(0.5), 1e-12);
}

TEST(Pca, DiagonalCovariance) {
  // Columns with variances 4 and 1, uncorrelated by construction.
  Matrix obs{{2, 0}, {-2, 0}, {0, 1}, {0, -1}, {2, 0}, {-2, 0}, {0, 1}, {0, -1}};
  // Sample variance: x has 4 * 8 / 7 ... scale so it is exactly 4 and 1.
  const double sx = std::sqrt(4.0 * 7.0 / 16.0), sy = std::sqrt(7.0 / 4.0);
  for (auto& r : obs) {
    r[0] *= sx;
    r[1] *= sy;
  }
  const auto p = pca(obs, 2, false);
  EXPECT_NEAR(p.explained[0], 4.0, 1e-12);
  EXPECT_NEAR(p.explained[1], 1.0, 1e-12);
  EXPECT_NEAR(p.components[0][0], 1.0, 1e-12);
  EXPECT_NEAR(p.components[0][1], 0.0, 1e-12);
}

TEST(Pca, PerfectlyCorrelatedPairIsRankOne) {
  Matrix obs;
  for (int i = 0; i < 50; ++i) obs.push_back({i * 0.3, 2 * i * 0.3});
  const auto p = pca(obs, 2, true);
  EXPECT_NEAR(p.explained_ratio[0], 1.0, 1e-12);
  EXPECT_NEAR(p.explained[1], 0.0, 1e-9);
  EXPECT_NEAR(p.total_variance, 2.0, 1e-12);
}

TEST(Pca, FullRankScoresReconstructCenteredData) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0, 1);
  Matrix obs(60, std::vector<double>(4));
  for (auto& r : obs) {
    const double z = nd(rng);
    r = {z + nd(rng) * 0.1, 3 * z + nd(rng), nd(rng) * 5 + 10, -z};
  }
  for (bool standardize : {false, true}) {
    const auto p = pca(obs, 4, standardize);
    for (std::size_t i = 0; i < obs.size(); ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        double rec = 0;
        for (std::size_t c = 0; c < 4; ++c) rec += p.scores[i][c] * p.components[c][j];
        const double centered = (obs[i][j] - p.means[j]) / p.scales[j];
        EXPECT_NEAR(rec, centered, 1e-9);
      }
    }
  }
}

TEST(Pca, InvariantsRandomized) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0, 1);
  for (int round = 0; round < 30; ++round) {
    const std::size_t m = 2 + rng() % 5;
    const std::size_t n = m + 2 + rng() % 100;
    Matrix obs(n, std::vector<double>(m));
    for (auto& r : obs) {
      const double z = nd(rng);
      for (std::size_t j = 0; j < m; ++j) r[j] = (j + 1) * z * (round % 3) + nd(rng) * (j + 1) + j;
    }
    for (bool standardize : {false, true}) {
      const auto p = pca(obs, m, standardize);
      // Trace of the decomposed matrix from an independent covariance.
      auto c = oracle::covariance(obs);
      double trace = 0;
      for (std::size_t j = 0; j < m; ++j) trace += standardize ? 1.0 : c[j][j];
      EXPECT_NEAR(std::accumulate(p.explained.begin(), p.explained.end(), 0.0), trace, 1e-8 * std::max(1.0, trace));
      EXPECT_NEAR(p.total_variance, trace, 1e-8 * std::max(1.0, trace));
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          EXPECT_NEAR(dot(p.components[a], p.components[b]), a == b ? 1.0 : 0.0, 1e-9);
        }
        if (a > 0) {
          EXPECT_GE(p.explained[a - 1], p.explained[a] - 1e-12);
        }
        // Sign convention: the largest-magnitude loading is positive.
        const auto& comp = p.components[a];
        const auto big = std::max_element(comp.begin(), comp.end(), [](double x, double y) { return std::fabs(x) < std::fabs(y); });
        EXPECT_GT(*big, 0.0);
      }
    }
  }
}

TEST(Pca, StandardizedResultInvariantUnderAffineRescaling) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd(0, 1);
  Matrix obs(80, std::vector<double>(3));
  for (auto& r : obs) {
    const double z = nd(rng);
    r = {z + 0.3 * nd(rng), nd(rng), -2 * z + nd(rng)};
  }
  Matrix scaled(obs);
  for (auto& r : scaled) {
    r[0] = 1000 * r[0] + 5;
    r[1] = 0.001 * r[1] - 3;
    r[2] = 7 * r[2];
  }
  const auto a = pca(obs, 3, true);
  const auto b = pca(scaled, 3, true);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_NEAR(a.explained[c], b.explained[c], 1e-9);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.components[c][j], b.components[c][j], 1e-7);
  }
}

TEST(Pca, Errors) {
  EXPECT_EQ(code_of([] { pca({{1, 2}}, 1); }), ErrorCode::TooFewPoints);
  EXPECT_EQ(code_of([] { pca({{1, 2}, {3}}, 1); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([] { pca({{1, 2}, {3, 4}}, 0); }), ErrorCode::BadK);
  EXPECT_EQ(code_of([] { pca({{1, 2}, {3, 4}}, 3); }), ErrorCode::BadK);
  EXPECT_EQ(code_of([] { pca({{1, 2}, {1, 4}, {1, 5}}, 1, true); }), ErrorCode::ZeroVariance);
  EXPECT_NO_THROW(pca({{1, 2}, {1, 4}, {1, 5}}, 1, false));
}
