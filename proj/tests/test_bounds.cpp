#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperconn/bounds.hpp"
#include "hyperconn/hypergraph.hpp"
#include "oracles.hpp"

using namespace hyperconn;

namespace {

EnsembleStatistics stats_for(int m, int M, double nu, double sigma2) {
  EnsembleStatistics s;
  s.k = connectivity_index(m, M);
  s.dim_upper = upper_dimension_factor(m, M);
  s.dim_lower = s.k;
  s.nu = nu;
  s.sigma2 = sigma2;
  return s;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

RealTensor p3_laplacian() {
  RealTensor::Matrix l(3, 3);
  l << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  return RealTensor(Shape{3}, l);
}

RealTensor random_psd(std::mt19937_64& gen, Index n) {
  std::normal_distribution<double> normal;
  RealTensor::Matrix a(n, n);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = normal(gen);
  return RealTensor(Shape{n}, RealTensor::Matrix(a * a.transpose() / double(n)));
}

}  // namespace

TEST(EnsembleStatistics, DeterministicP3Copies) {
  const RealTensor l = p3_laplacian();
  const RealTensor l2 = einstein_product(l, l);
  for (int n : {1, 4, 10}) {
    const auto s = ensemble_statistics(l, l2, 3, 1, n);
    EXPECT_NEAR(s.nu, double(n), 1e-10);
    EXPECT_NEAR(s.sigma2, double(n), 1e-10);
    EXPECT_EQ(s.k, 2);
    EXPECT_EQ(s.dim_upper, 2);
    EXPECT_EQ(s.dim_lower, 2);
  }
  const auto z = ensemble_statistics(RealTensor(Shape{3}), RealTensor(Shape{3}), 3, 1, 5);
  EXPECT_EQ(z.nu, 0.0);
  EXPECT_THROW(ensemble_statistics(l, l2, 3, 1, 0), InvalidInput);
  RealTensor::Matrix skew = l.matrix();
  skew(0, 1) = 5.0;
  EXPECT_THROW(ensemble_statistics(RealTensor(Shape{3}, skew), l2, 3, 1, 2), ContractError);
}

TEST(EnsembleStatistics, DimensionFactorsSum) {
  for (int m = 3; m <= 5; ++m)
    for (int M = 1; M <= 2 && M < m; ++M) {
      const Index n = oracle::int_pow(m, M);
      const RealTensor z(Shape::uniform(m, M));
      const auto s = ensemble_statistics(z, z, m, M, 1);
      EXPECT_EQ(s.dim_upper + s.dim_lower, n + 1);
    }
}

TEST(ClosedForms, SpotValues) {
  EXPECT_NEAR(chernoff_upper(2.0, stats_for(3, 1, 1.0, 1.0)), 2.0 * std::exp(2.0) / 27.0, 1e-14);
  EXPECT_NEAR(chernoff_upper(2.0, stats_for(3, 1, 1.0, 1.0)), 0.547337, 1e-6);
  EXPECT_NEAR(chernoff_lower(0.5, stats_for(3, 1, 2.0, 1.0)), 4.0 / std::exp(1.0), 1e-14);
  EXPECT_NEAR(chernoff_lower(0.5, stats_for(3, 1, 2.0, 1.0)), 1.4715, 1e-4);
  EXPECT_NEAR(bennett_upper(1.0, stats_for(3, 1, 1.0, 1.0)), std::exp(1.0) / 2.0, 1e-14);
  EXPECT_NEAR(bennett_upper(1.0, stats_for(3, 1, 1.0, 1.0)), 1.35914, 1e-5);
  EXPECT_NEAR(bernstein_upper(1.0, stats_for(3, 1, 1.0, 1.0)), 2.0 * std::exp(-0.25), 1e-14);
  EXPECT_NEAR(bernstein_upper(1.0, stats_for(3, 1, 1.0, 1.0)), 1.55760, 1e-5);
}

TEST(ClosedForms, SmallThetaLimits) {
  const auto s = stats_for(4, 2, 3.0, 2.0);
  EXPECT_NEAR(chernoff_upper(1e-9, s), double(s.dim_upper), 1e-6);
  EXPECT_EQ(chernoff_lower(0.0, s), double(s.dim_lower));
  EXPECT_NEAR(bennett_upper(1e-9, s), double(s.dim_upper), 1e-6);
  EXPECT_NEAR(bernstein_upper(1e-9, s), double(s.dim_upper), 1e-6);
}

TEST(ClosedForms, Errors) {
  const auto s = stats_for(3, 1, 1.0, 1.0);
  EXPECT_THROW(chernoff_upper(0.0, s), InvalidInput);
  EXPECT_THROW(chernoff_lower(1.0, s), InvalidInput);
  EXPECT_THROW(chernoff_lower(-0.1, s), InvalidInput);
  EXPECT_THROW(bennett_upper(-1.0, s), InvalidInput);
  EXPECT_THROW(bernstein_upper(0.0, s), InvalidInput);
  EXPECT_THROW(bennett_upper(1.0, stats_for(3, 1, 1.0, 0.0)), InvalidInput);
  EXPECT_THROW(bernstein_upper(1.0, stats_for(3, 1, 1.0, -1.0)), InvalidInput);
}

// Each closed form is dim * exp(g(t*)) for the family's exponent g; for the
// Chernoff pair and Bennett t* is the exact minimizer of g.
TEST(ClosedForms, EqualScalarOptimum) {
  std::mt19937_64 gen(51);
  std::uniform_real_distribution<double> pos(0.05, 10.0), unit(0.01, 0.99);
  for (int trial = 0; trial < 50; ++trial) {
    const double nu = pos(gen), sigma2 = pos(gen);
    const auto s = stats_for(4, 1, nu, sigma2);
    const double du = double(s.dim_upper), dl = double(s.dim_lower);

    const double th = pos(gen);
    auto g_cu = [&](double t) { return nu * std::expm1(t) - t * (1.0 + th) * nu; };
    const auto cu = oracle::ternary_minimize(g_cu, 0.0, 50.0);
    EXPECT_LT(rel_err(chernoff_upper(th, s), du * std::exp(cu.second)), 1e-8);
    EXPECT_LT(rel_err(chernoff_upper(th, s), du * std::exp(g_cu(std::log1p(th)))), 1e-10);
    EXPECT_NEAR(cu.first, std::log1p(th), 1e-4);

    const double tl = unit(gen);
    auto g_cl = [&](double t) { return nu * std::expm1(-t) + t * (1.0 - tl) * nu; };
    const auto cl = oracle::ternary_minimize(g_cl, 0.0, 50.0);
    EXPECT_LT(rel_err(chernoff_lower(tl, s), dl * std::exp(cl.second)), 1e-8);
    EXPECT_LT(rel_err(chernoff_lower(tl, s), dl * std::exp(g_cl(-std::log1p(-tl)))), 1e-10);

    auto g_be = [&](double t) { return (std::expm1(t) - t) * sigma2 - t * th; };
    const auto be = oracle::ternary_minimize(g_be, 0.0, 50.0);
    EXPECT_LT(rel_err(bennett_upper(th, s), du * std::exp(be.second)), 1e-8);
    EXPECT_LT(rel_err(bennett_upper(th, s), du * std::exp(g_be(std::log1p(th / sigma2)))), 1e-10);

    auto g_br = [&](double t) { return t * t * sigma2 / (2.0 * (1.0 - t)) - t * th; };
    const double t_star = th / (th + sigma2);
    EXPECT_LT(rel_err(bernstein_upper(th, s), du * std::exp(g_br(t_star))), 1e-10);
    // t* is not the exact minimizer here, so the true infimum can only be lower.
    const auto br = oracle::ternary_minimize(g_br, 0.0, 1.0 - 1e-12);
    EXPECT_LE(du * std::exp(br.second), bernstein_upper(th, s) * (1.0 + 1e-10));
  }
}

TEST(ClosedForms, MonotoneDecreasingAndOrdered) {
  const auto s = stats_for(5, 1, 3.0, 1.5);
  double prev_cu = INFINITY, prev_be = INFINITY, prev_br = INFINITY, prev_cl = -INFINITY;
  for (int i = 1; i <= 2000; ++i) {
    const double th = 0.01 * i;
    const double cu = chernoff_upper(th, s), be = bennett_upper(th, s), br = bernstein_upper(th, s);
    EXPECT_LT(cu, prev_cu);
    EXPECT_LT(be, prev_be);
    EXPECT_LT(br, prev_br);
    EXPECT_GE(br, be * (1.0 - 1e-12));
    prev_cu = cu;
    prev_be = be;
    prev_br = br;
  }
  // The lower-tail bound tightens as the relative deviation grows.
  prev_cl = INFINITY;
  for (int i = 0; i < 99; ++i) {
    const double cl = chernoff_lower(0.01 * i, s);
    EXPECT_LE(cl, prev_cl);
    prev_cl = cl;
  }
}

TEST(BoundCurve, ValuesNaNAndValidity) {
  const auto s = stats_for(3, 1, 2.0, 1.0);
  const std::vector<double> thetas{-1.0, 0.0, 0.5, 1.0, 2.0};
  const auto cu = bound_curve(BoundFamily::ChernoffUpper, thetas, s);
  EXPECT_EQ(cu.family, BoundFamily::ChernoffUpper);
  ASSERT_EQ(cu.values.size(), 5u);
  EXPECT_TRUE(std::isnan(cu.values[0]));
  EXPECT_TRUE(std::isnan(cu.values[1]));
  EXPECT_DOUBLE_EQ(cu.values[2], chernoff_upper(0.5, s));
  EXPECT_FALSE(cu.validity[2]);
  EXPECT_FALSE(cu.validity[3]);
  EXPECT_TRUE(cu.validity[4]);
  const auto cl = bound_curve(BoundFamily::ChernoffLower, thetas, s);
  EXPECT_TRUE(cl.validity[1]);
  EXPECT_TRUE(cl.validity[2]);
  EXPECT_TRUE(std::isnan(cl.values[3]));
  const auto be = bound_curve(BoundFamily::Bennett, thetas, stats_for(3, 1, 2.0, 0.0));
  for (double v : be.values) EXPECT_TRUE(std::isnan(v));
  for (double v : bound_curve(BoundFamily::Bernstein, {0.5, 1, 7}, s).values) EXPECT_GE(v, 0.0);
  EXPECT_THROW(bound_curve(BoundFamily::MasterNumeric, thetas, s), InvalidInput);
}

TEST(BoundFamily, NamesRoundTrip) {
  for (auto f : {BoundFamily::ChernoffUpper, BoundFamily::ChernoffLower, BoundFamily::Bennett,
                 BoundFamily::Bernstein, BoundFamily::MasterNumeric})
    EXPECT_EQ(bound_family_from_string(to_string(f)), f);
  EXPECT_EQ(to_string(BoundFamily::MasterNumeric), "master");
  EXPECT_THROW(bound_family_from_string("hoeffding"), InvalidInput);
}

TEST(Exponents, Values) {
  EXPECT_NEAR(chernoff_exponent(1.0), std::exp(1.0) - 1.0, 1e-15);
  EXPECT_NEAR(bennett_exponent(1.0), std::exp(1.0) - 2.0, 1e-15);
  EXPECT_NEAR(bernstein_exponent(0.5), 0.25, 1e-15);
}

TEST(MinimizeScalar, QuadraticAndErrors) {
  const auto r = minimize_scalar([](double t) { return (t - 3.0) * (t - 3.0) + 1.0; }, 1e-3, 10.0);
  EXPECT_NEAR(r.argmin, 3.0, 1e-6);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  const auto edge = minimize_scalar([](double t) { return -t; }, 0.1, 2.0);
  EXPECT_NEAR(edge.argmin, 2.0, 1e-9);
  EXPECT_THROW(minimize_scalar([](double t) { return t; }, 0.0, 1.0), InvalidInput);
  EXPECT_THROW(minimize_scalar([](double t) { return t; }, 2.0, 1.0), InvalidInput);
}

TEST(MasterBound, ZeroTensor) {
  const RealTensor zero(Shape{4});
  const double theta = 0.3;
  const auto mb = master_laplace_bound_detail(chernoff_exponent, zero, theta, 2);
  EXPECT_NEAR(mb.trace_bound, 3.0 * std::exp(-kDefaultTRange.hi * theta), 1e-12);
  EXPECT_NEAR(mb.t_star, kDefaultTRange.hi, 1e-6);
  EXPECT_GE(mb.trace_bound, 0.0);
}

TEST(MasterBound, ScalarCaseRecoversChernoff) {
  for (double nu : {0.5, 2.0, 7.0}) {
    for (double rel : {0.2, 1.0, 3.0}) {
      const RealTensor a(Shape{1}, RealTensor::Matrix::Constant(1, 1, nu));
      const double got = master_laplace_bound(chernoff_exponent, a, (1.0 + rel) * nu, 1);
      const double want = std::exp(nu * (rel - (1.0 + rel) * std::log1p(rel)));
      EXPECT_LT(rel_err(got, want), 1e-6);
    }
  }
}

TEST(MasterBound, DominatedByChernoffClosedForm) {
  std::mt19937_64 gen(52);
  std::uniform_real_distribution<double> rel(0.1, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 3 + trial % 6;
    const Index k = 1 + static_cast<Index>(gen() % static_cast<std::uint64_t>(n));
    const RealTensor a = random_psd(gen, n);
    EnsembleStatistics s;
    s.nu = kth_largest_eigenvalue(a, k);
    s.dim_upper = n - k + 1;
    const double r = rel(gen);
    const auto mb = master_laplace_bound_detail(chernoff_exponent, a, (1.0 + r) * s.nu, k);
    const double closed = chernoff_upper(r, s);
    EXPECT_LE(mb.trace_bound, closed * (1.0 + 1e-8));
    EXPECT_LE(mb.trace_bound, mb.relaxed_bound * (1.0 + 1e-12));
    EXPECT_LT(rel_err(mb.relaxed_bound, closed), 1e-8);
  }
}

TEST(MasterBound, BennettKernelMatchesClosedForm) {
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 20; ++trial) {
    const RealTensor a = random_psd(gen, 5);
    EnsembleStatistics s;
    s.sigma2 = kth_largest_eigenvalue(a, 2);
    s.dim_upper = 4;
    const double theta = 0.5 + trial * 0.3;
    const auto mb = master_laplace_bound_detail(bennett_exponent, a, theta, 2);
    EXPECT_LT(rel_err(mb.relaxed_bound, bennett_upper(theta, s)), 1e-8);
    const auto br = master_laplace_bound_detail(bernstein_exponent, a, theta, 2, kBernsteinTRange);
    EXPECT_LE(br.relaxed_bound, bernstein_upper(theta, s) * (1.0 + 1e-8));
  }
}

TEST(MasterBound, Errors) {
  const RealTensor a = p3_laplacian();
  EXPECT_THROW(master_laplace_bound(chernoff_exponent, a, 1.0, 2, TRange{1.0, 1.0}), InvalidInput);
  EXPECT_THROW(master_laplace_bound(chernoff_exponent, a, 1.0, 2, TRange{0.0, 1.0}), InvalidInput);
  EXPECT_THROW(master_laplace_bound(chernoff_exponent, a, 1.0, 0), InvalidInput);
  EXPECT_THROW(master_laplace_bound(chernoff_exponent, a, 1.0, 4), InvalidInput);
  EXPECT_THROW(master_laplace_bound(chernoff_exponent, scale(-1.0, a), 1.0, 2), ContractError);
}

TEST(Subexponential, Examples) {
  auto scalar = [](double v) { return RealTensor(Shape{1}, RealTensor::Matrix::Constant(1, 1, v)); };
  const std::vector<RealTensor> zeros(5, RealTensor(Shape{2}));
  const std::span<const RealTensor> zs(zeros);
  EXPECT_TRUE(check_subexponential(zs, identity<double>(Shape{2}), 6));
  const std::vector<RealTensor> twos(3, scalar(2.0));
  EXPECT_FALSE(check_subexponential(std::span<const RealTensor>(twos), scalar(1.0), 2));
  std::mt19937_64 gen(54);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<RealTensor> bounded;
  for (int i = 0; i < 200; ++i) bounded.push_back(scalar(u(gen)));
  EXPECT_TRUE(check_subexponential(std::span<const RealTensor>(bounded), scalar(std::sqrt(2.0)), 8));
  const std::vector<RealTensor> none;
  EXPECT_THROW(check_subexponential(std::span<const RealTensor>(none), scalar(1.0), 2), InvalidInput);
  EXPECT_THROW(check_subexponential(std::span<const RealTensor>(twos), scalar(0.0), 2), ContractError);
  EXPECT_THROW(check_subexponential(std::span<const RealTensor>(twos), scalar(1.0), 1), InvalidInput);
}
