#include "hyperconn/selftest.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "hyperconn/bounds.hpp"
#include "hyperconn/hypergraph.hpp"
#include "hyperconn/spectral.hpp"

namespace hyperconn {

namespace {

struct Checker {
  std::ostream& out;
  int failures = 0;

  void expect_near(const std::string& name, double got, double want, double tol) {
    const bool ok = std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
    if (!ok) ++failures;
    out << (ok ? "ok   " : "FAIL ") << name << ": " << got << " (expected " << want << ")\n";
  }
};

Hypergraph simple_graph(int m, std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<Hyperedge> edges;
  for (auto [a, b] : pairs) edges.push_back({{a}, {b}, 1.0});
  return Hypergraph(m, 1, std::move(edges));
}

}  // namespace

int run_selftest(std::ostream& out) {
  Checker c{out};

  c.expect_near("alpha(P3)", algebraic_connectivity(laplacian_tensor(simple_graph(3, {{0, 1}, {1, 2}}))), 1.0,
                1e-9);
  c.expect_near("alpha(K3)",
                algebraic_connectivity(laplacian_tensor(simple_graph(3, {{0, 1}, {1, 2}, {0, 2}}))), 3.0, 1e-9);
  c.expect_near("alpha(C4)",
                algebraic_connectivity(laplacian_tensor(simple_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}))), 2.0,
                1e-9);

  EnsembleStatistics stats;
  stats.dim_upper = 2;
  stats.dim_lower = 2;
  stats.nu = 1.0;
  stats.sigma2 = 1.0;
  c.expect_near("chernoff_upper(theta=2, nu=1, d=2)", chernoff_upper(2.0, stats), 2.0 * std::exp(2.0) / 27.0,
                1e-12);
  c.expect_near("bennett_upper(theta=1, sigma2=1, d=2)", bennett_upper(1.0, stats), std::exp(1.0) / 2.0, 1e-12);
  c.expect_near("bernstein_upper(theta=1, sigma2=1, d=2)", bernstein_upper(1.0, stats), 2.0 * std::exp(-0.25),
                1e-12);

  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal;
  const Shape shape{2, 3};
  RealTensor::Matrix a(6, 6), b(6, 6);
  for (Index i = 0; i < 36; ++i) {
    a(i / 6, i % 6) = normal(gen);
    b(i / 6, i % 6) = normal(gen);
  }
  const RealTensor x(shape, a), y(shape, b);
  c.expect_near("einstein product vs unfolded product",
                (unfold(einstein_product(x, y)) - a * b).norm(), 0.0, 1e-10);

  const RealTensor h(shape, (a + a.transpose()) / 4.0);
  const RealTensor e = tensor_exp(h);
  c.expect_near("trace exp = sum exp eigenvalues", trace(e),
                eigenvalues_descending(h).array().exp().sum(), 1e-10);
  c.expect_near("log(exp(X)) = X", frobenius_norm(subtract(tensor_log(e), h)), 0.0, 1e-8);

  out << (c.failures == 0 ? "selftest passed" : "selftest failed") << "\n";
  return c.failures;
}

}  // namespace hyperconn
