#include "hyperconn/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "hyperconn/errors.hpp"
#include "hyperconn/spectral.hpp"

namespace hyperconn {

namespace {

using Side = std::vector<Vertex>;

void normalize_side(Side& side, int m, int M, const char* which) {
  std::sort(side.begin(), side.end());
  if (static_cast<int>(side.size()) != M)
    throw InvalidInput(std::string("hyperedge ") + which + " side must have exactly M vertices");
  if (std::adjacent_find(side.begin(), side.end()) != side.end())
    throw InvalidInput(std::string("hyperedge ") + which + " side has repeated vertices");
  if (side.front() < 0 || side.back() >= m)
    throw InvalidInput(std::string("hyperedge ") + which + " side has a vertex id outside [0, m)");
}

bool disjoint(const Side& a, const Side& b) {
  Side common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.empty();
}

// Calls fn(flat row index) for every ordered arrangement of a sorted side.
template <typename Fn>
void for_each_arrangement(const Shape& shape, Side side, Fn&& fn) {
  std::vector<Index> multi(side.size());
  do {
    std::copy(side.begin(), side.end(), multi.begin());
    fn(shape.flatten(multi));
  } while (std::next_permutation(side.begin(), side.end()));
}

Index falling_factorial(int m, int M) {
  Index out = 1;
  for (int i = 0; i < M; ++i) out *= (m - i);
  return out;
}

Index int_pow(Index base, int exp) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void require_valid_order(int m, int M) {
  if (M < 1) throw InvalidInput("half-uniformity M must be >= 1");
  if (m <= M) throw InvalidInput("vertex count m must exceed M");
}

}  // namespace

Hypergraph::Hypergraph(int m, int M, std::vector<Hyperedge> edges) : m_(m), M_(M) {
  require_valid_order(m, M);
  std::map<std::pair<Side, Side>, double> by_sides;
  for (auto& e : edges) {
    normalize_side(e.source, m, M, "source");
    normalize_side(e.dest, m, M, "dest");
    if (!disjoint(e.source, e.dest)) throw InvalidInput("hyperedge source and dest must be disjoint");
    if (!std::isfinite(e.weight)) throw InvalidInput("hyperedge weight must be finite");
    if (!by_sides.emplace(std::make_pair(e.source, e.dest), e.weight).second)
      throw InvalidInput("duplicate hyperedge (same source and dest)");
  }
  for (const auto& [sides, w] : std::map(by_sides)) {
    auto mirror = std::make_pair(sides.second, sides.first);
    auto it = by_sides.find(mirror);
    if (it == by_sides.end()) {
      by_sides.emplace(mirror, w);
    } else if (it->second != w) {
      throw InvalidInput("mirror hyperedges must carry equal weights");
    }
  }
  edges_.reserve(by_sides.size());
  for (const auto& [sides, w] : by_sides) edges_.push_back({sides.first, sides.second, w});
}

RealTensor adjacency_tensor(const Hypergraph& g) {
  const Shape shape = g.laplacian_shape();
  RealTensor::Matrix a = RealTensor::Matrix::Zero(shape.total(), shape.total());
  for (const auto& e : g.edges()) {
    for_each_arrangement(shape, e.source, [&](Index row) {
      for_each_arrangement(shape, e.dest, [&](Index col) { a(row, col) = e.weight; });
    });
  }
  return RealTensor(shape, a);
}

RealTensor degree_tensor(const Hypergraph& g) {
  const RealTensor a = adjacency_tensor(g);
  RealTensor::Matrix d = a.matrix().rowwise().sum().asDiagonal();
  return RealTensor(a.row_shape(), d);
}

LaplacianTensor laplacian_tensor(const Hypergraph& g) {
  const RealTensor a = adjacency_tensor(g);
  RealTensor::Matrix l = -a.matrix();
  l.diagonal() += a.matrix().rowwise().sum();
  return {RealTensor(a.row_shape(), l), g.vertex_count(), g.half_uniformity()};
}

Index connectivity_index(int m, int M) {
  require_valid_order(m, M);
  return falling_factorial(m, M) - 1;
}

Index upper_dimension_factor(int m, int M) {
  require_valid_order(m, M);
  return int_pow(m, M) - falling_factorial(m, M) + 2;
}

double algebraic_connectivity(const RealTensor& laplacian, int m, int M) {
  const Index k = connectivity_index(m, M);
  if (!(laplacian.row_shape() == Shape::uniform(m, M)))
    throw DimensionError("algebraic_connectivity: Laplacian shape does not match (m, M)");
  return kth_largest_eigenvalue(laplacian, k);
}

double algebraic_connectivity(const LaplacianTensor& laplacian) {
  return algebraic_connectivity(laplacian.value, laplacian.m, laplacian.M);
}

std::vector<Side> m_subsets(int m, int M) {
  std::vector<Side> out;
  Side current;
  auto recurse = [&](auto&& self, int next) -> void {
    if (static_cast<int>(current.size()) == M) {
      out.push_back(current);
      return;
    }
    for (int v = next; v < m; ++v) {
      current.push_back(v);
      self(self, v + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

std::vector<std::pair<Side, Side>> disjoint_side_pairs(int m, int M) {
  require_valid_order(m, M);
  const auto subsets = m_subsets(m, M);
  std::vector<std::pair<Side, Side>> out;
  for (std::size_t i = 0; i < subsets.size(); ++i)
    for (std::size_t j = i + 1; j < subsets.size(); ++j)
      if (disjoint(subsets[i], subsets[j])) out.emplace_back(subsets[i], subsets[j]);
  return out;
}

RealTensor pair_laplacian(int m, int M, const Side& source, const Side& dest) {
  return laplacian_tensor(Hypergraph(m, M, {{source, dest, 1.0}})).value;
}

bool is_M_connected(const Hypergraph& g) {
  const int M = g.half_uniformity();

  // Distinct vertex sets E = S u D; mirrored edges collapse to one set.
  std::set<Side> unique_sets;
  for (const auto& e : g.edges()) {
    Side all;
    std::merge(e.source.begin(), e.source.end(), e.dest.begin(), e.dest.end(), std::back_inserter(all));
    unique_sets.insert(all);
  }
  const std::vector<Side> sets(unique_sets.begin(), unique_sets.end());
  const int n = static_cast<int>(sets.size());
  if (n == 0) return false;

  auto intersect = [](const Side& a, const Side& b) {
    Side out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };
  auto contains = [](const Side& super, const Side& sub) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
  };

  // Consecutive hyperedges share exactly M vertices.
  std::vector<std::vector<int>> step(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && static_cast<int>(intersect(sets[a], sets[b]).size()) == M) step[a].push_back(b);

  // reach[s][e]: some M-path starting at hyperedge s ends at hyperedge e.
  // Search states are (previous, current) so that the triple-intersection
  // constraint can be enforced on every step.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int start = 0; start < n; ++start) {
    std::vector<std::vector<bool>> seen(n + 1, std::vector<bool>(n, false));  // prev == n means none
    std::vector<std::pair<int, int>> stack{{n, start}};
    seen[n][start] = true;
    while (!stack.empty()) {
      const auto [prev, cur] = stack.back();
      stack.pop_back();
      reach[start][cur] = true;
      for (int next : step[cur]) {
        if (prev != n && !intersect(intersect(sets[prev], sets[cur]), sets[next]).empty()) continue;
        if (seen[cur][next]) continue;
        seen[cur][next] = true;
        stack.emplace_back(cur, next);
      }
    }
  }

  const auto subsets = m_subsets(g.vertex_count(), M);
  std::vector<std::vector<int>> holders(subsets.size());
  for (std::size_t p = 0; p < subsets.size(); ++p) {
    for (int e = 0; e < n; ++e)
      if (contains(sets[e], subsets[p])) holders[p].push_back(e);
    if (holders[p].empty()) return false;
  }

  for (std::size_t p = 0; p < subsets.size(); ++p) {
    std::vector<bool> reachable(n, false);
    for (int s : holders[p])
      for (int e = 0; e < n; ++e)
        if (reach[s][e]) reachable[e] = true;
    for (std::size_t q = 0; q < subsets.size(); ++q) {
      const bool joined = std::any_of(holders[q].begin(), holders[q].end(),
                                      [&](int e) { return reachable[e]; });
      if (!joined) return false;
    }
  }
  return true;
}

LaplacianTensor ensemble_laplacian(const std::vector<LaplacianTensor>& laplacians) {
  if (laplacians.empty()) throw InvalidInput("ensemble_laplacian: empty list");
  const auto& first = laplacians.front();
  RealTensor::Matrix acc = RealTensor::Matrix::Zero(first.value.total(), first.value.total());
  for (const auto& l : laplacians) {
    if (!(l.value.row_shape() == first.value.row_shape()) || l.m != first.m || l.M != first.M)
      throw DimensionError("ensemble_laplacian: shape mismatch");
    acc += l.value.matrix();
  }
  return {RealTensor(first.value.row_shape(), acc), first.m, first.M};
}

}  // namespace hyperconn
