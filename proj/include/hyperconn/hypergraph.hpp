#pragma once

// Weighted symmetric 2M-uniform hypergraphs and their Laplacian tensors.
//
// Vertex ids are 0-based, in [0, m). A hyperedge is split into a source and
// a destination side of M distinct vertices each, with disjoint sides.

#include <cstdint>
#include <vector>

#include "hyperconn/tensor.hpp"

namespace hyperconn {

using Vertex = int;

struct Hyperedge {
  std::vector<Vertex> source;  // sorted, M distinct ids
  std::vector<Vertex> dest;    // sorted, M distinct ids
  double weight = 0.0;

  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

class Hypergraph {
 public:
  /// Validates the edge list and adds any missing mirror edges (D, S, w).
  /// Throws InvalidInput on malformed edges, duplicates, mismatched mirror
  /// weights, or m <= M.
  Hypergraph(int m, int M, std::vector<Hyperedge> edges);

  int vertex_count() const { return m_; }
  int half_uniformity() const { return M_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  Shape laplacian_shape() const { return Shape::uniform(m_, M_); }

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  int m_;
  int M_;
  std::vector<Hyperedge> edges_;
};

struct LaplacianTensor {
  RealTensor value;
  int m = 0;
  int M = 0;
};

RealTensor adjacency_tensor(const Hypergraph& g);
RealTensor degree_tensor(const Hypergraph& g);
LaplacianTensor laplacian_tensor(const Hypergraph& g);

/// m! / (m - M)! - 1, the eigenvalue rank of the algebraic connectivity.
Index connectivity_index(int m, int M);

/// m^M - m!/(m-M)! + 2, the dimension factor of the upper-tail bounds.
Index upper_dimension_factor(int m, int M);

/// Lambda_k of the Laplacian (descending) with k = connectivity_index(m, M).
double algebraic_connectivity(const LaplacianTensor& laplacian);
double algebraic_connectivity(const RealTensor& laplacian, int m, int M);

/// True iff every M-subset of the vertex set lies in some hyperedge and every
/// ordered pair of M-subsets is joined by an M-path.
bool is_M_connected(const Hypergraph& g);

/// Entrywise sum of Laplacians sharing one shape.
LaplacianTensor ensemble_laplacian(const std::vector<LaplacianTensor>& laplacians);

/// All M-subsets of [0, m) in lexicographic order.
std::vector<std::vector<Vertex>> m_subsets(int m, int M);

/// All unordered pairs {S, D} of disjoint M-subsets with S < D
/// lexicographically. This is the candidate edge set of the random models.
std::vector<std::pair<std::vector<Vertex>, std::vector<Vertex>>> disjoint_side_pairs(int m, int M);

/// Laplacian of the single symmetric edge pair {S->D, D->S} with unit weight.
RealTensor pair_laplacian(int m, int M, const std::vector<Vertex>& source,
                          const std::vector<Vertex>& dest);

}  // namespace hyperconn
