#pragma once

// Random weighted symmetric 2M-uniform hypergraph ensembles.
//
// Every random model draws one weight per candidate pair {S, D} (S < D, both
// M-subsets, disjoint); the pair and its mirror share the weight. Sampling is
// a pure function of (seed, stream index), so trials can run in any order.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "hyperconn/hypergraph.hpp"
#include "hyperconn/tensor.hpp"

namespace hyperconn {

/// Each candidate pair is present with probability p, at weight `weight`.
struct BernoulliEdge {
  double p = 0.5;
  double weight = 1.0;
};

/// Each candidate pair carries an independent U[a, b] weight.
struct UniformWeight {
  double a = 0.0;
  double b = 1.0;
};

/// Base weights perturbed by independent U[-scale, scale] noise. Without an
/// explicit base graph every candidate pair has weight `base_weight`.
struct CenteredBounded {
  double base_weight = 1.0;
  double scale = 0.5;
  std::optional<Hypergraph> base;
};

using WeightDistribution = std::variant<BernoulliEdge, UniformWeight, CenteredBounded>;

struct EnsembleSpec {
  int N = 1;
  int m = 3;
  int M = 1;
  WeightDistribution distribution = BernoulliEdge{};
  bool center = false;     // subtract the population mean Laplacian per trial
  bool normalize = false;  // rescale so lambda_max <= 1 almost surely
  std::uint64_t seed = 0;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

std::string distribution_name(const WeightDistribution& d);

/// Deterministic draw for stream index `stream` (>= 0).
Hypergraph sample_hypergraph(const EnsembleSpec& spec, std::int64_t stream);

/// Exact population mean of the (raw, uncentered) Laplacian.
RealTensor expected_laplacian(const EnsembleSpec& spec);

/// Precomputed per-trial quantities of an ensemble: the centering/normalizing
/// policy and the exact first and second moments of one member tensor.
class EnsembleModel {
 public:
  explicit EnsembleModel(EnsembleSpec spec);

  const EnsembleSpec& spec() const { return spec_; }
  Shape shape() const { return Shape::uniform(spec_.m, spec_.M); }

  /// Scale factor applied after optional centering (1 when not normalizing).
  double normalization_scale() const { return scale_; }

  /// Almost-sure bound on the spectral norm of the centered (or raw) member
  /// before scaling.
  double spectral_bound() const { return spectral_bound_; }

  const RealTensor& expected_laplacian() const { return expected_; }

  /// scale * (L - [center] E L) for the member drawn from `stream`.
  RealTensor member_tensor(std::int64_t stream) const;

  /// E of one member tensor after the policy (zero when centering).
  RealTensor member_mean() const;

  /// E of the square of one member tensor after the policy.
  RealTensor member_second_moment() const;

 private:
  EnsembleSpec spec_;
  RealTensor expected_;
  RealTensor variance_term_;  // sum over pairs of Var(w_e) * L_e^2
  double spectral_bound_ = 0.0;
  double scale_ = 1.0;
};

/// Seed of the independent RNG stream `stream` under `master_seed`.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream);

}  // namespace hyperconn
