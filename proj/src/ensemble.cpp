#include "hyperconn/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <type_traits>

#include "hyperconn/errors.hpp"

namespace hyperconn {

namespace {

using Side = std::vector<Vertex>;

struct Candidate {
  Side source;
  Side dest;
  double base = 0.0;
};

// Per-pair weight law, evaluated from one uniform draw in [0, 1).
struct PairLaw {
  double mean = 0.0;
  double variance = 0.0;
  double max_deviation = 0.0;  // sup |w - mean|
  double max_abs = 0.0;        // sup |w|
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::vector<Candidate> candidates(const EnsembleSpec& spec) {
  std::vector<Candidate> out;
  if (const auto* c = std::get_if<CenteredBounded>(&spec.distribution); c && c->base) {
    for (const auto& e : c->base->edges())
      if (e.source < e.dest) out.push_back({e.source, e.dest, e.weight});
    return out;
  }
  double base = 0.0;
  if (const auto* c = std::get_if<CenteredBounded>(&spec.distribution)) base = c->base_weight;
  for (auto& [s, d] : disjoint_side_pairs(spec.m, spec.M)) out.push_back({s, d, base});
  return out;
}

PairLaw pair_law(const WeightDistribution& dist, double base) {
  return std::visit(
      [base](const auto& d) -> PairLaw {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BernoulliEdge>) {
          return {d.p * d.weight, d.p * (1.0 - d.p) * d.weight * d.weight,
                  std::abs(d.weight) * std::max(d.p, 1.0 - d.p), std::abs(d.weight)};
        } else if constexpr (std::is_same_v<T, UniformWeight>) {
          const double width = d.b - d.a;
          return {0.5 * (d.a + d.b), width * width / 12.0, 0.5 * width, std::max(std::abs(d.a), std::abs(d.b))};
        } else {
          return {base, d.scale * d.scale / 3.0, d.scale, std::abs(base) + d.scale};
        }
      },
      dist);
}

// Returns false when the pair is absent from the draw.
bool draw_weight(const WeightDistribution& dist, double base, double u, double& weight) {
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BernoulliEdge>) {
          weight = d.weight;
          return u < d.p;
        } else if constexpr (std::is_same_v<T, UniformWeight>) {
          weight = d.a + (d.b - d.a) * u;
          return true;
        } else {
          weight = base + d.scale * (2.0 * u - 1.0);
          return true;
        }
      },
      dist);
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream) {
  return splitmix64(master_seed ^ splitmix64(stream));
}

void EnsembleSpec::validate() const {
  if (N < 1) throw InvalidInput("ensemble size N must be >= 1");
  if (M < 1 || m <= M) throw InvalidInput("ensemble requires m > M >= 1");
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BernoulliEdge>) {
          if (!(d.p >= 0.0 && d.p <= 1.0)) throw InvalidInput("bernoulli p must lie in [0, 1]");
          if (!(d.weight > 0.0) || !std::isfinite(d.weight))
            throw InvalidInput("bernoulli weight must be positive");
        } else if constexpr (std::is_same_v<T, UniformWeight>) {
          if (!(d.a >= 0.0 && d.a <= d.b) || !std::isfinite(d.b))
            throw InvalidInput("uniform weights need 0 <= a <= b");
        } else {
          if (!(d.scale >= 0.0) || !std::isfinite(d.scale) || !std::isfinite(d.base_weight))
            throw InvalidInput("centered perturbation scale must be >= 0");
          if (d.base && (d.base->vertex_count() != m || d.base->half_uniformity() != M))
            throw InvalidInput("centered base graph must match (m, M)");
        }
      },
      distribution);
}

std::string distribution_name(const WeightDistribution& d) {
  switch (d.index()) {
    case 0: return "bernoulli";
    case 1: return "uniform";
    default: return "centered";
  }
}

Hypergraph sample_hypergraph(const EnsembleSpec& spec, std::int64_t stream) {
  spec.validate();
  if (stream < 0) throw InvalidInput("sample_hypergraph: stream index must be >= 0");
  std::mt19937_64 gen(stream_seed(spec.seed, static_cast<std::uint64_t>(stream)));
  std::vector<Hyperedge> edges;
  for (const auto& c : candidates(spec)) {
    double w = 0.0;
    if (draw_weight(spec.distribution, c.base, uniform01(gen), w)) edges.push_back({c.source, c.dest, w});
  }
  return Hypergraph(spec.m, spec.M, std::move(edges));
}

RealTensor expected_laplacian(const EnsembleSpec& spec) {
  spec.validate();
  const Shape shape = Shape::uniform(spec.m, spec.M);
  RealTensor::Matrix acc = RealTensor::Matrix::Zero(shape.total(), shape.total());
  for (const auto& c : candidates(spec))
    acc += pair_law(spec.distribution, c.base).mean * pair_laplacian(spec.m, spec.M, c.source, c.dest).matrix();
  return RealTensor(shape, acc);
}

EnsembleModel::EnsembleModel(EnsembleSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const Shape shape = Shape::uniform(spec_.m, spec_.M);
  RealTensor::Matrix mean = RealTensor::Matrix::Zero(shape.total(), shape.total());
  RealTensor::Matrix variance = mean;
  double worst = 0.0;
  for (const auto& c : candidates(spec_)) {
    const PairLaw law = pair_law(spec_.distribution, c.base);
    const RealTensor::Matrix l = pair_laplacian(spec_.m, spec_.M, c.source, c.dest).matrix();
    mean += law.mean * l;
    variance += law.variance * (l * l);
    worst = std::max(worst, spec_.center ? law.max_deviation : law.max_abs);
  }
  expected_ = RealTensor(shape, mean);
  variance_term_ = RealTensor(shape, variance);

  // Gershgorin: a row indexed by an arrangement of an M-set S touches the
  // C(m - M, M) pairs having S as a side, each adding M! to the diagonal
  // and M! off-diagonal entries of the same magnitude.
  spectral_bound_ = 2.0 * factorial(spec_.M) * binomial(spec_.m - spec_.M, spec_.M) * worst;
  scale_ = (spec_.normalize && spectral_bound_ > 0.0) ? 1.0 / spectral_bound_ : 1.0;
}

RealTensor EnsembleModel::member_tensor(std::int64_t stream) const {
  const LaplacianTensor l = laplacian_tensor(sample_hypergraph(spec_, stream));
  RealTensor::Matrix x = l.value.matrix();
  if (spec_.center) x -= expected_.matrix();
  if (scale_ != 1.0) x *= scale_;
  return RealTensor(l.value.row_shape(), x);
}

RealTensor EnsembleModel::member_mean() const {
  if (spec_.center) return RealTensor(shape());
  return RealTensor(shape(), scale_ * expected_.matrix());
}

RealTensor EnsembleModel::member_second_moment() const {
  // E[L^2] = (E L)^2 + sum_e Var(w_e) L_e^2; the cross terms of distinct
  // pairs vanish by independence.
  RealTensor::Matrix second = variance_term_.matrix();
  if (!spec_.center) second += expected_.matrix() * expected_.matrix();
  return RealTensor(shape(), scale_ * scale_ * second);
}

}  // namespace hyperconn
