#include "hyperconn/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "hyperconn/errors.hpp"

namespace hyperconn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }
double number_or_nan(const Json& j) { return j.is_null() ? kNaN : j.get<double>(); }

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

Json estimate_to_json(const TailEstimate& e) {
  return {{"estimate", e.estimate}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high}};
}

TailEstimate estimate_from_json(const Json& j) {
  return {field<double>(j, "estimate"), field<double>(j, "ci_low"), field<double>(j, "ci_high")};
}

std::string theta_mode_name(ThetaMode mode) {
  switch (mode) {
    case ThetaMode::Absolute: return "absolute";
    case ThetaMode::NuMultiple: return "nu_multiple";
    case ThetaMode::SigmaMultiple: return "sigma_multiple";
  }
  return "absolute";
}

ThetaMode theta_mode_from(const std::string& name) {
  if (name == "absolute") return ThetaMode::Absolute;
  if (name == "nu_multiple") return ThetaMode::NuMultiple;
  if (name == "sigma_multiple") return ThetaMode::SigmaMultiple;
  throw InvalidInput("unknown theta mode '" + name + "'");
}

MasterKernel kernel_from(const std::string& name) {
  if (name == "chernoff") return MasterKernel::Chernoff;
  if (name == "bennett") return MasterKernel::Bennett;
  if (name == "bernstein") return MasterKernel::Bernstein;
  throw InvalidInput("unknown master kernel '" + name + "'");
}

std::string kernel_to(MasterKernel k) {
  switch (k) {
    case MasterKernel::Chernoff: return "chernoff";
    case MasterKernel::Bennett: return "bennett";
    case MasterKernel::Bernstein: return "bernstein";
  }
  return "chernoff";
}

}  // namespace

Json hypergraph_to_json(const Hypergraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({{"source", e.source}, {"dest", e.dest}, {"weight", e.weight}});
  return {{"m", g.vertex_count()}, {"M", g.half_uniformity()}, {"edges", edges}};
}

Hypergraph hypergraph_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("hypergraph JSON must be an object");
  std::vector<Hyperedge> edges;
  for (const auto& e : field<Json>(j, "edges")) {
    edges.push_back({field<std::vector<Vertex>>(e, "source"), field<std::vector<Vertex>>(e, "dest"),
                     field<double>(e, "weight")});
  }
  return Hypergraph(field<int>(j, "m"), field<int>(j, "M"), std::move(edges));
}

Json tensor_to_json(const Tensor& x) {
  Json entries = Json::array();
  for (const auto& v : x.entries()) entries.push_back({v.real(), v.imag()});
  return {{"modes", x.row_shape().modes()}, {"entries", entries}};
}

Json tensor_to_json(const RealTensor& x) { return tensor_to_json(cast<std::complex<double>>(x)); }

Tensor tensor_from_json(const Json& j) {
  const Shape shape(field<std::vector<Index>>(j, "modes"));
  const auto& entries = field<Json>(j, "entries");
  const Index n = shape.total();
  if (static_cast<Index>(entries.size()) != n * n) throw DimensionError("tensor JSON: wrong entry count");
  Tensor::Matrix m(n, n);
  for (Index i = 0; i < n * n; ++i) {
    const auto& pair = entries[static_cast<std::size_t>(i)];
    if (!pair.is_array() || pair.size() != 2) throw InvalidInput("tensor JSON: entries must be [re, im]");
    m(i / n, i % n) = {pair[0].get<double>(), pair[1].get<double>()};
  }
  return Tensor(shape, m);
}

Json ensemble_to_json(const EnsembleSpec& spec) {
  Json dist = std::visit(
      [](const auto& d) -> Json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BernoulliEdge>) {
          return {{"type", "bernoulli"}, {"p", d.p}, {"weight", d.weight}};
        } else if constexpr (std::is_same_v<T, UniformWeight>) {
          return {{"type", "uniform"}, {"a", d.a}, {"b", d.b}};
        } else {
          Json out = {{"type", "centered"}, {"base_weight", d.base_weight}, {"scale", d.scale}};
          if (d.base) out["base"] = hypergraph_to_json(*d.base);
          return out;
        }
      },
      spec.distribution);
  return {{"N", spec.N},           {"m", spec.m},
          {"M", spec.M},           {"distribution", dist},
          {"center", spec.center}, {"normalize", spec.normalize},
          {"seed", spec.seed}};
}

EnsembleSpec ensemble_from_json(const Json& j) {
  EnsembleSpec spec;
  spec.N = field<int>(j, "N");
  spec.m = field<int>(j, "m");
  spec.M = field<int>(j, "M");
  spec.center = field_or<bool>(j, "center", false);
  spec.normalize = field_or<bool>(j, "normalize", false);
  spec.seed = field_or<std::uint64_t>(j, "seed", 0);
  const Json dist = field<Json>(j, "distribution");
  const auto type = field<std::string>(dist, "type");
  if (type == "bernoulli") {
    spec.distribution = BernoulliEdge{field<double>(dist, "p"), field_or<double>(dist, "weight", 1.0)};
  } else if (type == "uniform") {
    spec.distribution = UniformWeight{field<double>(dist, "a"), field<double>(dist, "b")};
  } else if (type == "centered") {
    CenteredBounded c{field_or<double>(dist, "base_weight", 1.0), field<double>(dist, "scale"), std::nullopt};
    if (dist.contains("base")) c.base = hypergraph_from_json(dist.at("base"));
    spec.distribution = std::move(c);
  } else {
    throw InvalidInput("unknown distribution type '" + type + "'");
  }
  spec.validate();
  return spec;
}

Json config_to_json(const ExperimentConfig& config) {
  Json families = Json::array();
  for (auto f : config.bound_families) families.push_back(to_string(f));
  Json out = {{"label", config.label},
              {"ensemble", ensemble_to_json(config.ensemble)},
              {"trials", config.trials},
              {"theta", {{"mode", theta_mode_name(config.theta_mode)}, {"values", config.theta_values}}},
              {"bounds", families},
              {"ci_level", config.ci_level},
              {"audit", config.audit}};
  if (config.master_kernel) out["master_kernel"] = kernel_to(*config.master_kernel);
  return out;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("experiment config must be a JSON object");
  ExperimentConfig config;
  config.label = field_or<std::string>(j, "label", "");
  config.ensemble = ensemble_from_json(field<Json>(j, "ensemble"));
  config.trials = field<int>(j, "trials");
  const Json theta = field<Json>(j, "theta");
  config.theta_mode = theta_mode_from(field_or<std::string>(theta, "mode", "absolute"));
  config.theta_values = field<std::vector<double>>(theta, "values");
  if (j.contains("bounds")) {
    config.bound_families.clear();
    for (const auto& name : field<std::vector<std::string>>(j, "bounds"))
      config.bound_families.push_back(bound_family_from_string(name));
  }
  config.ci_level = field_or<double>(j, "ci_level", 0.95);
  if (j.contains("master_kernel")) config.master_kernel = kernel_from(field<std::string>(j, "master_kernel"));
  config.audit = field_or<bool>(j, "audit", false);
  config.validate();
  return config;
}

Json report_to_json(const TailReport& report) {
  const auto& m = report.metadata;
  Json families = Json::array();
  for (auto f : m.families) families.push_back(to_string(f));
  Json meta = {{"label", m.label},
               {"m", m.m},
               {"M", m.M},
               {"N", m.N},
               {"trials", m.trials},
               {"seed", m.seed},
               {"distribution", m.distribution},
               {"center", m.center},
               {"normalize", m.normalize},
               {"normalization_scale", m.normalization_scale},
               {"nu", m.nu},
               {"sigma2", m.sigma2},
               {"k", m.k},
               {"dim_upper", m.dim_upper},
               {"dim_lower", m.dim_lower},
               {"ci_level", m.ci_level},
               {"master_kernel", m.master_kernel},
               {"chernoff_hypotheses", m.chernoff_hypotheses},
               {"bennett_hypotheses", m.bennett_hypotheses},
               {"families", families}};
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json bounds = Json::object();
    Json valid = Json::object();
    for (std::size_t i = 0; i < kAllFamilies.size(); ++i) {
      const auto name = to_string(kAllFamilies[i]);
      bounds[name] = number_or_null(r.bounds[i]);
      valid[name] = std::string(1, r.validity[i]);
    }
    Json violations = Json::array();
    for (auto f : r.violations) violations.push_back(to_string(f));
    rows.push_back({{"theta", r.theta},
                    {"upper", estimate_to_json(r.upper)},
                    {"lower", estimate_to_json(r.lower)},
                    {"bounds", bounds},
                    {"valid", valid},
                    {"master_trace", number_or_null(r.master_trace)},
                    {"violations", violations}});
  }
  return {{"metadata", meta}, {"rows", rows}};
}

TailReport report_from_json(const Json& j) {
  TailReport report;
  const Json meta = field<Json>(j, "metadata");
  auto& m = report.metadata;
  m.label = field<std::string>(meta, "label");
  m.m = field<int>(meta, "m");
  m.M = field<int>(meta, "M");
  m.N = field<int>(meta, "N");
  m.trials = field<int>(meta, "trials");
  m.seed = field<std::uint64_t>(meta, "seed");
  m.distribution = field<std::string>(meta, "distribution");
  m.center = field<bool>(meta, "center");
  m.normalize = field<bool>(meta, "normalize");
  m.normalization_scale = field<double>(meta, "normalization_scale");
  m.nu = field<double>(meta, "nu");
  m.sigma2 = field<double>(meta, "sigma2");
  m.k = field<Index>(meta, "k");
  m.dim_upper = field<Index>(meta, "dim_upper");
  m.dim_lower = field<Index>(meta, "dim_lower");
  m.ci_level = field<double>(meta, "ci_level");
  m.master_kernel = field<std::string>(meta, "master_kernel");
  m.chernoff_hypotheses = field<bool>(meta, "chernoff_hypotheses");
  m.bennett_hypotheses = field<bool>(meta, "bennett_hypotheses");
  for (const auto& name : field<std::vector<std::string>>(meta, "families"))
    m.families.push_back(bound_family_from_string(name));
  for (const auto& r : field<Json>(j, "rows")) {
    TailRow row;
    row.theta = field<double>(r, "theta");
    row.upper = estimate_from_json(field<Json>(r, "upper"));
    row.lower = estimate_from_json(field<Json>(r, "lower"));
    const Json bounds = field<Json>(r, "bounds");
    const Json valid = field<Json>(r, "valid");
    for (std::size_t i = 0; i < kAllFamilies.size(); ++i) {
      const auto name = to_string(kAllFamilies[i]);
      row.bounds[i] = number_or_nan(field<Json>(bounds, name.c_str()));
      const auto flag = field<std::string>(valid, name.c_str());
      row.validity[i] = flag.empty() ? '-' : flag.front();
    }
    if (r.contains("master_trace")) row.master_trace = number_or_nan(r.at("master_trace"));
    for (const auto& name : field<std::vector<std::string>>(r, "violations"))
      row.violations.push_back(bound_family_from_string(name));
    report.rows.push_back(std::move(row));
  }
  return report;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

WeightDistribution parse_distribution(const std::string& text) {
  const auto colon = text.find(':');
  const std::string type = text.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidInput("distribution parameter '" + item + "' needs key=value");
      try {
        params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw InvalidInput("distribution parameter '" + item + "' is not numeric");
      }
    }
  }
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (type == "bernoulli") return BernoulliEdge{get("p", 0.5), get("w", 1.0)};
  if (type == "uniform") return UniformWeight{get("a", 0.0), get("b", 1.0)};
  if (type == "centered") return CenteredBounded{get("base", 1.0), get("scale", 0.5), std::nullopt};
  throw InvalidInput("unknown distribution '" + type + "'");
}

}  // namespace hyperconn
