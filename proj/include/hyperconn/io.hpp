#pragma once

// JSON schemas: hypergraphs, debug tensor dumps, experiment configs and
// tail reports.

#include <string>

#include <json.hpp>

#include "hyperconn/ensemble.hpp"
#include "hyperconn/harness.hpp"
#include "hyperconn/hypergraph.hpp"
#include "hyperconn/tensor.hpp"

namespace hyperconn {

using Json = nlohmann::json;

// {"m": int, "M": int, "edges": [{"source": [...], "dest": [...], "weight": x}]}
// Mirror edges may be omitted on input; output always lists both directions.
Json hypergraph_to_json(const Hypergraph& g);
Hypergraph hypergraph_from_json(const Json& j);

// {"modes": [...], "entries": [[re, im], ...]} in flat row-major order.
Json tensor_to_json(const Tensor& x);
Json tensor_to_json(const RealTensor& x);
Tensor tensor_from_json(const Json& j);

Json ensemble_to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_from_json(const Json& j);

Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);

Json report_to_json(const TailReport& report);
TailReport report_from_json(const Json& j);

/// Parses a file; throws InvalidInput on I/O or syntax errors.
Json read_json_file(const std::string& path);

/// Compact distribution syntax used by the CLI:
///   bernoulli:p=0.5,w=1 | uniform:a=0,b=1 | centered:base=1,scale=0.5
WeightDistribution parse_distribution(const std::string& text);

}  // namespace hyperconn
