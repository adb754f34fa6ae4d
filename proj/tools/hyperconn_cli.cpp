#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperconn/bounds.hpp"
#include "hyperconn/errors.hpp"
#include "hyperconn/harness.hpp"
#include "hyperconn/hypergraph.hpp"
#include "hyperconn/io.hpp"
#include "hyperconn/selftest.hpp"
#include "hyperconn/spectral.hpp"

using namespace hyperconn;

namespace {

enum ExitCode { kOk = 0, kInvalidInput = 1, kNumericalFailure = 2, kViolation = 3 };

// "a,b,c" or "lo:hi:count" (inclusive, evenly spaced).
std::vector<double> parse_theta_grid(const std::string& text) {
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::stringstream in(text);
      std::string lo, hi, count;
      std::getline(in, lo, ':');
      std::getline(in, hi, ':');
      std::getline(in, count, ':');
      const double a = std::stod(lo), b = std::stod(hi);
      const int n = std::stoi(count);
      if (n < 1) throw InvalidInput("theta range needs count >= 1");
      for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    } else {
      std::stringstream in(text);
      std::string item;
      while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    throw InvalidInput("cannot parse theta grid '" + text + "'");
  }
  if (out.empty()) throw InvalidInput("theta grid is empty");
  return out;
}

int cmd_connectivity(const std::string& input, bool check_mconnected) {
  const Hypergraph g = hypergraph_from_json(read_json_file(input));
  const LaplacianTensor l = laplacian_tensor(g);
  const Eigen::VectorXd spectrum = eigenvalues_descending(l.value);
  const Index k = connectivity_index(g.vertex_count(), g.half_uniformity());
  std::printf("m = %d, M = %d, edges = %zu\n", g.vertex_count(), g.half_uniformity(), g.edges().size());
  std::printf("k = %lld\n", static_cast<long long>(k));
  std::printf("alpha = %s\n", format_double(spectrum(k - 1)).c_str());
  std::printf("lambda_max = %s\nlambda_min = %s\n", format_double(spectrum(0)).c_str(),
              format_double(spectrum(spectrum.size() - 1)).c_str());
  std::printf("spectrum =");
  for (Index i = 0; i < spectrum.size(); ++i) std::printf(" %s", format_double(spectrum(i)).c_str());
  std::printf("\n");
  if (check_mconnected) std::printf("M-connected = %s\n", is_M_connected(g) ? "yes" : "no");
  return kOk;
}

int cmd_bounds(const EnsembleSpec& spec, const std::string& theta_text, const std::string& out_path) {
  spec.validate();
  const std::vector<double> thetas = parse_theta_grid(theta_text);
  const EnsembleModel model(spec);
  const EnsembleStatistics stats =
      ensemble_statistics(model.member_mean(), model.member_second_moment(), spec.m, spec.M, spec.N);
  const std::array<BoundFamily, 4> families{BoundFamily::ChernoffUpper, BoundFamily::ChernoffLower,
                                            BoundFamily::Bennett, BoundFamily::Bernstein};
  std::vector<BoundCurve> curves;
  for (auto f : families) curves.push_back(bound_curve(f, thetas, stats));

  std::ostringstream out;
  out << "# nu=" << format_double(stats.nu) << " sigma2=" << format_double(stats.sigma2) << " k=" << stats.k
      << " dim_upper=" << stats.dim_upper << " dim_lower=" << stats.dim_lower << "\n";
  out << "theta,chernoff_upper,chernoff_lower,bennett,bernstein,valid_flags\n";
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    out << format_double(thetas[i]);
    std::string flags;
    for (const auto& c : curves) {
      out << ',' << format_double(c.values[i]);
      flags += c.validity[i] ? '1' : '0';
    }
    out << ',' << flags << '\n';
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw InvalidInput("cannot open '" + out_path + "' for writing");
    file << out.str();
  }
  return kOk;
}

int cmd_montecarlo(const std::string& config_path, const std::string& out_path, const std::string& format,
                   int workers, bool audit_flag) {
  ExperimentConfig config = config_from_json(read_json_file(config_path));
  if (audit_flag) config.audit = true;
  if (workers < 1) throw InvalidInput("--workers must be >= 1");
  const TailReport report = compare(config, workers);
  emit(report, out_path, format == "json" ? ReportFormat::Json : ReportFormat::Csv);
  std::fprintf(stderr, "%d trials, %zu thresholds, %.2f s, %zu violations\n", report.metadata.trials,
               report.rows.size(), report.metadata.wall_time_seconds, report.violation_count());
  if (config.audit && report.violation_count() > 0) {
    for (const auto& row : report.rows)
      for (auto f : row.violations)
        std::fprintf(stderr, "violation: %s at theta = %s\n", to_string(f).c_str(),
                     format_double(row.theta).c_str());
    return kViolation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic connectivity of random hypergraph ensembles and its tail bounds"};
  app.require_subcommand(1);

  auto* conn = app.add_subcommand("connectivity", "Algebraic connectivity of one hypergraph");
  std::string graph_path;
  bool check_mconnected = false;
  conn->add_option("--input", graph_path, "Hypergraph JSON file")->required();
  conn->add_flag("--check-mconnected", check_mconnected, "Also test M-connectedness");

  auto* bounds = app.add_subcommand("bounds", "Closed-form tail bound curves for an ensemble");
  EnsembleSpec spec;
  std::string dist_text = "bernoulli:p=0.5,w=1";
  std::string theta_text;
  std::string bounds_out;
  bounds->add_option("--m", spec.m, "Number of vertices")->required();
  bounds->add_option("--M", spec.M, "Half uniformity")->required();
  bounds->add_option("--N", spec.N, "Ensemble size")->required();
  bounds->add_option("--dist", dist_text, "bernoulli:p=,w= | uniform:a=,b= | centered:base=,scale=");
  bounds->add_option("--theta", theta_text, "Comma list or lo:hi:count")->required();
  bounds->add_flag("--center", spec.center, "Center member Laplacians");
  bounds->add_flag("--normalize", spec.normalize, "Normalize member Laplacians");
  bounds->add_option("--out", bounds_out, "Write CSV here instead of stdout");

  auto* mc = app.add_subcommand("montecarlo", "Monte Carlo tail estimates against the bounds");
  std::string config_path, out_path, format = "csv";
  int workers = 1;
  bool audit = false;
  mc->add_option("--config", config_path, "Experiment JSON")->required();
  mc->add_option("--out", out_path, "Report path")->required();
  mc->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  mc->add_option("--workers", workers, "Worker threads");
  mc->add_flag("--audit", audit, "Exit with status 3 when a bound is violated");

  auto* self = app.add_subcommand("selftest", "Run built-in sanity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*conn) return cmd_connectivity(graph_path, check_mconnected);
    if (*bounds) {
      spec.distribution = parse_distribution(dist_text);
      return cmd_bounds(spec, theta_text, bounds_out);
    }
    if (*mc) return cmd_montecarlo(config_path, out_path, format, workers, audit);
    if (*self) return run_selftest(std::cout) == 0 ? kOk : kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalFailure;
  }
  return kOk;
}
