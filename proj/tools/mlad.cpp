// mlad: fit, stream, experiment and serve subcommands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mlad/config.hpp"
#include "mlad/error.hpp"
#include "mlad/experiments.hpp"
#include "mlad/io.hpp"
#include "mlad/run.hpp"
#include "mlad/service.hpp"

#include "api_server.hpp"

namespace fs = std::filesystem;
using namespace mlad;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kInternal = 3 };

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string detectors;
  std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c, bool with_detectors) {
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--seed", c.seed, "seed override");
  if (with_detectors)
    cmd->add_option("--detectors", c.detectors, "comma list of prob,stats,baseline")
        ->check(
            [](const std::string& s) {
              try {
                parse_detector_list(s);
                return std::string();
              } catch (const std::exception& e) {
                return std::string(e.what());
              }
            },
            "DETECTORS");
}

PipelineConfig resolve(const Common& c) {
  PipelineConfig cfg = c.config_path.empty() ? PipelineConfig{} : load_config(c.config_path);
  if (c.seed) cfg.detect.seed = *c.seed;
  if (!c.detectors.empty()) cfg.detectors = parse_detector_list(c.detectors);
  return cfg;
}

void print_communities(const GbterParams& params) {
  const auto& u = *params.universe;
  std::printf("%zu communities\n", params.partition.num_communities());
  for (CommunityId c = 0; c < params.partition.num_communities(); ++c) {
    std::printf("  C%u size=%zu density=%.4f :", c, params.partition.community_size(c), params.density[c]);
    for (NodeIndex i : params.partition.members(c)) std::printf(" %s", u.label(i).c_str());
    std::printf("\n");
  }
}

int cmd_fit(const std::string& input, const Common& c) {
  const auto cfg = resolve(c);
  const auto seq = io::load_sequence(input);
  const auto fitted = fit_gbter(seq, cfg.fit);
  const fs::path out = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
  fs::create_directories(out);
  write_json_file(params_to_json(fitted.params), out / "params.json");
  write_json_file(posterior_to_json(fitted.state), out / "posterior.json");
  print_communities(fitted.params);
  if (!fitted.clustering_converged) std::fprintf(stderr, "warning: Markov clustering did not converge\n");
  return kOk;
}

int cmd_stream(const std::string& input, std::size_t train, const Common& c) {
  const auto cfg = resolve(c);
  const auto seq = io::load_sequence(input);
  const fs::path out = c.out_dir.empty() ? fs::path("mlad-run") : fs::path(c.out_dir);
  const auto run = run_stream(seq, train, cfg, out, input);

  std::printf("%-12s %-9s %12s %5s %8s %8s\n", "snapshot", "detector", "graph_p", "flag", "comms", "nodes");
  for (const auto& step : run.steps) {
    for (const auto& r : step.reports) {
      std::size_t fc = 0, fn = 0;
      for (bool f : r.community_flags) fc += f;
      for (bool f : r.node_flags) fn += f;
      std::printf("%-12s %-9s %12.6g %5s %8zu %8zu\n", r.snapshot.c_str(), to_string(r.detector).c_str(),
                  r.graph_pvalue, r.graph_flag ? "yes" : "no", fc, fn);
    }
  }
  std::printf("manifest: %s\n", (out / "manifest.json").string().c_str());
  return kOk;
}

int cmd_experiment(int id, std::size_t train, std::size_t stream, const Common& c) {
  const auto cfg = resolve(c);
  auto spec = id == 1 ? build_experiment1() : build_experiment2();
  spec.train_count = train;
  spec.stream_count = stream;
  const std::uint64_t seed = c.seed ? *c.seed : cfg.detect.seed;
  const auto scores = run_experiment(spec, cfg, seed);
  const auto rows = experiment_table(scores);

  const fs::path out = c.out_dir.empty() ? fs::path(spec.name) : fs::path(c.out_dir);
  fs::create_directories(out);
  {
    std::ofstream f(out / "table.csv");
    write_table_csv(f, rows);
  }
  for (const auto& r : rows) {
    std::ofstream f(out / ("roc_" + to_string(r.detector) + "_" + to_string(r.level) + ".csv"));
    write_roc_csv(f, r.eval.curve);
  }
  write_table_csv(std::cout, rows);
  if (!scores.clustering_matches_truth) std::fprintf(stderr, "note: fitted communities differ from the regular model\n");
  return kOk;
}

int cmd_serve(const std::string& manifest, const std::string& bind) {
  const auto store = ReportStore::load(manifest);
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--bind", "expected HOST:PORT");
  const auto host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--bind", "bad port in '" + bind + "'");
  }

  httplib::Server server;
  mount_api(server, store);
  std::printf("serving %s on http://%s:%d\n", manifest.c_str(), host.c_str(), port);
  std::fflush(stdout);
  if (!server.listen(host, port)) {
    std::fprintf(stderr, "error: cannot listen on %s\n", bind.c_str());
    return kInput;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-scale anomaly detection on labelled graph sequences"};
  app.require_subcommand(1);

  Common fit_opts, stream_opts, exp_opts;

  std::string fit_input;
  auto* fit = app.add_subcommand("fit", "fit GBTER parameters to a sequence");
  fit->add_option("sequence", fit_input, "sequence JSON or season CSV")->required();
  add_common(fit, fit_opts, false);
  fit->add_option("--out", fit_opts.out_dir, "output directory (default .)");

  std::string stream_input;
  std::size_t train = 0;
  auto* stream = app.add_subcommand("stream", "fit on a prefix, then score the remaining snapshots");
  stream->add_option("sequence", stream_input, "sequence JSON or season CSV")->required();
  stream->add_option("--train", train, "number of leading snapshots used for fitting")->required();
  add_common(stream, stream_opts, true);
  stream->add_option("--out", stream_opts.out_dir, "output directory (default mlad-run)");

  int exp_id = 0;
  std::size_t exp_train = 100, exp_stream = 500;
  auto* exp = app.add_subcommand("experiment", "synthetic seeded-anomaly experiment");
  exp->add_option("id", exp_id, "1 (node swaps) or 2 (density and degree shift)")->required()->check(CLI::Range(1, 2));
  exp->add_option("--train-count", exp_train, "training graphs")->check(CLI::PositiveNumber);
  exp->add_option("--stream-count", exp_stream, "streamed graphs")->check(CLI::PositiveNumber);
  add_common(exp, exp_opts, true);
  exp->add_option("--out", exp_opts.out_dir, "output directory (default experimentN)");

  std::string manifest, bind = "127.0.0.1:8080";
  auto* serve = app.add_subcommand("serve", "read-only JSON API over a stream run");
  serve->add_option("manifest", manifest, "manifest.json written by stream")->required();
  serve->add_option("--bind", bind, "HOST:PORT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*fit) return cmd_fit(fit_input, fit_opts);
    if (*stream) return cmd_stream(stream_input, train, stream_opts);
    if (*exp) return cmd_experiment(exp_id, exp_train, exp_stream, exp_opts);
    if (*serve) return cmd_serve(manifest, bind);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const mlad::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
  return kUsage;
}
