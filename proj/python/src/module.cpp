#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "mlad/config.hpp"
#include "mlad/error.hpp"
#include "mlad/experiments.hpp"
#include "mlad/fitting.hpp"
#include "mlad/io.hpp"
#include "mlad/pipeline.hpp"
#include "mlad/probability_detector.hpp"
#include "mlad/run.hpp"
#include "mlad/statistics_detector.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace mlad;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default: throw InvalidArgument("unsupported JSON value");
  }
}

json from_py(const py::handle& h) {
  if (h.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) return h.cast<std::int64_t>();
  if (py::isinstance<py::float_>(h)) return h.cast<double>();
  if (py::isinstance<py::str>(h)) return h.cast<std::string>();
  if (py::isinstance<py::dict>(h)) {
    json out = json::object();
    for (const auto& [k, v] : h.cast<py::dict>()) out[py::str(k).cast<std::string>()] = from_py(v);
    return out;
  }
  if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
    json out = json::array();
    for (const auto& v : h) out.push_back(from_py(v));
    return out;
  }
  throw InvalidArgument("cannot convert Python object of type " + py::str(h.get_type()).cast<std::string>());
}

PipelineConfig config_of(const py::object& cfg) {
  return cfg.is_none() ? PipelineConfig{} : config_from_json(from_py(cfg));
}

using EdgeLabels = std::vector<std::pair<std::string, std::string>>;

LabeledGraph graph_of(const UniversePtr& u, const EdgeLabels& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [a, b] : edges) es.emplace_back(u->index(a), u->index(b));
  return LabeledGraph(u, std::move(es));
}

EdgeLabels labels_of(const LabeledGraph& g) {
  EdgeLabels out;
  const auto& u = *g.universe();
  for (const auto& e : g.edges()) out.emplace_back(u.label(e.first), u.label(e.second));
  return out;
}

GraphSequence sequence_of(const std::vector<std::string>& labels, const std::vector<EdgeLabels>& snapshots,
                          const std::vector<std::string>& keys) {
  GraphSequence seq;
  seq.universe = std::make_shared<const NodeUniverse>(labels);
  for (const auto& s : snapshots) seq.snapshots.push_back(graph_of(seq.universe, s));
  seq.keys = keys;
  seq.validate();
  return seq;
}

py::dict report_dict(const AnomalyReport& r, const Partition& part, const LabeledGraph& g) {
  return to_py(report_to_json(r, part, g));
}

}  // namespace

PYBIND11_MODULE(_mlad, m) {
  m.doc() = "Multi-scale anomaly detection on labelled graph sequences";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<GraphSequence>(m, "Sequence")
      .def(py::init(&sequence_of), py::arg("labels"), py::arg("snapshots"), py::arg("keys") = std::vector<std::string>{})
      .def_property_readonly("labels", [](const GraphSequence& s) { return s.universe->labels(); })
      .def_property_readonly("keys", [](const GraphSequence& s) {
        std::vector<std::string> out;
        for (std::size_t t = 0; t < s.size(); ++t) out.push_back(s.key(t));
        return out;
      })
      .def("edges", [](const GraphSequence& s, std::size_t t) { return labels_of(s.snapshots.at(t)); }, py::arg("t"))
      .def("__len__", &GraphSequence::size)
      .def("save", [](const GraphSequence& s, const std::filesystem::path& p) { io::write_sequence_json(p, s); });

  m.def("load_sequence", &io::load_sequence, py::arg("path"), "Sequence JSON, or season CSV by extension.");

  m.def(
      "fit",
      [](const GraphSequence& seq, const py::object& cfg) {
        const auto r = fit_gbter(seq, config_of(cfg).fit);
        py::dict out;
        out["params"] = to_py(params_to_json(r.params));
        out["posterior"] = to_py(posterior_to_json(r.state));
        out["converged"] = r.clustering_converged;
        return out;
      },
      py::arg("sequence"), py::arg("config") = py::none());

  m.def(
      "graph_log_prob",
      [](const py::dict& params, const EdgeLabels& edges) {
        const auto p = params_from_json(from_py(params));
        return graph_log_prob(p, graph_of(p.universe, edges)).value();
      },
      py::arg("params"), py::arg("edges"));
  m.def(
      "node_log_probs",
      [](const py::dict& params, const EdgeLabels& edges, bool statistics) {
        const auto p = params_from_json(from_py(params));
        const auto g = graph_of(p.universe, edges);
        return statistics ? StatisticsModel(p).node_scores(g) : ProbabilityModel(p).node_scores(g);
      },
      py::arg("params"), py::arg("edges"), py::arg("statistics") = false);
  m.def(
      "sample",
      [](const py::dict& params, std::uint64_t seed) {
        const auto p = params_from_json(from_py(params));
        auto rng = make_stream(seed);
        return labels_of(sample_graph(p, rng));
      },
      py::arg("params"), py::arg("seed"));

  py::class_<Pipeline>(m, "Pipeline")
      .def(py::init([](const GraphSequence& training, const py::object& cfg) {
             return Pipeline::fit(training, config_of(cfg));
           }),
           py::arg("training"), py::arg("config") = py::none())
      .def(
          "step",
          [](Pipeline& p, const EdgeLabels& edges, const std::string& key) {
            const auto g = graph_of(p.posterior().universe, edges);
            const auto r = p.step(g, key);
            py::list out;
            for (const auto& rep : r.reports) out.append(report_dict(rep, r.params.partition, g));
            return out;
          },
          py::arg("edges"), py::arg("key"))
      .def_property_readonly("params", [](const Pipeline& p) { return to_py(params_to_json(p.params())); })
      .def_property_readonly("steps", &Pipeline::steps);

  m.def(
      "run_stream",
      [](const GraphSequence& seq, std::size_t train, const py::object& cfg, const std::string& out_dir) {
        const auto r = run_stream(seq, train, config_of(cfg), out_dir);
        return to_py(manifest_to_json(r.manifest));
      },
      py::arg("sequence"), py::arg("train"), py::arg("config") = py::none(), py::arg("out_dir") = "");

  m.def(
      "experiment",
      [](int id, std::size_t train_count, std::size_t stream_count, std::uint64_t seed, const py::object& cfg) {
        if (id != 1 && id != 2) throw InvalidArgument("experiment id must be 1 or 2");
        auto spec = id == 1 ? build_experiment1() : build_experiment2();
        spec.train_count = train_count;
        spec.stream_count = stream_count;
        const auto rows = experiment_table(run_experiment(spec, config_of(cfg), seed));
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["level"] = to_string(r.level);
          d["method"] = to_string(r.detector);
          d["alpha"] = r.eval.best_alpha;
          d["f1"] = r.eval.f1;
          d["precision"] = r.eval.precision;
          d["recall"] = r.eval.recall;
          d["auc"] = r.eval.curve.auc;
          out.append(d);
        }
        return out;
      },
      py::arg("id"), py::arg("train_count") = 100, py::arg("stream_count") = 500, py::arg("seed") = 0,
      py::arg("config") = py::none());

  m.def(
      "evaluate",
      [](const std::vector<double>& pvalues, const std::vector<bool>& labels) {
        if (pvalues.size() != labels.size()) throw InvalidArgument("pvalues and labels differ in length");
        ScoreList s;
        for (std::size_t k = 0; k < pvalues.size(); ++k) s.push_back({pvalues[k], labels[k]});
        const auto e = evaluate(s);
        py::dict d;
        d["degenerate"] = e.degenerate;
        d["auc"] = e.curve.auc;
        d["alpha"] = e.best_alpha;
        d["f1"] = e.f1;
        d["precision"] = e.precision;
        d["recall"] = e.recall;
        return d;
      },
      py::arg("pvalues"), py::arg("labels"));
}
