#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbaf/attribution.hpp"
#include "qbaf/bench.hpp"
#include "qbaf/counterfactual.hpp"
#include "qbaf/core.hpp"
#include "qbaf/graph.hpp"
#include "qbaf/semantics.hpp"

namespace py = pybind11;
using namespace qbaf;

namespace {

Semantics sem_arg(const std::string& name) { return semantics_from_name(name); }
ProblemKind kind_arg(const std::string& name) { return problem_kind_from_name(name); }

EvalConfig eval_cfg(double tolerance, long max_iterations) {
    return EvalConfig{tolerance, max_iterations};
}

py::dict strength_map_to_dict(const Qbaf& q, const StrengthMap& m) {
    py::dict scores;
    for (size_t i = 0; i < q.size(); ++i) scores[py::str(q.name(i))] = m.strengths[i];
    py::dict out;
    out["strengths"] = scores;
    out["converged"] = m.converged;
    out["iterations_used"] = m.iterations_used;
    out["max_residual"] = m.max_residual;
    return out;
}

std::vector<double> scores_arg(const Qbaf& q, const py::dict& d) {
    BaseScoreFn tau;
    tau.values.assign(q.size(), 0.0);
    for (const auto& item : d) {
        std::string id = py::cast<std::string>(item.first);
        tau.values[q.index_of(id)] = py::cast<double>(item.second);
    }
    if (d.size() != q.size()) throw SchemaError("scores must cover every argument exactly once");
    return tau.values;
}

py::dict scores_to_dict(const Qbaf& q, const BaseScoreFn& tau) {
    py::dict out;
    for (size_t i = 0; i < q.size(); ++i) out[py::str(q.name(i))] = tau.values[i];
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gradual-semantics QBAF evaluation, counterfactuals and attribution";

    py::register_exception<SyntaxError>(m, "QbafSyntaxError");
    py::register_exception<SchemaError>(m, "QbafSchemaError");
    py::register_exception<UnknownArgumentError>(m, "UnknownArgumentError");
    py::register_exception<NonConvergenceError>(m, "NonConvergenceError");

    py::class_<Qbaf>(m, "Qbaf")
        .def(py::init<>())
        .def("__len__", &Qbaf::size)
        .def("__contains__", &Qbaf::contains)
        .def_property_readonly("names", &Qbaf::names)
        .def("base_score",
             [](const Qbaf& q, const std::string& id) { return q.base_score(id); })
        .def_property_readonly("base_scores",
                               [](const Qbaf& q) { return scores_to_dict(q, q.base_scores()); })
        .def_property_readonly("attacks",
                               [](const Qbaf& q) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& [f, t] : q.attacks())
                                       out.emplace_back(q.name(f), q.name(t));
                                   return out;
                               })
        .def_property_readonly("supports", [](const Qbaf& q) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& [f, t] : q.supports()) out.emplace_back(q.name(f), q.name(t));
            return out;
        });

    m.def("make_qbaf",
          [](const py::dict& arguments,
             const std::vector<std::pair<std::string, std::string>>& attacks,
             const std::vector<std::pair<std::string, std::string>>& supports) {
              std::vector<std::pair<ArgumentId, double>> args;
              for (const auto& item : arguments)
                  args.emplace_back(py::cast<std::string>(item.first),
                                    py::cast<double>(item.second));
              return Qbaf(args, attacks, supports);
          },
          py::arg("arguments"), py::arg("attacks") = py::list(),
          py::arg("supports") = py::list(),
          "Build a framework from {id: base_score} plus relation pair lists.");

    m.def("parse", &parse_qbaf, py::arg("text"));
    m.def("serialize", [](const Qbaf& q) { return serialize_qbaf(q); }, py::arg("qbaf"));
    m.def("is_acyclic", &is_acyclic, py::arg("qbaf"));

    m.def("evaluate",
          [](const Qbaf& q, const std::string& sem, py::object scores, double tolerance,
             long max_iterations) {
              EvalConfig cfg = eval_cfg(tolerance, max_iterations);
              if (scores.is_none()) return strength_map_to_dict(q, evaluate(q, sem_arg(sem), cfg));
              BaseScoreFn tau{scores_arg(q, py::cast<py::dict>(scores))};
              return strength_map_to_dict(q, evaluate(q, tau, sem_arg(sem), cfg));
          },
          py::arg("qbaf"), py::arg("semantics") = "qe", py::arg("scores") = py::none(),
          py::arg("tolerance") = 1e-6, py::arg("max_iterations") = 10000,
          "Final strengths of every argument; flags non-convergence instead of raising.");

    m.def("evaluate_restricted",
          [](const Qbaf& q, const std::vector<ArgumentId>& present, const std::string& sem,
             const ArgumentId& topic, double tolerance, long max_iterations) {
              return evaluate_restricted(q, present, sem_arg(sem),
                                         eval_cfg(tolerance, max_iterations), topic);
          },
          py::arg("qbaf"), py::arg("present"), py::arg("semantics"), py::arg("topic"),
          py::arg("tolerance") = 1e-6, py::arg("max_iterations") = 10000);

    m.def("polarity",
          [](const Qbaf& q, const ArgumentId& from, const ArgumentId& to) {
              return to_string(polarity(q, from, to));
          },
          py::arg("qbaf"), py::arg("from_arg"), py::arg("to_arg"));
    m.def("priority", &priority, py::arg("qbaf"), py::arg("from_arg"), py::arg("to_arg"),
          py::arg("c") = 2.0);
    m.def("connectivity",
          [](const Qbaf& q, const ArgumentId& from, const ArgumentId& to) {
              return to_string(connectivity(q, from, to));
          },
          py::arg("qbaf"), py::arg("from_arg"), py::arg("to_arg"));
    m.def("analyze_topic",
          [](const Qbaf& q, const ArgumentId& topic, double c) {
              TopicAnalysis ta = analyze_topic(q, topic, c);
              py::dict out;
              for (size_t i = 0; i < q.size(); ++i)
                  out[py::str(q.name(i))] =
                      py::make_tuple(to_string(ta.polarity[i]), ta.priority[i]);
              return out;
          },
          py::arg("qbaf"), py::arg("topic"), py::arg("c") = 2.0,
          "Per-argument (polarity, priority) pairs towards the topic.");

    m.def("lp_distance",
          [](const Qbaf& q, const py::dict& a, const py::dict& b, double p) {
              return lp_distance(BaseScoreFn{scores_arg(q, a)}, BaseScoreFn{scores_arg(q, b)}, p);
          },
          py::arg("qbaf"), py::arg("a"), py::arg("b"), py::arg("p") = 1.0);

    m.def("trivial_counterfactual",
          [](const Qbaf& q, const ArgumentId& topic, double desired) {
              return scores_to_dict(q, trivial_counterfactual(q, topic, desired));
          },
          py::arg("qbaf"), py::arg("topic"), py::arg("desired"));

    m.def("check_validity",
          [](const Qbaf& q, const std::string& sem, const ArgumentId& topic, double desired,
             const std::string& kind, double delta, const py::dict& candidate, double tolerance,
             long max_iterations) {
              CexQuery query{topic, desired, kind_arg(kind), delta};
              return check_validity(q, sem_arg(sem), query, BaseScoreFn{scores_arg(q, candidate)},
                                    eval_cfg(tolerance, max_iterations));
          },
          py::arg("qbaf"), py::arg("semantics"), py::arg("topic"), py::arg("desired"),
          py::arg("kind"), py::arg("delta"), py::arg("candidate"), py::arg("tolerance") = 1e-6,
          py::arg("max_iterations") = 10000);

    m.def("difference_quotient",
          [](const Qbaf& q, const std::string& sem, const ArgumentId& source,
             const ArgumentId& topic, double h, double tolerance, long max_iterations) {
              EvalConfig cfg = eval_cfg(tolerance, max_iterations);
              StrengthMap base = evaluate(q, sem_arg(sem), cfg);
              return difference_quotient(q, sem_arg(sem), source, topic, h, base, cfg);
          },
          py::arg("qbaf"), py::arg("semantics"), py::arg("source"), py::arg("topic"),
          py::arg("h") = 0.1, py::arg("tolerance") = 1e-6, py::arg("max_iterations") = 10000);

    m.def("solve",
          [](const Qbaf& q, const std::string& sem, const ArgumentId& topic, double desired,
             const std::string& kind, double delta, double epsilon, double h, double c,
             bool use_polarity, bool use_priority, long max_sweeps, double tolerance,
             long max_iterations) {
              CexQuery query{topic, desired, kind_arg(kind), delta};
              SolverConfig cfg;
              cfg.epsilon = epsilon;
              cfg.quotient_offset = h;
              cfg.self_priority = c;
              cfg.use_polarity = use_polarity;
              cfg.use_priority = use_priority;
              cfg.max_sweeps = max_sweeps;
              cfg.eval = eval_cfg(tolerance, max_iterations);
              CexResult r = solve(q, sem_arg(sem), query, cfg);
              py::dict out;
              out["counterfactual"] = scores_to_dict(q, r.counterfactual);
              out["valid"] = r.valid;
              out["status"] = to_string(r.status);
              out["achieved_strength"] = r.achieved_strength;
              out["l1"] = r.l1;
              out["l2"] = r.l2;
              out["sweeps"] = r.sweeps;
              out["wall_time_s"] = r.wall_time_s;
              return out;
          },
          py::arg("qbaf"), py::arg("semantics"), py::arg("topic"), py::arg("desired"),
          py::arg("kind") = "delta", py::arg("delta") = 0.1, py::arg("epsilon") = 0.01,
          py::arg("h") = 0.1, py::arg("c") = 2.0, py::arg("use_polarity") = true,
          py::arg("use_priority") = true, py::arg("max_sweeps") = 100000L,
          py::arg("tolerance") = 1e-6, py::arg("max_iterations") = 10000,
          "Iterative counterfactual search; returns a result dict.");

    m.def("shapley_all",
          [](const Qbaf& q, const std::string& sem, const ArgumentId& topic, double tolerance,
             long max_iterations, size_t limit) {
              AttributionReport r =
                  shapley_all(q, sem_arg(sem), topic, eval_cfg(tolerance, max_iterations), limit);
              py::dict out;
              for (const auto& [id, value] : r.scores) out[py::str(id)] = value;
              return out;
          },
          py::arg("qbaf"), py::arg("semantics"), py::arg("topic"), py::arg("tolerance") = 1e-6,
          py::arg("max_iterations") = 10000, py::arg("limit") = 15,
          "Shapley importance of every non-topic argument for the topic's strength.");

    m.def("gen_tree",
          [](int width, int depth, uint64_t seed) {
              bench::Instance inst = bench::gen_tree({width, depth, seed});
              return py::make_tuple(inst.q, inst.topic);
          },
          py::arg("width") = 2, py::arg("depth") = 5, py::arg("seed") = 0,
          "Random full tree instance; returns (qbaf, topic).");
    m.def("gen_cyclic",
          [](int n_args, int n_rels, uint64_t seed) {
              bench::Instance inst = bench::gen_cyclic({n_args, n_rels, seed});
              return py::make_tuple(inst.q, inst.topic);
          },
          py::arg("n_args") = 50, py::arg("n_rels") = 50, py::arg("seed") = 0,
          "Random cyclic instance; returns (qbaf, topic).");
    m.def("with_base_scores",
          [](const Qbaf& q, const py::dict& scores) {
              return bench::with_base_scores(q, BaseScoreFn{scores_arg(q, scores)});
          },
          py::arg("qbaf"), py::arg("scores"));
}
