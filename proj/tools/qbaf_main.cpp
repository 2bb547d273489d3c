#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbaf/attribution.hpp"
#include "qbaf/bench.hpp"
#include "qbaf/counterfactual.hpp"
#include "qbaf/core.hpp"
#include "qbaf/graph.hpp"
#include "qbaf/log.hpp"
#include "qbaf/semantics.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw qbaf::bench::IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw qbaf::bench::IoError("cannot open '" + path + "' for writing");
    f << content;
    if (!f.good()) throw qbaf::bench::IoError("failed while writing '" + path + "'");
}

std::string fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct EvalArgs {
    std::string qbaf_path;
    std::string semantics = "qe";
    double tol = 1e-6;
    int max_iters = 10000;
};

int cmd_eval(const EvalArgs& a) {
    qbaf::Qbaf q = qbaf::parse_qbaf(read_file(a.qbaf_path));
    qbaf::EvalConfig cfg{a.tol, a.max_iters};
    qbaf::StrengthMap m = qbaf::evaluate(q, qbaf::semantics_from_name(a.semantics), cfg);
    for (size_t i = 0; i < q.size(); ++i)
        std::cout << q.name(i) << " " << fixed6(m.strengths[i]) << "\n";
    if (!m.converged) {
        std::cerr << "qbaf: evaluation did not converge within " << a.max_iters
                  << " iterations (last residual " << m.max_residual << ")\n";
        return 2;
    }
    return 0;
}

struct ExplainArgs {
    std::string qbaf_path;
    std::string topic;
    double desired = 0.5;
    std::string kind = "delta";
    double delta = 0.1;
    std::string semantics = "qe";
    double epsilon = 0.01;
    double offset = 0.1;
    double self_priority = 2.0;
    long max_sweeps = 100000;
    double tol = 1e-6;
    int max_iters = 10000;
    bool no_polarity = false;
    bool no_priority = false;
    std::string out_path;
};

int cmd_explain(const ExplainArgs& a) {
    qbaf::Qbaf q = qbaf::parse_qbaf(read_file(a.qbaf_path));
    qbaf::Semantics sem = qbaf::semantics_from_name(a.semantics);
    qbaf::EvalConfig eval{a.tol, a.max_iters};

    qbaf::StrengthMap baseline = qbaf::evaluate(q, sem, eval);
    if (!baseline.converged) {
        std::cerr << "qbaf: evaluation of the input did not converge\n";
        return 2;
    }
    double current = baseline.strengths[q.index_of(a.topic)];
    if (std::fabs(current - a.desired) <= 1e-9) {
        std::cerr << "qbaf: desired strength equals the current strength of '" << a.topic
                  << "'\n";
        return 1;
    }

    qbaf::CexQuery query{a.topic, a.desired, qbaf::problem_kind_from_name(a.kind), a.delta};
    qbaf::SolverConfig cfg;
    cfg.epsilon = a.epsilon;
    cfg.quotient_offset = a.offset;
    cfg.self_priority = a.self_priority;
    cfg.use_polarity = !a.no_polarity;
    cfg.use_priority = !a.no_priority;
    cfg.max_sweeps = a.max_sweeps;
    cfg.eval = eval;

    qbaf::CexResult r = qbaf::solve(q, sem, query, cfg);
    if (!a.out_path.empty()) write_file(a.out_path, qbaf::serialize_qbaf(q, r.counterfactual));
    std::cout << "valid=" << (r.valid ? "true" : "false") << " achieved="
              << fixed6(r.achieved_strength) << " l1=" << fixed6(r.l1) << " l2=" << fixed6(r.l2)
              << " sweeps=" << r.sweeps << " time=" << fixed6(r.wall_time_s) << "\n";
    return r.valid ? 0 : 3;
}

struct AttributeArgs {
    std::string qbaf_path;
    std::string topic;
    std::string semantics = "qe";
    double tol = 1e-6;
    int max_iters = 10000;
    size_t limit = 15;
    std::string csv_path;
};

int cmd_attribute(const AttributeArgs& a) {
    qbaf::Qbaf q = qbaf::parse_qbaf(read_file(a.qbaf_path));
    qbaf::EvalConfig cfg{a.tol, a.max_iters};
    qbaf::AttributionReport report =
        qbaf::shapley_all(q, qbaf::semantics_from_name(a.semantics), a.topic, cfg, a.limit);
    for (const auto& [id, value] : report.scores)
        std::cout << id << " " << fixed6(value) << "\n";
    if (!a.csv_path.empty()) {
        std::string csv = "argument,score\n";
        for (const auto& [id, value] : report.scores)
            csv += id + "," + qbaf::bench::csv_number(value) + "\n";
        write_file(a.csv_path, csv);
    }
    return 0;
}

struct PolarityArgs {
    std::string qbaf_path;
    std::string topic;
    double c = 2.0;
};

int cmd_polarity(const PolarityArgs& a) {
    qbaf::Qbaf q = qbaf::parse_qbaf(read_file(a.qbaf_path));
    qbaf::TopicAnalysis ta = qbaf::analyze_topic(q, a.topic, a.c);
    for (size_t i = 0; i < q.size(); ++i)
        std::cout << q.name(i) << " " << qbaf::to_string(ta.polarity[i]) << " "
                  << fixed6(ta.priority[i]) << "\n";
    return 0;
}

struct GenArgs {
    std::string kind;
    int width = 2;
    int depth = 5;
    int n_args = 50;
    int n_rels = -1;
    uint64_t seed = 0;
    std::string out_path;
};

int cmd_gen(const GenArgs& a) {
    qbaf::bench::Instance inst;
    if (a.kind == "tree") {
        inst = qbaf::bench::gen_tree({a.width, a.depth, a.seed});
    } else if (a.kind == "cyclic") {
        int rels = a.n_rels < 0 ? a.n_args : a.n_rels;
        inst = qbaf::bench::gen_cyclic({a.n_args, rels, a.seed});
    } else {
        throw std::invalid_argument("unknown generator kind '" + a.kind +
                                    "' (expected tree or cyclic)");
    }
    write_file(a.out_path, qbaf::serialize_qbaf(inst.q));
    std::cout << "topic " << inst.topic << "\n";
    return 0;
}

struct BenchArgs {
    std::string config_path;
    std::string out_dir;
    int jobs = 0;
};

qbaf::bench::InstanceSpec parse_instance_spec(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw qbaf::SchemaError("instance spec must be an object with a 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    uint64_t seed = j.value("seed", 0ULL);
    if (kind == "tree") {
        qbaf::bench::TreeSpec t{j.value("width", 2), j.value("depth", 5), seed};
        return qbaf::bench::InstanceSpec::of(t);
    }
    if (kind == "cyclic") {
        int n_args = j.value("n_args", 50);
        qbaf::bench::CyclicSpec c{n_args, j.value("n_rels", n_args), seed};
        return qbaf::bench::InstanceSpec::of(c);
    }
    throw qbaf::SchemaError("unknown instance spec kind '" + kind + "'");
}

qbaf::bench::ExperimentConfig parse_experiment_config(const json& j, int jobs) {
    qbaf::bench::ExperimentConfig cfg;
    cfg.semantics = qbaf::semantics_from_name(j.value("semantics", std::string("qe")));
    cfg.kind = qbaf::problem_kind_from_name(j.value("problem", std::string("delta")));
    cfg.delta = j.value("delta", 0.1);
    cfg.epsilon = j.value("epsilon", 0.01);
    cfg.n_instances = j.value("n_instances", 20);
    cfg.max_sweeps = j.value("max_sweeps", 100000L);
    cfg.eval.tolerance = j.value("tolerance", 1e-6);
    cfg.eval.max_iterations = j.value("max_iterations", 10000);
    cfg.jobs = jobs;
    cfg.p = j.value("p", 1.0);
    if (j.contains("variants"))
        for (const json& v : j.at("variants"))
            cfg.variants.push_back(qbaf::bench::variant_from_name(v.get<std::string>()));
    if (j.contains("e_grid"))
        for (const json& e : j.at("e_grid")) cfg.e_grid.push_back(e.get<double>());
    return cfg;
}

int cmd_bench(const BenchArgs& a) {
    json doc;
    try {
        doc = json::parse(read_file(a.config_path));
    } catch (const json::parse_error& e) {
        throw qbaf::SyntaxError(e.what());
    }
    if (!doc.is_object() || !doc.contains("experiments") || !doc.at("experiments").is_array() ||
        doc.at("experiments").empty())
        throw qbaf::SchemaError("config must provide a non-empty 'experiments' array");

    int jobs = a.jobs > 0 ? a.jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    std::filesystem::create_directories(a.out_dir);

    int index = 0;
    for (const json& ex : doc.at("experiments")) {
        ++index;
        if (!ex.is_object() || !ex.contains("kind"))
            throw qbaf::SchemaError("experiment entries must be objects with a 'kind'");
        std::string kind = ex.at("kind").get<std::string>();
        std::string name = ex.value("name", kind + "_" + std::to_string(index));
        qbaf::bench::ExperimentConfig cfg = parse_experiment_config(ex, jobs);

        qbaf::bench::Table table;
        if (kind == "effectiveness" || kind == "scalability") {
            if (!ex.contains("specs") || !ex.at("specs").is_array())
                throw qbaf::SchemaError("experiment '" + name + "' needs a 'specs' array");
            std::vector<qbaf::bench::InstanceSpec> specs;
            for (const json& s : ex.at("specs")) specs.push_back(parse_instance_spec(s));
            qbaf::log::info("running " + kind + " experiment '" + name + "' over " +
                            std::to_string(specs.size()) + " spec(s), " +
                            std::to_string(cfg.n_instances) + " instance(s) each");
            table = kind == "effectiveness"
                        ? qbaf::bench::to_table(qbaf::bench::run_effectiveness(specs, cfg))
                        : qbaf::bench::to_table(qbaf::bench::run_scalability(specs, cfg));
        } else if (kind == "robustness") {
            if (!ex.contains("spec"))
                throw qbaf::SchemaError("experiment '" + name + "' needs a 'spec' object");
            qbaf::log::info("running robustness experiment '" + name + "' over " +
                            std::to_string(cfg.e_grid.size()) + " magnitude(s)");
            table = qbaf::bench::to_table(
                qbaf::bench::run_robustness(parse_instance_spec(ex.at("spec")), cfg));
        } else {
            throw qbaf::SchemaError("unknown experiment kind '" + kind + "'");
        }
        std::string path = (std::filesystem::path(a.out_dir) / (name + ".csv")).string();
        qbaf::bench::write_csv(table, path);
        qbaf::log::info("wrote " + path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantitative bipolar argumentation: evaluation, counterfactuals, attribution"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate argument strengths");
    eval_cmd->add_option("--qbaf", eval_args.qbaf_path, "QBAF JSON file")->required();
    eval_cmd->add_option("--semantics", eval_args.semantics, "dfquad, qe or reb");
    eval_cmd->add_option("--tol", eval_args.tol, "convergence tolerance");
    eval_cmd->add_option("--max-iters", eval_args.max_iters, "iteration budget");

    ExplainArgs explain_args;
    CLI::App* explain_cmd = app.add_subcommand("explain", "Search a counterfactual assignment");
    // frees the short name -h so the quotient offset can be spelled --h
    explain_cmd->set_help_flag("--help", "Print this help message and exit");
    explain_cmd->add_option("--qbaf", explain_args.qbaf_path, "QBAF JSON file")->required();
    explain_cmd->add_option("--topic", explain_args.topic, "topic argument id")->required();
    explain_cmd->add_option("--desired", explain_args.desired, "desired strength")->required();
    explain_cmd->add_option("--kind", explain_args.kind, "strong, delta or weak");
    explain_cmd->add_option("--delta", explain_args.delta, "band width for kind=delta");
    explain_cmd->add_option("--semantics", explain_args.semantics, "dfquad, qe or reb");
    explain_cmd->add_option("--epsilon", explain_args.epsilon, "step size");
    explain_cmd->add_option("--h", explain_args.offset, "difference quotient offset");
    explain_cmd->add_option("--c", explain_args.self_priority, "topic self-priority");
    explain_cmd->add_option("--max-sweeps", explain_args.max_sweeps, "sweep budget");
    explain_cmd->add_option("--tol", explain_args.tol, "convergence tolerance");
    explain_cmd->add_option("--max-iters", explain_args.max_iters, "iteration budget");
    explain_cmd->add_flag("--no-polarity", explain_args.no_polarity,
                          "steer by difference quotients only");
    explain_cmd->add_flag("--no-priority", explain_args.no_priority, "uniform priorities");
    explain_cmd->add_option("--out", explain_args.out_path, "write the counterfactual QBAF here");

    AttributeArgs attr_args;
    CLI::App* attr_cmd = app.add_subcommand("attribute", "Shapley importance per argument");
    attr_cmd->add_option("--qbaf", attr_args.qbaf_path, "QBAF JSON file")->required();
    attr_cmd->add_option("--topic", attr_args.topic, "topic argument id")->required();
    attr_cmd->add_option("--semantics", attr_args.semantics, "dfquad, qe or reb");
    attr_cmd->add_option("--tol", attr_args.tol, "convergence tolerance");
    attr_cmd->add_option("--max-iters", attr_args.max_iters, "iteration budget");
    attr_cmd->add_option("--limit", attr_args.limit, "argument count cap");
    attr_cmd->add_option("--csv", attr_args.csv_path, "also write argument,score CSV");

    PolarityArgs pol_args;
    CLI::App* pol_cmd = app.add_subcommand("polarity", "Polarity/priority towards a topic");
    pol_cmd->add_option("--qbaf", pol_args.qbaf_path, "QBAF JSON file")->required();
    pol_cmd->add_option("--topic", pol_args.topic, "topic argument id")->required();
    pol_cmd->add_option("--c", pol_args.c, "topic self-priority");

    GenArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random QBAF");
    gen_cmd->add_option("--kind", gen_args.kind, "tree or cyclic")->required();
    gen_cmd->add_option("--width", gen_args.width, "tree branching factor");
    gen_cmd->add_option("--depth", gen_args.depth, "tree edge levels");
    gen_cmd->add_option("--n-args", gen_args.n_args, "cyclic argument count");
    gen_cmd->add_option("--n-rels", gen_args.n_rels, "cyclic relation count (default n-args)");
    gen_cmd->add_option("--seed", gen_args.seed, "generator seed");
    gen_cmd->add_option("--out", gen_args.out_path, "output QBAF JSON file")->required();

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run experiments from a config file");
    bench_cmd->add_option("--config", bench_args.config_path, "experiment config JSON")->required();
    bench_cmd->add_option("--out", bench_args.out_dir, "output directory for CSVs")->required();
    bench_cmd->add_option("--jobs", bench_args.jobs, "worker threads (default: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (eval_cmd->parsed()) return cmd_eval(eval_args);
        if (explain_cmd->parsed()) return cmd_explain(explain_args);
        if (attr_cmd->parsed()) return cmd_attribute(attr_args);
        if (pol_cmd->parsed()) return cmd_polarity(pol_args);
        if (gen_cmd->parsed()) return cmd_gen(gen_args);
        if (bench_cmd->parsed()) return cmd_bench(bench_args);
    } catch (const qbaf::NonConvergenceError& e) {
        std::cerr << "qbaf: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qbaf: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
