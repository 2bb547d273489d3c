#include "qbaf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qbaf/log.hpp"
#include "qbaf/rng.hpp"

namespace qbaf::bench {

namespace {

constexpr uint64_t kQuerySalt = 0x71C4B5E2D0A9F36DULL;
constexpr double kCollisionTol = 1e-6;

std::string padded_id(size_t index, int width) {
    std::string num = std::to_string(index);
    if (num.size() < static_cast<size_t>(width)) num.insert(0, width - num.size(), '0');
    return "a" + num;
}

int digits(size_t max_index) {
    int d = 1;
    while (max_index >= 10) {
        max_index /= 10;
        ++d;
    }
    return d;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    size_t mid = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

size_t tree_node_count(const TreeSpec& spec) {
    if (spec.width < 1) throw std::invalid_argument("tree width must be at least 1");
    if (spec.depth < 0) throw std::invalid_argument("tree depth must be non-negative");
    size_t count = 0, level = 1;
    for (int d = 0; d <= spec.depth; ++d) {
        count += level;
        if (count > 10'000'000) throw std::invalid_argument("tree spec too large");
        level *= static_cast<size_t>(spec.width);
    }
    return count;
}

struct SolveOutcome {
    bool valid = false;
    double l1 = 0.0;
    double l2 = 0.0;
    double runtime_s = 0.0;
};

SolverConfig solver_config(const ExperimentConfig& cfg, const VariantSpec& variant) {
    SolverConfig sc;
    sc.epsilon = cfg.epsilon;
    sc.use_polarity = variant.use_polarity;
    sc.use_priority = variant.use_priority;
    sc.max_sweeps = cfg.max_sweeps;
    sc.eval = cfg.eval;
    return sc;
}

/// Desired strength for one instance: uniform, re-drawn while it collides
/// with the topic's current strength.
double sample_desired(Rng& rng, double current) {
    double s;
    do {
        s = rng.uniform01();
    } while (std::fabs(s - current) <= kCollisionTol);
    return s;
}

SolveOutcome run_solver(const Qbaf& q, const CexQuery& query, Semantics sem,
                        const SolverConfig& sc) {
    auto t0 = std::chrono::steady_clock::now();
    try {
        CexResult r = solve(q, sem, query, sc);
        return {r.valid, r.l1, r.l2, r.wall_time_s};
    } catch (const std::exception& e) {
        log::debug(std::string("solver failed on an instance: ") + e.what());
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return {false, 0.0, 0.0, elapsed};
    }
}

}  // namespace

InstanceSpec InstanceSpec::of(const TreeSpec& t) {
    InstanceSpec s;
    s.kind = Kind::Tree;
    s.tree = t;
    return s;
}

InstanceSpec InstanceSpec::of(const CyclicSpec& c) {
    InstanceSpec s;
    s.kind = Kind::Cyclic;
    s.cyclic = c;
    return s;
}

uint64_t InstanceSpec::seed() const { return kind == Kind::Tree ? tree.seed : cyclic.seed; }

InstanceSpec InstanceSpec::with_seed(uint64_t s) const {
    InstanceSpec copy = *this;
    (copy.kind == Kind::Tree ? copy.tree.seed : copy.cyclic.seed) = s;
    return copy;
}

std::string InstanceSpec::label() const {
    char buf[96];
    if (kind == Kind::Tree)
        std::snprintf(buf, sizeof(buf), "tree(w=%d,d=%d,seed=%llu)", tree.width, tree.depth,
                      static_cast<unsigned long long>(tree.seed));
    else
        std::snprintf(buf, sizeof(buf), "cyclic(n=%d,m=%d,seed=%llu)", cyclic.n_args,
                      cyclic.n_rels, static_cast<unsigned long long>(cyclic.seed));
    return buf;
}

Instance gen_tree(const TreeSpec& spec) {
    size_t count = tree_node_count(spec);
    int width = digits(count - 1);
    Rng rng(spec.seed);

    std::vector<std::pair<ArgumentId, double>> args;
    args.reserve(count);
    for (size_t i = 0; i < count; ++i) args.emplace_back(padded_id(i, width), rng.uniform01());

    std::vector<std::pair<ArgumentId, ArgumentId>> attacks, supports;
    for (size_t i = 1; i < count; ++i) {
        size_t parent = (i - 1) / static_cast<size_t>(spec.width);
        auto& side = rng.coin() ? attacks : supports;
        side.emplace_back(padded_id(i, width), padded_id(parent, width));
    }
    return {Qbaf(std::move(args), std::move(attacks), std::move(supports)), padded_id(0, width)};
}

Instance gen_cyclic(const CyclicSpec& spec) {
    if (spec.n_args < 1) throw std::invalid_argument("n_args must be at least 1");
    size_t n = static_cast<size_t>(spec.n_args);
    size_t max_rels = n * (n - 1);
    if (spec.n_rels < 0 || static_cast<size_t>(spec.n_rels) > max_rels)
        throw std::invalid_argument("n_rels must lie in [0, n_args*(n_args-1)]");

    int width = digits(n - 1);
    Rng rng(spec.seed);
    std::vector<std::pair<ArgumentId, double>> args;
    args.reserve(n);
    for (size_t i = 0; i < n; ++i) args.emplace_back(padded_id(i, width), rng.uniform01());

    std::vector<uint8_t> used(n * n, 0);
    std::vector<std::pair<ArgumentId, ArgumentId>> attacks, supports;
    for (int r = 0; r < spec.n_rels; ++r) {
        size_t from, to;
        do {
            from = rng.below(n);
            to = rng.below(n - 1);
            if (to >= from) ++to;
        } while (used[from * n + to]);
        used[from * n + to] = 1;
        auto& side = rng.coin() ? attacks : supports;
        side.emplace_back(padded_id(from, width), padded_id(to, width));
    }
    ArgumentId topic = padded_id(rng.below(n), width);
    return {Qbaf(std::move(args), std::move(attacks), std::move(supports)), topic};
}

Instance generate(const InstanceSpec& spec) {
    return spec.kind == InstanceSpec::Kind::Tree ? gen_tree(spec.tree) : gen_cyclic(spec.cyclic);
}

Qbaf with_base_scores(const Qbaf& q, const BaseScoreFn& tau) {
    validate_scores(q, tau);
    std::vector<std::pair<ArgumentId, double>> args;
    args.reserve(q.size());
    for (size_t i = 0; i < q.size(); ++i) args.emplace_back(q.name(i), tau.values[i]);
    std::vector<std::pair<ArgumentId, ArgumentId>> attacks, supports;
    for (const auto& [f, t] : q.attacks()) attacks.emplace_back(q.name(f), q.name(t));
    for (const auto& [f, t] : q.supports()) supports.emplace_back(q.name(f), q.name(t));
    return Qbaf(std::move(args), std::move(attacks), std::move(supports));
}

VariantSpec variant_from_name(const std::string& name) {
    if (name == "BL") return {name, false, false};
    if (name == "BL+pri") return {name, false, true};
    if (name == "BL+pol") return {name, true, false};
    if (name == "CE-QArg") return {name, true, true};
    throw std::invalid_argument("unknown variant '" + name +
                                "' (expected BL, BL+pri, BL+pol or CE-QArg)");
}

std::vector<VariantSpec> all_variants() {
    return {variant_from_name("BL"), variant_from_name("BL+pri"), variant_from_name("BL+pol"),
            variant_from_name("CE-QArg")};
}

std::vector<EffectivenessRow> run_effectiveness(const std::vector<InstanceSpec>& specs,
                                                const ExperimentConfig& cfg) {
    if (cfg.n_instances < 1) throw EmptyExperimentError("experiment over 0 instances");
    if (specs.empty()) throw EmptyExperimentError("experiment without instance specs");
    std::vector<VariantSpec> variants = cfg.variants.empty() ? all_variants() : cfg.variants;

    std::vector<EffectivenessRow> rows;
    for (const InstanceSpec& spec : specs) {
        // outcomes[v][i]: variant v on instance i
        std::vector<std::vector<SolveOutcome>> outcomes(
            variants.size(), std::vector<SolveOutcome>(cfg.n_instances));
        parallel_for(cfg.n_instances, cfg.jobs, [&](int i) {
            Instance inst = generate(spec.with_seed(instance_seed(spec.seed(), i)));
            StrengthMap m = evaluate(inst.q, cfg.semantics, cfg.eval);
            if (!m.converged) {
                log::debug("instance evaluation did not converge; counted invalid");
                return;
            }
            Rng qrng(instance_seed(spec.seed() ^ kQuerySalt, i));
            double current = m.strengths[inst.q.index_of(inst.topic)];
            CexQuery query{inst.topic, sample_desired(qrng, current), cfg.kind, cfg.delta};
            for (size_t v = 0; v < variants.size(); ++v)
                outcomes[v][i] = run_solver(inst.q, query, cfg.semantics, solver_config(cfg, variants[v]));
        });
        for (size_t v = 0; v < variants.size(); ++v) {
            EffectivenessRow row;
            row.spec = spec.label();
            row.variant = variants[v].name;
            row.n = cfg.n_instances;
            std::vector<double> l1s, l2s, times;
            int valid = 0;
            for (const SolveOutcome& o : outcomes[v]) {
                valid += o.valid ? 1 : 0;
                l1s.push_back(o.l1);
                l2s.push_back(o.l2);
                times.push_back(o.runtime_s);
            }
            row.validity = static_cast<double>(valid) / cfg.n_instances;
            row.l1_mean = mean(l1s);
            row.l2_mean = mean(l2s);
            row.runtime_mean_s = mean(times);
            row.runtime_median_s = median(times);
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<ScalabilityRow> run_scalability(const std::vector<InstanceSpec>& specs,
                                            const ExperimentConfig& cfg) {
    if (cfg.n_instances < 1) throw EmptyExperimentError("experiment over 0 instances");
    if (specs.empty()) throw EmptyExperimentError("experiment without instance specs");
    const VariantSpec full = variant_from_name("CE-QArg");

    std::vector<ScalabilityRow> rows;
    for (const InstanceSpec& spec : specs) {
        std::vector<SolveOutcome> outcomes(cfg.n_instances);
        std::atomic<int> n_args{0};
        parallel_for(cfg.n_instances, cfg.jobs, [&](int i) {
            Instance inst = generate(spec.with_seed(instance_seed(spec.seed(), i)));
            n_args = static_cast<int>(inst.q.size());
            StrengthMap m = evaluate(inst.q, cfg.semantics, cfg.eval);
            if (!m.converged) return;
            Rng qrng(instance_seed(spec.seed() ^ kQuerySalt, i));
            double current = m.strengths[inst.q.index_of(inst.topic)];
            CexQuery query{inst.topic, sample_desired(qrng, current), cfg.kind, cfg.delta};
            outcomes[i] = run_solver(inst.q, query, cfg.semantics, solver_config(cfg, full));
        });
        ScalabilityRow row;
        row.spec = spec.label();
        row.n_args = n_args;
        row.n = cfg.n_instances;
        std::vector<double> times;
        int valid = 0;
        for (const SolveOutcome& o : outcomes) {
            valid += o.valid ? 1 : 0;
            times.push_back(o.runtime_s);
        }
        row.validity = static_cast<double>(valid) / cfg.n_instances;
        row.runtime_mean_s = mean(times);
        row.runtime_median_s = median(times);
        rows.push_back(row);
    }
    return rows;
}

std::vector<RobustnessRow> run_robustness(const InstanceSpec& spec, const ExperimentConfig& cfg) {
    if (cfg.n_instances < 1) throw EmptyExperimentError("experiment over 0 instances");
    if (cfg.e_grid.empty()) throw EmptyExperimentError("robustness requires a non-empty e_grid");
    const VariantSpec full = variant_from_name("CE-QArg");
    const size_t ne = cfg.e_grid.size();

    // per instance, per e: (has_dist, dist, has_diff, diff)
    struct Cell {
        bool has_dist = false, has_diff = false;
        double dist = 0.0, diff = 0.0;
    };
    std::vector<std::vector<Cell>> cells(cfg.n_instances, std::vector<Cell>(ne));

    parallel_for(cfg.n_instances, cfg.jobs, [&](int i) {
        Instance inst = generate(spec.with_seed(instance_seed(spec.seed(), i)));
        const Qbaf& q = inst.q;
        uint32_t t = q.index_of(inst.topic);
        StrengthMap m = evaluate(q, cfg.semantics, cfg.eval);
        if (!m.converged) return;
        Rng qrng(instance_seed(spec.seed() ^ kQuerySalt, i));
        CexQuery query{inst.topic, sample_desired(qrng, m.strengths[t]), cfg.kind, cfg.delta};

        CexResult base;
        try {
            base = solve(q, cfg.semantics, query, solver_config(cfg, full));
        } catch (const std::exception&) {
            return;
        }
        if (!base.valid) return;
        StrengthMap base_eval = evaluate(q, base.counterfactual, cfg.semantics, cfg.eval);

        for (size_t k = 0; k < ne; ++k) {
            double e = cfg.e_grid[k];
            BaseScoreFn tau_e = q.base_scores();
            for (double& v : tau_e.values) v = std::min(1.0, v + e);
            try {
                Qbaf perturbed = with_base_scores(q, tau_e);
                CexResult re = solve(perturbed, cfg.semantics, query, solver_config(cfg, full));
                if (re.valid) {
                    cells[i][k].has_dist = true;
                    cells[i][k].dist = lp_distance(base.counterfactual, re.counterfactual, cfg.p);
                }
            } catch (const std::exception& ex) {
                log::debug(std::string("perturbed solve skipped: ") + ex.what());
            }
            BaseScoreFn expl_e = base.counterfactual;
            for (double& v : expl_e.values) v = std::min(1.0, v + e);
            StrengthMap moved = evaluate(q, expl_e, cfg.semantics, cfg.eval);
            if (moved.converged && base_eval.converged) {
                cells[i][k].has_diff = true;
                cells[i][k].diff = std::fabs(moved.strengths[t] - base_eval.strengths[t]);
            }
        }
    });

    std::vector<RobustnessRow> rows;
    for (size_t k = 0; k < ne; ++k) {
        RobustnessRow row;
        row.e = cfg.e_grid[k];
        double dist_sum = 0.0, diff_sum = 0.0;
        for (int i = 0; i < cfg.n_instances; ++i) {
            if (cells[i][k].has_dist) {
                dist_sum += cells[i][k].dist;
                ++row.n_dist;
            }
            if (cells[i][k].has_diff) {
                diff_sum += cells[i][k].diff;
                ++row.n_strength;
            }
        }
        row.dist_mean = row.n_dist > 0 ? dist_sum / row.n_dist : 0.0;
        row.strength_diff_mean = row.n_strength > 0 ? diff_sum / row.n_strength : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

Table to_table(const std::vector<EffectivenessRow>& rows) {
    Table t;
    t.header = {"spec", "variant", "validity", "l1_mean", "l2_mean",
                "runtime_mean_s", "runtime_median_s", "n"};
    for (const auto& r : rows)
        t.rows.push_back({r.spec, r.variant, csv_number(r.validity), csv_number(r.l1_mean),
                          csv_number(r.l2_mean), csv_number(r.runtime_mean_s),
                          csv_number(r.runtime_median_s), std::to_string(r.n)});
    return t;
}

Table to_table(const std::vector<ScalabilityRow>& rows) {
    Table t;
    t.header = {"spec", "n_args", "validity", "runtime_mean_s", "runtime_median_s", "n"};
    for (const auto& r : rows)
        t.rows.push_back({r.spec, std::to_string(r.n_args), csv_number(r.validity),
                          csv_number(r.runtime_mean_s), csv_number(r.runtime_median_s),
                          std::to_string(r.n)});
    return t;
}

Table to_table(const std::vector<RobustnessRow>& rows) {
    Table t;
    t.header = {"e", "dist_mean", "strength_diff_mean", "n_dist", "n_strength"};
    for (const auto& r : rows)
        t.rows.push_back({csv_number(r.e), csv_number(r.dist_mean),
                          csv_number(r.strength_diff_mean), std::to_string(r.n_dist),
                          std::to_string(r.n_strength)});
    return t;
}

std::string to_csv(const Table& table) {
    std::string out;
    auto append_line = [&out](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append_line(table.header);
    for (const auto& row : table.rows) append_line(row);
    return out;
}

void write_csv(const Table& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << to_csv(table);
    if (!f.good()) throw IoError("failed while writing '" + path + "'");
}

}  // namespace qbaf::bench
