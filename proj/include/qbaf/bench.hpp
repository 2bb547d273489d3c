#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbaf/core.hpp"
#include "qbaf/counterfactual.hpp"
#include "qbaf/semantics.hpp"

namespace qbaf::bench {

struct IoError : QbafError {
    using QbafError::QbafError;
};

/// Raised when an experiment is asked to run over zero instances.
struct EmptyExperimentError : QbafError {
    using QbafError::QbafError;
};

/// Full w-ary tree with `depth` levels of edges below the root, so
/// (w^(depth+1) - 1) / (w - 1) arguments. Every edge points child ->
/// parent and is an attack or a support with equal probability; base
/// scores are uniform on [0,1]. The root is the topic.
struct TreeSpec {
    int width = 2;
    int depth = 5;
    uint64_t seed = 0;
};

/// Random framework with n_args arguments and n_rels relations drawn
/// uniformly over ordered pairs of distinct arguments, without duplicates
/// across the combined relation set; cycles arise naturally. The topic is
/// drawn uniformly.
struct CyclicSpec {
    int n_args = 50;
    int n_rels = 50;
    uint64_t seed = 0;
};

/// A generator spec of either shape plus its printable label.
struct InstanceSpec {
    enum class Kind { Tree, Cyclic } kind = Kind::Tree;
    TreeSpec tree;
    CyclicSpec cyclic;

    static InstanceSpec of(const TreeSpec& t);
    static InstanceSpec of(const CyclicSpec& c);
    uint64_t seed() const;
    InstanceSpec with_seed(uint64_t s) const;
    std::string label() const;
};

struct Instance {
    Qbaf q;
    ArgumentId topic;
};

Instance gen_tree(const TreeSpec& spec);
Instance gen_cyclic(const CyclicSpec& spec);
Instance generate(const InstanceSpec& spec);

/// Copy of q with its base scores replaced.
Qbaf with_base_scores(const Qbaf& q, const BaseScoreFn& tau);

/// The four ablation variants of the counterfactual solver.
struct VariantSpec {
    std::string name;
    bool use_polarity = true;
    bool use_priority = true;
};

/// "BL" (neither), "BL+pri", "BL+pol", "CE-QArg" (both).
VariantSpec variant_from_name(const std::string& name);
std::vector<VariantSpec> all_variants();

struct ExperimentConfig {
    Semantics semantics = Semantics::Qe;
    ProblemKind kind = ProblemKind::DeltaApproximate;
    double delta = 0.1;
    double epsilon = 0.01;
    int n_instances = 20;
    long max_sweeps = 100000;
    EvalConfig eval;
    int jobs = 1;
    std::vector<VariantSpec> variants;  // effectiveness; empty = all four
    std::vector<double> e_grid;         // robustness perturbation magnitudes
    double p = 1.0;                     // robustness distance order
};

struct EffectivenessRow {
    std::string spec;
    std::string variant;
    double validity = 0.0;
    double l1_mean = 0.0;
    double l2_mean = 0.0;
    double runtime_mean_s = 0.0;
    double runtime_median_s = 0.0;
    int n = 0;
};

struct ScalabilityRow {
    std::string spec;
    int n_args = 0;
    double validity = 0.0;
    double runtime_mean_s = 0.0;
    double runtime_median_s = 0.0;
    int n = 0;
};

struct RobustnessRow {
    double e = 0.0;
    double dist_mean = 0.0;          // d_p between base and perturbed explanations
    double strength_diff_mean = 0.0; // topic strength shift of the perturbed explanation
    int n_dist = 0;                  // instances contributing to dist_mean
    int n_strength = 0;
};

/// For every spec and every requested variant: validity rate, mean L1/L2
/// of the produced counterfactuals and runtime statistics over
/// cfg.n_instances random instances. Desired strengths are uniform on
/// [0,1], re-drawn while within 1e-6 of the topic's current strength.
/// Solver failures count as invalid rows; they never abort the run.
std::vector<EffectivenessRow> run_effectiveness(const std::vector<InstanceSpec>& specs,
                                                const ExperimentConfig& cfg);

/// Runtime of the full solver (polarity + priority) across instance sizes.
std::vector<ScalabilityRow> run_scalability(const std::vector<InstanceSpec>& specs,
                                            const ExperimentConfig& cfg);

/// Stability under base-score perturbation tau_e = min(1, tau + e): how
/// far the re-solved explanation moves (dist_mean, order cfg.p) and how
/// much the topic strength of the perturbed explanation min(1, tau' + e)
/// shifts, per magnitude in cfg.e_grid, averaged over instances.
std::vector<RobustnessRow> run_robustness(const InstanceSpec& spec, const ExperimentConfig& cfg);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table to_table(const std::vector<EffectivenessRow>& rows);
Table to_table(const std::vector<ScalabilityRow>& rows);
Table to_table(const std::vector<RobustnessRow>& rows);

/// Floats rendered with six significant digits.
std::string csv_number(double v);

/// Header line plus one line per row, comma-separated, newline-terminated.
void write_csv(const Table& table, const std::string& path);
std::string to_csv(const Table& table);

}  // namespace qbaf::bench
