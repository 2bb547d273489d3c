#pragma once

#include <span>
#include <string>
#include <vector>

#include "qbaf/core.hpp"

namespace qbaf {

enum class Semantics { DfQuad, Qe, Reb };

Semantics semantics_from_name(const std::string& name);  // "dfquad" | "qe" | "reb"
std::string to_string(Semantics sem);

/// Raised by operations that need a converged evaluation but did not get
/// one within the configured iteration budget.
struct NonConvergenceError : QbafError {
    using QbafError::QbafError;
};

struct EvalConfig {
    double tolerance = 1e-6;  // max per-sweep strength change accepted as converged
    int max_iterations = 10000;
};

/// Result of an evaluation. Strengths are indexed like Qbaf::names().
/// For cyclic frameworks `converged` may be false, in which case the map
/// holds the last iterate; callers decide whether that is fatal.
struct StrengthMap {
    std::vector<double> strengths;
    bool converged = false;
    int iterations_used = 0;
    double max_residual = 0.0;
};

/// Aggregated energy of attacker/supporter strengths.
///   DF-QuAD: prod(1 - a) - prod(1 - s)   (empty products are 1)
///   QE/REB:  sum(s) - sum(a)
double aggregate(Semantics sem, std::span<const double> attacker_strengths,
                 std::span<const double> supporter_strengths);

/// Final strength of an argument with base score `base` and aggregate `e`.
double influence(Semantics sem, double base, double e);

/// Evaluates q under its own base scores (or an override tau).
/// Acyclic frameworks are evaluated exactly in topological order
/// (converged, 1 iteration, residual 0); cyclic ones by synchronous
/// iteration from the base scores until the largest per-sweep change
/// drops to cfg.tolerance or cfg.max_iterations is exhausted.
StrengthMap evaluate(const Qbaf& q, Semantics sem, const EvalConfig& cfg = {});
StrengthMap evaluate(const Qbaf& q, const BaseScoreFn& tau, Semantics sem,
                     const EvalConfig& cfg = {});

/// Synchronous fixed-point iteration regardless of acyclicity; on acyclic
/// frameworks it settles on the topological result.
StrengthMap evaluate_fixed_point(const Qbaf& q, const BaseScoreFn& tau, Semantics sem,
                                 const EvalConfig& cfg = {});

/// Strength of `topic` in the sub-framework induced by `present` plus the
/// topic itself; absent arguments are deleted with all incident edges.
/// Throws NonConvergenceError if the restricted evaluation does not
/// converge, UnknownArgumentError for ids outside q.
double evaluate_restricted(const Qbaf& q, const std::vector<ArgumentId>& present, Semantics sem,
                           const EvalConfig& cfg, const ArgumentId& topic);

/// One-sweep residual of a strength assignment: the largest distance
/// between s(a) and the recomputed influence of a under s.
double residual(const Qbaf& q, const BaseScoreFn& tau, Semantics sem,
                std::span<const double> strengths);

namespace detail {

/// Shared evaluation core. `mask` selects the present arguments (empty =
/// all). Strengths of absent arguments are reported as 0 and ignored.
StrengthMap eval_core(const Qbaf& q, std::span<const double> tau, Semantics sem,
                      const EvalConfig& cfg, const std::vector<uint8_t>& mask);

/// Topological order of the masked subgraph, or empty if it has a cycle.
std::vector<uint32_t> topo_order(const Qbaf& q, const std::vector<uint8_t>& mask);

}  // namespace detail

}  // namespace qbaf
