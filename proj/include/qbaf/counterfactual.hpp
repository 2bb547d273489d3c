#pragma once

#include <string>

#include "qbaf/core.hpp"
#include "qbaf/semantics.hpp"

namespace qbaf {

/// What counts as reaching the desired strength s*:
///   Strong:            |strength - s*| <= 1e-9
///   DeltaApproximate:  strength lands in the band of width delta on the
///                      far side of s* (above when starting below, below
///                      when starting above)
///   Weak:              strength ends at or beyond s*
enum class ProblemKind { Strong, DeltaApproximate, Weak };

ProblemKind problem_kind_from_name(const std::string& name);  // "strong"|"delta"|"weak"
std::string to_string(ProblemKind kind);

struct CexQuery {
    ArgumentId topic;
    double desired_strength = 0.5;
    ProblemKind kind = ProblemKind::DeltaApproximate;
    double delta = 0.1;  // band width for DeltaApproximate
};

struct SolverConfig {
    double epsilon = 0.01;         // per-sweep step size
    double quotient_offset = 0.1;  // h used by difference quotients
    double self_priority = 2.0;    // c, priority of the topic itself
    bool use_polarity = true;      // false: every direction from a per-sweep quotient
    bool use_priority = true;      // false: priority identically 1, topic included
    long max_sweeps = 100000;
    EvalConfig eval;
};

enum class SolveStatus {
    Valid,        // stopping condition met and re-verified
    Unreachable,  // no sweep can make further progress
    SweepLimit,   // max_sweeps exhausted; best-so-far returned
};

std::string to_string(SolveStatus s);

struct CexResult {
    BaseScoreFn counterfactual;
    bool valid = false;
    SolveStatus status = SolveStatus::Unreachable;
    double achieved_strength = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    long sweeps = 0;
    double wall_time_s = 0.0;
};

/// Minkowski distance of order p between two score assignments over the
/// same framework. Requires p >= 1.
double lp_distance(const BaseScoreFn& a, const BaseScoreFn& b, double p);

/// The degenerate counterfactual that sets the topic's base score to s*
/// and zeroes every other argument's.
BaseScoreFn trivial_counterfactual(const Qbaf& q, const ArgumentId& topic, double desired);

/// True iff candidate differs from q's base scores and the evaluation
/// under candidate satisfies the query. Comparisons carry a 1e-9 slack so
/// strong validity implies delta validity implies weak validity even at
/// the band edges. Throws NonConvergenceError when the evaluation of
/// either score assignment fails to converge.
bool check_validity(const Qbaf& q, Semantics sem, const CexQuery& query,
                    const BaseScoreFn& candidate, const EvalConfig& cfg = {});

/// Forward difference quotient of the topic's strength with respect to
/// the base score of `source`, with offset h (negated when tau(source)+h
/// leaves [0,1], shrunk when both directions would). `baseline` must be a
/// converged evaluation of q.
double difference_quotient(const Qbaf& q, Semantics sem, const ArgumentId& source,
                           const ArgumentId& topic, double h, const StrengthMap& baseline,
                           const EvalConfig& cfg = {});

/// Iterative counterfactual search. Every sweep nudges each argument by
/// epsilon * priority in its steering direction (polarity when enabled,
/// the sign of a fresh difference quotient otherwise or for unknown
/// arguments), clipped to [0,1]. A sweep that overshoots the target band
/// is retried from the pre-sweep state with epsilon halved (at most 20
/// halvings). Returns status Unreachable when a sweep no longer changes
/// any score, SweepLimit when max_sweeps runs out; `valid` results are
/// re-verified through check_validity on a fresh evaluation.
CexResult solve(const Qbaf& q, Semantics sem, const CexQuery& query,
                const SolverConfig& cfg = {});

/// Copy of `candidate` with the victim's base score set to 0.
BaseScoreFn nullify(const Qbaf& q, const BaseScoreFn& candidate, const ArgumentId& victim);

}  // namespace qbaf
