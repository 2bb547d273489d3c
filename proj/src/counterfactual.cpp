#include "qbaf/counterfactual.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qbaf/graph.hpp"
#include "qbaf/log.hpp"

namespace qbaf {

namespace {

constexpr double kStrongTol = 1e-9;
// Slack on the delta/weak band edges so a strongly valid candidate is
// also delta- and weakly valid in floating point.
constexpr double kEdgeSlack = 1e-9;
constexpr int kMaxHalvings = 20;

bool satisfies(ProblemKind kind, double original, double desired, double delta, double achieved) {
    bool ascending = original < desired;
    switch (kind) {
        case ProblemKind::Strong:
            return std::fabs(achieved - desired) <= kStrongTol;
        case ProblemKind::DeltaApproximate:
            return ascending ? achieved >= desired - kEdgeSlack &&
                                   achieved <= desired + delta + kEdgeSlack
                             : achieved <= desired + kEdgeSlack &&
                                   achieved >= desired - delta - kEdgeSlack;
        case ProblemKind::Weak:
            return ascending ? achieved >= desired - kEdgeSlack : achieved <= desired + kEdgeSlack;
    }
    return false;
}

/// Far edge of the target band in the direction of travel; stepping past
/// it triggers the overshoot guard. Weak problems have no far edge.
double far_edge(ProblemKind kind, bool ascending, double desired, double delta) {
    switch (kind) {
        case ProblemKind::Strong: return ascending ? desired + kStrongTol : desired - kStrongTol;
        case ProblemKind::DeltaApproximate:
            return ascending ? desired + delta + kEdgeSlack : desired - delta - kEdgeSlack;
        case ProblemKind::Weak:
            return ascending ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

/// Quotient offset adjusted so tau + h stays within [0,1]: negated when
/// the preferred direction leaves the range, shrunk to the available room
/// when both directions would.
double pick_offset(double tau, double h) {
    if (tau + h >= 0.0 && tau + h <= 1.0) return h;
    if (tau - h >= 0.0 && tau - h <= 1.0) return -h;
    double up = 1.0 - tau, down = tau;
    return up >= down ? up : -down;
}

void validate_query(const Qbaf& q, const CexQuery& query) {
    q.index_of(query.topic);
    if (!std::isfinite(query.desired_strength) || query.desired_strength < 0.0 ||
        query.desired_strength > 1.0)
        throw std::invalid_argument("desired strength must lie in [0,1]");
    if (query.kind == ProblemKind::DeltaApproximate && !(query.delta > 0.0))
        throw std::invalid_argument("delta must be positive");
}

void validate_solver_cfg(const SolverConfig& cfg) {
    if (!(cfg.epsilon > 0.0) || cfg.epsilon > 1.0)
        throw std::invalid_argument("epsilon must lie in (0,1]");
    double h = cfg.quotient_offset;
    if (!(std::fabs(h) > 0.0) || std::fabs(h) > 1.0)
        throw std::invalid_argument("quotient offset must lie in [-1,0) or (0,1]");
    if (!(cfg.self_priority > 1.0))
        throw std::invalid_argument("self-priority constant must exceed 1");
    if (cfg.max_sweeps < 1) throw std::invalid_argument("max_sweeps must be at least 1");
}

}  // namespace

ProblemKind problem_kind_from_name(const std::string& name) {
    if (name == "strong") return ProblemKind::Strong;
    if (name == "delta") return ProblemKind::DeltaApproximate;
    if (name == "weak") return ProblemKind::Weak;
    throw std::invalid_argument("unknown problem kind '" + name +
                                "' (expected strong, delta or weak)");
}

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Strong: return "strong";
        case ProblemKind::DeltaApproximate: return "delta";
        case ProblemKind::Weak: return "weak";
    }
    return "?";
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Valid: return "valid";
        case SolveStatus::Unreachable: return "unreachable";
        case SolveStatus::SweepLimit: return "sweep-limit";
    }
    return "?";
}

double lp_distance(const BaseScoreFn& a, const BaseScoreFn& b, double p) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("score assignments cover different argument sets");
    if (!(p >= 1.0)) throw std::invalid_argument("order p must be at least 1");
    double acc = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        double d = std::fabs(a.values[i] - b.values[i]);
        if (p == 1.0)
            acc += d;
        else if (p == 2.0)
            acc += d * d;
        else
            acc += std::pow(d, p);
    }
    if (p == 1.0) return acc;
    if (p == 2.0) return std::sqrt(acc);
    return std::pow(acc, 1.0 / p);
}

BaseScoreFn trivial_counterfactual(const Qbaf& q, const ArgumentId& topic, double desired) {
    if (!std::isfinite(desired) || desired < 0.0 || desired > 1.0)
        throw std::invalid_argument("desired strength must lie in [0,1]");
    uint32_t t = q.index_of(topic);
    BaseScoreFn out;
    out.values.assign(q.size(), 0.0);
    out.values[t] = desired;
    return out;
}

bool check_validity(const Qbaf& q, Semantics sem, const CexQuery& query,
                    const BaseScoreFn& candidate, const EvalConfig& cfg) {
    validate_query(q, query);
    validate_scores(q, candidate);
    if (candidate.values == q.base_scores().values) return false;

    StrengthMap original = evaluate(q, sem, cfg);
    if (!original.converged)
        throw NonConvergenceError("evaluation of the original scores did not converge");
    StrengthMap changed = evaluate(q, candidate, sem, cfg);
    if (!changed.converged)
        throw NonConvergenceError("evaluation of the candidate scores did not converge");

    uint32_t t = q.index_of(query.topic);
    return satisfies(query.kind, original.strengths[t], query.desired_strength, query.delta,
                     changed.strengths[t]);
}

double difference_quotient(const Qbaf& q, Semantics sem, const ArgumentId& source,
                           const ArgumentId& topic, double h, const StrengthMap& baseline,
                           const EvalConfig& cfg) {
    if (!(std::fabs(h) > 0.0) || std::fabs(h) > 1.0)
        throw std::invalid_argument("offset h must lie in [-1,0) or (0,1]");
    if (!baseline.converged)
        throw std::invalid_argument("baseline evaluation must be converged");
    uint32_t s = q.index_of(source), t = q.index_of(topic);

    double h_eff = pick_offset(q.base_score(s), h);
    BaseScoreFn shifted = q.base_scores();
    shifted.values[s] += h_eff;
    StrengthMap moved = evaluate(q, shifted, sem, cfg);
    if (!moved.converged)
        throw NonConvergenceError("evaluation of the shifted scores did not converge");
    return (moved.strengths[t] - baseline.strengths[t]) / h_eff;
}

CexResult solve(const Qbaf& q, Semantics sem, const CexQuery& query, const SolverConfig& cfg) {
    auto t_start = std::chrono::steady_clock::now();
    validate_query(q, query);
    validate_solver_cfg(cfg);

    const uint32_t t = q.index_of(query.topic);
    const size_t n = q.size();
    const double desired = query.desired_strength;

    // Only arguments with a path to the topic can move its strength, so
    // all working evaluations run on the sub-framework they induce.
    std::vector<uint8_t> rmask;
    std::vector<uint32_t> rdist;
    detail::co_reach(q, t, rmask, rdist);
    auto eval_topic = [&](const std::vector<double>& tau) {
        StrengthMap m = detail::eval_core(q, tau, sem, cfg.eval, rmask);
        if (!m.converged)
            throw NonConvergenceError("working evaluation did not converge within " +
                                      std::to_string(cfg.eval.max_iterations) + " iterations");
        return m.strengths[t];
    };

    std::vector<double> tau = q.base_scores().values;
    const double sigma0 = eval_topic(tau);
    if (std::fabs(sigma0 - desired) <= kStrongTol)
        throw std::invalid_argument("desired strength equals the current strength of the topic");
    const bool ascending = sigma0 < desired;
    const double edge = far_edge(query.kind, ascending, desired, query.delta);

    std::vector<int> dir(n, 0);
    std::vector<uint8_t> dynamic(n, 0);
    std::vector<double> pri(n, 1.0);
    if (cfg.use_polarity || cfg.use_priority) {
        TopicAnalysis ta = analyze_topic(q, query.topic, cfg.self_priority);
        if (cfg.use_polarity) {
            for (uint32_t v = 0; v < n; ++v) {
                switch (ta.polarity[v]) {
                    case Polarity::Positive: dir[v] = 1; break;
                    case Polarity::Negative: dir[v] = -1; break;
                    case Polarity::Neutral: dir[v] = 0; break;
                    case Polarity::Unknown: dynamic[v] = 1; break;
                }
            }
        } else {
            std::fill(dynamic.begin(), dynamic.end(), 1);
        }
        if (cfg.use_priority) pri = ta.priority;
    } else {
        std::fill(dynamic.begin(), dynamic.end(), 1);
    }

    double sigma = sigma0;
    double eps = cfg.epsilon;
    int halvings = 0;
    long sweeps = 0;
    SolveStatus status = SolveStatus::SweepLimit;

    std::vector<double> proposed(n);
    std::vector<double> shifted(n);
    while (sweeps < cfg.max_sweeps) {
        ++sweeps;

        for (uint32_t v = 0; v < n; ++v) {
            if (!dynamic[v]) continue;
            if (pri[v] == 0.0) {
                dir[v] = 0;  // the update loop skips it anyway
                continue;
            }
            double h_eff = pick_offset(tau[v], cfg.quotient_offset);
            shifted = tau;
            shifted[v] = std::clamp(tau[v] + h_eff, 0.0, 1.0);
            double quo = (eval_topic(shifted) - sigma) / h_eff;
            dir[v] = quo > 0.0 ? 1 : quo < 0.0 ? -1 : 0;
        }

        proposed = tau;
        bool changed = false;
        for (uint32_t v = 0; v < n; ++v) {
            int d = ascending ? dir[v] : -dir[v];
            if (d == 0 || pri[v] == 0.0) continue;
            double nv = std::clamp(tau[v] + d * eps * pri[v], 0.0, 1.0);
            changed = changed || nv != tau[v];
            proposed[v] = nv;
        }
        if (!changed) {
            status = SolveStatus::Unreachable;
            break;
        }

        double sigma_new = eval_topic(proposed);
        if (satisfies(query.kind, sigma0, desired, query.delta, sigma_new)) {
            // Certify against a whole-framework evaluation before stopping;
            // on cyclic graphs the working value can sit a hair off it.
            BaseScoreFn cand{proposed};
            bool certified = false;
            try {
                certified = check_validity(q, sem, query, cand, cfg.eval);
            } catch (const NonConvergenceError&) {
                certified = false;
            }
            if (certified) {
                tau = proposed;
                status = SolveStatus::Valid;
                break;
            }
        }
        if (ascending ? sigma_new > edge : sigma_new < edge) {
            if (halvings >= kMaxHalvings) {
                status = SolveStatus::Unreachable;
                break;
            }
            ++halvings;
            eps /= 2.0;
            continue;  // retry the sweep from the unchanged state
        }
        tau = proposed;
        sigma = sigma_new;
    }

    CexResult res;
    res.counterfactual.values = tau;
    res.status = status;
    res.sweeps = sweeps;
    StrengthMap full = evaluate(q, res.counterfactual, sem, cfg.eval);
    res.achieved_strength = full.strengths[t];
    try {
        res.valid = check_validity(q, sem, query, res.counterfactual, cfg.eval);
    } catch (const NonConvergenceError&) {
        res.valid = false;
    }
    if (res.valid != (status == SolveStatus::Valid))
        log::debug("solver status " + to_string(status) + " while final certification says " +
                   (res.valid ? "valid" : "invalid"));
    res.l1 = lp_distance(res.counterfactual, q.base_scores(), 1.0);
    res.l2 = lp_distance(res.counterfactual, q.base_scores(), 2.0);
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

BaseScoreFn nullify(const Qbaf& q, const BaseScoreFn& candidate, const ArgumentId& victim) {
    validate_scores(q, candidate);
    BaseScoreFn out = candidate;
    out.values[q.index_of(victim)] = 0.0;
    return out;
}

}  // namespace qbaf
