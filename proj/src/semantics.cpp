#include "qbaf/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbaf {

Semantics semantics_from_name(const std::string& name) {
    if (name == "dfquad") return Semantics::DfQuad;
    if (name == "qe") return Semantics::Qe;
    if (name == "reb") return Semantics::Reb;
    throw std::invalid_argument("unknown semantics '" + name + "' (expected dfquad, qe or reb)");
}

std::string to_string(Semantics sem) {
    switch (sem) {
        case Semantics::DfQuad: return "dfquad";
        case Semantics::Qe: return "qe";
        case Semantics::Reb: return "reb";
    }
    return "?";
}

static void validate_cfg(const EvalConfig& cfg) {
    if (!(cfg.tolerance > 0.0) || !(cfg.tolerance < 1.0))
        throw std::invalid_argument("evaluation tolerance must be in (0,1)");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("max_iterations must be at least 1");
}

double aggregate(Semantics sem, std::span<const double> attacker_strengths,
                 std::span<const double> supporter_strengths) {
    if (sem == Semantics::DfQuad) {
        double att = 1.0, sup = 1.0;
        for (double a : attacker_strengths) att *= 1.0 - a;
        for (double s : supporter_strengths) sup *= 1.0 - s;
        return att - sup;
    }
    double sum = 0.0;
    for (double s : supporter_strengths) sum += s;
    for (double a : attacker_strengths) sum -= a;
    return sum;
}

double influence(Semantics sem, double base, double e) {
    double value = base;
    switch (sem) {
        case Semantics::DfQuad:
            value = e <= 0.0 ? base - base * (-e) : base + (1.0 - base) * e;
            break;
        case Semantics::Qe: {
            double h = (e * e) / (1.0 + e * e);
            value = e <= 0.0 ? base - base * h : base + (1.0 - base) * h;
            break;
        }
        case Semantics::Reb:
            value = 1.0 - (1.0 - base * base) / (1.0 + base * std::exp(e));
            break;
    }
    return std::clamp(value, 0.0, 1.0);
}

namespace detail {

std::vector<uint32_t> topo_order(const Qbaf& q, const std::vector<uint8_t>& mask) {
    const size_t n = q.size();
    std::vector<uint32_t> indegree(n, 0);
    size_t present = 0;
    for (uint32_t v = 0; v < n; ++v) {
        if (!mask.empty() && !mask[v]) continue;
        ++present;
        for (const Edge& e : q.in_edges(v))
            if (mask.empty() || mask[e.from]) ++indegree[v];
    }
    std::vector<uint32_t> order;
    order.reserve(present);
    std::vector<uint32_t> ready;
    for (uint32_t v = 0; v < n; ++v)
        if ((mask.empty() || mask[v]) && indegree[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        uint32_t v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (const Edge& e : q.out_edges(v)) {
            if (!mask.empty() && !mask[e.to]) continue;
            if (--indegree[e.to] == 0) ready.push_back(e.to);
        }
    }
    if (order.size() != present) order.clear();
    return order;
}

StrengthMap eval_core(const Qbaf& q, std::span<const double> tau, Semantics sem,
                      const EvalConfig& cfg, const std::vector<uint8_t>& mask) {
    validate_cfg(cfg);
    const size_t n = q.size();
    StrengthMap result;
    result.strengths.assign(n, 0.0);

    auto present = [&](uint32_t v) { return mask.empty() || mask[v] != 0; };
    std::vector<double> att, sup;
    auto energy = [&](uint32_t v, const std::vector<double>& s) {
        att.clear();
        sup.clear();
        for (const Edge& e : q.in_edges(v)) {
            if (!present(e.from)) continue;
            (e.attack ? att : sup).push_back(s[e.from]);
        }
        return aggregate(sem, att, sup);
    };

    std::vector<uint32_t> order = topo_order(q, mask);
    size_t n_present = 0;
    for (uint32_t v = 0; v < n; ++v) n_present += present(v) ? 1 : 0;
    if (order.size() == n_present) {
        for (uint32_t v : order)
            result.strengths[v] = influence(sem, tau[v], energy(v, result.strengths));
        result.converged = true;
        result.iterations_used = 1;
        result.max_residual = 0.0;
        return result;
    }

    std::vector<double> cur(n, 0.0), next(n, 0.0);
    for (uint32_t v = 0; v < n; ++v)
        if (present(v)) cur[v] = tau[v];
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        double diff = 0.0;
        for (uint32_t v = 0; v < n; ++v) {
            if (!present(v)) continue;
            next[v] = influence(sem, tau[v], energy(v, cur));
            diff = std::max(diff, std::fabs(next[v] - cur[v]));
        }
        std::swap(cur, next);
        result.iterations_used = it;
        result.max_residual = diff;
        if (diff <= cfg.tolerance) {
            result.converged = true;
            break;
        }
    }
    for (uint32_t v = 0; v < n; ++v)
        if (present(v)) result.strengths[v] = cur[v];
    return result;
}

}  // namespace detail

StrengthMap evaluate(const Qbaf& q, Semantics sem, const EvalConfig& cfg) {
    return evaluate(q, q.base_scores(), sem, cfg);
}

StrengthMap evaluate(const Qbaf& q, const BaseScoreFn& tau, Semantics sem, const EvalConfig& cfg) {
    validate_scores(q, tau);
    return detail::eval_core(q, tau.values, sem, cfg, {});
}

StrengthMap evaluate_fixed_point(const Qbaf& q, const BaseScoreFn& tau, Semantics sem,
                                 const EvalConfig& cfg) {
    validate_scores(q, tau);
    validate_cfg(cfg);
    const size_t n = q.size();
    StrengthMap result;
    std::vector<double> att, sup;
    std::vector<double> cur = tau.values, next(n, 0.0);
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        double diff = 0.0;
        for (uint32_t v = 0; v < n; ++v) {
            att.clear();
            sup.clear();
            for (const Edge& e : q.in_edges(v)) (e.attack ? att : sup).push_back(cur[e.from]);
            next[v] = influence(sem, tau.values[v], aggregate(sem, att, sup));
            diff = std::max(diff, std::fabs(next[v] - cur[v]));
        }
        std::swap(cur, next);
        result.iterations_used = it;
        result.max_residual = diff;
        if (diff <= cfg.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.strengths = std::move(cur);
    return result;
}

double evaluate_restricted(const Qbaf& q, const std::vector<ArgumentId>& present, Semantics sem,
                           const EvalConfig& cfg, const ArgumentId& topic) {
    std::vector<uint8_t> mask(q.size(), 0);
    uint32_t t = q.index_of(topic);
    mask[t] = 1;
    for (const ArgumentId& id : present) mask[q.index_of(id)] = 1;
    StrengthMap m = detail::eval_core(q, q.base_scores().values, sem, cfg, mask);
    if (!m.converged)
        throw NonConvergenceError("restricted evaluation did not converge within " +
                                  std::to_string(cfg.max_iterations) + " iterations");
    return m.strengths[t];
}

double residual(const Qbaf& q, const BaseScoreFn& tau, Semantics sem,
                std::span<const double> strengths) {
    validate_scores(q, tau);
    if (strengths.size() != q.size())
        throw std::invalid_argument("strength assignment size mismatch");
    double worst = 0.0;
    std::vector<double> att, sup;
    for (uint32_t v = 0; v < q.size(); ++v) {
        att.clear();
        sup.clear();
        for (const Edge& e : q.in_edges(v)) (e.attack ? att : sup).push_back(strengths[e.from]);
        double fresh = influence(sem, tau.values[v], aggregate(sem, att, sup));
        worst = std::max(worst, std::fabs(fresh - strengths[v]));
    }
    return worst;
}

}  // namespace qbaf
