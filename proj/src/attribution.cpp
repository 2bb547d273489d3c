#include "qbaf/attribution.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace qbaf {

namespace {

using CoalitionCache = std::unordered_map<uint64_t, double>;

/// Strength of the topic in the sub-framework induced by the coalition
/// encoded in `bits` (one bit per entry of `others`) plus the topic.
double coalition_strength(const Qbaf& q, Semantics sem, const EvalConfig& cfg, uint32_t t,
                          const std::vector<uint32_t>& others, uint64_t bits,
                          CoalitionCache& cache) {
    auto it = cache.find(bits);
    if (it != cache.end()) return it->second;

    std::vector<uint8_t> mask(q.size(), 0);
    mask[t] = 1;
    for (size_t i = 0; i < others.size(); ++i)
        if (bits & (uint64_t{1} << i)) mask[others[i]] = 1;
    StrengthMap m = detail::eval_core(q, q.base_scores().values, sem, cfg, mask);
    if (!m.converged)
        throw NonConvergenceError("restricted evaluation of a coalition did not converge");
    cache.emplace(bits, m.strengths[t]);
    return m.strengths[t];
}

double shapley_one(const Qbaf& q, Semantics sem, const EvalConfig& cfg, uint32_t t,
                   const std::vector<uint32_t>& others, size_t subject_pos,
                   CoalitionCache& cache) {
    const size_t m = others.size();  // |A \ {topic}|
    std::vector<double> factorial(m + 1, 1.0);
    for (size_t i = 1; i <= m; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);

    // Positions of the other arguments the subject can join.
    std::vector<size_t> rest;
    rest.reserve(m - 1);
    for (size_t i = 0; i < m; ++i)
        if (i != subject_pos) rest.push_back(i);

    const uint64_t subject_bit = uint64_t{1} << subject_pos;
    double value = 0.0;
    for (uint64_t sel = 0; sel < (uint64_t{1} << rest.size()); ++sel) {
        uint64_t bits = 0;
        for (size_t i = 0; i < rest.size(); ++i)
            if (sel & (uint64_t{1} << i)) bits |= uint64_t{1} << rest[i];
        size_t k = static_cast<size_t>(std::popcount(sel));
        double weight = factorial[k] * factorial[m - k - 1] / factorial[m];
        double with = coalition_strength(q, sem, cfg, t, others, bits | subject_bit, cache);
        double without = coalition_strength(q, sem, cfg, t, others, bits, cache);
        value += weight * (with - without);
    }
    return value;
}

std::vector<uint32_t> other_arguments(const Qbaf& q, uint32_t t, size_t limit) {
    if (q.size() > limit)
        throw TooLargeError("exact Shapley attribution over " + std::to_string(q.size()) +
                            " arguments exceeds the limit of " + std::to_string(limit));
    std::vector<uint32_t> others;
    others.reserve(q.size() - 1);
    for (uint32_t v = 0; v < q.size(); ++v)
        if (v != t) others.push_back(v);
    return others;
}

}  // namespace

double shapley_importance(const Qbaf& q, Semantics sem, const ArgumentId& topic,
                          const ArgumentId& subject, const EvalConfig& cfg, size_t limit) {
    uint32_t t = q.index_of(topic);
    uint32_t s = q.index_of(subject);
    if (s == t) throw std::invalid_argument("attribution of the topic to itself is undefined");
    std::vector<uint32_t> others = other_arguments(q, t, limit);
    size_t pos = std::lower_bound(others.begin(), others.end(), s) - others.begin();
    CoalitionCache cache;
    return shapley_one(q, sem, cfg, t, others, pos, cache);
}

AttributionReport shapley_all(const Qbaf& q, Semantics sem, const ArgumentId& topic,
                              const EvalConfig& cfg, size_t limit) {
    uint32_t t = q.index_of(topic);
    std::vector<uint32_t> others = other_arguments(q, t, limit);
    AttributionReport report;
    report.topic = topic;
    report.semantics = sem;
    CoalitionCache cache;
    for (size_t pos = 0; pos < others.size(); ++pos)
        report.scores.emplace_back(q.name(others[pos]),
                                   shapley_one(q, sem, cfg, t, others, pos, cache));
    return report;
}

}  // namespace qbaf
