#pragma once

#include <vector>

#include "qbaf/core.hpp"
#include "qbaf/semantics.hpp"

namespace qbaf {

/// Raised when an exact Shapley computation would enumerate more subsets
/// than the configured argument limit allows.
struct TooLargeError : QbafError {
    using QbafError::QbafError;
};

struct AttributionReport {
    ArgumentId topic;
    Semantics semantics = Semantics::Qe;
    /// One (argument, value) entry per argument other than the topic,
    /// sorted by argument id.
    std::vector<std::pair<ArgumentId, double>> scores;
};

/// Exact Shapley importance of `subject` for the strength of `topic`:
/// the permutation-weighted average of the marginal strength change when
/// the subject joins a coalition of the other arguments, each coalition
/// evaluated on the sub-framework it induces (plus the topic).
/// Frameworks with more than `limit` arguments raise TooLargeError; the
/// default cap of 15 keeps the 2^(n-2) coalition count explicit.
double shapley_importance(const Qbaf& q, Semantics sem, const ArgumentId& topic,
                          const ArgumentId& subject, const EvalConfig& cfg = {},
                          size_t limit = 15);

/// Shapley values of every argument towards the topic, sharing one
/// coalition-strength cache across subjects.
AttributionReport shapley_all(const Qbaf& q, Semantics sem, const ArgumentId& topic,
                              const EvalConfig& cfg = {}, size_t limit = 15);

}  // namespace qbaf
