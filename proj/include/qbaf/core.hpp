#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbaf {

using ArgumentId = std::string;

/// Base class for all errors raised by this library.
struct QbafError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed JSON text (unbalanced braces, bad tokens, ...).
struct SyntaxError : QbafError {
    using QbafError::QbafError;
};

/// Well-formed JSON that violates the document schema or the model
/// invariants (duplicate ids, score out of range, unknown endpoints,
/// a relation listed as both attack and support, ...).
struct SchemaError : QbafError {
    using QbafError::QbafError;
};

/// An argument id that is not part of the framework.
struct UnknownArgumentError : QbafError {
    using QbafError::QbafError;
};

/// A base score assignment for every argument of a fixed framework,
/// stored in the framework's canonical (lexicographic) argument order.
struct BaseScoreFn {
    std::vector<double> values;

    bool operator==(const BaseScoreFn&) const = default;
};

struct Edge {
    uint32_t from = 0;
    uint32_t to = 0;
    bool attack = false;
};

/// Quantitative bipolar argumentation framework: arguments with base
/// scores in [0,1] plus disjoint attack and support relations.
///
/// Arguments are kept sorted by id; every per-argument container in the
/// library (scores, strengths, polarities, ...) is indexed in that order.
/// Instances are immutable after construction.
class Qbaf {
  public:
    Qbaf() = default;

    /// Validates and builds a framework. Throws SchemaError on empty or
    /// duplicate ids, scores outside [0,1], relation endpoints that are
    /// not arguments, a pair occurring twice in one relation, or a pair
    /// present in both relations. Self-loops are legal but logged.
    Qbaf(std::vector<std::pair<ArgumentId, double>> arguments,
         std::vector<std::pair<ArgumentId, ArgumentId>> attacks,
         std::vector<std::pair<ArgumentId, ArgumentId>> supports);

    size_t size() const { return names_.size(); }
    const std::vector<ArgumentId>& names() const { return names_; }
    const ArgumentId& name(size_t i) const { return names_[i]; }

    /// Index of an argument id; throws UnknownArgumentError if absent.
    uint32_t index_of(const ArgumentId& id) const;
    bool contains(const ArgumentId& id) const;

    const BaseScoreFn& base_scores() const { return base_; }
    double base_score(size_t i) const { return base_.values[i]; }
    double base_score(const ArgumentId& id) const { return base_.values[index_of(id)]; }

    /// Relations as index pairs, sorted lexicographically by argument id.
    const std::vector<std::pair<uint32_t, uint32_t>>& attacks() const { return attacks_; }
    const std::vector<std::pair<uint32_t, uint32_t>>& supports() const { return supports_; }

    /// Incoming edges of each argument (parents), sorted by parent index.
    const std::vector<Edge>& in_edges(size_t i) const { return in_[i]; }
    /// Outgoing edges of each argument (children), sorted by child index.
    const std::vector<Edge>& out_edges(size_t i) const { return out_[i]; }

  private:
    std::vector<ArgumentId> names_;
    BaseScoreFn base_;
    std::vector<std::pair<uint32_t, uint32_t>> attacks_;
    std::vector<std::pair<uint32_t, uint32_t>> supports_;
    std::vector<std::vector<Edge>> in_;
    std::vector<std::vector<Edge>> out_;
};

/// Parses a QBAF document:
///   {"arguments": [{"id": "...", "base_score": 0.5}, ...],
///    "attacks": [["from","to"], ...],
///    "supports": [["from","to"], ...]}
/// Throws SyntaxError for malformed JSON, SchemaError for documents that
/// do not match the schema or violate the model invariants.
Qbaf parse_qbaf(const std::string& text);

/// Serializes with arguments sorted by id, relations sorted
/// lexicographically, two-space indentation and round-trip-exact scores.
/// parse_qbaf(serialize_qbaf(q)) reproduces q bit for bit.
std::string serialize_qbaf(const Qbaf& q);

/// Serializes q with its base scores replaced by tau.
std::string serialize_qbaf(const Qbaf& q, const BaseScoreFn& tau);

/// True iff the union of attacks and supports has no directed cycle.
bool is_acyclic(const Qbaf& q);

/// Validates a score assignment against q: one value per argument, each
/// finite and within [0,1]. Throws SchemaError otherwise.
void validate_scores(const Qbaf& q, const BaseScoreFn& tau);

}  // namespace qbaf
