#include "qbaf/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "qbaf/log.hpp"

namespace qbaf {

using nlohmann::json;

Qbaf::Qbaf(std::vector<std::pair<ArgumentId, double>> arguments,
           std::vector<std::pair<ArgumentId, ArgumentId>> attacks,
           std::vector<std::pair<ArgumentId, ArgumentId>> supports) {
    std::sort(arguments.begin(), arguments.end());
    names_.reserve(arguments.size());
    base_.values.reserve(arguments.size());
    for (const auto& [id, score] : arguments) {
        if (id.empty()) throw SchemaError("argument id must be a non-empty string");
        if (!names_.empty() && names_.back() == id)
            throw SchemaError("duplicate argument id '" + id + "'");
        if (!std::isfinite(score) || score < 0.0 || score > 1.0)
            throw SchemaError("base score of '" + id + "' outside [0,1]");
        names_.push_back(id);
        base_.values.push_back(score);
    }

    std::map<ArgumentId, uint32_t> index;
    for (uint32_t i = 0; i < names_.size(); ++i) index[names_[i]] = i;

    auto resolve = [&](const std::vector<std::pair<ArgumentId, ArgumentId>>& pairs,
                       const char* kind) {
        std::vector<std::pair<uint32_t, uint32_t>> out;
        out.reserve(pairs.size());
        for (const auto& [from, to] : pairs) {
            auto f = index.find(from);
            auto t = index.find(to);
            if (f == index.end())
                throw SchemaError(std::string(kind) + " endpoint '" + from + "' is not an argument");
            if (t == index.end())
                throw SchemaError(std::string(kind) + " endpoint '" + to + "' is not an argument");
            out.emplace_back(f->second, t->second);
        }
        std::sort(out.begin(), out.end());
        if (std::adjacent_find(out.begin(), out.end()) != out.end())
            throw SchemaError(std::string(kind) + " relation contains a duplicate pair");
        return out;
    };
    attacks_ = resolve(attacks, "attack");
    supports_ = resolve(supports, "support");

    std::vector<std::pair<uint32_t, uint32_t>> both;
    std::set_intersection(attacks_.begin(), attacks_.end(), supports_.begin(), supports_.end(),
                          std::back_inserter(both));
    if (!both.empty())
        throw SchemaError("relation (" + names_[both[0].first] + "," + names_[both[0].second] +
                          ") is listed as both attack and support");

    in_.resize(names_.size());
    out_.resize(names_.size());
    auto add = [&](const std::vector<std::pair<uint32_t, uint32_t>>& pairs, bool attack) {
        for (const auto& [f, t] : pairs) {
            if (f == t)
                log::warn("self-" + std::string(attack ? "attack" : "support") + " on argument '" +
                          names_[f] + "'");
            in_[t].push_back({f, t, attack});
            out_[f].push_back({f, t, attack});
        }
    };
    add(attacks_, true);
    add(supports_, false);
    for (auto& edges : in_)
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.from < b.from; });
    for (auto& edges : out_)
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.to < b.to; });
}

uint32_t Qbaf::index_of(const ArgumentId& id) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), id);
    if (it == names_.end() || *it != id)
        throw UnknownArgumentError("unknown argument '" + id + "'");
    return static_cast<uint32_t>(it - names_.begin());
}

bool Qbaf::contains(const ArgumentId& id) const {
    return std::binary_search(names_.begin(), names_.end(), id);
}

static std::vector<std::pair<ArgumentId, ArgumentId>> require_relation(const json& doc,
                                                                       const char* key) {
    if (!doc.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    const json& arr = doc.at(key);
    if (!arr.is_array()) throw SchemaError(std::string("field '") + key + "' must be an array");
    std::vector<std::pair<ArgumentId, ArgumentId>> out;
    out.reserve(arr.size());
    for (const json& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw SchemaError(std::string("entries of '") + key +
                              "' must be pairs [\"from\",\"to\"]");
        out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return out;
}

Qbaf parse_qbaf(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what());
    }
    if (!doc.is_object()) throw SchemaError("document root must be an object");
    if (!doc.contains("arguments")) throw SchemaError("missing field 'arguments'");
    const json& args = doc.at("arguments");
    if (!args.is_array()) throw SchemaError("field 'arguments' must be an array");

    std::vector<std::pair<ArgumentId, double>> arguments;
    arguments.reserve(args.size());
    for (const json& a : args) {
        if (!a.is_object()) throw SchemaError("argument entries must be objects");
        if (!a.contains("id") || !a.at("id").is_string())
            throw SchemaError("argument entry missing string field 'id'");
        if (!a.contains("base_score") || !a.at("base_score").is_number())
            throw SchemaError("argument entry missing numeric field 'base_score'");
        arguments.emplace_back(a.at("id").get<std::string>(), a.at("base_score").get<double>());
    }
    return Qbaf(std::move(arguments), require_relation(doc, "attacks"),
                require_relation(doc, "supports"));
}

std::string serialize_qbaf(const Qbaf& q) { return serialize_qbaf(q, q.base_scores()); }

std::string serialize_qbaf(const Qbaf& q, const BaseScoreFn& tau) {
    validate_scores(q, tau);
    json args = json::array();
    for (size_t i = 0; i < q.size(); ++i)
        args.push_back({{"id", q.name(i)}, {"base_score", tau.values[i]}});
    auto pairs = [&](const std::vector<std::pair<uint32_t, uint32_t>>& rel) {
        json arr = json::array();
        for (const auto& [f, t] : rel) arr.push_back({q.name(f), q.name(t)});
        return arr;
    };
    json doc{{"arguments", args}, {"attacks", pairs(q.attacks())}, {"supports", pairs(q.supports())}};
    return doc.dump(2) + "\n";
}

bool is_acyclic(const Qbaf& q) {
    const size_t n = q.size();
    std::vector<uint32_t> indegree(n, 0);
    for (size_t i = 0; i < n; ++i) indegree[i] = static_cast<uint32_t>(q.in_edges(i).size());
    std::vector<uint32_t> queue;
    queue.reserve(n);
    for (uint32_t i = 0; i < n; ++i)
        if (indegree[i] == 0) queue.push_back(i);
    size_t removed = 0;
    while (!queue.empty()) {
        uint32_t v = queue.back();
        queue.pop_back();
        ++removed;
        for (const Edge& e : q.out_edges(v))
            if (--indegree[e.to] == 0) queue.push_back(e.to);
    }
    return removed == n;
}

void validate_scores(const Qbaf& q, const BaseScoreFn& tau) {
    if (tau.values.size() != q.size())
        throw SchemaError("score assignment has " + std::to_string(tau.values.size()) +
                          " values for " + std::to_string(q.size()) + " arguments");
    for (size_t i = 0; i < tau.values.size(); ++i)
        if (!std::isfinite(tau.values[i]) || tau.values[i] < 0.0 || tau.values[i] > 1.0)
            throw SchemaError("score of '" + q.name(i) + "' outside [0,1]");
}

}  // namespace qbaf
