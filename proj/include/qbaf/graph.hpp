#pragma once

#include <string>
#include <vector>

#include "qbaf/core.hpp"

namespace qbaf {

/// Sign of the influence every walk from one argument to another carries:
/// even numbers of attacks preserve direction (Positive), odd ones flip
/// it (Negative). Integer codes are part of the CLI/binding contract.
enum class Polarity : int { Neutral = -2, Negative = -1, Unknown = 0, Positive = 1 };

enum class Connectivity { Disconnected, SinglePath, MultiPath };

std::string to_string(Polarity p);
std::string to_string(Connectivity c);

/// A walk through distinct arguments, stored as its edge sequence; a
/// cycle is represented with first node == last node.
struct Path {
    std::vector<std::pair<ArgumentId, ArgumentId>> edges;

    auto operator<=>(const Path&) const = default;
};

/// All elementary (node-disjoint) paths from `from` to `to`, sorted by
/// node sequence. Requires from != to.
std::vector<Path> enumerate_simple_paths(const Qbaf& q, const ArgumentId& from,
                                         const ArgumentId& to);

/// All elementary cycles passing through `through`, each rotated to start
/// at its lexicographically smallest argument, sorted.
std::vector<Path> find_elementary_cycles(const Qbaf& q, const ArgumentId& through);

/// Disconnected: no path; SinglePath: exactly one elementary path and no
/// cycle touches the subgraph between the two arguments; MultiPath
/// otherwise. Requires from != to.
Connectivity connectivity(const Qbaf& q, const ArgumentId& from, const ArgumentId& to);

/// Polarity of `from` towards `to` over all walks (arbitrary node
/// repetition): Neutral without a path; Positive/Negative when every walk
/// carries an even/odd number of attacks; Unknown when walks disagree.
/// Walk parities are decided from the elementary paths together with the
/// cycles of the subgraph lying between the two arguments: an odd cycle
/// there makes both parities reachable. Requires from != to.
Polarity polarity(const Qbaf& q, const ArgumentId& from, const ArgumentId& to);

/// Update priority of `from` when steering `to`: the self-priority
/// constant c for from == to, 0 when disconnected, else the reciprocal of
/// the shortest path length (in edges). Requires c > 1.
double priority(const Qbaf& q, const ArgumentId& from, const ArgumentId& to, double c = 2.0);

/// Polarity and priority of every argument towards a fixed topic,
/// computed in one pass. The topic's own entries follow the self rules:
/// priority c, Positive unless some elementary cycle passes through the
/// topic (then Unknown, so steering falls back to difference quotients).
struct TopicAnalysis {
    std::vector<Polarity> polarity;
    std::vector<double> priority;
    bool topic_on_cycle = false;
};

TopicAnalysis analyze_topic(const Qbaf& q, const ArgumentId& topic, double c = 2.0);

namespace detail {

/// All elementary cycles of the subgraph induced by `mask` (empty = whole
/// graph), as node index sequences starting at their smallest member.
/// Bounded by O((n + e) * (cycles + 1)) per Johnson's algorithm.
std::vector<std::vector<uint32_t>> simple_cycles(const Qbaf& q, const std::vector<uint8_t>& mask);

/// Arguments with a path to `target` (target included), via reverse BFS.
/// Also reports shortest-path edge counts (UINT32_MAX when unreachable).
void co_reach(const Qbaf& q, uint32_t target, std::vector<uint8_t>& reached,
              std::vector<uint32_t>& dist);

/// Arguments reachable from `source` (source included).
void reach(const Qbaf& q, uint32_t source, std::vector<uint8_t>& reached);

}  // namespace detail

}  // namespace qbaf
