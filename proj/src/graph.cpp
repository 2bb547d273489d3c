#include "qbaf/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "qbaf/semantics.hpp"

namespace qbaf {

std::string to_string(Polarity p) {
    switch (p) {
        case Polarity::Neutral: return "neutral";
        case Polarity::Negative: return "negative";
        case Polarity::Unknown: return "unknown";
        case Polarity::Positive: return "positive";
    }
    return "?";
}

std::string to_string(Connectivity c) {
    switch (c) {
        case Connectivity::Disconnected: return "disconnected";
        case Connectivity::SinglePath: return "single-path";
        case Connectivity::MultiPath: return "multi-path";
    }
    return "?";
}

namespace detail {

void co_reach(const Qbaf& q, uint32_t target, std::vector<uint8_t>& reached,
              std::vector<uint32_t>& dist) {
    reached.assign(q.size(), 0);
    dist.assign(q.size(), UINT32_MAX);
    std::deque<uint32_t> queue{target};
    reached[target] = 1;
    dist[target] = 0;
    while (!queue.empty()) {
        uint32_t v = queue.front();
        queue.pop_front();
        for (const Edge& e : q.in_edges(v)) {
            if (reached[e.from]) continue;
            reached[e.from] = 1;
            dist[e.from] = dist[v] + 1;
            queue.push_back(e.from);
        }
    }
}

void reach(const Qbaf& q, uint32_t source, std::vector<uint8_t>& reached) {
    reached.assign(q.size(), 0);
    std::vector<uint32_t> stack{source};
    reached[source] = 1;
    while (!stack.empty()) {
        uint32_t v = stack.back();
        stack.pop_back();
        for (const Edge& e : q.out_edges(v)) {
            if (reached[e.to]) continue;
            reached[e.to] = 1;
            stack.push_back(e.to);
        }
    }
}

namespace {

/// Rooted circuit search of Johnson's algorithm: emits every elementary
/// cycle whose smallest vertex is `root`, restricted to `scope`.
struct CircuitSearch {
    const Qbaf& q;
    const std::vector<uint8_t>& scope;
    uint32_t root;
    std::vector<uint8_t> blocked;
    std::vector<std::set<uint32_t>> blist;
    std::vector<uint32_t> path;
    std::vector<std::vector<uint32_t>>& cycles;

    CircuitSearch(const Qbaf& g, const std::vector<uint8_t>& sc, uint32_t r,
                  std::vector<std::vector<uint32_t>>& out)
        : q(g), scope(sc), root(r), blocked(g.size(), 0), blist(g.size()), cycles(out) {}

    void unblock(uint32_t v) {
        blocked[v] = 0;
        std::set<uint32_t> pending;
        pending.swap(blist[v]);
        for (uint32_t u : pending)
            if (blocked[u]) unblock(u);
    }

    bool circuit(uint32_t v) {
        bool found = false;
        path.push_back(v);
        blocked[v] = 1;
        for (const Edge& e : q.out_edges(v)) {
            uint32_t w = e.to;
            if (!scope[w]) continue;
            if (w == root) {
                cycles.push_back(path);
                found = true;
            } else if (!blocked[w]) {
                found = circuit(w) || found;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (const Edge& e : q.out_edges(v))
                if (scope[e.to]) blist[e.to].insert(v);
        }
        path.pop_back();
        return found;
    }
};

}  // namespace

std::vector<std::vector<uint32_t>> simple_cycles(const Qbaf& q, const std::vector<uint8_t>& mask) {
    const size_t n = q.size();
    std::vector<uint8_t> present(n, 1);
    if (!mask.empty()) present = mask;

    std::vector<std::vector<uint32_t>> cycles;
    if (!topo_order(q, present).empty() || n == 0) return cycles;  // acyclic shortcut

    std::vector<uint8_t> fwd(n), bwd(n), scope(n);
    for (uint32_t s = 0; s < n; ++s) {
        if (!present[s]) continue;
        // Strongly connected component of s within the present vertices >= s.
        auto allowed = [&](uint32_t v) { return present[v] && v >= s; };
        std::fill(fwd.begin(), fwd.end(), 0);
        std::fill(bwd.begin(), bwd.end(), 0);
        std::vector<uint32_t> stack{s};
        fwd[s] = 1;
        while (!stack.empty()) {
            uint32_t v = stack.back();
            stack.pop_back();
            for (const Edge& e : q.out_edges(v))
                if (allowed(e.to) && !fwd[e.to]) fwd[e.to] = 1, stack.push_back(e.to);
        }
        stack.assign(1, s);
        bwd[s] = 1;
        while (!stack.empty()) {
            uint32_t v = stack.back();
            stack.pop_back();
            for (const Edge& e : q.in_edges(v))
                if (allowed(e.from) && !bwd[e.from]) bwd[e.from] = 1, stack.push_back(e.from);
        }
        size_t members = 0;
        bool self_loop = false;
        for (uint32_t v = 0; v < n; ++v) {
            scope[v] = fwd[v] && bwd[v];
            members += scope[v];
        }
        for (const Edge& e : q.out_edges(s)) self_loop = self_loop || e.to == s;
        if (members <= 1 && !self_loop) continue;

        CircuitSearch search(q, scope, s, cycles);
        search.circuit(s);
    }
    return cycles;
}

}  // namespace detail

namespace {

uint32_t checked_index(const Qbaf& q, const ArgumentId& id) { return q.index_of(id); }

bool edge_is_attack(const Qbaf& q, uint32_t from, uint32_t to) {
    for (const Edge& e : q.out_edges(from))
        if (e.to == to) return e.attack;
    throw std::logic_error("edge lookup on a non-edge");
}

int cycle_parity(const Qbaf& q, const std::vector<uint32_t>& cycle) {
    int attacks = 0;
    for (size_t i = 0; i < cycle.size(); ++i)
        attacks += edge_is_attack(q, cycle[i], cycle[(i + 1) % cycle.size()]) ? 1 : 0;
    return attacks % 2;
}

Path to_path(const Qbaf& q, const std::vector<uint32_t>& nodes, bool closed) {
    Path p;
    size_t steps = closed ? nodes.size() : nodes.size() - 1;
    for (size_t i = 0; i < steps; ++i)
        p.edges.emplace_back(q.name(nodes[i]), q.name(nodes[(i + 1) % nodes.size()]));
    return p;
}

/// Parity bits (1 = even path seen, 2 = odd) per source for elementary
/// paths into `target`, plus a capped count of paths from `source_filter`
/// (or from every node when source_filter is UINT32_MAX).
struct PathScan {
    const Qbaf& q;
    const std::vector<uint8_t>* scope;  // optional restriction
    std::vector<uint8_t> bits;
    std::vector<uint8_t> on_stack;

    PathScan(const Qbaf& g, const std::vector<uint8_t>* sc)
        : q(g), scope(sc), bits(g.size(), 0), on_stack(g.size(), 0) {}

    void run(uint32_t target) {
        on_stack[target] = 1;
        walk(target, 0);
        on_stack[target] = 0;
    }

    void walk(uint32_t v, int parity) {
        for (const Edge& e : q.in_edges(v)) {
            uint32_t u = e.from;
            if (on_stack[u]) continue;
            if (scope != nullptr && !(*scope)[u]) continue;
            int p = parity ^ (e.attack ? 1 : 0);
            bits[u] |= p == 0 ? 1 : 2;
            on_stack[u] = 1;
            walk(u, p);
            on_stack[u] = 0;
        }
    }
};

Polarity classify(uint8_t bits, bool odd_cycle_reach) {
    if (bits == 0) return Polarity::Neutral;
    if (odd_cycle_reach || bits == 3) return Polarity::Unknown;
    return bits == 1 ? Polarity::Positive : Polarity::Negative;
}

/// Mask of the subgraph lying between `from` and `to`: vertices reachable
/// from `from` that also reach `to`.
std::vector<uint8_t> between_mask(const Qbaf& q, uint32_t from, uint32_t to) {
    std::vector<uint8_t> fwd, bwd;
    std::vector<uint32_t> dist;
    detail::reach(q, from, fwd);
    detail::co_reach(q, to, bwd, dist);
    std::vector<uint8_t> mask(q.size(), 0);
    for (uint32_t v = 0; v < q.size(); ++v) mask[v] = fwd[v] && bwd[v];
    return mask;
}

}  // namespace

std::vector<Path> enumerate_simple_paths(const Qbaf& q, const ArgumentId& from,
                                         const ArgumentId& to) {
    uint32_t f = checked_index(q, from), t = checked_index(q, to);
    if (f == t) throw std::invalid_argument("path enumeration requires two distinct arguments");
    std::vector<uint8_t> mask = between_mask(q, f, t);
    std::vector<Path> out;
    if (!mask[f] || !mask[t]) return out;

    std::vector<uint32_t> nodes;
    std::vector<uint8_t> on_stack(q.size(), 0);
    auto dfs = [&](auto&& self, uint32_t v) -> void {
        nodes.push_back(v);
        if (v == t) {
            out.push_back(to_path(q, nodes, false));
            nodes.pop_back();
            return;
        }
        on_stack[v] = 1;
        for (const Edge& e : q.out_edges(v))
            if (mask[e.to] && !on_stack[e.to]) self(self, e.to);
        on_stack[v] = 0;
        nodes.pop_back();
    };
    dfs(dfs, f);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Path> find_elementary_cycles(const Qbaf& q, const ArgumentId& through) {
    uint32_t c = checked_index(q, through);
    std::vector<Path> out;
    for (const auto& cycle : detail::simple_cycles(q, {})) {
        if (std::find(cycle.begin(), cycle.end(), c) == cycle.end()) continue;
        out.push_back(to_path(q, cycle, true));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Connectivity connectivity(const Qbaf& q, const ArgumentId& from, const ArgumentId& to) {
    uint32_t f = checked_index(q, from), t = checked_index(q, to);
    if (f == t) throw std::invalid_argument("connectivity requires two distinct arguments");
    std::vector<uint8_t> mask = between_mask(q, f, t);
    if (!mask[f]) return Connectivity::Disconnected;

    // Count elementary paths from f, stopping at two.
    int count = 0;
    std::vector<uint8_t> on_stack(q.size(), 0);
    auto dfs = [&](auto&& self, uint32_t v) -> void {
        if (count >= 2) return;
        if (v == t) {
            ++count;
            return;
        }
        on_stack[v] = 1;
        for (const Edge& e : q.out_edges(v))
            if (mask[e.to] && !on_stack[e.to]) self(self, e.to);
        on_stack[v] = 0;
    };
    dfs(dfs, f);
    if (count == 0) return Connectivity::Disconnected;
    if (count >= 2) return Connectivity::MultiPath;
    return detail::simple_cycles(q, mask).empty() ? Connectivity::SinglePath
                                                  : Connectivity::MultiPath;
}

Polarity polarity(const Qbaf& q, const ArgumentId& from, const ArgumentId& to) {
    uint32_t f = checked_index(q, from), t = checked_index(q, to);
    if (f == t) throw std::invalid_argument("polarity requires two distinct arguments");
    std::vector<uint8_t> mask = between_mask(q, f, t);
    if (!mask[f]) return Polarity::Neutral;

    PathScan scan(q, &mask);
    scan.run(t);
    bool odd_cycle = false;
    for (const auto& cycle : detail::simple_cycles(q, mask))
        odd_cycle = odd_cycle || cycle_parity(q, cycle) == 1;
    return classify(scan.bits[f], odd_cycle);
}

double priority(const Qbaf& q, const ArgumentId& from, const ArgumentId& to, double c) {
    if (!(c > 1.0)) throw std::invalid_argument("self-priority constant must exceed 1");
    uint32_t f = checked_index(q, from), t = checked_index(q, to);
    if (f == t) return c;
    std::vector<uint8_t> reached;
    std::vector<uint32_t> dist;
    detail::co_reach(q, t, reached, dist);
    return reached[f] ? 1.0 / static_cast<double>(dist[f]) : 0.0;
}

TopicAnalysis analyze_topic(const Qbaf& q, const ArgumentId& topic, double c) {
    if (!(c > 1.0)) throw std::invalid_argument("self-priority constant must exceed 1");
    uint32_t t = checked_index(q, topic);
    const size_t n = q.size();

    TopicAnalysis out;
    out.polarity.assign(n, Polarity::Neutral);
    out.priority.assign(n, 0.0);

    std::vector<uint8_t> reached;
    std::vector<uint32_t> dist;
    detail::co_reach(q, t, reached, dist);

    PathScan scan(q, nullptr);  // ancestors of the topic are visited implicitly
    scan.run(t);

    // Cycles live inside the co-reach set: every vertex of a cycle that
    // influences the topic reaches the topic through the cycle itself.
    std::vector<uint32_t> odd_seeds;
    for (const auto& cycle : detail::simple_cycles(q, reached)) {
        if (std::find(cycle.begin(), cycle.end(), t) != cycle.end()) out.topic_on_cycle = true;
        if (cycle_parity(q, cycle) == 1)
            odd_seeds.insert(odd_seeds.end(), cycle.begin(), cycle.end());
    }
    std::vector<uint8_t> odd_reach(n, 0);
    for (uint32_t s : odd_seeds)
        if (!odd_reach[s]) odd_reach[s] = 1;
    std::vector<uint32_t> queue(odd_seeds.begin(), odd_seeds.end());
    while (!queue.empty()) {
        uint32_t v = queue.back();
        queue.pop_back();
        for (const Edge& e : q.in_edges(v))
            if (!odd_reach[e.from]) odd_reach[e.from] = 1, queue.push_back(e.from);
    }

    for (uint32_t v = 0; v < n; ++v) {
        if (v == t || !reached[v]) continue;
        out.polarity[v] = classify(scan.bits[v], odd_reach[v] != 0);
        out.priority[v] = 1.0 / static_cast<double>(dist[v]);
    }
    out.polarity[t] = out.topic_on_cycle ? Polarity::Unknown : Polarity::Positive;
    out.priority[t] = c;
    return out;
}

}  // namespace qbaf
