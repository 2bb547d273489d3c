#include "support.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace testsupport {

namespace {

struct Adjacency {
    std::vector<std::vector<uint32_t>> out, in;
    std::vector<std::vector<uint8_t>> attack;  // attack[from][k] matches out[from][k]
};

Adjacency adjacency(const qbaf::Qbaf& q) {
    Adjacency a;
    a.out.resize(q.size());
    a.in.resize(q.size());
    a.attack.resize(q.size());
    auto add = [&](const std::pair<uint32_t, uint32_t>& e, bool att) {
        a.out[e.first].push_back(e.second);
        a.attack[e.first].push_back(att ? 1 : 0);
        a.in[e.second].push_back(e.first);
    };
    for (const auto& e : q.attacks()) add(e, true);
    for (const auto& e : q.supports()) add(e, false);
    return a;
}

std::vector<uint8_t> bfs_reach(const std::vector<std::vector<uint32_t>>& next, uint32_t start) {
    std::vector<uint8_t> seen(next.size(), 0);
    std::deque<uint32_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        uint32_t v = queue.front();
        queue.pop_front();
        for (uint32_t w : next[v])
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
    }
    return seen;
}

void cycles_from(const Adjacency& adj, uint32_t root, std::vector<uint32_t>& stack,
                 std::vector<uint8_t>& on_stack, std::vector<std::vector<uint32_t>>& found) {
    uint32_t v = stack.back();
    for (uint32_t w : adj.out[v]) {
        if (w == root) {
            found.push_back(stack);
        } else if (w > root && !on_stack[w]) {
            stack.push_back(w);
            on_stack[w] = 1;
            cycles_from(adj, root, stack, on_stack, found);
            on_stack[w] = 0;
            stack.pop_back();
        }
    }
}

}  // namespace

qbaf::Qbaf loan_qbaf() {
    return qbaf::Qbaf(
        {{"alpha", 0.5}, {"beta", 0.3}, {"gamma", 0.6}, {"rho", 0.7}, {"zeta", 0.4}},
        {{"gamma", "alpha"}, {"rho", "beta"}}, {{"beta", "alpha"}, {"zeta", "gamma"}});
}

qbaf::Qbaf fig3_qbaf() {
    return qbaf::Qbaf({{"alpha", 0.5}, {"beta", 0.5}, {"gamma", 0.5}, {"delta", 0.5}},
                      {{"alpha", "beta"}, {"beta", "alpha"}, {"beta", "delta"}},
                      {{"beta", "gamma"}, {"gamma", "delta"}});
}

qbaf::Qbaf nonmonotone_qbaf(double beta_score) {
    return qbaf::Qbaf({{"alpha", 0.0}, {"beta", beta_score}, {"gamma", 0.0}, {"delta", 0.0}},
                      {{"beta", "alpha"}},
                      {{"beta", "gamma"}, {"beta", "delta"}, {"gamma", "delta"},
                       {"delta", "alpha"}});
}

double uniform01(std::mt19937& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

qbaf::Qbaf random_qbaf(std::mt19937& rng, const RandomQbafOptions& opt) {
    std::uniform_int_distribution<int> size_dist(opt.min_args, opt.max_args);
    int n = size_dist(rng);

    std::vector<std::pair<qbaf::ArgumentId, double>> args;
    for (int i = 0; i < n; ++i) {
        std::string id = "x" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        args.emplace_back(id, uniform01(rng));
    }

    std::vector<std::pair<qbaf::ArgumentId, qbaf::ArgumentId>> attacks, supports;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j && !opt.allow_self_loops) continue;
            if (opt.acyclic && i <= j) continue;
            if (uniform01(rng) >= opt.edge_prob) continue;
            auto& side = uniform01(rng) < 0.5 ? attacks : supports;
            side.emplace_back(args[i].first, args[j].first);
        }
    }
    return qbaf::Qbaf(std::move(args), std::move(attacks), std::move(supports));
}

bool oracle_is_acyclic(const qbaf::Qbaf& q) {
    Adjacency adj = adjacency(q);
    std::vector<int> color(q.size(), 0);  // 0 white, 1 grey, 2 black
    std::vector<std::pair<uint32_t, size_t>> stack;
    for (uint32_t s = 0; s < q.size(); ++s) {
        if (color[s] != 0) continue;
        stack.push_back({s, 0});
        color[s] = 1;
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k == adj.out[v].size()) {
                color[v] = 2;
                stack.pop_back();
                continue;
            }
            uint32_t w = adj.out[v][k++];
            if (color[w] == 1) return false;
            if (color[w] == 0) {
                color[w] = 1;
                stack.push_back({w, 0});
            }
        }
    }
    return true;
}

std::vector<std::vector<uint32_t>> oracle_cycles(const qbaf::Qbaf& q) {
    Adjacency adj = adjacency(q);
    std::vector<std::vector<uint32_t>> found;
    std::vector<uint8_t> on_stack(q.size(), 0);
    for (uint32_t root = 0; root < q.size(); ++root) {
        std::vector<uint32_t> stack{root};
        on_stack[root] = 1;
        cycles_from(adj, root, stack, on_stack, found);
        on_stack[root] = 0;
    }
    std::sort(found.begin(), found.end());
    return found;
}

qbaf::Polarity oracle_polarity(const qbaf::Qbaf& q, uint32_t from, uint32_t to) {
    Adjacency adj = adjacency(q);
    // Parity reachability: state (argument, attacks seen mod 2). Every
    // argument on a from->to walk lies between the two, so no explicit
    // scope restriction is needed.
    std::vector<std::array<uint8_t, 2>> seen(q.size(), {0, 0});
    std::deque<std::pair<uint32_t, int>> queue{{from, 0}};
    seen[from][0] = 1;
    while (!queue.empty()) {
        auto [v, p] = queue.front();
        queue.pop_front();
        for (size_t k = 0; k < adj.out[v].size(); ++k) {
            uint32_t w = adj.out[v][k];
            int np = p ^ adj.attack[v][k];
            if (!seen[w][np]) {
                seen[w][np] = 1;
                queue.push_back({w, np});
            }
        }
    }
    bool even = seen[to][0], odd = seen[to][1];
    if (!even && !odd) return qbaf::Polarity::Neutral;
    if (even && odd) return qbaf::Polarity::Unknown;
    return even ? qbaf::Polarity::Positive : qbaf::Polarity::Negative;
}

qbaf::Polarity oracle_topic_self_polarity(const qbaf::Qbaf& q, uint32_t topic) {
    for (const auto& cycle : oracle_cycles(q))
        if (std::find(cycle.begin(), cycle.end(), topic) != cycle.end())
            return qbaf::Polarity::Unknown;
    return qbaf::Polarity::Positive;
}

double oracle_priority(const qbaf::Qbaf& q, uint32_t from, uint32_t to, double c) {
    if (from == to) return c;
    Adjacency adj = adjacency(q);
    std::vector<int> dist(q.size(), -1);
    std::deque<uint32_t> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        uint32_t v = queue.front();
        queue.pop_front();
        for (uint32_t w : adj.out[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    return dist[to] < 0 ? 0.0 : 1.0 / dist[to];
}

size_t oracle_path_count(const qbaf::Qbaf& q, uint32_t from, uint32_t to) {
    Adjacency adj = adjacency(q);
    std::vector<uint8_t> on_path(q.size(), 0);
    size_t count = 0;
    auto dfs = [&](auto&& self, uint32_t v) -> void {
        if (v == to) {
            ++count;
            return;
        }
        on_path[v] = 1;
        for (uint32_t w : adj.out[v])
            if (!on_path[w]) self(self, w);
        on_path[v] = 0;
    };
    dfs(dfs, from);
    return count;
}

qbaf::Connectivity oracle_connectivity(const qbaf::Qbaf& q, uint32_t from, uint32_t to) {
    Adjacency adj = adjacency(q);
    std::vector<uint8_t> fwd = bfs_reach(adj.out, from);
    std::vector<uint8_t> bwd = bfs_reach(adj.in, to);
    if (!fwd[to]) return qbaf::Connectivity::Disconnected;
    for (const auto& cycle : oracle_cycles(q)) {
        bool inside = true;
        for (uint32_t v : cycle) inside = inside && fwd[v] && bwd[v];
        if (inside) return qbaf::Connectivity::MultiPath;  // infinitely many walks
    }
    return oracle_path_count(q, from, to) == 1 ? qbaf::Connectivity::SinglePath
                                               : qbaf::Connectivity::MultiPath;
}

std::vector<double> oracle_shapley(const qbaf::Qbaf& q, qbaf::Semantics sem, uint32_t topic,
                                   const qbaf::EvalConfig& cfg) {
    std::vector<uint32_t> others;
    for (uint32_t i = 0; i < q.size(); ++i)
        if (i != topic) others.push_back(i);

    const qbaf::ArgumentId& topic_id = q.name(topic);
    std::vector<double> totals(q.size(), 0.0);
    size_t permutations = 0;
    std::vector<qbaf::ArgumentId> present;
    do {
        ++permutations;
        present.clear();
        double before = qbaf::evaluate_restricted(q, present, sem, cfg, topic_id);
        for (uint32_t member : others) {
            present.push_back(q.name(member));
            double after = qbaf::evaluate_restricted(q, present, sem, cfg, topic_id);
            totals[member] += after - before;
            before = after;
        }
    } while (std::next_permutation(others.begin(), others.end()));

    for (double& t : totals) t /= static_cast<double>(permutations);
    return totals;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("spearman needs two equal-length series");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size(), 0.0);
        for (size_t i = 0; i < idx.size();) {
            size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    std::vector<double> rx = ranks(xs), ry = ranks(ys);
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (size_t i = 0; i < rx.size(); ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) throw std::invalid_argument("spearman over a constant series");
    return cov / std::sqrt(vx * vy);
}

}  // namespace testsupport
