#pragma once

#include <random>
#include <string>
#include <vector>

#include "qbaf/core.hpp"
#include "qbaf/graph.hpp"
#include "qbaf/semantics.hpp"

// Fixtures and brute-force oracles shared by the unit tests and the
// acceptance runner. Every oracle here is a from-scratch implementation
// that avoids the library's algorithms: reachability by plain BFS,
// polarity by walk-parity reachability, cycles by recursive enumeration,
// Shapley values by permutation averaging.
namespace testsupport {

// ---- fixtures ----------------------------------------------------------

// Loan application framework: alpha 0.5, beta 0.3, gamma 0.6, rho 0.7,
// zeta 0.4; gamma attacks alpha, rho attacks beta; beta supports alpha,
// zeta supports gamma. DF-QuAD strengths: 0.165/0.09/0.76/0.7/0.4.
qbaf::Qbaf loan_qbaf();

// Four arguments alpha..delta 0.5 each; attacks (alpha,beta),
// (beta,alpha), (beta,delta); supports (beta,gamma), (gamma,delta).
qbaf::Qbaf fig3_qbaf();

// Non-monotone DF-QuAD example: all base scores 0 except beta's, which
// the caller overrides. beta attacks alpha; beta supports gamma and
// delta; gamma supports delta; delta supports alpha. With t = tau(beta),
// sigma(alpha) = t*(1-t) under DF-QuAD.
qbaf::Qbaf nonmonotone_qbaf(double beta_score);

// ---- random generation --------------------------------------------------

struct RandomQbafOptions {
    int min_args = 1;
    int max_args = 10;
    double edge_prob = 0.25;
    bool acyclic = false;
    bool allow_self_loops = false;
};

// Ids are "x00", "x01", ... so lexicographic and index order agree.
qbaf::Qbaf random_qbaf(std::mt19937& rng, const RandomQbafOptions& opt);

double uniform01(std::mt19937& rng);

// ---- oracles -------------------------------------------------------------

bool oracle_is_acyclic(const qbaf::Qbaf& q);

// All elementary cycles as node index sequences, each rotated to start at
// its smallest index, sorted; self-loops appear as single-element cycles.
std::vector<std::vector<uint32_t>> oracle_cycles(const qbaf::Qbaf& q);

// Walk semantics, computed by parity reachability on the product graph
// (argument, attacks-so-far mod 2). Requires from != to.
qbaf::Polarity oracle_polarity(const qbaf::Qbaf& q, uint32_t from, uint32_t to);

// Self rule used for the topic row: Unknown when any elementary cycle
// passes through the argument, Positive otherwise.
qbaf::Polarity oracle_topic_self_polarity(const qbaf::Qbaf& q, uint32_t topic);

// c for from == to, 0 when no directed path, else 1 / BFS distance.
double oracle_priority(const qbaf::Qbaf& q, uint32_t from, uint32_t to, double c);

// Classification by walk counting: Disconnected without a walk, MultiPath
// when the between-subgraph has a cycle or more than one elementary path,
// SinglePath otherwise. Requires from != to.
qbaf::Connectivity oracle_connectivity(const qbaf::Qbaf& q, uint32_t from, uint32_t to);

// Number of elementary paths from -> to (exhaustive DFS; small graphs).
size_t oracle_path_count(const qbaf::Qbaf& q, uint32_t from, uint32_t to);

// Unmemoized Shapley values via averaging marginal contributions over all
// permutations of the non-topic arguments; index-aligned with q.names(),
// topic entry 0. Throws NonConvergenceError like the library would.
std::vector<double> oracle_shapley(const qbaf::Qbaf& q, qbaf::Semantics sem, uint32_t topic,
                                   const qbaf::EvalConfig& cfg);

// Spearman rank correlation; ties get average ranks.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace testsupport
