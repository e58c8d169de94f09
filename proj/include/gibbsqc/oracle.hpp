#pragma once

#include <vector>

#include "gibbsqc/bayesnet.hpp"
#include "gibbsqc/circuit.hpp"

// Brute-force reference implementations. Deliberately naive: tests hold the
// fast paths (joint_prob, count_elementary, node_blanket) against these.
namespace gibbsqc::oracle {

struct JointTable {
  std::vector<std::pair<Instantiation, double>> rows;
};

inline constexpr long long kMaxJointRows = 1'000'000;

// Every complete instantiation exactly once, first node varying slowest.
// Throws SemanticError when the state space exceeds kMaxJointRows.
JointTable enumerate_joint(const BayesNet& net);

// True iff P(x_node | everything else) == P(x_node | candidate) within 1e-9
// for every full instantiation; zero-probability conditioning events are
// vacuously satisfied.
bool verify_blanket(const BayesNet& net, int node, const std::vector<int>& candidate);

inline constexpr double kBlanketTolerance = 1e-9;

// Literal loop unrolling: expands every LOOP body reps times (multiplying
// when nested) and counts the surviving non-LOOP/NEXT lines.
long long count_ops_by_expansion(const Circuit& circ);

}  // namespace gibbsqc::oracle
