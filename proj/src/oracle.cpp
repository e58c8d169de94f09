#include "gibbsqc/oracle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "gibbsqc/errors.hpp"

namespace gibbsqc::oracle {

JointTable enumerate_joint(const BayesNet& net) {
  long long rows = 1;
  for (const auto& node : net.nodes()) {
    rows *= static_cast<long long>(node.states.size());
    if (rows > kMaxJointRows) {
      throw SemanticError("state space exceeds " + std::to_string(kMaxJointRows) +
                          " instantiations");
    }
  }
  JointTable table;
  table.rows.reserve(static_cast<std::size_t>(rows));
  Instantiation x;
  x.state.assign(net.size(), 0);
  while (true) {
    table.rows.emplace_back(x, joint_prob(net, x));
    int pos = net.size() - 1;
    for (; pos >= 0; --pos) {
      if (++x.state[pos] < static_cast<int>(net.nodes()[pos].states.size())) break;
      x.state[pos] = 0;
    }
    if (pos < 0) break;
  }
  return table;
}

bool verify_blanket(const BayesNet& net, int node, const std::vector<int>& candidate) {
  if (node < 0 || node >= net.size()) {
    throw SemanticError("unknown node index " + std::to_string(node));
  }
  const JointTable table = enumerate_joint(net);
  const int n_states = static_cast<int>(net.nodes()[node].states.size());

  // Key extractors: everything-but-node, and candidate-only.
  auto rest_key = [&](const Instantiation& x) {
    std::vector<int> key;
    key.reserve(x.state.size() - 1);
    for (int i = 0; i < net.size(); ++i) {
      if (i != node) key.push_back(x.state[i]);
    }
    return key;
  };
  auto cand_key = [&](const Instantiation& x) {
    std::vector<int> key;
    key.reserve(candidate.size());
    for (int i : candidate) key.push_back(x.state[i]);
    return key;
  };

  // Marginals P(rest), P(candidate) and the numerators P(node, candidate).
  std::map<std::vector<int>, double> p_rest;
  std::map<std::vector<int>, double> p_cand;
  std::map<std::vector<int>, double> p_node_cand;  // key: [node state, candidate...]
  for (const auto& [x, p] : table.rows) {
    p_rest[rest_key(x)] += p;
    auto ck = cand_key(x);
    p_cand[ck] += p;
    ck.insert(ck.begin(), x.state[node]);
    p_node_cand[ck] += p;
  }

  for (const auto& [x, p] : table.rows) {
    const double pr = p_rest[rest_key(x)];
    auto ck = cand_key(x);
    const double pc = p_cand[ck];
    if (pr <= 0.0 || pc <= 0.0) continue;  // undefined conditionals, vacuous
    for (int s = 0; s < n_states; ++s) {
      Instantiation y = x;
      y.state[node] = s;
      const double lhs = joint_prob(net, y) / pr;
      auto nk = ck;
      nk.insert(nk.begin(), s);
      const double rhs = p_node_cand[nk] / pc;
      if (std::abs(lhs - rhs) > kBlanketTolerance) return false;
    }
  }
  return true;
}

namespace {

constexpr std::size_t kMaxExpandedOps = 50'000'000;

// Expands ops[pos..end) into `out`, recursing into loops: each LOOP body is
// appended reps times and the LOOP/NEXT lines themselves are dropped. Stops
// at a NEXT belonging to the caller.
void expand(const std::vector<Gate>& ops, std::size_t& pos, std::size_t end,
            std::vector<GateKind>& out) {
  while (pos < end) {
    const Gate& g = ops[pos];
    if (g.kind == GateKind::Next) return;  // caller owns the NEXT
    if (g.kind == GateKind::Loop) {
      ++pos;
      std::vector<GateKind> body;
      expand(ops, pos, end, body);
      if (pos >= end || ops[pos].kind != GateKind::Next) {
        throw std::invalid_argument("LOOP without a matching NEXT");
      }
      ++pos;  // consume the NEXT
      for (long long r = 0; r < g.reps; ++r) {
        if (out.size() + body.size() > kMaxExpandedOps) {
          throw std::invalid_argument("loop expansion exceeds the op budget");
        }
        out.insert(out.end(), body.begin(), body.end());
      }
    } else {
      if (out.size() + 1 > kMaxExpandedOps) {
        throw std::invalid_argument("loop expansion exceeds the op budget");
      }
      out.push_back(g.kind);
      ++pos;
    }
  }
}

}  // namespace

long long count_ops_by_expansion(const Circuit& circ) {
  std::vector<GateKind> expanded;
  std::size_t pos = 0;
  expand(circ.ops, pos, circ.ops.size(), expanded);
  if (pos != circ.ops.size()) {
    throw std::invalid_argument("NEXT without a matching LOOP");
  }
  return static_cast<long long>(expanded.size());
}

}  // namespace gibbsqc::oracle
