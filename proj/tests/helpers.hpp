#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gibbsqc/bayesnet.hpp"
#include "gibbsqc/circuit.hpp"

namespace testutil {

using namespace gibbsqc;

// --- fixture texts (kept in sync with sample_io/3nodes) ---

inline const char* k3NodesParents = "# A\n# B A C\n# C\n";
inline const char* k3NodesStates = "# A a1 a2 a3\n# B b1 b2\n# C c1 c2\n";
inline const char* k3NodesProbs =
    "# A\n"
    "a1 0.2\na2 0.3\na3 0.5\n"
    "# B\n"
    "b1 a1 c1 0.7\nb2 a1 c1 0.3\n"
    "b1 a1 c2 0.4\nb2 a1 c2 0.6\n"
    "b1 a2 c1 0.25\nb2 a2 c1 0.75\n"
    "b1 a2 c2 0.5\nb2 a2 c2 0.5\n"
    "b1 a3 c1 0.9\nb2 a3 c1 0.1\n"
    "b1 a3 c2 0.35\nb2 a3 c2 0.65\n"
    "# C\n"
    "c1 0.6\nc2 0.4\n";

inline BayesNet three_nodes_net() {
  return load_net(k3NodesParents, k3NodesStates, k3NodesProbs);
}

inline Skeleton three_nodes_skeleton() {
  return Skeleton::build(parse_parents(k3NodesParents), parse_states(k3NodesStates));
}

// --- deterministic random values (independent of libstdc++ distributions) ---

inline std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// --- random networks ---

struct NetOptions {
  int max_nodes = 5;
  int max_states = 3;
  int min_states = 2;
  double edge_prob = 0.4;
  double min_weight = 0.1;  // keeps CPTs strictly positive
};

inline BayesNet random_net(std::mt19937_64& rng, const NetOptions& opt = {}) {
  const int n = 1 + static_cast<int>(rand_below(rng, opt.max_nodes));
  SectionList parents, states;
  std::vector<int> n_states(n);
  for (int i = 0; i < n; ++i) {
    const std::string name = "N" + std::to_string(i);
    NameList plist;
    for (int j = 0; j < i; ++j) {
      if (rand_unit(rng) < opt.edge_prob) plist.push_back("N" + std::to_string(j));
    }
    parents.emplace_back(name, plist);
    n_states[i] = opt.min_states +
                  static_cast<int>(rand_below(rng, opt.max_states - opt.min_states + 1));
    NameList slist;
    for (int s = 0; s < n_states[i]; ++s) {
      slist.push_back("s" + std::to_string(i) + "_" + std::to_string(s));
    }
    states.emplace_back(name, slist);
  }
  Skeleton skel = Skeleton::build(parents, states);

  std::vector<Cpt> cpts;
  for (int i = 0; i < n; ++i) {
    Cpt cpt;
    cpt.owner = i;
    const auto& pidx = skel.parent_indices(i);
    std::vector<int> radix;
    for (int p : pidx) radix.push_back(static_cast<int>(skel.nodes()[p].states.size()));
    std::vector<int> combo(pidx.size(), 0);
    while (true) {
      std::vector<double> weights(n_states[i]);
      double total = 0.0;
      for (auto& w : weights) {
        w = opt.min_weight + rand_unit(rng);
        total += w;
      }
      for (int s = 0; s < n_states[i]; ++s) {
        std::vector<int> key;
        key.push_back(s);
        key.insert(key.end(), combo.begin(), combo.end());
        cpt.rows[key] = weights[s] / total;
      }
      int pos = static_cast<int>(combo.size()) - 1;
      for (; pos >= 0; --pos) {
        if (++combo[pos] < radix[pos]) break;
        combo[pos] = 0;
      }
      if (pos < 0) break;
    }
    cpts.push_back(std::move(cpt));
  }
  return build_net(std::move(skel), std::move(cpts));
}

// --- random circuits ---

struct CircuitOptions {
  int min_qubits = 2;
  int max_qubits = 6;
  int max_body_ops = 6;
  int max_loop_depth = 2;
  int max_reps = 5;
  int max_mux_controls = 3;
};

inline Gate random_plain_gate(std::mt19937_64& rng, int nq, const CircuitOptions& opt) {
  // Distinct bits to hand out as targets/controls.
  std::vector<int> bits(nq);
  for (int i = 0; i < nq; ++i) bits[i] = i;
  for (int i = nq - 1; i > 0; --i) {
    std::swap(bits[i], bits[rand_below(rng, i + 1)]);
  }
  auto take_controls = [&](int from, int max_count) {
    std::vector<Control> ctrls;
    const int avail = nq - from;
    const int count = static_cast<int>(rand_below(rng, std::min(avail, max_count) + 1));
    for (int i = 0; i < count; ++i) {
      ctrls.push_back({bits[from + i], rand_unit(rng) < 0.5});
    }
    return ctrls;
  };
  auto angle = [&] { return rand_unit(rng) * 360.0; };

  switch (rand_below(rng, 10)) {
    case 0:
      return Gate::swap(bits[0], bits[1], take_controls(2, 2));
    case 1:
      // Keep one qubit control-free for the picture's Ph symbol.
      return Gate::phase(angle(), take_controls(0, nq - 1));
    case 2:
      return Gate::proj_phase(rand_unit(rng) < 0.5, angle(), bits[0], take_controls(1, 2));
    case 3:
    case 4: {
      static const GateKind singles[] = {GateKind::SigX, GateKind::SigY, GateKind::SigZ,
                                         GateKind::Had2};
      return Gate::single(singles[rand_below(rng, 4)], bits[0], take_controls(1, 2));
    }
    case 5:
    case 6: {
      static const GateKind rots[] = {GateKind::RotX, GateKind::RotY, GateKind::RotZ};
      return Gate::rot(rots[rand_below(rng, 3)], angle(), bits[0], take_controls(1, 2));
    }
    case 7:
      return Gate::rot_n(angle(), angle(), angle(), bits[0], take_controls(1, 2));
    default: {
      const int k =
          1 + static_cast<int>(rand_below(rng, std::min(opt.max_mux_controls, nq - 1)));
      std::vector<int> mux(bits.begin() + 1, bits.begin() + 1 + k);
      std::sort(mux.begin(), mux.end(), std::greater<int>());
      std::vector<double> angles(std::size_t{1} << k);
      for (auto& a : angles) a = angle();
      auto ctrls = take_controls(1 + k, 1);
      return Gate::multiplexor(bits[0], mux, std::move(angles), std::move(ctrls));
    }
  }
}

inline void random_ops(std::mt19937_64& rng, Circuit& circ, int depth,
                       const CircuitOptions& opt) {
  const int count = 1 + static_cast<int>(rand_below(rng, opt.max_body_ops));
  for (int i = 0; i < count; ++i) {
    if (depth < opt.max_loop_depth && rand_unit(rng) < 0.2) {
      append_gate(circ, Gate::loop(1 + rand_below(rng, opt.max_reps)));
      random_ops(rng, circ, depth + 1, opt);
      append_gate(circ, Gate::next());
    } else {
      append_gate(circ, random_plain_gate(rng, circ.qubit_count, opt));
    }
  }
}

inline Circuit random_circuit(std::mt19937_64& rng, const CircuitOptions& opt = {}) {
  Circuit circ;
  circ.qubit_count =
      opt.min_qubits + static_cast<int>(rand_below(rng, opt.max_qubits - opt.min_qubits + 1));
  random_ops(rng, circ, 0, opt);
  renumber_loop_labels(circ);
  return circ;
}

}  // namespace testutil
