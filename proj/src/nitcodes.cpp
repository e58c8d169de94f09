#include "gibbsqc/nitcodes.hpp"

#include <set>

namespace gibbsqc {

namespace {

int bits_for_states(int n_states) {
  if (n_states <= 1) return 0;
  int bits = 0;
  while ((1 << bits) < n_states) ++bits;
  return bits;
}

}  // namespace

std::vector<int> NitLayout::node_nits(int node) const {
  std::vector<int> nits(nit_count[node]);
  for (int b = 0; b < nit_count[node]; ++b) nits[b] = first_nit[node] + b;
  return nits;
}

NitLayout build_layout(const Skeleton& skel) {
  NitLayout layout;
  layout.nit_count.reserve(skel.size());
  layout.first_nit.reserve(skel.size());
  for (const auto& node : skel.nodes()) {
    const int bits = bits_for_states(static_cast<int>(node.states.size()));
    layout.nit_count.push_back(bits);
    layout.first_nit.push_back(layout.nb);
    for (int b = 0; b < bits; ++b) {
      layout.owner.push_back(static_cast<int>(layout.first_nit.size()) - 1);
    }
    layout.nb += bits;
    if (bits == 0) {
      layout.warnings.push_back("node '" + node.name +
                                "' has a single state and carries no nits");
    }
  }
  return layout;
}

std::vector<StateName> state_names(const Skeleton& skel, const NitLayout& layout,
                                   int node) {
  if (node < 0 || node >= skel.size()) {
    throw SemanticError("unknown node index " + std::to_string(node));
  }
  const NodeSpec& spec = skel.nodes()[node];
  const int width = layout.nit_count[node];
  std::vector<StateName> names;
  names.reserve(spec.states.size());
  for (int s = 0; s < static_cast<int>(spec.states.size()); ++s) {
    StateName sn;
    sn.english = spec.states[s];
    sn.decimal = s;
    sn.binary.assign(width, '0');
    for (int b = 0; b < width; ++b) {
      if (s & (1 << b)) sn.binary[width - 1 - b] = '1';  // MSB first in the string
    }
    names.push_back(std::move(sn));
  }
  return names;
}

std::vector<int> nit_blanket(const Skeleton& skel, const NitLayout& layout, int nit) {
  if (nit < 0 || nit >= layout.nb) {
    throw SemanticError("nit index " + std::to_string(nit) + " out of range [0," +
                        std::to_string(layout.nb) + ")");
  }
  const int owner = layout.owner[nit];
  std::set<int> blanket;
  for (int sibling : layout.node_nits(owner)) blanket.insert(sibling);
  for (int mb_node : node_blanket(skel, owner)) {
    for (int n : layout.node_nits(mb_node)) blanket.insert(n);
  }
  blanket.erase(nit);
  return {blanket.begin(), blanket.end()};
}

}  // namespace gibbsqc
