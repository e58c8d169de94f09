#pragma once

#include <string>
#include <vector>

#include "gibbsqc/bayesnet.hpp"

namespace gibbsqc {

// Qubit ("nit") allocation for a network: each node owns a contiguous block
// of global nit indices, blocks laid out in focus-node order starting at 0.
// Within a node the lowest global index is the least-significant bit of the
// state's binary name.
struct NitLayout {
  std::vector<int> nit_count;  // per node: ceil(log2(N)) for N>=2, 0 for N=1
  std::vector<int> first_nit;  // per node: global index of its LSB nit
  std::vector<int> owner;      // per nit: owning node index
  int nb = 0;                  // total nit count
  std::vector<std::string> warnings;  // one entry per 0-nit (single-state) node

  // Ascending global indices of a node's nits (LSB first).
  std::vector<int> node_nits(int node) const;
};

NitLayout build_layout(const Skeleton& skel);

struct StateName {
  std::string english;
  int decimal = 0;
  std::string binary;  // fixed width = owner's nit count, MSB first; "" for 0-nit nodes
};

// One StateName per state, in states-file order.
std::vector<StateName> state_names(const Skeleton& skel, const NitLayout& layout, int node);

// Sibling nits of the same owner plus every nit of every node in the owner's
// Markov blanket. Never contains the focus nit. Ascending.
std::vector<int> nit_blanket(const Skeleton& skel, const NitLayout& layout, int nit);

}  // namespace gibbsqc
