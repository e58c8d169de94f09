#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gibbsqc/errors.hpp"

namespace gibbsqc {

// One node of the network: its name, parent names (file order) and state
// names (file order). State indices ("decimal names") follow the states list.
struct NodeSpec {
  std::string name;
  std::vector<std::string> parents;
  std::vector<std::string> states;
};

using NameList = std::vector<std::string>;
using SectionList = std::vector<std::pair<std::string, NameList>>;

// Hash-delimited section parsers for parents.txt / states.txt.
// Tokens split on any whitespace run; '#' must be its own token.
SectionList parse_parents(const std::string& text);
SectionList parse_states(const std::string& text);

// Graph + naming info merged from parents.txt and states.txt. This is all a
// pre-run needs; probabilities are attached later by build_net().
class Skeleton {
 public:
  static Skeleton build(const SectionList& parents, const SectionList& states);

  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  // -1 if unknown.
  int node_index(const std::string& name) const;
  const std::vector<int>& parent_indices(int node) const { return parent_idx_[node]; }
  const std::vector<int>& child_indices(int node) const { return child_idx_[node]; }

 private:
  std::vector<NodeSpec> nodes_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> parent_idx_;
  std::vector<std::vector<int>> child_idx_;
};

// Conditional probability table for one node. Row key layout:
// [focus_state, parent1_state, parent2_state, ...] with parents in the
// parents.txt order. Missing rows mean probability zero.
struct Cpt {
  int owner = -1;
  std::map<std::vector<int>, double> rows;

  double lookup(const std::vector<int>& key) const;
};

// Probabilities-file parser. The skeleton must already be built; the file's
// focus-node sequence must match it exactly.
std::vector<Cpt> parse_probs(const std::string& text, const Skeleton& skel);

struct BayesNet {
  Skeleton skel;
  std::vector<Cpt> cpts;  // one per node, focus order

  const std::vector<NodeSpec>& nodes() const { return skel.nodes(); }
  int size() const { return skel.size(); }
};

BayesNet build_net(Skeleton skel, std::vector<Cpt> cpts);
// Convenience: parse all three files and assemble.
BayesNet load_net(const std::string& parents_text, const std::string& states_text,
                  const std::string& probs_text);

// Semantic validation: acyclicity, probability ranges, CPT column
// normalization (sum to 1 within 1e-9 over each full parent configuration).
// Empty report means valid.
std::vector<std::string> validate_net(const BayesNet& net);

inline constexpr double kCptNormTolerance = 1e-9;

// parents(node) | children(node) | co-parents of each child, minus the node.
// Returned ascending by node index (== focus order).
std::vector<int> node_blanket(const Skeleton& skel, int node);

// One state per node, indexed in focus order.
struct Instantiation {
  std::vector<int> state;

  bool operator==(const Instantiation& o) const { return state == o.state; }
};

// Product over nodes of the CPT entry for the node's state given its
// parents' states. Omitted rows contribute zero.
double joint_prob(const BayesNet& net, const Instantiation& x);

// Uniform independent draw per node from a seeded deterministic generator.
// Same seed, same result, on every platform.
Instantiation random_instantiation(const Skeleton& skel, std::uint64_t seed);

// Parses "A=a1,B=b1,C=c1" against the skeleton's english state names.
// Every node must be assigned exactly once.
Instantiation parse_start_spec(const Skeleton& skel, const std::string& spec);

// Canonical serializers (round-trip with the parsers up to whitespace).
std::string serialize_parents(const Skeleton& skel);
std::string serialize_states(const Skeleton& skel);
std::string serialize_probs(const BayesNet& net);

}  // namespace gibbsqc
