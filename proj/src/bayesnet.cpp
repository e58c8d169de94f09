#include "gibbsqc/bayesnet.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

#include "gibbsqc/realfmt.hpp"

namespace gibbsqc {

namespace {

void require_ascii(const std::string& text) {
  for (unsigned char ch : text) {
    if (ch > 0x7F) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "%02X", ch);
      throw ParseError(std::string("input is not 7-bit ASCII (byte 0x") + buf + ")");
    }
  }
}

std::vector<std::string> tokenize(const std::string& text) {
  require_ascii(text);
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

// Sections are delimited by the standalone token "#". A '#' anywhere else is
// a grammar error, never part of a name.
std::vector<std::vector<std::string>> split_sections(const std::string& text,
                                                     const char* file_kind) {
  auto tokens = tokenize(text);
  if (tokens.empty()) throw ParseError(std::string(file_kind) + ": empty file");
  if (tokens.front() != "#") {
    throw ParseError(std::string(file_kind) + ": token stream must start with '#'");
  }
  std::vector<std::vector<std::string>> sections;
  for (const auto& tok : tokens) {
    if (tok == "#") {
      sections.emplace_back();
    } else if (tok.find('#') != std::string::npos) {
      throw ParseError(std::string(file_kind) + ": '#' must be its own token (got '" +
                       tok + "')");
    } else {
      sections.back().push_back(tok);
    }
  }
  for (const auto& sec : sections) {
    if (sec.empty()) {
      throw ParseError(std::string(file_kind) + ": '#' with no focus node name after it");
    }
  }
  return sections;
}

SectionList to_named_sections(const std::string& text, const char* file_kind) {
  SectionList result;
  std::set<std::string> seen;
  for (auto& sec : split_sections(text, file_kind)) {
    std::string focus = sec.front();
    if (!seen.insert(focus).second) {
      throw ParseError(std::string(file_kind) + ": duplicate focus node '" + focus + "'");
    }
    result.emplace_back(std::move(focus),
                        NameList(sec.begin() + 1, sec.end()));
  }
  return result;
}

// Strict decimal float: optional sign, digits with optional point, optional
// exponent. Rejects hex/inf/nan that strtod would happily take.
bool looks_like_number(const std::string& tok) {
  std::size_t i = 0;
  if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++digits;
  if (i < tok.size() && tok[i] == '.') {
    ++i;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++digits;
  }
  if (digits == 0) return false;
  if (i < tok.size() && (tok[i] == 'e' || tok[i] == 'E')) {
    ++i;
    if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == tok.size();
}

double parse_probability(const std::string& tok, const std::string& context) {
  if (!looks_like_number(tok)) {
    throw ParseError(context + ": '" + tok + "' is not a decimal probability");
  }
  double v = std::strtod(tok.c_str(), nullptr);
  if (v < 0.0 || v > 1.0) {
    throw ParseError(context + ": probability " + tok + " outside [0,1]");
  }
  return v;
}

int find_state(const NodeSpec& node, const std::string& name) {
  for (std::size_t s = 0; s < node.states.size(); ++s) {
    if (node.states[s] == name) return static_cast<int>(s);
  }
  return -1;
}

}  // namespace

SectionList parse_parents(const std::string& text) {
  auto sections = to_named_sections(text, "parents file");
  for (const auto& [focus, parents] : sections) {
    std::set<std::string> seen;
    for (const auto& p : parents) {
      if (p == focus) {
        throw ParseError("parents file: node '" + focus + "' lists itself as a parent");
      }
      if (!seen.insert(p).second) {
        throw ParseError("parents file: node '" + focus + "' lists parent '" + p +
                         "' twice");
      }
    }
  }
  return sections;
}

SectionList parse_states(const std::string& text) {
  auto sections = to_named_sections(text, "states file");
  for (const auto& [focus, states] : sections) {
    if (states.empty()) {
      throw ParseError("states file: node '" + focus + "' has no states");
    }
    std::set<std::string> seen;
    for (const auto& s : states) {
      if (!seen.insert(s).second) {
        throw ParseError("states file: node '" + focus + "' has duplicate state '" + s +
                         "'");
      }
    }
  }
  return sections;
}

Skeleton Skeleton::build(const SectionList& parents, const SectionList& states) {
  if (parents.size() != states.size()) {
    throw ParseError("parents and states files list different node counts (" +
                     std::to_string(parents.size()) + " vs " +
                     std::to_string(states.size()) + ")");
  }
  Skeleton sk;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (parents[i].first != states[i].first) {
      throw ParseError("focus node order differs between parents and states files ('" +
                       parents[i].first + "' vs '" + states[i].first + "' at position " +
                       std::to_string(i) + ")");
    }
    NodeSpec node;
    node.name = parents[i].first;
    node.parents = parents[i].second;
    node.states = states[i].second;
    if (node.states.empty()) {
      throw ParseError("node '" + node.name + "' has no states");
    }
    sk.index_.emplace(node.name, static_cast<int>(i));
    sk.nodes_.push_back(std::move(node));
  }
  sk.parent_idx_.resize(sk.nodes_.size());
  sk.child_idx_.resize(sk.nodes_.size());
  for (std::size_t i = 0; i < sk.nodes_.size(); ++i) {
    for (const auto& pname : sk.nodes_[i].parents) {
      int p = sk.node_index(pname);
      if (p < 0) {
        throw ParseError("node '" + sk.nodes_[i].name + "' has unknown parent '" +
                         pname + "'");
      }
      if (p == static_cast<int>(i)) {
        throw ParseError("node '" + sk.nodes_[i].name + "' lists itself as a parent");
      }
      sk.parent_idx_[i].push_back(p);
      sk.child_idx_[p].push_back(static_cast<int>(i));
    }
  }
  return sk;
}

int Skeleton::node_index(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

double Cpt::lookup(const std::vector<int>& key) const {
  auto it = rows.find(key);
  return it == rows.end() ? 0.0 : it->second;
}

std::vector<Cpt> parse_probs(const std::string& text, const Skeleton& skel) {
  auto sections = split_sections(text, "probabilities file");
  if (static_cast<int>(sections.size()) != skel.size()) {
    throw ParseError("probabilities file lists " + std::to_string(sections.size()) +
                     " focus nodes, expected " + std::to_string(skel.size()));
  }
  std::vector<Cpt> cpts;
  for (int i = 0; i < skel.size(); ++i) {
    const auto& sec = sections[i];
    const NodeSpec& node = skel.nodes()[i];
    if (sec.front() != node.name) {
      throw ParseError("probabilities file focus order differs from parents/states ('" +
                       sec.front() + "' where '" + node.name + "' was expected)");
    }
    const int n_parents = static_cast<int>(node.parents.size());
    const int width = 2 + n_parents;  // focus state, parent states..., probability
    const auto row_tokens = static_cast<int>(sec.size()) - 1;
    if (row_tokens % width != 0) {
      throw ParseError("probabilities file: focus node '" + node.name + "' rows need " +
                       std::to_string(width) + " columns each; got " +
                       std::to_string(row_tokens) + " tokens");
    }
    Cpt cpt;
    cpt.owner = i;
    for (int r = 0; r < row_tokens / width; ++r) {
      const auto* row = &sec[1 + r * width];
      const std::string context = "probabilities file: focus node '" + node.name +
                                  "', row " + std::to_string(r + 1);
      std::vector<int> key;
      key.reserve(1 + n_parents);
      int fs = find_state(node, row[0]);
      if (fs < 0) throw ParseError(context + ": unknown state '" + row[0] + "'");
      key.push_back(fs);
      for (int p = 0; p < n_parents; ++p) {
        const NodeSpec& parent = skel.nodes()[skel.parent_indices(i)[p]];
        int ps = find_state(parent, row[1 + p]);
        if (ps < 0) {
          throw ParseError(context + ": unknown state '" + row[1 + p] + "' for parent '" +
                           parent.name + "'");
        }
        key.push_back(ps);
      }
      double prob = parse_probability(row[1 + n_parents], context);
      if (!cpt.rows.emplace(std::move(key), prob).second) {
        throw ParseError(context + ": duplicate row for this state combination");
      }
    }
    cpts.push_back(std::move(cpt));
  }
  return cpts;
}

BayesNet build_net(Skeleton skel, std::vector<Cpt> cpts) {
  if (static_cast<int>(cpts.size()) != skel.size()) {
    throw ParseError("expected " + std::to_string(skel.size()) + " CPTs, got " +
                     std::to_string(cpts.size()));
  }
  for (int i = 0; i < skel.size(); ++i) {
    if (cpts[i].owner != i) {
      throw ParseError("CPT order does not match node order");
    }
  }
  return BayesNet{std::move(skel), std::move(cpts)};
}

BayesNet load_net(const std::string& parents_text, const std::string& states_text,
                  const std::string& probs_text) {
  Skeleton skel = Skeleton::build(parse_parents(parents_text), parse_states(states_text));
  auto cpts = parse_probs(probs_text, skel);
  return build_net(std::move(skel), std::move(cpts));
}

namespace {

// Increments a mixed-radix counter (last position fastest). Returns false
// once it wraps around.
bool odometer_next(std::vector<int>& digits, const std::vector<int>& radix) {
  for (int pos = static_cast<int>(digits.size()) - 1; pos >= 0; --pos) {
    if (++digits[pos] < radix[pos]) return true;
    digits[pos] = 0;
  }
  return false;
}

bool has_cycle(const Skeleton& skel, std::vector<int>& cycle_out) {
  const int n = skel.size();
  std::vector<int> color(n, 0);  // 0 white, 1 gray, 2 black
  std::vector<int> stack;
  // Iterative DFS along parent edges.
  for (int start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    std::vector<std::pair<int, int>> frames{{start, 0}};
    color[start] = 1;
    stack = {start};
    while (!frames.empty()) {
      auto& [node, next] = frames.back();
      const auto& parents = skel.parent_indices(node);
      if (next < static_cast<int>(parents.size())) {
        int p = parents[next++];
        if (color[p] == 1) {
          cycle_out = stack;
          cycle_out.push_back(p);
          return true;
        }
        if (color[p] == 0) {
          color[p] = 1;
          stack.push_back(p);
          frames.emplace_back(p, 0);
        }
      } else {
        color[node] = 2;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return false;
}

constexpr long long kMaxNormalizationCombos = 1'000'000;

}  // namespace

std::vector<std::string> validate_net(const BayesNet& net) {
  std::vector<std::string> report;
  const Skeleton& skel = net.skel;

  std::vector<int> cycle;
  if (has_cycle(skel, cycle)) {
    std::string msg = "graph has a directed cycle:";
    for (int v : cycle) msg += " " + skel.nodes()[v].name;
    report.push_back(msg);
  }

  for (int i = 0; i < skel.size(); ++i) {
    const NodeSpec& node = skel.nodes()[i];
    const Cpt& cpt = net.cpts[i];
    for (const auto& [key, prob] : cpt.rows) {
      if (prob < 0.0 || prob > 1.0) {
        report.push_back("node '" + node.name + "': probability " + format_real(prob) +
                         " outside [0,1]");
      }
    }

    const auto& parents = skel.parent_indices(i);
    std::vector<int> radix;
    long long combos = 1;
    for (int p : parents) {
      radix.push_back(static_cast<int>(skel.nodes()[p].states.size()));
      combos *= radix.back();
      if (combos > kMaxNormalizationCombos) break;
    }
    if (combos > kMaxNormalizationCombos) {
      report.push_back("node '" + node.name +
                       "': parent state space too large to check normalization");
      continue;
    }
    std::vector<int> combo(parents.size(), 0);
    do {
      double sum = 0.0;
      std::vector<int> key(1 + parents.size());
      std::copy(combo.begin(), combo.end(), key.begin() + 1);
      for (int s = 0; s < static_cast<int>(node.states.size()); ++s) {
        key[0] = s;
        sum += cpt.lookup(key);
      }
      if (std::abs(sum - 1.0) > kCptNormTolerance) {
        std::string msg = "node '" + node.name + "': P(" + node.name;
        if (!parents.empty()) {
          msg += " |";
          for (std::size_t p = 0; p < parents.size(); ++p) {
            msg += " " + skel.nodes()[parents[p]].name + "=" +
                   skel.nodes()[parents[p]].states[combo[p]];
          }
        }
        msg += ") sums to " + format_real(sum) + ", not 1";
        report.push_back(msg);
      }
    } while (odometer_next(combo, radix));
  }
  return report;
}

std::vector<int> node_blanket(const Skeleton& skel, int node) {
  if (node < 0 || node >= skel.size()) {
    throw SemanticError("unknown node index " + std::to_string(node));
  }
  std::set<int> blanket;
  for (int p : skel.parent_indices(node)) blanket.insert(p);
  for (int c : skel.child_indices(node)) {
    blanket.insert(c);
    for (int co : skel.parent_indices(c)) blanket.insert(co);
  }
  blanket.erase(node);
  return {blanket.begin(), blanket.end()};
}

double joint_prob(const BayesNet& net, const Instantiation& x) {
  if (static_cast<int>(x.state.size()) != net.size()) {
    throw SemanticError("instantiation covers " + std::to_string(x.state.size()) +
                        " nodes, net has " + std::to_string(net.size()));
  }
  double prod = 1.0;
  for (int i = 0; i < net.size(); ++i) {
    const auto& parents = net.skel.parent_indices(i);
    std::vector<int> key;
    key.reserve(1 + parents.size());
    key.push_back(x.state[i]);
    for (int p : parents) key.push_back(x.state[p]);
    prod *= net.cpts[i].lookup(key);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

namespace {

// Unbiased bounded draw, hand-rolled so results do not depend on the
// standard library's distribution internals.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

}  // namespace

Instantiation random_instantiation(const Skeleton& skel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Instantiation x;
  x.state.reserve(skel.size());
  for (const auto& node : skel.nodes()) {
    x.state.push_back(static_cast<int>(draw_below(rng, node.states.size())));
  }
  return x;
}

Instantiation parse_start_spec(const Skeleton& skel, const std::string& spec) {
  Instantiation x;
  x.state.assign(skel.size(), -1);
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParseError("start spec entry '" + item + "' is not Node=state");
    }
    std::string node_name = item.substr(0, eq);
    std::string state_name = item.substr(eq + 1);
    int node = skel.node_index(node_name);
    if (node < 0) throw ParseError("start spec names unknown node '" + node_name + "'");
    int state = find_state(skel.nodes()[node], state_name);
    if (state < 0) {
      throw ParseError("start spec names unknown state '" + state_name + "' for node '" +
                       node_name + "'");
    }
    if (x.state[node] != -1) {
      throw ParseError("start spec assigns node '" + node_name + "' twice");
    }
    x.state[node] = state;
  }
  for (int i = 0; i < skel.size(); ++i) {
    if (x.state[i] == -1) {
      throw ParseError("start spec misses node '" + skel.nodes()[i].name + "'");
    }
  }
  return x;
}

std::string serialize_parents(const Skeleton& skel) {
  std::string out;
  for (const auto& node : skel.nodes()) {
    out += "# " + node.name;
    for (const auto& p : node.parents) out += " " + p;
    out += "\n";
  }
  return out;
}

std::string serialize_states(const Skeleton& skel) {
  std::string out;
  for (const auto& node : skel.nodes()) {
    out += "# " + node.name;
    for (const auto& s : node.states) out += " " + s;
    out += "\n";
  }
  return out;
}

std::string serialize_probs(const BayesNet& net) {
  std::string out;
  for (int i = 0; i < net.size(); ++i) {
    const NodeSpec& node = net.nodes()[i];
    out += "# " + node.name + "\n";
    for (const auto& [key, prob] : net.cpts[i].rows) {
      out += node.states[key[0]];
      const auto& parents = net.skel.parent_indices(i);
      for (std::size_t p = 0; p < parents.size(); ++p) {
        out += " " + net.nodes()[parents[p]].states[key[1 + p]];
      }
      out += " " + format_real(prob) + "\n";
    }
  }
  return out;
}

}  // namespace gibbsqc
