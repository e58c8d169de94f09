#include "gibbsqc/circuit.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace gibbsqc {

namespace {

struct KindInfo {
  GateKind kind;
  std::string_view word;
  int targets;
  int angles;  // -1: 2^mux_count (MP_Y)
};

constexpr KindInfo kKinds[] = {
    {GateKind::Swap, "SWAP", 2, 0},  {GateKind::Phas, "PHAS", 0, 1},
    {GateKind::P0Ph, "P0PH", 1, 1},  {GateKind::P1Ph, "P1PH", 1, 1},
    {GateKind::SigX, "SIGX", 1, 0},  {GateKind::SigY, "SIGY", 1, 0},
    {GateKind::SigZ, "SIGZ", 1, 0},  {GateKind::Had2, "HAD2", 1, 0},
    {GateKind::RotX, "ROTX", 1, 1},  {GateKind::RotY, "ROTY", 1, 1},
    {GateKind::RotZ, "ROTZ", 1, 1},  {GateKind::RotN, "ROTN", 1, 3},
    {GateKind::MpY, "MP_Y", 1, -1},  {GateKind::Loop, "LOOP", 0, 0},
    {GateKind::Next, "NEXT", 0, 0},
};

const KindInfo& info(GateKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw std::logic_error("unknown gate kind");
}

void sort_controls(std::vector<Control>& ctrls) {
  std::sort(ctrls.begin(), ctrls.end(),
            [](const Control& a, const Control& b) { return a.bit > b.bit; });
}

// One string per problem with the given gate, relative to qubit_count.
// Loop pairing is a circuit-level concern and lives in validate_circuit.
std::vector<std::string> gate_problems(const Gate& g, int qubit_count) {
  std::vector<std::string> out;
  const KindInfo& ki = info(g.kind);

  if (static_cast<int>(g.targets.size()) != ki.targets) {
    out.push_back(std::string(ki.word) + " needs " + std::to_string(ki.targets) +
                  " target(s), got " + std::to_string(g.targets.size()));
  }
  const int want_angles =
      ki.angles >= 0 ? ki.angles : (g.mux.size() > 20 ? -1 : (1 << g.mux.size()));
  if (static_cast<int>(g.angles.size()) != want_angles) {
    out.push_back(std::string(ki.word) + " needs " + std::to_string(want_angles) +
                  " angle(s), got " + std::to_string(g.angles.size()));
  }
  if (g.kind != GateKind::MpY && !g.mux.empty()) {
    out.push_back(std::string(ki.word) + " cannot carry multiplexor controls");
  }
  if (g.kind == GateKind::MpY) {
    if (g.mux.empty()) {
      out.push_back("MP_Y needs at least one multiplexor control (use ROTY instead)");
    }
    if (g.mux.size() > 20) {
      out.push_back("MP_Y with more than 20 multiplexor controls is not representable");
    }
    for (std::size_t i = 0; i < g.mux.size(); ++i) {
      const int want_name = static_cast<int>(g.mux.size()) - 1 - static_cast<int>(i);
      if (g.mux[i].name != want_name) {
        out.push_back("multiplexor control names must run k..0 left to right");
        break;
      }
    }
  }
  if (g.kind == GateKind::Loop || g.kind == GateKind::Next) {
    if (!g.controls.empty()) out.push_back(std::string(ki.word) + " cannot be controlled");
    if (g.kind == GateKind::Loop && g.reps < 1) {
      out.push_back("LOOP repetition count must be >= 1");
    }
    return out;
  }

  std::set<int> used;
  auto check_bit = [&](int bit, const char* role) {
    if (bit < 0 || bit >= qubit_count) {
      out.push_back(std::string(ki.word) + " " + role + " bit " + std::to_string(bit) +
                    " out of range [0," + std::to_string(qubit_count) + ")");
    } else if (!used.insert(bit).second) {
      out.push_back(std::string(ki.word) + " uses bit " + std::to_string(bit) +
                    " more than once");
    }
  };
  for (int t : g.targets) check_bit(t, "target");
  for (const auto& c : g.controls) check_bit(c.bit, "control");
  for (const auto& m : g.mux) check_bit(m.bit, "multiplexor control");
  return out;
}

}  // namespace

std::string_view mnemonic(GateKind kind) { return info(kind).word; }

std::optional<GateKind> kind_from_mnemonic(std::string_view word) {
  for (const auto& k : kKinds) {
    if (k.word == word) return k.kind;
  }
  return std::nullopt;
}

Gate Gate::swap(int a, int b, std::vector<Control> ctrls) {
  Gate g;
  g.kind = GateKind::Swap;
  g.targets = {a, b};
  g.controls = std::move(ctrls);
  sort_controls(g.controls);
  return g;
}

Gate Gate::phase(double degs, std::vector<Control> ctrls) {
  Gate g;
  g.kind = GateKind::Phas;
  g.angles = {degs};
  g.controls = std::move(ctrls);
  sort_controls(g.controls);
  return g;
}

Gate Gate::proj_phase(bool one, double degs, int target, std::vector<Control> ctrls) {
  Gate g;
  g.kind = one ? GateKind::P1Ph : GateKind::P0Ph;
  g.angles = {degs};
  g.targets = {target};
  g.controls = std::move(ctrls);
  sort_controls(g.controls);
  return g;
}

Gate Gate::single(GateKind kind, int target, std::vector<Control> ctrls) {
  Gate g;
  g.kind = kind;
  g.targets = {target};
  g.controls = std::move(ctrls);
  sort_controls(g.controls);
  return g;
}

Gate Gate::rot(GateKind kind, double degs, int target, std::vector<Control> ctrls) {
  Gate g;
  g.kind = kind;
  g.angles = {degs};
  g.targets = {target};
  g.controls = std::move(ctrls);
  sort_controls(g.controls);
  return g;
}

Gate Gate::rot_n(double dx, double dy, double dz, int target, std::vector<Control> ctrls) {
  Gate g;
  g.kind = GateKind::RotN;
  g.angles = {dx, dy, dz};
  g.targets = {target};
  g.controls = std::move(ctrls);
  sort_controls(g.controls);
  return g;
}

Gate Gate::multiplexor(int target, const std::vector<int>& mux_bits,
                       std::vector<double> angles, std::vector<Control> ctrls) {
  Gate g;
  g.kind = GateKind::MpY;
  g.targets = {target};
  g.angles = std::move(angles);
  g.controls = std::move(ctrls);
  sort_controls(g.controls);
  const int k = static_cast<int>(mux_bits.size());
  for (int i = 0; i < k; ++i) {
    g.mux.push_back({mux_bits[i], k - 1 - i});
  }
  return g;
}

Gate Gate::loop(long long reps, int label) {
  Gate g;
  g.kind = GateKind::Loop;
  g.reps = reps;
  g.label = label;
  return g;
}

Gate Gate::next(int label) {
  Gate g;
  g.kind = GateKind::Next;
  g.label = label;
  return g;
}

void append_gate(Circuit& circ, Gate gate) {
  auto problems = gate_problems(gate, circ.qubit_count);
  if (!problems.empty()) {
    throw std::invalid_argument("op " + std::to_string(circ.ops.size()) + ": " +
                                problems.front());
  }
  circ.ops.push_back(std::move(gate));
}

long long count_elementary(const Circuit& circ) {
  long long count = 0;
  long long multiplier = 1;
  std::vector<long long> reps_stack;
  for (const auto& g : circ.ops) {
    if (g.kind == GateKind::Loop) {
      reps_stack.push_back(g.reps);
      multiplier *= g.reps;
    } else if (g.kind == GateKind::Next) {
      if (reps_stack.empty()) {
        throw std::invalid_argument("NEXT without a matching LOOP");
      }
      multiplier /= reps_stack.back();
      reps_stack.pop_back();
    } else {
      count += multiplier;
    }
  }
  if (!reps_stack.empty()) {
    throw std::invalid_argument("LOOP without a matching NEXT");
  }
  return count;
}

std::vector<std::string> validate_circuit(const Circuit& circ) {
  std::vector<std::string> report;
  if (circ.qubit_count < 1) {
    report.push_back("circuit needs at least one qubit");
  }
  std::vector<std::pair<int, int>> open_loops;  // (op index, label)
  for (std::size_t i = 0; i < circ.ops.size(); ++i) {
    const Gate& g = circ.ops[i];
    for (auto& p : gate_problems(g, circ.qubit_count)) {
      report.push_back("op " + std::to_string(i) + ": " + std::move(p));
    }
    if (g.kind == GateKind::Loop) {
      if (g.label != static_cast<int>(i)) {
        report.push_back("op " + std::to_string(i) + ": LOOP label " +
                         std::to_string(g.label) + " must equal its line number " +
                         std::to_string(i));
      }
      open_loops.emplace_back(static_cast<int>(i), g.label);
    } else if (g.kind == GateKind::Next) {
      if (open_loops.empty()) {
        report.push_back("op " + std::to_string(i) + ": NEXT without a matching LOOP");
      } else {
        if (g.label != open_loops.back().second) {
          report.push_back("op " + std::to_string(i) + ": NEXT label " +
                           std::to_string(g.label) + " does not match open LOOP label " +
                           std::to_string(open_loops.back().second));
        }
        open_loops.pop_back();
      }
    } else if (g.kind == GateKind::Phas) {
      // The picture language needs a control-free bit for the Ph symbol.
      if (static_cast<int>(g.controls.size()) >= circ.qubit_count) {
        report.push_back("op " + std::to_string(i) +
                         ": PHAS leaves no control-free qubit for its picture symbol");
      }
    }
  }
  for (const auto& [idx, label] : open_loops) {
    report.push_back("op " + std::to_string(idx) + ": LOOP is never closed by NEXT");
  }
  return report;
}

void renumber_loop_labels(Circuit& circ) {
  std::vector<int> open;
  for (std::size_t i = 0; i < circ.ops.size(); ++i) {
    Gate& g = circ.ops[i];
    if (g.kind == GateKind::Loop) {
      g.label = static_cast<int>(i);
      open.push_back(g.label);
    } else if (g.kind == GateKind::Next) {
      if (open.empty()) {
        throw std::invalid_argument("NEXT without a matching LOOP");
      }
      g.label = open.back();
      open.pop_back();
    }
  }
  if (!open.empty()) {
    throw std::invalid_argument("LOOP without a matching NEXT");
  }
}

}  // namespace gibbsqc
