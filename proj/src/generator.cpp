#include "gibbsqc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gibbsqc/errors.hpp"
#include "gibbsqc/fileio.hpp"
#include "gibbsqc/realfmt.hpp"

namespace gibbsqc {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

bool odometer_next(std::vector<int>& digits, const std::vector<int>& radix) {
  for (int pos = static_cast<int>(digits.size()) - 1; pos >= 0; --pos) {
    if (++digits[pos] < radix[pos]) return true;
    digits[pos] = 0;
  }
  return false;
}

}  // namespace

double gamma0_degs(double p_start) {
  if (p_start == 0.0) {
    throw SemanticError("starting state has zero probability; the target is unreachable");
  }
  if (p_start < 0.0 || p_start > 1.0) {
    throw SemanticError("probability " + format_real(p_start) + " outside (0,1]");
  }
  const double amplitude = std::min(std::sqrt(p_start), 1.0);
  return 2.0 * std::acos(amplitude) * kRadToDeg;
}

std::vector<double> afga_schedule(double gamma0, double delta_lambda_degs,
                                  double gamma_tol_degs, int max_steps) {
  if (gamma_tol_degs <= 0.0) throw SemanticError("gamma tolerance must be positive");
  if (max_steps < 1) throw SemanticError("maximum Grover steps must be >= 1");
  const double half = delta_lambda_degs / kRadToDeg / 2.0;
  const double ratio = std::cos(half) * std::cos(half);
  std::vector<double> schedule;
  double gamma = gamma0;
  while (std::abs(gamma) >= gamma_tol_degs &&
         static_cast<int>(schedule.size()) < max_steps) {
    schedule.push_back(gamma);
    gamma *= ratio;
  }
  return schedule;
}

std::string uniform_probs(const Skeleton& skel, ProbsVariant variant) {
  std::string out;
  for (int i = 0; i < skel.size(); ++i) {
    const NodeSpec& node = skel.nodes()[i];
    const auto& parents = skel.parent_indices(i);
    const double p = 1.0 / static_cast<double>(node.states.size());
    const std::string prob = format_real(p);
    std::vector<int> radix;
    for (int par : parents) {
      radix.push_back(static_cast<int>(skel.nodes()[par].states.size()));
    }
    out += "# " + node.name + "\n";
    auto emit_row = [&](int focus_state, const std::vector<int>& combo) {
      out += node.states[focus_state];
      for (std::size_t pi = 0; pi < parents.size(); ++pi) {
        out += " " + skel.nodes()[parents[pi]].states[combo[pi]];
      }
      out += " " + prob + "\n";
    };
    std::vector<int> combo(parents.size(), 0);
    if (variant == ProbsVariant::FocusFirst) {
      do {
        for (int s = 0; s < static_cast<int>(node.states.size()); ++s) emit_row(s, combo);
      } while (odometer_next(combo, radix));
    } else {
      for (int s = 0; s < static_cast<int>(node.states.size()); ++s) {
        std::fill(combo.begin(), combo.end(), 0);
        do {
          emit_row(s, combo);
        } while (odometer_next(combo, radix));
      }
    }
  }
  return out;
}

std::string blankets_text(const Skeleton& skel) {
  std::string out;
  for (int i = 0; i < skel.size(); ++i) {
    out += "# " + skel.nodes()[i].name;
    for (int b : node_blanket(skel, i)) out += " " + skel.nodes()[b].name;
    out += "\n";
  }
  return out;
}

std::string nits_text(const Skeleton& skel, const NitLayout& layout) {
  std::string out;
  for (int nit = 0; nit < layout.nb; ++nit) {
    out += "# " + std::to_string(nit) + "\n";
    out += "owner node " + skel.nodes()[layout.owner[nit]].name + "\n";
    out += "blanket nit";
    for (int b : nit_blanket(skel, layout, nit)) out += " " + std::to_string(b);
    out += "\n";
  }
  return out;
}

std::vector<std::string> write_prerun(const Skeleton& skel, const std::string& io_folder) {
  const NitLayout layout = build_layout(skel);
  const std::vector<std::pair<std::string, std::string>> files = {
      {"probsF.txt", uniform_probs(skel, ProbsVariant::FocusFirst)},
      {"probsT.txt", uniform_probs(skel, ProbsVariant::FocusLast)},
      {"blankets.txt", blankets_text(skel)},
      {"nits.txt", nits_text(skel, layout)},
  };
  std::vector<std::string> written;
  for (const auto& [name, body] : files) {
    std::string path = io_folder + "/" + name;
    write_text_file(path, body);
    written.push_back(std::move(path));
  }
  return written;
}

namespace {

// Per-nit tallies of joint mass, split by the nit's own value, for every
// configuration of its blanket nits.
struct NitTally {
  std::vector<int> blanket;            // ascending global nit indices
  std::vector<double> mass0, mass1;    // indexed by blanket configuration
};

std::vector<NitTally> tally_nits(const BayesNet& net, const NitLayout& layout) {
  long long joint_rows = 1;
  for (const auto& node : net.nodes()) {
    joint_rows *= static_cast<long long>(node.states.size());
    if (joint_rows > 1'000'000) {
      throw SemanticError("state space too large to derive multiplexor angles");
    }
  }

  std::vector<NitTally> tallies(layout.nb);
  for (int nit = 0; nit < layout.nb; ++nit) {
    tallies[nit].blanket = nit_blanket(net.skel, layout, nit);
    const std::size_t configs = std::size_t{1} << tallies[nit].blanket.size();
    tallies[nit].mass0.assign(configs, 0.0);
    tallies[nit].mass1.assign(configs, 0.0);
  }

  std::vector<int> state(net.size(), 0);
  std::vector<int> nit_value(layout.nb, 0);
  std::vector<int> radix;
  for (const auto& node : net.nodes()) {
    radix.push_back(static_cast<int>(node.states.size()));
  }
  do {
    Instantiation x;
    x.state = state;
    const double p = joint_prob(net, x);
    if (p > 0.0) {
      for (int node = 0; node < net.size(); ++node) {
        for (int b = 0; b < layout.nit_count[node]; ++b) {
          nit_value[layout.first_nit[node] + b] = (state[node] >> b) & 1;
        }
      }
      for (int nit = 0; nit < layout.nb; ++nit) {
        NitTally& t = tallies[nit];
        std::size_t config = 0;
        for (std::size_t j = 0; j < t.blanket.size(); ++j) {
          config |= static_cast<std::size_t>(nit_value[t.blanket[j]]) << j;
        }
        (nit_value[nit] ? t.mass1 : t.mass0)[config] += p;
      }
    }
  } while (odometer_next(state, radix));
  return tallies;
}

double rotation_angle_for(double mass0, double mass1) {
  const double total = mass0 + mass1;
  if (total <= 0.0) return 0.0;  // unreachable configuration
  const double q = std::min(std::max(mass0 / total, 0.0), 1.0);
  return 2.0 * std::acos(std::sqrt(q)) * kRadToDeg;
}

}  // namespace

std::vector<Gate> v_standin(const BayesNet& net, const NitLayout& layout, int reg) {
  if (reg != 1 && reg != 2) throw SemanticError("register id must be 1 or 2");
  const int offset = (reg - 1) * layout.nb;
  const auto tallies = tally_nits(net, layout);

  std::vector<Gate> gates;
  for (int nit = 0; nit < layout.nb; ++nit) {
    const NitTally& t = tallies[nit];
    std::vector<double> angles(t.mass0.size());
    for (std::size_t cfg = 0; cfg < angles.size(); ++cfg) {
      angles[cfg] = rotation_angle_for(t.mass0[cfg], t.mass1[cfg]);
    }
    if (t.blanket.empty()) {
      gates.push_back(Gate::rot(GateKind::RotY, angles[0], offset + nit));
      continue;
    }
    // Mux bits listed in descending order; the control named j is the j-th
    // smallest blanket nit, matching the configuration index used above.
    std::vector<int> mux_bits;
    for (auto it = t.blanket.rbegin(); it != t.blanket.rend(); ++it) {
      mux_bits.push_back(offset + *it);
    }
    gates.push_back(Gate::multiplexor(offset + nit, mux_bits, std::move(angles)));
  }
  return gates;
}

namespace {

void check_params(const BayesNet& net, const GenParams& params) {
  if (params.probe_bits_a < 1) throw SemanticError("probe bits must be >= 1");
  if (params.pe_steps_c < 1) throw SemanticError("PE steps must be >= 1");
  if (params.max_grover_steps < 1) throw SemanticError("maximum Grover steps must be >= 1");
  if (params.gamma_tol_degs <= 0.0) throw SemanticError("gamma tolerance must be positive");
  if (static_cast<int>(params.start.state.size()) != net.size()) {
    throw SemanticError("starting state does not cover every node");
  }
  for (int i = 0; i < net.size(); ++i) {
    const int s = params.start.state[i];
    if (s < 0 || s >= static_cast<int>(net.nodes()[i].states.size())) {
      throw SemanticError("starting state index out of range for node '" +
                          net.nodes()[i].name + "'");
    }
  }
}

Gate with_probe_control(Gate g, int probe) {
  g.controls.push_back({probe, true});
  std::sort(g.controls.begin(), g.controls.end(),
            [](const Control& a, const Control& b) { return a.bit > b.bit; });
  return g;
}

}  // namespace

TaggedCircuit generate_tagged(const BayesNet& net, const NitLayout& layout,
                              const GenParams& params) {
  check_params(net, params);
  const double p_start = joint_prob(net, params.start);
  if (p_start == 0.0) {
    throw SemanticError("starting state has zero probability; the target is unreachable");
  }
  const double g0 = gamma0_degs(p_start);
  const auto schedule = afga_schedule(g0, params.delta_lambda_degs, params.gamma_tol_degs,
                                      params.max_grover_steps);

  const int nb = layout.nb;
  const int a = params.probe_bits_a;
  const int c = params.pe_steps_c;

  TaggedCircuit out;
  out.circuit.qubit_count = 2 * nb + a * c;
  const auto v_gates = v_standin(net, layout, 2);

  auto emit = [&](Gate g, bool is_v) {
    append_gate(out.circuit, std::move(g));
    out.v_tag.push_back(is_v ? 1 : 0);
  };

  // Register-1 preparation of the starting instantiation.
  for (int node = 0; node < net.size(); ++node) {
    const int s = params.start.state[node];
    for (int b = 0; b < layout.nit_count[node]; ++b) {
      if ((s >> b) & 1) {
        emit(Gate::single(GateKind::SigX, layout.first_nit[node] + b), false);
      }
    }
  }

  for (double gamma : schedule) {
    // Phase estimation: c steps, each with its own block of a probe qubits.
    for (int step = 0; step < c; ++step) {
      const int probe0 = 2 * nb + step * a;
      for (int m = 0; m < a; ++m) {
        emit(Gate::single(GateKind::Had2, probe0 + m), false);
      }
      for (int m = 0; m < a; ++m) {
        const long long reps = 1LL << m;
        if (reps > 1) emit(Gate::loop(reps), false);
        for (const Gate& vg : v_gates) {
          emit(with_probe_control(vg, probe0 + m), true);
        }
        if (reps > 1) emit(Gate::next(), false);
      }
      for (int m = 0; m < a; ++m) {
        emit(Gate::rot(GateKind::RotZ, -180.0 / static_cast<double>(1LL << m), probe0 + m),
             false);
        emit(Gate::single(GateKind::Had2, probe0 + m), false);
      }
    }
    // The two AFGA rotations for this iteration.
    emit(Gate::rot(GateKind::RotY, gamma, 0), false);
    emit(Gate::phase(params.delta_lambda_degs), false);
  }

  renumber_loop_labels(out.circuit);
  return out;
}

Circuit strip_v(const TaggedCircuit& tagged) {
  Circuit out;
  out.qubit_count = tagged.circuit.qubit_count;
  for (std::size_t i = 0; i < tagged.circuit.ops.size(); ++i) {
    if (!tagged.v_tag[i]) out.ops.push_back(tagged.circuit.ops[i]);
  }
  renumber_loop_labels(out);
  return out;
}

GenResult generate_circuit(const BayesNet& net, const NitLayout& layout,
                           const GenParams& params) {
  TaggedCircuit tagged = generate_tagged(net, layout, params);

  GenResult result;
  result.circuit = params.omit_v ? strip_v(tagged) : std::move(tagged.circuit);
  result.derived.p_start = joint_prob(net, params.start);
  result.derived.gamma0_degs = gamma0_degs(result.derived.p_start);
  result.derived.qubit_count = result.circuit.qubit_count;
  result.derived.elementary_op_count = count_elementary(result.circuit);
  result.derived.grover_steps_used = static_cast<int>(
      afga_schedule(result.derived.gamma0_degs, params.delta_lambda_degs,
                    params.gamma_tol_degs, params.max_grover_steps)
          .size());
  return result;
}

LogInfo make_log_info(const std::string& io_folder, const BayesNet& net,
                      const NitLayout& layout, const GenParams& params,
                      const DerivedOutputs& derived) {
  LogInfo info;
  info.io_folder = io_folder;
  for (int i = 0; i < net.size(); ++i) {
    const auto names = state_names(net.skel, layout, i);
    const StateName& sn = names[params.start.state[i]];
    info.start.push_back({net.nodes()[i].name, sn.english, sn.binary, sn.decimal});
  }
  info.probe_bits_a = params.probe_bits_a;
  info.pe_steps_c = params.pe_steps_c;
  info.max_grover_steps = params.max_grover_steps;
  info.gamma_tol_degs = params.gamma_tol_degs;
  info.delta_lambda_degs = params.delta_lambda_degs;
  info.omit_v = params.omit_v;
  info.gamma0_degs = derived.gamma0_degs;
  info.p_start = derived.p_start;
  info.qubit_count = derived.qubit_count;
  info.elementary_op_count = derived.elementary_op_count;
  info.grover_steps_used = derived.grover_steps_used;
  return info;
}

}  // namespace gibbsqc
