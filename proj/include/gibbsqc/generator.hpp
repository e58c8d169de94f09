#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gibbsqc/bayesnet.hpp"
#include "gibbsqc/circuit.hpp"
#include "gibbsqc/nitcodes.hpp"
#include "gibbsqc/text_formats.hpp"

namespace gibbsqc {

struct GenParams {
  int probe_bits_a = 1;       // probe qubits per phase-estimation step, a >= 1
  int pe_steps_c = 1;         // phase-estimation steps, c >= 1
  int max_grover_steps = 1;   // cap on Grover iterations
  double gamma_tol_degs = 1;  // stop once |gamma_j| drops below this, > 0
  double delta_lambda_degs = 0;
  bool omit_v = false;
  Instantiation start;
  std::optional<std::uint64_t> seed;
};

struct DerivedOutputs {
  double gamma0_degs = 0;
  double p_start = 0;
  int qubit_count = 0;  // always 2*nb + a*c
  long long elementary_op_count = 0;
  int grover_steps_used = 0;
};

// (360/pi) * acos(sqrt(p)). Throws SemanticError for p == 0 (the target
// state would be unreachable); requires 0 < p <= 1.
double gamma0_degs(double p_start);

// gamma_0, gamma_0*r, gamma_0*r^2, ... with r = cos^2(delta_lambda/2),
// truncated at the first element below tol and capped at max_steps. Empty
// when gamma_0 < tol. The exact recursion is a pluggable policy; this is the
// default schedule.
std::vector<double> afga_schedule(double gamma0, double delta_lambda_degs,
                                  double gamma_tol_degs, int max_steps);

enum class ProbsVariant {
  FocusFirst,  // "F": focus state varies before the parent states
  FocusLast,   // "T": focus state varies after the parent states
};

// Probabilities-file text assigning 1/N_focus to every conditional entry.
std::string uniform_probs(const Skeleton& skel, ProbsVariant variant);

// blankets.txt body: "# <node> <blanket members in focus order>" per node.
std::string blankets_text(const Skeleton& skel);

// nits.txt body: per nit, "# <nit>", an "owner node" line, a "blanket nit" line.
std::string nits_text(const Skeleton& skel, const NitLayout& layout);

// Writes probsF.txt, probsT.txt, blankets.txt, nits.txt into io_folder.
// Returns the written paths. Needs no probabilities file.
std::vector<std::string> write_prerun(const Skeleton& skel, const std::string& io_folder);

// Structural stand-in for the phase-estimated evolution operator: one
// y-multiplexor per nit (in focus order, LSB first within a node) whose mux
// controls are exactly the nit's blanket, with angle 2*acos(sqrt(q)) for q =
// P(nit = 0 | blanket configuration); unreachable configurations get angle 0.
// A nit with an empty blanket yields a plain ROTY. reg selects the register
// copy the gates act on: 1 -> bits 0..nb-1, 2 -> bits nb..2nb-1.
std::vector<Gate> v_standin(const BayesNet& net, const NitLayout& layout, int reg);

// Full circuit with per-op membership in the stand-in V (used for exact
// omit-V deletion and its tests). Ignores params.omit_v.
struct TaggedCircuit {
  Circuit circuit;
  std::vector<char> v_tag;  // parallel to circuit.ops
};

TaggedCircuit generate_tagged(const BayesNet& net, const NitLayout& layout,
                              const GenParams& params);

// Drops V-tagged ops and renumbers loop labels.
Circuit strip_v(const TaggedCircuit& tagged);

struct GenResult {
  Circuit circuit;
  DerivedOutputs derived;
};

// The one-call entry point honoring params.omit_v. Throws SemanticError when
// the starting state has probability zero or a parameter is out of range.
GenResult generate_circuit(const BayesNet& net, const NitLayout& layout,
                           const GenParams& params);

LogInfo make_log_info(const std::string& io_folder, const BayesNet& net,
                      const NitLayout& layout, const GenParams& params,
                      const DerivedOutputs& derived);

}  // namespace gibbsqc
