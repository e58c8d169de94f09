#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gibbsqc {

enum class GateKind {
  Swap,
  Phas,
  P0Ph,
  P1Ph,
  SigX,
  SigY,
  SigZ,
  Had2,
  RotX,
  RotY,
  RotZ,
  RotN,
  MpY,
  Loop,
  Next,
};

// Four-letter opcode, e.g. "SWAP", "MP_Y".
std::string_view mnemonic(GateKind kind);
std::optional<GateKind> kind_from_mnemonic(std::string_view word);

struct Control {
  int bit = 0;
  bool positive = true;  // true == T, false == F

  bool operator==(const Control&) const = default;
};

// Multiplexor control: classical-select bit plus its integer name. Names run
// k, k-1, ..., 0 left to right; the angle list index is the binary number
// whose bit j is the state of the control named j.
struct MuxControl {
  int bit = 0;
  int name = 0;

  bool operator==(const MuxControl&) const = default;
};

struct Gate {
  GateKind kind = GateKind::SigX;
  std::vector<int> targets;       // SWAP: 2, PHAS/LOOP/NEXT: 0, others: 1
  std::vector<double> angles;     // degrees; ROT*: 1, ROTN: 3, *PH*: 1, MP_Y: 2^k
  std::vector<Control> controls;  // stored in descending bit order
  std::vector<MuxControl> mux;    // MP_Y only; descending bits, names k..0
  int label = -1;                 // LOOP/NEXT; canonical value is the op's line index
  long long reps = 0;             // LOOP

  bool operator==(const Gate&) const = default;

  static Gate swap(int a, int b, std::vector<Control> ctrls = {});
  static Gate phase(double degs, std::vector<Control> ctrls = {});
  // one == false -> P0PH, one == true -> P1PH
  static Gate proj_phase(bool one, double degs, int target, std::vector<Control> ctrls = {});
  // SIGX / SIGY / SIGZ / HAD2
  static Gate single(GateKind kind, int target, std::vector<Control> ctrls = {});
  // ROTX / ROTY / ROTZ
  static Gate rot(GateKind kind, double degs, int target, std::vector<Control> ctrls = {});
  static Gate rot_n(double dx, double dy, double dz, int target, std::vector<Control> ctrls = {});
  // mux_bits in descending order; names assigned k..0; needs 2^mux_bits.size() angles
  static Gate multiplexor(int target, const std::vector<int>& mux_bits,
                          std::vector<double> angles, std::vector<Control> ctrls = {});
  static Gate loop(long long reps, int label = -1);
  static Gate next(int label = -1);
};

struct Circuit {
  int qubit_count = 1;
  std::vector<Gate> ops;  // time grows with index; one op per emitted line

  bool operator==(const Circuit&) const = default;
};

// Appends with eager per-gate validation (bit ranges, duplicate bits, angle
// counts, mux naming). Loop pairing and labels are checked by
// validate_circuit / emission, not here. Throws std::invalid_argument.
void append_gate(Circuit& circ, Gate gate);

// Streaming elementary-operation count: LOOP/NEXT lines count zero, every
// other line counts once per enclosing-loop repetition (reps multiply when
// nested). A multiplexor line counts as one per pass. Throws on unbalanced
// loops.
long long count_elementary(const Circuit& circ);

// All invariant violations, one line each; empty means valid. Checks what
// append_gate checks plus loop pairing and the label == line-index rule.
std::vector<std::string> validate_circuit(const Circuit& circ);

// Rewrites every LOOP label to its own op index and every NEXT label to its
// matching LOOP's. Emission applies the same rule, so a renumbered circuit
// round-trips through the english text unchanged.
void renumber_loop_labels(Circuit& circ);

}  // namespace gibbsqc
