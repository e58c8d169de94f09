#pragma once

#include <string>
#include <vector>

#include "gibbsqc/circuit.hpp"
#include "gibbsqc/realfmt.hpp"

namespace gibbsqc {

// One line per op, canonical single-space tokens, LF terminated.
// Loop labels are recomputed from line numbers at emission.
std::string emit_english(const Circuit& circ);

// Inverse of emit_english. Accepts arbitrary whitespace runs and "REPS: N".
// qubit_count < 0 infers max referenced bit + 1. Loop labels must equal
// their 0-based line numbers. Throws ParseError.
Circuit parse_english(const std::string& text, int qubit_count = -1);

// ASCII picture, line-for-line parallel to emit_english. Qubit alpha sits at
// 1-indexed column 4*(Nq-1-alpha)+1; the rightmost qubit is 0.
std::string emit_picture(const Circuit& circ);

// What a picture line can recover: everything but the angles.
struct GateShape {
  GateKind kind = GateKind::SigX;
  std::vector<int> targets;
  std::vector<Control> controls;
  std::vector<MuxControl> mux;
  int label = -1;
  long long reps = 0;

  bool operator==(const GateShape&) const = default;
};

GateShape shape_of(const Gate& gate);

// Inverse of emit_picture up to angle erasure. Throws ParseError.
std::vector<GateShape> parse_picture(const std::string& text);

// Line counts must match and every line pair must agree on kind, targets,
// controls, mux controls and loop header. Empty report means consistent.
std::vector<std::string> check_correspondence(const std::string& english_text,
                                              const std::string& picture_text);

// Everything the log file records about one generation run.
struct LogInfo {
  std::string io_folder;
  // per node: name, english state name, binary name, decimal name
  struct StartEntry {
    std::string node;
    std::string english;
    std::string binary;
    int decimal = 0;
  };
  std::vector<StartEntry> start;
  int probe_bits_a = 0;
  int pe_steps_c = 0;
  int max_grover_steps = 0;
  double gamma_tol_degs = 0.0;
  double delta_lambda_degs = 0.0;
  bool omit_v = false;
  double gamma0_degs = 0.0;
  double p_start = 0.0;
  int qubit_count = 0;
  long long elementary_op_count = 0;
  int grover_steps_used = 0;
};

std::string emit_log(const LogInfo& info);

}  // namespace gibbsqc
