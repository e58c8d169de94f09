#include "gibbsqc/text_formats.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdlib>
#include <stdexcept>

#include "gibbsqc/errors.hpp"

namespace gibbsqc {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : line) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) {
        tokens.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

bool all_digits(const std::string& tok) {
  if (tok.empty()) return false;
  return std::all_of(tok.begin(), tok.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

long long parse_uint(const std::string& tok, const std::string& context) {
  if (!all_digits(tok) || tok.size() > 18) {
    throw ParseError(context + ": '" + tok + "' is not a non-negative integer");
  }
  return std::strtoll(tok.c_str(), nullptr, 10);
}

bool looks_like_real(const std::string& tok) {
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
    std::size_t ed = 0;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i, ++ed;
    if (ed == 0) return false;
  }
  return i == tok.size();
}

double parse_real(const std::string& tok, const std::string& context) {
  if (!looks_like_real(tok)) {
    throw ParseError(context + ": '" + tok + "' is not a decimal number");
  }
  return std::strtod(tok.c_str(), nullptr);
}

std::string controls_clause(const std::vector<Control>& ctrls) {
  std::string out;
  for (const auto& c : ctrls) {
    out += " " + std::to_string(c.bit) + (c.positive ? "T" : "F");
  }
  return out;
}

std::string english_line(const Gate& g, std::vector<int>& open_labels, int line_no) {
  switch (g.kind) {
    case GateKind::Loop:
      open_labels.push_back(line_no);
      return "LOOP " + std::to_string(line_no) + " REPS:" + std::to_string(g.reps);
    case GateKind::Next: {
      if (open_labels.empty()) {
        throw std::invalid_argument("NEXT without a matching LOOP");
      }
      int label = open_labels.back();
      open_labels.pop_back();
      return "NEXT " + std::to_string(label);
    }
    case GateKind::Swap:
      return "SWAP " + std::to_string(g.targets[0]) + " " + std::to_string(g.targets[1]) +
             (g.controls.empty() ? "" : " IF" + controls_clause(g.controls));
    case GateKind::Phas:
      return "PHAS " + format_real(g.angles[0]) +
             (g.controls.empty() ? "" : " IF" + controls_clause(g.controls));
    case GateKind::P0Ph:
    case GateKind::P1Ph:
      return std::string(mnemonic(g.kind)) + " " + format_real(g.angles[0]) + " AT " +
             std::to_string(g.targets[0]) +
             (g.controls.empty() ? "" : " IF" + controls_clause(g.controls));
    case GateKind::SigX:
    case GateKind::SigY:
    case GateKind::SigZ:
    case GateKind::Had2:
      return std::string(mnemonic(g.kind)) + " AT " + std::to_string(g.targets[0]) +
             (g.controls.empty() ? "" : " IF" + controls_clause(g.controls));
    case GateKind::RotX:
    case GateKind::RotY:
    case GateKind::RotZ:
      return std::string(mnemonic(g.kind)) + " " + format_real(g.angles[0]) + " AT " +
             std::to_string(g.targets[0]) +
             (g.controls.empty() ? "" : " IF" + controls_clause(g.controls));
    case GateKind::RotN:
      return "ROTN " + format_real(g.angles[0]) + " " + format_real(g.angles[1]) + " " +
             format_real(g.angles[2]) + " AT " + std::to_string(g.targets[0]) +
             (g.controls.empty() ? "" : " IF" + controls_clause(g.controls));
    case GateKind::MpY: {
      std::string out = "MP_Y AT " + std::to_string(g.targets[0]) + " IF";
      for (const auto& m : g.mux) {
        out += " " + std::to_string(m.bit) + "(" + std::to_string(m.name);
      }
      out += controls_clause(g.controls);
      out += " BY";
      for (double a : g.angles) out += " " + format_real(a);
      return out;
    }
  }
  throw std::logic_error("unhandled gate kind");
}

}  // namespace

std::string emit_english(const Circuit& circ) {
  std::string out;
  std::vector<int> open_labels;
  for (std::size_t i = 0; i < circ.ops.size(); ++i) {
    out += english_line(circ.ops[i], open_labels, static_cast<int>(i));
    out += "\n";
  }
  if (!open_labels.empty()) {
    throw std::invalid_argument("LOOP without a matching NEXT");
  }
  return out;
}

namespace {

// LOOP/NEXT header shared by both languages. tokens[0] is "LOOP" or "NEXT".
// Accepts "REPS:2", "REPS: 2" and "REPS:" "2".
std::pair<int, long long> parse_loop_header(const std::vector<std::string>& tokens,
                                            const std::string& context) {
  const bool is_loop = tokens[0] == "LOOP";
  if (tokens.size() < 2) throw ParseError(context + ": missing loop label");
  int label = static_cast<int>(parse_uint(tokens[1], context));
  if (!is_loop) {
    if (tokens.size() != 2) throw ParseError(context + ": NEXT takes only a label");
    return {label, 0};
  }
  std::string rest;
  for (std::size_t i = 2; i < tokens.size(); ++i) rest += tokens[i];
  if (rest.rfind("REPS:", 0) != 0) {
    throw ParseError(context + ": expected REPS:<count> after the loop label");
  }
  long long reps = parse_uint(rest.substr(5), context);
  if (reps < 1) throw ParseError(context + ": repetition count must be >= 1");
  return {label, reps};
}

bool parse_control_token(const std::string& tok, Control& out) {
  if (tok.size() < 2) return false;
  char last = tok.back();
  if (last != 'T' && last != 'F') return false;
  std::string bits = tok.substr(0, tok.size() - 1);
  if (!all_digits(bits) || bits.size() > 9) return false;
  out.bit = static_cast<int>(std::strtoll(bits.c_str(), nullptr, 10));
  out.positive = (last == 'T');
  return true;
}

bool parse_mux_token(const std::string& tok, MuxControl& out) {
  auto paren = tok.find('(');
  if (paren == std::string::npos || paren == 0 || paren + 1 >= tok.size()) return false;
  std::string bits = tok.substr(0, paren);
  std::string name = tok.substr(paren + 1);
  if (!all_digits(bits) || !all_digits(name) || bits.size() > 9 || name.size() > 9) {
    return false;
  }
  out.bit = static_cast<int>(std::strtoll(bits.c_str(), nullptr, 10));
  out.name = static_cast<int>(std::strtoll(name.c_str(), nullptr, 10));
  return true;
}

Gate parse_english_gate(const std::vector<std::string>& tokens, int line_no,
                        const std::string& context) {
  auto kind = kind_from_mnemonic(tokens[0]);
  if (!kind) {
    throw ParseError(context + ": unknown operation '" + tokens[0] + "'");
  }

  if (*kind == GateKind::Loop || *kind == GateKind::Next) {
    auto [label, reps] = parse_loop_header(tokens, context);
    if (*kind == GateKind::Loop) {
      if (label != line_no) {
        throw ParseError(context + ": LOOP label " + std::to_string(label) +
                         " must equal its line number " + std::to_string(line_no));
      }
      return Gate::loop(reps, label);
    }
    return Gate::next(label);
  }

  // Split off the control clause ("IF ...") and, for MP_Y, the angle clause
  // ("BY ...").
  std::size_t if_pos = tokens.size();
  std::size_t by_pos = tokens.size();
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i] == "IF" && if_pos == tokens.size()) if_pos = i;
    if (tokens[i] == "BY" && by_pos == tokens.size()) by_pos = i;
  }
  if (*kind != GateKind::MpY && by_pos != tokens.size()) {
    throw ParseError(context + ": unexpected BY clause");
  }

  std::vector<Control> controls;
  std::vector<MuxControl> mux;
  if (if_pos != tokens.size()) {
    const std::size_t end = std::min(by_pos, tokens.size());
    if (if_pos + 1 >= end) throw ParseError(context + ": empty IF clause");
    for (std::size_t i = if_pos + 1; i < end; ++i) {
      Control c;
      MuxControl m;
      if (parse_control_token(tokens[i], c)) {
        controls.push_back(c);
      } else if (parse_mux_token(tokens[i], m)) {
        if (*kind != GateKind::MpY) {
          throw ParseError(context + ": multiplexor control '" + tokens[i] +
                           "' on a non-multiplexor operation");
        }
        mux.push_back(m);
      } else {
        throw ParseError(context + ": bad control token '" + tokens[i] + "'");
      }
    }
  }

  auto head_end = std::min(if_pos, by_pos);
  std::vector<std::string> head(tokens.begin() + 1, tokens.begin() + head_end);

  auto expect_head = [&](std::size_t n) {
    if (head.size() != n) {
      throw ParseError(context + ": malformed " + tokens[0] + " line");
    }
  };
  auto bit_of = [&](const std::string& tok) {
    return static_cast<int>(parse_uint(tok, context));
  };

  Gate g;
  switch (*kind) {
    case GateKind::Swap:
      expect_head(2);
      g = Gate::swap(bit_of(head[0]), bit_of(head[1]), std::move(controls));
      break;
    case GateKind::Phas:
      expect_head(1);
      g = Gate::phase(parse_real(head[0], context), std::move(controls));
      break;
    case GateKind::P0Ph:
    case GateKind::P1Ph:
      expect_head(3);
      if (head[1] != "AT") throw ParseError(context + ": expected AT before the target");
      g = Gate::proj_phase(*kind == GateKind::P1Ph, parse_real(head[0], context),
                           bit_of(head[2]), std::move(controls));
      break;
    case GateKind::SigX:
    case GateKind::SigY:
    case GateKind::SigZ:
    case GateKind::Had2:
      expect_head(2);
      if (head[0] != "AT") throw ParseError(context + ": expected AT before the target");
      g = Gate::single(*kind, bit_of(head[1]), std::move(controls));
      break;
    case GateKind::RotX:
    case GateKind::RotY:
    case GateKind::RotZ:
      expect_head(3);
      if (head[1] != "AT") throw ParseError(context + ": expected AT before the target");
      g = Gate::rot(*kind, parse_real(head[0], context), bit_of(head[2]),
                    std::move(controls));
      break;
    case GateKind::RotN:
      expect_head(5);
      if (head[3] != "AT") throw ParseError(context + ": expected AT before the target");
      g = Gate::rot_n(parse_real(head[0], context), parse_real(head[1], context),
                      parse_real(head[2], context), bit_of(head[4]), std::move(controls));
      break;
    case GateKind::MpY: {
      expect_head(2);
      if (head[0] != "AT") throw ParseError(context + ": expected AT after MP_Y");
      if (by_pos == tokens.size()) {
        throw ParseError(context + ": MP_Y needs a BY clause with its angles");
      }
      if (if_pos != tokens.size() && by_pos < if_pos) {
        throw ParseError(context + ": MP_Y angle clause must follow the IF clause");
      }
      std::vector<double> angles;
      for (std::size_t i = by_pos + 1; i < tokens.size(); ++i) {
        angles.push_back(parse_real(tokens[i], context));
      }
      g.kind = GateKind::MpY;
      g.targets = {bit_of(head[1])};
      g.angles = std::move(angles);
      g.controls = std::move(controls);
      std::sort(g.controls.begin(), g.controls.end(),
                [](const Control& a, const Control& b) { return a.bit > b.bit; });
      g.mux = std::move(mux);
      const int k = static_cast<int>(g.mux.size());
      for (int i = 0; i < k; ++i) {
        if (g.mux[i].name != k - 1 - i) {
          throw ParseError(context +
                           ": multiplexor control names must run k..0 left to right");
        }
      }
      break;
    }
    default:
      throw std::logic_error("unhandled kind");
  }
  return g;
}

}  // namespace

Circuit parse_english(const std::string& text, int qubit_count) {
  auto lines = split_lines(text);
  std::vector<Gate> gates;
  std::vector<std::pair<int, int>> open_loops;  // (line, label)
  int max_bit = -1;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string context = "english line " + std::to_string(i);
    auto tokens = split_tokens(lines[i]);
    if (tokens.empty()) {
      throw ParseError(context + ": blank line");
    }
    Gate g = parse_english_gate(tokens, static_cast<int>(i), context);
    if (g.kind == GateKind::Loop) {
      open_loops.emplace_back(static_cast<int>(i), g.label);
    } else if (g.kind == GateKind::Next) {
      if (open_loops.empty()) {
        throw ParseError(context + ": NEXT without a matching LOOP");
      }
      if (g.label != open_loops.back().second) {
        throw ParseError(context + ": NEXT label " + std::to_string(g.label) +
                         " does not match open LOOP label " +
                         std::to_string(open_loops.back().second));
      }
      open_loops.pop_back();
    }
    for (int t : g.targets) max_bit = std::max(max_bit, t);
    for (const auto& c : g.controls) max_bit = std::max(max_bit, c.bit);
    for (const auto& m : g.mux) max_bit = std::max(max_bit, m.bit);
    gates.push_back(std::move(g));
  }
  if (!open_loops.empty()) {
    throw ParseError("english line " + std::to_string(open_loops.back().first) +
                     ": LOOP is never closed by NEXT");
  }

  Circuit circ;
  circ.qubit_count = qubit_count >= 0 ? qubit_count : std::max(max_bit + 1, 1);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    try {
      append_gate(circ, std::move(gates[i]));
    } catch (const std::invalid_argument& e) {
      throw ParseError("english line " + std::to_string(i) + ": " + e.what());
    }
  }
  return circ;
}

namespace {

constexpr int col_of_bit(int bit, int nq) { return 4 * (nq - 1 - bit); }  // 0-based

struct PicToken {
  int bit;
  std::string text;
};

// Active symbols for one gate, token text by bit. PHAS anchors its symbol on
// the lowest control-free qubit.
std::vector<PicToken> picture_tokens(const Gate& g, int nq) {
  std::vector<PicToken> toks;
  for (const auto& c : g.controls) {
    toks.push_back({c.bit, c.positive ? "@" : "0"});
  }
  switch (g.kind) {
    case GateKind::Swap:
      toks.push_back({g.targets[0], "<"});
      toks.push_back({g.targets[1], ">"});
      break;
    case GateKind::Phas: {
      int anchor = -1;
      for (int b = 0; b < nq && anchor < 0; ++b) {
        bool held = false;
        for (const auto& c : g.controls) held = held || c.bit == b;
        if (!held) anchor = b;
      }
      if (anchor < 0) {
        throw std::invalid_argument("PHAS leaves no control-free qubit for Ph");
      }
      toks.push_back({anchor, "Ph"});
      break;
    }
    case GateKind::P0Ph:
      toks.push_back({g.targets[0], "0P"});
      break;
    case GateKind::P1Ph:
      toks.push_back({g.targets[0], "@P"});
      break;
    case GateKind::SigX:
      toks.push_back({g.targets[0], "X"});
      break;
    case GateKind::SigY:
      toks.push_back({g.targets[0], "Y"});
      break;
    case GateKind::SigZ:
      toks.push_back({g.targets[0], "Z"});
      break;
    case GateKind::Had2:
      toks.push_back({g.targets[0], "H"});
      break;
    case GateKind::RotX:
      toks.push_back({g.targets[0], "Rx"});
      break;
    case GateKind::RotY:
      toks.push_back({g.targets[0], "Ry"});
      break;
    case GateKind::RotZ:
      toks.push_back({g.targets[0], "Rz"});
      break;
    case GateKind::RotN:
      toks.push_back({g.targets[0], "R"});
      break;
    case GateKind::MpY:
      toks.push_back({g.targets[0], "Ry"});
      for (const auto& m : g.mux) {
        toks.push_back({m.bit, "(" + std::to_string(m.name)});
      }
      break;
    case GateKind::Loop:
    case GateKind::Next:
      break;
  }
  return toks;
}

std::string picture_line(const Gate& g, int nq) {
  const int width = 4 * (nq - 1) + 1;
  std::string buf(width, ' ');
  for (int b = 0; b < nq; ++b) buf[col_of_bit(b, nq)] = '|';

  auto toks = picture_tokens(g, nq);
  int lo_bit = nq, hi_bit = -1;
  for (const auto& t : toks) {
    lo_bit = std::min(lo_bit, t.bit);
    hi_bit = std::max(hi_bit, t.bit);
  }
  if (hi_bit >= 0) {
    // Wire fill between the leftmost and rightmost active bits; inactive
    // qubits inside the span become crossings.
    for (int col = col_of_bit(hi_bit, nq); col <= col_of_bit(lo_bit, nq); ++col) {
      if (col % 4 == 0) {
        const int bit = nq - 1 - col / 4;
        bool active = false;
        for (const auto& t : toks) active = active || t.bit == bit;
        if (!active) buf[col] = '+';
      } else {
        buf[col] = '-';
      }
    }
  }
  for (const auto& t : toks) {
    // Multi-char tokens start at their qubit column; at bit 0 they are
    // right-aligned to end at the final column instead. On a one-qubit grid
    // there is no room to the left, so the token overhangs to the right.
    int start = col_of_bit(t.bit, nq);
    if (t.bit == 0 && t.text.size() > 1) {
      start = std::max(width - static_cast<int>(t.text.size()), 0);
    }
    if (start + t.text.size() > buf.size()) buf.resize(start + t.text.size(), ' ');
    for (std::size_t k = 0; k < t.text.size(); ++k) buf[start + k] = t.text[k];
  }
  return buf;
}

}  // namespace

std::string emit_picture(const Circuit& circ) {
  std::string out;
  std::vector<int> open_labels;
  for (std::size_t i = 0; i < circ.ops.size(); ++i) {
    const Gate& g = circ.ops[i];
    if (g.kind == GateKind::Loop || g.kind == GateKind::Next) {
      out += english_line(g, open_labels, static_cast<int>(i));
    } else {
      out += picture_line(g, circ.qubit_count);
    }
    out += "\n";
  }
  if (!open_labels.empty()) {
    throw std::invalid_argument("LOOP without a matching NEXT");
  }
  return out;
}

GateShape shape_of(const Gate& gate) {
  GateShape s;
  s.kind = gate.kind;
  s.targets = gate.targets;
  s.controls = gate.controls;
  std::sort(s.controls.begin(), s.controls.end(),
            [](const Control& a, const Control& b) { return a.bit > b.bit; });
  s.mux = gate.mux;
  s.label = gate.label;
  s.reps = gate.reps;
  return s;
}

namespace {

bool is_loop_text_line(const std::string& line) {
  return line.rfind("LOOP", 0) == 0 || line.rfind("NEXT", 0) == 0;
}

std::string rstrip(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

struct ScannedLine {
  std::vector<PicToken> tokens;  // anchored symbols, file order (left to right)
};

const char* kTwoCharTokens[] = {"Rx", "Ry", "Rz", "Ph", "0P", "OP", "@P"};

bool is_two_char_token(const std::string& s) {
  for (const char* t : kTwoCharTokens) {
    if (s == t) return true;
  }
  return false;
}

bool is_single_symbol(char c) {
  return c == '@' || c == '0' || c == '<' || c == '>' || c == 'X' || c == 'Y' ||
         c == 'Z' || c == 'H' || c == 'R';
}

ScannedLine scan_picture_line(const std::string& line, int nq, const std::string& context) {
  const int width = 4 * (nq - 1) + 1;
  ScannedLine out;
  const int n = static_cast<int>(line.size());
  int i = 0;
  auto is_qubit_col = [&](int col) { return col % 4 == 0 && col / 4 < nq; };
  auto bit_at = [&](int col) { return nq - 1 - col / 4; };

  while (i < n) {
    const char ch = line[i];
    if (ch == ' ' || ch == '-') {
      if (is_qubit_col(i)) {
        throw ParseError(context + ": qubit column " + std::to_string(i + 1) +
                         " holds filler '" + std::string(1, ch) + "'");
      }
      ++i;
      continue;
    }
    if (ch == '|' || ch == '+') {
      if (!is_qubit_col(i)) {
        throw ParseError(context + ": wordline symbol at non-qubit column " +
                         std::to_string(i + 1));
      }
      ++i;
      continue;
    }

    // Token start. Longest match first.
    std::string tok;
    if (ch == '(') {
      int j = i + 1;
      while (j < n && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j == i + 1) {
        throw ParseError(context + ": '(' without a multiplexor control name");
      }
      tok = line.substr(i, j - i);
    } else if (i + 1 < n && is_two_char_token(line.substr(i, 2))) {
      tok = line.substr(i, 2);
    } else if (is_single_symbol(ch)) {
      tok = std::string(1, ch);
    } else {
      throw ParseError(context + ": unknown symbol '" + std::string(1, ch) +
                       "' at column " + std::to_string(i + 1));
    }

    int bit;
    if (is_qubit_col(i)) {
      bit = bit_at(i);
    } else if (i + static_cast<int>(tok.size()) == width) {
      bit = 0;  // right-aligned token ending at qubit 0's column
    } else {
      throw ParseError(context + ": symbol '" + tok + "' at non-qubit column " +
                       std::to_string(i + 1));
    }
    out.tokens.push_back({bit, tok});
    i += static_cast<int>(tok.size());
  }
  return out;
}

GateShape shape_from_tokens(const ScannedLine& scanned, const std::string& context) {
  GateShape s;
  std::vector<int> swap_lt, swap_gt;
  std::vector<std::pair<int, std::string>> op_tokens;  // (bit, token)

  for (const auto& t : scanned.tokens) {
    if (t.text == "@") {
      s.controls.push_back({t.bit, true});
    } else if (t.text == "0") {
      s.controls.push_back({t.bit, false});
    } else if (t.text == "<") {
      swap_lt.push_back(t.bit);
    } else if (t.text == ">") {
      swap_gt.push_back(t.bit);
    } else if (t.text[0] == '(') {
      s.mux.push_back({t.bit, static_cast<int>(
                                  std::strtoll(t.text.c_str() + 1, nullptr, 10))});
    } else {
      op_tokens.emplace_back(t.bit, t.text);
    }
  }
  std::sort(s.controls.begin(), s.controls.end(),
            [](const Control& a, const Control& b) { return a.bit > b.bit; });

  if (!swap_lt.empty() || !swap_gt.empty()) {
    if (swap_lt.size() != 1 || swap_gt.size() != 1 || !op_tokens.empty() ||
        !s.mux.empty()) {
      throw ParseError(context + ": malformed swap line");
    }
    s.kind = GateKind::Swap;
    s.targets = {swap_lt[0], swap_gt[0]};
    return s;
  }
  if (op_tokens.empty()) {
    throw ParseError(context + ": no operation on this line");
  }
  if (op_tokens.size() > 1) {
    throw ParseError(context + ": more than one operation symbol on this line");
  }
  const auto& [bit, tok] = op_tokens.front();
  if (tok == "Ph") {
    s.kind = GateKind::Phas;  // the anchor bit is presentation only
  } else if (tok == "0P" || tok == "OP") {
    s.kind = GateKind::P0Ph;
    s.targets = {bit};
  } else if (tok == "@P") {
    s.kind = GateKind::P1Ph;
    s.targets = {bit};
  } else if (tok == "X" || tok == "Y" || tok == "Z" || tok == "H") {
    s.kind = tok == "X"   ? GateKind::SigX
             : tok == "Y" ? GateKind::SigY
             : tok == "Z" ? GateKind::SigZ
                          : GateKind::Had2;
    s.targets = {bit};
  } else if (tok == "Rx" || tok == "Ry" || tok == "Rz" || tok == "R") {
    if (!s.mux.empty()) {
      if (tok != "Ry") {
        throw ParseError(context + ": multiplexor controls on a non-Ry rotation");
      }
      s.kind = GateKind::MpY;
    } else {
      s.kind = tok == "Rx"   ? GateKind::RotX
               : tok == "Ry" ? GateKind::RotY
               : tok == "Rz" ? GateKind::RotZ
                             : GateKind::RotN;
    }
    s.targets = {bit};
  } else {
    throw ParseError(context + ": unknown operation token '" + tok + "'");
  }
  if (!s.mux.empty() && s.kind != GateKind::MpY) {
    throw ParseError(context + ": multiplexor controls without a multiplexor");
  }
  if (s.kind == GateKind::MpY) {
    const int k = static_cast<int>(s.mux.size());
    for (int i = 0; i < k; ++i) {
      if (s.mux[i].name != k - 1 - i) {
        throw ParseError(context +
                         ": multiplexor control names must run k..0 left to right");
      }
    }
  }
  return s;
}

}  // namespace

std::vector<GateShape> parse_picture(const std::string& text) {
  auto lines = split_lines(text);
  // Infer the qubit count from the widest gate line; every gate line is at
  // least 4*(Nq-1)+1 columns and sits on fours.
  int width = 0;
  for (auto& raw : lines) {
    if (is_loop_text_line(raw)) continue;
    width = std::max(width, static_cast<int>(rstrip(raw).size()));
  }
  int nq = width == 0 ? 1 : (width - 1) / 4 + 1;

  std::vector<GateShape> shapes;
  std::vector<std::pair<int, int>> open_loops;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string context = "picture line " + std::to_string(i);
    const std::string line = rstrip(lines[i]);
    if (is_loop_text_line(line)) {
      auto tokens = split_tokens(line);
      auto [label, reps] = parse_loop_header(tokens, context);
      GateShape s;
      if (tokens[0] == "LOOP") {
        if (label != static_cast<int>(i)) {
          throw ParseError(context + ": LOOP label " + std::to_string(label) +
                           " must equal its line number " + std::to_string(i));
        }
        s.kind = GateKind::Loop;
        s.label = label;
        s.reps = reps;
        open_loops.emplace_back(static_cast<int>(i), label);
      } else {
        if (open_loops.empty()) {
          throw ParseError(context + ": NEXT without a matching LOOP");
        }
        if (label != open_loops.back().second) {
          throw ParseError(context + ": NEXT label " + std::to_string(label) +
                           " does not match open LOOP label " +
                           std::to_string(open_loops.back().second));
        }
        open_loops.pop_back();
        s.kind = GateKind::Next;
        s.label = label;
      }
      shapes.push_back(std::move(s));
      continue;
    }
    auto scanned = scan_picture_line(line, nq, context);
    shapes.push_back(shape_from_tokens(scanned, context));
  }
  if (!open_loops.empty()) {
    throw ParseError("picture line " + std::to_string(open_loops.back().first) +
                     ": LOOP is never closed by NEXT");
  }
  return shapes;
}

namespace {

std::string describe(const GateShape& s) {
  std::string out{mnemonic(s.kind)};
  for (int t : s.targets) out += " " + std::to_string(t);
  if (!s.controls.empty()) {
    out += " IF";
    for (const auto& c : s.controls) {
      out += " " + std::to_string(c.bit) + (c.positive ? "T" : "F");
    }
  }
  for (const auto& m : s.mux) {
    out += " " + std::to_string(m.bit) + "(" + std::to_string(m.name);
  }
  if (s.kind == GateKind::Loop) out += " REPS:" + std::to_string(s.reps);
  if (s.kind == GateKind::Loop || s.kind == GateKind::Next) {
    out += " label " + std::to_string(s.label);
  }
  return out;
}

}  // namespace

std::vector<std::string> check_correspondence(const std::string& english_text,
                                              const std::string& picture_text) {
  std::vector<std::string> report;

  Circuit eng;
  try {
    eng = parse_english(english_text, -1);
  } catch (const ParseError& e) {
    report.push_back(std::string("english file: ") + e.what());
  }
  std::vector<GateShape> pic;
  try {
    pic = parse_picture(picture_text);
  } catch (const ParseError& e) {
    report.push_back(std::string("picture file: ") + e.what());
  }
  if (!report.empty()) return report;

  if (eng.ops.size() != pic.size()) {
    report.push_back("line counts differ: english has " + std::to_string(eng.ops.size()) +
                     ", picture has " + std::to_string(pic.size()));
  }
  const std::size_t n = std::min(eng.ops.size(), pic.size());
  for (std::size_t i = 0; i < n; ++i) {
    GateShape e = shape_of(eng.ops[i]);
    if (!(e == pic[i])) {
      report.push_back("line " + std::to_string(i) + ": english '" + describe(e) +
                       "' vs picture '" + describe(pic[i]) + "'");
    }
  }
  return report;
}

std::string emit_log(const LogInfo& info) {
  std::string out;
  out += "I/O folder: " + info.io_folder + "\n";
  for (const auto& entry : info.start) {
    out += "starting state: node " + entry.node + " = " + entry.english + " (binary " +
           (entry.binary.empty() ? "-" : entry.binary) + ", decimal " +
           std::to_string(entry.decimal) + ")\n";
  }
  out += "number of probe bits per PE step (a): " + std::to_string(info.probe_bits_a) + "\n";
  out += "number of phase estimation steps (c): " + std::to_string(info.pe_steps_c) + "\n";
  out += "maximum number of Grover steps: " + std::to_string(info.max_grover_steps) + "\n";
  out += "gamma tolerance (degs): " + format_real(info.gamma_tol_degs) + "\n";
  out += "delta lambda (degs): " + format_real(info.delta_lambda_degs) + "\n";
  out += std::string("omit V gates: ") + (info.omit_v ? "ON" : "OFF") + "\n";
  out += "starting gamma (degs): " + format_real(info.gamma0_degs) + "\n";
  out += "probability of starting state: " + format_real(info.p_start) + "\n";
  out += "number of qubits: " + std::to_string(info.qubit_count) + "\n";
  out += "number of elementary operations: " + std::to_string(info.elementary_op_count) +
         "\n";
  out += "Grover steps used: " + std::to_string(info.grover_steps_used) + "\n";
  return out;
}

}  // namespace gibbsqc
