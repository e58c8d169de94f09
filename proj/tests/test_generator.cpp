#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "gibbsqc/generator.hpp"
#include "gibbsqc/oracle.hpp"
#include "helpers.hpp"

using namespace gibbsqc;
using testutil::three_nodes_net;
using testutil::three_nodes_skeleton;

TEST_CASE("gamma0 formula") {
  CHECK(std::abs(gamma0_degs(0.25) - 120.0) <= 1e-9);
  CHECK(gamma0_degs(1.0) == 0.0);
  CHECK(std::abs(gamma0_degs(0.5) - 90.0) <= 1e-9);
  CHECK_THROWS_AS(gamma0_degs(0.0), SemanticError);
  CHECK_THROWS_AS(gamma0_degs(1.5), SemanticError);
  CHECK_THROWS_AS(gamma0_degs(-0.1), SemanticError);

  // Monotone decreasing in the probability, 180 -> 0 across (0,1].
  double prev = 180.0;
  for (int i = 1; i <= 200; ++i) {
    double g = gamma0_degs(i / 200.0);
    CHECK(g < prev);
    CHECK(g >= 0.0);
    prev = g;
  }
}

TEST_CASE("afga_schedule truncates at the tolerance or the cap") {
  CHECK(afga_schedule(0.5, 10.0, 1.0, 100).empty());  // gamma0 below tol

  auto capped = afga_schedule(120.0, 10.0, 1.0, 1);
  REQUIRE(capped.size() == 1);
  CHECK(capped[0] == 120.0);

  auto sched = afga_schedule(120.0, 30.0, 1.0, 1000);
  REQUIRE_FALSE(sched.empty());
  CHECK(sched.front() == 120.0);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    CHECK(sched[i] >= 1.0);
    if (i > 0) CHECK(sched[i] < sched[i - 1]);
  }

  // A zero step angle cannot decay; the cap still terminates it.
  CHECK(afga_schedule(120.0, 0.0, 1.0, 25).size() == 25);

  CHECK_THROWS_AS(afga_schedule(120.0, 10.0, 0.0, 10), SemanticError);
  CHECK_THROWS_AS(afga_schedule(120.0, 10.0, 1.0, 0), SemanticError);
}

TEST_CASE("uniform templates cover every row at 1/N") {
  Skeleton skel = three_nodes_skeleton();
  const std::string f_text = uniform_probs(skel, ProbsVariant::FocusFirst);
  const std::string t_text = uniform_probs(skel, ProbsVariant::FocusLast);

  auto f_cpts = parse_probs(f_text, skel);
  auto t_cpts = parse_probs(t_text, skel);
  for (int i = 0; i < skel.size(); ++i) {
    CHECK(f_cpts[i].rows == t_cpts[i].rows);  // same content, different row order
  }
  CHECK(f_cpts[0].rows.size() == 3);
  CHECK(f_cpts[0].lookup({0}) == 1.0 / 3.0);
  CHECK(f_cpts[1].rows.size() == 12);
  CHECK(f_cpts[1].lookup({0, 2, 1}) == 0.5);

  // F varies the focus state fastest; T varies it slowest.
  auto f_lines = [&] {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : f_text) {
      if (ch == '\n') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    return out;
  }();
  CHECK(f_lines[4] == "# B");
  CHECK(f_lines[5].rfind("b1 ", 0) == 0);
  CHECK(f_lines[6].rfind("b2 ", 0) == 0);
  std::string t_b_first_two[2];
  {
    int row = 0;
    bool in_b = false;
    for (std::size_t p = 0, ln = 0; p < t_text.size(); ++ln) {
      auto nl = t_text.find('\n', p);
      std::string line = t_text.substr(p, nl - p);
      if (line == "# B") {
        in_b = true;
      } else if (in_b && row < 2) {
        t_b_first_two[row++] = line;
      }
      p = nl + 1;
      if (row == 2) break;
    }
  }
  CHECK(t_b_first_two[0].rfind("b1 ", 0) == 0);
  CHECK(t_b_first_two[1].rfind("b1 ", 0) == 0);

  // Both parse as valid (normalized) probability files.
  CHECK(validate_net(build_net(skel, f_cpts)).empty());
  CHECK(validate_net(build_net(skel, t_cpts)).empty());

  Skeleton trivial = Skeleton::build({{"X", {}}}, {{"X", {"s0"}}});
  CHECK(uniform_probs(trivial, ProbsVariant::FocusFirst) == "# X\ns0 1.0\n");
}

TEST_CASE("uniform templates stay normalized on random skeletons") {
  std::mt19937_64 rng(7501);
  for (int trial = 0; trial < 40; ++trial) {
    BayesNet net = testutil::random_net(rng);
    for (auto variant : {ProbsVariant::FocusFirst, ProbsVariant::FocusLast}) {
      auto cpts = parse_probs(uniform_probs(net.skel, variant), net.skel);
      CHECK(validate_net(build_net(net.skel, cpts)).empty());
    }
  }
}

TEST_CASE("blankets file lists each node's blanket in focus order") {
  CHECK(blankets_text(three_nodes_skeleton()) == "# A B C\n# B A C\n# C A B\n");

  Skeleton chain = Skeleton::build(parse_parents("# A\n# B A\n# C B"),
                                   parse_states("# A a1 a2\n# B b1 b2\n# C c1 c2"));
  CHECK(blankets_text(chain) == "# A B\n# B A C\n# C B\n");

  Skeleton isolated = Skeleton::build(parse_parents("# X"), parse_states("# X x0 x1"));
  CHECK(blankets_text(isolated) == "# X\n");
}

TEST_CASE("nits file names owners and nit blankets") {
  Skeleton skel = three_nodes_skeleton();
  CHECK(nits_text(skel, build_layout(skel)) ==
        "# 0\nowner node A\nblanket nit 1 2 3\n"
        "# 1\nowner node A\nblanket nit 0 2 3\n"
        "# 2\nowner node B\nblanket nit 0 1 3\n"
        "# 3\nowner node C\nblanket nit 0 1 2\n");

  Skeleton isolated = Skeleton::build(parse_parents("# X"), parse_states("# X x0 x1"));
  CHECK(nits_text(isolated, build_layout(isolated)) ==
        "# 0\nowner node X\nblanket nit\n");
}

TEST_CASE("write_prerun drops the four analysis files into the folder") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "gibbsqc_prerun_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  auto written = write_prerun(three_nodes_skeleton(), dir.string());
  REQUIRE(written.size() == 4);
  for (const char* name : {"probsF.txt", "probsT.txt", "blankets.txt", "nits.txt"}) {
    CHECK(fs::exists(dir / name));
  }
  fs::remove_all(dir);
}

TEST_CASE("v_standin encodes forced nits as 0 or 180 degree rotations") {
  // Y copies its binary parent X.
  BayesNet net = load_net("# X\n# Y X", "# X x0 x1\n# Y y0 y1",
                          "# X\nx0 0.5\nx1 0.5\n# Y\ny0 x0 1.0\ny1 x1 1.0");
  NitLayout layout = build_layout(net.skel);
  auto gates = v_standin(net, layout, 1);
  REQUIRE(gates.size() == 2);
  // Nit 1 is Y; its blanket is {0}. Config 0 forces y=0, config 1 forces y=1.
  CHECK(gates[1].kind == GateKind::MpY);
  CHECK(gates[1].targets == std::vector<int>{1});
  REQUIRE(gates[1].mux.size() == 1);
  CHECK(gates[1].mux[0].bit == 0);
  REQUIRE(gates[1].angles.size() == 2);
  CHECK(gates[1].angles[0] == 0.0);
  CHECK(gates[1].angles[1] == 180.0);
}

TEST_CASE("an isolated uniform binary node becomes one uncontrolled ROTY of 90") {
  BayesNet net = load_net("# X", "# X x0 x1", "# X\nx0 0.5\nx1 0.5");
  NitLayout layout = build_layout(net.skel);
  auto gates = v_standin(net, layout, 1);
  REQUIRE(gates.size() == 1);
  CHECK(gates[0].kind == GateKind::RotY);
  CHECK(gates[0].controls.empty());
  REQUIRE(gates[0].angles.size() == 1);
  CHECK(std::abs(gates[0].angles[0] - 90.0) <= 1e-9);
}

TEST_CASE("v_standin mux controls are exactly the nit blanket") {
  BayesNet three = three_nodes_net();
  NitLayout layout = build_layout(three.skel);
  auto gates = v_standin(three, layout, 2);
  REQUIRE(gates.size() == 4);
  // First gate targets nit 0 shifted into register 2; controls are its
  // blanket {1,2,3} shifted likewise, named 2..0 in descending bit order.
  CHECK(gates[0].targets == std::vector<int>{4});
  REQUIRE(gates[0].mux.size() == 3);
  CHECK(gates[0].mux[0].bit == 7);
  CHECK(gates[0].mux[1].bit == 6);
  CHECK(gates[0].mux[2].bit == 5);
  CHECK(gates[0].angles.size() == 8);

  std::mt19937_64 rng(7502);
  for (int trial = 0; trial < 25; ++trial) {
    BayesNet net = testutil::random_net(rng);
    NitLayout lay = build_layout(net.skel);
    auto vg = v_standin(net, lay, 2);
    std::size_t idx = 0;
    for (int nit = 0; nit < lay.nb; ++nit, ++idx) {
      auto blanket = nit_blanket(net.skel, lay, nit);
      const Gate& g = vg[idx];
      CHECK(g.targets == std::vector<int>{lay.nb + nit});
      if (blanket.empty()) {
        CHECK(g.kind == GateKind::RotY);
        continue;
      }
      std::set<int> mux_bits;
      for (const auto& m : g.mux) mux_bits.insert(m.bit - lay.nb);
      CHECK(mux_bits == std::set<int>(blanket.begin(), blanket.end()));
    }
    CHECK(idx == vg.size());
  }
}

namespace {

GenParams base_params(const BayesNet& net) {
  GenParams p;
  p.probe_bits_a = 2;
  p.pe_steps_c = 3;
  p.max_grover_steps = 100;
  p.gamma_tol_degs = 1.0;
  p.delta_lambda_degs = 10.0;
  p.start.state.assign(net.size(), 0);
  return p;
}

}  // namespace

TEST_CASE("generated circuits use 2nb+ac qubits") {
  BayesNet net = three_nodes_net();
  NitLayout layout = build_layout(net.skel);
  GenParams params = base_params(net);
  auto result = generate_circuit(net, layout, params);
  CHECK(result.derived.qubit_count == 2 * 4 + 2 * 3);
  CHECK(result.circuit.qubit_count == 14);
  CHECK(validate_circuit(result.circuit).empty());
  CHECK(result.derived.p_start == joint_prob(net, params.start));
  CHECK(result.derived.elementary_op_count ==
        oracle::count_ops_by_expansion(result.circuit));
  CHECK(result.derived.elementary_op_count == count_elementary(result.circuit));
}

TEST_CASE("a tolerance above gamma0 leaves only state preparation") {
  BayesNet net = three_nodes_net();
  NitLayout layout = build_layout(net.skel);
  GenParams params = base_params(net);
  params.start.state = {2, 1, 1};  // a3 (10), b2 (1), c2 (1)
  params.gamma_tol_degs = 180.0;
  auto result = generate_circuit(net, layout, params);
  CHECK(result.derived.grover_steps_used == 0);
  // One SIGX per set bit of the binary names: a3=10, b2=1, c2=1.
  REQUIRE(result.circuit.ops.size() == 3);
  for (const auto& g : result.circuit.ops) CHECK(g.kind == GateKind::SigX);
  CHECK(result.circuit.ops[0].targets == std::vector<int>{1});
  CHECK(result.circuit.ops[1].targets == std::vector<int>{2});
  CHECK(result.circuit.ops[2].targets == std::vector<int>{3});
}

TEST_CASE("zero-probability starting states are rejected") {
  BayesNet net = load_net("# X", "# X x0 x1", "# X\nx0 1.0");
  NitLayout layout = build_layout(net.skel);
  GenParams params = base_params(net);
  params.start.state = {1};
  CHECK_THROWS_AS(generate_circuit(net, layout, params), SemanticError);

  params.start.state = {0};
  CHECK_NOTHROW(generate_circuit(net, layout, params));

  params.probe_bits_a = 0;
  CHECK_THROWS_AS(generate_circuit(net, layout, params), SemanticError);
}

TEST_CASE("omit-v equals the full circuit with V lines deleted") {
  std::mt19937_64 rng(7503);
  for (int trial = 0; trial < 5; ++trial) {
    BayesNet net = trial == 0 ? three_nodes_net() : testutil::random_net(rng);
    NitLayout layout = build_layout(net.skel);
    GenParams params = base_params(net);
    params.probe_bits_a = 1 + trial % 3;
    params.pe_steps_c = 1 + trial % 2;
    params.max_grover_steps = 4;

    TaggedCircuit tagged = generate_tagged(net, layout, params);
    Circuit expected = strip_v(tagged);

    params.omit_v = true;
    auto omit = generate_circuit(net, layout, params);
    params.omit_v = false;
    auto full = generate_circuit(net, layout, params);

    CHECK(emit_english(omit.circuit) == emit_english(expected));
    CHECK(full.derived.elementary_op_count > omit.derived.elementary_op_count);

    // The non-V subsequence of the full circuit is the omit circuit.
    std::size_t k = 0;
    for (std::size_t i = 0; i < tagged.circuit.ops.size(); ++i) {
      if (tagged.v_tag[i]) continue;
      Gate g = tagged.circuit.ops[i];
      Gate h = omit.circuit.ops[k++];
      if (g.kind != GateKind::Loop && g.kind != GateKind::Next) CHECK(g == h);
    }
    CHECK(k == omit.circuit.ops.size());

    CHECK(validate_circuit(omit.circuit).empty());
    CHECK(validate_circuit(full.circuit).empty());
  }
}

TEST_CASE("generated english text parses back to the same circuit") {
  BayesNet net = three_nodes_net();
  NitLayout layout = build_layout(net.skel);
  GenParams params = base_params(net);
  params.max_grover_steps = 3;
  auto result = generate_circuit(net, layout, params);
  const std::string eng = emit_english(result.circuit);
  CHECK(parse_english(eng, result.circuit.qubit_count) == result.circuit);
  CHECK(check_correspondence(eng, emit_picture(result.circuit)).empty());
}

TEST_CASE("log info mirrors the run") {
  BayesNet net = three_nodes_net();
  NitLayout layout = build_layout(net.skel);
  GenParams params = base_params(net);
  auto result = generate_circuit(net, layout, params);
  LogInfo info = make_log_info("3nodes", net, layout, params, result.derived);
  const std::string log = emit_log(info);
  CHECK(log.find("number of qubits: 14\n") != std::string::npos);
  CHECK(log.find("node A = a1 (binary 00, decimal 0)\n") != std::string::npos);
  CHECK(log.find("number of elementary operations: " +
                 std::to_string(result.derived.elementary_op_count) + "\n") !=
        std::string::npos);
}
