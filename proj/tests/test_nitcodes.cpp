#include <set>

#include "doctest.h"
#include "gibbsqc/nitcodes.hpp"
#include "helpers.hpp"

using namespace gibbsqc;
using testutil::three_nodes_skeleton;

TEST_CASE("3nodes layout assigns four nits in focus order") {
  NitLayout layout = build_layout(three_nodes_skeleton());
  CHECK(layout.nb == 4);
  CHECK(layout.nit_count == std::vector<int>{2, 1, 1});
  CHECK(layout.node_nits(0) == std::vector<int>{0, 1});
  CHECK(layout.node_nits(1) == std::vector<int>{2});
  CHECK(layout.node_nits(2) == std::vector<int>{3});
  CHECK(layout.owner == std::vector<int>{0, 0, 1, 2});
  CHECK(layout.warnings.empty());
}

TEST_CASE("nit widths per state count") {
  auto width_of = [](int n_states) {
    NameList states;
    for (int s = 0; s < n_states; ++s) states.push_back("s" + std::to_string(s));
    Skeleton skel = Skeleton::build({{"X", {}}}, {{"X", states}});
    return build_layout(skel).nit_count[0];
  };
  CHECK(width_of(1) == 0);
  CHECK(width_of(2) == 1);
  CHECK(width_of(3) == 2);
  CHECK(width_of(4) == 2);
  CHECK(width_of(5) == 3);
  CHECK(width_of(8) == 3);
  CHECK(width_of(9) == 4);
}

TEST_CASE("single-state nodes carry no nits and log a warning") {
  Skeleton skel =
      Skeleton::build(parse_parents("# X\n# Y"), parse_states("# X only\n# Y y0 y1"));
  NitLayout layout = build_layout(skel);
  CHECK(layout.nb == 1);
  CHECK(layout.nit_count == std::vector<int>{0, 1});
  CHECK(layout.node_nits(0).empty());
  CHECK(layout.owner == std::vector<int>{1});
  REQUIRE(layout.warnings.size() == 1);
  CHECK(layout.warnings[0].find("X") != std::string::npos);
}

TEST_CASE("state names carry decimal and binary forms") {
  Skeleton skel = three_nodes_skeleton();
  NitLayout layout = build_layout(skel);
  auto a = state_names(skel, layout, 0);
  REQUIRE(a.size() == 3);
  CHECK(a[0].english == "a1");
  CHECK(a[0].decimal == 0);
  CHECK(a[0].binary == "00");
  CHECK(a[1].binary == "01");
  CHECK(a[2].binary == "10");

  auto b = state_names(skel, layout, 1);
  CHECK(b[0].binary == "0");
  CHECK(b[1].binary == "1");

  Skeleton four = Skeleton::build({{"X", {}}}, {{"X", {"p", "q", "r", "s"}}});
  auto names = state_names(four, build_layout(four), 0);
  CHECK(names[3].binary == "11");
}

TEST_CASE("binary names are a bijection of uniform width") {
  std::mt19937_64 rng(7101);
  for (int trial = 0; trial < 100; ++trial) {
    BayesNet net = testutil::random_net(rng);
    NitLayout layout = build_layout(net.skel);
    int total = 0;
    for (int i = 0; i < net.size(); ++i) {
      total += layout.nit_count[i];
      auto names = state_names(net.skel, layout, i);
      std::set<std::string> binaries;
      for (const auto& sn : names) {
        CHECK(static_cast<int>(sn.binary.size()) == layout.nit_count[i]);
        binaries.insert(sn.binary);
      }
      CHECK(binaries.size() == names.size());
    }
    CHECK(total == layout.nb);
  }
}

TEST_CASE("nit blankets on 3nodes") {
  Skeleton skel = three_nodes_skeleton();
  NitLayout layout = build_layout(skel);
  CHECK(nit_blanket(skel, layout, 0) == std::vector<int>{1, 2, 3});
  CHECK(nit_blanket(skel, layout, 1) == std::vector<int>{0, 2, 3});
  CHECK(nit_blanket(skel, layout, 2) == std::vector<int>{0, 1, 3});
  CHECK(nit_blanket(skel, layout, 3) == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(nit_blanket(skel, layout, 4), SemanticError);

  Skeleton isolated = Skeleton::build(parse_parents("# X"), parse_states("# X x0 x1"));
  NitLayout il = build_layout(isolated);
  CHECK(nit_blanket(isolated, il, 0).empty());
}

TEST_CASE("lookups reject unknown nodes") {
  Skeleton skel = three_nodes_skeleton();
  NitLayout layout = build_layout(skel);
  CHECK_THROWS_AS(state_names(skel, layout, 3), SemanticError);
  CHECK_THROWS_AS(state_names(skel, layout, -1), SemanticError);
  CHECK_THROWS_AS(node_blanket(skel, 9), SemanticError);
  CHECK_THROWS_AS(nit_blanket(skel, layout, -1), SemanticError);
}

TEST_CASE("nit blankets are symmetric") {
  std::mt19937_64 rng(7102);
  for (int trial = 0; trial < 100; ++trial) {
    BayesNet net = testutil::random_net(rng);
    NitLayout layout = build_layout(net.skel);
    for (int nit = 0; nit < layout.nb; ++nit) {
      auto mb = nit_blanket(net.skel, layout, nit);
      for (int other : mb) {
        auto back = nit_blanket(net.skel, layout, other);
        CHECK(std::find(back.begin(), back.end(), nit) != back.end());
      }
    }
  }
}
