// Command-line front end: reads a Bayesian network from an I/O folder and
// writes analysis files and the Gibbs-sampling circuit files back into it.

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "gibbsqc/bayesnet.hpp"
#include "gibbsqc/circuit.hpp"
#include "gibbsqc/errors.hpp"
#include "gibbsqc/fileio.hpp"
#include "gibbsqc/generator.hpp"
#include "gibbsqc/nitcodes.hpp"
#include "gibbsqc/oracle.hpp"
#include "gibbsqc/realfmt.hpp"
#include "gibbsqc/text_formats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitInternal = 4;

namespace fs = std::filesystem;
using namespace gibbsqc;

Skeleton load_skeleton(const std::string& folder) {
  auto parents = parse_parents(read_text_file(folder + "/parents.txt"));
  auto states = parse_states(read_text_file(folder + "/states.txt"));
  return Skeleton::build(parents, states);
}

BayesNet load_folder_net(const std::string& folder) {
  Skeleton skel = load_skeleton(folder);
  auto cpts = parse_probs(read_text_file(folder + "/probs.txt"), skel);
  return build_net(std::move(skel), std::move(cpts));
}

void require_valid(const BayesNet& net) {
  auto report = validate_net(net);
  if (!report.empty()) {
    std::string msg = "invalid network:";
    for (const auto& line : report) msg += "\n  " + line;
    throw SemanticError(msg);
  }
}

struct GenerateFlags {
  std::string folder;
  int probe_bits = 0;
  int pe_steps = 0;
  int max_grover = 0;
  double gamma_tol = 0.0;
  double delta_lambda = 0.0;
  bool omit_v = false;
  std::string start_spec;
  bool random_start = false;
  std::optional<std::uint64_t> seed;
  bool no_clobber = false;
};

Instantiation resolve_start(const Skeleton& skel, const GenerateFlags& flags) {
  if (flags.random_start) {
    std::uint64_t seed = flags.seed ? *flags.seed : std::random_device{}();
    return random_instantiation(skel, seed);
  }
  return parse_start_spec(skel, flags.start_spec);
}

void refuse_clobber(const std::string& path) {
  if (fs::exists(path)) {
    throw SemanticError("refusing to overwrite '" + path + "' (--no-clobber)");
  }
}

void print_layout_warnings(const NitLayout& layout) {
  for (const auto& w : layout.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_prerun(const std::string& folder) {
  Skeleton skel = load_skeleton(folder);
  print_layout_warnings(build_layout(skel));
  for (const auto& path : write_prerun(skel, folder)) {
    std::cout << path << "\n";
  }
  return kExitOk;
}

int cmd_generate(const GenerateFlags& flags) {
  BayesNet net = load_folder_net(flags.folder);
  require_valid(net);
  NitLayout layout = build_layout(net.skel);
  print_layout_warnings(layout);

  GenParams params;
  params.probe_bits_a = flags.probe_bits;
  params.pe_steps_c = flags.pe_steps;
  params.max_grover_steps = flags.max_grover;
  params.gamma_tol_degs = flags.gamma_tol;
  params.delta_lambda_degs = flags.delta_lambda;
  params.omit_v = flags.omit_v;
  params.seed = flags.seed;
  params.start = resolve_start(net.skel, flags);

  GenResult result = generate_circuit(net, layout, params);

  const std::string log_path = flags.folder + "/quibbs_log.txt";
  const std::string eng_path = flags.folder + "/quibbs_eng.txt";
  const std::string pic_path = flags.folder + "/quibbs_pic.txt";
  if (flags.no_clobber) {
    refuse_clobber(log_path);
    refuse_clobber(eng_path);
    refuse_clobber(pic_path);
  }
  write_text_file(log_path,
                  emit_log(make_log_info(flags.folder, net, layout, params, result.derived)));
  write_text_file(eng_path, emit_english(result.circuit));
  write_text_file(pic_path, emit_picture(result.circuit));

  std::cout << "starting gamma (degs): " << format_real(result.derived.gamma0_degs) << "\n"
            << "probability of starting state: " << format_real(result.derived.p_start)
            << "\n"
            << "number of qubits: " << result.derived.qubit_count << "\n"
            << "number of elementary operations: " << result.derived.elementary_op_count
            << "\n"
            << "Grover steps used: " << result.derived.grover_steps_used << "\n"
            << "wrote: " << log_path << "\n"
            << "wrote: " << eng_path << "\n"
            << "wrote: " << pic_path << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& eng_path, const std::string& pic_path) {
  const std::string eng = read_text_file(eng_path);
  const std::string pic = read_text_file(pic_path);
  auto report = check_correspondence(eng, pic);
  if (report.empty()) {
    Circuit circ = parse_english(eng, -1);
    for (auto& v : validate_circuit(circ)) report.push_back(std::move(v));
  }
  if (!report.empty()) {
    for (const auto& line : report) std::cerr << line << "\n";
    return kExitSemantic;
  }
  std::cout << "files agree line for line\n";
  return kExitOk;
}

int cmd_count(const std::string& eng_path) {
  Circuit circ = parse_english(read_text_file(eng_path), -1);
  std::cout << count_elementary(circ) << "\n";
  return kExitOk;
}

int cmd_prob(const std::string& folder, const std::string& start_spec) {
  BayesNet net = load_folder_net(folder);
  require_valid(net);
  Instantiation start = parse_start_spec(net.skel, start_spec);
  const double p = joint_prob(net, start);
  std::cout << "probability of starting state: " << format_real(p) << "\n";
  if (p == 0.0) {
    std::cout << "warning: starting state is unreachable (zero probability); "
                 "no finite starting gamma\n";
  } else {
    std::cout << "starting gamma (degs): " << format_real(gamma0_degs(p)) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian-network quantum Gibbs-sampling circuit generator"};
  app.require_subcommand(1);

  std::string folder;
  auto* prerun = app.add_subcommand(
      "prerun", "write probsF/probsT templates, blankets.txt and nits.txt");
  prerun->add_option("folder", folder, "I/O folder with parents.txt and states.txt")
      ->required();

  GenerateFlags gen;
  auto* generate =
      app.add_subcommand("generate", "write quibbs_log/eng/pic circuit files");
  generate->add_option("folder", gen.folder, "I/O folder with the three input files")
      ->required();
  generate->add_option("--probe-bits", gen.probe_bits, "probe bits per PE step (a)")
      ->required();
  generate->add_option("--pe-steps", gen.pe_steps, "phase estimation steps (c)")
      ->required();
  generate->add_option("--max-grover", gen.max_grover, "maximum Grover steps")
      ->required();
  generate->add_option("--gamma-tol", gen.gamma_tol, "gamma tolerance in degrees")
      ->required();
  generate->add_option("--delta-lambda", gen.delta_lambda, "delta lambda in degrees")
      ->required();
  generate->add_flag("--omit-v", gen.omit_v, "omit every gate of the V operator");
  auto* start_opt = generate->add_option("--start", gen.start_spec,
                                         "starting state, e.g. A=a1,B=b1,C=c1");
  auto* random_opt =
      generate->add_flag("--random-start", gen.random_start, "draw the starting state");
  std::uint64_t seed_value = 0;
  auto* seed_opt = generate->add_option("--seed", seed_value, "seed for --random-start");
  generate->add_flag("--no-clobber", gen.no_clobber, "refuse to overwrite output files");
  start_opt->excludes(random_opt);
  random_opt->excludes(start_opt);
  seed_opt->needs(random_opt);

  std::string eng_path, pic_path;
  auto* validate = app.add_subcommand(
      "validate", "check an english/picture file pair for line-by-line agreement");
  validate->add_option("english", eng_path, "quibbs_eng.txt path")->required();
  validate->add_option("picture", pic_path, "quibbs_pic.txt path")->required();

  std::string count_path;
  auto* count = app.add_subcommand("count", "count elementary operations");
  count->add_option("english", count_path, "quibbs_eng.txt path")->required();

  std::string prob_folder, prob_spec;
  auto* prob = app.add_subcommand("prob", "probability and starting gamma of a state");
  prob->add_option("folder", prob_folder, "I/O folder with the three input files")
      ->required();
  prob->add_option("--start", prob_spec, "state spec, e.g. A=a1,B=b1,C=c1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*prerun) return cmd_prerun(folder);
    if (*generate) {
      if (!gen.random_start && gen.start_spec.empty()) {
        std::cerr << "generate needs --start or --random-start\n";
        return kExitUsage;
      }
      if (seed_opt->count() > 0) gen.seed = seed_value;
      return cmd_generate(gen);
    }
    if (*validate) return cmd_validate(eng_path, pic_path);
    if (*count) return cmd_count(count_path);
    if (*prob) return cmd_prob(prob_folder, prob_spec);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
