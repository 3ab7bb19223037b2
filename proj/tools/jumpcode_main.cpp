// jumpcode: command-line front end for the detected-jump code toolkit.
//
// Commands: code build|verify, sim, design affine|verify|search|to-code.
// Exit codes: 0 = pass, 1 = verified negative result (a failing condition
// check or an exhausted search), 2 = usage or input error.
//
// All JSON/CSV output is byte-stable for fixed inputs and seed. Environment
// overrides: JUMPCODE_OUT_DIR (directory for relative output paths) and
// JUMPCODE_WORKERS (default worker count for trajectory ensembles).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jumpcode/jumpcode.hpp"

namespace {

using namespace jumpcode;

std::string resolve_out(const std::string& path) {
  const char* dir = std::getenv("JUMPCODE_OUT_DIR");
  if (dir == nullptr || *dir == '\0' || path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / p).string();
}

void emit_json(const std::string& out_path, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  const std::string resolved = resolve_out(out_path);
  write_text_file(resolved, text);
  std::cout << "wrote " << resolved << "\n";
}

int default_workers() {
  const char* env = std::getenv("JUMPCODE_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const int w = std::stoi(env);
    if (w < 1) throw InvalidParameters("JUMPCODE_WORKERS must be >= 1");
    return w;
  } catch (const std::exception&) {
    throw InvalidParameters("JUMPCODE_WORKERS must be a positive integer");
  }
}

DecayModel spread_model(int n, double kappa, double spread) {
  if (kappa <= 0.0) throw InvalidParameters("kappa must be > 0");
  if (spread < 0.0 || spread >= 1.0)
    throw InvalidParameters("spread must lie in [0, 1)");
  std::vector<double> rates(static_cast<std::size_t>(n), kappa);
  if (n > 1 && spread > 0.0)
    for (int alpha = 1; alpha <= n; ++alpha)
      rates[static_cast<std::size_t>(alpha - 1)] =
          kappa *
          (1.0 + spread * (2.0 * (alpha - 1) / (n - 1) - 1.0));
  return DecayModel(rates);
}

struct CodeBuildArgs {
  int n = 4;
  std::string out;
};

int run_code_build(const CodeBuildArgs& a) {
  const Codebook cb = build_1jc(a.n);
  Json j = codebook_to_json(cb);
  j["tool_version"] = kVersion;
  emit_json(a.out, j);
  std::cout << cb.label << ": n=" << cb.n << " k=" << cb.k << " l=" << cb.l()
            << " dfs_dim=" << binomial(cb.n, cb.n / 2)
            << " logical_qubits=" << format_g12(logical_qubit_count(cb.n))
            << "\n";
  return 0;
}

struct CodeVerifyArgs {
  std::string code_path;
  int t = 1;
  double kappa = 1.0;
  double tol = 1e-10;
  std::string mode = "detected";
  std::string out;
};

int run_code_verify(const CodeVerifyArgs& a) {
  const std::string raw = read_text_file(a.code_path);
  const Codebook cb = codebook_from_json(parse_json(raw, a.code_path));
  cb.validate();
  const DecayModel model(cb.n, a.kappa);

  if (a.mode == "full-knill") {
    const FullKnillReport report = verify_full_knill(cb, model, a.tol);
    Json j = knill_report_to_json(report);
    j["tool_version"] = kVersion;
    j["input_hash"] = fnv1a64_hex(raw);
    emit_json(a.out, j);
    std::cout << "full-knill: " << (report.pass ? "satisfied" : "violated")
              << " (" << report.violations.size() << " violating entries)\n";
    return 0;  // reporting violations is this mode's purpose
  }

  const ConditionReport report = verify_detected_jump(cb, a.t, model, a.tol);
  Json j = report_to_json(report);
  j["tool_version"] = kVersion;
  j["input_hash"] = fnv1a64_hex(raw);
  emit_json(a.out, j);
  if (report.pass) {
    std::cout << "detected-jump conditions hold up to t=" << a.t
              << " (max deviation " << format_g12(report.max_deviation)
              << ")\n";
    return 0;
  }
  std::cout << "detected-jump conditions FAIL at t=" << a.t
            << "; worst pattern (";
  for (std::size_t i = 0; i < report.worst_pattern.size(); ++i)
    std::cout << (i ? "," : "") << report.worst_pattern[i];
  std::cout << ") deviates by " << format_g12(report.max_deviation) << "\n";
  return 1;
}

struct SimArgs {
  std::string code_path;
  bool unencoded = false;
  double kappa = 1.0;
  double spread = 0.0;
  double t_max = 3.0;
  int n_traj = 1000;
  int n_samples = 30;
  std::uint64_t seed = 0;
  std::string recovery = "on";
  double delay = 0.0;
  int workers = 0;  // 0: take JUMPCODE_WORKERS or 1
  std::string out;
};

int run_sim(const SimArgs& a) {
  if (a.unencoded != a.code_path.empty())
    throw InvalidParameters("choose exactly one of --code and --unencoded");

  StateVector psi0(1, {});
  std::optional<Codebook> cb;
  if (a.unencoded) {
    psi0 = make_state(1, {{"1", Complex{1.0, 0.0}}});
  } else {
    cb = codebook_from_json(
        parse_json(read_text_file(a.code_path), a.code_path));
    cb->validate();
    psi0 = cb->codewords.front();
  }

  const DecayModel model = spread_model(psi0.n(), a.kappa, a.spread);
  TrajectoryConfig cfg(model);
  cfg.t_max = a.t_max;
  cfg.recovery_enabled = a.recovery == "on";
  cfg.recovery_delay = a.delay;
  cfg.seed = a.seed;
  cfg.n_trajectories = a.n_traj;
  if (a.n_samples < 1) throw InvalidParameters("need at least one sample");
  for (int i = 0; i <= a.n_samples; ++i)
    cfg.sample_times.push_back(a.t_max * i / a.n_samples);

  RecoveryProvider provider;
  if (cfg.recovery_enabled) {
    if (!cb)
      throw InvalidParameters(
          "recovery needs an encoded run; use --recovery off with "
          "--unencoded");
    provider = make_recovery_provider(*cb, model);
  }
  const int workers = a.workers > 0 ? a.workers : default_workers();
  const EnsembleResult result = ensemble_fidelity(
      psi0, cfg, cfg.recovery_enabled ? &provider : nullptr, std::nullopt,
      workers);

  const std::string csv = ensemble_to_csv(result);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    const std::string resolved = resolve_out(a.out);
    write_text_file(resolved, csv);
    std::cout << "wrote " << resolved << "\n";
  }
  std::cout << "final mean fidelity "
            << format_g12(result.fidelity_mean.back()) << " (stderr "
            << format_g12(result.fidelity_stderr.back()) << ") over "
            << result.n_trajectories << " trajectories\n";
  std::cout << "jump multiplicities:";
  for (const auto& [m, c] : result.jump_multiplicity)
    std::cout << " " << m << "x" << c;
  std::cout << "\n";
  return 0;
}

struct DesignAffineArgs {
  int q = 2;
  std::string out;
};

int run_design_affine(const DesignAffineArgs& a) {
  const AffinePlane plane = affine_plane(a.q);
  const SeedDesign seed = as_seed(plane);
  Json j = design_to_json(seed);
  j["tool_version"] = kVersion;
  emit_json(a.out, j);
  std::cout << "affine plane of order " << plane.q << ": " << plane.n
            << " points, " << plane.lines.size() << " lines, "
            << plane.parallel_classes.size() << " parallel classes\n";
  return 0;
}

struct DesignVerifyArgs {
  std::string design_path;
  int t = 1;
  double kappa = 1.0;
  double tol = 1e-10;
  std::string out;
};

int run_design_verify(const DesignVerifyArgs& a) {
  const std::string raw = read_text_file(a.design_path);
  const SeedDesign design = design_from_json(parse_json(raw, a.design_path));
  for (const auto& w : design.validate()) std::cout << "warning: " << w << "\n";
  const DecayModel model(design.n, a.kappa);
  const ConditionReport report = verify_seed(design, a.t, model, a.tol);
  Json j = report_to_json(report);
  j["tool_version"] = kVersion;
  j["input_hash"] = fnv1a64_hex(raw);
  emit_json(a.out, j);
  std::cout << "design " << (report.pass ? "passes" : "FAILS") << " at t="
            << a.t << " (max deviation " << format_g12(report.max_deviation)
            << ")\n";
  return report.pass ? 0 : 1;
}

struct DesignSearchArgs {
  bool fix_c0 = false;
  std::string first_class_path;
  std::uint64_t budget = 1000000;
  std::string out;
};

int run_design_search(const DesignSearchArgs& a) {
  std::optional<std::vector<Block>> first;
  if (!a.first_class_path.empty()) {
    const Json j = parse_json(read_text_file(a.first_class_path),
                              a.first_class_path);
    try {
      first = j.get<std::vector<Block>>();
    } catch (const Json::exception& e) {
      throw MalformedInput(std::string("bad first-class JSON: ") + e.what());
    }
  } else if (a.fix_c0) {
    first = canonical_933_class();
  }
  try {
    const SearchResult result = search_2seed_933(first, a.budget);
    Json designs = Json::array();
    for (const auto& d : result.designs) designs.push_back(design_to_json(d));
    Json j{{"tool_version", kVersion},
           {"designs", std::move(designs)},
           {"candidates_examined", result.candidates_examined},
           {"exhausted", result.exhausted}};
    emit_json(a.out, j);
    std::cout << "found " << result.designs.size() << " certified design(s); "
              << result.candidates_examined << " candidate(s) examined"
              << (result.exhausted ? "" : " (budget hit)") << "\n";
    return 0;
  } catch (const SearchExhausted& e) {
    std::cout << "search exhausted: " << e.what() << " (budget " << a.budget
              << ")\n";
    return 1;
  }
}

struct DesignToCodeArgs {
  std::string design_path;
  std::string out;
};

int run_design_to_code(const DesignToCodeArgs& a) {
  const std::string raw = read_text_file(a.design_path);
  const SeedDesign design = design_from_json(parse_json(raw, a.design_path));
  std::vector<std::string> warnings;
  const Codebook cb = seed_to_code(design, &warnings);
  for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
  Json j = codebook_to_json(cb);
  j["tool_version"] = kVersion;
  j["input_hash"] = fnv1a64_hex(raw);
  emit_json(a.out, j);
  std::cout << cb.label << ": " << cb.l() << " codeword(s)\n";
  for (const auto& c : cb.codewords) {
    std::cout << " ";
    for (const auto& [b, amp] : c.terms())
      std::cout << " " << format_g12(amp.real()) << "*|" << b.str() << ">";
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detected-jump correcting code toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override");
  app.allow_config_extras(false);

  // --- code ---------------------------------------------------------------
  auto* code = app.add_subcommand("code", "build and verify codebooks");
  code->require_subcommand(1);

  CodeBuildArgs cb_args;
  auto* cb_cmd = code->add_subcommand(
      "build", "build the complementary-pair code on n qubits");
  cb_cmd->add_option("--n", cb_args.n, "qubit count (even)")->required();
  cb_cmd->add_option("--out", cb_args.out, "codebook JSON path");

  CodeVerifyArgs cv_args;
  auto* cv_cmd =
      code->add_subcommand("verify", "check correctability conditions");
  cv_cmd->add_option("--code", cv_args.code_path, "codebook JSON path")
      ->required();
  cv_cmd->add_option("--t", cv_args.t, "max jump-pattern length");
  cv_cmd->add_option("--kappa", cv_args.kappa, "decay rate (1/time)");
  cv_cmd->add_option("--tol", cv_args.tol, "numerical tolerance");
  cv_cmd->add_option("--mode", cv_args.mode,
                     "detected (position known) or full-knill")
      ->check(CLI::IsMember({"detected", "full-knill"}));
  cv_cmd->add_option("--out", cv_args.out, "report JSON path");

  // --- sim ----------------------------------------------------------------
  SimArgs sim_args;
  auto* sim_cmd =
      app.add_subcommand("sim", "quantum-jump trajectory ensemble");
  sim_cmd->add_option("--code", sim_args.code_path,
                      "codebook JSON; the first codeword is simulated");
  sim_cmd->add_flag("--unencoded", sim_args.unencoded,
                    "simulate a bare excited qubit instead of a code");
  sim_cmd->add_option("--kappa", sim_args.kappa, "base decay rate (1/time)");
  sim_cmd->add_option("--spread", sim_args.spread,
                      "relative rate spread in [0,1): rates kappa*(1+d_a)");
  sim_cmd->add_option("--t-max", sim_args.t_max, "duration (units 1/kappa)");
  sim_cmd->add_option("--n-traj", sim_args.n_traj, "number of trajectories");
  sim_cmd->add_option("--n-samples", sim_args.n_samples,
                      "number of sample intervals over [0, t_max]");
  sim_cmd->add_option("--seed", sim_args.seed, "RNG seed (required)")
      ->required();
  sim_cmd->add_option("--recovery", sim_args.recovery, "on or off")
      ->check(CLI::IsMember({"on", "off"}));
  sim_cmd->add_option("--delay", sim_args.delay,
                      "recovery delay after detection (units 1/kappa)");
  sim_cmd->add_option("--workers", sim_args.workers,
                      "worker threads (default: JUMPCODE_WORKERS or 1)");
  sim_cmd->add_option("--out", sim_args.out, "fidelity CSV path");

  // --- design -------------------------------------------------------------
  auto* design = app.add_subcommand("design", "combinatorial design layer");
  design->require_subcommand(1);

  DesignAffineArgs da_args;
  auto* da_cmd =
      design->add_subcommand("affine", "affine plane of prime order");
  da_cmd->add_option("--q", da_args.q, "plane order (prime)")->required();
  da_cmd->add_option("--out", da_args.out, "design JSON path");

  DesignVerifyArgs dv_args;
  auto* dv_cmd = design->add_subcommand(
      "verify", "verify a design through its induced code");
  dv_cmd->add_option("--design", dv_args.design_path, "design JSON path")
      ->required();
  dv_cmd->add_option("--t", dv_args.t, "max jump-pattern length");
  dv_cmd->add_option("--kappa", dv_args.kappa, "decay rate (1/time)");
  dv_cmd->add_option("--tol", dv_args.tol, "numerical tolerance");
  dv_cmd->add_option("--out", dv_args.out, "report JSON path");

  DesignSearchArgs ds_args;
  auto* ds_cmd = design->add_subcommand(
      "search", "search for 9-point 3-class designs correcting two jumps");
  ds_cmd->add_flag("--fix-c0", ds_args.fix_c0,
                   "anchor on the built-in canonical first class (default "
                   "when no --first-class is given)");
  ds_cmd->add_option("--first-class", ds_args.first_class_path,
                     "JSON array of 9 blocks to pin as class 1");
  ds_cmd->add_option("--budget", ds_args.budget,
                     "max candidate designs to certify");
  ds_cmd->add_option("--out", ds_args.out, "search result JSON path");

  DesignToCodeArgs dt_args;
  auto* dt_cmd =
      design->add_subcommand("to-code", "induced codebook of a design");
  dt_cmd->add_option("--design", dt_args.design_path, "design JSON path")
      ->required();
  dt_cmd->add_option("--out", dt_args.out, "codebook JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cb_cmd->parsed()) return run_code_build(cb_args);
    if (cv_cmd->parsed()) return run_code_verify(cv_args);
    if (sim_cmd->parsed()) return run_sim(sim_args);
    if (da_cmd->parsed()) return run_design_affine(da_args);
    if (dv_cmd->parsed()) return run_design_verify(dv_args);
    if (ds_cmd->parsed()) return run_design_search(ds_args);
    if (dt_cmd->parsed()) return run_design_to_code(dt_args);
    std::cerr << "no command selected\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
