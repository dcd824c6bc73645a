// mubforge — search for mutually unbiased constellations of pure quantum
// states by Levenberg-Marquardt minimization over dephased torus spaces.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mubforge/constructions.hpp"
#include "mubforge/equivalence.hpp"
#include "mubforge/objective.hpp"
#include "mubforge/search.hpp"
#include "mubforge/stateset_io.hpp"

namespace fs = std::filesystem;
using namespace mubforge;

namespace {

struct LmFlags {
  int max_iter = LmConfig{}.max_iterations;
  std::string objective = "abs";

  void attach(CLI::App* cmd) {
    cmd->add_option("--lm-max-iter", max_iter, "LM iteration budget per trial");
    cmd->add_option("--objective", objective, "residual form: abs | squared")
        ->check(CLI::IsMember({"abs", "squared"}));
  }
  LmConfig lm() const {
    LmConfig cfg;
    cfg.max_iterations = max_iter;
    return cfg;
  }
  ObjectiveVariant variant() const {
    return objective == "squared" ? ObjectiveVariant::SquaredOverlap
                                  : ObjectiveVariant::AbsOverlap;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
}

int cmd_count(const std::string& spec_text) {
  const auto spec = constellation::parse_spec(spec_text);
  const auto counts = constellation::classify(spec);  // throws on non-restricted specs
  const auto bound = objective::f_upper_bound(spec);
  std::printf("%s  (%s)\n", constellation::display_spec(spec).c_str(),
              constellation::format_spec(spec).c_str());
  std::printf("  p (parameters)       = %d\n", counts.parameters);
  std::printf("  c (constraints)      = %d\n", counts.constraints);
  std::printf("  s (free states)      = %d\n", counts.free_states);
  std::printf("  S (total states)     = %d\n", counts.total_states);
  std::printf("  kind                 = %s\n", to_string(counts.kind));
  std::printf("  F_upper (quadratic)  = %.6f\n", bound.coincident);
  std::printf("  F_upper (linear)     = %.6f\n", bound.linear_variant);
  return 0;
}

int cmd_search(const std::string& spec_text, std::int64_t trials, std::uint64_t seed, int workers,
               const std::string& out_dir, const LmFlags& lm_flags) {
  search::CampaignConfig cfg;
  cfg.spec = constellation::parse_spec(spec_text);
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.lm = lm_flags.lm();
  cfg.variant = lm_flags.variant();
  cfg.workers = workers;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    cfg.records_path = (fs::path(out_dir) / "records.ndjson").string();
  }
  const auto report = search::run_campaign(cfg);
  if (!out_dir.empty())
    write_text((fs::path(out_dir) / "report.json").string(),
               search::report_to_json(report).dump(2) + "\n");
  std::printf("%s: trials=%lld successes=%lld rate=%.4f%% min_F=%.6e\n",
              constellation::display_spec(report.spec).c_str(),
              static_cast<long long>(report.trials), static_cast<long long>(report.successes),
              report.success_rate, report.min_f);
  return 0;
}

int cmd_sweep(const std::string& top_text, std::int64_t trials, std::uint64_t seed, int workers,
              const std::string& out_dir, const LmFlags& lm_flags) {
  search::SweepConfig cfg;
  cfg.top = constellation::parse_spec(top_text);
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.lm = lm_flags.lm();
  cfg.variant = lm_flags.variant();
  cfg.workers = workers;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    cfg.out_dir = out_dir;
  }
  const auto reports = search::sweep(cfg);
  const auto tally = search::lattice_tally(reports, cfg.top);
  const std::string csv = search::sweep_table_csv(reports);
  if (!out_dir.empty()) {
    write_text((fs::path(out_dir) / "table.csv").string(), csv);
    write_text((fs::path(out_dir) / "tally.json").string(), search::tally_to_json(tally).dump(2) + "\n");
    auto all = nlohmann::ordered_json::array();
    for (const auto& r : reports) all.push_back(search::report_to_json(r));
    write_text((fs::path(out_dir) / "reports.json").string(), all.dump(2) + "\n");
  }
  std::fputs(csv.c_str(), stdout);
  std::printf("# negative evidence for %s: %lld trials in zero-success campaigns\n",
              constellation::display_spec(cfg.top).c_str(),
              static_cast<long long>(tally.negative_for_top));
  return 0;
}

int cmd_construct(const std::string& kind, std::vector<int> dims, const std::string& out) {
  MuBasesSet set;
  if (kind == "prime") {
    if (dims.size() != 1) throw CLI::ValidationError("construct prime needs one dimension");
    set = constructions::prime_complete_set(dims[0]);
  } else if (kind == "qubit") {
    set = constructions::qubit_complete_set();
  } else if (kind == "tensor") {
    if (dims.size() != 2) throw CLI::ValidationError("construct tensor needs two factors");
    set = constructions::tensor_triple(dims[0], dims[1]);
  } else {
    throw CLI::ValidationError("unknown construction kind: " + kind);
  }
  const StateSet states = constructions::to_state_set(set);
  const auto verdict = objective::verify_mu(states, 1e-10);
  if (!verdict.ok) throw std::runtime_error("construction failed self-verification");
  if (out.empty())
    std::cout << io::state_set_to_json(states).dump(2) << "\n";
  else
    io::write_state_set(states, out);
  std::fprintf(stderr, "%s: %d bases of %d vectors in d=%d, max deviation %.3e\n",
               set.provenance.c_str(), static_cast<int>(set.bases.size()), set.d, set.d,
               verdict.max_deviation);
  return 0;
}

int cmd_verify(const std::string& file, double tol) {
  const StateSet states = io::read_state_set(file);
  if (states.total_states() == 0) {
    std::printf("PASS (empty state set: nothing to check)\n");
    return 0;
  }
  const auto verdict = objective::verify_mu(states, tol);
  if (verdict.ok) {
    std::printf("PASS max deviation %.6e (tol %.1e)\n", verdict.max_deviation, tol);
    return 0;
  }
  std::printf("FAIL max deviation %.6e (tol %.1e) at pair (group %d, vec %d) x (group %d, vec %d)\n",
              verdict.max_deviation, tol, verdict.group_a, verdict.index_a, verdict.group_b,
              verdict.index_b);
  return 1;
}

int cmd_dephase(const std::string& file, const std::string& out) {
  const StateSet states = io::read_state_set(file);
  const auto result = equivalence::dephase(states);
  nlohmann::ordered_json j = io::state_set_to_json(result.canonical);
  j["angles"] = result.angles;
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_text(out, j.dump(2) + "\n");
  std::fprintf(stderr, "dephased %d groups, %zu angles recovered\n",
               result.canonical.group_count(), result.angles.size());
  return 0;
}

int cmd_hist(const std::string& records_file, const std::string& out) {
  const auto records = search::read_records(records_file);
  const std::string csv = search::histogram_csv(search::records_histogram(records));
  if (out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_text(out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search for mutually unbiased constellations in C^d"};
  app.require_subcommand(1);

  std::string spec_text, top_text, file, out;
  std::int64_t trials = 100;
  std::uint64_t seed = 1;
  int workers = static_cast<int>(search::default_worker_count());
  double tol = 1e-10;
  std::string kind;
  std::vector<int> dims;
  LmFlags lm_search, lm_sweep;

  auto* count = app.add_subcommand("count", "parameter/constraint counts of a spec");
  count->add_option("spec", spec_text, "constellation spec, e.g. d=6:5,4^2,2")->required();

  auto* srch = app.add_subcommand("search", "random-restart campaign for one spec");
  srch->add_option("spec", spec_text)->required();
  srch->add_option("--trials", trials, "number of random starts");
  srch->add_option("--seed", seed, "campaign master seed");
  srch->add_option("--workers", workers, "parallel workers (default $MUBFORGE_WORKERS)");
  srch->add_option("--out", out, "output directory (records.ndjson, report.json)");
  lm_search.attach(srch);

  auto* sweep = app.add_subcommand("sweep", "campaigns over every subspec of a top spec");
  sweep->add_option("top", top_text)->required();
  sweep->add_option("--trials", trials);
  sweep->add_option("--seed", seed);
  sweep->add_option("--workers", workers);
  sweep->add_option("--out", out, "output directory (table.csv, tally.json, per-spec records)");
  lm_sweep.attach(sweep);

  auto* construct = app.add_subcommand("construct", "emit a known MU bases set as JSON");
  construct->add_option("kind", kind, "prime | qubit | tensor")->required();
  construct->add_option("dims", dims, "dimension (prime) or two factors (tensor)");
  construct->add_option("--out", out, "output file (stdout when omitted)");

  auto* verify = app.add_subcommand("verify", "check a state-set file for unbiasedness");
  verify->add_option("file", file)->required();
  verify->add_option("--tol", tol, "max allowed deviation");

  auto* dephase = app.add_subcommand("dephase", "canonical dephased form of a state-set file");
  dephase->add_option("file", file)->required();
  dephase->add_option("--out", out, "output file (stdout when omitted)");

  auto* hist = app.add_subcommand("hist", "decade histogram CSV of a records stream");
  hist->add_option("records", file)->required();
  hist->add_option("--out", out, "output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (count->parsed()) return cmd_count(spec_text);
    if (srch->parsed()) return cmd_search(spec_text, trials, seed, workers, out, lm_search);
    if (sweep->parsed()) return cmd_sweep(top_text, trials, seed, workers, out, lm_sweep);
    if (construct->parsed()) return cmd_construct(kind, dims, out);
    if (verify->parsed()) return cmd_verify(file, tol);
    if (dephase->parsed()) return cmd_dephase(file, out);
    if (hist->parsed()) return cmd_hist(file, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
