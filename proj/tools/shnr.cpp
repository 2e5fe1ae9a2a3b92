// shnr: compute A-functionals, verify inequality chains, run random campaigns.
//
// Exit codes: 0 success, 1 at least one FAIL verdict, 2 parse or validation
// error, 3 operator outside B_A(H).

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shnr/campaign.hpp"
#include "shnr/certify.hpp"
#include "shnr/functionals.hpp"
#include "shnr/io.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoAdjoint = 3;

struct ScanFlags {
  std::size_t grid = 1024;
  double refine_tol = 1e-12;
  std::size_t max_iters = 200;

  shnr::ScanConfig config() const {
    shnr::ScanConfig cfg;
    cfg.grid_points = grid;
    cfg.refine_tol = refine_tol;
    cfg.max_refine_iters = max_iters;
    return cfg;
  }
};

void add_scan_flags(CLI::App* cmd, ScanFlags& flags) {
  cmd->add_option("--grid", flags.grid, "Angles in the initial scan grid")->capture_default_str();
  cmd->add_option("--refine-tol", flags.refine_tol, "Relative enclosure width target")->capture_default_str();
  cmd->add_option("--max-refine-iters", flags.max_iters, "Refinement rounds")->capture_default_str();
}

void print_pair(double a, double b) { std::printf("%s %s\n", shnr::format_scalar(a).c_str(), shnr::format_scalar(b).c_str()); }

int compute(const std::string& input, const std::string& quantity, const ScanFlags& flags, std::size_t starts) {
  const shnr::OperatorFile f = shnr::read_operator_file(input);
  const shnr::SemiHilbertSpace sp = shnr::make_space(f.a);
  shnr::require_operator(sp, f.t, "T");
  const shnr::ScanConfig cfg = flags.config();
  cfg.validate();

  if (quantity == "normA") {
    std::printf("%s\n", shnr::format_scalar(shnr::op_seminorm(sp, f.t)).c_str());
  } else if (quantity == "wA") {
    const shnr::Enclosure e = shnr::w_A(sp, f.t, cfg);
    print_pair(e.lo, e.hi);
  } else if (quantity == "crawford") {
    const shnr::Enclosure e = shnr::crawford_A(sp, f.t, cfg);
    print_pair(e.lo, e.hi);
  } else if (quantity == "cos" || quantity == "sin") {
    const shnr::CosEstimate c = quantity == "cos" ? shnr::cos_A(sp, f.t, starts) : shnr::sin_A(sp, f.t, starts);
    std::printf("%s\n", shnr::format_scalar(c.value).c_str());
    if (!c.certified) std::fprintf(stderr, "note: heuristic estimate (compressed rank > 3)\n");
  } else if (quantity == "dist") {
    const shnr::DistanceEstimate d = shnr::dist_to_scalars(sp, f.t, cfg);
    print_pair(d.bracket.lo, d.value);
  } else if (quantity == "adjoint") {
    std::printf("%s\n", shnr::matrix_to_json(shnr::sharp(sp, f.t)).dump().c_str());
  } else if (quantity == "gap") {
    const shnr::GapBound g = shnr::gap_bound(sp, f.t, cfg);
    print_pair(g.lhs, g.rhs);
  }
  return 0;
}

void print_summary(const shnr::SuiteSummary& s, std::FILE* out) {
  std::fprintf(out, "PASS %zu FAIL %zu INCONCLUSIVE %zu\n", s.pass, s.fail, s.inconclusive);
}

int verify(const std::string& input, const std::string& suite_name, double tol, const std::string& output,
           const ScanFlags& flags) {
  const shnr::Suite suite = *shnr::parse_suite(suite_name);
  const shnr::OperatorFile f = shnr::read_operator_file(input);
  if (shnr::suite_needs_s(suite) && !f.s) throw shnr::ParseError("suite requires S");
  const shnr::SemiHilbertSpace sp = shnr::make_space(f.a);

  shnr::SuiteConfig cfg;
  cfg.scan = flags.config();
  cfg.tol = tol;
  const std::vector<shnr::Certificate> certs = shnr::run_suite(suite, sp, {f.t, f.s, f.r}, cfg);

  shnr::Report report;
  report.command = "verify";
  report.config = {{"input", input}, {"suite", suite_name}, {"tol", tol}, {"grid_points", cfg.scan.grid_points}};
  for (const shnr::Certificate& c : certs) {
    report.summary.add(c);
    report.records.push_back({0, c});
  }
  const std::string json = shnr::report_to_json(report).dump(2) + "\n";
  if (output.empty()) {
    std::fputs(json.c_str(), stdout);
    print_summary(report.summary, stderr);
  } else {
    shnr::write_file_atomic(output, json);
    print_summary(report.summary, stdout);
  }
  return report.summary.fail > 0 ? kExitFail : 0;
}

struct CampaignFlags {
  long dim = 2;
  long rank = 0;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string family = "generic";
  std::string suite = "all";
  std::string format = "csv";
  std::string out;
  double tol = 1e-8;
};

int campaign(const CampaignFlags& flags, const ScanFlags& scan) {
  shnr::EnsembleSpec spec;
  spec.dim = flags.dim;
  spec.rank = flags.rank > 0 ? flags.rank : flags.dim;
  spec.trials = flags.trials;
  spec.seed = flags.seed;
  spec.family = *shnr::parse_family(flags.family);
  spec.validate();

  shnr::SuiteConfig cfg;
  cfg.scan = scan.config();
  cfg.tol = flags.tol;
  const shnr::Report report = shnr::run_campaign(spec, *shnr::parse_suite(flags.suite), cfg);

  const std::string text =
      flags.format == "json" ? shnr::report_to_json(report).dump(2) + "\n" : shnr::report_to_csv(report);
  if (flags.out.empty()) {
    std::fputs(text.c_str(), stdout);
    print_summary(report.summary, stderr);
  } else {
    shnr::write_file_atomic(flags.out, text);
    print_summary(report.summary, stdout);
  }
  return report.summary.fail > 0 ? kExitFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Hilbertian numerical radius toolkit"};
  app.set_version_flag("--version", shnr::kVersion);
  app.require_subcommand(1);

  const std::vector<std::string> suites{"all", "section2", "section3", "section4"};

  std::string input;
  std::string quantity;
  std::size_t starts = 16;
  ScanFlags compute_scan;
  CLI::App* compute_cmd = app.add_subcommand("compute", "Evaluate one functional of T");
  compute_cmd->add_option("--input", input, "Operator file (JSON)")->required()->check(CLI::ExistingFile);
  compute_cmd->add_option("--quantity", quantity, "Functional to evaluate")
      ->required()
      ->check(CLI::IsMember({"normA", "wA", "crawford", "cos", "sin", "dist", "adjoint", "gap"}));
  compute_cmd->add_option("--starts", starts, "Random starts for cos/sin")->capture_default_str();
  add_scan_flags(compute_cmd, compute_scan);

  std::string suite = "all";
  double tol = 1e-8;
  std::string output;
  ScanFlags verify_scan;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Evaluate inequality certificates for one instance");
  verify_cmd->add_option("--input", input, "Operator file (JSON)")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--suite", suite, "Registry subset")->check(CLI::IsMember(suites))->capture_default_str();
  verify_cmd->add_option("--tol", tol, "Relative verdict tolerance")->capture_default_str();
  verify_cmd->add_option("--output", output, "Report path (JSON); stdout when omitted");
  add_scan_flags(verify_cmd, verify_scan);

  CampaignFlags cflags;
  ScanFlags campaign_scan;
  CLI::App* campaign_cmd = app.add_subcommand("campaign", "Run the suite on a random ensemble");
  campaign_cmd->add_option("--dim", cflags.dim, "Dimension n")->required()->check(CLI::PositiveNumber);
  campaign_cmd->add_option("--rank", cflags.rank, "Rank of A (default n)")->check(CLI::PositiveNumber);
  campaign_cmd->add_option("--trials", cflags.trials, "Number of trials")->capture_default_str();
  campaign_cmd->add_option("--seed", cflags.seed, "Ensemble seed")->capture_default_str();
  campaign_cmd->add_option("--family", cflags.family, "Operator family")
      ->check(CLI::IsMember({"generic", "a_selfadjoint", "a_positive", "nilpotent_classical", "normal_classical"}))
      ->capture_default_str();
  campaign_cmd->add_option("--suite", cflags.suite, "Registry subset")->check(CLI::IsMember(suites))->capture_default_str();
  campaign_cmd->add_option("--output", cflags.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  campaign_cmd->add_option("--out", cflags.out, "Report path; stdout when omitted");
  campaign_cmd->add_option("--tol", cflags.tol, "Relative verdict tolerance")->capture_default_str();
  add_scan_flags(campaign_cmd, campaign_scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*compute_cmd) return compute(input, quantity, compute_scan, starts);
    if (*verify_cmd) return verify(input, suite, tol, output, verify_scan);
    if (*campaign_cmd) return campaign(cflags, campaign_scan);
  } catch (const shnr::NoAdjoint& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNoAdjoint;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
  return kExitInvalid;
}
