#include "shnr/campaign.hpp"

#include "shnr/parallel.hpp"

namespace shnr {

Report run_campaign(const EnsembleSpec& spec, Suite suite, const SuiteConfig& cfg) {
  spec.validate();
  cfg.scan.validate();
  std::vector<std::vector<Certificate>> results(spec.trials);
  parallel_for(spec.trials, [&](std::size_t trial) {
    const SemiHilbertSpace sp = gen_space(spec, trial);
    Operands ops;
    ops.t = gen_operator(spec, sp, trial, 0);
    ops.s = gen_operator(spec, sp, trial, 1);
    ops.r = gen_operator(spec, sp, trial, 2);
    results[trial] = run_suite(suite, sp, ops, cfg);
  });

  Report report;
  report.command = "campaign";
  report.config = {{"dim", spec.dim},
                   {"rank", spec.rank},
                   {"trials", spec.trials},
                   {"seed", spec.seed},
                   {"family", to_string(spec.family)},
                   {"suite", to_string(suite)},
                   {"tol", cfg.tol},
                   {"grid_points", cfg.scan.grid_points},
                   {"refine_tol", cfg.scan.refine_tol},
                   {"max_refine_iters", cfg.scan.max_refine_iters},
                   {"cos_starts", cfg.cos_starts}};
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    for (Certificate& cert : results[trial]) {
      report.summary.add(cert);
      report.records.push_back({trial, std::move(cert)});
    }
  }
  return report;
}

}  // namespace shnr
