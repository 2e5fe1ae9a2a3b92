#pragma once

#include "shnr/ensembles.hpp"
#include "shnr/io.hpp"

namespace shnr {

/// Runs the suite on every trial of the ensemble. Trials are evaluated in
/// parallel; the report is assembled in trial order, so it does not depend on
/// the thread count.
Report run_campaign(const EnsembleSpec& spec, Suite suite, const SuiteConfig& cfg = {});

}  // namespace shnr
