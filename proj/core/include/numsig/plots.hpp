#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "numsig/experiment.hpp"

namespace numsig {

struct PlotOptions {
  bool cost_frontier = true;   // needs results.csv; envelopes overlay when present
  bool term_frequency = true;  // needs term_histogram.csv
  bool consensus = false;      // needs consensus.csv
  std::optional<std::vector<HumanSystemCost>> human_costs;
};

// Renders SVG analogues of the cost-vs-terms scatter (with best/worst
// envelopes and human-system markers), the term-usage bar chart and the
// consensus strip chart into `dir`. Inputs are the CSVs in `dir`; a figure
// whose backing table is absent raises an error naming that table.
// Output bytes are a pure function of the inputs.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir,
                                              const PlotOptions& options = {});

}  // namespace numsig
