#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "aircomp/fading_solver.hpp"
#include "aircomp/lowcomplexity.hpp"
#include "aircomp/types.hpp"
#include "aircomp/waterfilling.hpp"

namespace aircomp {

/// Deterministic shortest-round-trip rendering ("%.17g"); infinities come
/// out as the literal token "inf".
std::string format_double(double v);

/// Extra key/value lines written as leading '#' comments.
using CsvHeaderBlock = std::vector<std::pair<std::string, std::vector<double>>>;

/// Per-state rows: state_index, weight, eta, p_1..p_K.
void write_policy_csv(std::ostream& os, const FadingEnsemble& ens, const PowerPolicy& policy,
                      const CsvHeaderBlock& header = {});

/// Policy CSV with mu_1..mu_K, dual, primal, gap in the header block.
void write_fading_solution_csv(std::ostream& os, const FadingEnsemble& ens,
                               const FadingSolution& sol);

/// Policy CSV with mu1, threshold, peak_gain in the header block.
void write_waterfilling_solution_csv(std::ostream& os, const FadingEnsemble& ens,
                                     const WaterfillingSolution& sol);

/// Single row: eta, xi_1..xi_K, inversion_prob_1..K, objective.
void write_truncation_policy_csv(std::ostream& os, const LowComplexitySolution& sol);

}  // namespace aircomp
