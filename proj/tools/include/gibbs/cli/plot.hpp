#pragma once

#include "gibbs/cli/csv.hpp"

#include <string>
#include <vector>

namespace gibbs::cli {

// Semilog-y plot of value against b_size, one polyline per quantity, with the
// least-squares exponential fit drawn dashed where one exists. Rows that are
// floor-flagged or nonpositive cannot be placed on a log axis and are skipped.
// Throws SchemaMismatch when there are no rows.
std::string render_svg(const std::vector<ResultRow>& rows);

}  // namespace gibbs::cli
