#pragma once

#include <string>

#include "ihda/controller.hpp"
#include "ihda/translate.hpp"

namespace ihda {

/// Graphviz rendering of the k-truncation (k <= 2): 0-cells as nodes,
/// 1-cells as labelled edges, 2-cells as shaded annotation nodes tied to
/// their four corners.
std::string to_dot(const Ihda& ihda, int k);

/// Full cell store: [{marking, concset, dim, input, output}, ...].
std::string cells_to_json(const Ihda& ihda);

/// Findings as a JSON array, maximal cells first within each kind.
std::string report_to_json(const Ihda& ihda, const AnalysisReport& report);

}  // namespace ihda
