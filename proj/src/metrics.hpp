#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "attack.hpp"
#include "federation.hpp"

namespace qfal {

inline constexpr const char* kRecordsCsvHeader =
    "phase,clients,coverage,round,split,epsilon,loss,accuracy";

std::string records_to_csv(std::span<const MetricsRecord> records);
void write_records_csv(const std::string& path,
                       std::span<const MetricsRecord> records);

// Final robustness table, one row per coverage level: header
// coverage,eps_<e0>,eps_<e1>,... with accuracies as percentages (2
// decimals). Throws FormatError when a (coverage, epsilon) cell is absent.
std::string final_table_csv(
    const std::vector<std::pair<double, std::vector<RobustnessRow>>>& rows,
    std::span<const double> eps_grid);
void write_final_table_csv(
    const std::string& path,
    const std::vector<std::pair<double, std::vector<RobustnessRow>>>& rows,
    std::span<const double> eps_grid);

// Self-contained SVG with the per-round loss curve (left axis, auto-scaled)
// and accuracy curve (right axis, fixed to [0,1]). Returns false (no file)
// when fewer than two rounds are available.
bool write_convergence_svg(const std::string& path,
                           std::span<const MetricsRecord> phase_records);

// Shortest decimal text that parses back to the same double.
std::string format_compact(double v);

}  // namespace qfal
