#pragma once

#include "rtadapt/adapt.hpp"
#include "rtadapt/config.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rtadapt {

/// Rates aligned to iterations 2..k; NaN where undefined.
std::vector<double> eoc_series(std::span<const RunRecord> history, bool use_estimator);

/// Formats with 17 significant digits, or the literal `nan`.
std::string format_number(double v);

extern const char* const history_header;

/// The history table, preceded by a `#` line stating the marking convention.
void write_history_csv(std::ostream& out, std::span<const RunRecord> history);

/// element_id, eta_D, eta_R, eta_NC, eta_C, eta_U, xi, total.
void write_estimator_csv(std::ostream& out, const EstimatorBreakdown& estimators);

/// vertex, value.
void write_nodal_csv(std::ostream& out, std::span<const double> values);

/// Runs the configured study and writes its artifacts into config.out.
/// Throws on solver or IO failure.
LoopResult run_study(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace rtadapt
