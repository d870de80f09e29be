#pragma once

#include <string>

#include "json.hpp"

#include "core/analysis.hpp"

namespace mbv {

// Everything needed to reproduce a report from its own inputs block.
struct ReportInputs {
    std::string trades_path;
    std::string portfolio_path;
    std::string window_mode = "explicit";  // explicit | whole_series
    double window_center = 0.0;
    double window_width = 0.0;
    int buckets = 0;
    bool lenient = false;
    std::string format = "json";
};

nlohmann::ordered_json build_report(const AnalysisResult& analysis,
                                    const ReportInputs& inputs);

// Deterministic rendering: stable key order, floats at 17 significant
// digits, 2-space indentation, trailing newline. Non-finite numbers render
// as null.
std::string serialize_report(const nlohmann::ordered_json& document);

// Flat CSV rendering: scalar metrics as dotted paths, then the per-security
// table and the beta/chi/theta matrices.
std::string report_csv(const nlohmann::ordered_json& document);

}  // namespace mbv
