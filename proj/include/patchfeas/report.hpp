#pragma once

#include <optional>
#include <string>
#include <vector>

#include "patchfeas/errors.hpp"

namespace patchfeas {

// One feasibility row, optionally joined with a measured attack footprint.
struct ReportRow {
    std::string arch;
    int patch_h = 0;
    int patch_w = 0;
    std::string mode;
    double log10_bound = 0.0;
    int classes = 0;
    long max_area = 0;
    long max_side = 0;
    std::optional<long> measured_changed_pixels;
    // "exceeds" when measured > max_area, "within" otherwise; empty without a
    // measurement.
    std::string verdict;
};

struct FeasibilityReport {
    std::vector<ReportRow> rows;
};

// Joins a feasibility CSV (as written by the feasibility workflow) with any
// number of attack metrics JSON files on (arch, patch_h, patch_w).
// Row order: arch, then patch area, then mode.
FeasibilityReport build_report(const std::string& feasibility_csv_text,
                               const std::vector<std::string>& metrics_json_texts);

std::string report_to_csv(const FeasibilityReport& report);
FeasibilityReport report_from_csv(const std::string& csv_text);

}  // namespace patchfeas
