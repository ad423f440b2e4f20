#include "patchfeas/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace patchfeas {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::vector<std::string>& expect_header) {
    std::stringstream ss(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    bool first = true;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (first) {
            if (fields != expect_header) throw DataError("csv schema mismatch: got header '" + line + "'");
            first = false;
            continue;
        }
        rows.push_back(std::move(fields));
    }
    if (first) throw DataError("csv is empty");
    return rows;
}

const std::vector<std::string> kFeasibilityHeader = {
    "arch", "patch_h", "patch_w", "mode", "log10_bound", "classes", "max_area", "max_side"};

const std::vector<std::string> kReportHeader = {
    "arch",     "patch_h",  "patch_w",  "mode",
    "log10_bound", "classes", "max_area", "max_side",
    "measured_changed_pixels", "verdict"};

void sort_rows(std::vector<ReportRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.arch != b.arch) return a.arch < b.arch;
        long aa = static_cast<long>(a.patch_h) * a.patch_w;
        long bb = static_cast<long>(b.patch_h) * b.patch_w;
        if (aa != bb) return aa < bb;
        return a.mode < b.mode;
    });
}

}  // namespace

FeasibilityReport build_report(const std::string& feasibility_csv_text,
                               const std::vector<std::string>& metrics_json_texts) {
    FeasibilityReport report;
    for (const auto& fields : parse_csv(feasibility_csv_text, kFeasibilityHeader)) {
        if (fields.size() != kFeasibilityHeader.size())
            throw DataError("feasibility csv: wrong column count");
        ReportRow r;
        r.arch = fields[0];
        r.patch_h = std::stoi(fields[1]);
        r.patch_w = std::stoi(fields[2]);
        r.mode = fields[3];
        r.log10_bound = std::stod(fields[4]);
        r.classes = std::stoi(fields[5]);
        r.max_area = std::stol(fields[6]);
        r.max_side = std::stol(fields[7]);
        report.rows.push_back(std::move(r));
    }

    // measured footprint per (arch, patch_h, patch_w): keep the largest
    std::map<std::tuple<std::string, int, int>, long> measured;
    for (const std::string& text : metrics_json_texts) {
        nlohmann::json m;
        try {
            m = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(std::string("metrics json: ") + e.what());
        }
        if (!m.contains("arch") || !m.contains("patch_h") || !m.contains("patch_w") ||
            !m.contains("changed_pixels"))
            throw DataError("metrics json: missing arch/patch_h/patch_w/changed_pixels");
        auto key = std::make_tuple(m["arch"].get<std::string>(), m["patch_h"].get<int>(),
                                   m["patch_w"].get<int>());
        long cp = m["changed_pixels"].get<long>();
        auto it = measured.find(key);
        if (it == measured.end() || cp > it->second) measured[key] = cp;
    }

    for (ReportRow& r : report.rows) {
        auto it = measured.find(std::make_tuple(r.arch, r.patch_h, r.patch_w));
        if (it == measured.end()) continue;
        r.measured_changed_pixels = it->second;
        // equality does not contradict generality, so the boundary is "within"
        r.verdict = it->second > r.max_area ? "exceeds" : "within";
    }

    sort_rows(report.rows);
    return report;
}

std::string report_to_csv(const FeasibilityReport& report) {
    std::ostringstream out;
    for (size_t i = 0; i < kReportHeader.size(); ++i)
        out << kReportHeader[i] << (i + 1 < kReportHeader.size() ? "," : "\n");
    for (const ReportRow& r : report.rows) {
        out << r.arch << ',' << r.patch_h << ',' << r.patch_w << ',' << r.mode << ','
            << r.log10_bound << ',' << r.classes << ',' << r.max_area << ',' << r.max_side << ',';
        if (r.measured_changed_pixels) out << *r.measured_changed_pixels;
        out << ',' << r.verdict << '\n';
    }
    return out.str();
}

FeasibilityReport report_from_csv(const std::string& csv_text) {
    FeasibilityReport report;
    for (const auto& fields : parse_csv(csv_text, kReportHeader)) {
        if (fields.size() != kReportHeader.size())
            throw DataError("report csv: wrong column count");
        ReportRow r;
        r.arch = fields[0];
        r.patch_h = std::stoi(fields[1]);
        r.patch_w = std::stoi(fields[2]);
        r.mode = fields[3];
        r.log10_bound = std::stod(fields[4]);
        r.classes = std::stoi(fields[5]);
        r.max_area = std::stol(fields[6]);
        r.max_side = std::stol(fields[7]);
        if (!fields[8].empty()) r.measured_changed_pixels = std::stol(fields[8]);
        r.verdict = fields[9];
        report.rows.push_back(std::move(r));
    }
    return report;
}

}  // namespace patchfeas
