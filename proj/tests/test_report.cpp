#include "doctest.h"
#include "patchfeas/report.hpp"

using namespace patchfeas;

namespace {

const std::string kFeas =
    "arch,patch_h,patch_w,mode,log10_bound,classes,max_area,max_side\n"
    "deeplab,20,20,as_printed,48151,19,456,21\n"
    "unet,2,2,as_printed,219,19,171,13\n"
    "unet,5,5,as_printed,1448,19,1216,34\n";

std::string metrics(const std::string& arch, int h, int w, long changed) {
    return "{\"arch\":\"" + arch + "\",\"patch_h\":" + std::to_string(h) +
           ",\"patch_w\":" + std::to_string(w) +
           ",\"changed_pixels\":" + std::to_string(changed) + "}";
}

}  // namespace

TEST_CASE("build_report joins measurements and assigns verdicts") {
    FeasibilityReport rep = build_report(
        kFeas, {metrics("deeplab", 20, 20, 7461), metrics("unet", 2, 2, 171)});
    REQUIRE(rep.rows.size() == 3);

    // sorted by arch, then patch area, then mode
    CHECK(rep.rows[0].arch == "deeplab");
    CHECK(rep.rows[1].arch == "unet");
    CHECK(rep.rows[1].patch_h == 2);
    CHECK(rep.rows[2].patch_h == 5);

    // measured 7461 > max_area 456
    REQUIRE(rep.rows[0].measured_changed_pixels.has_value());
    CHECK(*rep.rows[0].measured_changed_pixels == 7461);
    CHECK(rep.rows[0].verdict == "exceeds");

    // boundary: measured == max_area stays "within"
    CHECK(*rep.rows[1].measured_changed_pixels == 171);
    CHECK(rep.rows[1].verdict == "within");

    // no measurement: blank
    CHECK(!rep.rows[2].measured_changed_pixels.has_value());
    CHECK(rep.rows[2].verdict.empty());
}

TEST_CASE("metrics are keyed by (arch, patch size) keeping the largest footprint") {
    FeasibilityReport rep = build_report(
        kFeas, {metrics("unet", 2, 2, 100), metrics("unet", 2, 2, 500),
                metrics("unet", 2, 2, 300)});
    for (const ReportRow& r : rep.rows) {
        if (r.arch == "unet" && r.patch_h == 2) {
            CHECK(*r.measured_changed_pixels == 500);
            CHECK(r.verdict == "exceeds");
        }
    }
}

TEST_CASE("report csv round trip") {
    FeasibilityReport rep =
        build_report(kFeas, {metrics("deeplab", 20, 20, 7461)});
    std::string csv = report_to_csv(rep);
    FeasibilityReport back = report_from_csv(csv);
    REQUIRE(back.rows.size() == rep.rows.size());
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(back.rows[i].arch == rep.rows[i].arch);
        CHECK(back.rows[i].patch_h == rep.rows[i].patch_h);
        CHECK(back.rows[i].patch_w == rep.rows[i].patch_w);
        CHECK(back.rows[i].mode == rep.rows[i].mode);
        CHECK(back.rows[i].log10_bound == doctest::Approx(rep.rows[i].log10_bound));
        CHECK(back.rows[i].classes == rep.rows[i].classes);
        CHECK(back.rows[i].max_area == rep.rows[i].max_area);
        CHECK(back.rows[i].max_side == rep.rows[i].max_side);
        CHECK(back.rows[i].measured_changed_pixels == rep.rows[i].measured_changed_pixels);
        CHECK(back.rows[i].verdict == rep.rows[i].verdict);
    }
}

TEST_CASE("schema and content errors raise DataError") {
    CHECK_THROWS_AS(build_report("not,a,feasibility,header\n1,2,3,4\n", {}), DataError);
    CHECK_THROWS_AS(build_report("", {}), DataError);
    CHECK_THROWS_AS(build_report(kFeas, {"{\"arch\":\"unet\"}"}), DataError);
    CHECK_THROWS_AS(build_report(kFeas, {"{broken"}), DataError);
    CHECK_THROWS_AS(report_from_csv(kFeas), DataError);  // feasibility header != report header
}
