#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "patchfeas/manifest.hpp"

using namespace patchfeas;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

}  // namespace

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64(nullptr, 0) == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar", 6) == 0x85944171f73967e8ull);
    CHECK(fnv1a64_hex("a", 1) == "af63dc4c8601ec8c");
}

TEST_CASE("manifest round trip detects tampering and loss") {
    fs::path dir = fresh_dir("patchfeas_manifest_test");
    spit(dir / "a.bin", "hello");
    spit(dir / "b.bin", "world");

    write_manifest(dir.string(), {"patchfeas", "gen-data", "--seed", "7"}, 7,
                   {"a.bin", "b.bin"});
    fs::path mpath = dir / "manifest.json";
    REQUIRE(fs::exists(mpath));

    CHECK(verify_manifest(mpath.string()).empty());

    spit(dir / "a.bin", "HELLO");
    auto changed = verify_manifest(mpath.string());
    REQUIRE(changed.size() == 1);
    CHECK(changed[0].find("a.bin") != std::string::npos);

    fs::remove(dir / "b.bin");
    changed = verify_manifest(mpath.string());
    CHECK(changed.size() == 2);

    fs::remove_all(dir);
}

TEST_CASE("file fingerprint matches the in-memory hash") {
    fs::path dir = fresh_dir("patchfeas_fingerprint_test");
    spit(dir / "x", "foobar");
    CHECK(file_fingerprint((dir / "x").string()) == fnv1a64_hex("foobar", 6));
    fs::remove_all(dir);
}
