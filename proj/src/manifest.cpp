#include "patchfeas/manifest.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "patchfeas/errors.hpp"

namespace patchfeas {

uint64_t fnv1a64(const void* data, size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(const void* data, size_t n) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data, n)));
    return buf;
}

std::string file_fingerprint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for fingerprinting: " + path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return fnv1a64_hex(bytes.data(), bytes.size());
}

void write_manifest(const std::string& out_dir, const std::vector<std::string>& argv,
                    uint64_t seed, const std::vector<std::string>& artifact_paths) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json m;
    m["argv"] = argv;
    m["seed"] = seed;
    m["artifacts"] = nlohmann::json::object();
    for (const std::string& p : artifact_paths) {
        std::filesystem::path full = std::filesystem::path(p).is_absolute()
                                         ? std::filesystem::path(p)
                                         : std::filesystem::path(out_dir) / p;
        std::string rel = std::filesystem::relative(full, out_dir).string();
        m["artifacts"][rel] = file_fingerprint(full.string());
    }
    std::ofstream f(out_dir + "/manifest.json", std::ios::trunc);
    if (!f) throw DataError("cannot write manifest in " + out_dir);
    f << m.dump(2) << "\n";
}

std::vector<std::string> verify_manifest(const std::string& manifest_path) {
    std::ifstream f(manifest_path);
    if (!f) throw DataError("cannot open manifest: " + manifest_path);
    nlohmann::json m = nlohmann::json::parse(f);
    std::string dir = std::filesystem::path(manifest_path).parent_path().string();
    if (dir.empty()) dir = ".";
    std::vector<std::string> changed;
    for (auto it = m.at("artifacts").begin(); it != m.at("artifacts").end(); ++it) {
        std::string path = dir + "/" + it.key();
        std::string now;
        try {
            now = file_fingerprint(path);
        } catch (const DataError&) {
            changed.push_back(it.key());
            continue;
        }
        if (now != it.value().get<std::string>()) changed.push_back(it.key());
    }
    return changed;
}

}  // namespace patchfeas
