#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace patchfeas {

// FNV-1a 64-bit, hex-encoded. Cheap content fingerprint for run manifests.
uint64_t fnv1a64(const void* data, size_t n);
std::string fnv1a64_hex(const void* data, size_t n);
std::string file_fingerprint(const std::string& path);

// Writes <out_dir>/manifest.json with the full argv, the seed and a
// fingerprint per artifact, enabling byte-level replay checks. Relative
// artifact paths are resolved against out_dir.
void write_manifest(const std::string& out_dir, const std::vector<std::string>& argv,
                    uint64_t seed, const std::vector<std::string>& artifact_paths);

// Recomputes every artifact fingerprint recorded in a manifest; returns the
// paths that changed (empty means intact).
std::vector<std::string> verify_manifest(const std::string& manifest_path);

}  // namespace patchfeas
