#pragma once

#include <stdexcept>
#include <string>

#include "pipeline.hpp"

namespace specdec::cli {

/// A filter run against a stored manifest whose recorded input hash does
/// not match the file on disk. Mapped to its own exit code.
struct ManifestMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenOptions {
    std::string kind;
    std::size_t n = 0;     // 0 picks the kind's default size
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t seed = 1;
    double noise = 0.0;
    std::string out;
};

int cmd_gen(const GenOptions& opts);
int cmd_decompose(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_filter(const RunConfig& cfg, const std::string& manifest_path,
               const std::string& out_path);
int cmd_verify(const RunConfig& cfg);

} // namespace specdec::cli
