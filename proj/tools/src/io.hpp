#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "specdec/signal.hpp"

namespace specdec::cli {

using json = nlohmann::ordered_json;

/// A signal read from disk together with the hash of the file bytes,
/// which manifests record so later runs can detect a swapped input.
struct LoadedSignal {
    Signal signal;
    std::string hash;  // "fnv1a64:<16 hex digits>"
    std::filesystem::path source;
};

/// FNV-1a 64-bit over raw bytes, formatted as "fnv1a64:%016x".
std::string fnv1a_hash(const std::string& bytes);
std::string hash_file(const std::filesystem::path& path);

/// Reads a .csv file (one value per line, '#' comments allowed) as a 1-D
/// signal, or a .pgm file (P2 or P5, maxval <= 65535) as a 2-D signal.
/// A "<file>.json" sidecar next to a PGM supplies the affine map
/// value = offset + scale * pixel and the grid spacing; without one the
/// pixel values are taken verbatim with spacing 1. Throws ParameterError
/// on unreadable or malformed files.
LoadedSignal read_signal(const std::filesystem::path& path);

/// Writes a 1-D signal as CSV with %.17g values (lossless round trip) or
/// a 2-D signal as ASCII PGM rescaled to [0, 65535] plus the JSON sidecar
/// holding the affine map. The format follows the signal's dimension; the
/// extension must match (.csv for 1-D, .pgm for 2-D).
void write_signal(const std::filesystem::path& path, const Signal& s);

/// JSON value for a double: plain number when finite, "inf"/"-inf"
/// strings otherwise (JSON itself has no infinities).
json json_number(double x);
double number_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

/// %.17g rendering used by every CSV writer.
std::string format_value(double x);

} // namespace specdec::cli
