#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "specdec/errors.hpp"

namespace specdec::cli {

namespace fs = std::filesystem;

std::string fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Signal read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str() + first, &end);
        bool trailing_junk = false;
        for (const char* p = end; *p; ++p)
            if (*p != ' ' && *p != '\t' && *p != '\r') trailing_junk = true;
        if (end == line.c_str() + first || trailing_junk || !std::isfinite(v))
            throw ParameterError(path.string() + ":" + std::to_string(lineno) +
                                 ": expected one finite value per line, got \"" + line +
                                 "\"");
        values.push_back(v);
    }
    if (values.empty()) throw ParameterError(path.string() + ": no values");
    return Signal(std::move(values));
}

/// Next whitespace-delimited token, skipping '#' comments to end of line.
std::string pgm_token(std::istream& in, const fs::path& path) {
    std::string tok;
    char c;
    while (in.get(c)) {
        if (c == '#') {
            while (in.get(c) && c != '\n') {
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(c);
    }
    if (tok.empty()) throw ParameterError(path.string() + ": truncated PGM header");
    return tok;
}

long pgm_number(std::istream& in, const fs::path& path) {
    const std::string tok = pgm_token(in, path);
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || v < 0)
        throw ParameterError(path.string() + ": bad PGM header token \"" + tok + "\"");
    return v;
}

Signal read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open " + path.string());
    const std::string magic = pgm_token(in, path);
    if (magic != "P2" && magic != "P5")
        throw ParameterError(path.string() + ": not a P2/P5 PGM file");
    const long cols = pgm_number(in, path);
    const long rows = pgm_number(in, path);
    const long maxval = pgm_number(in, path);
    if (cols <= 0 || rows <= 0 || maxval <= 0 || maxval > 65535)
        throw ParameterError(path.string() + ": unsupported PGM geometry");

    std::vector<double> pixels;
    pixels.reserve(static_cast<std::size_t>(rows * cols));
    if (magic == "P2") {
        for (long i = 0; i < rows * cols; ++i)
            pixels.push_back(static_cast<double>(pgm_number(in, path)));
    } else {
        // The tokenizer consumed exactly one whitespace after maxval, so
        // the stream sits at the first payload byte. Two-byte samples are
        // big-endian per the format.
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(static_cast<std::size_t>(rows * cols * bytes));
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            throw ParameterError(path.string() + ": truncated P5 payload");
        for (long i = 0; i < rows * cols; ++i) {
            unsigned v = raw[static_cast<std::size_t>(i * bytes)];
            if (bytes == 2) v = (v << 8) | raw[static_cast<std::size_t>(i * bytes + 1)];
            pixels.push_back(static_cast<double>(v));
        }
    }

    double offset = 0.0, scale = 1.0, spacing = 1.0;
    const fs::path sidecar = path.string() + ".json";
    if (fs::exists(sidecar)) {
        const json meta = read_json_file(sidecar);
        offset = meta.value("offset", 0.0);
        scale = meta.value("scale", 1.0);
        spacing = meta.value("spacing", 1.0);
    }
    for (double& v : pixels) v = offset + scale * v;
    return Signal(std::move(pixels), static_cast<std::size_t>(rows),
                  static_cast<std::size_t>(cols), spacing);
}

} // namespace

std::string hash_file(const fs::path& path) { return fnv1a_hash(slurp(path)); }

LoadedSignal read_signal(const fs::path& path) {
    const std::string ext = path.extension().string();
    LoadedSignal out{Signal{}, hash_file(path), path};
    if (ext == ".csv" || ext == ".txt")
        out.signal = read_csv(path);
    else if (ext == ".pgm")
        out.signal = read_pgm(path);
    else
        throw ParameterError(path.string() + ": unknown input format (use .csv or .pgm)");
    return out;
}

std::string format_value(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_signal(const fs::path& path, const Signal& s) {
    const std::string ext = path.extension().string();
    if (s.dim() == 1) {
        if (ext != ".csv" && ext != ".txt")
            throw ParameterError(path.string() + ": 1-D signals are written as .csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ParameterError("cannot write " + path.string());
        for (std::size_t i = 0; i < s.size(); ++i) out << format_value(s[i]) << '\n';
        return;
    }
    if (ext != ".pgm")
        throw ParameterError(path.string() + ": 2-D signals are written as .pgm");

    double lo = s[0], hi = s[0];
    for (std::size_t i = 0; i < s.size(); ++i) {
        lo = std::min(lo, s[i]);
        hi = std::max(hi, s[i]);
    }
    const double scale = hi > lo ? (hi - lo) / 65535.0 : 1.0;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << "P2\n" << s.cols() << ' ' << s.rows() << "\n65535\n";
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j) {
            const double q = std::round((s.at(i, j) - lo) / scale);
            out << static_cast<long>(std::clamp(q, 0.0, 65535.0));
            out << (j + 1 == s.cols() ? '\n' : ' ');
        }
    }
    out.close();

    json meta;
    meta["offset"] = lo;
    meta["scale"] = scale;
    meta["spacing"] = s.spacing();
    write_json_file(fs::path(path.string() + ".json"), meta);
}

json json_number(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
}

double number_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ParameterError("expected a number, got \"" + s + "\"");
    }
    return j.get<double>();
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(path.string() + ": " + e.what());
    }
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace specdec::cli
