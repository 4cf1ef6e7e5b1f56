#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "specdec/detail/rng.hpp"
#include "specdec/errors.hpp"
#include "specdec/nullspace.hpp"
#include "specdec/transforms.hpp"

namespace specdec::cli {

namespace fs = std::filesystem;

void apply_config_file(RunConfig& cfg, const fs::path& path) {
    const json j = read_json_file(path);
    if (!j.is_object()) throw ParameterError(path.string() + ": config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "functional") cfg.functional = value.get<std::string>();
        else if (key == "beta") cfg.beta = value.get<double>();
        else if (key == "method") cfg.method = value.get<std::string>();
        else if (key == "grid") cfg.grid = value.get<std::string>();
        else if (key == "tmin") cfg.t_min = value.get<double>();
        else if (key == "tmax") cfg.t_max = value.get<double>();
        else if (key == "steps") cfg.steps = value.get<std::size_t>();
        else if (key == "tol") cfg.tol = value.get<double>();
        else if (key == "max_iterations") cfg.max_iterations = value.get<long>();
        else if (key == "filter") cfg.filter = value.get<std::string>();
        else if (key == "base") cfg.base_gain = value.get<double>();
        else if (key == "tail") cfg.pass_tail = value.get<int>() != 0;
        else if (key == "mean") cfg.pass_mean = value.get<int>() != 0;
        else if (key == "complement") cfg.complement = value.get<bool>();
        else if (key == "in") cfg.input = value.get<std::string>();
        else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else throw ParameterError(path.string() + ": unknown config key \"" + key + "\"");
    }
}

FunctionalSpec make_functional(const RunConfig& cfg) {
    const std::string& k = cfg.functional;
    if (k == "tv1d") return FunctionalSpec::tv1d();
    if (k == "tv2d-aniso" || k == "tv2d_aniso") return FunctionalSpec::tv2d_aniso();
    if (k == "tv2d-iso" || k == "tv2d_iso") return FunctionalSpec::tv2d_iso();
    if (k == "l1-dct" || k == "l1_dct") return FunctionalSpec::l1_analysis(dct_transform());
    if (k == "tgv2") return FunctionalSpec::tgv2(cfg.beta);
    if (k == "collab" || k == "collab_linf1") return FunctionalSpec::collab_linf1();
    if (k == "grad-collab" || k == "grad_collab_linf1")
        return FunctionalSpec::grad_collab_linf1();
    throw ParameterError("unknown functional \"" + k +
                         "\" (tv1d, tv2d-aniso, tv2d-iso, l1-dct, tgv2, collab, grad-collab)");
}

Method make_method(const RunConfig& cfg) {
    std::string token = cfg.method;
    if (token == "iss") token = "is";
    const auto m = parse_method(token);
    if (!m) throw ParameterError("unknown method \"" + cfg.method + "\" (gf, vm, iss)");
    return *m;
}

SolverOptions make_solver_options(const RunConfig& cfg) {
    SolverOptions opts;
    opts.tol = cfg.tol;
    opts.max_iterations = cfg.max_iterations;
    return opts;
}

namespace {

double parse_extent(const std::string& tok) {
    if (tok == "inf") return std::numeric_limits<double>::infinity();
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
        throw ParameterError("bad filter number \"" + tok + "\"");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t stop = s.find(sep, start);
        if (stop == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, stop - start));
        start = stop + 1;
    }
    return out;
}

} // namespace

std::vector<FilterInterval> parse_filter_intervals(const std::string& spec) {
    std::vector<FilterInterval> out;
    if (spec.empty()) return out;
    for (const std::string& item : split(spec, ',')) {
        const std::vector<std::string> parts = split(item, ':');
        if (parts.size() != 3)
            throw ParameterError("filter interval \"" + item + "\" is not lo:hi:gain");
        out.push_back({parse_extent(parts[0]), parse_extent(parts[1]),
                       parse_extent(parts[2])});
    }
    return out;
}

TransferFunction make_transfer_function(const RunConfig& cfg) {
    TransferFunction H;
    if (cfg.filter.empty() && !cfg.base_gain && !cfg.pass_tail && !cfg.pass_mean) {
        H = TransferFunction::all_pass();
    } else {
        H = TransferFunction::from_intervals(parse_filter_intervals(cfg.filter),
                                             cfg.base_gain.value_or(0.0),
                                             cfg.pass_tail.value_or(true),
                                             cfg.pass_mean.value_or(true));
    }
    return cfg.complement ? H.complement() : H;
}

PathRun run_decomposition(const Signal& f, const RunConfig& cfg) {
    FunctionalSpec J = make_functional(cfg);
    J.validate_shape(f);
    const Method m = make_method(cfg);
    const SolverOptions opts = make_solver_options(cfg);

    Signal datum = f;
    Signal nullspace_part = Signal::zeros_like(f);
    if (m == Method::gradient_flow) {
        const NullspaceSplit split = remove_nullspace(J, f);
        datum = split.f0;
        nullspace_part = split.n0;
    }

    double t_max = cfg.t_max;
    if (t_max < 0.0) {
        // Automatic horizon from the mean scale J(f)/||f||^2: for an
        // eigenfunction it overshoots the extinction time by exactly the
        // chosen factor. Mixed signals may need an explicit --tmax.
        const double nsq = inner(datum, datum);
        double lam = 0.0;
        if (nsq > 0.0) lam = evaluate(J, datum, opts) / nsq;
        if (lam > 0.0)
            t_max = m == Method::inverse_scale ? 4.0 * lam : 1.25 / lam;
        else
            t_max = 1.0;  // datum is in the nullspace; any horizon works
    }

    std::string grid_kind = cfg.grid;
    if (grid_kind.empty())
        grid_kind = m == Method::variational ? "geometric" : "uniform";
    double t_min = cfg.t_min;
    if (t_min < 0.0) t_min = m == Method::variational ? t_max * 1e-3 : 0.0;

    TimeGrid grid = [&] {
        if (grid_kind == "uniform") return TimeGrid::uniform(t_min, t_max, cfg.steps);
        if (grid_kind == "geometric") return TimeGrid::geometric(t_min, t_max, cfg.steps);
        throw ParameterError("unknown grid kind \"" + grid_kind + "\" (uniform, geometric)");
    }();

    ScalePath path = [&] {
        switch (m) {
            case Method::gradient_flow: return run_gradient_flow(datum, J, grid, opts);
            case Method::variational: return run_variational_path(datum, J, grid, opts);
            case Method::inverse_scale:
                return run_inverse_scale_space(datum, J, grid, opts);
        }
        throw ParameterError("unreachable method");
    }();

    SpectralDecomposition dec = m == Method::inverse_scale ? frequency_bands(path)
                                                           : wavelength_bands(path);
    dec.nullspace = nullspace_part;

    return PathRun{std::move(J), std::move(path), std::move(dec), f};
}

namespace {

std::string band_filename(std::size_t k, bool two_d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "band_%03zu.%s", k, two_d ? "pgm" : "csv");
    return buf;
}

} // namespace

void write_spectrum_csv(const fs::path& path, const std::string& header,
                        const std::vector<double>& x, const std::vector<double>& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << header << '\n';
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_value(x[i]) << ',' << format_value(s[i]) << '\n';
}

SpectrumTable l1_spectrum_table(const SpectralDecomposition& dec) {
    SpectrumTable table;
    if (dec.domain == SpectralDomain::wavelength) {
        table.axis = "t";
        const Spectrum sp = spectrum_l1(dec);
        table.x = sp.t;
        table.S = sp.S;
        return table;
    }
    table.axis = "s";
    for (const Band& b : dec.bands) {
        const double w = b.s_hi - b.s_lo;
        if (!std::isfinite(w) || w <= 0.0) continue;
        table.x.push_back(b.s_location);
        table.S.push_back(norm1(b.atom) / w);
    }
    return table;
}

json write_decompose_artifacts(const fs::path& out_dir, const PathRun& run,
                               const LoadedSignal& input) {
    fs::create_directories(out_dir);
    const bool two_d = run.f.dim() == 2;
    const bool is_gf = run.path.method == Method::gradient_flow;
    const bool wavelength = run.dec.domain == SpectralDomain::wavelength;

    json bands = json::array();
    for (std::size_t k = 0; k < run.dec.bands.size(); ++k) {
        const Band& b = run.dec.bands[k];
        const std::string file = band_filename(k, two_d);
        write_signal(out_dir / file, b.atom);
        json entry;
        entry["index"] = k;
        entry["file"] = file;
        entry["t_lo"] = json_number(b.t_lo);
        entry["t_hi"] = json_number(b.t_hi);
        entry["t_location"] = json_number(b.t_location);
        entry["s_lo"] = json_number(b.s_lo);
        entry["s_hi"] = json_number(b.s_hi);
        entry["s_location"] = json_number(b.s_location);
        entry["mass_l1"] = norm1(b.atom);
        bands.push_back(std::move(entry));
    }

    const std::string sig_ext = two_d ? ".pgm" : ".csv";
    const std::string tail_file = "tail" + sig_ext;
    write_signal(out_dir / tail_file, run.dec.tail);

    json nullspace_file;  // null unless the decomposition carries one
    if (norm2(run.dec.nullspace) > 0.0) {
        nullspace_file = "nullspace" + sig_ext;
        write_signal(out_dir / nullspace_file.get<std::string>(), run.dec.nullspace);
    }

    const SpectrumTable table = l1_spectrum_table(run.dec);
    write_spectrum_csv(out_dir / "spectrum_l1.csv", table.axis + ",S_l1", table.x,
                       table.S);

    json spectra;
    spectra["l1"] = "spectrum_l1.csv";
    spectra["energy"] = nullptr;
    if (is_gf) {
        const Spectrum en = spectrum_energy(run.path);
        write_spectrum_csv(out_dir / "spectrum_energy.csv", "t,S_energy", en.t, en.S);
        spectra["energy"] = "spectrum_energy.csv";
    }

    json diagnostics;
    const double fent = norm2(run.f);
    diagnostics["reconstruction_error"] =
        fent > 0.0 ? norm2(reconstruct(run.dec) - run.f) / fent : 0.0;
    if (run.path.extinction_index)
        diagnostics["extinction_time"] = run.path.grid[*run.path.extinction_index];
    else
        diagnostics["extinction_time"] = nullptr;
    diagnostics["parseval"] = nullptr;
    diagnostics["orthogonality_ratio"] = nullptr;
    if (is_gf) {
        diagnostics["orthogonality_ratio"] = orthogonality_report(run.path, run.dec);
        if (run.path.extinction_index) {
            const ParsevalReport rep = parseval_report(run.path.f, run.path);
            json p;
            p["norm_sq"] = rep.norm_sq;
            p["from_j"] = rep.from_j;
            p["from_spectrum"] = rep.from_spectrum;
            p["j_error"] = rep.j_error;
            p["spectrum_error"] = rep.spectrum_error;
            p["clipped_mass"] = rep.clipped_mass;
            diagnostics["parseval"] = std::move(p);
        }
    }
    write_json_file(out_dir / "diagnostics.json", diagnostics);

    json manifest;
    manifest["tool"] = "specdec";
    manifest["command"] = "decompose";
    json in;
    in["file"] = input.source.filename().string();
    in["hash"] = input.hash;
    in["rows"] = run.f.dim() == 2 ? json(run.f.rows()) : json(nullptr);
    in["cols"] = run.f.dim() == 2 ? json(run.f.cols()) : json(nullptr);
    in["size"] = run.f.size();
    in["spacing"] = run.f.spacing();
    manifest["input"] = std::move(in);
    manifest["functional"] = run.J.name();
    manifest["method"] = method_name(run.path.method);
    manifest["domain"] = wavelength ? "wavelength" : "frequency";
    json grid;
    grid["kind"] = run.path.grid.is_uniform() ? "uniform" : "geometric";
    grid["t_min"] = run.path.grid.front();
    grid["t_max"] = run.path.grid.back();
    grid["steps"] = run.path.grid.size();
    manifest["grid"] = std::move(grid);
    manifest["bands"] = std::move(bands);
    manifest["tail"] = tail_file;
    manifest["nullspace"] = nullspace_file;
    manifest["spectra"] = std::move(spectra);
    manifest["diagnostics"] = "diagnostics.json";
    write_json_file(out_dir / "manifest.json", manifest);
    return manifest;
}

json write_empty_artifacts(const fs::path& out_dir, const RunConfig& cfg,
                           const LoadedSignal& input) {
    const FunctionalSpec J = make_functional(cfg);
    J.validate_shape(input.signal);
    const Method m = make_method(cfg);

    fs::create_directories(out_dir);
    const bool two_d = input.signal.dim() == 2;
    const bool wavelength = m != Method::inverse_scale;
    const std::string sig_ext = two_d ? ".pgm" : ".csv";
    const std::string tail_file = "tail" + sig_ext;
    write_signal(out_dir / tail_file, Signal::zeros_like(input.signal));

    write_spectrum_csv(out_dir / "spectrum_l1.csv", wavelength ? "t,S_l1" : "s,S_l1", {},
                       {});
    json spectra;
    spectra["l1"] = "spectrum_l1.csv";
    spectra["energy"] = nullptr;
    if (m == Method::gradient_flow) {
        write_spectrum_csv(out_dir / "spectrum_energy.csv", "t,S_energy", {}, {});
        spectra["energy"] = "spectrum_energy.csv";
    }

    json diagnostics;
    diagnostics["reconstruction_error"] = 0.0;
    diagnostics["extinction_time"] = 0.0;
    diagnostics["parseval"] = nullptr;
    diagnostics["orthogonality_ratio"] = nullptr;
    write_json_file(out_dir / "diagnostics.json", diagnostics);

    json manifest;
    manifest["tool"] = "specdec";
    manifest["command"] = "decompose";
    json in;
    in["file"] = input.source.filename().string();
    in["hash"] = input.hash;
    in["rows"] = two_d ? json(input.signal.rows()) : json(nullptr);
    in["cols"] = two_d ? json(input.signal.cols()) : json(nullptr);
    in["size"] = input.signal.size();
    in["spacing"] = input.signal.spacing();
    manifest["input"] = std::move(in);
    manifest["functional"] = J.name();
    manifest["method"] = method_name(m);
    manifest["domain"] = wavelength ? "wavelength" : "frequency";
    manifest["grid"] = nullptr;
    manifest["bands"] = json::array();
    manifest["tail"] = tail_file;
    manifest["nullspace"] = nullptr;
    manifest["spectra"] = std::move(spectra);
    manifest["diagnostics"] = "diagnostics.json";
    write_json_file(out_dir / "manifest.json", manifest);
    return manifest;
}

SpectralDecomposition load_decomposition(const fs::path& manifest_path,
                                         const json& manifest, const Signal& f) {
    const fs::path dir = manifest_path.parent_path();
    SpectralDecomposition dec;
    try {
        const std::string mtoken = manifest.at("method").get<std::string>();
        const auto m = parse_method(mtoken);
        if (!m) throw ParameterError("manifest has unknown method \"" + mtoken + "\"");
        dec.method = *m;
        const std::string dtoken = manifest.at("domain").get<std::string>();
        if (dtoken == "wavelength") dec.domain = SpectralDomain::wavelength;
        else if (dtoken == "frequency") dec.domain = SpectralDomain::frequency;
        else throw ParameterError("manifest has unknown domain \"" + dtoken + "\"");

        for (const json& entry : manifest.at("bands")) {
            Band b;
            b.atom = read_signal(dir / entry.at("file").get<std::string>()).signal;
            if (!b.atom.same_shape(f))
                throw ParameterError("band " + entry.at("file").get<std::string>() +
                                     " does not match the input shape");
            b.t_lo = number_from_json(entry.at("t_lo"));
            b.t_hi = number_from_json(entry.at("t_hi"));
            b.t_location = number_from_json(entry.at("t_location"));
            b.s_lo = number_from_json(entry.at("s_lo"));
            b.s_hi = number_from_json(entry.at("s_hi"));
            b.s_location = number_from_json(entry.at("s_location"));
            dec.bands.push_back(std::move(b));
        }
        dec.tail = read_signal(dir / manifest.at("tail").get<std::string>()).signal;
        if (manifest.at("nullspace").is_null())
            dec.nullspace = Signal::zeros_like(f);
        else
            dec.nullspace =
                read_signal(dir / manifest.at("nullspace").get<std::string>()).signal;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(manifest_path.string() + ": malformed manifest: " + e.what());
    }
    if (!dec.tail.same_shape(f))
        throw ParameterError("manifest tail does not match the input shape");
    dec.f = f;
    return dec;
}

Signal generate_signal(const std::string& kind, std::size_t n, std::size_t rows,
                       std::size_t cols, std::uint64_t seed, double noise) {
    detail::Rng rng(seed);
    Signal s;
    if (kind == "step") {
        std::vector<double> v(n, 0.0);
        for (std::size_t i = n / 2; i < n; ++i) v[i] = 1.0;
        s = Signal(std::move(v));
    } else if (kind == "pwlinear") {
        // Three linear pieces with two jumps, slopes scaled so the shape
        // is resolution independent.
        std::vector<double> v(n);
        const std::size_t b1 = n / 3, b2 = 2 * n / 3;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) / static_cast<double>(n);
            if (i < b1) v[i] = 0.5 + 2.56 * x;
            else if (i < b2) v[i] = -1.0 + 3.84 * (x - 1.0 / 3.0);
            else v[i] = 1.5 - 5.12 * (x - 2.0 / 3.0);
        }
        s = Signal(std::move(v));
    } else if (kind == "sinusoid") {
        std::vector<double> z(n, 0.0);
        if (n < 21) throw ParameterError("sinusoid kind needs n >= 21");
        z[3] = 2.0;
        z[7] = 1.0;
        z[20] = 0.5;
        s = dct_transform()->inverse(z, Signal::zeros(n));
    } else if (kind == "collab-peaks") {
        std::vector<double> v(rows * cols, 0.0);
        const std::size_t active = std::max<std::size_t>(1, rows / 4);
        std::set<std::size_t> support;
        while (support.size() < active)
            support.insert(static_cast<std::size_t>(rng.next_u64() % rows));
        for (std::size_t i : support)
            for (std::size_t j = 0; j < cols; ++j) {
                const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                v[i * cols + j] = sign * rng.uniform(0.5, 2.0);
            }
        s = Signal(std::move(v), rows, cols);
    } else if (kind == "collab-jumps") {
        std::vector<double> v(rows * cols, 0.0);
        const std::size_t jump_row = rows / 2;
        for (std::size_t j = 0; j < cols; ++j) {
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            const double amp = sign * rng.uniform(1.0, 2.0);
            for (std::size_t i = jump_row; i < rows; ++i) v[i * cols + j] += amp;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t where =
                2 + static_cast<std::size_t>(rng.next_u64() %
                                             std::max<std::size_t>(1, jump_row - 4));
            v[where * cols + j] += 0.15;
        }
        s = Signal(std::move(v), rows, cols);
    } else {
        throw ParameterError("unknown kind \"" + kind +
                             "\" (step, pwlinear, sinusoid, collab-peaks, collab-jumps)");
    }
    if (noise > 0.0) {
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += noise * rng.normal();
    }
    return s;
}

} // namespace specdec::cli
