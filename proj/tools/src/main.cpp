#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "specdec/errors.hpp"

namespace {

using specdec::cli::RunConfig;

/// One optional per flag so that values from --config JSON survive unless
/// the flag was actually given on the command line.
struct CommonOpts {
    std::optional<std::string> functional, method, grid, filter, input, out_dir;
    std::optional<double> beta, tmin, tmax, tol, base;
    std::optional<std::size_t> steps;
    std::optional<long> max_iter;
    std::optional<std::uint64_t> seed;
    std::optional<int> tail, mean;
    bool complement = false;
    std::string config;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "JSON config file; explicit flags override it");
    cmd->add_option("--functional", o.functional,
                    "tv1d|tv2d-aniso|tv2d-iso|l1-dct|tgv2|collab|grad-collab");
    cmd->add_option("--beta", o.beta, "tgv2 coupling weight in (0,1)");
    cmd->add_option("--method", o.method, "gf|vm|iss");
    cmd->add_option("--grid", o.grid, "uniform|geometric (default depends on method)");
    cmd->add_option("--tmin", o.tmin, "first grid node (gf/iss default 0)");
    cmd->add_option("--tmax", o.tmax,
                    "last grid node; default 1.25 ||f||^2/J(f) (iss: 4 J(f)/||f||^2)");
    cmd->add_option("--steps", o.steps, "number of grid nodes");
    cmd->add_option("--tol", o.tol, "solver duality-gap tolerance, relative to ||f||^2");
    cmd->add_option("--max-iter", o.max_iter, "solver iteration budget per prox");
    cmd->add_option("--in", o.input, "input signal (.csv 1-D, .pgm 2-D)");
    cmd->add_option("--out-dir", o.out_dir, "artifact directory (default .)");
    cmd->add_option("--seed", o.seed, "seed for the built-in diagnostics probes");
}

void add_filter_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--filter", o.filter,
                    "gain intervals \"lo:hi:gain,...\" on the t axis, inf allowed");
    cmd->add_option("--base", o.base, "gain outside the intervals (default 0)");
    cmd->add_option("--tail", o.tail, "pass the unresolved tail, 0|1 (default 1)")
        ->check(CLI::Range(0, 1));
    cmd->add_option("--mean", o.mean, "pass the nullspace part, 0|1 (default 1)")
        ->check(CLI::Range(0, 1));
    cmd->add_flag("--complement", o.complement, "apply 1 - H with flipped flags");
}

RunConfig build_config(const CommonOpts& o) {
    RunConfig cfg;
    if (!o.config.empty()) specdec::cli::apply_config_file(cfg, o.config);
    if (o.functional) cfg.functional = *o.functional;
    if (o.beta) cfg.beta = *o.beta;
    if (o.method) cfg.method = *o.method;
    if (o.grid) cfg.grid = *o.grid;
    if (o.tmin) cfg.t_min = *o.tmin;
    if (o.tmax) cfg.t_max = *o.tmax;
    if (o.steps) cfg.steps = *o.steps;
    if (o.tol) cfg.tol = *o.tol;
    if (o.max_iter) cfg.max_iterations = *o.max_iter;
    if (o.filter) cfg.filter = *o.filter;
    if (o.base) cfg.base_gain = *o.base;
    if (o.tail) cfg.pass_tail = *o.tail != 0;
    if (o.mean) cfg.pass_mean = *o.mean != 0;
    if (o.complement) cfg.complement = true;
    if (o.input) cfg.input = *o.input;
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.seed) cfg.seed = *o.seed;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scale-space spectral decomposition toolkit"};
    app.set_version_flag("--version", "specdec 1.0.0");
    app.require_subcommand(1);

    specdec::cli::GenOptions gen_opts;
    CLI::App* gen = app.add_subcommand("gen", "write a seeded synthetic input signal");
    gen->add_option("--kind", gen_opts.kind,
                    "step|pwlinear|sinusoid|collab-peaks|collab-jumps")
        ->required();
    gen->add_option("--n", gen_opts.n, "1-D length (0 = kind default)");
    gen->add_option("--rows", gen_opts.rows, "ensemble rows (0 = kind default)");
    gen->add_option("--cols", gen_opts.cols, "ensemble columns (0 = kind default)");
    gen->add_option("--seed", gen_opts.seed, "noise and layout seed");
    gen->add_option("--noise", gen_opts.noise, "white noise standard deviation");
    gen->add_option("--out", gen_opts.out, "output file (.csv or .pgm)")->required();

    CommonOpts dec_opts;
    CLI::App* dec = app.add_subcommand(
        "decompose", "run a scale-space method and write bands, spectra, diagnostics");
    add_common(dec, dec_opts);

    CommonOpts spec_opts;
    CLI::App* spec =
        app.add_subcommand("spectrum", "write spectrum CSVs and report density peaks");
    add_common(spec, spec_opts);

    CommonOpts filt_opts;
    std::string manifest_path, out_path;
    CLI::App* filt = app.add_subcommand(
        "filter", "apply a transfer function to a decomposition and write the result");
    add_common(filt, filt_opts);
    add_filter_opts(filt, filt_opts);
    filt->add_option("--manifest", manifest_path,
                     "reuse a prior decompose run (checked against the input hash)");
    filt->add_option("--out", out_path, "filtered signal file")->required();

    CommonOpts ver_opts;
    CLI::App* ver = app.add_subcommand(
        "verify", "run the invariant suite and exit 0 only if every check passes");
    add_common(ver, ver_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return specdec::cli::cmd_gen(gen_opts);
        if (dec->parsed()) return specdec::cli::cmd_decompose(build_config(dec_opts));
        if (spec->parsed()) return specdec::cli::cmd_spectrum(build_config(spec_opts));
        if (filt->parsed())
            return specdec::cli::cmd_filter(build_config(filt_opts), manifest_path,
                                            out_path);
        if (ver->parsed()) return specdec::cli::cmd_verify(build_config(ver_opts));
    } catch (const specdec::cli::ManifestMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const specdec::SolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const specdec::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
