#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"
#include "specdec/flows.hpp"
#include "specdec/functionals.hpp"
#include "specdec/spectral.hpp"

namespace specdec::cli {

/// One validated run description. Every command reads the subset it
/// needs; JSON config files and command line flags both land here, flags
/// winning over file values.
struct RunConfig {
    std::string functional = "tv1d";
    double beta = 0.5;  // tgv2 coupling
    std::string method = "gf";
    std::string grid;      // "uniform" | "geometric"; empty picks the method default
    double t_min = -1.0;   // negative picks the method default
    double t_max = -1.0;   // negative picks an automatic horizon from J(f)/||f||^2
    std::size_t steps = 120;
    double tol = 1e-8;
    long max_iterations = 50000;
    std::string filter;    // "lo:hi:gain,..." with inf allowed
    std::optional<double> base_gain;
    std::optional<bool> pass_tail;
    std::optional<bool> pass_mean;
    bool complement = false;
    std::string input;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
};

/// Loads a JSON object of config keys into cfg. Keys mirror the command
/// line flags (tmin, tmax, in, ...); unknown keys are rejected.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

FunctionalSpec make_functional(const RunConfig& cfg);
Method make_method(const RunConfig& cfg);
SolverOptions make_solver_options(const RunConfig& cfg);

/// Parses "lo:hi:gain,lo:hi:gain,...". Empty string means no intervals.
std::vector<FilterInterval> parse_filter_intervals(const std::string& spec);

/// Transfer function from the config's filter fields. When none of the
/// filter, base, tail and mean fields were given the result is the
/// identity (all-pass); otherwise missing pieces default to base gain 0
/// with tail and mean passed. A complement flag flips the whole thing.
TransferFunction make_transfer_function(const RunConfig& cfg);

struct PathRun {
    FunctionalSpec J;
    ScalePath path;
    SpectralDecomposition dec;  // wavelength for gf/vm, frequency for is
    Signal f;                   // the full input, nullspace included
};

/// Runs the configured scale-space method on f and extracts the band
/// decomposition. The gradient flow splits off the nullspace first and
/// reattaches it to the decomposition so reconstruction returns f.
PathRun run_decomposition(const Signal& f, const RunConfig& cfg);

/// L1 density of the bands over their own axis: t for wavelength
/// decompositions, s for frequency ones. Bands with unbounded bins are
/// skipped (a density needs a finite width).
struct SpectrumTable {
    std::string axis;  // "t" or "s"
    std::vector<double> x;
    std::vector<double> S;
};
SpectrumTable l1_spectrum_table(const SpectralDecomposition& dec);

void write_spectrum_csv(const std::filesystem::path& path, const std::string& header,
                        const std::vector<double>& x, const std::vector<double>& s);

/// Writes band files, spectrum CSVs, diagnostics JSON and the manifest
/// into out_dir; returns the manifest. `input` names the analyzed file
/// and its hash for later integrity checks.
json write_decompose_artifacts(const std::filesystem::path& out_dir, const PathRun& run,
                               const LoadedSignal& input);

/// Artifacts for an identically-zero input: no bands, header-only
/// spectrum, reconstruction error 0. No solver runs.
json write_empty_artifacts(const std::filesystem::path& out_dir, const RunConfig& cfg,
                           const LoadedSignal& input);

/// Rebuilds a decomposition from a manifest written by
/// write_decompose_artifacts. Band files are resolved relative to the
/// manifest's directory. Throws ParameterError on malformed manifests.
SpectralDecomposition load_decomposition(const std::filesystem::path& manifest_path,
                                         const json& manifest, const Signal& f);

/// Seeded synthetic inputs. 1-D kinds: "step", "pwlinear" (piecewise
/// linear with jumps), "sinusoid" (three-atom DCT mixture). 2-D ensemble
/// kinds: "collab-peaks" (sparse active rows), "collab-jumps" (one shared
/// jump plus small private events). noise is the standard deviation of
/// added white Gaussian noise.
Signal generate_signal(const std::string& kind, std::size_t n, std::size_t rows,
                       std::size_t cols, std::uint64_t seed, double noise);

} // namespace specdec::cli
