#pragma once

#include <cstddef>
#include <vector>

#include "specdec/flows.hpp"
#include "specdec/signal.hpp"

namespace specdec {

enum class SpectralDomain { wavelength, frequency };

/// One band of a decomposition: the integral of the spectral measure over
/// one grid bin. Both coordinate systems are stored at construction
/// (s = 1/t, with 0 <-> inf), so switching representation never recomputes
/// anything and round trips are bit-exact.
struct Band {
    Signal atom;
    double t_location, s_location;
    double t_lo, t_hi;
    double s_lo, s_hi;

    double location(SpectralDomain d) const {
        return d == SpectralDomain::wavelength ? t_location : s_location;
    }
    double width(SpectralDomain d) const {
        return d == SpectralDomain::wavelength ? t_hi - t_lo : s_hi - s_lo;
    }
};

/// Finite-sum representation of the spectral measure of a scale path:
/// sum of band atoms + tail + nullspace reconstructs the analyzed datum
/// exactly (a telescoping identity, independent of solver accuracy).
/// `nullspace` starts at zero; a pipeline that split the datum beforehand
/// assigns the removed component here so reconstruction returns the
/// original signal.
struct SpectralDecomposition {
    Method method;
    SpectralDomain domain;
    std::vector<Band> bands;  // ordered by increasing location in `domain`
    Signal tail;
    Signal nullspace;
    Signal f;  // the path datum the bands telescope back to
};

/// Bands of the wavelength representation from a GF or VM path (use
/// to_wavelength for IS paths). The path is read as piecewise linear in t;
/// the band at node k integrates t * u'' over the node's bin:
///   Phi_k = t_k (D_k - D_{k-1}),  D_k = (u_{k+1} - u_k)/(t_{k+1} - t_k),
/// where D_{-1} is the slope of the segment joining (0, f) to (t_0, u_0)
/// when t_0 > 0 and zero otherwise. The tail is the last segment's linear
/// extrapolation to t = 0: u_last - t_last * D_last. Needs >= 3 nodes.
SpectralDecomposition wavelength_bands(const ScalePath& path);

/// Bands of the frequency representation from an IS path: the increment
/// Psi_k = v_{k+1} - v_k over the bin [s_k, s_{k+1}); tail = f - v_last.
/// Needs >= 3 nodes.
SpectralDecomposition frequency_bands(const ScalePath& path);

/// Representation switches: atoms are bin integrals of the measure, so
/// only the labels map (t = 1/s) and the order reverses. Round trip is
/// the identity, bit for bit.
SpectralDecomposition to_wavelength(const SpectralDecomposition& dec);
SpectralDecomposition to_frequency(const SpectralDecomposition& dec);

/// Sum of all band atoms + tail + nullspace.
Signal reconstruct(const SpectralDecomposition& dec);

/// Piecewise-constant gain over the t axis: `base_gain` outside a set of
/// disjoint intervals [lo, hi), plus binary pass flags for the tail and
/// nullspace parts. Filters always read the t coordinate of a band, so a
/// filter means the same thing in both representations.
struct FilterInterval {
    double lo, hi, gain;
};

class TransferFunction {
public:
    /// H == 1 everywhere, tail and nullspace passed.
    static TransferFunction all_pass();

    /// Intervals must be disjoint with lo < hi (hi may be inf). An
    /// interval containing inf also matches t = inf.
    static TransferFunction from_intervals(std::vector<FilterInterval> intervals,
                                           double base_gain, bool pass_tail,
                                           bool pass_nullspace);

    double at(double t) const;
    bool pass_tail() const { return pass_tail_; }
    bool pass_nullspace() const { return pass_nullspace_; }
    const std::vector<FilterInterval>& intervals() const { return intervals_; }
    double base_gain() const { return base_gain_; }

    /// 1 - H with both flags flipped, so f_H + f_{1-H} = f exactly.
    TransferFunction complement() const;

private:
    std::vector<FilterInterval> intervals_;
    double base_gain_ = 1.0;
    bool pass_tail_ = true;
    bool pass_nullspace_ = true;
};

/// sum_k H(t_k) Phi_k + [pass_tail] tail + [pass_nullspace] nullspace.
Signal apply_filter(const SpectralDecomposition& dec, const TransferFunction& H);

enum class SpectrumKind { l1, energy };

struct Spectrum {
    SpectrumKind kind;
    std::vector<double> t;      // bin representatives (nodes or midpoints)
    std::vector<double> width;  // bin widths
    std::vector<double> S;      // nonnegative density values
    /// Energy spectra only: fraction of |S^2| area that was negative and
    /// got clipped to zero (convexity predicts none).
    double clipped_mass = 0.0;
};

/// L1 density ||Phi_k||_L1 / bin width at the band nodes. Wavelength
/// representation only. Bands with infinite bins report density 0.
Spectrum spectrum_l1(const SpectralDecomposition& dec);

/// Energy density at segment midpoints of a GF path, from the dissipation
/// identity dJ(u(t))/dt = -||p(t)||^2:
///   S_k^2 = t_{k+1/2}^2 (||p_k||^2 - ||p_{k+1}||^2) / (t_{k+1} - t_k).
/// Negative values are clipped to zero and accounted in clipped_mass.
Spectrum spectrum_energy(const ScalePath& path);

/// max_k |<Phi_k, u_k>| / (||Phi_k|| ||f|| + eps) over a GF path and its
/// wavelength decomposition; O(step) small in continuous-time theory. The
/// datum norm anchors the denominator so the ratio stays meaningful on
/// bands where u has almost vanished.
double orthogonality_report(const ScalePath& path, const SpectralDecomposition& dec);

struct ParsevalReport {
    double norm_sq;        // ||f||^2
    double from_j;         // 2 * trapezoid over nodes of <p_k, u_k>
    double from_spectrum;  // trapezoid over midpoints of S_energy^2
    double j_error;        // relative errors against norm_sq (0 when f = 0)
    double spectrum_error;
    double clipped_mass;
};

/// Both discrete Parseval identities for a GF path that reached
/// extinction: ||f||^2 = 2 int J(u(t)) dt = int S(t)^2 dt, with
/// J(u_k) = <p_k, u_k> by one-homogeneity.
ParsevalReport parseval_report(const Signal& f, const ScalePath& path);

} // namespace specdec
