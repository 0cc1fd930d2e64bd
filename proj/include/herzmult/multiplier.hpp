#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "herzmult/grid.hpp"
#include "herzmult/lp.hpp"
#include "herzmult/norms.hpp"

namespace hm {

// Frequency-side multiplier. The evaluator must be finite on every lattice
// point it is asked about; the support hint lets callers skip evaluation.
struct MultiplierSymbol {
    std::function<cplx(const Point&)> eval;
    int n_terms = 1;
    // m vanishes unless r_min <= |xi| <= r_max.
    double r_min = 0.0;
    double r_max = kInf;
    // Radius containing the bulk of m^vee; 0 when unknown.
    double extent = 0.0;
    std::string tag;

    // Optional decomposition m = sum of pieces, piece j supported in
    // |xi - center e1| < radius with kernel concentrated near x = -shift e1.
    // Enables the windowed class-norm route.
    struct Window {
        double center = 0.0, radius = 0.0, shift = 0.0;
    };
    std::vector<Window> windows;

    cplx operator()(const Point& xi) const { return eval(xi); }
    bool may_be_nonzero(double r) const { return r >= r_min && r <= r_max; }
};

MultiplierSymbol constant_symbol(cplx c);
MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b);
// m * cutoff(|xi| / 2^k), the dyadic slice m_k.
MultiplierSymbol slice_symbol(const MultiplierSymbol& m, int k);

// Samples m on the lattice of a box (zero outside the support hint).
SpectralFunction sample_symbol(const MultiplierSymbol& m, const BoxSpec& box);

// T_m f = (m f^)^vee.
SampledFunction apply(const MultiplierSymbol& m, const SampledFunction& f);
// m f^, with coefficients at the round-off floor dropped.
SpectralFunction apply_spectrum(const MultiplierSymbol& m, SpectralFunction F);
// The same on a piece sum: envelope j becomes m(zeta + c_j e1) E_j^(zeta).
ModulatedPieces apply_pieces(const MultiplierSymbol& m, ModulatedPieces f);

// Kernel of m on a box, i.e. the inverse transform of the lattice samples.
SampledFunction symbol_kernel(const MultiplierSymbol& m, const BoxSpec& box);
// (m(2^k .) cutoff)^vee on a box.
SampledFunction unit_kernel(const MultiplierSymbol& m, int k, const BoxSpec& box);
BoxSpec default_kernel_box(int d);
// {1, 4096, 2^18}: window tables for the Windowed route.
BoxSpec default_window_box();

struct DyadicSlice {
    int k = 0;
    MultiplierSymbol symbol;
    SampledFunction kernel;  // m_k^vee on the frame box
    std::optional<SampledFunction> unit;  // (m(2^k .) cutoff)^vee on the kernel box
};

// Without an explicit kernel box the unit kernel lives on {d, 2^k L, N}, whose
// samples are those of m_k^vee rescaled. It is left empty when that box is
// not admissible or the support hint says the kernel would wrap around.
DyadicSlice dyadic_slice(const MultiplierSymbol& m, int k, const LPFrame& frame,
                         const std::optional<BoxSpec>& kernel_box = std::nullopt);

// UnitBox evaluates the unit-scale kernel on a separate kernel box. Dilated
// reads the same shell norms off m_k^vee on the frame box, which reaches
// 2^k times further in space for k > 0. Windowed (d = 1, symbols with
// windows) tabulates each window's demodulated kernel on the kernel box and
// places it at its own shift, so only the bumps are ever stored.
enum class KernelRoute { UnitBox, Dilated, Windowed };

struct ClassNormOptions {
    KernelRoute route = KernelRoute::UnitBox;
    std::optional<BoxSpec> kernel_box;
    int l_max = -1;  // -1: largest admissible (Windowed: last shell reached)
};

struct ClassNormRow {
    int k = 0;
    double value = 0.0;
    // Last term of the shell sum. Windowed: value times the L^u share of the
    // outer eighth of the window tables, a truncation gauge.
    double last_shell = 0.0;
    bool empty = false;  // slice vanishes by the support hint
};

struct ClassNormResult {
    double value = 0.0;
    double low = 0.0;  // low-pass term of the inhomogeneous norm
    std::vector<ClassNormRow> rows;

    // max/min of the nonempty rows with k in [k_lo, k_hi].
    double spread(int k_lo, int k_hi) const;
};

ClassNormResult class_norm(const MultiplierSymbol& m, const HerzParams& hp, int k_lo, int k_hi,
                           const LPFrame& frame, const ClassNormOptions& opts = {});
ClassNormResult weighted_class_norm(const MultiplierSymbol& m, double u, const WeightSeq& w, int k_lo, int k_hi,
                                    const LPFrame& frame, const ClassNormOptions& opts = {});
// ||(m psi)^vee|| + sup_{1 <= k <= k_hi} ||(m(2^k .) cutoff)^vee||.
ClassNormResult inhomog_class_norm(const MultiplierSymbol& m, const HerzParams& hp, int k_hi, const LPFrame& frame,
                                   const ClassNormOptions& opts = {});

void write_class_norm_csv(std::ostream& os, const ClassNormResult& r);

// ||(m(2^k .) cutoff)^ on the ξ-box, weighted by (1+|x|^2)^{s/2}||_{L^2}; the
// Sobolev side of the Hörmander condition.
double hoermander_piece(const MultiplierSymbol& m, int k, double s, const BoxSpec& xi_box);

// Standard smooth symbols: one, hilbert, imag-power, log-osc, smooth-step.
MultiplierSymbol standard_symbol(const std::string& name, int d);
std::vector<std::string> standard_symbol_names();

// ----- explicit constructions -----

// Bump pair: eta^ supported in |xi| <= r_in, eta >= 0 with eta(0) = 1;
// eta~^ = 1 on |xi| <= r_in and 0 for |xi| >= r_out.
class BumpPair {
public:
    BumpPair(int d = 1, double r_in = 1.0 / 8, double r_out = 1.0 / 4);

    int d() const { return d_; }
    double r_in() const { return r_in_; }
    double r_out() const { return r_out_; }
    // min of eta on |x| <= 1/100, measured.
    double c() const { return c_; }

    double eta_hat(const Point& xi) const;
    double eta_tilde_hat(const Point& xi) const;
    double eta(const Point& x) const;

private:
    double eta_hat_1d(double xi) const;
    double eta_1d(double x) const;

    int d_;
    double r_in_, r_out_, a_, mass_;
    double c_ = 0.0;
};

enum class CaseKind { Besov1, Besov2H, Besov2Lattice, TL0, TL1H, TL2M1, TL2M2, Weighted };
enum class TestKind { FFunc, GFunc, HFunc, BesovF, BesovTrain, HAlpha };

std::string case_name(CaseKind c);
CaseKind case_from_name(const std::string& s);
std::string test_name(TestKind t);
TestKind test_from_name(const std::string& s);

// Term j = 0..n_terms-1 carries the index n = n_start + j, zeta = slope n and
// sits at 2^{zeta - offset}. With spacing > 0 translations are
// +-spacing ceil((j+1)/2) instead of 2^{zeta - offset}.
struct SeriesLayout {
    int n_start = 10;
    int n_terms = 1;
    int slope = 10;
    int offset = 0;
    double spacing = 0.0;

    int index(int j) const { return n_start + j; }
    int zeta(int j) const { return slope * (n_start + j); }
    double place(int j) const;
    double shift(int j) const;
};

struct ExampleCase {
    CaseKind kind = CaseKind::TL0;
    int d = 1;
    double p = 1.0, q = 2.0, u = 1.0, s = 0.0, t = 1.0;
    double tau = 0.5, delta = 0.5, eps = 0.5, alpha = 1.0;
    SeriesLayout layout;
    double r_in = 1.0 / 8, r_out = 1.0 / 4;
    // Box on which the kernel-defined symbols are built.
    double kernel_L = 1024.0;
    int kernel_N = 1 << 14;
    // Skip the parameter side conditions; box limits are still enforced.
    bool relaxed = false;
};

// Parses "key=value" pairs separated by commas or spaces.
ExampleCase parse_example(const std::string& kind, const std::string& params);

struct Violation {
    std::string name;
    std::string detail;
};

// Side-condition and box-limit violations of a construction.
std::vector<Violation> check_example(const ExampleCase& c, const BoxSpec& box);
std::vector<Violation> check_test_function(TestKind kind, const ExampleCase& c, const BoxSpec& box);

MultiplierSymbol build_example(const ExampleCase& c, const BoxSpec& box);
SampledFunction build_test_function(TestKind kind, const ExampleCase& c, const BoxSpec& box);
// Spectrum of the same test function; its inverse transform is build_test_function.
SpectralFunction test_function_spectrum(TestKind kind, const ExampleCase& c, const BoxSpec& box);
// The unit-width test functions (all but H-ALPHA) as modulated pieces on a
// coarse box of side L. Frequencies beyond the coarse Nyquist are fine; each
// center must be a multiple of 1/L.
std::vector<Violation> check_test_pieces(TestKind kind, const ExampleCase& c, const BoxSpec& coarse);
ModulatedPieces test_function_pieces(TestKind kind, const ExampleCase& c, const BoxSpec& coarse);

// lambda_1, ..., lambda_{n_max}; lambda_{k^d} = (k, 0).
std::vector<std::array<long long, 2>> lattice_points(int n_max, int d);

}  // namespace hm
