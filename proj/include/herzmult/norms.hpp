#pragma once

#include <vector>

#include "herzmult/coefficients.hpp"
#include "herzmult/grid.hpp"
#include "herzmult/lp.hpp"

namespace hm {

struct HerzParams {
    double u = 1.0;
    double t = 1.0;
    double s = 0.0;
};

struct SpaceParams {
    double p = 2.0;
    double q = 2.0;
    double alpha = 0.0;
    bool homogeneous = true;
};

// Nondecreasing weights w(0), w(1), ... with w(0) >= 1.
struct WeightSeq {
    std::vector<double> values;

    WeightSeq() = default;
    explicit WeightSeq(std::vector<double> v);
    template <class F>
    static WeightSeq from(int l_max, F&& w) {
        std::vector<double> v;
        for (int l = 0; l <= l_max; ++l) v.push_back(w(l));
        return WeightSeq(std::move(v));
    }
    std::size_t size() const { return values.size(); }
    double operator[](std::size_t l) const { return values[l]; }
};

struct HerzResult {
    double value = 0.0;
    // 2^{s l_max} ||f||_{L^u(B_{l_max})}, the last term of the shell sum.
    double last_shell = 0.0;
    std::vector<double> shell_norms;  // ||f||_{L^u(B_l)}, l = 0..l_max
};

// Index of the last shell B_l = {2^l < |x| <= 2^{l+1}} that fits in the box.
int max_shell(const BoxSpec& box);
// Shell index of a radius, or -1 for none (never happens for r >= 0).
int shell_of(double r);

// L^u norms on B_0..B_{l_max}.
std::vector<double> shell_norms(const SampledFunction& f, double u, int l_max);
// Shell norms of the dilate 2^{-kd} f(2^{-k} .), read off f itself. Shells
// reach up to max_shell(box) + k.
std::vector<double> shell_norms_dilated(const SampledFunction& f, double u, int k, int l_max);

HerzResult herz_from_shells(std::vector<double> norms, const HerzParams& hp);
// Least-squares slope of log (2^{sl} ||f||_{L^u(B_l)})^t against log(1+l) over
// l_lo..l_hi. Slopes at or above -1 mean the shell sum keeps growing.
double shell_tail_exponent(const HerzResult& r, const HerzParams& hp, int l_lo, int l_hi);
double weighted_from_shells(std::vector<double> norms, double u, const WeightSeq& w);

HerzResult herz_norm_ex(const SampledFunction& f, const HerzParams& hp, int l_max);
double herz_norm(const SampledFunction& f, const HerzParams& hp, int l_max);
double herz_norm(const SampledFunction& f, const HerzParams& hp);

double weighted_herz_norm(const SampledFunction& f, double u, const WeightSeq& w, int l_max);
double weighted_herz_norm(const SampledFunction& f, double u, const WeightSeq& w);

struct BpqResult {
    double value = 0.0;
    bool divergent = false;
    // Fitted decay exponent of the summands in (1+l).
    double tail_exponent = 0.0;
};

BpqResult bpq_constant(const WeightSeq& w, double p, double q);

double besov_norm(const SampledFunction& f, const SpaceParams& sp, const LPFrame& frame);
// Homogeneous F-norms with finite p for several parameter sets, from one pass
// that holds a single band at a time. Bands the spectrum cannot reach are skipped.
std::vector<double> tl_norms(const SampledFunction& f, const std::vector<SpaceParams>& sps, const LPFrame& frame);
std::vector<double> tl_norms(const SpectralFunction& F, const std::vector<SpaceParams>& sps, const LPFrame& frame);
double tl_norm(const SampledFunction& f, const SpaceParams& sp, const LPFrame& frame);

// sum_j e^{2 pi i c_j x_1} E_j(x), each envelope E_j given by its spectrum on
// a coarse box. The centers c_j are lattice frequencies of the coarse box
// (multiples of 1/L), so the pieces stand for the function whose spectrum is
// E_j^ moved to c_j e1 on any box of side L, however far c_j lies beyond the
// coarse Nyquist frequency.
struct ModulatedPieces {
    BoxSpec coarse;
    std::vector<double> centers;
    std::vector<SpectralFunction> envelopes;

    // Largest |zeta| carrying a coefficient above the spectral floor.
    double envelope_radius() const;
};

// tl_norms of a piece sum over bands k_min..k_max, evaluated on the coarse
// box. A band holding several pieces is demodulated by the first of them, so
// their centers must lie within the coarse Nyquist frequency of each other;
// contributions below the spectral floor do not count. Throws "coarse-box"
// otherwise.
std::vector<double> tl_norms(const ModulatedPieces& f, const std::vector<SpaceParams>& sps, int k_min, int k_max);

// Norms from precomputed bands: bands[i] carries scale k_first + i.
double besov_from_bands(const std::vector<SampledFunction>& bands, int k_first, const SpaceParams& sp);
double tl_from_bands(const std::vector<SampledFunction>& bands, int k_first, const SpaceParams& sp);

// sup over dyadic cubes P with scale in [coarsest, finest] of
// (|P|^{-1} int_P sum_{k >= -log2 l(P)} |g_k|^q)^{1/q}.
double cube_tail_sup(const std::vector<SampledFunction>& g, int k_first, double q, int coarsest, int finest);

double sobolev_norm(const SampledFunction& g, double s);

// Pointwise g^{alpha,q}(b) on the grid.
SampledFunction sequence_function(const CoefficientMap& b, double alpha, double q);
double sequence_norm(const CoefficientMap& b, const SpaceParams& sp);

struct NikolskiiValues {
    double lhs = 0.0;
    double classical = 0.0;
    double improved = 0.0;
};

NikolskiiValues nikolskii_check(const SampledFunction& f, int k, double p, double q);

}  // namespace hm
