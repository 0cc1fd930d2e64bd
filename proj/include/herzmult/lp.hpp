#pragma once

#include <iosfwd>
#include <vector>

#include "herzmult/grid.hpp"

namespace hm {

// Smooth dyadic resolution of unity on a box, with the derived cutoffs.
// All profiles are radial and evaluated at r = |xi|.
class LPFrame {
public:
    LPFrame(int k_min, int k_max, const BoxSpec& box);

    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    const BoxSpec& box() const { return box_; }

    // C^infinity bump on (1/2, 2), zero elsewhere.
    static double ramp(double t);
    // Band profile phi_k. Defined for every integer k, independent of the range.
    static double band(int k, double r);
    // 1 on [1/2, 2], supported in [1/4, 4].
    static double cutoff(double r);
    // 1 on [0, 1], supported in [0, 2]; also the low-pass Phi_0 = 1 - sum_{k>=1} phi_k.
    static double lowpass(double r);
    // Analysis/synthesis pair at unit scale; scale k is theta(2^{-k} r).
    static double theta(double r);
    static double theta_dual(double r);

    // Smallest value of |theta| on [3/4, 5/3], sampled finely.
    static double theta_lower_bound();

private:
    int k_min_, k_max_;
    BoxSpec box_;
};

LPFrame build_frame(int k_min, int k_max, const BoxSpec& box);

// Largest feasible scale range for a box.
std::pair<int, int> feasible_range(const BoxSpec& box);

// Relative magnitude below which spectral coefficients count as round-off.
inline constexpr double kSpectralFloor = 1e-14;

// Multiply the spectrum by a radial profile and transform back.
SampledFunction radial_filter(const SampledFunction& f, double (*profile)(double));
SampledFunction radial_filter(const SpectralFunction& F, const std::function<double(double)>& profile);

SampledFunction project(const SampledFunction& f, int k, const LPFrame& frame);
SampledFunction project_inhomogeneous(const SampledFunction& f, int k, const LPFrame& frame);

// Pi_k f for k = k_min..k_max (homogeneous) or Lambda_k f for k = 0..k_max.
std::vector<SampledFunction> all_bands(const SampledFunction& f, const LPFrame& frame, bool inhomogeneous = false);

// Tabulates the profiles at `samples` log-spaced radii.
void write_frame_csv(std::ostream& os, const LPFrame& frame, int samples = 512);

}  // namespace hm
