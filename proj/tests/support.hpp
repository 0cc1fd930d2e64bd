#pragma once

#include <cmath>
#include <random>

#include "herzmult/grid.hpp"
#include "herzmult/lp.hpp"

namespace hmtest {

using hm::BoxSpec;
using hm::cplx;
using hm::SampledFunction;
using hm::SpectralFunction;

inline double rel_l2(const SampledFunction& a, const SampledFunction& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += std::norm(a.values[i] - b.values[i]);
        den += std::norm(b.values[i]);
    }
    return std::sqrt(num / den);
}

inline double max_abs(const SampledFunction& a) {
    double m = 0;
    for (const auto& v : a.values) m = std::max(m, std::abs(v));
    return m;
}

inline SampledFunction random_function(const BoxSpec& box, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SampledFunction f(box);
    for (auto& v : f.values) v = {g(rng), g(rng)};
    return f;
}

// Random spectrum on lo <= |xi| <= hi, smoothly tapered so it decays in space.
inline SampledFunction random_band_limited(const BoxSpec& box, unsigned seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SpectralFunction F(box);
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        double r = box.frequency_norm(i);
        cplx z{g(rng), g(rng)};
        if (r >= lo && r <= hi) F.coeffs[i] = z;
    }
    return hm::inverse_transform(F);
}

// Spatially localized function with spectrum in lo <= |xi| <= hi: a random
// combination of modulated Gaussians filtered to the band.
inline SampledFunction random_localized_band(const BoxSpec& box, unsigned seed, double lo, double hi,
                                             int terms = 6) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double width = 4.0 / (hi - lo);
    SampledFunction f(box);
    for (int t = 0; t < terms; ++t) {
        double c1 = 4 * uni(rng), c2 = 4 * uni(rng);
        double xi = lo + (hi - lo) * (0.5 + 0.5 * uni(rng));
        double ang = hm::kPi * uni(rng);
        double w1 = xi * std::cos(ang), w2 = box.d == 2 ? xi * std::sin(ang) : 0.0;
        if (box.d == 1) w1 = uni(rng) < 0 ? -xi : xi;
        cplx amp{uni(rng), uni(rng)};
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            auto x = box.point(i);
            double r2 = (x[0] - c1) * (x[0] - c1) + (box.d == 2 ? (x[1] - c2) * (x[1] - c2) : 0.0);
            f.values[i] += amp * std::exp(-r2 / (width * width)) *
                           std::polar(1.0, 2 * hm::kPi * (w1 * x[0] + w2 * x[1]));
        }
    }
    SpectralFunction F = hm::forward_transform(f);
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        double r = box.frequency_norm(i);
        if (r < lo || r > hi) F.coeffs[i] = 0;
    }
    return hm::inverse_transform(F);
}

}  // namespace hmtest
