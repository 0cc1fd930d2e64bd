#include "herzmult/lp.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace hm {

namespace {

double bump(double s) {
    if (s <= -1.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

// phi_k(r) = bump(x - k) / sum_j bump(x - j) with x = log2 r.
double band_at(int k, double x) {
    double s = x - k;
    if (s <= -1.0 || s >= 1.0) return 0.0;
    double base = std::floor(x);
    double denom = 0.0;
    for (int j = -1; j <= 2; ++j) denom += bump(x - (base + j));
    return bump(s) / denom;
}

}  // namespace

double LPFrame::ramp(double t) {
    if (!(t > 0)) return 0.0;
    return bump(std::log2(t));
}

double LPFrame::band(int k, double r) {
    if (!(r > 0)) return 0.0;
    return band_at(k, std::log2(r));
}

double LPFrame::cutoff(double r) {
    if (r >= 0.5 && r <= 2.0) return 1.0;
    if (!(r > 0.25) || r >= 4.0) return 0.0;
    double x = std::log2(r);
    return band_at(-1, x) + band_at(0, x) + band_at(1, x);
}

double LPFrame::lowpass(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    return band(0, r);
}

double LPFrame::theta(double r) { return std::sqrt(band(0, r)); }
double LPFrame::theta_dual(double r) { return std::sqrt(band(0, r)); }

double LPFrame::theta_lower_bound() {
    double lo = 1.0;
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        double r = 0.75 + (5.0 / 3.0 - 0.75) * i / n;
        lo = std::min(lo, std::min(theta(r), theta_dual(r)));
    }
    return lo;
}

std::pair<int, int> feasible_range(const BoxSpec& box) {
    // 2^{k_max+1} < Nyquist and 2^{k_min-1} > 1/L.
    int k_max = int(std::ceil(std::log2(box.nyquist()))) - 2;
    int k_min = int(std::floor(std::log2(1.0 / box.L))) + 2;
    return {k_min, k_max};
}

LPFrame::LPFrame(int k_min, int k_max, const BoxSpec& box) : k_min_(k_min), k_max_(k_max), box_(box) {
    box.validate();
    if (k_min > k_max) throw PreconditionError("frame-range", "k_min exceeds k_max");
    if (!(std::ldexp(1.0, k_max + 1) < box.nyquist()))
        throw PreconditionError("frame-range", "2^(k_max+1) = " + std::to_string(std::ldexp(1.0, k_max + 1)) +
                                                   " must be below the Nyquist frequency " +
                                                   std::to_string(box.nyquist()));
    if (!(std::ldexp(1.0, k_min - 1) > 1.0 / box.L))
        throw PreconditionError("frame-range", "2^(k_min-1) = " + std::to_string(std::ldexp(1.0, k_min - 1)) +
                                                   " must exceed the lowest frequency 1/L = " +
                                                   std::to_string(1.0 / box.L));
    if (!(theta_lower_bound() > 0.1)) throw PreconditionError("frame-bound", "theta lower bound too small");
}

LPFrame build_frame(int k_min, int k_max, const BoxSpec& box) { return LPFrame(k_min, k_max, box); }

SampledFunction radial_filter(const SpectralFunction& F, const std::function<double(double)>& profile) {
    SpectralFunction G = F;
    // Coefficients at the transform's round-off floor are dropped, so bands
    // that the profile misses come out exactly zero. Quasi-norms with
    // exponent below 1 would otherwise amplify the residue.
    double peak = 0;
    for (const auto& c : G.coeffs) peak = std::max(peak, std::abs(c));
    const double floor = kSpectralFloor * peak;
    for (std::size_t i = 0; i < G.coeffs.size(); ++i) {
        if (std::abs(G.coeffs[i]) <= floor) {
            G.coeffs[i] = 0.0;
            continue;
        }
        G.coeffs[i] *= profile(G.box.frequency_norm(i));
    }
    return inverse_transform(G);
}

SampledFunction radial_filter(const SampledFunction& f, double (*profile)(double)) {
    return radial_filter(forward_transform(f), std::function<double(double)>(profile));
}

namespace {

void check_box(const SampledFunction& f, const LPFrame& frame) { require_same_box(f.box, frame.box()); }

SampledFunction band_from_spectrum(const SpectralFunction& F, int k) {
    return radial_filter(F, [k](double r) { return LPFrame::band(k, r); });
}

}  // namespace

SampledFunction project(const SampledFunction& f, int k, const LPFrame& frame) {
    check_box(f, frame);
    if (k < frame.k_min() || k > frame.k_max())
        throw PreconditionError("scale-range", "k=" + std::to_string(k) + " outside the frame range");
    return band_from_spectrum(forward_transform(f), k);
}

SampledFunction project_inhomogeneous(const SampledFunction& f, int k, const LPFrame& frame) {
    check_box(f, frame);
    if (k < 0) throw PreconditionError("scale-range", "inhomogeneous index must be nonnegative");
    if (k > 0) return project(f, k, frame);
    return radial_filter(forward_transform(f), [](double r) { return LPFrame::lowpass(r); });
}

std::vector<SampledFunction> all_bands(const SampledFunction& f, const LPFrame& frame, bool inhomogeneous) {
    check_box(f, frame);
    SpectralFunction F = forward_transform(f);
    std::vector<SampledFunction> out;
    if (inhomogeneous) {
        out.push_back(radial_filter(F, [](double r) { return LPFrame::lowpass(r); }));
        for (int k = 1; k <= frame.k_max(); ++k) out.push_back(band_from_spectrum(F, k));
    } else {
        for (int k = frame.k_min(); k <= frame.k_max(); ++k) out.push_back(band_from_spectrum(F, k));
    }
    return out;
}

void write_frame_csv(std::ostream& os, const LPFrame& frame, int samples) {
    os << "r";
    for (int k = frame.k_min(); k <= frame.k_max(); ++k) os << ",phi_" << k;
    os << ",cutoff,lowpass,theta,theta_dual\n";
    const double lo = std::ldexp(1.0, frame.k_min() - 2), hi = std::ldexp(1.0, frame.k_max() + 2);
    char buf[64];
    for (int i = 0; i < samples; ++i) {
        double r = lo * std::pow(hi / lo, double(i) / (samples - 1));
        std::snprintf(buf, sizeof buf, "%.10g", r);
        os << buf;
        auto put = [&](double v) {
            std::snprintf(buf, sizeof buf, ",%.10g", v);
            os << buf;
        };
        for (int k = frame.k_min(); k <= frame.k_max(); ++k) put(LPFrame::band(k, r));
        put(LPFrame::cutoff(r));
        put(LPFrame::lowpass(r));
        put(LPFrame::theta(r));
        put(LPFrame::theta_dual(r));
        os << "\n";
    }
}

}  // namespace hm
