#include "herzmult/multiplier.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

namespace hm {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_point(const Point& xi, int d) {
    return d == 1 ? "(" + fmt(xi[0]) + ")" : "(" + fmt(xi[0]) + ", " + fmt(xi[1]) + ")";
}

double norm2(const Point& x) { return std::hypot(x[0], x[1]); }

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
};

const GaussRule& gauss_rule(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        double xi, wi;
        gsl_integration_glfixed_point(-1.0, 1.0, std::size_t(i), &xi, &wi, t);
        r.x.push_back(xi);
        r.w.push_back(wi);
    }
    gsl_integration_glfixed_table_free(t);
    return cache.emplace(n, std::move(r)).first->second;
}

template <class F>
double integrate(F&& f, double a, double b, int n) {
    const GaussRule& g = gauss_rule(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
    return s * h;
}

double bump(double s) {
    if (s <= -1.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

// Smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

cplx expi(double phase) { return std::polar(1.0, 2 * kPi * phase); }

}  // namespace

// ---------------------------------------------------------------- symbols

MultiplierSymbol constant_symbol(cplx c) {
    MultiplierSymbol m;
    m.eval = [c](const Point&) { return c; };
    m.tag = "constant";
    return m;
}

MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b) {
    MultiplierSymbol m;
    m.eval = [ea = a.eval, eb = b.eval](const Point& xi) { return ea(xi) * eb(xi); };
    m.n_terms = std::max(a.n_terms, b.n_terms);
    m.r_min = std::max(a.r_min, b.r_min);
    m.r_max = std::min(a.r_max, b.r_max);
    m.extent = (a.extent > 0 && b.extent > 0) ? a.extent + b.extent : 0.0;
    m.tag = a.tag + "*" + b.tag;
    return m;
}

MultiplierSymbol slice_symbol(const MultiplierSymbol& m, int k) {
    MultiplierSymbol s = m;
    const double scale = std::ldexp(1.0, -k);
    s.eval = [e = m.eval, scale](const Point& xi) {
        double c = LPFrame::cutoff(norm2(xi) * scale);
        return c == 0.0 ? cplx(0.0) : e(xi) * c;
    };
    s.r_min = std::max(m.r_min, std::ldexp(1.0, k - 2));
    s.r_max = std::min(m.r_max, std::ldexp(1.0, k + 2));
    s.tag = m.tag + "|slice " + std::to_string(k);
    return s;
}

SpectralFunction sample_symbol(const MultiplierSymbol& m, const BoxSpec& box) {
    SpectralFunction S(box);
    for (std::size_t i = 0; i < S.coeffs.size(); ++i) {
        if (!m.may_be_nonzero(box.frequency_norm(i))) continue;
        S.coeffs[i] = m(box.frequency(i));
    }
    return S;
}

SpectralFunction apply_spectrum(const MultiplierSymbol& m, SpectralFunction F) {
    double peak = 0;
    for (const auto& c : F.coeffs) peak = std::max(peak, std::abs(c));
    const double floor = kSpectralFloor * peak;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        if (std::abs(F.coeffs[i]) <= floor || !m.may_be_nonzero(F.box.frequency_norm(i))) {
            F.coeffs[i] = 0.0;
            continue;
        }
        const Point xi = F.box.frequency(i);
        const cplx v = m(xi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw PreconditionError("symbol-nonfinite", "m is not finite at xi = " + fmt_point(xi, F.box.d));
        F.coeffs[i] *= v;
    }
    return F;
}

SampledFunction apply(const MultiplierSymbol& m, const SampledFunction& f) {
    return inverse_transform(apply_spectrum(m, forward_transform(f)));
}

ModulatedPieces apply_pieces(const MultiplierSymbol& m, ModulatedPieces f) {
    double peak = 0;
    for (const auto& E : f.envelopes)
        for (const auto& c : E.coeffs) peak = std::max(peak, std::abs(c));
    const double floor = kSpectralFloor * peak;
    for (std::size_t j = 0; j < f.envelopes.size(); ++j) {
        SpectralFunction& E = f.envelopes[j];
        const double c = f.centers[j];
        for (std::size_t i = 0; i < E.coeffs.size(); ++i) {
            const Point z = E.box.frequency(i);
            const Point xi{z[0] + c, z[1]};
            if (std::abs(E.coeffs[i]) <= floor || !m.may_be_nonzero(norm2(xi))) {
                E.coeffs[i] = 0.0;
                continue;
            }
            const cplx v = m(xi);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw PreconditionError("symbol-nonfinite", "m is not finite at xi = " + fmt_point(xi, E.box.d));
            E.coeffs[i] *= v;
        }
    }
    return f;
}

SampledFunction symbol_kernel(const MultiplierSymbol& m, const BoxSpec& box) {
    return inverse_transform(sample_symbol(m, box));
}

BoxSpec default_kernel_box(int d) { return d == 1 ? BoxSpec{1, 256.0, 4096} : BoxSpec{2, 64.0, 1024}; }
BoxSpec default_window_box() { return BoxSpec{1, 4096.0, 1 << 18}; }

namespace {

void check_kernel_box(const MultiplierSymbol& m, int k, const BoxSpec& kbox) {
    kbox.validate();
    // The samples reach min(4, r_max 2^{-k}).
    const double top = std::min(4.0, std::ldexp(m.r_max, -k));
    if (!(kbox.nyquist() > top))
        throw PreconditionError("kernel-box", "Nyquist " + fmt(kbox.nyquist()) + " must exceed " + fmt(top));
    if (m.extent > 0) {
        const double reach = std::ldexp(m.extent, k) + 16.0;
        if (reach > kbox.L / 2)
            throw PreconditionError("kernel-box-overflow", "unit-scale kernel at k=" + std::to_string(k) +
                                                               " reaches |x| ~ " + fmt(reach) +
                                                               ", beyond the kernel box half-width " +
                                                               fmt(kbox.L / 2));
    }
}

bool slice_empty(const MultiplierSymbol& m, int k) {
    return m.r_max < std::ldexp(1.0, k - 2) || m.r_min > std::ldexp(1.0, k + 2);
}

}  // namespace

SampledFunction unit_kernel(const MultiplierSymbol& m, int k, const BoxSpec& kbox) {
    check_kernel_box(m, k, kbox);
    const double scale = std::ldexp(1.0, k);
    SpectralFunction G(kbox);
    for (std::size_t i = 0; i < G.coeffs.size(); ++i) {
        const double r = kbox.frequency_norm(i);
        const double c = LPFrame::cutoff(r);
        if (c == 0.0 || !m.may_be_nonzero(scale * r)) continue;
        const Point xi = kbox.frequency(i);
        G.coeffs[i] = c * m({scale * xi[0], scale * xi[1]});
    }
    return inverse_transform(G);
}

DyadicSlice dyadic_slice(const MultiplierSymbol& m, int k, const LPFrame& frame, const std::optional<BoxSpec>& kbox) {
    const BoxSpec& box = frame.box();
    const double top = std::min(std::ldexp(1.0, k + 2), m.r_max);
    if (!(top < box.nyquist()))
        throw PreconditionError("scale-range", "slice " + std::to_string(k) + " reaches " + fmt(top) +
                                                   ", not below the Nyquist frequency " + fmt(box.nyquist()));
    if (!(std::ldexp(1.0, k + 2) > 1.0 / box.L))
        throw PreconditionError("scale-range", "slice " + std::to_string(k) + " lies below the lattice spacing");
    DyadicSlice s;
    s.k = k;
    s.symbol = slice_symbol(m, k);
    s.kernel = symbol_kernel(s.symbol, box);
    // The matched box {2^k L, N} carries the unit kernel on exactly the
    // rescaled sample points of m_k^vee.
    const BoxSpec kb = kbox ? *kbox : BoxSpec{box.d, std::ldexp(box.L, k), box.N};
    if (kb.d != box.d) throw PreconditionError("kernel-box", "dimension differs from the frame box");
    try {
        s.unit = unit_kernel(m, k, kb);
    } catch (const PreconditionError& e) {
        // A matched box that is too small or too coarse just means no unit kernel.
        if (kbox && e.name() != "kernel-box-overflow") throw;
    }
    return s;
}

// ---------------------------------------------------------------- class norms

double ClassNormResult::spread(int k_lo, int k_hi) const {
    double lo = kInf, hi = 0;
    for (const auto& r : rows) {
        if (r.k < k_lo || r.k > k_hi || r.empty || !(r.value > 0)) continue;
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
    }
    return hi > 0 ? hi / lo : kInf;
}

namespace {

struct SliceShells {
    std::vector<double> norms;
    double edge_share = -1;  // Windowed only
};

SliceShells windowed_shells(const MultiplierSymbol& m, int k, double u, const ClassNormOptions& opts) {
    if (m.windows.empty()) throw PreconditionError("kernel-route", "the windowed route needs a symbol with windows");
    const BoxSpec kb = opts.kernel_box ? *opts.kernel_box : default_window_box();
    kb.validate();
    if (kb.d != 1) throw PreconditionError("kernel-route", "the windowed route is one-dimensional");
    const double scale = std::ldexp(1.0, k), h = kb.spacing();

    std::vector<std::pair<long long, cplx>> K;
    double edge_share = 0, reach = 0;
    for (const auto& w : m.windows) {
        const double b = w.center / scale, rho = w.radius / scale, S = w.shift * scale;
        if (!(b - rho < 4.0 && b + rho > 0.25)) continue;
        if (!(rho < kb.nyquist()))
            throw PreconditionError("kernel-box", "window of radius " + fmt(rho) + " at k=" + std::to_string(k) +
                                                      " exceeds the table Nyquist frequency " + fmt(kb.nyquist()));
        const double sh = S / h;
        if (!(std::abs(sh) < 0x1p52) || std::abs(sh - std::round(sh)) > 1e-6)
            throw PreconditionError("kernel-box", "shift " + fmt(S) + " at k=" + std::to_string(k) +
                                                      " is not a multiple of the table spacing " + fmt(h));
        const long long off = std::llround(sh);
        SpectralFunction V(kb);
        for (std::size_t i = 0; i < V.coeffs.size(); ++i) {
            const double z = kb.frequency(i)[0];
            if (std::abs(z) >= rho) continue;
            const double c = LPFrame::cutoff(std::abs(b + z));
            if (c == 0.0) continue;
            V.coeffs[i] = c * m({scale * (b + z), 0.0}) * expi(-S * z);
        }
        const SampledFunction P = inverse_transform(V);
        double total = 0, edge = 0;
        const long long half = kb.N / 2;
        for (long long i = 0; i < kb.N; ++i) {
            const cplx v = P.values[std::size_t(i)];
            const double a = std::pow(std::abs(v), u);
            total += a;
            if (std::abs(i - half) > 3 * kb.N / 8) edge += a;
            const long long key = i - half - off;
            K.emplace_back(key, expi(b * double(key) * h) * v);
        }
        if (total > 0) edge_share = std::max(edge_share, std::pow(edge / total, 1 / u));
        reach = std::max(reach, std::abs(S) + kb.L / 2);
    }

    SliceShells out;
    out.edge_share = edge_share;
    const int l_max = opts.l_max >= 0 ? opts.l_max : std::max(0, shell_of(reach));
    std::vector<double> acc(std::size_t(l_max) + 1, 0.0);
    // Overlapping bumps share grid points.
    std::sort(K.begin(), K.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < K.size();) {
        cplx v = 0;
        const long long key = K[i].first;
        for (; i < K.size() && K[i].first == key; ++i) v += K[i].second;
        const int l = shell_of(std::abs(double(key) * h));
        if (l <= l_max) acc[std::size_t(l)] += h * std::pow(std::abs(v), u);
    }
    for (double& a : acc) a = std::pow(a, 1 / u);
    out.norms = std::move(acc);
    return out;
}

// Shell norms of (m(2^k .) cutoff)^vee by the selected route.
SliceShells slice_shells(const MultiplierSymbol& m, int k, double u, const LPFrame& frame,
                         const ClassNormOptions& opts) {
    const BoxSpec& box = frame.box();
    if (opts.route == KernelRoute::Windowed) return windowed_shells(m, k, u, opts);
    if (opts.route == KernelRoute::UnitBox) {
        const BoxSpec kb = opts.kernel_box ? *opts.kernel_box : default_kernel_box(box.d);
        SampledFunction K = unit_kernel(m, k, kb);
        return {shell_norms(K, u, opts.l_max >= 0 ? opts.l_max : max_shell(kb))};
    }
    const double top = std::min(std::ldexp(1.0, k + 2), m.r_max);
    if (!(top < box.nyquist()))
        throw PreconditionError("scale-range", "slice " + std::to_string(k) + " reaches the Nyquist frequency");
    SampledFunction K = symbol_kernel(slice_symbol(m, k), box);
    return {shell_norms_dilated(K, u, k, opts.l_max >= 0 ? opts.l_max : max_shell(box) + k)};
}

// Low-pass piece (m psi)^vee.
std::vector<double> low_shells(const MultiplierSymbol& m, double u, const LPFrame& frame,
                               const ClassNormOptions& opts) {
    MultiplierSymbol low = m;
    low.eval = [e = m.eval](const Point& xi) {
        double c = LPFrame::lowpass(norm2(xi));
        return c == 0.0 ? cplx(0.0) : e(xi) * c;
    };
    low.r_max = std::min(m.r_max, 2.0);
    const BoxSpec box = opts.route != KernelRoute::Dilated
                            ? (opts.kernel_box ? *opts.kernel_box : default_kernel_box(frame.box().d))
                            : frame.box();
    if (m.r_min > 2.0) return std::vector<double>(std::size_t(opts.l_max >= 0 ? opts.l_max : max_shell(box)) + 1, 0.0);
    SampledFunction K = symbol_kernel(low, box);
    return shell_norms(K, u, opts.l_max >= 0 ? opts.l_max : max_shell(box));
}

void check_range(int k_lo, int k_hi, const LPFrame& frame) {
    if (k_lo > k_hi || k_lo < frame.k_min() || k_hi > frame.k_max())
        throw PreconditionError("scale-range", "k range [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                                                   "] outside the frame range [" + std::to_string(frame.k_min()) +
                                                   ", " + std::to_string(frame.k_max()) + "]");
}

template <class Reduce>
ClassNormResult sup_over_scales(const MultiplierSymbol& m, double u, int k_lo, int k_hi, const LPFrame& frame,
                                const ClassNormOptions& opts, Reduce&& reduce) {
    ClassNormResult out;
    for (int k = k_lo; k <= k_hi; ++k) {
        ClassNormRow row;
        row.k = k;
        if (slice_empty(m, k)) {
            row.empty = true;
        } else {
            SliceShells sh = slice_shells(m, k, u, frame, opts);
            auto [value, last] = reduce(std::move(sh.norms));
            row.value = value;
            row.last_shell = sh.edge_share >= 0 ? value * sh.edge_share : last;
        }
        out.value = std::max(out.value, row.value);
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace

ClassNormResult class_norm(const MultiplierSymbol& m, const HerzParams& hp, int k_lo, int k_hi, const LPFrame& frame,
                           const ClassNormOptions& opts) {
    check_range(k_lo, k_hi, frame);
    return sup_over_scales(m, hp.u, k_lo, k_hi, frame, opts, [&](std::vector<double> norms) {
        HerzResult r = herz_from_shells(std::move(norms), hp);
        return std::pair{r.value, r.last_shell};
    });
}

ClassNormResult weighted_class_norm(const MultiplierSymbol& m, double u, const WeightSeq& w, int k_lo, int k_hi,
                                    const LPFrame& frame, const ClassNormOptions& opts) {
    check_range(k_lo, k_hi, frame);
    return sup_over_scales(m, u, k_lo, k_hi, frame, opts, [&](std::vector<double> norms) {
        const double last = norms.empty() ? 0.0 : norms.back() * w[norms.size() - 1];
        return std::pair{weighted_from_shells(std::move(norms), u, w), last};
    });
}

ClassNormResult inhomog_class_norm(const MultiplierSymbol& m, const HerzParams& hp, int k_hi, const LPFrame& frame,
                                   const ClassNormOptions& opts) {
    ClassNormResult r;
    if (k_hi >= 1) r = class_norm(m, hp, std::max(1, frame.k_min()), k_hi, frame, opts);
    if (frame.k_min() > 1) throw PreconditionError("scale-range", "frame must contain k = 1");
    r.low = herz_from_shells(low_shells(m, hp.u, frame, opts), hp).value;
    r.value += r.low;
    return r;
}

void write_class_norm_csv(std::ostream& os, const ClassNormResult& r) {
    os << "k,herz,last_shell\n";
    char buf[96];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", row.k, row.value, row.last_shell);
        os << buf;
    }
}

double hoermander_piece(const MultiplierSymbol& m, int k, double s, const BoxSpec& xi_box) {
    xi_box.validate();
    if (!(xi_box.L / 2 > 4.0)) throw PreconditionError("box", "the ξ-box must contain the cutoff support");
    const double scale = std::ldexp(1.0, k);
    SampledFunction G = SampledFunction::from(xi_box, [&](const Point& xi) {
        double c = LPFrame::cutoff(norm2(xi));
        if (c == 0.0 || !m.may_be_nonzero(scale * norm2(xi))) return cplx(0.0);
        return c * m({scale * xi[0], scale * xi[1]});
    });
    return sobolev_norm(G, s);
}

std::vector<std::string> standard_symbol_names() { return {"one", "hilbert", "imag-power", "log-osc", "smooth-step"}; }

MultiplierSymbol standard_symbol(const std::string& name, int d) {
    MultiplierSymbol m;
    m.tag = name;
    if (name == "one") {
        m = constant_symbol(1.0);
        m.tag = name;
    } else if (name == "hilbert") {
        // Riesz transform in the first coordinate; sign(xi) in one dimension.
        m.eval = [](const Point& xi) {
            double r = norm2(xi);
            return r == 0 ? cplx(0.0) : cplx(0.0, -xi[0] / r);
        };
    } else if (name == "imag-power") {
        m.eval = [](const Point& xi) {
            double r = norm2(xi);
            return r == 0 ? cplx(0.0) : std::polar(1.0, std::log(r));
        };
    } else if (name == "log-osc") {
        m.eval = [](const Point& xi) {
            double r = norm2(xi);
            return r == 0 ? cplx(0.0) : cplx(std::cos(std::log2(r)));
        };
    } else if (name == "smooth-step") {
        m.eval = [](const Point& xi) {
            double r2 = xi[0] * xi[0] + xi[1] * xi[1];
            return cplx(r2 / (1 + r2));
        };
    } else {
        throw PreconditionError("symbol-name", "unknown symbol '" + name + "'");
    }
    (void)d;
    return m;
}

// ---------------------------------------------------------------- bump pair

BumpPair::BumpPair(int d, double r_in, double r_out) : d_(d), r_in_(r_in), r_out_(r_out) {
    if (d != 1 && d != 2) throw PreconditionError("dimension", "d must be 1 or 2");
    if (!(r_in > 0 && r_in < r_out)) throw PreconditionError("bump-radii", "need 0 < r_in < r_out");
    // eta^ is a tensor product of 1D autocorrelations supported in [-2a, 2a]
    // per axis, which keeps it inside |xi| <= r_in.
    a_ = d == 1 ? r_in / 2 : r_in / (2 * std::sqrt(2.0));
    mass_ = integrate([this](double x) { return bump(x / a_); }, -a_, a_, 128);
    c_ = 1.0;
    const int nr = 20, na = d == 1 ? 1 : 16;
    for (int i = 0; i <= nr; ++i)
        for (int j = 0; j < na; ++j) {
            double r = 0.01 * i / nr, ang = 2 * kPi * j / na;
            c_ = std::min(c_, eta({r * std::cos(ang), d == 1 ? 0.0 : r * std::sin(ang)}));
            if (d == 1) c_ = std::min(c_, eta({-r, 0.0}));
        }
}

double BumpPair::eta_hat_1d(double xi) const {
    xi = std::abs(xi);
    if (xi >= 2 * a_) return 0.0;
    double v = integrate([&](double z) { return bump(z / a_) * bump((z - xi) / a_); }, xi - a_, a_, 96);
    return v / (mass_ * mass_);
}

double BumpPair::eta_1d(double x) const {
    double v = integrate([&](double z) { return bump(z / a_) * std::cos(2 * kPi * x * z); }, -a_, a_, 256) / mass_;
    return v * v;
}

double BumpPair::eta_hat(const Point& xi) const {
    double v = eta_hat_1d(xi[0]);
    if (d_ == 2 && v != 0.0) v *= eta_hat_1d(xi[1]);
    return v;
}

double BumpPair::eta(const Point& x) const {
    double v = eta_1d(x[0]);
    if (d_ == 2) v *= eta_1d(x[1]);
    return v;
}

double BumpPair::eta_tilde_hat(const Point& xi) const {
    const double r = d_ == 1 ? std::abs(xi[0]) : norm2(xi);
    if (r <= r_in_) return 1.0;
    if (r >= r_out_) return 0.0;
    return smooth_step((r_out_ - r) / (r_out_ - r_in_));
}

// ---------------------------------------------------------------- cases

namespace {

const std::vector<std::pair<CaseKind, std::string>> kCaseNames = {
    {CaseKind::Besov1, "BESOV1"}, {CaseKind::Besov2H, "BESOV2-H"}, {CaseKind::Besov2Lattice, "BESOV2-LATTICE"},
    {CaseKind::TL0, "TL0"},       {CaseKind::TL1H, "TL1-H"},       {CaseKind::TL2M1, "TL2-M1"},
    {CaseKind::TL2M2, "TL2-M2"},  {CaseKind::Weighted, "WEIGHTED"}};

const std::vector<std::pair<TestKind, std::string>> kTestNames = {
    {TestKind::FFunc, "F-FFUNC"},   {TestKind::GFunc, "G-GFUNC"},           {TestKind::HFunc, "H-HFUNC"},
    {TestKind::BesovF, "BESOV-F"}, {TestKind::BesovTrain, "BESOV-TRAIN"}, {TestKind::HAlpha, "H-ALPHA"}};

}  // namespace

std::string case_name(CaseKind c) {
    for (const auto& [k, n] : kCaseNames)
        if (k == c) return n;
    return "?";
}

CaseKind case_from_name(const std::string& s) {
    for (const auto& [k, n] : kCaseNames)
        if (n == s) return k;
    throw PreconditionError("case-name", "unknown construction '" + s + "'");
}

std::string test_name(TestKind t) {
    for (const auto& [k, n] : kTestNames)
        if (k == t) return n;
    return "?";
}

TestKind test_from_name(const std::string& s) {
    for (const auto& [k, n] : kTestNames)
        if (n == s) return k;
    throw PreconditionError("test-name", "unknown test function '" + s + "'");
}

double SeriesLayout::place(int j) const { return std::ldexp(1.0, zeta(j) - offset); }

double SeriesLayout::shift(int j) const {
    if (spacing > 0) {
        const int m = (j + 2) / 2;
        return (j % 2 == 0 ? 1.0 : -1.0) * spacing * m;
    }
    return place(j);
}

ExampleCase parse_example(const std::string& kind, const std::string& params) {
    ExampleCase c;
    c.kind = case_from_name(kind);
    std::string text = params;
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::string item;
    while (in >> item) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw PreconditionError("parameter", "expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        if (key == "relaxed") {
            c.relaxed = val == "1" || val == "true";
            continue;
        }
        const double x = parse_real(key, val);
        std::map<std::string, double*> reals = {{"p", &c.p},         {"q", &c.q},         {"u", &c.u},
                                                {"s", &c.s},         {"t", &c.t},         {"tau", &c.tau},
                                                {"delta", &c.delta}, {"eps", &c.eps},     {"alpha", &c.alpha},
                                                {"r_in", &c.r_in},   {"r_out", &c.r_out}, {"kernel_L", &c.kernel_L},
                                                {"spacing", &c.layout.spacing}};
        std::map<std::string, int*> ints = {{"d", &c.d},
                                            {"n_start", &c.layout.n_start},
                                            {"n_terms", &c.layout.n_terms},
                                            {"slope", &c.layout.slope},
                                            {"offset", &c.layout.offset},
                                            {"kernel_N", &c.kernel_N}};
        if (auto r = reals.find(key); r != reals.end())
            *r->second = x;
        else if (auto i = ints.find(key); i != ints.end())
            *i->second = int(std::lround(x));
        else
            throw PreconditionError("parameter", "unknown key '" + key + "'");
    }
    return c;
}

namespace {

// Margin for the spatial spread of a unit-width eta or eta~ piece.
double piece_margin(const ExampleCase& c) { return 4.0 / c.r_in; }

void need(std::vector<Violation>& out, bool ok, const std::string& name, const std::string& detail) {
    if (!ok) out.push_back({name, detail});
}

void check_common(std::vector<Violation>& out, const ExampleCase& c, const BoxSpec& box) {
    need(out, c.d == 1 || c.d == 2, "dimension", "d must be 1 or 2");
    need(out, c.d == box.d, "dimension", "case and box dimensions differ");
    need(out, c.layout.n_terms >= 1, "n-terms", "need at least one term");
    need(out, c.layout.slope >= 1, "slope", "the separation slope must be at least 1");
    need(out, c.r_in > 0 && c.r_in < c.r_out && c.r_out < 0.5, "bump-radii", "need 0 < r_in < r_out < 1/2");
}

void check_frequency(std::vector<Violation>& out, double top, const BoxSpec& box) {
    need(out, top < box.nyquist(), "frequency-overflow",
         "highest frequency " + fmt(top) + " is not below the Nyquist frequency " + fmt(box.nyquist()));
}

void check_space(std::vector<Violation>& out, double reach, const BoxSpec& box) {
    need(out, reach < box.L / 2, "translation-overflow",
         "pieces reach |x| = " + fmt(reach) + ", beyond the box half-width " + fmt(box.L / 2));
}

void check_resolution(std::vector<Violation>& out, double width, const BoxSpec& box) {
    need(out, width > 4.0 / box.L, "lattice-resolution",
         "a frequency window of radius " + fmt(width) + " spans fewer than 4 lattice steps");
}

// Consecutive windows [w (1 - r), w (1 + r)] must not overlap.
void check_relative_separation(std::vector<Violation>& out, const ExampleCase& c) {
    for (int j = 0; j + 1 < c.layout.n_terms; ++j)
        need(out, (1 + c.r_out) * c.layout.place(j) < (1 - c.r_out) * c.layout.place(j + 1), "separation",
             "windows of terms " + std::to_string(j) + " and " + std::to_string(j + 1) + " overlap");
}

double max_shift(const SeriesLayout& L) {
    double m = 0;
    for (int j = 0; j < L.n_terms; ++j) m = std::max(m, std::abs(L.shift(j)));
    return m;
}

double lattice_norm(const std::array<long long, 2>& p) { return std::hypot(double(p[0]), double(p[1])); }

bool side(bool relaxed, bool ok) { return relaxed || ok; }

}  // namespace

std::vector<Violation> check_example(const ExampleCase& c, const BoxSpec& box) {
    std::vector<Violation> out;
    check_common(out, c, box);
    if (!out.empty()) return out;
    const SeriesLayout& L = c.layout;
    const double last = L.place(L.n_terms - 1);
    const bool r = c.relaxed;
    switch (c.kind) {
        case CaseKind::Besov1: {
            const bool ok = c.p <= 1 ? (c.u <= c.p && c.p < c.t) : (c.u <= 1 && 1 < c.t);
            need(out, side(r, ok), "side-condition",
                 c.p <= 1 ? "need u <= p < t" : "need u <= 1 < t");
            check_frequency(out, 1 + c.r_out, box);
            check_space(out, max_shift(L) + piece_margin(c), box);
            check_resolution(out, c.r_in, box);
            break;
        }
        case CaseKind::Besov2H:
            need(out, side(r, c.p > 0 && 1 / c.t < c.tau && c.tau < 1 / c.p), "side-condition",
                 "need 1/t < tau < 1/p");
            check_frequency(out, 1 + c.r_in, box);
            check_resolution(out, c.r_in, box);
            need(out, BoxSpec{c.d, c.kernel_L, c.kernel_N}.nyquist() > 2 * (c.r_in + 1), "kernel-box",
                 "construction box too coarse for eta");
            break;
        case CaseKind::Besov2Lattice: {
            need(out, side(r, 1 / c.t < c.delta && c.delta < 1), "side-condition", "need 1/t < delta < 1");
            need(out, L.n_start >= 2, "side-condition", "log n needs n >= 2");
            check_frequency(out, 1 + c.r_out, box);
            auto pts = lattice_points(L.n_start + L.n_terms - 1, c.d);
            double reach = 0;
            for (int j = 0; j < L.n_terms; ++j) reach = std::max(reach, lattice_norm(pts[std::size_t(L.index(j) - 1)]));
            check_space(out, reach + piece_margin(c), box);
            check_resolution(out, c.r_in, box);
            break;
        }
        case CaseKind::TL0:
        case CaseKind::Weighted:
            if (c.kind == CaseKind::TL0)
                need(out, side(r, c.p != c.q && c.u <= std::min({1.0, c.p, c.q})), "side-condition",
                     "need p != q and u <= min(1, p, q)");
            else
                need(out, side(r, c.p != c.q), "side-condition", "need p != q");
            check_frequency(out, (1 + c.r_out) * last, box);
            check_relative_separation(out, c);
            check_space(out, max_shift(L) + piece_margin(c), box);
            check_resolution(out, c.r_in * L.place(0), box);
            break;
        case CaseKind::TL1H:
            need(out, side(r, c.u > 0 && c.s > 0 && c.tau > 0), "side-condition", "need u, s, tau > 0");
            check_frequency(out, (1 + c.r_in) * last, box);
            for (int j = 0; j + 1 < L.n_terms; ++j)
                need(out, (1 + c.r_in) * L.place(j) < (1 - c.r_in) * L.place(j + 1), "separation",
                     "windows of terms " + std::to_string(j) + " and " + std::to_string(j + 1) + " overlap");
            check_resolution(out, c.r_in * L.place(0), box);
            break;
        case CaseKind::TL2M1: {
            need(out, side(r, c.s > 0 && c.t > 0 && c.u > 1), "side-condition", "need s, t > 0 and u > 1");
            check_frequency(out, last + c.r_out, box);
            for (int j = 0; j + 1 < L.n_terms; ++j)
                need(out, L.place(j) + c.r_out < L.place(j + 1) - c.r_out, "separation",
                     "windows of terms " + std::to_string(j) + " and " + std::to_string(j + 1) + " overlap");
            auto pts = lattice_points(L.zeta(L.n_terms - 1), c.d);
            double reach = 0;
            for (int j = 0; j < L.n_terms; ++j) reach = std::max(reach, lattice_norm(pts[std::size_t(L.zeta(j) - 1)]));
            check_space(out, reach + piece_margin(c), box);
            check_resolution(out, c.r_in, box);
            break;
        }
        case CaseKind::TL2M2: {
            need(out, side(r, c.alpha > 0 && c.u > 1), "side-condition", "need alpha > 0 and u > 1");
            check_frequency(out, last + c.r_out / last, box);
            double reach = 0;
            for (int j = 0; j < L.n_terms; ++j)
                reach = std::max(reach, L.place(j) * (std::pow(L.zeta(j), c.alpha) + piece_margin(c)));
            check_space(out, reach, box);
            check_resolution(out, c.r_in / last, box);
            break;
        }
    }
    return out;
}

std::vector<Violation> check_test_function(TestKind kind, const ExampleCase& c, const BoxSpec& box) {
    std::vector<Violation> out;
    check_common(out, c, box);
    if (!out.empty()) return out;
    const SeriesLayout& L = c.layout;
    const double last = L.place(L.n_terms - 1);
    const bool r = c.relaxed;
    switch (kind) {
        case TestKind::FFunc:
            need(out, side(r, 1 / c.q < c.eps && c.eps < 1 / c.p), "side-condition", "need 1/q < eps < 1/p");
            need(out, L.zeta(0) >= 2, "side-condition", "log zeta needs zeta >= 2");
            check_frequency(out, last + c.r_in, box);
            check_space(out, piece_margin(c), box);
            break;
        case TestKind::GFunc:
        case TestKind::HFunc:
            if (kind == TestKind::GFunc)
                need(out, side(r, 1 / c.p < c.delta && c.delta < 1 / c.q), "side-condition",
                     "need 1/p < delta < 1/q");
            need(out, L.zeta(0) >= 2, "side-condition", "log zeta needs zeta >= 2");
            check_frequency(out, last + c.r_in, box);
            check_space(out, max_shift(L) + piece_margin(c), box);
            break;
        case TestKind::BesovF:
            check_frequency(out, 1 + c.r_in, box);
            check_space(out, piece_margin(c), box);
            break;
        case TestKind::BesovTrain:
            check_frequency(out, 1 + c.r_in, box);
            check_space(out, max_shift(L) + piece_margin(c), box);
            break;
        case TestKind::HAlpha: {
            check_frequency(out, last + c.r_in / last, box);
            double reach = 0;
            for (int j = 0; j < L.n_terms; ++j)
                reach = std::max(reach, L.place(j) * (std::pow(L.zeta(j), c.alpha) + piece_margin(c)));
            check_space(out, reach, box);
            check_resolution(out, c.r_in / last, box);
            break;
        }
    }
    return out;
}

namespace {

void throw_first(const std::vector<Violation>& v) {
    if (!v.empty()) throw PreconditionError(v.front().name, v.front().detail);
}

std::string provenance(const ExampleCase& c) {
    std::ostringstream os;
    os << case_name(c.kind) << " d=" << c.d << " n=" << c.layout.n_start << ".."
       << c.layout.n_start + c.layout.n_terms - 1 << " slope=" << c.layout.slope << " offset=" << c.layout.offset;
    if (c.layout.spacing > 0) os << " spacing=" << c.layout.spacing;
    if (c.relaxed) os << " relaxed";
    return os.str();
}

// Fourier transform of a radial profile truncated to |x| <= R, by the
// trapezoid rule on n samples.
class RadialTransform {
public:
    RadialTransform(int d, double R, int n, std::function<double(double)> h) : d_(d), dr_(R / n) {
        for (int i = 0; i <= n; ++i) {
            double w = (i == 0 || i == n) ? 0.5 : 1.0;
            samples_.push_back(w * h(i * dr_));
        }
    }

    double operator()(double rho) const {
        double s = 0;
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            double r = double(i) * dr_;
            if (d_ == 1)
                s += samples_[i] * std::cos(2 * kPi * rho * r);
            else
                s += samples_[i] * std::cyl_bessel_j(0.0, 2 * kPi * rho * r) * r;
        }
        return d_ == 1 ? 2 * s * dr_ : 2 * kPi * s * dr_;
    }

private:
    int d_;
    double dr_;
    std::vector<double> samples_;
};

}  // namespace

MultiplierSymbol build_example(const ExampleCase& c, const BoxSpec& box) {
    throw_first(check_example(c, box));
    auto bp = std::make_shared<BumpPair>(c.d, c.r_in, c.r_out);
    const SeriesLayout L = c.layout;
    const int n = L.n_terms;
    MultiplierSymbol m;
    m.n_terms = n;
    m.tag = provenance(c);
    const double ro = c.r_out, ri = c.r_in;

    switch (c.kind) {
        case CaseKind::Besov1: {
            std::vector<double> coef, shift;
            for (int j = 0; j < n; ++j) {
                coef.push_back(c.p <= 1 ? std::pow(double(L.index(j)), -1 / c.p) : 1.0 / L.index(j));
                shift.push_back(L.shift(j));
            }
            m.eval = [bp, coef, shift](const Point& xi) {
                const Point z{xi[0] - 1, xi[1]};
                const double w = bp->eta_tilde_hat(z);
                if (w == 0.0) return cplx(0.0);
                cplx s = 0;
                for (std::size_t j = 0; j < coef.size(); ++j) s += coef[j] * expi(z[0] * shift[j]);
                return w * s;
            };
            m.r_min = 1 - ro;
            m.r_max = 1 + ro;
            m.extent = max_shift(L) + piece_margin(c);
            break;
        }
        case CaseKind::Besov2H:
        case CaseKind::TL1H: {
            const double d = c.d;
            const double expo = c.kind == CaseKind::Besov2H ? d / c.p : c.s + d / c.u;
            const double tau = c.tau;
            auto hhat = std::make_shared<RadialTransform>(c.d, c.kernel_L / 2, c.kernel_N / 2, [=](double r) {
                return std::pow(1 + r * r, -expo / 2) * std::pow(1 + std::log1p(r), -tau);
            });
            // K^(zeta) = h^(zeta + e1) eta^(zeta + e1).
            auto khat = [bp, hhat](const Point& z) {
                const Point y{z[0] + 1, z[1]};
                const double e = bp->eta_hat(y);
                return e == 0.0 ? 0.0 : e * (*hhat)(norm2(y));
            };
            if (c.kind == CaseKind::Besov2H) {
                m.eval = [khat](const Point& xi) { return cplx(khat(xi)); };
                m.r_min = 1 - ri;
                m.r_max = 1 + ri;
                m.extent = c.kernel_L / 2;
            } else {
                std::vector<double> scale;
                for (int j = 0; j < n; ++j) scale.push_back(L.place(j));
                m.eval = [khat, scale, ri](const Point& xi) {
                    const double r = norm2(xi);
                    for (double a : scale)
                        if (std::abs(r - a) <= ri * a) return cplx(khat({xi[0] / a, xi[1] / a}));
                    return cplx(0.0);
                };
                m.r_min = (1 - ri) * L.place(0);
                m.r_max = (1 + ri) * L.place(n - 1);
                m.extent = c.kernel_L / 2 / L.place(0);
            }
            break;
        }
        case CaseKind::Besov2Lattice: {
            auto pts = lattice_points(L.n_start + n - 1, c.d);
            std::vector<double> coef;
            std::vector<std::array<long long, 2>> lam;
            double reach = 0;
            for (int j = 0; j < n; ++j) {
                const double k = L.index(j);
                coef.push_back(1 / (k * std::pow(std::log(k), c.delta)));
                lam.push_back(pts[std::size_t(L.index(j) - 1)]);
                reach = std::max(reach, lattice_norm(lam.back()));
            }
            m.eval = [bp, coef, lam](const Point& xi) {
                const Point z{xi[0] - 1, xi[1]};
                const double w = bp->eta_tilde_hat(z);
                if (w == 0.0) return cplx(0.0);
                cplx s = 0;
                for (std::size_t j = 0; j < coef.size(); ++j)
                    s += coef[j] * expi(-(double(lam[j][0]) * z[0] + double(lam[j][1]) * z[1]));
                return w * s;
            };
            m.r_min = 1 - ro;
            m.r_max = 1 + ro;
            m.extent = reach + piece_margin(c);
            break;
        }
        case CaseKind::TL0:
        case CaseKind::Weighted: {
            std::vector<double> place, shift, coef;
            const double rho = std::abs(1 / c.p - 1 / c.q);
            for (int j = 0; j < n; ++j) {
                place.push_back(L.place(j));
                shift.push_back(L.shift(j));
                coef.push_back(c.kind == CaseKind::TL0 ? 1.0 : std::pow(1.0 + L.zeta(j), -rho));
            }
            m.eval = [bp, place, shift, coef, ro](const Point& xi) {
                for (std::size_t j = 0; j < place.size(); ++j) {
                    const double a = place[j];
                    const Point z{(xi[0] - a) / a, xi[1] / a};
                    if (norm2(z) >= ro) continue;
                    return coef[j] * bp->eta_tilde_hat(z) * expi(shift[j] * (xi[0] - a));
                }
                return cplx(0.0);
            };
            m.r_min = (1 - ro) * place.front();
            m.r_max = (1 + ro) * place.back();
            m.extent = max_shift(L) + piece_margin(c) / place.front();
            for (int j = 0; j < n; ++j) m.windows.push_back({place[j], ro * place[j], shift[j]});
            break;
        }
        case CaseKind::TL2M1: {
            auto pts = lattice_points(L.zeta(n - 1), c.d);
            std::vector<double> place, coef;
            std::vector<std::array<long long, 2>> lam;
            double reach = 0;
            const double d = c.d;
            for (int j = 0; j < n; ++j) {
                const double z = L.zeta(j);
                place.push_back(L.place(j));
                coef.push_back(std::exp2(-z * (c.s - d * (1 - 1 / c.u))) * std::pow(z, -c.s / d));
                lam.push_back(pts[std::size_t(L.zeta(j) - 1)]);
                reach = std::max(reach, lattice_norm(lam.back()));
            }
            m.eval = [bp, place, coef, lam, ro](const Point& xi) {
                for (std::size_t j = 0; j < place.size(); ++j) {
                    const Point z{xi[0] - place[j], xi[1]};
                    if (norm2(z) >= ro) continue;
                    return coef[j] * bp->eta_tilde_hat(z) *
                           expi(double(lam[j][0]) * xi[0] + double(lam[j][1]) * xi[1]);
                }
                return cplx(0.0);
            };
            m.r_min = place.front() - ro;
            m.r_max = place.back() + ro;
            m.extent = reach + piece_margin(c);
            break;
        }
        case CaseKind::TL2M2: {
            std::vector<double> place, coef, shift;
            const double d = c.d;
            double reach = 0;
            for (int j = 0; j < n; ++j) {
                const double z = L.zeta(j), a = L.place(j);
                place.push_back(a);
                coef.push_back(std::exp2(-2 * z * (c.s - d * (1 - 1 / c.u))) * std::pow(z, -c.s * c.alpha));
                shift.push_back(a * std::pow(z, c.alpha));
                reach = std::max(reach, a * (std::pow(z, c.alpha) + piece_margin(c)));
            }
            m.eval = [bp, place, coef, shift, ro](const Point& xi) {
                for (std::size_t j = 0; j < place.size(); ++j) {
                    const double a = place[j];
                    const Point z{a * (xi[0] - a), a * xi[1]};
                    if (norm2(z) >= ro) continue;
                    return coef[j] * bp->eta_tilde_hat(z) * expi(shift[j] * xi[0]);
                }
                return cplx(0.0);
            };
            m.r_min = place.front() - ro / place.front();
            m.r_max = place.back() + ro / place.back();
            m.extent = reach;
            break;
        }
    }
    return m;
}

SpectralFunction test_function_spectrum(TestKind kind, const ExampleCase& c, const BoxSpec& box) {
    throw_first(check_test_function(kind, c, box));
    BumpPair bp(c.d, c.r_in, c.r_out);
    const SeriesLayout& L = c.layout;
    const int n = L.n_terms;
    SpectralFunction F(box);
    // Adds coef * A^d eta^(A (xi - w e1)) e^{-2 pi i shift (xi_1 - w)} on the
    // lattice points of its support.
    auto add_piece = [&](cplx coef, double w, double A, double shift) {
        const double rad = c.r_in / A;
        const double step = 1.0 / box.L;
        const int lo = int(std::floor((w - rad) / step)), hi = int(std::ceil((w + rad) / step));
        const int lo2 = box.d == 2 ? int(std::floor(-rad / step)) : 0, hi2 = box.d == 2 ? -lo2 : 0;
        const double Ad = box.d == 1 ? A : A * A;
        for (int n1 = lo; n1 <= hi; ++n1)
            for (int n2 = lo2; n2 <= hi2; ++n2) {
                const double x1 = n1 * step, x2 = n2 * step;
                const double e = bp.eta_hat({A * (x1 - w), A * x2});
                if (e == 0.0) continue;
                F.at(n1, n2) += coef * Ad * e * expi(-shift * (x1 - w));
            }
    };
    switch (kind) {
        case TestKind::FFunc:
            for (int j = 0; j < n; ++j) {
                const double z = L.zeta(j);
                add_piece(std::pow(z, -1 / c.q) * std::pow(std::log(z), -c.eps), L.place(j), 1.0, 0.0);
            }
            break;
        case TestKind::GFunc:
        case TestKind::HFunc:
            for (int j = 0; j < n; ++j) {
                const double z = L.zeta(j);
                const double b = kind == TestKind::HFunc ? 1.0 : std::pow(z, -1 / c.p) * std::pow(std::log(z), -c.delta);
                add_piece(b, L.place(j), 1.0, L.shift(j));
            }
            break;
        case TestKind::BesovF:
            add_piece(1.0, 1.0, 1.0, 0.0);
            break;
        case TestKind::BesovTrain:
            for (int j = 0; j < n; ++j) add_piece(1.0, 1.0, 1.0, L.shift(j));
            break;
        case TestKind::HAlpha:
            for (int j = 0; j < n; ++j) {
                const double a = L.place(j);
                add_piece(1.0, a, a, a * std::pow(double(L.zeta(j)), c.alpha));
            }
            break;
    }
    return F;
}

std::vector<Violation> check_test_pieces(TestKind kind, const ExampleCase& c, const BoxSpec& coarse) {
    std::vector<Violation> out;
    check_common(out, c, coarse);
    if (!out.empty()) return out;
    if (kind == TestKind::HAlpha) {
        out.push_back({"pieces", "H-ALPHA pieces are not of unit width"});
        return out;
    }
    for (const auto& v : check_test_function(kind, c, coarse))
        if (v.name != "frequency-overflow") out.push_back(v);
    need(out, c.r_in < coarse.nyquist(), "coarse-box",
         "envelope radius " + fmt(c.r_in) + " is not below the coarse Nyquist frequency " + fmt(coarse.nyquist()));
    const SeriesLayout& L = c.layout;
    const bool train = kind == TestKind::BesovF || kind == TestKind::BesovTrain;
    for (int j = 0; j < L.n_terms && !train; ++j) {
        const double n = L.place(j) * coarse.L;
        need(out, std::abs(n) < 0x1p52 && n == std::round(n), "coarse-box",
             "center " + fmt(L.place(j)) + " is not a multiple of 1/L");
    }
    return out;
}

ModulatedPieces test_function_pieces(TestKind kind, const ExampleCase& c, const BoxSpec& coarse) {
    throw_first(check_test_pieces(kind, c, coarse));
    BumpPair bp(c.d, c.r_in, c.r_out);
    const SeriesLayout& L = c.layout;
    ModulatedPieces f;
    f.coarse = coarse;
    // Adds coef eta^(zeta) e^{-2 pi i shift zeta_1} to the envelope at w.
    auto add_piece = [&](double coef, double w, double shift) {
        std::size_t j = 0;
        while (j < f.centers.size() && f.centers[j] != w) ++j;
        if (j == f.centers.size()) {
            f.centers.push_back(w);
            f.envelopes.emplace_back(coarse);
        }
        SpectralFunction& E = f.envelopes[j];
        for (std::size_t i = 0; i < E.coeffs.size(); ++i) {
            const Point z = coarse.frequency(i);
            const double e = bp.eta_hat(z);
            if (e != 0.0) E.coeffs[i] += coef * e * expi(-shift * z[0]);
        }
    };
    const int n = L.n_terms;
    switch (kind) {
        case TestKind::FFunc:
            for (int j = 0; j < n; ++j) {
                const double z = L.zeta(j);
                add_piece(std::pow(z, -1 / c.q) * std::pow(std::log(z), -c.eps), L.place(j), 0.0);
            }
            break;
        case TestKind::GFunc:
        case TestKind::HFunc:
            for (int j = 0; j < n; ++j) {
                const double z = L.zeta(j);
                const double b = kind == TestKind::HFunc ? 1.0 : std::pow(z, -1 / c.p) * std::pow(std::log(z), -c.delta);
                add_piece(b, L.place(j), L.shift(j));
            }
            break;
        case TestKind::BesovF:
            add_piece(1.0, 1.0, 0.0);
            break;
        case TestKind::BesovTrain:
            for (int j = 0; j < n; ++j) add_piece(1.0, 1.0, L.shift(j));
            break;
        case TestKind::HAlpha:
            break;
    }
    return f;
}

SampledFunction build_test_function(TestKind kind, const ExampleCase& c, const BoxSpec& box) {
    return inverse_transform(test_function_spectrum(kind, c, box));
}

std::vector<std::array<long long, 2>> lattice_points(int n_max, int d) {
    if (d != 1 && d != 2) throw PreconditionError("dimension", "lattice points need d = 1 or 2");
    std::vector<std::array<long long, 2>> out;
    if (d == 1) {
        for (long long n = 1; n <= n_max; ++n) out.push_back({n, 0});
        return out;
    }
    for (long long k = 1; long(out.size()) < n_max; ++k) {
        out.push_back({k, 0});
        // Surface of [-k, k]^2, counterclockwise from just past (k, 0).
        std::vector<std::array<long long, 2>> ring;
        for (long long a = -k; a <= k; ++a) {
            ring.push_back({a, k});
            ring.push_back({a, -k});
            if (std::abs(a) != k) {
                ring.push_back({k, a});
                ring.push_back({-k, a});
            }
        }
        auto angle = [](const std::array<long long, 2>& p) {
            double t = std::atan2(double(p[1]), double(p[0]));
            return t <= 0 ? t + 2 * kPi : t;
        };
        std::sort(ring.begin(), ring.end(), [&](const auto& x, const auto& y) { return angle(x) < angle(y); });
        ring.erase(std::remove(ring.begin(), ring.end(), std::array<long long, 2>{k, 0}), ring.end());
        for (long long i = 0; i < 2 * k && long(out.size()) < n_max; ++i) out.push_back(ring[std::size_t(i)]);
    }
    out.resize(std::size_t(n_max));
    return out;
}

}  // namespace hm
