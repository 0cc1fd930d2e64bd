#include "herzmult/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hm {

namespace {

// (sum a_i^t)^{1/t}, or the max for t = inf.
double lt_sum(const std::vector<double>& a, double t) {
    if (std::isinf(t)) return a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
    double s = 0.0;
    for (double v : a)
        if (v > 0) s += std::pow(v, t);
    return std::pow(s, 1.0 / t);
}

inline double powabs(const cplx& z, double p) {
    double a = std::abs(z);
    if (p == 2.0) return a * a;
    if (p == 1.0) return a;
    return a > 0 ? std::pow(a, p) : 0.0;
}

int log2_int(double v) { return int(std::lround(std::log2(v))); }

}  // namespace

WeightSeq::WeightSeq(std::vector<double> v) : values(std::move(v)) {
    for (std::size_t l = 0; l < values.size(); ++l) {
        if (!(values[l] >= 1.0)) throw PreconditionError("weight-monotone", "weights must be at least 1");
        if (l > 0 && values[l] < values[l - 1])
            throw PreconditionError("weight-monotone", "weights must be nondecreasing (l=" + std::to_string(l) + ")");
    }
}

int max_shell(const BoxSpec& box) { return log2_int(box.L) - 2; }

int shell_of(double r) {
    if (r <= 2.0) return 0;
    int e;
    double m = std::frexp(r, &e);  // r = m 2^e, m in [1/2, 1)
    return m == 0.5 ? e - 2 : e - 1;
}

std::vector<double> shell_norms(const SampledFunction& f, double u, int l_max) {
    return shell_norms_dilated(f, u, 0, l_max);
}

std::vector<double> shell_norms_dilated(const SampledFunction& f, double u, int k, int l_max) {
    if (!(u > 0)) throw PreconditionError("exponent", "u must be positive");
    if (l_max < 0 || l_max > max_shell(f.box) + k)
        throw PreconditionError("shell-range", "shell " + std::to_string(l_max) + " exceeds the box");
    std::vector<double> acc(std::size_t(l_max) + 1, 0.0);
    const bool inf = std::isinf(u);
    const double scale = std::ldexp(1.0, k);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        int l = shell_of(scale * f.box.point_norm(i));
        if (l > l_max) continue;
        if (inf)
            acc[l] = std::max(acc[l], std::abs(f.values[i]));
        else
            acc[l] += powabs(f.values[i], u);
    }
    const int d = f.box.d;
    if (inf) {
        for (auto& a : acc) a = std::ldexp(a, -k * d);
    } else {
        // ||g||_{L^u(B_l)} = 2^{kd(1/u - 1)} ||f||_{L^u(2^{-k} B_l)} for g = 2^{-kd} f(2^{-k} .).
        const double factor = std::exp2(k * d * (1.0 / u - 1.0));
        for (auto& a : acc) a = factor * std::pow(a * f.box.cell_volume(), 1.0 / u);
    }
    return acc;
}

HerzResult herz_from_shells(std::vector<double> norms, const HerzParams& hp) {
    if (!(hp.t > 0)) throw PreconditionError("exponent", "t must be positive");
    HerzResult r;
    r.shell_norms = std::move(norms);
    std::vector<double> terms(r.shell_norms.size());
    for (std::size_t l = 0; l < terms.size(); ++l) terms[l] = std::exp2(hp.s * double(l)) * r.shell_norms[l];
    r.value = lt_sum(terms, hp.t);
    r.last_shell = terms.empty() ? 0.0 : terms.back();
    return r;
}

double shell_tail_exponent(const HerzResult& r, const HerzParams& hp, int l_lo, int l_hi) {
    if (l_lo < 0 || l_hi >= int(r.shell_norms.size()) || l_hi - l_lo < 2)
        throw PreconditionError("shell-range", "need at least three shells inside the computed range");
    const double t = std::isinf(hp.t) ? 1.0 : hp.t;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int l = l_lo; l <= l_hi; ++l) {
        double term = std::exp2(hp.s * l) * r.shell_norms[std::size_t(l)];
        if (!(term > 0)) continue;
        double x = std::log(1.0 + l), y = t * std::log(term);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw PreconditionError("shell-range", "fewer than three nonzero shells");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double weighted_from_shells(std::vector<double> norms, double u, const WeightSeq& w) {
    if (w.size() < norms.size())
        throw PreconditionError("weight-length", "weight sequence shorter than the shell count");
    for (std::size_t l = 0; l < norms.size(); ++l) norms[l] *= w[l];
    return lt_sum(norms, u);
}

HerzResult herz_norm_ex(const SampledFunction& f, const HerzParams& hp, int l_max) {
    if (!(hp.t > 0)) throw PreconditionError("exponent", "t must be positive");
    return herz_from_shells(shell_norms(f, hp.u, l_max), hp);
}

double herz_norm(const SampledFunction& f, const HerzParams& hp, int l_max) { return herz_norm_ex(f, hp, l_max).value; }
double herz_norm(const SampledFunction& f, const HerzParams& hp) { return herz_norm(f, hp, max_shell(f.box)); }

double weighted_herz_norm(const SampledFunction& f, double u, const WeightSeq& w, int l_max) {
    if (w.size() < std::size_t(l_max) + 1)
        throw PreconditionError("weight-length", "weight sequence shorter than the shell count");
    return weighted_from_shells(shell_norms(f, u, l_max), u, w);
}

double weighted_herz_norm(const SampledFunction& f, double u, const WeightSeq& w) {
    return weighted_herz_norm(f, u, w, max_shell(f.box));
}

BpqResult bpq_constant(const WeightSeq& w, double p, double q) {
    const double rho = std::abs(1.0 / p - 1.0 / q);
    if (!(rho > 0)) throw PreconditionError("p-equals-q", "the weight constant needs p != q");
    if (w.size() < 8) throw PreconditionError("weight-length", "need at least 8 weights for the tail estimate");
    BpqResult r;
    std::vector<double> terms(w.size());
    for (std::size_t l = 0; l < w.size(); ++l) terms[l] = std::pow(w[l], -1.0 / rho);
    r.value = std::pow(std::accumulate(terms.begin(), terms.end(), 0.0), rho);
    // Least-squares slope of log(term) against log(1+l) over the upper half.
    const std::size_t lo = w.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = 0;
    for (std::size_t l = lo; l < w.size(); ++l) {
        if (!(terms[l] > 0)) continue;
        double x = std::log(1.0 + l), y = std::log(terms[l]);
        sx += x, sy += y, sxx += x * x, sxy += x * y, n += 1;
    }
    r.tail_exponent = n > 1 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : -kInf;
    r.divergent = r.tail_exponent >= -1.02;
    if (r.divergent) r.value = kInf;
    return r;
}

double besov_from_bands(const std::vector<SampledFunction>& bands, int k_first, const SpaceParams& sp) {
    std::vector<double> terms;
    for (std::size_t i = 0; i < bands.size(); ++i)
        terms.push_back(std::exp2(sp.alpha * (k_first + int(i))) * lebesgue_norm(bands[i], sp.p));
    return lt_sum(terms, sp.q);
}

double cube_tail_sup(const std::vector<SampledFunction>& g, int k_first, double q, int coarsest, int finest) {
    if (g.empty()) return 0.0;
    const BoxSpec& box = g.front().box;
    coarsest = std::max(coarsest, coarsest_scale(box));
    finest = std::min(finest, finest_scale(box));
    const std::size_t n = box.size();
    std::vector<double> tail(n, 0.0);
    const int k_last = k_first + int(g.size()) - 1;
    int next = k_last;
    double best = 0.0;
    for (int mu = finest; mu >= coarsest; --mu) {
        while (next >= std::max(mu, k_first)) {
            const auto& v = g[std::size_t(next - k_first)].values;
            for (std::size_t i = 0; i < n; ++i) tail[i] += powabs(v[i], q);
            --next;
        }
        const int l = finest_scale(box) - mu;  // block side 2^l cells
        const std::size_t m = std::size_t(box.N) >> l;
        const std::size_t blocks = box.d == 1 ? m : m * m;
        std::vector<double> sums(blocks, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t b = box.d == 1 ? i >> l : ((i / box.N) >> l) * m + ((i % box.N) >> l);
            sums[b] += tail[i];
        }
        const double cells = std::ldexp(1.0, l * box.d);
        for (double s : sums) best = std::max(best, s / cells);
    }
    return std::pow(best, 1.0 / q);
}

double tl_from_bands(const std::vector<SampledFunction>& bands, int k_first, const SpaceParams& sp) {
    if (bands.empty()) return 0.0;
    const BoxSpec& box = bands.front().box;
    if (std::isinf(sp.p)) {
        if (std::isinf(sp.q)) return besov_from_bands(bands, k_first, sp);
        std::vector<SampledFunction> weighted = bands;
        for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] *= std::exp2(sp.alpha * (k_first + int(i)));
        // Cubes no finer than 4 grid cells.
        const int finest = finest_scale(box) - 2;
        if (sp.homogeneous) return cube_tail_sup(weighted, k_first, sp.q, coarsest_scale(box), finest);
        // Inhomogeneous: bands[0] is Lambda_0; cubes with l(P) < 1 only see k >= 1.
        std::vector<SampledFunction> high(weighted.begin() + 1, weighted.end());
        return lebesgue_norm(bands[0], kInf) + cube_tail_sup(high, k_first + 1, sp.q, 1, finest);
    }
    std::vector<double> acc(box.size(), 0.0);
    const bool qinf = std::isinf(sp.q);
    for (std::size_t b = 0; b < bands.size(); ++b) {
        const double wgt = std::exp2(sp.alpha * (k_first + int(b)));
        const auto& v = bands[b].values;
        for (std::size_t i = 0; i < acc.size(); ++i) {
            double a = wgt * std::abs(v[i]);
            if (qinf)
                acc[i] = std::max(acc[i], a);
            else if (a > 0)
                acc[i] += sp.q == 2.0 ? a * a : std::pow(a, sp.q);
        }
    }
    SampledFunction g(box);
    for (std::size_t i = 0; i < acc.size(); ++i) g.values[i] = qinf ? acc[i] : std::pow(acc[i], 1.0 / sp.q);
    return lebesgue_norm(g, sp.p);
}

double besov_norm(const SampledFunction& f, const SpaceParams& sp, const LPFrame& frame) {
    auto bands = all_bands(f, frame, !sp.homogeneous);
    return besov_from_bands(bands, sp.homogeneous ? frame.k_min() : 0, sp);
}

double tl_norm(const SampledFunction& f, const SpaceParams& sp, const LPFrame& frame) {
    auto bands = all_bands(f, frame, !sp.homogeneous);
    return tl_from_bands(bands, sp.homogeneous ? frame.k_min() : 0, sp);
}

std::vector<double> tl_norms(const SampledFunction& f, const std::vector<SpaceParams>& sps, const LPFrame& frame) {
    require_same_box(f.box, frame.box());
    return tl_norms(forward_transform(f), sps, frame);
}

namespace {

void require_streamable(const std::vector<SpaceParams>& sps) {
    for (const auto& sp : sps)
        if (std::isinf(sp.p) || !sp.homogeneous) throw PreconditionError("exponent", "streaming norms need finite p");
}

// acc[j] += (2^{alpha k} |band|)^q pointwise (max for q = inf).
void accumulate_band(std::vector<std::vector<double>>& acc, const SampledFunction& band,
                     const std::vector<SpaceParams>& sps, int k) {
    for (std::size_t j = 0; j < sps.size(); ++j) {
        const double wgt = std::exp2(sps[j].alpha * k), q = sps[j].q;
        auto& a = acc[j];
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double v = wgt * std::abs(band.values[i]);
            if (std::isinf(q))
                a[i] = std::max(a[i], v);
            else if (v > 0)
                a[i] += q == 2.0 ? v * v : std::pow(v, q);
        }
    }
}

std::vector<double> finish_streaming(const std::vector<std::vector<double>>& acc, const BoxSpec& box,
                                     const std::vector<SpaceParams>& sps) {
    std::vector<double> out;
    for (std::size_t j = 0; j < sps.size(); ++j) {
        SampledFunction g(box);
        const double q = sps[j].q;
        for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = std::isinf(q) ? acc[j][i] : std::pow(acc[j][i], 1.0 / q);
        out.push_back(lebesgue_norm(g, sps[j].p));
    }
    return out;
}

}  // namespace

std::vector<double> tl_norms(const SpectralFunction& F, const std::vector<SpaceParams>& sps, const LPFrame& frame) {
    require_same_box(F.box, frame.box());
    require_streamable(sps);
    const BoxSpec& box = F.box;
    double peak = 0;
    for (const auto& c : F.coeffs) peak = std::max(peak, std::abs(c));
    double r_lo = kInf, r_hi = 0;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i)
        if (std::abs(F.coeffs[i]) > kSpectralFloor * peak) {
            const double r = box.frequency_norm(i);
            r_lo = std::min(r_lo, r);
            r_hi = std::max(r_hi, r);
        }

    std::vector<std::vector<double>> acc(sps.size(), std::vector<double>(box.size(), 0.0));
    for (int k = frame.k_min(); k <= frame.k_max(); ++k) {
        if (r_hi <= std::ldexp(1.0, k - 1) || r_lo >= std::ldexp(1.0, k + 1)) continue;
        accumulate_band(acc, radial_filter(F, [k](double r) { return LPFrame::band(k, r); }), sps, k);
    }
    return finish_streaming(acc, box, sps);
}

double ModulatedPieces::envelope_radius() const {
    double peak = 0, rad = 0;
    for (const auto& E : envelopes)
        for (const auto& c : E.coeffs) peak = std::max(peak, std::abs(c));
    for (const auto& E : envelopes)
        for (std::size_t i = 0; i < E.coeffs.size(); ++i)
            if (std::abs(E.coeffs[i]) > kSpectralFloor * peak) rad = std::max(rad, coarse.frequency_norm(i));
    return rad;
}

std::vector<double> tl_norms(const ModulatedPieces& f, const std::vector<SpaceParams>& sps, int k_min, int k_max) {
    require_streamable(sps);
    const BoxSpec& box = f.coarse;
    box.validate();
    if (f.centers.size() != f.envelopes.size()) throw PreconditionError("coarse-box", "one center per envelope");
    if (k_min > k_max) throw PreconditionError("frame-range", "k_min exceeds k_max");
    std::vector<long long> shift;
    for (std::size_t j = 0; j < f.centers.size(); ++j) {
        require_same_box(f.envelopes[j].box, box);
        const double n = f.centers[j] * box.L;
        if (!(std::abs(n) < 0x1p52) || n != std::round(n))
            throw PreconditionError("coarse-box", "center " + std::to_string(f.centers[j]) +
                                                      " is not a lattice frequency of the box");
        shift.push_back((long long)n);
    }

    // Coefficients above the floor, per piece.
    struct Entry {
        int n1, n2;
        double r;  // |zeta + c e1|
        cplx v;
    };
    double peak = 0;
    for (const auto& E : f.envelopes)
        for (const auto& c : E.coeffs) peak = std::max(peak, std::abs(c));
    const double floor = kSpectralFloor * peak;
    std::vector<std::vector<Entry>> entries(f.envelopes.size());
    for (std::size_t j = 0; j < f.envelopes.size(); ++j) {
        const auto& E = f.envelopes[j];
        for (std::size_t i = 0; i < E.coeffs.size(); ++i) {
            if (!(std::abs(E.coeffs[i]) > floor)) continue;
            const std::size_t i1 = box.d == 1 ? i : i / std::size_t(box.N), i2 = box.d == 1 ? 0 : i % std::size_t(box.N);
            const int n1 = box.freq_index(int(i1)), n2 = box.d == 1 ? 0 : box.freq_index(int(i2));
            const double r = std::hypot(n1 / box.L + f.centers[j], n2 / box.L);
            entries[j].push_back({n1, n2, r, E.coeffs[i]});
        }
    }

    const long long half = box.N / 2;
    std::vector<std::vector<double>> acc(sps.size(), std::vector<double>(box.size(), 0.0));
    for (int k = k_min; k <= k_max; ++k) {
        std::vector<std::size_t> active;
        for (std::size_t j = 0; j < entries.size(); ++j) {
            double top = 0;
            for (const auto& e : entries[j]) top = std::max(top, LPFrame::band(k, e.r) * std::abs(e.v));
            if (top > floor) active.push_back(j);
        }
        if (active.empty()) continue;
        SpectralFunction B(box);
        const long long ref = shift[active.front()];
        for (std::size_t j : active) {
            const long long off = shift[j] - ref;
            for (const auto& e : entries[j]) {
                const long long n1 = e.n1 + off;
                if (n1 < -half || n1 >= half)
                    throw PreconditionError("coarse-box", "band " + std::to_string(k) +
                                                              " holds pieces further apart than the coarse "
                                                              "Nyquist frequency");
                B.at(int(n1), e.n2) += LPFrame::band(k, e.r) * e.v;
            }
        }
        accumulate_band(acc, inverse_transform(B), sps, k);
    }
    return finish_streaming(acc, box, sps);
}

double sobolev_norm(const SampledFunction& g, double s) {
    SpectralFunction G = forward_transform(g);
    for (std::size_t i = 0; i < G.coeffs.size(); ++i) {
        double r = G.box.frequency_norm(i);
        G.coeffs[i] *= std::pow(1.0 + r * r, s / 2);
    }
    return spectral_l2(G);
}

SampledFunction sequence_function(const CoefficientMap& b, double alpha, double q) {
    const BoxSpec& box = b.box;
    const int d = box.d;
    const bool qinf = std::isinf(q);
    std::vector<double> acc(box.size(), 0.0);
    const double h = box.spacing();
    for (const auto& [cube, coef] : b.entries) {
        const double side = cube.side();
        const double val = std::pow(cube.measure(d), -alpha / d - 0.5) * std::abs(coef);
        long long lo[2] = {0, 0}, hi[2] = {1, 1};
        for (int a = 0; a < d; ++a) {
            const double c = cube.index[a] * side + box.L / 2;
            lo[a] = (long long)std::ceil(c / h);
            hi[a] = (long long)std::ceil((c + side) / h);
        }
        for (long long i = lo[0]; i < hi[0]; ++i)
            for (long long j = lo[1]; j < hi[1]; ++j) {
                std::size_t flat = d == 1 ? std::size_t(i) : std::size_t(i) * box.N + std::size_t(j);
                if (qinf)
                    acc[flat] = std::max(acc[flat], val);
                else if (val > 0)
                    acc[flat] += std::pow(val, q);
            }
    }
    SampledFunction g(box);
    for (std::size_t i = 0; i < acc.size(); ++i) g.values[i] = qinf ? acc[i] : std::pow(acc[i], 1.0 / q);
    return g;
}

double sequence_norm(const CoefficientMap& b, const SpaceParams& sp) {
    return lebesgue_norm(sequence_function(b, sp.alpha, sp.q), sp.p);
}

NikolskiiValues nikolskii_check(const SampledFunction& f, int k, double p, double q) {
    if (!(p > 0 && p < q)) throw PreconditionError("exponent", "need 0 < p < q");
    SpectralFunction F = forward_transform(f);
    double inside = 0, outside = 0;
    const double radius = std::ldexp(1.0, k + 1);
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        double e = std::norm(F.coeffs[i]);
        (F.box.frequency_norm(i) <= radius ? inside : outside) += e;
    }
    if (outside > 1e-24 * (inside + outside) && outside > 0)
        throw PreconditionError("band-limit", "spectrum extends beyond |xi| <= 2^(k+1)");
    NikolskiiValues v;
    const double scale = std::exp2(k * f.box.d * (1.0 / p - 1.0 / q));
    v.lhs = lebesgue_norm(f, q);
    v.classical = scale * lebesgue_norm(f, p);
    v.improved = scale * herz_norm(f, HerzParams{p, q, 0.0});
    return v;
}

}  // namespace hm
