#include "herzmult/phitransform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace hm {

namespace {

// Grid index of a cube corner along each axis; throws unless the corner is a
// grid point.
std::array<long long, 2> corner_cell(const DyadicCube& q, const BoxSpec& box) {
    std::array<long long, 2> c{0, 0};
    const double h = box.spacing();
    for (int a = 0; a < box.d; ++a) {
        const double t = (q.index[a] * q.side() + box.L / 2) / h;
        const double r = std::round(t);
        if (std::abs(t - r) > 1e-9) throw PreconditionError("cube-off-grid", "cube corner is not a grid point");
        c[a] = (long long)r;
    }
    return c;
}

std::size_t flat_index(const BoxSpec& box, const std::array<long long, 2>& c) {
    return box.d == 1 ? std::size_t(c[0]) : std::size_t(c[0]) * std::size_t(box.N) + std::size_t(c[1]);
}

void check_cube_resolution(const DyadicCube& q, const BoxSpec& box) {
    if (q.k > finest_scale(box))
        throw PreconditionError("cube-resolution", "cube of scale " + std::to_string(q.k) + " is finer than the grid");
}

}  // namespace

CoefficientMap analyze(const SampledFunction& f, const LPFrame& frame) {
    require_same_box(f.box, frame.box());
    const BoxSpec& box = f.box;
    const SpectralFunction F = forward_transform(f);

    const double lo = std::ldexp(1.0, frame.k_min() - 1), hi = std::ldexp(1.0, frame.k_max() + 1);
    double inside = 0, outside = 0;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        const double r = box.frequency_norm(i);
        (r > lo && r < hi ? inside : outside) += std::norm(F.coeffs[i]);
    }
    if (outside > 1e-24 * (inside + outside) && outside > 0)
        throw PreconditionError("band-limit", "spectrum reaches outside the frame range");

    CoefficientMap v(box);
    for (int k = frame.k_min(); k <= frame.k_max(); ++k) {
        const int kc = cube_scale(k);
        if (kc > finest_scale(box))
            throw PreconditionError("cube-resolution", "cubes of scale " + std::to_string(kc) + " are finer than the grid");
        const double side = std::ldexp(1.0, -kc);
        const double scale = std::ldexp(1.0, -k);
        SampledFunction g = radial_filter(F, [scale](double r) { return LPFrame::theta_dual(scale * r); });

        const long long n = std::llround(box.L / side);
        const double amp = std::sqrt(std::ldexp(1.0, -kc * box.d));
        for (long long i = 0; i < n; ++i)
            for (long long j = 0; j < (box.d == 2 ? n : 1); ++j) {
                DyadicCube q{kc, {i - n / 2, box.d == 2 ? j - n / 2 : 0}};
                const cplx val = amp * g.values[flat_index(box, corner_cell(q, box))];
                if (val != cplx(0.0)) v.entries.emplace_hint(v.entries.end(), q, val);
            }
    }
    return v;
}

SampledFunction synthesize(const CoefficientMap& v, const LPFrame& frame) {
    require_same_box(v.box, frame.box());
    const BoxSpec& box = v.box;
    const double cell = box.cell_volume();

    SpectralFunction total(box);
    auto it = v.entries.begin();
    while (it != v.entries.end()) {
        const int kc = it->first.k;
        const int k = kc - kCubeOffset;
        if (std::ldexp(1.0, k + 1) >= box.nyquist())
            throw PreconditionError("scale-range", "theta_" + std::to_string(k) + " is not resolved by the grid");
        check_cube_resolution(it->first, box);

        SampledFunction deltas(box);
        const double amp = std::sqrt(it->first.measure(box.d)) / cell;
        for (; it != v.entries.end() && it->first.k == kc; ++it)
            deltas.values[flat_index(box, corner_cell(it->first, box))] += amp * it->second;

        SpectralFunction D = forward_transform(deltas);
        const double scale = std::ldexp(1.0, -k);
        for (std::size_t i = 0; i < D.coeffs.size(); ++i) {
            const double t = LPFrame::theta(scale * box.frequency_norm(i));
            if (t != 0.0) total.coeffs[i] += t * D.coeffs[i];
        }
    }
    return inverse_transform(total);
}

double sequence_sup(const CoefficientMap& a, double alpha, double q) {
    const int d = a.box.d;
    const bool qinf = std::isinf(q);
    const int k_top = a.empty() ? 0 : a.min_scale();
    std::map<DyadicCube, double> chain;
    double best = 0;
    // Entries are ordered coarse to fine, so every ancestor is done first.
    for (const auto& [cube, coef] : a.entries) {
        const double val = std::pow(cube.measure(d), -alpha / d - 0.5) * std::abs(coef);
        double above = 0;
        for (DyadicCube p = cube; p.k > k_top;) {
            p = p.parent();
            auto f = chain.find(p);
            if (f != chain.end()) {
                above = f->second;
                break;
            }
        }
        const double s = qinf ? std::max(above, val) : above + std::pow(val, q);
        chain[cube] = s;
        best = std::max(best, s);
    }
    return qinf ? best : std::pow(best, 1.0 / q);
}

bool is_infinity_atom(const CoefficientMap& a, const DyadicCube& q0, const SpaceParams& sp) {
    for (const auto& [cube, coef] : a.entries)
        if (coef != cplx(0.0) && !cube.inside(q0)) return false;
    const double bound = std::pow(q0.measure(a.box.d), -1.0 / sp.p);
    return sequence_sup(a, sp.alpha, sp.q) <= bound * (1 + 1e-12);
}

double AtomicDecomposition::lambda_norm(double p) const {
    double s = 0;
    for (const auto& t : terms) s += std::pow(std::abs(t.lambda), p);
    return std::pow(s, 1.0 / p);
}

CoefficientMap AtomicDecomposition::reconstruct(const BoxSpec& box) const {
    CoefficientMap b(box);
    for (const auto& t : terms)
        for (const auto& [cube, coef] : t.atom.entries) b.accumulate(cube, t.lambda * coef);
    return b;
}

namespace {

// Counts of grid cells with g > level, summed over blocks of 2^l cells per
// axis for l = 0..levels-1.
class LevelPyramid {
public:
    LevelPyramid(const BoxSpec& box, const std::vector<double>& g, double level, int levels) : box_(box) {
        std::vector<long long> base(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) base[i] = g[i] > level ? 1 : 0;
        pyr_.push_back(std::move(base));
        for (int l = 1; l < levels; ++l) {
            const std::size_t n = std::size_t(box.N) >> l, prev = n * 2;
            std::vector<long long> cur(box.d == 1 ? n : n * n, 0);
            const auto& p = pyr_.back();
            if (box.d == 1) {
                for (std::size_t i = 0; i < n; ++i) cur[i] = p[2 * i] + p[2 * i + 1];
            } else {
                for (std::size_t i = 0; i < prev; ++i)
                    for (std::size_t j = 0; j < prev; ++j) cur[(i / 2) * n + j / 2] += p[i * prev + j];
            }
            pyr_.push_back(std::move(cur));
        }
    }

    // True when more than half of the cube's cells exceed the level.
    bool dense(const DyadicCube& q) const {
        const int l = finest_scale(box_) - q.k;
        auto c = corner_cell(q, box_);
        const std::size_t n = std::size_t(box_.N) >> l;
        const std::size_t idx = box_.d == 1 ? std::size_t(c[0] >> l) : std::size_t(c[0] >> l) * n + std::size_t(c[1] >> l);
        const long long cells = 1LL << (l * box_.d);
        return 2 * pyr_[l][idx] > cells;
    }

private:
    BoxSpec box_;
    std::vector<std::vector<long long>> pyr_;
};

}  // namespace

AtomicDecomposition atomic_decompose(const CoefficientMap& b, const SpaceParams& sp) {
    if (!(sp.p > 0 && sp.p <= 1)) throw PreconditionError("exponent", "need 0 < p <= 1");
    if (!(sp.q >= sp.p)) throw PreconditionError("exponent", "need p <= q");
    const BoxSpec& box = b.box;
    const int d = box.d;
    AtomicDecomposition out;

    std::vector<std::pair<DyadicCube, cplx>> live;
    for (const auto& [cube, coef] : b.entries)
        if (coef != cplx(0.0)) {
            check_cube_resolution(cube, box);
            corner_cell(cube, box);
            live.emplace_back(cube, coef);
        }
    if (live.empty()) return out;

    const SampledFunction gf = sequence_function(b, sp.alpha, sp.q);
    std::vector<double> g(gf.values.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = gf.values[i].real();

    // Level of each cube from the upper median of g over it.
    std::map<int, std::vector<std::size_t>> by_level;
    const double h = box.spacing();
    for (std::size_t n = 0; n < live.size(); ++n) {
        const DyadicCube& q = live[n].first;
        const auto c = corner_cell(q, box);
        const long long w = std::llround(q.side() / h);
        std::vector<double> vals;
        vals.reserve(std::size_t(d == 1 ? w : w * w));
        for (long long i = 0; i < w; ++i)
            for (long long j = 0; j < (d == 2 ? w : 1); ++j)
                vals.push_back(g[flat_index(box, {c[0] + i, d == 2 ? c[1] + j : 0})]);
        auto mid = vals.begin() + vals.size() / 2;
        std::nth_element(vals.begin(), mid, vals.end(), std::greater<double>());
        const int level = int(std::ceil(std::log2(*mid))) - 1;
        by_level[level].push_back(n);
    }

    const int levels = finest_scale(box) - coarsest_scale(box) + 1;
    for (const auto& [level, members] : by_level) {
        LevelPyramid pyr(box, g, std::ldexp(1.0, level), levels);
        std::map<DyadicCube, CoefficientMap> groups;
        for (std::size_t n : members) {
            const DyadicCube& q = live[n].first;
            DyadicCube top = q;
            for (DyadicCube p = q; p.k > coarsest_scale(box);) {
                p = p.parent();
                if (pyr.dense(p)) top = p;
            }
            auto [g_it, fresh] = groups.try_emplace(top, box);
            g_it->second.insert(q, live[n].second);
        }
        for (auto& [top, part] : groups) {
            const double lambda = std::pow(top.measure(d), 1.0 / sp.p) * sequence_sup(part, sp.alpha, sp.q);
            for (auto& [cube, coef] : part.entries) coef /= lambda;
            out.terms.push_back(AtomTerm{level, top, lambda, std::move(part)});
        }
    }
    return out;
}

}  // namespace hm
