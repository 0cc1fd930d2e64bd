#include "herzmult/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hm {

double DyadicCube::side() const { return std::ldexp(1.0, -k); }
double DyadicCube::measure(int d) const { return std::ldexp(1.0, -k * d); }
Point DyadicCube::corner() const { return {index[0] * side(), index[1] * side()}; }
Point DyadicCube::center() const { return {(index[0] + 0.5) * side(), (index[1] + 0.5) * side()}; }

bool DyadicCube::contains(const Point& x, int d) const {
    const double s = std::ldexp(1.0, k);
    if (static_cast<long long>(std::floor(x[0] * s)) != index[0]) return false;
    return d == 1 || static_cast<long long>(std::floor(x[1] * s)) == index[1];
}

bool DyadicCube::inside(const DyadicCube& outer) const {
    if (outer.k > k) return false;
    const int shift = k - outer.k;
    return (index[0] >> shift) == outer.index[0] && (index[1] >> shift) == outer.index[1];
}

DyadicCube DyadicCube::parent() const { return {k - 1, {index[0] >> 1, index[1] >> 1}}; }

DyadicCube cube_containing(const Point& x, int k, int d) {
    const double s = std::ldexp(1.0, k);
    DyadicCube q{k, {static_cast<long long>(std::floor(x[0] * s)), 0}};
    if (d == 2) q.index[1] = static_cast<long long>(std::floor(x[1] * s));
    return q;
}

int coarsest_scale(const BoxSpec& box) { return -int(std::lround(std::log2(box.L / 2))); }
int finest_scale(const BoxSpec& box) { return int(std::lround(std::log2(1.0 / box.spacing()))); }

bool cube_in_box(const DyadicCube& q, const BoxSpec& box) {
    if (q.k < coarsest_scale(box)) return false;
    const double lo = -box.L / 2, hi = box.L / 2;
    for (int a = 0; a < box.d; ++a) {
        double c = q.index[a] * q.side();
        if (c < lo || c + q.side() > hi) return false;
    }
    return true;
}

namespace {

int log2_int(int n) { return int(std::lround(std::log2(double(n)))); }

// Block index at level l (blocks of 2^l cells per axis) for a flat grid index.
inline std::size_t block_of(const BoxSpec& box, std::size_t flat, int l) {
    if (box.d == 1) return flat >> l;
    const std::size_t n = std::size_t(box.N);
    return ((flat / n) >> l) * (n >> l) + ((flat % n) >> l);
}

inline std::size_t blocks_at(const BoxSpec& box, int l) {
    const std::size_t m = std::size_t(box.N) >> l;
    return box.d == 1 ? m : m * m;
}

// Block means of `a` at level l.
std::vector<double> block_means(const BoxSpec& box, const std::vector<double>& a, int l) {
    std::vector<double> s(blocks_at(box, l), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s[block_of(box, i, l)] += a[i];
    const double cells = std::ldexp(1.0, l * box.d);
    for (auto& v : s) v /= cells;
    return s;
}

// Level-wise block sums computed bottom-up.
std::vector<std::vector<double>> sum_pyramid(const BoxSpec& box, const std::vector<double>& a, int levels) {
    std::vector<std::vector<double>> pyr(levels);
    pyr[0] = a;
    for (int l = 1; l < levels; ++l) {
        pyr[l].assign(blocks_at(box, l), 0.0);
        const std::size_t n_prev = std::size_t(box.N) >> (l - 1);
        for (std::size_t i = 0; i < pyr[l - 1].size(); ++i) {
            std::size_t b = box.d == 1 ? i >> 1 : ((i / n_prev) >> 1) * (n_prev >> 1) + ((i % n_prev) >> 1);
            pyr[l][b] += pyr[l - 1][i];
        }
    }
    return pyr;
}

SampledFunction variant_impl(const SampledFunction& f, double r, int k, double eps, BranchCombine combine,
                             bool damp) {
    if (!(r > 0)) throw PreconditionError("exponent", "r must be positive");
    if (eps < 0) throw PreconditionError("epsilon", "eps must be nonnegative");
    const BoxSpec& box = f.box;
    const int levels = log2_int(box.N);  // block sides h .. L/2
    std::vector<double> a(f.values.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::pow(std::abs(f.values[i]), r);
    auto pyr = sum_pyramid(box, a, levels);
    std::vector<double> small(a.size(), 0.0), large(a.size(), 0.0);
    const double h = box.spacing();
    for (int l = 0; l < levels; ++l) {
        const double cells = std::ldexp(1.0, l * box.d);
        const double scaled = std::ldexp(h, l + k);  // 2^k l(Q)
        const bool is_small = !damp || scaled <= 1.0;
        const double weight = is_small ? 1.0 : std::pow(scaled, -eps * r);
        auto& target = is_small ? small : large;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double v = weight * pyr[l][block_of(box, i, l)] / cells;
            if (v > target[i]) target[i] = v;
        }
    }
    SampledFunction out(box);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double s = std::pow(small[i], 1.0 / r), g = std::pow(large[i], 1.0 / r);
        out.values[i] = combine == BranchCombine::Sum ? s + g : std::max(s, g);
    }
    return out;
}

// Minimum-image distance in grid units from index i to the block [a, a+s) on a ring of size n.
inline long long ring_gap(long long i, long long a, long long s, long long n) {
    long long o = ((i - a) % n + n) % n;
    if (o < s) return 0;
    return std::min(o - (s - 1), n - o);
}

struct PeetreSearch {
    const BoxSpec& box;
    const std::vector<std::vector<double>>& maxpyr;
    double scale;  // 2^k
    double sigma;
    double h;
    long long xi, xj;
    double best;

    double weight(double dist) const { return std::pow(1.0 + scale * dist, sigma); }

    double block_dist(int l, std::size_t b) const {
        const long long n = box.N, s = 1LL << l;
        if (box.d == 1) return h * double(ring_gap(xi, (long long)b * s, s, n));
        const long long m = n >> l;
        const long long bi = (long long)b / m, bj = (long long)b % m;
        return h * std::hypot(double(ring_gap(xi, bi * s, s, n)), double(ring_gap(xj, bj * s, s, n)));
    }

    void visit(int l, std::size_t b) {
        const double bound = maxpyr[l][b] / weight(block_dist(l, b));
        if (bound <= best) return;
        if (l == 0) {
            best = bound;
            return;
        }
        std::size_t kids[4];
        int nk = 0;
        if (box.d == 1) {
            kids[nk++] = 2 * b;
            kids[nk++] = 2 * b + 1;
        } else {
            const std::size_t m = std::size_t(box.N) >> l, mc = 2 * m;
            const std::size_t bi = b / m, bj = b % m;
            for (int di = 0; di < 2; ++di)
                for (int dj = 0; dj < 2; ++dj) kids[nk++] = (2 * bi + di) * mc + (2 * bj + dj);
        }
        double dist[4];
        for (int c = 0; c < nk; ++c) dist[c] = block_dist(l - 1, kids[c]);
        int order[4] = {0, 1, 2, 3};
        std::sort(order, order + nk, [&](int p, int q) { return dist[p] < dist[q]; });
        for (int c = 0; c < nk; ++c) visit(l - 1, kids[order[c]]);
    }
};

}  // namespace

SampledFunction hl_maximal(const SampledFunction& f, double r) {
    return variant_impl(f, r, 0, 0.0, BranchCombine::Max, false);
}

SampledFunction variant_maximal(const SampledFunction& f, double r, int k, double eps, BranchCombine combine) {
    return variant_impl(f, r, k, eps, combine, true);
}

SampledFunction peetre_maximal(const SampledFunction& f, double sigma, int k) {
    if (!(sigma > 0)) throw PreconditionError("sigma", "sigma must be positive");
    const BoxSpec& box = f.box;
    const int levels = log2_int(box.N) + 1;  // top level is the whole ring
    std::vector<std::vector<double>> maxpyr(levels);
    maxpyr[0].resize(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) maxpyr[0][i] = std::abs(f.values[i]);
    for (int l = 1; l < levels; ++l) {
        maxpyr[l].assign(blocks_at(box, l), 0.0);
        const std::size_t n_prev = std::size_t(box.N) >> (l - 1);
        for (std::size_t i = 0; i < maxpyr[l - 1].size(); ++i) {
            std::size_t b = box.d == 1 ? i >> 1 : ((i / n_prev) >> 1) * (n_prev >> 1) + ((i % n_prev) >> 1);
            maxpyr[l][b] = std::max(maxpyr[l][b], maxpyr[l - 1][i]);
        }
    }
    SampledFunction out(box);
    PeetreSearch search{box, maxpyr, std::ldexp(1.0, k), sigma, box.spacing(), 0, 0, 0.0};
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        search.xi = box.d == 1 ? (long long)i : (long long)(i / box.N);
        search.xj = box.d == 1 ? 0 : (long long)(i % box.N);
        search.best = maxpyr[0][i];
        search.visit(levels - 1, 0);
        out.values[i] = search.best;
    }
    return out;
}

SampledFunction sharp_maximal(const std::vector<SampledFunction>& bands, int k_first, double q) {
    if (bands.empty()) throw PreconditionError("bands", "empty band sequence");
    if (!(q > 0) || std::isinf(q)) throw PreconditionError("exponent", "q must be positive and finite");
    const BoxSpec& box = bands.front().box;
    for (const auto& b : bands) require_same_box(box, b.box);
    const int levels = log2_int(box.N);
    const int k_last = k_first + int(bands.size()) - 1;
    std::vector<double> tail(box.size(), 0.0), best(box.size(), 0.0);
    const int mu0 = finest_scale(box);
    int next_band = k_last;  // bands with index >= mu already added are above next_band
    for (int l = 0; l < levels; ++l) {
        const int mu = mu0 - l;
        while (next_band >= std::max(mu, k_first)) {
            const auto& v = bands[std::size_t(next_band - k_first)].values;
            for (std::size_t i = 0; i < tail.size(); ++i) tail[i] += std::pow(std::abs(v[i]), q);
            --next_band;
        }
        auto means = block_means(box, tail, l);
        for (std::size_t i = 0; i < tail.size(); ++i) best[i] = std::max(best[i], means[block_of(box, i, l)]);
    }
    SampledFunction out(box);
    for (std::size_t i = 0; i < best.size(); ++i) out.values[i] = std::pow(best[i], 1.0 / q);
    return out;
}

double tail_average_sup(const std::vector<SampledFunction>& g, int k_first, double q, int mu) {
    if (g.empty()) throw PreconditionError("bands", "empty family");
    const BoxSpec& box = g.front().box;
    const int l = finest_scale(box) - mu;
    if (l < 0 || l >= log2_int(box.N))
        throw PreconditionError("cube-scale", "cubes of side 2^" + std::to_string(-mu) + " do not tile the box grid");
    std::vector<double> tail(box.size(), 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (k_first + int(j) < mu) continue;
        require_same_box(box, g[j].box);
        for (std::size_t i = 0; i < tail.size(); ++i) tail[i] += std::pow(std::abs(g[j].values[i]), q);
    }
    auto means = block_means(box, tail, l);
    return std::pow(*std::max_element(means.begin(), means.end()), 1.0 / q);
}

}  // namespace hm
