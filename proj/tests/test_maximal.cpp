#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "herzmult/lp.hpp"
#include "herzmult/maximal.hpp"
#include "herzmult/norms.hpp"
#include "support.hpp"

using namespace hm;

namespace {

// Average of |f|^r over the grid points of a dyadic cube, by direct enumeration.
double brute_average(const SampledFunction& f, const DyadicCube& q, double r) {
    double s = 0;
    int n = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (q.contains(f.box.point(i), f.box.d)) {
            s += std::pow(std::abs(f.values[i]), r);
            ++n;
        }
    return n ? s / n : 0.0;
}

double spread(const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
}

}  // namespace

TEST_CASE("dyadic cubes") {
    DyadicCube q{1, {3, -2}};
    CHECK(q.side() == 0.5);
    CHECK(q.measure(2) == 0.25);
    CHECK(q.corner()[0] == 1.5);
    CHECK(q.center()[1] == -0.75);
    CHECK(q.contains({1.6, -0.9}, 2));
    CHECK_FALSE(q.contains({2.0, -0.9}, 2));
    CHECK(q.inside(q.parent()));
    CHECK(q.parent().k == 0);
    CHECK(q.parent().index[0] == 1);
    CHECK(q.parent().index[1] == -1);
    CHECK(cube_containing({1.6, -0.9}, 1, 2) == q);
    BoxSpec box{1, 8, 64};
    CHECK(coarsest_scale(box) == -2);
    CHECK(finest_scale(box) == 3);
    CHECK(cube_in_box(DyadicCube{-2, {-1, 0}}, box));
    CHECK_FALSE(cube_in_box(DyadicCube{-3, {0, 0}}, box));
    CHECK_FALSE(cube_in_box(DyadicCube{0, {4, 0}}, box));
    // Cubes at one scale tile the grid: every point lies in exactly one.
    for (std::size_t i = 0; i < box.size(); ++i) {
        int hits = 0;
        for (long long j = -4; j < 4; ++j) hits += DyadicCube{0, {j, 0}}.contains(box.point(i), 1);
        CHECK(hits == 1);
    }
}

TEST_CASE("HL maximal of a constant") {
    BoxSpec box{2, 8, 32};
    SampledFunction c = SampledFunction::from(box, [](const Point&) { return cplx(3.0); });
    for (double r : {0.5, 1.0, 2.0}) {
        auto m = hl_maximal(c, r);
        for (const auto& v : m.values) CHECK(std::abs(v - 3.0) < 1e-12);
    }
}

TEST_CASE("HL maximal matches exhaustive dyadic search") {
    BoxSpec box{1, 16, 256};
    SampledFunction f = SampledFunction::from(box, [](const Point& x) { return cplx(x[0] >= 0 && x[0] < 1 ? 1.0 : 0.0); });
    auto m = hl_maximal(f, 1.0);
    for (double x0 : {2.0, -3.0, 0.5, 7.5}) {
        double oracle = 0;
        for (int k = coarsest_scale(box); k <= finest_scale(box); ++k)
            oracle = std::max(oracle, brute_average(f, cube_containing({x0, 0}, k, 1), 1.0));
        std::size_t idx = std::size_t((x0 + box.L / 2) / box.spacing());
        CHECK(m.values[idx].real() == doctest::Approx(oracle).epsilon(1e-12));
    }
    // At x = 2 the best dyadic interval is [0, 4).
    CHECK(m.values[std::size_t((2.0 + 8) * 16)].real() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("pointwise domination and monotonicity in r") {
    BoxSpec box{1, 16, 512};
    for (unsigned seed = 0; seed < 50; ++seed) {
        SampledFunction f = hmtest::random_function(box, seed);
        auto m1 = hl_maximal(f, 0.5), m2 = hl_maximal(f, 1.0), m3 = hl_maximal(f, 2.0);
        bool dom = true, mono = true;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            dom = dom && m1.values[i].real() >= std::abs(f.values[i]) * (1 - 1e-14);
            mono = mono && m1.values[i].real() <= m2.values[i].real() * (1 + 1e-14) &&
                   m2.values[i].real() <= m3.values[i].real() * (1 + 1e-14);
        }
        CHECK(dom);
        CHECK(mono);
    }
}

TEST_CASE("Peetre maximal: domination, constants, exhaustive shifts") {
    for (int d : {1, 2}) {
        BoxSpec box{d, 16, d == 1 ? 256 : 32};
        SampledFunction c = SampledFunction::from(box, [](const Point&) { return cplx(-2.0); });
        for (const auto& v : peetre_maximal(c, 1.5, 1).values) CHECK(v.real() == 2.0);
        for (unsigned seed = 0; seed < 3; ++seed) {
            SampledFunction f = hmtest::random_localized_band(box, seed, 0.0, 1.0);
            auto m = peetre_maximal(f, 2.0, 0);
            double worst = 0;
            bool dom = true;
            for (std::size_t i = 0; i < box.size(); ++i) {
                auto x = box.point(i);
                double best = 0;
                for (std::size_t j = 0; j < box.size(); ++j) {
                    auto z = box.point(j);
                    double dist2 = 0;
                    for (int a = 0; a < d; ++a) {
                        double dx = std::abs(x[a] - z[a]);
                        dx = std::min(dx, box.L - dx);
                        dist2 += dx * dx;
                    }
                    best = std::max(best, std::abs(f.values[j]) / std::pow(1 + std::sqrt(dist2), 2.0));
                }
                worst = std::max(worst, std::abs(m.values[i].real() - best) / best);
                dom = dom && m.values[i].real() >= std::abs(f.values[i]);
            }
            CHECK(worst < 1e-12);
            CHECK(dom);
        }
    }
}

TEST_CASE("variant maximal") {
    BoxSpec box{1, 32, 1024};
    SampledFunction f = hmtest::random_function(box, 11);
    auto hl = hl_maximal(f, 1.5);
    auto v0 = variant_maximal(f, 1.5, 2, 0.0);
    CHECK(v0.values == hl.values);
    SampledFunction c = SampledFunction::from(box, [](const Point&) { return cplx(0.7); });
    for (const auto& v : variant_maximal(c, 1.0, 0, 0.5).values) CHECK(v.real() == doctest::Approx(0.7).epsilon(1e-14));
    auto vmax = variant_maximal(f, 1.0, 1, 0.3), vsum = variant_maximal(f, 1.0, 1, 0.3, BranchCombine::Sum);
    for (std::size_t i = 0; i < box.size(); ++i) {
        CHECK(vsum.values[i].real() >= vmax.values[i].real());
        CHECK(vsum.values[i].real() <= 2 * vmax.values[i].real());
    }
}

TEST_CASE("Peetre <= C variant <= C HL chain for band-limited functions") {
    BoxSpec box{1, 64, 2048};
    const double r = 0.5, t = 1.0;
    const int d = 1;
    for (int k : {-1, 1, 2}) {
        std::vector<double> ratios;
        for (unsigned seed = 0; seed < 20; ++seed) {
            SampledFunction f = hmtest::random_localized_band(box, seed, 0.0, std::ldexp(1.0, k));
            auto pm = peetre_maximal(f, d / r, k);
            auto vm = variant_maximal(f, t, k, d / r - d / t);
            auto hl = hl_maximal(f, t);
            double c1 = 0;
            bool second = true;
            for (std::size_t i = 0; i < box.size(); ++i) {
                c1 = std::max(c1, pm.values[i].real() / vm.values[i].real());
                second = second && vm.values[i].real() <= hl.values[i].real() * (1 + 1e-14);
            }
            CHECK(second);
            ratios.push_back(c1);
        }
        MESSAGE("k=" << k << " Peetre/variant constant range [" << *std::min_element(ratios.begin(), ratios.end())
                     << ", " << *std::max_element(ratios.begin(), ratios.end()) << "]");
        CHECK(spread(ratios) < 3.0);
    }
}

TEST_CASE("sharp maximal basics") {
    BoxSpec box{1, 16, 256};
    std::vector<SampledFunction> zero(3, SampledFunction(box));
    for (const auto& v : sharp_maximal(zero, -1, 1.0).values) CHECK(v.real() == 0.0);
    CHECK_THROWS_AS(sharp_maximal({}, 0, 1.0), PreconditionError);

    SampledFunction f0 = hmtest::random_localized_band(box, 5, 0.5, 2.0);
    auto n = sharp_maximal({f0}, 0, 1.0);
    for (std::size_t i = 0; i < box.size(); i += 7) {
        double oracle = 0;
        for (int k = coarsest_scale(box); k <= 0; ++k)
            oracle = std::max(oracle, brute_average(f0, cube_containing(box.point(i), k, 1), 1.0));
        CHECK(n.values[i].real() == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("sharp maximal is comparable to the Triebel-Lizorkin norm for q < p") {
    BoxSpec box{1, 64, 2048};
    LPFrame frame = build_frame(-4, 2, box);
    std::vector<double> ratios;
    for (unsigned seed = 0; seed < 20; ++seed) {
        SampledFunction f = hmtest::random_localized_band(box, seed, 0.25, 4.0);
        auto bands = all_bands(f, frame);
        double lhs = lebesgue_norm(sharp_maximal(bands, frame.k_min(), 1.0), 4.0);
        double rhs = tl_from_bands(bands, frame.k_min(), SpaceParams{4.0, 1.0, 0.0, true});
        ratios.push_back(lhs / rhs);
    }
    MESSAGE("sharp/TL ratio range [" << *std::min_element(ratios.begin(), ratios.end()) << ", "
                                     << *std::max_element(ratios.begin(), ratios.end()) << "]");
    CHECK(spread(ratios) < 3.0);
}

TEST_CASE("tail average over cubes of one scale") {
    BoxSpec box{1, 16, 256};
    SampledFunction one = SampledFunction::from(box, [](const Point&) { return cplx(1.0); });
    // Three bands at k = -1, 0, 1: cubes of side 1 (mu = 0) see two of them.
    std::vector<SampledFunction> g{one, one, one};
    CHECK(tail_average_sup(g, -1, 1.0, 0) == doctest::Approx(2.0));
    CHECK(tail_average_sup(g, -1, 2.0, -1) == doctest::Approx(std::sqrt(3.0)));
    CHECK_THROWS_AS(tail_average_sup(g, -1, 1.0, 10), PreconditionError);
}
