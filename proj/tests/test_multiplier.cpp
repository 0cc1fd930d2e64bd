#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "herzmult/lp.hpp"
#include "herzmult/multiplier.hpp"
#include "herzmult/norms.hpp"
#include "support.hpp"

using namespace hm;

namespace {

ExampleCase tl0_desk(int n_terms, double spacing) {
    ExampleCase c;
    c.kind = CaseKind::TL0;
    c.p = 0.5;
    c.q = 2;
    c.u = 0.5;
    c.layout = {2, n_terms, 1, 2, spacing};
    return c;
}

// Composite Gauss rule on [a, b] with `panels` panels of 8 nodes.
template <class F>
cplx composite(F&& f, double a, double b, int panels) {
    static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    cplx s = 0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (int i = 0; i < 8; ++i) s += w[i] * f(c + 0.5 * h * x[i]);
    }
    return s * (0.5 * h);
}

}  // namespace

TEST_CASE("apply: identity, translation, Gaussian smoothing") {
    BoxSpec box{1, 32, 512};
    SampledFunction f = hmtest::random_localized_band(box, 3, 0.0, 4.0);
    CHECK(hmtest::rel_l2(apply(constant_symbol(1.0), f), f) < 1e-12);

    // e^{-2 pi i a xi} with a = 3 (48 grid steps) shifts by a.
    MultiplierSymbol shift;
    shift.eval = [](const Point& xi) { return std::polar(1.0, -2 * kPi * 3.0 * xi[0]); };
    auto g = apply(shift, f);
    double err = 0;
    for (int j = 0; j < box.N; ++j) err = std::max(err, std::abs(g.values[j] - f.values[(j - 48 + box.N) % box.N]));
    CHECK(err < 1e-12 * hmtest::max_abs(f));

    MultiplierSymbol gauss;
    gauss.eval = [](const Point& xi) { return cplx(std::exp(-kPi * xi[0] * xi[0])); };
    auto smooth = apply(gauss, f);
    // Periodic convolution with e^{-pi x^2}, its own transform.
    const double h = box.spacing();
    double worst = 0;
    for (int i = 0; i < box.N; i += 5) {
        cplx s = 0;
        for (int j = 0; j < box.N; ++j) {
            double dx = box.coord(i) - box.coord(j);
            double w = 0;
            for (int img = -1; img <= 1; ++img) w += std::exp(-kPi * (dx + img * box.L) * (dx + img * box.L));
            s += f.values[j] * w * h;
        }
        worst = std::max(worst, std::abs(s - smooth.values[i]));
    }
    CHECK(worst < 1e-8 * hmtest::max_abs(f));
}

TEST_CASE("apply rejects non-finite symbol values") {
    BoxSpec box{1, 16, 128};
    SampledFunction f = hmtest::random_function(box, 1);
    MultiplierSymbol bad;
    bad.eval = [](const Point& xi) { return cplx(1.0 / xi[0]); };
    try {
        apply(bad, f);
        FAIL("expected an error");
    } catch (const PreconditionError& e) {
        CHECK(e.name() == "symbol-nonfinite");
        CHECK(std::string(e.what()).find("xi = (0)") != std::string::npos);
    }
}

TEST_CASE("linearity and composition") {
    for (int d : {1, 2}) {
        BoxSpec box{d, 16, d == 1 ? 512 : 64};
        auto m1 = standard_symbol("smooth-step", d), m2 = standard_symbol("imag-power", d);
        SampledFunction f = hmtest::random_localized_band(box, 4, 0.1, 3.0);
        SampledFunction g = hmtest::random_localized_band(box, 5, 0.1, 3.0);
        cplx a{0.3, -1.2}, b{2.0, 0.5};
        auto lhs = apply(m1, a * f + b * g);
        auto rhs = a * apply(m1, f) + b * apply(m1, g);
        CHECK(hmtest::rel_l2(lhs, rhs) < 1e-12);
        CHECK(hmtest::rel_l2(apply(product(m1, m2), f), apply(m1, apply(m2, f))) < 1e-10);
    }
}

TEST_CASE("bump pair") {
    for (int d : {1, 2}) {
        BumpPair bp(d);
        CHECK(bp.c() > 0.9);
        CHECK(bp.eta({0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(bp.eta_hat({0.126, 0}) == 0.0);
        if (d == 2) CHECK(bp.eta_hat({0.089, 0.089}) == 0.0);
        CHECK(bp.eta_hat({0.05, 0}) > 0.0);
        CHECK(bp.eta_tilde_hat({0.12, 0}) == 1.0);
        CHECK(bp.eta_tilde_hat({0.25, 0}) == 0.0);
        double mid = bp.eta_tilde_hat({0.19, 0});
        CHECK(mid > 0.0);
        CHECK(mid < 1.0);
    }
    // eta from its transform on a lattice agrees with the quadrature values.
    BumpPair bp(1);
    BoxSpec box{1, 512, 1024};
    SampledFunction e = inverse_transform(SpectralFunction::from(box, [&](const Point& xi) { return cplx(bp.eta_hat(xi)); }));
    double err = 0, neg = 0;
    for (int j = 0; j < box.N; j += 7) {
        err = std::max(err, std::abs(e.values[j] - bp.eta({box.coord(j), 0})));
        neg = std::min(neg, e.values[j].real());
    }
    CHECK(err < 1e-10);
    CHECK(neg > -1e-12);
}

TEST_CASE("dyadic slices") {
    BoxSpec box{1, 64, 8192};
    LPFrame frame = build_frame(-3, 4, box);
    auto one = constant_symbol(1.0);
    auto u0 = dyadic_slice(one, 0, frame, default_kernel_box(1)).unit;
    REQUIRE(u0.has_value());
    for (int k : {-3, -1, 2, 3}) {
        auto s = dyadic_slice(one, k, frame, default_kernel_box(1));
        REQUIRE(s.unit.has_value());
        CHECK(s.unit->values == u0->values);
    }

    MultiplierSymbol phi;
    phi.eval = [](const Point& xi) { return cplx(LPFrame::cutoff(std::abs(xi[0]))); };
    // Supports [1/4, 4] and [2^{k-2}, 2^{k+2}] overlap in a null set only for |k| >= 4.
    for (int k : {-5, -4}) CHECK(hmtest::max_abs(dyadic_slice(phi, k, frame).kernel) == 0.0);
    for (int k : {-3, 1, 3}) CHECK(hmtest::max_abs(dyadic_slice(phi, k, frame).kernel) > 0.0);

    CHECK_THROWS_AS(dyadic_slice(one, 4, frame), PreconditionError);
}

TEST_CASE("unit-scale kernel of the modulated train matches term-by-term quadrature") {
    ExampleCase c = tl0_desk(3, 10.0);
    BoxSpec box{1, 128, 2048};
    auto m = build_example(c, box);
    BumpPair bp(1);
    const BoxSpec kbox{1, 2048, 32768};
    for (int k : {-1, 0, 1}) {
        SampledFunction K = unit_kernel(m, k, kbox);
        double peak = hmtest::max_abs(K), err = 0;
        for (double x : {-20.0, -10.5, -2.0, 0.0, 5.25, 10.0, 40.0}) {
            cplx oracle = 0;
            for (int j = 0; j < c.layout.n_terms; ++j) {
                const double w = c.layout.place(j), tau = c.layout.shift(j);
                const double lo = std::max(0.25, w * (1 - c.r_out) / std::ldexp(1.0, k));
                const double hi = std::min(4.0, w * (1 + c.r_out) / std::ldexp(1.0, k));
                if (lo >= hi) continue;
                oracle += composite(
                    [&](double xi) {
                        double y = std::ldexp(xi, k);
                        return bp.eta_tilde_hat({(y - w) / w, 0}) * LPFrame::cutoff(xi) *
                               std::polar(1.0, 2 * kPi * (tau * (y - w) + x * xi));
                    },
                    lo, hi, 400);
            }
            std::size_t idx = std::size_t((x + kbox.L / 2) / kbox.spacing());
            err = std::max(err, std::abs(K.values[idx] - oracle));
        }
        CHECK(err < 1e-8 * peak);
    }
}

TEST_CASE("class norm of the constant symbol") {
    BoxSpec box{1, 64, 8192};
    LPFrame frame = build_frame(-3, 4, box);
    HerzParams hp{0.5, 1.0, 0.5};
    auto r = class_norm(constant_symbol(1.0), hp, -3, 4, frame);
    REQUIRE(r.rows.size() == 8);
    for (const auto& row : r.rows) CHECK(row.value == doctest::Approx(r.rows[0].value).epsilon(1e-8));
    MultiplierSymbol phi;
    phi.eval = [](const Point& xi) { return cplx(LPFrame::cutoff(std::abs(xi[0]))); };
    SampledFunction phi_vee = symbol_kernel(phi, default_kernel_box(1));
    CHECK(r.value == doctest::Approx(herz_norm(phi_vee, hp)).epsilon(1e-12));

    std::ostringstream os;
    write_class_norm_csv(os, r);
    CHECK(os.str().rfind("k,herz,last_shell\n-3,", 0) == 0);

    CHECK_THROWS_AS(class_norm(constant_symbol(1.0), hp, -4, 0, frame), PreconditionError);
}

TEST_CASE("both kernel routes agree on matched grids") {
    BoxSpec box{1, 256, 16384};
    LPFrame frame = build_frame(-2, 2, box);
    auto m = standard_symbol("log-osc", 1);
    HerzParams hp{0.75, 2.0, 0.25};
    ClassNormOptions dil{KernelRoute::Dilated, std::nullopt, 4};
    auto b = class_norm(m, hp, -2, 2, frame, dil);
    for (int k = -2; k <= 2; ++k) {
        ClassNormOptions unit{KernelRoute::UnitBox, BoxSpec{1, std::ldexp(256.0, k), 16384}, 4};
        auto a = class_norm(m, hp, k, k, frame, unit);
        CHECK(a.value == doctest::Approx(b.rows[std::size_t(k + 2)].value).epsilon(1e-10));
    }
}

TEST_CASE("weighted class norm") {
    BoxSpec box{1, 64, 4096};
    LPFrame frame = build_frame(-2, 2, box);
    auto m = standard_symbol("smooth-step", 1);
    const double u = 0.75;
    const int lm = max_shell(default_kernel_box(1));
    auto flat = weighted_class_norm(m, u, WeightSeq::from(lm, [](int) { return 1.0; }), -2, 2, frame);
    auto plain = class_norm(m, {u, u, 0.0}, -2, 2, frame);
    CHECK(flat.value == plain.value);

    // (1+l)^2 weights against a direct shell loop.
    auto w = WeightSeq::from(lm, [](int l) { return (1.0 + l) * (1.0 + l); });
    auto one = weighted_class_norm(constant_symbol(1.0), u, w, 0, 0, frame);
    SampledFunction K = unit_kernel(constant_symbol(1.0), 0, default_kernel_box(1));
    std::vector<double> acc(std::size_t(lm) + 1, 0.0);
    for (std::size_t i = 0; i < K.values.size(); ++i) {
        double r = K.box.point_norm(i);
        int l = r <= 2 ? 0 : int(std::ceil(std::log2(r))) - 1;
        if (l <= lm) acc[std::size_t(l)] += std::pow(std::abs(K.values[i]), u) * K.box.spacing();
    }
    double oracle = 0;
    for (int l = 0; l <= lm; ++l) oracle += std::pow((1.0 + l) * (1.0 + l), u) * acc[std::size_t(l)];
    CHECK(one.value == doctest::Approx(std::pow(oracle, 1 / u)).epsilon(1e-10));
}

TEST_CASE("inhomogeneous class norm") {
    BoxSpec box{1, 128, 8192};
    LPFrame frame = build_frame(-2, 3, box);
    HerzParams hp{1.0, 1.0, 0.0};
    auto r = inhomog_class_norm(constant_symbol(1.0), hp, 3, frame);
    MultiplierSymbol psi;
    psi.eval = [](const Point& xi) { return cplx(LPFrame::lowpass(std::abs(xi[0]))); };
    double low = herz_norm(symbol_kernel(psi, default_kernel_box(1)), hp);
    double unit = class_norm(constant_symbol(1.0), hp, 0, 0, frame).value;
    CHECK(r.low == doctest::Approx(low).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(low + unit).epsilon(1e-12));

    MultiplierSymbol high;
    high.eval = [](const Point& xi) { return cplx(std::abs(xi[0]) > 2 ? 1.0 : 0.0); };
    CHECK(inhomog_class_norm(high, hp, 3, frame).low == 0.0);

    auto tl = build_example(tl0_desk(3, 10.0), box);
    ClassNormOptions wide;
    wide.kernel_box = BoxSpec{1, 1024, 16384};
    auto ri = inhomog_class_norm(tl, hp, 3, frame, wide);
    auto rh = class_norm(tl, hp, 1, 3, frame, wide);
    double lowt = herz_norm(symbol_kernel(
                                [&] {
                                    MultiplierSymbol s = tl;
                                    s.eval = [e = tl.eval](const Point& xi) {
                                        return e(xi) * LPFrame::lowpass(std::abs(xi[0]));
                                    };
                                    return s;
                                }(),
                                *wide.kernel_box),
                            hp);
    CHECK(std::isfinite(ri.value));
    CHECK(ri.value == doctest::Approx(rh.value + lowt).epsilon(1e-12));
}

TEST_CASE("slice consistency and kernel rescaling") {
    BoxSpec box{1, 64, 2048};
    LPFrame frame = build_frame(-3, 2, box);
    auto m = standard_symbol("smooth-step", 1);
    SampledFunction f = hmtest::random_localized_band(box, 9, 0.25, 3.0);
    SampledFunction sum(box);
    for (int k = frame.k_min(); k <= frame.k_max(); ++k) sum += apply(slice_symbol(m, k), project(f, k, frame));
    CHECK(hmtest::rel_l2(sum, apply(m, f)) < 1e-8);

    BoxSpec big{1, 256, 8192};
    LPFrame fb = build_frame(-2, 1, big);
    for (int k : {-2, 0, 1}) {
        auto s = dyadic_slice(m, k, fb);
        REQUIRE(s.unit.has_value());
        CHECK(lebesgue_norm(s.kernel, 1.0) == doctest::Approx(lebesgue_norm(*s.unit, 1.0)).epsilon(1e-8));
    }
}

TEST_CASE("Young-type bound holds with one constant across scales") {
    BoxSpec box{1, 256, 4096};
    LPFrame frame = build_frame(-3, 1, box);
    for (const std::string name : {"smooth-step", "log-osc"}) {
        auto m = standard_symbol(name, 1);
        const double K = class_norm(m, {0.5, 1.0, 0.0}, -3, 1, frame).value;
        double worst = 0;
        for (double p : {1.0, 2.0})
            for (unsigned seed = 0; seed < 20; ++seed) {
                SampledFunction f = hmtest::random_localized_band(box, seed, 0.05, 6.0);
                for (int k = -3; k <= 1; ++k)
                    worst = std::max(worst, lebesgue_norm(apply(slice_symbol(m, k), f), p) / (K * lebesgue_norm(f, p)));
            }
        MESSAGE(name << ": Young constant " << worst);
        CHECK(worst < 1.0);
    }
}

TEST_CASE("constructions") {
    BoxSpec box{1, 512, 16384};
    // Single-term train: one scaled bump times a unimodular factor.
    ExampleCase c = tl0_desk(1, 0.0);
    c.layout = {10, 1, 1, 7, 0.0};
    auto m = build_example(c, box);
    BumpPair bp(1);
    const double w = c.layout.place(0);
    double peak = 0, err = 0;
    for (std::size_t i = 0; i < box.size(); i += 3) {
        auto xi = box.frequency(i);
        cplx v = m(xi);
        peak = std::max(peak, std::abs(v));
        err = std::max(err, std::abs(std::abs(v) - bp.eta_tilde_hat({(xi[0] - w) / w, 0})));
    }
    CHECK(peak <= 1.0);
    CHECK(peak == 1.0);
    CHECK(err < 1e-15);

    ExampleCase lat;
    lat.kind = CaseKind::Besov2Lattice;
    lat.t = 2;
    lat.delta = 0.7;
    for (int n : {2, 5, 11}) {
        lat.layout = {n, 1, 1, 0, 0.0};
        CHECK(std::abs(build_example(lat, box)({1.0, 0.0})) ==
              doctest::Approx(1.0 / (n * std::pow(std::log(double(n)), 0.7))).epsilon(1e-14));
    }

    ExampleCase m2;
    m2.kind = CaseKind::TL2M2;
    m2.u = 2;
    m2.s = 0.75;
    m2.alpha = 0.5;
    for (int n : {1, 2}) {
        m2.layout = {n, 1, 2, 2, 0.0};
        const double z = 2.0 * n, a = m2.layout.place(0);
        const double coef = std::exp2(-2 * z * (m2.s - (1 - 1 / m2.u))) * std::pow(z, -m2.s * m2.alpha);
        CHECK(std::abs(build_example(m2, box)({a, 0.0})) == doctest::Approx(coef).epsilon(1e-14));
    }
}

TEST_CASE("construction preconditions") {
    BoxSpec box{1, 512, 16384};
    ExampleCase c = tl0_desk(4, 40.0);
    c.q = 0.5;
    try {
        build_example(c, box);
        FAIL("expected an error");
    } catch (const PreconditionError& e) {
        CHECK(e.name() == "side-condition");
    }
    c.q = 2;
    c.layout.n_terms = 8;  // top window 1.25 * 2^7 > Nyquist 16
    CHECK(check_example(c, box).front().name == "frequency-overflow");
    c.layout = {2, 4, 1, 2, 200.0};
    CHECK(check_example(c, box).front().name == "translation-overflow");

    ExampleCase h;
    h.kind = CaseKind::Besov2H;
    h.p = 0.5;
    h.t = 1;
    h.tau = 0.6;
    CHECK(check_example(h, box).front().name == "side-condition");
    h.relaxed = true;
    CHECK(check_example(h, box).empty());

    ExampleCase f = tl0_desk(3, 0);
    f.eps = 0.4;
    CHECK(check_test_function(TestKind::FFunc, f, box).front().name == "side-condition");
}

TEST_CASE("test functions") {
    BoxSpec box{1, 512, 1 << 14};
    ExampleCase c = tl0_desk(1, 0.0);
    c.eps = 1.0;
    c.layout = {5, 1, 1, 3, 0.0};
    SampledFunction f = build_test_function(TestKind::FFunc, c, box);
    const double a = std::pow(5.0, -0.5) / std::log(5.0);
    MESSAGE("sup-norm deviation " << hmtest::max_abs(f) / a - 1);
    CHECK(hmtest::max_abs(f) == doctest::Approx(a).epsilon(1e-10));

    ExampleCase hc = tl0_desk(4, 12.0);
    SpectralFunction H = test_function_spectrum(TestKind::HFunc, hc, box);
    for (int j = 0; j < 4; ++j) {
        int n = int(std::lround(hc.layout.place(j) * box.L));
        CHECK(std::abs(H.at(n)) == doctest::Approx(BumpPair(1).eta_hat({0, 0})).epsilon(1e-12));
    }
}

TEST_CASE("F-function norms settle as terms are added") {
    BoxSpec box{1, 128, 1 << 20};
    LPFrame frame = build_frame(-2, 10, box);
    ExampleCase c = tl0_desk(1, 0.0);
    c.eps = 1.0;
    SpaceParams sp{0.5, 2.0, 0.0, true};
    std::vector<double> norms;
    for (int n = 1; n <= 10; ++n) {
        c.layout.n_terms = n;
        norms.push_back(tl_norm(build_test_function(TestKind::FFunc, c, box), sp, frame));
    }
    for (int n = 1; n < 10; ++n) CHECK(norms[std::size_t(n)] > norms[std::size_t(n - 1)]);
    MESSAGE("last increment " << norms[9] / norms[8] - 1);
    CHECK(norms[9] / norms[8] - 1 < 0.05);
}

TEST_CASE("lattice points") {
    auto p1 = lattice_points(20, 1);
    for (int n = 1; n <= 20; ++n) CHECK(p1[std::size_t(n - 1)][0] == n);
    auto p2 = lattice_points(100, 2);
    CHECK(p2[3][0] == 2);
    CHECK(p2[3][1] == 0);
    for (int k = 1; k <= 10; ++k) CHECK(p2[std::size_t(k * k - 1)] == std::array<long long, 2>{k, 0});
    for (int n = 1; n <= 100; ++n) {
        auto p = p2[std::size_t(n - 1)];
        CHECK(std::hypot(double(p[0]), double(p[1])) <= std::sqrt(2.0 * n) + 1e-12);
        for (int m = 1; m < n; ++m) CHECK(p2[std::size_t(m - 1)] != p);
    }
    CHECK_THROWS_AS(lattice_points(5, 3), PreconditionError);
}

TEST_CASE("registry parsing") {
    auto c = parse_example("TL2-M1", "d=2, u=3/2 s=0.25 n_terms=4 slope=2 spacing=40");
    CHECK(c.kind == CaseKind::TL2M1);
    CHECK(c.d == 2);
    CHECK(c.u == 1.5);
    CHECK(c.layout.n_terms == 4);
    CHECK(c.layout.spacing == 40.0);
    CHECK(parse_example("WEIGHTED", "q=inf").q == kInf);
    CHECK_THROWS_AS(parse_example("TL9", ""), PreconditionError);
    CHECK_THROWS_AS(parse_example("TL0", "zeta=3"), PreconditionError);
    for (const auto& n : standard_symbol_names()) CHECK(standard_symbol(n, 1).tag == n);
}

TEST_CASE("class norms of the modulated trains stay uniform in k") {
    BoxSpec box{1, 512, 1 << 19};
    LPFrame frame = build_frame(-2, 7, box);
    ClassNormOptions dilated{KernelRoute::Dilated, std::nullopt, -1};
    ExampleCase c = tl0_desk(4, 40.0);
    c.layout = {1, 4, 2, 2, 40.0};  // windows at 1, 4, 16, 64
    auto tl = class_norm(build_example(c, box), {0.5, 1.0, 0.0}, -2, 7, frame, dilated);
    // Interior scales see every neighbouring window that can reach them.
    MESSAGE("TL0 sup " << tl.value << ", interior spread " << tl.spread(2, 4));
    CHECK(std::isfinite(tl.value));
    CHECK(tl.spread(2, 4) <= 4.0);

    c.kind = CaseKind::Weighted;
    const double rho = std::abs(1 / c.p - 1 / c.q);
    auto w = WeightSeq::from(max_shell(box) + 7, [&](int l) { return std::pow(1.0 + l, rho); });
    auto wr = weighted_class_norm(build_example(c, box), c.u, w, -2, 7, frame, dilated);
    MESSAGE("WEIGHTED sup " << wr.value << ", interior spread " << wr.spread(2, 4));
    CHECK(std::isfinite(wr.value));
    CHECK(wr.spread(2, 4) <= 4.0);
}

TEST_CASE("log-decay kernel: shell sums keep growing when tau < 1/t") {
    BoxSpec box{1, 64, 1024};
    const BoxSpec kb{1, 8192, 1 << 17};
    const HerzParams hp{1.0, 1.0, 1.0};  // u = 1, s = d/p - d/u with p = 1/2
    auto exponent = [&](double tau) {
        ExampleCase c;
        c.kind = CaseKind::Besov2H;
        c.p = 0.5;
        c.t = 1;
        c.tau = tau;
        c.relaxed = tau < 1 / c.t;
        SampledFunction K = unit_kernel(build_example(c, box), 0, kb);
        // The construction box truncates h at |x| = 512, the outer edge of
        // shell 8; shells below 5 are not yet asymptotic.
        HerzResult r = herz_norm_ex(K, hp, 8);
        CHECK(r.value > herz_norm(K, hp, 6));
        return shell_tail_exponent(r, hp, 5, 8);
    };
    const double divergent = exponent(0.6), convergent = exponent(1.5);
    MESSAGE("tail exponents: tau=0.6 " << divergent << ", tau=1.5 " << convergent);
    CHECK(divergent > -1.0);
    CHECK(convergent < -1.0);
}

TEST_CASE("piece sums reproduce full-grid F-norms of test functions and their images") {
    const BoxSpec box{1, 512, 1 << 19}, coarse{1, 512, 1 << 14};
    LPFrame frame = build_frame(-2, 7, box);
    ExampleCase c = tl0_desk(4, 40.0);
    c.layout = {1, 4, 2, 2, 40.0};  // windows at 1, 4, 16, 64
    c.eps = 0.4;
    c.relaxed = true;
    const std::vector<SpaceParams> sps{{0.5, 2.0, 0.0, true}, {0.5, 0.5, 0.0, true}, {1.0, 1.5, 0.5, true}};
    const MultiplierSymbol m = build_example(c, box);
    for (TestKind kind : {TestKind::FFunc, TestKind::GFunc, TestKind::HFunc}) {
        CAPTURE(test_name(kind));
        c.delta = kind == TestKind::GFunc ? 2.2 : c.delta;
        const SpectralFunction F = test_function_spectrum(kind, c, box);
        const ModulatedPieces P = test_function_pieces(kind, c, coarse);
        const auto full_in = tl_norms(F, sps, frame), piece_in = tl_norms(P, sps, -2, 7);
        const auto full_out = tl_norms(apply_spectrum(m, F), sps, frame);
        const auto piece_out = tl_norms(apply_pieces(m, P), sps, -2, 7);
        for (std::size_t i = 0; i < sps.size(); ++i) {
            // q = 1/2 lifts round-off in the band tails to ~1e-7.
            CHECK(piece_in[i] == doctest::Approx(full_in[i]).epsilon(1e-6));
            CHECK(piece_out[i] == doctest::Approx(full_out[i]).epsilon(1e-6));
        }
    }
}

TEST_CASE("piece preconditions") {
    ExampleCase c = tl0_desk(4, 40.0);
    c.layout = {1, 4, 2, 2, 40.0};
    c.eps = 1.0;
    const auto names = [](const std::vector<Violation>& v) {
        std::vector<std::string> out;
        for (const auto& x : v) out.push_back(x.name);
        return out;
    };
    // Far beyond the coarse Nyquist frequency is fine.
    CHECK(check_test_pieces(TestKind::FFunc, c, BoxSpec{1, 512, 256}).empty());
    c.layout.offset = 12;  // places 2^{-10}, ...: off the 1/512 lattice
    CHECK(names(check_test_pieces(TestKind::FFunc, c, BoxSpec{1, 512, 256})) == std::vector<std::string>{"coarse-box"});
    c.layout.offset = 2;
    CHECK(names(check_test_pieces(TestKind::HAlpha, c, BoxSpec{1, 512, 256})) == std::vector<std::string>{"pieces"});
    CHECK_THROWS_AS(test_function_pieces(TestKind::FFunc, c, BoxSpec{1, 512, 64}), PreconditionError);
    // Pieces 1 and 4 share band 1, 3 * 512 lattice steps apart.
    const ModulatedPieces P = test_function_pieces(TestKind::FFunc, c, BoxSpec{1, 512, 2048});
    try {
        tl_norms(P, {{0.5, 2.0, 0.0, true}}, -2, 7);
        FAIL("expected coarse-box");
    } catch (const PreconditionError& e) {
        CHECK(e.name() == "coarse-box");
    }
}

TEST_CASE("windowed kernels reproduce the dilated and unit-box class norms") {
    const BoxSpec box{1, 512, 1 << 19};
    LPFrame frame = build_frame(-2, 7, box);
    ExampleCase c = tl0_desk(4, 40.0);
    c.layout = {1, 4, 2, 2, 40.0};
    const MultiplierSymbol m = build_example(c, box);
    REQUIRE(m.windows.size() == 4);
    const HerzParams hp{0.5, 1.0, 0.0};
    // |K|^u has cusps at the zeros of K, so every route converges at first
    // order in its spacing: 1/64 for the tables, 2^k/1024 dilated, 1/32 on the
    // unit box below. The comparison stays where all three are fine.
    const auto dil = class_norm(m, hp, -2, 3, frame, {KernelRoute::Dilated, std::nullopt, -1});
    const auto win = class_norm(m, hp, -2, 7, frame, {KernelRoute::Windowed, std::nullopt, -1});
    for (int k = -2; k <= 3; ++k) {
        CAPTURE(k);
        const std::size_t i = std::size_t(k + 2);
        const auto ub = class_norm(m, hp, k, k, frame, {KernelRoute::UnitBox, BoxSpec{1, 4096, 1 << 17}, -1});
        MESSAGE("windowed/dilated - 1 = " << win.rows[i].value / dil.rows[i].value - 1
                                          << ", windowed/unit - 1 = " << win.rows[i].value / ub.value - 1);
        CHECK(win.rows[i].value == doctest::Approx(dil.rows[i].value).epsilon(2e-3));
        CHECK(win.rows[i].value == doctest::Approx(ub.value).epsilon(5e-3));
    }
    for (const auto& row : win.rows) CHECK(row.last_shell <= 1e-8 * row.value);
    CHECK_THROWS_AS(class_norm(standard_symbol("one", 1), hp, 0, 0, frame, {KernelRoute::Windowed, std::nullopt, -1}),
                    PreconditionError);
    // Shifts must land on the table grid, and 40.01 is not a multiple of 1/64.
    c.layout.spacing = 40.01;
    try {
        class_norm(build_example(c, box), hp, 0, 0, frame, {KernelRoute::Windowed, std::nullopt, -1});
        FAIL("expected kernel-box");
    } catch (const PreconditionError& e) {
        CHECK(e.name() == "kernel-box");
    }
}
