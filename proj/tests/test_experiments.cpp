#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "herzmult/experiments.hpp"

using namespace hm;

namespace {

bool has_diag(const std::vector<Diagnostic>& v, const std::string& name) {
    return std::any_of(v.begin(), v.end(), [&](const Diagnostic& d) { return d.name == name; });
}

std::string csv_of(const Report& r) {
    std::ostringstream os;
    write_report_csv(os, r);
    return os.str();
}

}  // namespace

TEST_CASE("config files parse key=value lines") {
    std::istringstream in("# run\n d = 1\nL=512  # box\n\np = 1/2\nlist = 1, 2 ,inf\nflag=yes\n");
    const Config c = Config::parse(in);
    CHECK(c.integer("d") == 1);
    CHECK(c.real("L") == 512);
    CHECK(c.real("p") == 0.5);
    CHECK(c.reals("list") == std::vector<double>{1, 2, kInf});
    CHECK(c.flag("flag"));
    CHECK_THROWS_AS(c.real("q"), PreconditionError);
    std::istringstream bad("just text\n");
    CHECK_THROWS_AS(Config::parse(bad), PreconditionError);

    Config o{{"p", "2"}};
    o.assign("q = 3");
    o.fill(c);
    CHECK(o.real("p") == 2);
    CHECK(o.real("q") == 3);
    CHECK(o.real("L") == 512);
    CHECK_THROWS_AS(o.assign("novalue"), PreconditionError);
    CHECK_THROWS_AS(Config({{"n", "2.5"}}).integer("n"), PreconditionError);
}

TEST_CASE("numbers format deterministically") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(kInf) == "inf");
    CHECK(format_number(-kInf) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(1.0 / 3) == "0.333333333333");
}

TEST_CASE("every catalogued default validates cleanly") {
    for (const auto& id : experiment_ids()) {
        CAPTURE(id);
        const auto diags = validate(id, Config{{"memory_gib", "64"}});
        for (const auto& d : diags) MESSAGE(d.name << ": " << d.detail);
        CHECK(diags.empty());
    }
}

TEST_CASE("validate flags frequency overflow at zeta-slope 10") {
    const auto diags = validate("sharp-tl0", Config{{"slope", "10"}, {"n_to", "8"}, {"memory_gib", "64"}});
    CHECK(has_diag(diags, "frequency-overflow"));
}

TEST_CASE("validate flags eps outside (1/q, 1/p)") {
    // 1/q = 1/2, 1/p = 2 at the default exponents.
    for (const char* eps : {"0.4", "2.5"}) {
        CAPTURE(eps);
        const auto diags = validate("sharp-tl0", Config{{"eps", eps}, {"relaxed", "0"}, {"memory_gib", "64"}});
        CHECK(has_diag(diags, "side-condition"));
    }
    CHECK(validate("sharp-tl0", Config{{"eps", "1"}, {"relaxed", "0"}, {"memory_gib", "64"}}).empty());
}

TEST_CASE("validate reports memory, unknown keys and unknown experiments") {
    CHECK(has_diag(validate("sharp-tl0", Config{{"memory_gib", "0.01"}}), "memory"));
    CHECK(has_diag(validate("sharp-tl0", Config{{"colour", "blue"}, {"memory_gib", "64"}}), "unknown-key"));
    CHECK(has_diag(validate("no-such-run", Config{}), "experiment-id"));
    CHECK(has_diag(validate("frame-diagnostics", Config{{"k_max", "20"}}), "frame-range"));
    CHECK(has_diag(validate("sharp-tl0", Config{{"k_min", "3"}, {"memory_gib", "64"}}), "frame-coverage"));
}

TEST_CASE("run refuses an invalid config with the precondition name") {
    try {
        run_experiment("sharp-tl0", Config{{"slope", "10"}, {"n_to", "8"}, {"memory_gib", "64"}});
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(e.name() == "frequency-overflow");
    }
}

TEST_CASE("region-map covers the 8x8x4x4x16 grid") {
    const Report r = run_experiment("region-map", Config{});
    CHECK(r.rows.size() == 8u * 8 * 4 * 4 * 16);
    for (const auto& row : r.rows) CHECK(!row[6].empty());
    CHECK(r.columns.size() == 9);
}

TEST_CASE("identical configs give byte-identical reports") {
    const Config c{{"L", "64"}, {"N", "1024"}, {"k_min", "-3"}, {"k_max", "1"}, {"seeds", "3"}, {"seed", "7"}};
    const Report a = run_experiment("frame-diagnostics", c), b = run_experiment("frame-diagnostics", c);
    CHECK(csv_of(a) == csv_of(b));
    CHECK(a.summary == b.summary);
    CHECK(a.rows.size() == 3);
    const Report other = run_experiment("frame-diagnostics", Config{{"L", "64"}, {"N", "1024"}, {"k_min", "-3"},
                                                                    {"k_max", "1"}, {"seeds", "3"}, {"seed", "8"}});
    CHECK(csv_of(a) != csv_of(other));
}

TEST_CASE("a small TL0 sweep carries provenance and grows") {
    const Config c{{"L", "256"},       {"N", "65536"},  {"k_min", "-2"},   {"k_max", "5"},
                   {"spacing", "12"},  {"n_from", "3"}, {"n_to", "5"},     {"slope", "1"},
                   {"n_start", "2"},   {"route", "dilated"}, {"norm_route", "full"}, {"memory_gib", "64"}};
    REQUIRE(validate("sharp-tl0", c).empty());
    const Report r = run_experiment("sharp-tl0", c);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0][0] == "TL0");
    CHECK(r.rows[0][1] == "3");
    const auto col = [&](const std::string& name) {
        return std::size_t(std::find(r.columns.begin(), r.columns.end(), name) - r.columns.begin());
    };
    REQUIRE(col("ratio") < r.columns.size());
    REQUIRE(col("edge_mass") < r.columns.size());
    for (std::size_t i = 1; i < r.rows.size(); ++i)
        CHECK(std::stod(r.rows[i][col("ratio")]) > std::stod(r.rows[i - 1][col("ratio")]));
    CHECK(r.config.at("spacing") == "12");
}

TEST_CASE("piece and window routes reproduce the full-grid sweep") {
    const Config base{{"L", "512"},       {"N", "2097152"},   {"k_min", "-1"},  {"k_max", "9"},
                      {"n_from", "3"},    {"n_to", "5"},      {"coarse_N", "16384"}, {"memory_gib", "64"}};
    Config full = base, fast = base;
    full.set("route", "dilated");
    full.set("norm_route", "full");
    REQUIRE(validate("sharp-tl0", full).empty());
    REQUIRE(validate("sharp-tl0", fast).empty());
    const Report a = run_experiment("sharp-tl0", full), b = run_experiment("sharp-tl0", fast);
    REQUIRE(a.rows.size() == b.rows.size());
    const auto col = [&](const std::string& name) {
        return std::size_t(std::find(a.columns.begin(), a.columns.end(), name) - a.columns.begin());
    };
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CAPTURE(i);
        for (const char* name : {"input", "output", "paired_input", "paired_output"})
            CHECK(std::stod(b.rows[i][col(name)]) == doctest::Approx(std::stod(a.rows[i][col(name)])).epsilon(1e-6));
        // First-order quadrature of |K|^u on both sides, see the multiplier tests.
        CHECK(std::stod(b.rows[i][col("class_sup")]) ==
              doctest::Approx(std::stod(a.rows[i][col("class_sup")])).epsilon(5e-3));
    }
}

TEST_CASE("localized bands stay inside their annulus") {
    const BoxSpec box{1, 64, 2048};
    const SampledFunction f = localized_band(box, 3, 1.0, 2.0);
    const SpectralFunction F = forward_transform(f);
    double outside = 0, total = 0;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        const double r = box.frequency_norm(i), a = std::norm(F.coeffs[i]);
        total += a;
        if (r < 1.0 - 1e-12 || r > 2.0 + 1e-12) outside += a;
    }
    CHECK(total > 0);
    CHECK(outside <= 1e-24 * total);
}
