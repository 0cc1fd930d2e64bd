#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "herzmult/grid.hpp"
#include "herzmult/lp.hpp"
#include "herzmult/multiplier.hpp"
#include "herzmult/norms.hpp"
#include "herzmult/regions.hpp"

namespace hm {

// Flat key=value configuration. Lines are "key = value"; '#' starts a comment.
// Numbers accept decimals, fractions a/b and inf; lists are comma separated.
class Config {
public:
    Config() = default;
    Config(std::initializer_list<std::pair<const std::string, std::string>> kv) : kv_(kv) {}

    static Config parse(std::istream& in);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    // "key=value"
    void assign(const std::string& item);
    // Adds every key of `defaults` that is not set yet.
    void fill(const Config& defaults);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    // All getters throw PreconditionError("config-key") when the key is missing.
    std::string text(const std::string& key) const;
    double real(const std::string& key) const;
    int integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<std::string> words(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return kv_; }

private:
    const std::string& raw(const std::string& key) const;

    std::map<std::string, std::string> kv_;
};

// Formats with %.12g; inf and nan spelled out.
std::string format_number(double v);

struct Report {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> summary;
    std::map<std::string, std::string> config;

    void add_summary(const std::string& key, double v) { summary.emplace_back(key, format_number(v)); }
    void add_summary(const std::string& key, const std::string& v) { summary.emplace_back(key, v); }
};

void write_report_csv(std::ostream& os, const Report& r);

std::vector<std::string> experiment_ids();
// The default configuration of an experiment; run and validate fill missing keys from it.
Config experiment_defaults(const std::string& id);

struct Diagnostic {
    std::string name;
    std::string detail;
};

// Dry run of every precondition a run would meet: box, frame, Nyquist,
// side conditions, memory. Nothing is computed.
std::vector<Diagnostic> validate(const std::string& id, Config cfg);

// Validates, then runs. Throws PreconditionError named after the first diagnostic.
Report run_experiment(const std::string& id, Config cfg);

// Memory the process may use: the cgroup limit, else physical memory.
// The config key memory_gib overrides it.
double memory_budget_bytes(const Config& cfg);

// Seeded sum of modulated Gaussians, filtered to lo <= |xi| <= hi.
SampledFunction localized_band(const BoxSpec& box, unsigned seed, double lo, double hi, int terms = 6);

// ----- multiplier sweeps over N_terms

struct SweepSetup {
    BoxSpec box;
    int k_min = 0, k_max = 0;
    ExampleCase c;
    TestKind test = TestKind::FFunc;
    int n_from = 1, n_to = 1;
    ClassNormOptions opts;
    // Space for the ratio, and the space of the paired tuple.
    SpaceParams space, paired;
    HerzParams herz;
    // Besov sweep: norms are Besov, and the paired tuple changes t instead of (p, q).
    bool besov = false;
    double herz_paired_t = 1.0;
    // F-norms from modulated pieces on `coarse` instead of the full box.
    bool pieces = false;
    BoxSpec coarse;
};

SweepSetup sweep_setup(const std::string& id, const Config& cfg);

struct SweepRow {
    int n_terms = 0;
    double class_sup = 0;     // class norm of m_N (weighted for the weighted sweep)
    double class_spread = 0;  // max/min over the interior scales
    double class_paired = 0;  // class norm used by the paired tuple, when it differs
    double class_tail = 0;    // largest last-shell share of a class norm row
    double input = 0, output = 0, ratio = 0;
    double paired_input = 0, paired_output = 0, paired_ratio = 0;
    double lower_bound = 0;   // (sum_{n <= N} |a_n|^p)^{1/p} for the output
    double edge = 0;          // share of |T_m f|^p mass within 1/8 of the box edge
};

struct SweepResult {
    SweepSetup setup;
    std::vector<SweepRow> rows;
    Verdict verdict, paired_verdict;
    int interior_lo = 0, interior_hi = 0;  // scales used for class_spread at n_to
    // Least-squares slope of log ratio against log lower_bound.
    double slope = 0;
};

// Scales strictly inside the window range of the first `n` terms, two away
// from either end.
std::pair<int, int> interior_scales(const ExampleCase& c, int n);

SweepResult sharp_sweep(const SweepSetup& s);

struct SeededBound {
    unsigned seed = 0;
    double ratio = 0;
};

struct WeightedBound {
    double bpq = 0, class_norm = 0;
    std::vector<SeededBound> inputs;
};

// Ratios of seeded inputs on the terms of the last sweep entry against
// B_{p,q}(w) K_u^{0,u}(w)[m] for w(l) = (1+l)^exponent.
WeightedBound weighted_bound(const SweepSetup& s, double exponent, unsigned seed, int count);

// ----- Nikolskii

struct NikolskiiRow {
    double p = 0, q = 0;
    int k = 0;
    NikolskiiValues v;
};

// Bumps with spectrum lowpass(2^{-k} |xi|) at scales k_lo..k_hi.
std::vector<NikolskiiRow> nikolskii_table(const BoxSpec& box, const std::vector<std::pair<double, double>>& pq,
                                          int k_lo, int k_hi);

// ----- Hörmander vs Herz

struct HoermanderRow {
    std::string symbol;
    int k = 0;
    double sobolev = 0, herz = 0;
};

struct HoermanderSetup {
    int d = 1;
    double s = 1;
    int k_lo = -3, k_hi = 3;
    BoxSpec xi_box{1, 16, 1024};
    BoxSpec herz_box{1, 64, 1024};
    std::vector<std::string> symbols;
};

std::vector<HoermanderRow> hoermander_table(const HoermanderSetup& h);
// max(max ratio, 1 / min ratio) of sobolev/herz.
double hoermander_constant(const std::vector<HoermanderRow>& rows);

// ----- maximal suites

struct MaximalRow {
    std::string suite;
    unsigned seed = 0;
    int size = 0;  // family size
    int mu = 0;
    double ratio = 0;
};

struct MaximalSetup {
    BoxSpec box{1, 64, 2048};
    int seeds = 20;
    double r = 0.5, q = 1.0, eps = 1.0;
    int k_lo = -3, k_hi = 3;
    std::vector<int> sizes{1, 2, 4, 8, 16};
};

// fefferman-stein: r = 1, p = q = 2 over family sizes; variant and peetre:
// tail-average ratios over cube scales mu = k_lo..k_hi.
std::vector<MaximalRow> maximal_suites(const MaximalSetup& m);

// ----- frame

struct FrameDiagnostics {
    double partition_residual = 0;
    double theta_lower_bound = 0;
    std::vector<double> reconstruction;  // relative l2 error per seed
};

FrameDiagnostics frame_diagnostics(const LPFrame& frame, unsigned seed, int count);

}  // namespace hm
