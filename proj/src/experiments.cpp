#include "herzmult/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "herzmult/maximal.hpp"

namespace hm {

// ---------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

Config Config::parse(std::istream& in) {
    Config c;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
            throw PreconditionError("config-syntax", "line " + std::to_string(no) + ": expected key=value");
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("config-file", "cannot open " + path);
    return parse(in);
}

void Config::assign(const std::string& item) {
    auto eq = item.find('=');
    if (eq == std::string::npos || trim(item.substr(0, eq)).empty())
        throw PreconditionError("config-syntax", "expected key=value, got '" + item + "'");
    set(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
}

void Config::fill(const Config& defaults) {
    for (const auto& [k, v] : defaults.kv_) kv_.emplace(k, v);
}

const std::string& Config::raw(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw PreconditionError("config-key", "missing key '" + key + "'");
    return it->second;
}

std::string Config::text(const std::string& key) const { return raw(key); }

double Config::real(const std::string& key) const { return parse_real(key, raw(key)); }

int Config::integer(const std::string& key) const {
    const double x = real(key);
    if (!(std::abs(x) < 2147483647.0) || x != std::round(x))
        throw PreconditionError("parameter", key + " must be an integer");
    return int(x);
}

bool Config::flag(const std::string& key) const {
    const std::string& v = raw(key);
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw PreconditionError("parameter", key + " must be 0 or 1");
}

std::vector<double> Config::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& w : split(raw(key), ',')) out.push_back(parse_real(key, w));
    return out;
}

std::vector<std::string> Config::words(const std::string& key) const { return split(raw(key), ','); }

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_report_csv(std::ostream& os, const Report& r) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
}

double memory_budget_bytes(const Config& cfg) {
    if (cfg.has("memory_gib")) return cfg.real("memory_gib") * 1073741824.0;
    double limit = kInf;
    if (std::ifstream cg("/sys/fs/cgroup/memory.max"); cg) {
        std::string v;
        cg >> v;
        if (!v.empty() && v != "max") limit = std::stod(v);
    }
    if (std::ifstream mi("/proc/meminfo"); mi) {
        std::string key, unit;
        double kb = 0;
        while (mi >> key >> kb >> unit)
            if (key == "MemTotal:") {
                limit = std::min(limit, kb * 1024.0);
                break;
            }
    }
    return limit;
}

SampledFunction localized_band(const BoxSpec& box, unsigned seed, double lo, double hi, int terms) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double width = 4.0 / (hi - lo);
    SampledFunction f(box);
    for (int t = 0; t < terms; ++t) {
        const double c1 = 4 * uni(rng), c2 = 4 * uni(rng);
        const double xi = lo + (hi - lo) * (0.5 + 0.5 * uni(rng));
        const double ang = kPi * uni(rng);
        double w1 = xi * std::cos(ang);
        const double w2 = box.d == 2 ? xi * std::sin(ang) : 0.0;
        if (box.d == 1) w1 = uni(rng) < 0 ? -xi : xi;
        const cplx amp{uni(rng), uni(rng)};
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const auto x = box.point(i);
            const double r2 = (x[0] - c1) * (x[0] - c1) + (box.d == 2 ? (x[1] - c2) * (x[1] - c2) : 0.0);
            f.values[i] += amp * std::exp(-r2 / (width * width)) * std::polar(1.0, 2 * kPi * (w1 * x[0] + w2 * x[1]));
        }
    }
    SpectralFunction F = forward_transform(f);
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
        const double r = box.frequency_norm(i);
        if (r < lo || r > hi) F.coeffs[i] = 0;
    }
    return inverse_transform(F);
}

// ---------------------------------------------------------------- defaults

namespace {

// Keys forwarded to parse_example.
const std::vector<std::string> kCaseKeys = {"d",     "p",       "q",       "u",       "s",        "t",
                                            "tau",   "delta",   "eps",     "alpha",   "r_in",     "r_out",
                                            "kernel_L", "kernel_N", "spacing", "n_start", "slope", "offset",
                                            "relaxed"};

// Keys every experiment accepts.
const std::vector<std::string> kGenericKeys = {"experiment", "out", "memory_gib"};

bool is_sweep(const std::string& id) { return id == "sharp-tl0" || id == "sharp-besov1" || id == "sharp-weighted"; }

Config sweep_defaults(const std::string& id) {
    if (id == "sharp-besov1")
        return {{"d", "1"},       {"L", "4096"},        {"N", "131072"},  {"k_min", "-2"},  {"k_max", "2"},
                {"case", "BESOV1"}, {"test", "BESOV-F"}, {"p", "1/2"},    {"q", "2"},       {"u", "1/2"},
                {"t", "1"},       {"s", "0"},           {"paired_t", "1/2"}, {"n_start", "1"}, {"slope", "1"},
                {"offset", "0"},  {"spacing", "0"},     {"n_from", "2"},  {"n_to", "10"},   {"route", "dilated"},
                {"norm_route", "full"}, {"coarse_N", "65536"}};
    if (id == "sharp-weighted")
        return {{"d", "1"},          {"L", "512"},        {"N", "4194304"},  {"k_min", "-2"},   {"k_max", "10"},
                {"case", "WEIGHTED"}, {"test", "F-FFUNC"}, {"p", "1/2"},     {"q", "2"},        {"u", "1/2"},
                {"t", "1/2"},        {"s", "0"},          {"eps", "0.4"},    {"relaxed", "1"},  {"n_start", "2"},
                {"slope", "1"},      {"offset", "2"},     {"spacing", "40"}, {"n_from", "5"},   {"n_to", "10"},
                {"route", "dilated"}, {"norm_route", "full"}, {"coarse_N", "65536"}, {"bound_exponent", "2"},
                {"bound_seeds", "10"}, {"seed", "1"}};
    // Windows at 4^j, j < 10, so the logical box needs 2^32 points; the norms
    // run on pieces and window tables instead.
    return {{"d", "1"},          {"L", "1024"},       {"N", "4294967296"}, {"k_min", "-1"},   {"k_max", "19"},
            {"case", "TL0"},     {"test", "F-FFUNC"}, {"p", "1/2"},        {"q", "2"},        {"u", "1/2"},
            {"t", "1/2"},        {"s", "0"},          {"eps", "0.4"},      {"relaxed", "1"},  {"n_start", "1"},
            {"slope", "2"},      {"offset", "2"},     {"spacing", "40"},   {"n_from", "5"},   {"n_to", "10"},
            {"route", "windowed"}, {"norm_route", "pieces"}, {"coarse_N", "131072"}, {"paired_p", "1/2"},
            {"paired_q", "1/2"}};
}

}  // namespace

std::vector<std::string> experiment_ids() {
    return {"sharp-tl0",        "sharp-besov1", "sharp-weighted",  "nikolskii",
            "hoermander-equiv", "region-map",   "maximal-ratios", "frame-diagnostics"};
}

Config experiment_defaults(const std::string& id) {
    if (is_sweep(id)) return sweep_defaults(id);
    if (id == "nikolskii")
        return {{"d", "1"}, {"L", "64"}, {"N", "32768"}, {"k_lo", "0"}, {"k_hi", "6"}, {"p_list", "1,1/2"},
                {"q_list", "2,1"}};
    if (id == "hoermander-equiv")
        return {{"d", "1"},       {"s", "1"},        {"k_lo", "-3"},     {"k_hi", "3"},
                {"xi_L", "16"},   {"xi_N", "1024"},  {"herz_L", "64"},   {"herz_N", "1024"},
                {"symbols", "one,hilbert,imag-power,log-osc,smooth-step"}, {"refine", "1"}};
    if (id == "region-map")
        return {{"dims", "1"},
                {"p_list", "1/4,1/2,3/4,1,3/2,2,4,inf"},
                {"q_list", "1/4,1/2,3/4,1,3/2,2,4,inf"},
                {"u_list", "1/4,1/2,1,2"},
                {"t_list", "1/4,1/2,1,2"},
                {"s_list", "-1,-1/2,0,1/4,1/2,3/4,1,5/4,3/2,7/4,2,5/2,3,4,6,8"}};
    if (id == "maximal-ratios")
        return {{"d", "1"},  {"L", "64"},     {"N", "2048"},  {"seeds", "20"},  {"seed", "0"},
                {"r", "1/2"}, {"q", "1"},     {"eps", "1"},   {"k_lo", "-3"},   {"k_hi", "3"},
                {"sizes", "1,2,4,8,16"}};
    if (id == "frame-diagnostics")
        return {{"d", "1"}, {"L", "512"}, {"N", "65536"}, {"k_min", "-6"}, {"k_max", "4"}, {"seeds", "50"},
                {"seed", "0"}};
    throw PreconditionError("experiment-id", "unknown experiment '" + id + "'");
}

// ---------------------------------------------------------------- sweeps

namespace {

BoxSpec box_of(const Config& cfg, const std::string& L = "L", const std::string& N = "N") {
    const double n = cfg.real(N);
    if (!(n >= 2 && n <= 0x1p62) || n != std::round(n))
        throw PreconditionError("box", "points per side must be an integer in [2, 2^62]");
    return BoxSpec{cfg.integer("d"), cfg.real(L), (long long)n};
}

ExampleCase case_of(const Config& cfg) {
    std::string params;
    for (const auto& k : kCaseKeys)
        if (cfg.has(k)) params += k + "=" + cfg.text(k) + " ";
    return parse_example(cfg.text("case"), params);
}

KernelRoute route_of(const Config& cfg) {
    const std::string r = cfg.text("route");
    if (r == "dilated") return KernelRoute::Dilated;
    if (r == "unit") return KernelRoute::UnitBox;
    if (r == "windowed") return KernelRoute::Windowed;
    throw PreconditionError("parameter", "route must be dilated, unit or windowed");
}

double rho_of(const ExampleCase& c) { return std::abs(1 / c.p - 1 / c.q); }

WeightSeq power_weight(int l_max, double expo) {
    return WeightSeq::from(l_max, [expo](int l) { return std::pow(1.0 + l, expo); });
}

double max_shift(const SeriesLayout& L) {
    double m = 0;
    for (int j = 0; j < L.n_terms; ++j) m = std::max(m, std::abs(L.shift(j)));
    return m;
}

int weight_length(const SweepSetup& s) {
    int n = max_shell(s.box) + std::max(0, s.k_max);
    if (s.opts.route == KernelRoute::Windowed) {
        SeriesLayout L = s.c.layout;
        L.n_terms = s.n_to;
        const double reach = std::ldexp(max_shift(L), s.k_max) + default_window_box().L / 2;
        n = std::max(n, shell_of(reach) + 1);
    }
    return n;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a, sy += b, sxx += a * a, sxy += a * b, n += 1;
    }
    const double den = n * sxx - sx * sx;
    return n > 1 && den > 0 ? (n * sxy - sx * sy) / den : std::nan("");
}

// |coefficient| of term j in T_m f, the quantity the lower bound sums.
double output_coefficient(const ExampleCase& c, int j) {
    const double z = c.layout.zeta(j);
    switch (c.kind) {
        case CaseKind::Besov1:
            return c.p <= 1 ? std::pow(double(c.layout.index(j)), -1 / c.p) : 1.0 / c.layout.index(j);
        case CaseKind::Weighted:
            return std::pow(z, -1 / c.q) * std::pow(std::log(z), -c.eps) * std::pow(1.0 + z, -rho_of(c));
        default:
            return std::pow(z, -1 / c.q) * std::pow(std::log(z), -c.eps);
    }
}

// Samples of sum_j e^{2 pi i c_j x_1} E_j(x) on the coarse grid.
SampledFunction piece_values(const ModulatedPieces& f) {
    SampledFunction g(f.coarse);
    for (std::size_t j = 0; j < f.envelopes.size(); ++j) {
        const SampledFunction e = inverse_transform(f.envelopes[j]);
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            const double x = f.coarse.point(i)[0];
            const double turns = std::fmod(f.centers[j] * x, 1.0);
            g.values[i] += std::polar(1.0, 2 * kPi * turns) * e.values[i];
        }
    }
    return g;
}

double mass_near_edge(const SampledFunction& g, double p) {
    const double cut = 3 * g.box.L / 8;
    double all = 0, edge = 0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double v = std::pow(std::abs(g.values[i]), p);
        all += v;
        const auto x = g.box.point(i);
        if (std::max(std::abs(x[0]), std::abs(x[1])) > cut) edge += v;
    }
    return all > 0 ? edge / all : 0.0;
}

double tail_share(const ClassNormResult& r) {
    double worst = 0;
    for (const auto& row : r.rows)
        if (!row.empty && row.value > 0) worst = std::max(worst, row.last_shell / row.value);
    return worst;
}

// Diagnostics of one sweep configuration.
void check_sweep(const SweepSetup& s, const Config& cfg, std::vector<Diagnostic>& out) {
    auto add = [&](const std::vector<Violation>& v) {
        for (const auto& x : v) out.push_back({x.name, x.detail});
    };
    try {
        s.box.validate();
    } catch (const PreconditionError& e) {
        out.push_back({e.name(), e.what()});
        return;
    }
    try {
        LPFrame frame(s.k_min, s.k_max, s.box);
    } catch (const PreconditionError& e) {
        out.push_back({e.name(), e.what()});
    }
    if (s.n_from < 1 || s.n_from > s.n_to) out.push_back({"n-terms", "need 1 <= n_from <= n_to"});
    ExampleCase c = s.c;
    c.layout.n_terms = std::max(1, s.n_to);
    add(check_example(c, s.box));
    if (s.pieces) {
        if (s.besov) out.push_back({"norm-route", "Besov sweeps need norm_route=full"});
        try {
            s.coarse.validate();
            add(check_test_pieces(s.test, c, s.coarse));
        } catch (const PreconditionError& e) {
            out.push_back({e.name(), e.what()});
        }
    } else {
        add(check_test_function(s.test, c, s.box));
    }
    if (s.opts.route == KernelRoute::Windowed && c.kind != CaseKind::TL0 && c.kind != CaseKind::Weighted)
        out.push_back({"kernel-route", "the windowed route needs a TL0 or WEIGHTED symbol"});
    if (!out.empty()) return;

    // The frame must cover the spectrum of f so that the norms see all of it.
    const SeriesLayout& L = c.layout;
    double lo = 0, hi = 0;
    if (s.test == TestKind::FFunc) {
        lo = L.place(0) - c.r_in;
        hi = L.place(L.n_terms - 1) + c.r_in;
    } else {
        lo = 1 - c.r_in;
        hi = 1 + c.r_in;
    }
    if (!(lo >= std::ldexp(1.0, s.k_min) && hi <= std::ldexp(1.0, s.k_max)))
        out.push_back({"frame-coverage", "spectrum of f spans [" + format_number(lo) + ", " + format_number(hi) +
                                             "], outside [2^" + std::to_string(s.k_min) + ", 2^" +
                                             std::to_string(s.k_max) + "]"});
    if (s.opts.route == KernelRoute::Dilated) {
        const double r_max = c.kind == CaseKind::Besov1 ? 1 + c.r_out : (1 + c.r_out) * L.place(L.n_terms - 1);
        for (int k = s.k_min; k <= s.k_max; ++k)
            if (!(std::min(std::ldexp(1.0, k + 2), r_max) < s.box.nyquist())) {
                out.push_back({"scale-range", "slice " + std::to_string(k) + " is not resolved by the box"});
                break;
            }
    }
    if (s.opts.route == KernelRoute::Windowed) {
        // Every shift must sit on the table grid at every scale where its window is seen.
        const double h = default_window_box().spacing();
        for (int j = 0; j < L.n_terms; ++j)
            for (int k = s.k_min; k <= s.k_max; ++k) {
                const double b = L.place(j) / std::ldexp(1.0, k), rho = c.r_out * b;
                const double sh = std::ldexp(L.shift(j), k) / h;
                if (b - rho < 4.0 && b + rho > 0.25 && std::abs(sh - std::round(sh)) > 1e-6) {
                    out.push_back({"kernel-box", "shift of term " + std::to_string(j) + " at k=" + std::to_string(k) +
                                                     " is off the window table grid"});
                    j = L.n_terms;
                    break;
                }
            }
    }
    // Full route: f, its spectrum, T_m f, one band, two accumulators. Pieces:
    // two envelopes per term, a band and the accumulators on the coarse box.
    double need = s.pieces ? 16.0 * double(s.coarse.size()) * (2.0 * L.n_terms + 6)
                           : 6.0 * 16.0 * double(s.box.size());
    if (s.opts.route == KernelRoute::Dilated)
        need = std::max(need, 3.0 * 16.0 * double(s.box.size()));
    else if (s.opts.route == KernelRoute::Windowed)
        need += 16.0 * double(default_window_box().size()) * 8;
    const double budget = memory_budget_bytes(cfg);
    if (need > budget)
        out.push_back({"memory", "the run needs about " + format_number(need / 1073741824.0) + " GiB for a " +
                                     std::to_string(s.box.N) + "-point box; the budget is " +
                                     format_number(budget / 1073741824.0) + " GiB"});
}

}  // namespace

std::pair<int, int> interior_scales(const ExampleCase& c, int n) {
    if (c.kind != CaseKind::TL0 && c.kind != CaseKind::Weighted) return {1, 0};
    const int e0 = int(std::lround(std::log2(c.layout.place(0))));
    const int e1 = int(std::lround(std::log2(c.layout.place(n - 1))));
    return {e0 + 2, e1 - 2};
}

SweepSetup sweep_setup(const std::string& id, const Config& cfg) {
    SweepSetup s;
    s.box = box_of(cfg);
    s.k_min = cfg.integer("k_min");
    s.k_max = cfg.integer("k_max");
    s.c = case_of(cfg);
    s.test = test_from_name(cfg.text("test"));
    s.n_from = cfg.integer("n_from");
    s.n_to = cfg.integer("n_to");
    s.opts.route = route_of(cfg);
    s.herz = {s.c.u, s.c.t, s.c.s};
    s.space = {s.c.p, s.c.q, 0.0, true};
    s.paired = s.space;
    if (id == "sharp-tl0") s.paired = {cfg.real("paired_p"), cfg.real("paired_q"), 0.0, true};
    if (id == "sharp-besov1") s.herz_paired_t = cfg.real("paired_t");
    s.besov = id == "sharp-besov1";
    const std::string nr = cfg.text("norm_route");
    if (nr != "full" && nr != "pieces") throw PreconditionError("parameter", "norm_route must be full or pieces");
    s.pieces = nr == "pieces";
    s.coarse = box_of(cfg, "L", "coarse_N");
    return s;
}

SweepResult sharp_sweep(const SweepSetup& s) {
    SweepResult res;
    res.setup = s;
    const LPFrame frame(s.k_min, s.k_max, s.box);
    const ExampleCase& c0 = s.c;
    const int d = c0.d;
    const bool weighted = c0.kind == CaseKind::Weighted;
    const WeightSeq w = weighted ? power_weight(weight_length(s), rho_of(c0)) : WeightSeq();

    if (weighted) {
        res.verdict = classify_weighted(d, c0.p, c0.q, c0.u, w);
        res.paired_verdict = classify_weighted(d, c0.p, c0.q, c0.u, power_weight(weight_length(s), 2.0));
    } else if (s.besov) {
        res.verdict = classify_besov(d, c0.p, c0.q, c0.u, c0.t, c0.s);
        res.paired_verdict = classify_besov(d, c0.p, c0.q, c0.u, s.herz_paired_t, c0.s);
    } else {
        res.verdict = classify_tl(d, c0.p, c0.q, c0.u, c0.t, c0.s);
        res.paired_verdict = classify_tl(d, s.paired.p, s.paired.q, c0.u, c0.t, c0.s);
    }
    std::tie(res.interior_lo, res.interior_hi) = interior_scales(c0, s.n_to);

    for (int n = s.n_from; n <= s.n_to; ++n) {
        ExampleCase c = c0;
        c.layout.n_terms = n;
        SweepRow row;
        row.n_terms = n;
        const MultiplierSymbol m = build_example(c, s.box);

        const ClassNormResult cn = weighted ? weighted_class_norm(m, c.u, w, s.k_min, s.k_max, frame, s.opts)
                                            : class_norm(m, s.herz, s.k_min, s.k_max, frame, s.opts);
        row.class_sup = cn.value;
        row.class_tail = tail_share(cn);
        auto [lo, hi] = interior_scales(c, n);
        row.class_spread = lo <= hi ? cn.spread(lo, hi) : cn.spread(s.k_min, s.k_max);
        row.class_paired = row.class_sup;
        if (s.besov) {
            const HerzParams hp{c.u, s.herz_paired_t, c.s};
            row.class_paired = class_norm(m, hp, s.k_min, s.k_max, frame, s.opts).value;
        }

        if (s.pieces) {
            const ModulatedPieces P = test_function_pieces(s.test, c, s.coarse);
            const ModulatedPieces Q = apply_pieces(m, P);
            const auto in = tl_norms(P, {s.space, s.paired}, s.k_min, s.k_max);
            const auto out = tl_norms(Q, {s.space, s.paired}, s.k_min, s.k_max);
            row.input = in[0], row.paired_input = in[1];
            row.output = out[0], row.paired_output = out[1];
            row.edge = mass_near_edge(piece_values(Q), s.space.p);
        } else if (s.besov) {
            const SpectralFunction F = test_function_spectrum(s.test, c, s.box);
            const SpectralFunction G = apply_spectrum(m, F);
            const SampledFunction f = inverse_transform(F), g = inverse_transform(G);
            row.input = besov_norm(f, s.space, frame);
            row.output = besov_norm(g, s.space, frame);
            row.edge = mass_near_edge(g, s.space.p);
            row.paired_input = row.input;
            row.paired_output = row.output;
        } else {
            const SpectralFunction F = test_function_spectrum(s.test, c, s.box);
            const SpectralFunction G = apply_spectrum(m, F);
            const auto in = tl_norms(F, {s.space, s.paired}, frame);
            const auto out = tl_norms(G, {s.space, s.paired}, frame);
            row.input = in[0], row.paired_input = in[1];
            row.output = out[0], row.paired_output = out[1];
            row.edge = mass_near_edge(inverse_transform(G), s.space.p);
        }
        row.ratio = row.output / row.input;
        row.paired_ratio = row.paired_output / row.paired_input;

        double sum = 0;
        for (int j = 0; j < n; ++j) sum += std::pow(output_coefficient(c, j), s.space.p);
        row.lower_bound = std::pow(sum, 1 / s.space.p);
        res.rows.push_back(row);
    }

    std::vector<double> x, y;
    for (const auto& r : res.rows) x.push_back(r.lower_bound), y.push_back(r.ratio);
    res.slope = fitted_slope(x, y);
    return res;
}

WeightedBound weighted_bound(const SweepSetup& s, double exponent, unsigned seed, int count) {
    const LPFrame frame(s.k_min, s.k_max, s.box);
    ExampleCase c = s.c;
    c.layout.n_terms = s.n_to;
    const MultiplierSymbol m = build_example(c, s.box);
    const WeightSeq w = power_weight(weight_length(s), exponent);
    WeightedBound out;
    out.bpq = bpq_constant(w, c.p, c.q).value;
    out.class_norm = weighted_class_norm(m, c.u, w, s.k_min, s.k_max, frame, s.opts).value;

    // The pieces of f_N, one term at a time, kept sparse. Pieces are separated
    // in frequency, so each is the spectrum of f_N near its own window.
    const SpectralFunction full = test_function_spectrum(s.test, c, s.box);
    std::vector<std::vector<std::pair<std::size_t, cplx>>> pieces(std::size_t(s.n_to));
    for (std::size_t i = 0; i < full.coeffs.size(); ++i) {
        if (full.coeffs[i] == cplx(0.0)) continue;
        const double r = s.box.frequency_norm(i);
        for (int j = 0; j < s.n_to; ++j)
            if (std::abs(r - c.layout.place(j)) <= c.r_in) {
                pieces[std::size_t(j)].emplace_back(i, full.coeffs[i]);
                break;
            }
    }
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed + unsigned(i));
        std::uniform_real_distribution<double> amp(0.5, 1.5), phase(0.0, 1.0);
        SpectralFunction F(s.box);
        for (const auto& piece : pieces) {
            const cplx z = std::polar(amp(rng), 2 * kPi * phase(rng));
            for (const auto& [idx, v] : piece) F.coeffs[idx] += z * v;
        }
        const double a = tl_norms(F, {s.space}, frame)[0];
        const double b = tl_norms(apply_spectrum(m, F), {s.space}, frame)[0];
        out.inputs.push_back({seed + unsigned(i), b / a});
    }
    return out;
}

// ---------------------------------------------------------------- Nikolskii

std::vector<NikolskiiRow> nikolskii_table(const BoxSpec& box, const std::vector<std::pair<double, double>>& pq,
                                          int k_lo, int k_hi) {
    std::vector<NikolskiiRow> rows;
    std::vector<SampledFunction> bumps;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double scale = std::ldexp(1.0, -k);
        bumps.push_back(inverse_transform(SpectralFunction::from(box, [&](const Point& xi) {
            return cplx(LPFrame::lowpass(scale * std::hypot(xi[0], xi[1])));
        })));
    }
    for (const auto& [p, q] : pq)
        for (int k = k_lo; k <= k_hi; ++k)
            rows.push_back({p, q, k, nikolskii_check(bumps[std::size_t(k - k_lo)], k, p, q)});
    return rows;
}

// ---------------------------------------------------------------- Hörmander

std::vector<HoermanderRow> hoermander_table(const HoermanderSetup& h) {
    std::vector<HoermanderRow> rows;
    for (const auto& name : h.symbols) {
        const MultiplierSymbol m = standard_symbol(name, h.d);
        for (int k = h.k_lo; k <= h.k_hi; ++k) {
            HoermanderRow r;
            r.symbol = name;
            r.k = k;
            r.sobolev = hoermander_piece(m, k, h.s, h.xi_box);
            r.herz = herz_norm(unit_kernel(m, k, h.herz_box), HerzParams{2.0, 2.0, h.s});
            rows.push_back(r);
        }
    }
    return rows;
}

double hoermander_constant(const std::vector<HoermanderRow>& rows) {
    double c = 1;
    for (const auto& r : rows) {
        const double q = r.sobolev / r.herz;
        c = std::max({c, q, 1 / q});
    }
    return c;
}

// ---------------------------------------------------------------- maximal

namespace {

double l2_of_family(const std::vector<SampledFunction>& fs, std::size_t n, bool maximal_values) {
    const BoxSpec& box = fs.front().box;
    double s = 0;
    for (std::size_t i = 0; i < box.size(); ++i) {
        double v = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = maximal_values ? fs[j].values[i].real() : std::abs(fs[j].values[i]);
            v += a * a;
        }
        s += v;
    }
    return std::sqrt(s * box.cell_volume());
}

}  // namespace

std::vector<MaximalRow> maximal_suites(const MaximalSetup& ms) {
    std::vector<MaximalRow> rows;
    const BoxSpec& box = ms.box;
    const int d = box.d;
    const int top = *std::max_element(ms.sizes.begin(), ms.sizes.end());
    for (int s = 0; s < ms.seeds; ++s) {
        const unsigned seed = unsigned(s);
        std::vector<SampledFunction> fam, fam_max;
        for (int j = 0; j < top; ++j) {
            fam.push_back(localized_band(box, 1000 * seed + unsigned(j), 0.0, box.nyquist() / 2));
            fam_max.push_back(hl_maximal(fam.back(), 1.0));
        }
        for (int n : ms.sizes)
            rows.push_back({"fefferman-stein", seed, n, 0,
                            l2_of_family(fam_max, std::size_t(n), true) / l2_of_family(fam, std::size_t(n), false)});
    }
    const int bands = ms.k_hi - ms.k_lo + 1;
    for (int s = 0; s < ms.seeds; ++s) {
        const unsigned seed = unsigned(s);
        std::vector<SampledFunction> f, var, pee;
        for (int k = ms.k_lo; k <= ms.k_hi; ++k) {
            f.push_back(localized_band(box, 100 * seed + unsigned(k - ms.k_lo), 0.0, std::ldexp(1.0, k)));
            var.push_back(variant_maximal(f.back(), ms.r, k, ms.eps));
            pee.push_back(peetre_maximal(f.back(), d / ms.r, k));
        }
        for (int n = 1; n <= bands; ++n) {
            const std::vector<SampledFunction> fn(f.begin(), f.begin() + n), vn(var.begin(), var.begin() + n),
                pn(pee.begin(), pee.begin() + n);
            for (int mu = ms.k_lo; mu < ms.k_lo + n; ++mu) {
                const double base = tail_average_sup(fn, ms.k_lo, ms.q, mu);
                if (!(base > 0)) continue;
                rows.push_back({"variant", seed, n, mu, tail_average_sup(vn, ms.k_lo, ms.q, mu) / base});
                rows.push_back({"peetre", seed, n, mu, tail_average_sup(pn, ms.k_lo, ms.q, mu) / base});
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const MaximalRow& a, const MaximalRow& b) { return a.suite < b.suite; });
    return rows;
}

// ---------------------------------------------------------------- frame

FrameDiagnostics frame_diagnostics(const LPFrame& frame, unsigned seed, int count) {
    FrameDiagnostics out;
    const BoxSpec& box = frame.box();
    const double lo = std::ldexp(1.0, frame.k_min()), hi = std::ldexp(1.0, frame.k_max());
    for (std::size_t i = 0; i < box.size(); ++i) {
        const double r = box.frequency_norm(i);
        if (r < lo || r > hi) continue;
        double s = 0;
        for (int k = frame.k_min(); k <= frame.k_max(); ++k) s += LPFrame::band(k, r);
        out.partition_residual = std::max(out.partition_residual, std::abs(s - 1));
    }
    out.theta_lower_bound = LPFrame::theta_lower_bound();
    for (int i = 0; i < count; ++i) {
        const SampledFunction f = localized_band(box, seed + unsigned(i), lo, hi);
        SampledFunction sum(box);
        for (const auto& b : all_bands(f, frame)) sum += b;
        double num = 0, den = 0;
        for (std::size_t j = 0; j < box.size(); ++j) {
            num += std::norm(sum.values[j] - f.values[j]);
            den += std::norm(f.values[j]);
        }
        out.reconstruction.push_back(std::sqrt(num / den));
    }
    return out;
}

// ---------------------------------------------------------------- validate / run

namespace {

std::vector<std::pair<double, double>> pairs_of(const Config& cfg) {
    const auto ps = cfg.reals("p_list"), qs = cfg.reals("q_list");
    if (ps.size() != qs.size()) throw PreconditionError("parameter", "p_list and q_list differ in length");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < ps.size(); ++i) out.emplace_back(ps[i], qs[i]);
    return out;
}

HoermanderSetup hoermander_of(const Config& cfg, bool refined) {
    HoermanderSetup h;
    h.d = cfg.integer("d");
    h.s = cfg.real("s");
    h.k_lo = cfg.integer("k_lo");
    h.k_hi = cfg.integer("k_hi");
    const int f = refined ? 2 : 1;
    h.xi_box = {h.d, cfg.real("xi_L"), f * cfg.integer("xi_N")};
    h.herz_box = {h.d, f * cfg.real("herz_L"), f * cfg.integer("herz_N")};
    h.symbols = cfg.words("symbols");
    return h;
}

MaximalSetup maximal_of(const Config& cfg) {
    MaximalSetup m;
    m.box = box_of(cfg);
    m.seeds = cfg.integer("seeds");
    m.r = cfg.real("r");
    m.q = cfg.real("q");
    m.eps = cfg.real("eps");
    m.k_lo = cfg.integer("k_lo");
    m.k_hi = cfg.integer("k_hi");
    m.sizes.clear();
    for (double v : cfg.reals("sizes")) m.sizes.push_back(int(v));
    return m;
}

void check_memory(const Config& cfg, double bytes, std::vector<Diagnostic>& out) {
    const double budget = memory_budget_bytes(cfg);
    if (bytes > budget)
        out.push_back({"memory", "needs about " + format_number(bytes / 1073741824.0) + " GiB, budget " +
                                     format_number(budget / 1073741824.0) + " GiB"});
}

template <class F>
void guarded(std::vector<Diagnostic>& out, F&& f) {
    try {
        f();
    } catch (const PreconditionError& e) {
        out.push_back({e.name(), e.what()});
    }
}

}  // namespace

std::vector<Diagnostic> validate(const std::string& id, Config cfg) {
    std::vector<Diagnostic> out;
    Config defaults;
    try {
        defaults = experiment_defaults(id);
    } catch (const PreconditionError& e) {
        return {{e.name(), e.what()}};
    }
    for (const auto& [k, v] : cfg.values()) {
        const bool known = defaults.has(k) || std::count(kGenericKeys.begin(), kGenericKeys.end(), k) ||
                           (is_sweep(id) && std::count(kCaseKeys.begin(), kCaseKeys.end(), k));
        if (!known) out.push_back({"unknown-key", "'" + k + "' is not read by " + id});
    }
    cfg.fill(defaults);

    guarded(out, [&] {
        if (is_sweep(id)) {
            check_sweep(sweep_setup(id, cfg), cfg, out);
        } else if (id == "nikolskii") {
            const BoxSpec box = box_of(cfg);
            box.validate();
            for (const auto& [p, q] : pairs_of(cfg))
                if (!(p > 0 && p < q)) out.push_back({"exponent", "need 0 < p < q"});
            const int k_hi = cfg.integer("k_hi");
            if (cfg.integer("k_lo") > k_hi) out.push_back({"scale-range", "k_lo exceeds k_hi"});
            if (!(std::ldexp(1.0, k_hi + 1) < box.nyquist()))
                out.push_back({"frequency-overflow", "2^(k_hi+1) is not below the Nyquist frequency"});
            check_memory(cfg, 16.0 * double(box.size()) * (k_hi - cfg.integer("k_lo") + 4), out);
        } else if (id == "hoermander-equiv") {
            for (bool refined : {false, true}) {
                if (refined && !cfg.flag("refine")) break;
                const HoermanderSetup h = hoermander_of(cfg, refined);
                h.xi_box.validate();
                h.herz_box.validate();
                if (!(h.xi_box.L / 2 > 4.0)) out.push_back({"box", "the xi-box must contain |xi| <= 4"});
                if (!(h.herz_box.nyquist() > 4.0)) out.push_back({"kernel-box", "Nyquist must exceed 4"});
                for (const auto& name : h.symbols) standard_symbol(name, h.d);
                check_memory(cfg, 16.0 * 4 * double(std::max(h.xi_box.size(), h.herz_box.size())), out);
            }
        } else if (id == "region-map") {
            for (double d : cfg.reals("dims"))
                if (d != 1 && d != 2) out.push_back({"dimension", "dims must be 1 or 2"});
            for (const char* key : {"p_list", "q_list", "u_list", "t_list"})
                for (double v : cfg.reals(key))
                    if (!(v > 0)) out.push_back({"parameter", std::string(key) + " entries must lie in (0, inf]"});
            for (double v : cfg.reals("s_list"))
                if (!std::isfinite(v)) out.push_back({"parameter", "s_list entries must be finite"});
        } else if (id == "maximal-ratios") {
            const MaximalSetup m = maximal_of(cfg);
            m.box.validate();
            if (!(std::ldexp(1.0, m.k_hi) < m.box.nyquist()))
                out.push_back({"frequency-overflow", "2^k_hi is not below the Nyquist frequency"});
            if (!(m.r > 0 && m.r < m.q)) out.push_back({"exponent", "need 0 < r < q"});
            if (!(m.eps > 0)) out.push_back({"exponent", "need eps > 0"});
            if (m.sizes.empty() || m.seeds < 1) out.push_back({"parameter", "need sizes and seeds"});
            check_memory(cfg, 16.0 * double(m.box.size()) * (3 * (m.k_hi - m.k_lo + 1) + 40), out);
        } else if (id == "frame-diagnostics") {
            LPFrame frame(cfg.integer("k_min"), cfg.integer("k_max"), box_of(cfg));
            if (cfg.integer("seeds") < 1) out.push_back({"parameter", "need seeds >= 1"});
            check_memory(cfg, 16.0 * double(frame.box().size()) * 6, out);
        }
    });
    return out;
}

namespace {

std::vector<std::string> cells(std::initializer_list<std::string> v) { return v; }
std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }

double max_over(const std::vector<double>& v) { return v.empty() ? std::nan("") : *std::max_element(v.begin(), v.end()); }
double min_over(const std::vector<double>& v) { return v.empty() ? std::nan("") : *std::min_element(v.begin(), v.end()); }

Report sweep_report(const std::string& id, const Config& cfg) {
    const SweepSetup s = sweep_setup(id, cfg);
    const SweepResult res = sharp_sweep(s);
    Report r;
    r.columns = {"case",  "n_terms", "class_sup",      "class_spread",  "class_paired", "class_tail",
                 "input", "output",  "ratio",          "paired_input",  "paired_output", "paired_ratio",
                 "lower_bound", "edge_mass"};
    std::vector<double> ratio, paired, sup, spread, paired_class;
    for (const auto& row : res.rows) {
        ExampleCase c = s.c;
        c.layout.n_terms = row.n_terms;
        r.rows.push_back(cells({case_name(c.kind), num(row.n_terms), num(row.class_sup), num(row.class_spread),
                                num(row.class_paired), num(row.class_tail), num(row.input), num(row.output),
                                num(row.ratio), num(row.paired_input), num(row.paired_output),
                                num(row.paired_ratio), num(row.lower_bound), num(row.edge)}));
        ratio.push_back(row.ratio);
        paired.push_back(row.paired_ratio);
        sup.push_back(row.class_sup);
        spread.push_back(row.class_spread);
        paired_class.push_back(row.class_paired / row.ratio);
    }
    bool increasing = true;
    for (std::size_t i = 1; i < ratio.size(); ++i) increasing = increasing && ratio[i] > ratio[i - 1];
    r.add_summary("verdict", to_string(res.verdict));
    r.add_summary("paired_verdict", to_string(res.paired_verdict));
    r.add_summary("ratio_strictly_increasing", increasing ? "true" : "false");
    r.add_summary("ratio_growth", ratio.back() / ratio.front() - 1);
    r.add_summary("loglog_slope_vs_lower_bound", res.slope);
    r.add_summary("paired_ratio_variation", max_over(paired) / min_over(paired));
    r.add_summary("class_sup_variation", max_over(sup) / min_over(sup));
    r.add_summary("class_spread_max", max_over(spread));
    if (s.besov) r.add_summary("class_paired_over_ratio_variation", max_over(paired_class) / min_over(paired_class));
    r.add_summary("interior_scales", std::to_string(res.interior_lo) + ".." + std::to_string(res.interior_hi));
    if (id == "sharp-weighted") {
        const WeightedBound b = weighted_bound(s, cfg.real("bound_exponent"), unsigned(cfg.integer("seed")),
                                               cfg.integer("bound_seeds"));
        std::vector<double> ratios;
        for (const auto& x : b.inputs) ratios.push_back(x.ratio);
        r.add_summary("bound_bpq", b.bpq);
        r.add_summary("bound_class_norm", b.class_norm);
        r.add_summary("bound_product", b.bpq * b.class_norm);
        r.add_summary("bound_max_seeded_ratio", max_over(ratios));
    }
    return r;
}

Report nikolskii_report(const Config& cfg) {
    const auto rows = nikolskii_table(box_of(cfg), pairs_of(cfg), cfg.integer("k_lo"), cfg.integer("k_hi"));
    Report r;
    r.columns = {"p", "q", "k", "lhs", "classical", "improved", "lhs_over_improved", "improved_over_classical"};
    std::map<std::pair<double, double>, std::vector<double>> ratios;
    double c = 0;
    for (const auto& x : rows) {
        r.rows.push_back(cells({num(x.p), num(x.q), num(x.k), num(x.v.lhs), num(x.v.classical), num(x.v.improved),
                                num(x.v.lhs / x.v.improved), num(x.v.improved / x.v.classical)}));
        ratios[{x.p, x.q}].push_back(x.v.lhs / x.v.improved);
        c = std::max(c, x.v.improved / x.v.classical);
    }
    for (const auto& [pq, v] : ratios)
        r.add_summary("spread_p" + num(pq.first) + "_q" + num(pq.second), max_over(v) / min_over(v));
    r.add_summary("improved_over_classical_max", c);
    return r;
}

Report hoermander_report(const Config& cfg) {
    const auto base = hoermander_table(hoermander_of(cfg, false));
    const bool refine = cfg.flag("refine");
    const auto fine = refine ? hoermander_table(hoermander_of(cfg, true)) : std::vector<HoermanderRow>{};
    Report r;
    r.columns = {"symbol", "k", "sobolev", "herz", "ratio"};
    if (refine) r.columns.insert(r.columns.end(), {"sobolev_2n", "herz_2n", "ratio_2n"});
    for (std::size_t i = 0; i < base.size(); ++i) {
        const auto& x = base[i];
        auto row = cells({x.symbol, num(x.k), num(x.sobolev), num(x.herz), num(x.sobolev / x.herz)});
        if (refine) {
            const auto& y = fine[i];
            row.insert(row.end(), {num(y.sobolev), num(y.herz), num(y.sobolev / y.herz)});
        }
        r.rows.push_back(row);
    }
    const double c = hoermander_constant(base);
    r.add_summary("C", c);
    if (refine) {
        const double c2 = hoermander_constant(fine);
        r.add_summary("C_2n", c2);
        r.add_summary("relative_change", std::abs(c2 / c - 1));
    }
    return r;
}

Report region_report(const Config& cfg) {
    std::vector<int> dims;
    for (double d : cfg.reals("dims")) dims.push_back(int(d));
    const auto rows = region_map(dims, cfg.reals("p_list"), cfg.reals("q_list"), cfg.reals("u_list"),
                                 cfg.reals("t_list"), cfg.reals("s_list"));
    Report r;
    r.columns = {"d", "p", "q", "u", "t", "s", "verdict", "theorem", "example"};
    std::map<std::string, int> counts;
    for (const auto& row : rows) {
        const auto& x = row.x;
        r.rows.push_back(cells({num(x.d), num(x.p), num(x.q), num(x.u), num(x.t), num(x.s),
                                kind_name(row.verdict.kind), row.verdict.theorem, row.verdict.example}));
        ++counts[kind_name(row.verdict.kind)];
    }
    r.add_summary("rows", double(rows.size()));
    for (const auto& [k, n] : counts) r.add_summary(k, double(n));
    return r;
}

Report maximal_report(const Config& cfg) {
    const auto rows = maximal_suites(maximal_of(cfg));
    Report r;
    r.columns = {"suite", "seed", "family_size", "mu", "ratio"};
    std::map<std::string, std::vector<double>> by;
    for (const auto& x : rows) {
        r.rows.push_back(cells({x.suite, num(int(x.seed)), num(x.size), num(x.mu), num(x.ratio)}));
        by[x.suite].push_back(x.ratio);
    }
    for (const auto& [s, v] : by) {
        r.add_summary(s + "_min", min_over(v));
        r.add_summary(s + "_max", max_over(v));
    }
    return r;
}

Report frame_report(const Config& cfg) {
    const LPFrame frame(cfg.integer("k_min"), cfg.integer("k_max"), box_of(cfg));
    const FrameDiagnostics fd = frame_diagnostics(frame, unsigned(cfg.integer("seed")), cfg.integer("seeds"));
    Report r;
    r.columns = {"seed", "relative_error"};
    for (std::size_t i = 0; i < fd.reconstruction.size(); ++i)
        r.rows.push_back(cells({num(cfg.integer("seed") + int(i)), num(fd.reconstruction[i])}));
    const auto range = feasible_range(frame.box());
    r.add_summary("partition_residual", fd.partition_residual);
    r.add_summary("reconstruction_max", max_over(fd.reconstruction));
    r.add_summary("theta_lower_bound", fd.theta_lower_bound);
    r.add_summary("feasible_range", std::to_string(range.first) + ".." + std::to_string(range.second));
    return r;
}

}  // namespace

Report run_experiment(const std::string& id, Config cfg) {
    const auto diags = validate(id, cfg);
    if (!diags.empty()) throw PreconditionError(diags.front().name, diags.front().detail);
    cfg.fill(experiment_defaults(id));
    Report r;
    if (is_sweep(id))
        r = sweep_report(id, cfg);
    else if (id == "nikolskii")
        r = nikolskii_report(cfg);
    else if (id == "hoermander-equiv")
        r = hoermander_report(cfg);
    else if (id == "region-map")
        r = region_report(cfg);
    else if (id == "maximal-ratios")
        r = maximal_report(cfg);
    else
        r = frame_report(cfg);
    r.experiment = id;
    r.config = cfg.values();
    r.config.erase("out");
    return r;
}

}  // namespace hm
