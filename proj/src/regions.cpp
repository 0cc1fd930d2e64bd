#include "herzmult/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace hm {

namespace {

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

bool eq(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}
bool lt(double a, double b) { return a < b && !eq(a, b); }
bool le(double a, double b) { return a < b || eq(a, b); }

void check_exponent(const char* name, double v) {
    if (!(v > 0)) throw PreconditionError("parameter", std::string(name) + " must lie in (0, inf]");
}

void validate(const RegionTuple& x) {
    if (x.d < 1) throw PreconditionError("parameter", "dimension must be positive");
    check_exponent("p", x.p);
    check_exponent("q", x.q);
    check_exponent("u", x.u);
    check_exponent("t", x.t);
    if (!std::isfinite(x.s)) throw PreconditionError("parameter", "s must be finite");
}

Verdict good(const char* id) { return {VerdictKind::Guaranteed, id, "", ""}; }
Verdict bad(const char* id, const char* example) { return {VerdictKind::Counterexample, id, example, ""}; }

}  // namespace

std::string kind_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::Guaranteed: return "GUARANTEED";
        case VerdictKind::Counterexample: return "COUNTEREXAMPLE";
        case VerdictKind::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::string to_string(const Verdict& v) {
    switch (v.kind) {
        case VerdictKind::Guaranteed: return "GUARANTEED(" + v.theorem + ")";
        case VerdictKind::Counterexample: return "COUNTEREXAMPLE(" + v.theorem + ", " + v.example + ")";
        case VerdictKind::Unknown: return "UNKNOWN(" + v.reason + ")";
    }
    return "";
}

// A class condition K_u^{s,t} reaches K_{u'}^{s',t'} when u' <= u and
// s' + d/u' <= s + d/u, with t' >= t required only at equality. Positive
// statements are matched at the best reachable u'; counterexamples at the
// largest admissible u, which reaches every smaller one.
Derivation derive_besov(const RegionTuple& x) {
    validate(x);
    Derivation out;
    const int d = x.d;
    const double r = std::min(1.0, x.p);
    const bool small_u = le(x.u, r);

    // Excess over the threshold at u' = min(u, r).
    const double thr = d * inv(std::min(x.u, r)) - d * inv(x.u);
    if (lt(thr, x.s) || (eq(x.s, thr) && le(x.t, r)))
        out.positive.push_back(good(small_u ? "besov-small-u" : "besov-large-u"));

    if (small_u && (lt(x.s, 0) || (eq(x.s, 0) && lt(r, x.t))))
        out.negative.push_back(bad("besov-sharp-small-u", "BESOV1"));
    // The u = inf example at s = d/r embeds into every u.
    const double thr_inf = d / r - d * inv(x.u);
    if (lt(x.s, thr_inf) || (eq(x.s, thr_inf) && lt(r, x.t)))
        out.negative.push_back(bad("besov-sharp-large-u", x.p < 1 ? "BESOV2-H" : "BESOV2-LATTICE"));
    return out;
}

Derivation derive_tl(const RegionTuple& x) {
    validate(x);
    if (eq(x.p, x.q)) return derive_besov(x);
    Derivation out;
    const int d = x.d;
    const double r = std::min(x.p, x.q);

    if (r < 1) {
        const double thr = d / r - d * inv(x.u);
        const bool gap = std::isinf(x.p) && lt(r, x.u);
        if (le(x.u, r)) {
            if (lt(0, x.s)) out.positive.push_back(good("tl-small-u"));
        } else if (lt(thr, x.s)) {
            out.positive.push_back(good("tl-large-u"));
        } else if (eq(x.s, thr) && le(x.t, r) && !gap) {
            out.positive.push_back(good("tl-large-u-endpoint"));
        }

        if (le(x.u, r) && le(x.s, 0)) out.negative.push_back(bad("tl-sharp-zero-smoothness", "TL0"));
        if (!std::isinf(x.p)) {
            if (lt(x.s, thr)) out.negative.push_back(bad("tl-sharp-below", "TL1-H"));
            else if (eq(x.s, thr) && lt(r, x.t)) out.negative.push_back(bad("tl-sharp-endpoint-t", "TL1-H"));
        }
        if (gap && le(x.s, thr)) out.open_reason = "p = inf, q < 1, u > min(p,q): no sharpness statement";
        return out;
    }

    // 1 <= p, q <= inf.
    const double thr = d - d * inv(x.u);
    const double gap = std::abs(inv(x.p) - inv(x.q));
    const bool mid_p = x.p > 1 && !std::isinf(x.p);
    if (le(x.u, 1)) {
        if (lt(0, x.s)) out.positive.push_back(good("tl-banach-small-u"));
    } else if (lt(thr, x.s)) {
        out.positive.push_back(good("tl-banach-large-u"));
    } else if (eq(x.s, thr) && le(x.t, 1) && mid_p && lt(gap, 1 - inv(x.u))) {
        out.positive.push_back(good("tl-banach-endpoint"));
    }

    if (le(x.u, 1) && le(x.s, 0)) out.negative.push_back(bad("tl-sharp-zero-smoothness", "TL0"));
    if (lt(x.s, thr)) {
        out.negative.push_back(bad("tl-banach-sharp-below", "TL2-M1"));
    } else if (eq(x.s, thr)) {
        if (eq(x.p, 1)) out.negative.push_back(bad("tl-banach-sharp-p1", "TL2-M1/M2"));
        if (std::isinf(x.p)) out.negative.push_back(bad("tl-banach-sharp-pinf", "TL2-M2"));
        if (mid_p && le(1 - inv(x.u), gap)) out.negative.push_back(bad("tl-banach-sharp-gap", "TL2-M1"));
        if (lt(1, x.t)) out.negative.push_back(bad("tl-banach-sharp-t", "BESOV2-LATTICE"));
    }
    return out;
}

Verdict resolve(const Derivation& d) {
    if (!d.positive.empty() && !d.negative.empty())
        throw PreconditionError("verdict-conflict", to_string(d.positive.front()) + " vs " + to_string(d.negative.front()));
    if (!d.positive.empty()) return d.positive.front();
    if (!d.negative.empty()) return d.negative.front();
    Verdict v;
    v.reason = d.open_reason.empty() ? "no statement applies" : d.open_reason;
    return v;
}

Verdict classify_besov(int d, double p, double q, double u, double t, double s) {
    return resolve(derive_besov({d, p, q, u, t, s}));
}

Verdict classify_tl(int d, double p, double q, double u, double t, double s) {
    return resolve(derive_tl({d, p, q, u, t, s}));
}

double weight_growth(const WeightSeq& w) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (std::size_t l = w.size() / 2; l < w.size(); ++l) {
        const double x = std::log(1.0 + l), y = std::log(w[l]);
        sx += x, sy += y, sxx += x * x, sxy += x * y, n += 1;
    }
    return n > 1 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
}

// Convergence of B_{p,q}(w) decides the positive side. A weight that does not
// grow reduces to the unweighted zero-smoothness example; a weight within a
// factor 4 of (1+l)^{|1/p-1/q|} is the critical profile.
Verdict classify_weighted(int d, double p, double q, double u, const WeightSeq& w) {
    validate({d, p, q, u, 1.0, 0.0});
    if (eq(p, q)) throw PreconditionError("parameter", "the weighted statements need p != q");
    if (!le(u, std::min({1.0, p, q}))) throw PreconditionError("parameter", "need u <= min(1, p, q)");
    Derivation out;
    const BpqResult b = bpq_constant(w, p, q);
    if (!b.divergent) out.positive.push_back(good("weighted"));

    const double rho = std::abs(inv(p) - inv(q));
    bool critical = true;
    for (std::size_t l = 0; l < w.size(); ++l) {
        const double ratio = w[l] / std::pow(1.0 + l, rho);
        if (ratio < 0.25 || ratio > 4.0) critical = false;
    }
    if (weight_growth(w) < 0.1) out.negative.push_back(bad("tl-sharp-zero-smoothness", "TL0"));
    else if (critical) out.negative.push_back(bad("weighted-sharp", "WEIGHTED"));
    if (out.positive.empty() && out.negative.empty())
        out.open_reason = "weight grows between the critical profile and a convergent one";
    return resolve(out);
}

std::vector<double> exponent_grid() { return {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, kInf}; }

std::vector<double> smoothness_mesh(int d, const std::vector<double>& exps) {
    std::vector<double> thr{0.0};
    for (double u : exps) {
        thr.push_back(d - d * inv(u));
        for (double r : exps)
            if (r < 1) thr.push_back(d / r - d * inv(u));
    }
    std::sort(thr.begin(), thr.end());
    std::vector<double> uniq;
    for (double v : thr)
        if (uniq.empty() || !eq(uniq.back(), v)) uniq.push_back(v);
    std::vector<double> mesh{uniq.front() - 0.5};
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        mesh.push_back(uniq[i]);
        mesh.push_back(i + 1 < uniq.size() ? 0.5 * (uniq[i] + uniq[i + 1]) : uniq[i] + 0.5);
    }
    return mesh;
}

std::vector<RegionRow> region_map(const std::vector<int>& dims, const std::vector<double>& ps,
                                  const std::vector<double>& qs, const std::vector<double>& us,
                                  const std::vector<double>& ts, const std::vector<double>& ss) {
    std::vector<RegionRow> rows;
    rows.reserve(dims.size() * ps.size() * qs.size() * us.size() * ts.size() * ss.size());
    for (int d : dims)
        for (double p : ps)
            for (double q : qs)
                for (double u : us)
                    for (double t : ts)
                        for (double s : ss) {
                            RegionTuple x{d, p, q, u, t, s};
                            rows.push_back({x, resolve(derive_tl(x))});
                        }
    return rows;
}

void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows) {
    os << "d,p,q,u,t,s,verdict,theorem,example\n";
    char buf[64];
    auto num = [&](double v) -> std::string {
        if (std::isinf(v)) return "inf";
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    };
    for (const auto& row : rows) {
        const auto& x = row.x;
        os << x.d << ',' << num(x.p) << ',' << num(x.q) << ',' << num(x.u) << ',' << num(x.t) << ',' << num(x.s) << ','
           << kind_name(row.verdict.kind) << ',' << row.verdict.theorem << ',' << row.verdict.example << '\n';
    }
}

}  // namespace hm
