#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "herzmult/norms.hpp"

namespace hm {

// Boundedness verdict for T_m under a Herz class condition K_u^{s,t}[m] < inf.
//
// Theorem ids name the statement by role:
//   besov-small-u, besov-large-u                 Besov, u <= r and u > r
//   tl-small-u, tl-large-u-endpoint, tl-large-u  F, min(p,q) < 1
//   tl-banach-small-u, tl-banach-endpoint, tl-banach-large-u   F, p,q >= 1
//   besov-sharp-small-u, besov-sharp-large-u     sharpness of t = r
//   tl-sharp-zero-smoothness                     s = 0 fails for p != q
//   tl-sharp-below, tl-sharp-endpoint-t          min(p,q) < 1, u > r
//   tl-banach-sharp-{below,p1,pinf,gap,t}        p,q >= 1, u > 1
//   weighted, weighted-sharp                     weighted Herz classes
enum class VerdictKind { Guaranteed, Counterexample, Unknown };

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::string theorem;  // empty for Unknown
    std::string example;  // construction id for Counterexample
    std::string reason;   // for Unknown

    bool operator==(const Verdict& o) const {
        return kind == o.kind && theorem == o.theorem && example == o.example;
    }
};

std::string kind_name(VerdictKind k);
std::string to_string(const Verdict& v);

struct RegionTuple {
    int d = 1;
    double p = 1, q = 1, u = 1, t = 1, s = 0;
};

// Every statement whose hypotheses the tuple meets after Herz embeddings.
// A consistent theorem table never fills both lists.
struct Derivation {
    std::vector<Verdict> positive;
    std::vector<Verdict> negative;
    std::string open_reason;
};

Derivation derive_besov(const RegionTuple& x);
// p == q delegates to derive_besov.
Derivation derive_tl(const RegionTuple& x);

// Throws PreconditionError("verdict-conflict") if both lists are nonempty.
Verdict resolve(const Derivation& d);

Verdict classify_besov(int d, double p, double q, double u, double t, double s);
Verdict classify_tl(int d, double p, double q, double u, double t, double s);
Verdict classify_weighted(int d, double p, double q, double u, const WeightSeq& w);

// Exponent of the fitted power law w(l) ~ (1+l)^gamma over the upper half.
double weight_growth(const WeightSeq& w);

// The default exponent grid {1/4, 1/2, 3/4, 1, 3/2, 2, 4, inf}.
std::vector<double> exponent_grid();
// Every threshold d/r - d/u, d - d/u and 0 reachable from the grid for
// dimension d, with midpoints and one value beyond each end.
std::vector<double> smoothness_mesh(int d, const std::vector<double>& exps);

struct RegionRow {
    RegionTuple x;
    Verdict verdict;
};

// The F-space map over the product grid (p = q rows use the Besov table).
std::vector<RegionRow> region_map(const std::vector<int>& dims, const std::vector<double>& ps,
                                  const std::vector<double>& qs, const std::vector<double>& us,
                                  const std::vector<double>& ts, const std::vector<double>& ss);
void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows);

}  // namespace hm
