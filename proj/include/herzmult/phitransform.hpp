#pragma once

#include <vector>

#include "herzmult/coefficients.hpp"
#include "herzmult/lp.hpp"
#include "herzmult/norms.hpp"

namespace hm {

// Frame scale k samples on cubes of side 2^{-(k + kCubeOffset)}. theta_k has
// spectrum in |xi| <= 2^{k+1}, so this lattice is the coarsest one without
// aliasing between theta_k and (f * theta~_k).
inline constexpr int kCubeOffset = 2;

inline int cube_scale(int k) { return k + kCubeOffset; }
inline int frame_scale(const DyadicCube& q) { return q.k - kCubeOffset; }

// v_Q = <f, theta~^Q> = |Q|^{1/2} (f * theta~_k)(x_Q) for every cube of every
// frame scale. f must be band-limited to 2^{k_min-1} < |xi| < 2^{k_max+1}.
CoefficientMap analyze(const SampledFunction& f, const LPFrame& frame);

// sum_Q v_Q theta^Q with theta^Q(x) = |Q|^{1/2} theta_k(x - x_Q), periodized.
SampledFunction synthesize(const CoefficientMap& v, const LPFrame& frame);

// sup_x g^{alpha,q}(a)(x), computed along chains of nested cubes.
double sequence_sup(const CoefficientMap& a, double alpha, double q);

// Support in Q0 and ||g^{alpha,q}(a)||_inf <= |Q0|^{-1/p}.
bool is_infinity_atom(const CoefficientMap& a, const DyadicCube& q0, const SpaceParams& sp);

struct AtomTerm {
    int level = 0;  // the j of the level set {g > 2^j}
    DyadicCube cube;
    double lambda = 0.0;
    CoefficientMap atom;
};

struct AtomicDecomposition {
    std::vector<AtomTerm> terms;

    // (sum |lambda_j|^p)^{1/p}
    double lambda_norm(double p) const;
    CoefficientMap reconstruct(const BoxSpec& box) const;
};

// Level-set decomposition: a cube Q goes to level j when more than half of
// Q lies in {g > 2^j} but at most half in {g > 2^{j+1}}; cubes of one level
// are grouped under their largest ancestor that is more than half inside
// {g > 2^j}. Each group is divided by lambda = |J|^{1/p} sup g(group), so every
// atom has sup exactly |J|^{-1/p}.
AtomicDecomposition atomic_decompose(const CoefficientMap& b, const SpaceParams& sp);

}  // namespace hm
