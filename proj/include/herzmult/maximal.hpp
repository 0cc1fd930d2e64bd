#pragma once

#include <array>
#include <vector>

#include "herzmult/grid.hpp"

namespace hm {

// Dyadic cube of side 2^{-k} with lower-left corner 2^{-k} * index.
struct DyadicCube {
    int k = 0;
    std::array<long long, 2> index{0, 0};

    double side() const;
    double measure(int d) const;
    Point corner() const;
    Point center() const;
    bool contains(const Point& x, int d) const;
    // True if this cube is contained in `outer` (including equality).
    bool inside(const DyadicCube& outer) const;
    DyadicCube parent() const;

    bool operator<(const DyadicCube& o) const {
        return k != o.k ? k < o.k : index < o.index;
    }
    bool operator==(const DyadicCube& o) const { return k == o.k && index == o.index; }
};

// Dyadic cube of scale k containing x.
DyadicCube cube_containing(const Point& x, int k, int d);

// Scales k whose cubes tile the box: side from L/2 down to the grid spacing.
int coarsest_scale(const BoxSpec& box);
int finest_scale(const BoxSpec& box);
bool cube_in_box(const DyadicCube& q, const BoxSpec& box);

// Dyadic Hardy-Littlewood maximal function (M(|f|^r))^{1/r}.
SampledFunction hl_maximal(const SampledFunction& f, double r);

// sup_y |f(x-y)| / (1 + 2^k |y|)^sigma over grid shifts, minimum-image |y|.
SampledFunction peetre_maximal(const SampledFunction& f, double sigma, int k);

enum class BranchCombine { Max, Sum };

// Undamped averages over cubes with 2^k l(Q) <= 1, averages over larger
// cubes damped by (2^k l(Q))^{-eps}. The two branch sups are combined by
// max (default) or by sum.
SampledFunction variant_maximal(const SampledFunction& f, double r, int k, double eps,
                                BranchCombine combine = BranchCombine::Max);

// sup over dyadic P containing x of (|P|^{-1} int_P sum_{k >= -log2 l(P)} |f_k|^q)^{1/q}.
// bands[i] carries scale k_first + i.
SampledFunction sharp_maximal(const std::vector<SampledFunction>& bands, int k_first, double q);

// sup over cubes P of side 2^{-mu} of (|P|^{-1} int_P sum_{k >= mu} |g_k|^q)^{1/q},
// with g[i] carrying scale k_first + i.
double tail_average_sup(const std::vector<SampledFunction>& g, int k_first, double q, int mu);

}  // namespace hm
