#pragma once

#include <iosfwd>
#include <map>

#include "herzmult/grid.hpp"
#include "herzmult/maximal.hpp"

namespace hm {

// Finitely supported map from dyadic cubes to complex coefficients.
struct CoefficientMap {
    BoxSpec box;
    std::map<DyadicCube, cplx> entries;

    CoefficientMap() = default;
    explicit CoefficientMap(const BoxSpec& b) : box(b) {}

    // Adds a new cube; rejects duplicates and cubes outside the box.
    void insert(const DyadicCube& q, cplx v);
    // Adds v to the entry for q, creating it if needed.
    void accumulate(const DyadicCube& q, cplx v);
    cplx get(const DyadicCube& q) const;
    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
    int min_scale() const;
    int max_scale() const;
};

void write_csv(std::ostream& os, const CoefficientMap& b);
CoefficientMap read_coefficients_csv(std::istream& is, const BoxSpec& box);

}  // namespace hm
