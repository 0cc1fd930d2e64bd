#include "herzmult/coefficients.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace hm {

void CoefficientMap::insert(const DyadicCube& q, cplx v) {
    if (!cube_in_box(q, box)) throw PreconditionError("cube-outside-box", "cube does not lie in the box");
    if (!entries.emplace(q, v).second) throw PreconditionError("duplicate-cube", "cube already present");
}

void CoefficientMap::accumulate(const DyadicCube& q, cplx v) {
    auto it = entries.find(q);
    if (it == entries.end())
        insert(q, v);
    else
        it->second += v;
}

cplx CoefficientMap::get(const DyadicCube& q) const {
    auto it = entries.find(q);
    return it == entries.end() ? cplx(0.0) : it->second;
}

int CoefficientMap::min_scale() const {
    int k = 1 << 30;
    for (const auto& [q, v] : entries) k = std::min(k, q.k);
    return k;
}

int CoefficientMap::max_scale() const {
    int k = -(1 << 30);
    for (const auto& [q, v] : entries) k = std::max(k, q.k);
    return k;
}

void write_csv(std::ostream& os, const CoefficientMap& b) {
    os << "scale,i1,i2,re,im\n";
    char buf[128];
    for (const auto& [q, v] : b.entries) {
        std::snprintf(buf, sizeof buf, "%d,%lld,%lld,%.17g,%.17g\n", q.k, q.index[0], q.index[1], v.real(), v.imag());
        os << buf;
    }
}

CoefficientMap read_coefficients_csv(std::istream& is, const BoxSpec& box) {
    CoefficientMap b(box);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        DyadicCube q;
        double re, im;
        if (std::sscanf(line.c_str(), "%d,%lld,%lld,%lf,%lf", &q.k, &q.index[0], &q.index[1], &re, &im) != 5)
            throw PreconditionError("format", "bad coefficient row: " + line);
        b.insert(q, {re, im});
    }
    return b;
}

}  // namespace hm
