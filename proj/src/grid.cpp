#include "herzmult/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

namespace hm {

namespace {

bool is_pow2(long long v) { return v > 0 && (v & (v - 1)) == 0; }

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Unnormalized in-place DFT with sign -1 (forward) or +1 (backward).
void dft_inplace(const BoxSpec& box, std::vector<cplx>& data, int sign) {
    if (box.N > std::numeric_limits<int>::max())
        throw PreconditionError("box", "too many points per side to transform");
    const int n = int(box.N);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (box.d == 1)
            plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE);
        else
            plan = fftw_plan_dft_2d(n, n, p, p, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

// (-1)^(n1+n2) factor tying grid index j to the centred coordinate.
inline double parity(const BoxSpec& box, std::size_t flat) {
    if (box.d == 1) return (flat & 1u) ? -1.0 : 1.0;
    std::size_t i = flat / box.N, j = flat % box.N;
    return ((i + j) & 1u) ? -1.0 : 1.0;
}

}  // namespace

void BoxSpec::validate() const {
    if (d != 1 && d != 2) throw PreconditionError("box", "dimension must be 1 or 2");
    if (!(L >= 4.0)) throw PreconditionError("box", "side length must be at least 4");
    double lg = std::log2(L);
    if (std::abs(lg - std::round(lg)) > 1e-12) throw PreconditionError("box", "side length must be a power of 2");
    if (!is_pow2(N) || N < 2) throw PreconditionError("box", "points per side must be a power of 2");
}

Point BoxSpec::point(std::size_t flat) const {
    if (d == 1) return {coord(int(flat)), 0.0};
    return {coord(int(flat / N)), coord(int(flat % N))};
}

Point BoxSpec::frequency(std::size_t flat) const {
    if (d == 1) return {freq_index(int(flat)) / L, 0.0};
    return {freq_index(int(flat / N)) / L, freq_index(int(flat % N)) / L};
}

double BoxSpec::point_norm(std::size_t flat) const {
    Point p = point(flat);
    return std::hypot(p[0], p[1]);
}

double BoxSpec::frequency_norm(std::size_t flat) const {
    Point p = frequency(flat);
    return std::hypot(p[0], p[1]);
}

void require_same_box(const BoxSpec& a, const BoxSpec& b) {
    if (a != b) throw PreconditionError("box-mismatch", "operands live on different boxes");
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        if (v == "inf" || v == "infinity") return kInf;
        auto slash = v.find('/');
        if (slash != std::string::npos) return parse_real(key, v.substr(0, slash)) / parse_real(key, v.substr(slash + 1));
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const PreconditionError&) {
        throw PreconditionError("parameter", "cannot read '" + v + "' for " + key);
    } catch (const std::exception&) {
        throw PreconditionError("parameter", "cannot read '" + v + "' for " + key);
    }
}

SampledFunction::SampledFunction(const BoxSpec& b, std::vector<cplx> v) : box(b), values(std::move(v)) {
    if (values.size() != box.size()) throw PreconditionError("box-mismatch", "value count does not match box");
}

SampledFunction SampledFunction::from(const BoxSpec& b, const std::function<cplx(const Point&)>& f) {
    SampledFunction out(b);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = f(b.point(i));
    return out;
}

bool SampledFunction::finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& o) {
    require_same_box(box, o.box);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& o) {
    require_same_box(box, o.box);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}

SampledFunction& SampledFunction::operator*=(cplx c) {
    for (auto& v : values) v *= c;
    return *this;
}

SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
SampledFunction operator*(cplx c, SampledFunction a) { return a *= c; }

SpectralFunction SpectralFunction::from(const BoxSpec& b, const std::function<cplx(const Point&)>& g) {
    SpectralFunction out(b);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = g(b.frequency(i));
    return out;
}

cplx& SpectralFunction::at(int n1, int n2) {
    std::size_t idx = box.d == 1 ? std::size_t(box.slot(n1))
                                 : std::size_t(box.slot(n1)) * box.N + std::size_t(box.slot(n2));
    return coeffs.at(idx);
}

cplx SpectralFunction::at(int n1, int n2) const { return const_cast<SpectralFunction*>(this)->at(n1, n2); }

SpectralFunction forward_transform(const SampledFunction& f) {
    SpectralFunction F(f.box);
    if (f.values.size() != f.box.size()) throw PreconditionError("box-mismatch", "value count does not match box");
    F.coeffs = f.values;
    dft_inplace(f.box, F.coeffs, FFTW_FORWARD);
    const double hd = f.box.cell_volume();
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) F.coeffs[i] *= hd * parity(f.box, i);
    return F;
}

SampledFunction inverse_transform(const SpectralFunction& F) {
    if (F.coeffs.size() != F.box.size()) throw PreconditionError("box-mismatch", "coefficient count does not match box");
    SampledFunction f(F.box);
    f.values = F.coeffs;
    const double scale = F.box.d == 1 ? 1.0 / F.box.L : 1.0 / (F.box.L * F.box.L);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] *= parity(F.box, i);
    dft_inplace(F.box, f.values, FFTW_BACKWARD);
    for (auto& v : f.values) v *= scale;
    return f;
}

double spectral_l2(const SpectralFunction& F) {
    double s = 0.0;
    for (const auto& c : F.coeffs) s += std::norm(c);
    const double dxi = F.box.d == 1 ? 1.0 / F.box.L : 1.0 / (F.box.L * F.box.L);
    return std::sqrt(s * dxi);
}

NormResult lebesgue_norm_ex(const SampledFunction& f, double p, const Region& region) {
    if (!(p > 0)) throw PreconditionError("exponent", "p must be positive");
    NormResult r;
    std::size_t hits = 0;
    const bool inf = std::isinf(p);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (region && !region(f.box.point(i))) continue;
        ++hits;
        double a = std::abs(f.values[i]);
        if (inf)
            acc = std::max(acc, a);
        else if (p == 2.0)
            acc += a * a;
        else if (p == 1.0)
            acc += a;
        else if (a > 0)
            acc += std::pow(a, p);
    }
    if (hits == 0) {
        r.empty_region = true;
        return r;
    }
    r.value = inf ? acc : std::pow(acc * f.box.cell_volume(), 1.0 / p);
    return r;
}

double lebesgue_norm(const SampledFunction& f, double p, const Region& region) {
    return lebesgue_norm_ex(f, p, region).value;
}

namespace {
constexpr char kMagic[8] = {'H', 'M', 'S', 'F', 'v', '1', 0, 0};
}

void write_binary(std::ostream& os, const SampledFunction& f) {
    os.write(kMagic, sizeof kMagic);
    std::int32_t d = f.box.d, n = std::int32_t(f.box.N);
    double L = f.box.L;
    os.write(reinterpret_cast<const char*>(&d), sizeof d);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&L), sizeof L);
    os.write(reinterpret_cast<const char*>(f.values.data()), std::streamsize(f.values.size() * sizeof(cplx)));
}

SampledFunction read_binary(std::istream& is) {
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw PreconditionError("format", "bad binary header");
    std::int32_t d = 0, n = 0;
    double L = 0;
    is.read(reinterpret_cast<char*>(&d), sizeof d);
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&L), sizeof L);
    BoxSpec box{d, L, n};
    box.validate();
    SampledFunction f(box);
    is.read(reinterpret_cast<char*>(f.values.data()), std::streamsize(f.values.size() * sizeof(cplx)));
    if (!is) throw PreconditionError("format", "truncated binary payload");
    return f;
}

void write_csv(std::ostream& os, const SampledFunction& f) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "# d=%d L=%.17g N=%lld\n", f.box.d, f.box.L, f.box.N);
    os << buf << "index,re,im\n";
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, f.values[i].real(), f.values[i].imag());
        os << buf;
    }
}

SampledFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw PreconditionError("format", "missing CSV header");
    BoxSpec box;
    if (std::sscanf(line.c_str(), "# d=%d L=%lf N=%lld", &box.d, &box.L, &box.N) != 3)
        throw PreconditionError("format", "bad CSV box header");
    box.validate();
    std::getline(is, line);
    SampledFunction f(box);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::size_t idx;
        double re, im;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf", &idx, &re, &im) != 3 || idx >= f.values.size())
            throw PreconditionError("format", "bad CSV row: " + line);
        f.values[idx] = {re, im};
    }
    return f;
}

}  // namespace hm
