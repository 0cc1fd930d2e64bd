#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hm {

using cplx = std::complex<double>;
using Point = std::array<double, 2>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// Raised when an operation's precondition fails. The message starts with
// the name of the violated condition.
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(const std::string& name, const std::string& detail)
        : std::invalid_argument(name + ": " + detail), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// Periodic box [-L/2, L/2)^d sampled with N points per side.
struct BoxSpec {
    int d = 1;
    double L = 512.0;
    long long N = 65536;

    double spacing() const { return L / N; }
    double nyquist() const { return N / (2.0 * L); }
    double freq_step() const { return 1.0 / L; }
    std::size_t size() const { return d == 1 ? std::size_t(N) : std::size_t(N) * std::size_t(N); }
    double cell_volume() const { return d == 1 ? spacing() : spacing() * spacing(); }

    // Throws PreconditionError("box", ...) unless the box is admissible.
    void validate() const;

    // Coordinate of grid index j along one axis.
    double coord(int j) const { return -L / 2 + j * spacing(); }
    // Signed frequency index for storage slot j along one axis.
    int freq_index(int j) const { return j < N / 2 ? j : j - N; }
    // Storage slot for signed frequency index n.
    int slot(int n) const { return n >= 0 ? n : n + N; }

    Point point(std::size_t flat) const;
    // Frequency vector of spectral slot `flat`.
    Point frequency(std::size_t flat) const;
    double point_norm(std::size_t flat) const;
    double frequency_norm(std::size_t flat) const;

    bool operator==(const BoxSpec& o) const { return d == o.d && L == o.L && N == o.N; }
    bool operator!=(const BoxSpec& o) const { return !(*this == o); }
};

struct SampledFunction {
    BoxSpec box;
    std::vector<cplx> values;

    SampledFunction() = default;
    explicit SampledFunction(const BoxSpec& b) : box(b), values(b.size(), cplx(0.0)) {}
    SampledFunction(const BoxSpec& b, std::vector<cplx> v);

    static SampledFunction from(const BoxSpec& b, const std::function<cplx(const Point&)>& f);

    bool finite() const;
    SampledFunction& operator+=(const SampledFunction& o);
    SampledFunction& operator-=(const SampledFunction& o);
    SampledFunction& operator*=(cplx c);
};

SampledFunction operator+(SampledFunction a, const SampledFunction& b);
SampledFunction operator-(SampledFunction a, const SampledFunction& b);
SampledFunction operator*(cplx c, SampledFunction a);

// Coefficients stored in FFT order: slot j holds frequency freq_index(j)/L.
struct SpectralFunction {
    BoxSpec box;
    std::vector<cplx> coeffs;

    SpectralFunction() = default;
    explicit SpectralFunction(const BoxSpec& b) : box(b), coeffs(b.size(), cplx(0.0)) {}

    static SpectralFunction from(const BoxSpec& b, const std::function<cplx(const Point&)>& g);

    // Coefficient at the signed lattice index (n1[, n2]).
    cplx& at(int n1, int n2 = 0);
    cplx at(int n1, int n2 = 0) const;
};

SpectralFunction forward_transform(const SampledFunction& f);
SampledFunction inverse_transform(const SpectralFunction& F);

// L^2 norm on the frequency side with measure (1/L)^d.
double spectral_l2(const SpectralFunction& F);

// Optional point predicate. Empty means the whole box.
using Region = std::function<bool(const Point&)>;

struct NormResult {
    double value = 0.0;
    bool empty_region = false;
};

// Rectangle-rule (sum h^d |f|^p)^{1/p}; p = kInf gives the grid max.
NormResult lebesgue_norm_ex(const SampledFunction& f, double p, const Region& region = {});
double lebesgue_norm(const SampledFunction& f, double p, const Region& region = {});

void require_same_box(const BoxSpec& a, const BoxSpec& b);

// Reads a real written as a decimal, a fraction "a/b" or "inf". Throws
// PreconditionError("parameter") naming `key` otherwise.
double parse_real(const std::string& key, const std::string& text);

// Serialization. The binary form is bit-exact.
void write_binary(std::ostream& os, const SampledFunction& f);
SampledFunction read_binary(std::istream& is);
void write_csv(std::ostream& os, const SampledFunction& f);
SampledFunction read_csv(std::istream& is);

}  // namespace hm
