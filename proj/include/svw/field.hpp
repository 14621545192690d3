#ifndef SVW_FIELD_HPP
#define SVW_FIELD_HPP

// Real-valued periodic fields on the unit torus, stored either as Fourier
// coefficients (half spectrum, Hermitian symmetry implicit) or as samples on
// a uniform collocation grid. All operations are pure; fields are cheap
// value types and safe to share across threads.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace svw {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Raised when an input violates a mathematical precondition (e.g. a nonzero
// mean handed to the zero-mean inverse derivative). Carries the offending
// value so callers can report it.
class constraint_error : public std::runtime_error {
public:
    constraint_error(const std::string& what, double offending)
        : std::runtime_error(what), offending_value_(offending) {}
    double offending_value() const noexcept { return offending_value_; }

private:
    double offending_value_;
};

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Root-of-unity table for a transform of size n, cached per thread.
inline const std::vector<cplx>& twiddle_table(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::vector<cplx>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = -two_pi * double(j) / double(n);
        w[j] = cplx(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(w)).first->second;
}

// In-place iterative radix-2 transform. Forward uses e^{-2pi i jk/n}; the
// inverse applies conjugate twiddles and no 1/n scaling.
inline void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
    if (n == 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& w = twiddle_table(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx tw = inverse ? std::conj(w[j * stride]) : w[j * stride];
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * tw;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

}  // namespace detail

// Samples of a real periodic function at x_m = m/M, m = 0..M-1.
class GridField {
public:
    GridField() = default;
    explicit GridField(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("GridField: empty sample vector");
    }
    explicit GridField(std::size_t size, double fill = 0.0) : values_(size, fill) {
        if (size == 0) throw std::invalid_argument("GridField: zero size");
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t m) const { return values_[m]; }
    double& operator[](std::size_t m) { return values_[m]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double point(std::size_t m) const { return double(m) / double(values_.size()); }

private:
    std::vector<double> values_;
};

// Fourier coefficients of a real periodic field. Only k = 0..K is stored;
// coeff(-k) = conj(coeff(k)) by construction, and coeff(0) is kept real.
class SpectralField {
public:
    SpectralField() : half_(1, cplx(0.0)) {}
    explicit SpectralField(int max_freq) : half_(std::size_t(max_freq) + 1, cplx(0.0)) {
        if (max_freq < 0) throw std::invalid_argument("SpectralField: negative max frequency");
    }
    static SpectralField from_half_spectrum(std::vector<cplx> half) {
        if (half.empty()) throw std::invalid_argument("SpectralField: empty spectrum");
        SpectralField f;
        f.half_ = std::move(half);
        f.half_[0] = cplx(f.half_[0].real(), 0.0);
        return f;
    }

    int max_freq() const { return int(half_.size()) - 1; }

    // Coefficient for any integer k; zero outside the stored band.
    cplx coeff(int k) const {
        const int a = std::abs(k);
        if (a > max_freq()) return cplx(0.0);
        return k >= 0 ? half_[std::size_t(a)] : std::conj(half_[std::size_t(a)]);
    }

    void set_coeff(int k, cplx v) {
        if (k < 0 || k > max_freq())
            throw std::out_of_range("SpectralField::set_coeff: frequency out of band");
        half_[std::size_t(k)] = (k == 0) ? cplx(v.real(), 0.0) : v;
    }

    double mean() const { return half_[0].real(); }

    const std::vector<cplx>& half_spectrum() const { return half_; }

private:
    std::vector<cplx> half_;
};

// ---------------------------------------------------------------------------
// Transforms

// Discrete Fourier coefficients of grid samples, normalized so that coeff(0)
// is the arithmetic mean. The Nyquist coefficient is dropped; band-limited
// data at K <= M/2 - 1 round-trips exactly.
inline SpectralField to_spectral(const GridField& g) {
    const std::size_t M = g.size();
    if (!detail::is_pow2(M))
        throw std::invalid_argument("to_spectral: grid size must be a power of two");
    std::vector<cplx> a(M);
    for (std::size_t m = 0; m < M; ++m) a[m] = cplx(g[m], 0.0);
    detail::fft_inplace(a, false);
    const std::size_t K = (M >= 2) ? M / 2 - 1 : 0;
    std::vector<cplx> half(K + 1);
    for (std::size_t k = 0; k <= K; ++k) half[k] = a[k] / double(M);
    return SpectralField::from_half_spectrum(std::move(half));
}

// Collocation samples at M uniform points; M must be a power of two covering
// the band (M >= 2K+1).
inline GridField to_grid(const SpectralField& f, std::size_t M) {
    const int K = f.max_freq();
    if (!detail::is_pow2(M))
        throw std::invalid_argument("to_grid: grid size must be a power of two");
    if (M < std::size_t(2 * K + 1))
        throw std::invalid_argument("to_grid: grid too coarse for the spectral band");
    std::vector<cplx> a(M, cplx(0.0));
    a[0] = f.coeff(0);
    for (int k = 1; k <= K; ++k) {
        a[std::size_t(k)] = f.coeff(k);
        a[M - std::size_t(k)] = std::conj(f.coeff(k));
    }
    detail::fft_inplace(a, true);
    std::vector<double> v(M);
    for (std::size_t m = 0; m < M; ++m) v[m] = a[m].real();
    return GridField(std::move(v));
}

// ---------------------------------------------------------------------------
// Linear operators

// L^2 projection onto frequencies |k| <= N-1.
inline SpectralField project(const SpectralField& f, int order) {
    if (order < 1) throw std::invalid_argument("project: order must be >= 1");
    const int K = std::min(f.max_freq(), order - 1);
    std::vector<cplx> half(std::size_t(K) + 1);
    for (int k = 0; k <= K; ++k) half[std::size_t(k)] = f.coeff(k);
    return SpectralField::from_half_spectrum(std::move(half));
}

inline SpectralField derivative(const SpectralField& f) {
    const int K = f.max_freq();
    std::vector<cplx> half(std::size_t(K) + 1, cplx(0.0));
    for (int k = 1; k <= K; ++k) half[std::size_t(k)] = cplx(0.0, two_pi * k) * f.coeff(k);
    return SpectralField::from_half_spectrum(std::move(half));
}

// The unique zero-mean antiderivative; defined on zero-average input only.
inline SpectralField antiderivative(const SpectralField& f, double mean_tolerance = 1e-10) {
    if (std::abs(f.mean()) > mean_tolerance)
        throw constraint_error("antiderivative: input has nonzero mean", f.mean());
    const int K = f.max_freq();
    std::vector<cplx> half(std::size_t(K) + 1, cplx(0.0));
    for (int k = 1; k <= K; ++k) half[std::size_t(k)] = f.coeff(k) / cplx(0.0, two_pi * k);
    return SpectralField::from_half_spectrum(std::move(half));
}

// Mollification by the periodized heat kernel at time delta^2/2: multiplies
// coeff(k) by exp(-2 pi^2 k^2 delta^2). Positive, unit mass, diagonal in
// Fourier; the mean is preserved exactly.
inline SpectralField mollify(const SpectralField& f, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("mollify: delta must be positive");
    const int K = f.max_freq();
    std::vector<cplx> half(std::size_t(K) + 1);
    for (int k = 0; k <= K; ++k) {
        const double factor = std::exp(-2.0 * std::numbers::pi * std::numbers::pi *
                                       double(k) * double(k) * delta * delta);
        half[std::size_t(k)] = f.coeff(k) * factor;
    }
    return SpectralField::from_half_spectrum(std::move(half));
}

// ---------------------------------------------------------------------------
// Norms and inner products

enum class Norm { L2, H1_semi, H_neg3, Linf, L1 };

// Grid used for sup/L1 norms and for nonlinear compositions: 4x oversampled
// relative to the band so quadrature error on compositions stays negligible.
inline std::size_t oversampled_size(int max_freq, int factor = 4) {
    const std::size_t base = detail::next_pow2(std::size_t(2 * max_freq + 2));
    return std::max<std::size_t>(64, std::size_t(factor) * base);
}

inline double norm(const SpectralField& f, Norm which) {
    const int K = f.max_freq();
    switch (which) {
        case Norm::L2: {
            double s = f.mean() * f.mean();
            for (int k = 1; k <= K; ++k) s += 2.0 * std::norm(f.coeff(k));
            return std::sqrt(s);
        }
        case Norm::H1_semi: {
            double s = 0.0;
            for (int k = 1; k <= K; ++k)
                s += 2.0 * (two_pi * k) * (two_pi * k) * std::norm(f.coeff(k));
            return std::sqrt(s);
        }
        case Norm::H_neg3: {
            // Weight convention: (1 + (2 pi k)^2)^{-3} on |coeff(k)|^2.
            double s = f.mean() * f.mean();
            for (int k = 1; k <= K; ++k) {
                const double w = 1.0 + (two_pi * k) * (two_pi * k);
                s += 2.0 * std::norm(f.coeff(k)) / (w * w * w);
            }
            return std::sqrt(s);
        }
        case Norm::Linf: {
            const GridField g = to_grid(f, oversampled_size(K));
            double m = 0.0;
            for (double v : g.values()) m = std::max(m, std::abs(v));
            return m;
        }
        case Norm::L1: {
            const GridField g = to_grid(f, oversampled_size(K));
            double s = 0.0;
            for (double v : g.values()) s += std::abs(v);
            return s / double(g.size());
        }
    }
    return 0.0;
}

// L^2 inner product of two real fields.
inline double inner(const SpectralField& f, const SpectralField& g) {
    const int K = std::min(f.max_freq(), g.max_freq());
    double s = f.mean() * g.mean();
    for (int k = 1; k <= K; ++k) s += 2.0 * std::real(std::conj(f.coeff(k)) * g.coeff(k));
    return s;
}

// ---------------------------------------------------------------------------
// Arithmetic

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    const int K = std::max(a.max_freq(), b.max_freq());
    std::vector<cplx> half(std::size_t(K) + 1);
    for (int k = 0; k <= K; ++k) half[std::size_t(k)] = a.coeff(k) + b.coeff(k);
    return SpectralField::from_half_spectrum(std::move(half));
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    const int K = std::max(a.max_freq(), b.max_freq());
    std::vector<cplx> half(std::size_t(K) + 1);
    for (int k = 0; k <= K; ++k) half[std::size_t(k)] = a.coeff(k) - b.coeff(k);
    return SpectralField::from_half_spectrum(std::move(half));
}

inline SpectralField operator*(double s, const SpectralField& a) {
    std::vector<cplx> half = a.half_spectrum();
    for (auto& c : half) c *= s;
    return SpectralField::from_half_spectrum(std::move(half));
}

}  // namespace svw

#endif  // SVW_FIELD_HPP
