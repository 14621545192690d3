#ifndef SVW_NOISE_HPP
#define SVW_NOISE_HPP

// Realizations of the scalar driving Wiener process, built by the Levy
// (Brownian bridge) construction over the dyadic tree. Every normal draw is
// keyed by (seed, node id) through a counter-based generator, so a path is a
// pure function of its seed: refining fills midpoints without touching
// existing values, and paths at different depths embed bit-exactly.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "svw/field.hpp"

namespace svw {

namespace detail {

// SplitMix64-style finalizer; statistically solid for keyed counters.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t h = mix64(mix64(seed) ^ mix64(counter * 0xD1342543DE82EF95ull + 1));
    // 53 mantissa bits; offset keeps the value strictly inside (0, 1).
    return (double(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two keyed uniforms.
inline double keyed_normal(std::uint64_t seed, std::uint64_t node) {
    const double u1 = uniform01(seed, 2 * node);
    const double u2 = uniform01(seed, 2 * node + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace detail

class BrownianPath {
public:
    // Path on [0, T] sampled at times j T / 2^depth. Node ids: the endpoint
    // W(T) is node 1; the midpoint refining dyadic interval m at level l
    // (l >= 1) is node 2^{l-1} + m.
    static BrownianPath generate(std::uint64_t seed, double horizon, int depth) {
        if (depth < 0 || depth > 40)
            throw std::invalid_argument("BrownianPath: depth must be in [0, 40]");
        if (!(horizon > 0.0)) throw std::invalid_argument("BrownianPath: horizon must be positive");
        BrownianPath p;
        p.seed_ = seed;
        p.horizon_ = horizon;
        p.depth_ = 0;
        p.w_ = {0.0, std::sqrt(horizon) * detail::keyed_normal(seed, 1)};
        return p.refined(depth);
    }

    // Brownian-bridge midpoint fill, extra_levels levels deeper. Existing
    // samples are copied unchanged, so subsampling the result recovers this
    // path bit-exactly, and refine(refine(p,1),1) == refine(p,2).
    BrownianPath refined(int extra_levels) const {
        if (extra_levels < 0) throw std::invalid_argument("BrownianPath: negative refinement");
        if (depth_ + extra_levels > 40)
            throw std::invalid_argument("BrownianPath: refinement exceeds depth cap");
        BrownianPath p(*this);
        for (int lvl = depth_ + 1; lvl <= depth_ + extra_levels; ++lvl) {
            const std::size_t n_old = p.w_.size() - 1;  // 2^{lvl-1}
            std::vector<double> w(2 * n_old + 1);
            const double len = horizon_ / double(n_old);  // parent interval length
            const double sd = std::sqrt(0.25 * len);
            for (std::size_t m = 0; m < n_old; ++m) {
                w[2 * m] = p.w_[m];
                const std::uint64_t node = (std::uint64_t(1) << (lvl - 1)) + m;
                w[2 * m + 1] = 0.5 * (p.w_[m] + p.w_[m + 1]) +
                               sd * detail::keyed_normal(seed_, node);
            }
            w[2 * n_old] = p.w_[n_old];
            p.w_ = std::move(w);
        }
        p.depth_ = depth_ + extra_levels;
        return p;
    }

    std::uint64_t seed() const { return seed_; }
    double horizon() const { return horizon_; }
    int depth() const { return depth_; }
    std::size_t sample_count() const { return w_.size(); }

    double value(std::size_t j) const { return w_.at(j); }
    double time(std::size_t j) const {
        return horizon_ * double(j) / double(w_.size() - 1);
    }
    double increment(std::size_t j) const { return w_.at(j + 1) - w_.at(j); }

private:
    BrownianPath() = default;

    std::uint64_t seed_ = 0;
    double horizon_ = 1.0;
    int depth_ = 0;
    std::vector<double> w_;
};

// Spatial noise profile sigma with two bounded derivatives on the torus.
class SigmaProfile {
public:
    enum class Kind { constant, sine };

    static SigmaProfile constant(double s0) {
        SigmaProfile p;
        p.kind_ = Kind::constant;
        p.a_ = s0;
        return p;
    }

    // sigma(x) = a + b sin(2 pi x); requires a > |b| so the profile stays
    // sign-definite in diagnostics.
    static SigmaProfile sine(double a, double b) {
        if (!(a > std::abs(b)))
            throw std::invalid_argument("SigmaProfile::sine: requires a > |b|");
        SigmaProfile p;
        p.kind_ = Kind::sine;
        p.a_ = a;
        p.b_ = b;
        return p;
    }

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::constant && a_ == 0.0; }

    double sigma(double x) const {
        return kind_ == Kind::constant ? a_ : a_ + b_ * std::sin(two_pi * x);
    }
    double sigma_prime(double x) const {
        return kind_ == Kind::constant ? 0.0 : b_ * two_pi * std::cos(two_pi * x);
    }
    double sigma_second(double x) const {
        return kind_ == Kind::constant ? 0.0 : -b_ * two_pi * two_pi * std::sin(two_pi * x);
    }

    double sup_sigma() const { return std::abs(a_) + std::abs(b_); }
    double sup_sigma_prime() const { return kind_ == Kind::constant ? 0.0 : std::abs(b_) * two_pi; }

    GridField eval(std::size_t grid_size) const { return sample(&SigmaProfile::sigma, grid_size); }
    GridField eval_prime(std::size_t grid_size) const {
        return sample(&SigmaProfile::sigma_prime, grid_size);
    }
    GridField eval_second(std::size_t grid_size) const {
        return sample(&SigmaProfile::sigma_second, grid_size);
    }

private:
    SigmaProfile() = default;

    GridField sample(double (SigmaProfile::*f)(double) const, std::size_t grid_size) const {
        GridField g(grid_size);
        for (std::size_t m = 0; m < grid_size; ++m)
            g[m] = (this->*f)(double(m) / double(grid_size));
        return g;
    }

    Kind kind_ = Kind::constant;
    double a_ = 0.0;
    double b_ = 0.0;
};

}  // namespace svw

#endif  // SVW_NOISE_HPP
