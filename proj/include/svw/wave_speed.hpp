#ifndef SVW_WAVE_SPEED_HPP
#define SVW_WAVE_SPEED_HPP

// The nonlinear wave speed c and its derived quantities: c', the ratio
// c_tilde = c'/(4c), the antiderivative F with F(0) = 0, and the inverse
// F^{-1}. Every speed satisfies 1/kappa <= c <= kappa and |c'| <= kappa for
// a bound constant kappa > 1, so F is bi-Lipschitz and globally invertible.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace svw {

class numerical_failure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// 32-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; the rule
// is symmetric).
struct GaussLegendre32 {
    static constexpr std::array<double, 16> nodes = {
        0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
        0.3318686022821276497, 0.4213512761306353454, 0.5068999089322293900,
        0.5877157572407623290, 0.6630442669302152009, 0.7321821187402896804,
        0.7944837959679424070, 0.8493676137325699701, 0.8963211557660521240,
        0.9349060759377396892, 0.9647622555875064308, 0.9856115115452683354,
        0.9972638618494815635};
    static constexpr std::array<double, 16> weights = {
        0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
        0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
        0.0781938957870703065, 0.0723457941088485062, 0.0658222227763618468,
        0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
        0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706,
        0.0070186100094700966};
};

inline double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < GaussLegendre32::nodes.size(); ++i) {
        const double x = GaussLegendre32::nodes[i];
        s += GaussLegendre32::weights[i] * (f(mid + half * x) + f(mid - half * x));
    }
    return s * half;
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

class WaveSpeed {
public:
    enum class Kind { constant, cosine, liquid_crystal, tabulated };

    // c(u) = c0, F(u) = c0 u. The degenerate case: c_tilde vanishes and the
    // system linearizes.
    static WaveSpeed constant(double c0) {
        if (!(c0 > 0.0)) throw std::invalid_argument("WaveSpeed::constant: c0 must be positive");
        WaveSpeed w;
        w.kind_ = Kind::constant;
        w.params_ = {c0};
        w.kappa_ = std::max({c0, 1.0 / c0, 1.1});
        return w;
    }

    // c(u) = (3 + cos u)/2 with kappa = 2; F(u) = (3u + sin u)/2 in closed
    // form. c' changes sign.
    static WaveSpeed cosine() {
        WaveSpeed w;
        w.kind_ = Kind::cosine;
        w.kappa_ = 2.0;
        return w;
    }

    // c(u) = sqrt(alpha^2 cos^2 u + beta^2 sin^2 u), the planar director
    // speed of a nematic liquid crystal.
    static WaveSpeed liquid_crystal(double alpha, double beta) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("WaveSpeed::liquid_crystal: moduli must be positive");
        WaveSpeed w;
        w.kind_ = Kind::liquid_crystal;
        w.params_ = {alpha, beta};
        const double hi = std::max(alpha, beta);
        const double lo = std::min(alpha, beta);
        const double dprime = std::abs(beta * beta - alpha * alpha) / (2.0 * lo);
        w.kappa_ = std::max({hi, 1.0 / lo, dprime, 1.1});
        // One half-period of the (pi-periodic) speed, needed by F.
        w.period_integral_ =
            detail::gauss_legendre([&w](double u) { return w.c(u); }, 0.0, std::numbers::pi);
        return w;
    }

    // Piecewise-linear interpolant of samples (u_i, c_i) on an increasing
    // abscissa grid, extended by constants outside the table.
    static WaveSpeed tabulated(std::vector<double> u, std::vector<double> c) {
        if (u.size() != c.size() || u.size() < 2)
            throw std::invalid_argument("WaveSpeed::tabulated: need >= 2 matching samples");
        for (std::size_t i = 1; i < u.size(); ++i)
            if (!(u[i] > u[i - 1]))
                throw std::invalid_argument("WaveSpeed::tabulated: abscissae must increase");
        double cmin = c[0], cmax = c[0], dmax = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            cmin = std::min(cmin, c[i]);
            cmax = std::max(cmax, c[i]);
            if (i > 0) dmax = std::max(dmax, std::abs((c[i] - c[i - 1]) / (u[i] - u[i - 1])));
        }
        if (!(cmin > 0.0))
            throw std::invalid_argument("WaveSpeed::tabulated: speed must be uniformly positive");
        WaveSpeed w;
        w.kind_ = Kind::tabulated;
        w.tab_u_ = std::move(u);
        w.tab_c_ = std::move(c);
        w.kappa_ = std::max({cmax, 1.0 / cmin, dmax, 1.1});
        return w;
    }

    Kind kind() const { return kind_; }
    double kappa() const { return kappa_; }

    double c(double u) const {
        switch (kind_) {
            case Kind::constant:
                return params_[0];
            case Kind::cosine:
                return 0.5 * (3.0 + std::cos(u));
            case Kind::liquid_crystal: {
                const double cu = std::cos(u), su = std::sin(u);
                return std::sqrt(params_[0] * params_[0] * cu * cu +
                                 params_[1] * params_[1] * su * su);
            }
            case Kind::tabulated:
                return interp(u);
        }
        return 0.0;
    }

    double c_prime(double u) const {
        switch (kind_) {
            case Kind::constant:
                return 0.0;
            case Kind::cosine:
                return -0.5 * std::sin(u);
            case Kind::liquid_crystal:
                return 0.5 * (params_[1] * params_[1] - params_[0] * params_[0]) *
                       std::sin(2.0 * u) / c(u);
            case Kind::tabulated:
                return interp_slope(u);
        }
        return 0.0;
    }

    double c_tilde(double u) const { return c_prime(u) / (4.0 * c(u)); }

    // Antiderivative of c with F(0) = 0; strictly increasing and bi-Lipschitz
    // with constants kappa^{-1} and kappa.
    double F(double u) const {
        switch (kind_) {
            case Kind::constant:
                return params_[0] * u;
            case Kind::cosine:
                return 0.5 * (3.0 * u + std::sin(u));
            case Kind::liquid_crystal: {
                // c is pi-periodic; reduce to one half-period and integrate
                // the remainder with a fixed high-order rule.
                const double n = std::floor(u / std::numbers::pi);
                const double r = u - n * std::numbers::pi;
                return n * period_integral_ +
                       detail::gauss_legendre([this](double v) { return c(v); }, 0.0, r);
            }
            case Kind::tabulated:
                return detail::adaptive_simpson([this](double v) { return interp(v); },
                                                0.0, u, 1e-13);
        }
        return 0.0;
    }

    // Safeguarded Newton on the monotone bracket [v/kappa, v*kappa], with
    // bisection fallback; global convergence follows from F' in
    // [1/kappa, kappa].
    double F_inverse(double v) const {
        if (kind_ == Kind::constant) return v / params_[0];
        if (v == 0.0) return 0.0;
        double lo = std::min(v / kappa_, v * kappa_);
        double hi = std::max(v / kappa_, v * kappa_);
        double x = v / c(0.0);
        x = std::clamp(x, lo, hi);
        const double tol = 1e-14 * std::max(1.0, std::abs(v));
        for (int it = 0; it < 200; ++it) {
            const double fx = F(x) - v;
            if (std::abs(fx) <= tol) return x;
            if (fx > 0.0) hi = x; else lo = x;
            const double step = fx / c(x);
            double next = x - step;
            if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
            x = next;
        }
        throw numerical_failure("WaveSpeed::F_inverse: no convergence within iteration cap");
    }

    // C^2 approximant c_N used by the Galerkin scheme. Analytic presets are
    // already smooth and map to themselves; tabulated speeds are smoothed by
    // a Gaussian in u of width 1/level. Convex averaging preserves the kappa
    // bounds.
    WaveSpeed smoothed(int level) const {
        if (level < 1) throw std::invalid_argument("WaveSpeed::smoothed: level must be >= 1");
        if (kind_ != Kind::tabulated) return *this;
        const double width = 1.0 / double(level);
        const double lo = tab_u_.front() - 4.0 * width;
        const double hi = tab_u_.back() + 4.0 * width;
        const std::size_t n = 2048;
        const double h = (hi - lo) / double(n - 1);
        const int half = std::max(1, int(std::ceil(4.0 * width / h)));
        std::vector<double> u(n), cs(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = lo + h * double(i);
        for (std::size_t i = 0; i < n; ++i) {
            double num = 0.0, den = 0.0;
            for (int j = -half; j <= half; ++j) {
                const double du = h * double(j);
                const double wgt = std::exp(-0.5 * du * du / (width * width));
                num += wgt * interp(u[i] + du);
                den += wgt;
            }
            cs[i] = num / den;
        }
        return tabulated(std::move(u), std::move(cs));
    }

private:
    WaveSpeed() = default;

    double interp(double u) const {
        if (u <= tab_u_.front()) return tab_c_.front();
        if (u >= tab_u_.back()) return tab_c_.back();
        const auto it = std::upper_bound(tab_u_.begin(), tab_u_.end(), u);
        const std::size_t i = std::size_t(it - tab_u_.begin());
        const double t = (u - tab_u_[i - 1]) / (tab_u_[i] - tab_u_[i - 1]);
        return (1.0 - t) * tab_c_[i - 1] + t * tab_c_[i];
    }

    double interp_slope(double u) const {
        if (u <= tab_u_.front() || u >= tab_u_.back()) return 0.0;
        const auto it = std::upper_bound(tab_u_.begin(), tab_u_.end(), u);
        const std::size_t i = std::size_t(it - tab_u_.begin());
        return (tab_c_[i] - tab_c_[i - 1]) / (tab_u_[i] - tab_u_[i - 1]);
    }

    Kind kind_ = Kind::constant;
    std::vector<double> params_;
    std::vector<double> tab_u_, tab_c_;
    double kappa_ = 1.1;
    double period_integral_ = 0.0;
};

}  // namespace svw

#endif  // SVW_WAVE_SPEED_HPP
