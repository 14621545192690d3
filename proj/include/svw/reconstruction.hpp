#ifndef SVW_RECONSTRUCTION_HPP
#define SVW_RECONSTRUCTION_HPP

// Recovery of the wave field u from the Riemann invariants (R, S) through
// u = F^{-1}( (1/2) dx^{-1} (R - S) ), together with residual checks of the
// identities 2 c(u) u_x = R - S and (c(u))_x = 2 c_tilde(u) (R - S).
//
// The explicit factor 1/2 lives here; dx^{-1} itself is the exact zero-mean
// inverse of the derivative. The normalization makes F(u) have zero spatial
// average.

#include <cmath>
#include <cstddef>

#include "svw/field.hpp"
#include "svw/wave_speed.hpp"

namespace svw {

struct ReconstructedField {
    GridField u;                    // wave field samples on the request grid
    double residual_constitutive;   // L2 size of 2 c(u) u_x - (R - S)
    double residual_mean_F;         // |spatial mean of F(u)|
};

// L2 residual of 2 c(u) u_x = R - S, with u_x taken spectrally from the grid
// samples of u. Decreases spectrally under grid refinement for smooth data.
inline double constitutive_residual(const SpectralField& R, const SpectralField& S,
                                    const GridField& u, const WaveSpeed& w) {
    const std::size_t M = u.size();
    const GridField du = to_grid(derivative(to_spectral(u)), M);
    const GridField q = to_grid(R - S, M);
    double s = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const double r = 2.0 * w.c(u[m]) * du[m] - q[m];
        s += r * r;
    }
    return std::sqrt(s / double(M));
}

// L2 residual of (c(u))_x = 2 c_tilde(u) (R - S).
inline double c_derivative_identity_residual(const SpectralField& R, const SpectralField& S,
                                             const GridField& u, const WaveSpeed& w) {
    const std::size_t M = u.size();
    GridField cu(M);
    for (std::size_t m = 0; m < M; ++m) cu[m] = w.c(u[m]);
    const GridField dcu = to_grid(derivative(to_spectral(cu)), M);
    const GridField q = to_grid(R - S, M);
    double s = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const double r = dcu[m] - 2.0 * w.c_tilde(u[m]) * q[m];
        s += r * r;
    }
    return std::sqrt(s / double(M));
}

// Pointwise wave-field samples on grid_size points: F^{-1} applied to the
// zero-mean antiderivative of (R - S)/2. Requires mean(R - S) = 0 up to
// mean_tolerance.
inline ReconstructedField build_u(const SpectralField& R, const SpectralField& S,
                                  const WaveSpeed& w, std::size_t grid_size,
                                  double mean_tolerance = 1e-10) {
    const SpectralField q = R - S;
    if (std::abs(q.mean()) > mean_tolerance)
        throw constraint_error("build_u: mean(R - S) must vanish", q.mean());
    SpectralField G = antiderivative(q, mean_tolerance);
    G = 0.5 * G;
    const GridField g = to_grid(G, grid_size);
    GridField u(grid_size);
    double mean_F = 0.0;
    for (std::size_t m = 0; m < grid_size; ++m) {
        u[m] = w.F_inverse(g[m]);
        mean_F += w.F(u[m]);
    }
    mean_F /= double(grid_size);
    return ReconstructedField{u, constitutive_residual(R, S, u, w), std::abs(mean_F)};
}

}  // namespace svw

#endif  // SVW_RECONSTRUCTION_HPP
