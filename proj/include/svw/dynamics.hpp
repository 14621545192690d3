#ifndef SVW_DYNAMICS_HPP
#define SVW_DYNAMICS_HPP

// Ito drift and diffusion of the Galerkin systems. Two algebraically
// equivalent drifts are provided: the divergence ("limit") form
//
//   dR = nu R_xx + ( P_N[c(u) R] )_x - P_N[ c_tilde(u) (R - S)^2 ]
//        + P_N[ sigma (sigma (R + S)_x)_x ],
//   dS mirrors with -( P_N[c(u) S] )_x and the same last two terms,
//
// and the cut-off form with non-divergence transport P_N[c(u) R_x] and
// nonlinearity P_N[ c_tilde(u) (Q_k(R) - Q_k(S)) ]. Below the cut-off the
// two coincide through (c(u))_x = 2 c_tilde(u) (R - S).
//
// Nonlinear products are evaluated on a 4x oversampled collocation grid and
// projected back, which realizes P_N exactly on quadratic terms and to
// spectral accuracy on compositions.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "svw/field.hpp"
#include "svw/noise.hpp"
#include "svw/reconstruction.hpp"
#include "svw/wave_speed.hpp"

namespace svw {

struct SystemState {
    double t = 0.0;
    SpectralField R;
    SpectralField S;
    int order = 1;  // Galerkin order N; R, S band-limited at N-1
};

struct SdeParams {
    double nu = 0.0;
    WaveSpeed speed = WaveSpeed::cosine();
    SigmaProfile sigma = SigmaProfile::constant(0.0);
    std::optional<double> cutoff_k;
    int oversample = 4;
};

struct DriftIncrement {
    SpectralField dR;
    SpectralField dS;
};

namespace detail {

inline std::size_t fine_grid_size(int order, int oversample) {
    return oversampled_size(order - 1, oversample);
}

inline SpectralField project_grid(const std::vector<double>& vals, int order) {
    return project(to_spectral(GridField(vals)), order);
}

// Shared per-evaluation scratch: R, S, u, c(u), c_tilde(u) on the fine grid.
struct FineEval {
    std::size_t M;
    std::vector<double> Rg, Sg, u, cg, ctg;

    FineEval(const SystemState& st, const SdeParams& p) {
        M = fine_grid_size(st.order, p.oversample);
        Rg = to_grid(st.R, M).values();
        Sg = to_grid(st.S, M).values();
        // The reconstruction uses the oscillatory part of R - S. Below the
        // cut-off the mean vanishes identically; with an active cut-off the
        // mean is not conserved, and dx^{-1} discards it by definition.
        SpectralField q = st.R - st.S;
        q.set_coeff(0, cplx(0.0, 0.0));
        const SpectralField G = 0.5 * antiderivative(q);
        const GridField g = to_grid(G, M);
        u.resize(M);
        cg.resize(M);
        ctg.resize(M);
        for (std::size_t m = 0; m < M; ++m) {
            u[m] = p.speed.F_inverse(g[m]);
            cg[m] = p.speed.c(u[m]);
            ctg[m] = p.speed.c_tilde(u[m]);
        }
    }
};

// P_N[ sigma ( sigma (R+S)_x )_x ]; the inner product is left unprojected.
inline SpectralField ito_correction(const SystemState& st, const SdeParams& p, std::size_t M) {
    const GridField sg = p.sigma.eval(M);
    const GridField d1 = to_grid(derivative(st.R + st.S), M);
    std::vector<double> a(M);
    for (std::size_t m = 0; m < M; ++m) a[m] = sg[m] * d1[m];
    const GridField d2 = to_grid(derivative(to_spectral(GridField(a))), M);
    std::vector<double> b(M);
    for (std::size_t m = 0; m < M; ++m) b[m] = sg[m] * d2[m];
    return project_grid(b, st.order);
}

inline SpectralField viscous_term(const SpectralField& f, double nu) {
    const int K = f.max_freq();
    std::vector<cplx> half(std::size_t(K) + 1, cplx(0.0));
    for (int k = 0; k <= K; ++k)
        half[std::size_t(k)] = -nu * (two_pi * k) * (two_pi * k) * f.coeff(k);
    return SpectralField::from_half_spectrum(std::move(half));
}

}  // namespace detail

// Smoothstep cut-off multiplier: 1 on [0, k], 0 beyond k+1, quintic in
// between (C^2, monotone).
inline double cutoff_chi(double r, double k) {
    if (r <= k) return 1.0;
    if (r >= k + 1.0) return 0.0;
    const double t = r - k;
    const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    return 1.0 - s;
}

// Q_k(f) = chi(||f||_L2) f^2, with the square dealiased on the oversampled
// grid.
inline SpectralField cutoff_Q(const SpectralField& f, double k, int oversample = 4) {
    if (!(k > 0.0)) throw std::invalid_argument("cutoff_Q: k must be positive");
    const double chi = cutoff_chi(norm(f, Norm::L2), k);
    const int out_freq = 2 * f.max_freq();
    if (chi == 0.0) return SpectralField(out_freq);
    const std::size_t M = oversampled_size(f.max_freq(), oversample);
    const GridField g = to_grid(f, M);
    std::vector<double> sq(M);
    for (std::size_t m = 0; m < M; ++m) sq[m] = chi * g[m] * g[m];
    return project(to_spectral(GridField(sq)), out_freq + 1);
}

// Divergence-form drift of the k = infinity system (viscous term included).
inline DriftIncrement drift_limit(const SystemState& st, const SdeParams& p) {
    const detail::FineEval fe(st, p);
    const std::size_t M = fe.M;

    std::vector<double> cR(M), cS(M), nl(M);
    for (std::size_t m = 0; m < M; ++m) {
        cR[m] = fe.cg[m] * fe.Rg[m];
        cS[m] = fe.cg[m] * fe.Sg[m];
        const double q = fe.Rg[m] - fe.Sg[m];
        nl[m] = fe.ctg[m] * q * q;
    }
    const SpectralField transportR = derivative(detail::project_grid(cR, st.order));
    const SpectralField transportS = derivative(detail::project_grid(cS, st.order));
    const SpectralField nonlinear = detail::project_grid(nl, st.order);
    const SpectralField ito = p.sigma.is_zero() ? SpectralField(st.order - 1)
                                                : detail::ito_correction(st, p, M);

    DriftIncrement d;
    d.dR = detail::viscous_term(st.R, p.nu) + transportR - nonlinear + ito;
    d.dS = detail::viscous_term(st.S, p.nu) - nonlinear - transportS + ito;
    return d;
}

// Cut-off drift: non-divergence transport plus the Q_k nonlinearity.
inline DriftIncrement drift_cutoff(const SystemState& st, const SdeParams& p, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("drift_cutoff: k must be positive");
    const detail::FineEval fe(st, p);
    const std::size_t M = fe.M;

    const GridField dR = to_grid(derivative(st.R), M);
    const GridField dS = to_grid(derivative(st.S), M);
    const double chiR = cutoff_chi(norm(st.R, Norm::L2), k);
    const double chiS = cutoff_chi(norm(st.S, Norm::L2), k);

    std::vector<double> trR(M), trS(M), nl(M);
    for (std::size_t m = 0; m < M; ++m) {
        trR[m] = fe.cg[m] * dR[m];
        trS[m] = fe.cg[m] * dS[m];
        nl[m] = fe.ctg[m] * (chiR * fe.Rg[m] * fe.Rg[m] - chiS * fe.Sg[m] * fe.Sg[m]);
    }
    const SpectralField transportR = detail::project_grid(trR, st.order);
    const SpectralField transportS = detail::project_grid(trS, st.order);
    const SpectralField nonlinear = detail::project_grid(nl, st.order);
    const SpectralField ito = p.sigma.is_zero() ? SpectralField(st.order - 1)
                                                : detail::ito_correction(st, p, M);

    DriftIncrement d;
    d.dR = detail::viscous_term(st.R, p.nu) + transportR + nonlinear + ito;
    d.dS = detail::viscous_term(st.S, p.nu) - transportS - nonlinear + ito;
    return d;
}

// Shared diffusion coefficient of both equations: P_N[sigma (R + S)_x].
inline SpectralField diffusion(const SystemState& st, const SdeParams& p) {
    if (p.sigma.is_zero()) return SpectralField(st.order - 1);
    const std::size_t M = detail::fine_grid_size(st.order, p.oversample);
    const GridField sg = p.sigma.eval(M);
    const GridField d1 = to_grid(derivative(st.R + st.S), M);
    std::vector<double> a(M);
    for (std::size_t m = 0; m < M; ++m) a[m] = sg[m] * d1[m];
    return detail::project_grid(a, st.order);
}

// Discrete first-crossing convention for tau_{N,k}: true once the closed
// condition ||R||^2 + ||S||^2 >= k holds.
inline bool stopping_predicate(const SystemState& st, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("stopping_predicate: k must be positive");
    const double nR = norm(st.R, Norm::L2);
    const double nS = norm(st.S, Norm::L2);
    return nR * nR + nS * nS >= k;
}

}  // namespace svw

#endif  // SVW_DYNAMICS_HPP
