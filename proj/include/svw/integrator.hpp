#ifndef SVW_INTEGRATOR_HPP
#define SVW_INTEGRATOR_HPP

// Time advancement of the Galerkin SDE: the viscous semigroup is applied
// exactly per Fourier mode (integrating factor), everything else -- transport,
// nonlinearity, Ito correction, noise -- by explicit Euler-Maruyama:
//
//   R_k^+ = exp(-nu (2 pi k)^2 dt) [ R_k + dt * drift_k + dW * g_k ].
//
// This removes the stiffness constraint from viscosity; the remaining step
// restrictions (transport CFL and a mean-square bound from the explicit
// second-order correction term) are collected in cfl_dt_guideline below.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "svw/dynamics.hpp"
#include "svw/noise.hpp"

namespace svw {

class blow_up_error : public std::runtime_error {
public:
    blow_up_error(double t, double norm_value)
        : std::runtime_error("blow-up detected at t = " + std::to_string(t) +
                             " (norm " + std::to_string(norm_value) + ")"),
          t_(t),
          norm_(norm_value) {}
    double t() const noexcept { return t_; }
    double norm_value() const noexcept { return norm_; }

private:
    double t_, norm_;
};

struct StoppingEvent {
    double t;
    double k;
    double energy;  // ||R||^2 + ||S||^2 at the crossing
};

struct Trajectory {
    std::vector<SystemState> states;
    std::vector<double> w_samples;
    SdeParams params;
    double dt = 0.0;
    std::vector<StoppingEvent> events;
};

// Everything needed to integrate one trajectory. The initial state must have
// mean(R - S) = 0; sample_cadence counts steps between stored states.
struct RunSpec {
    SystemState initial;
    SdeParams params;
    double dt = 1e-4;
    double horizon = 1.0;
    std::size_t sample_cadence = 1;
};

namespace detail {

inline void check_finite(const SystemState& st) {
    constexpr double blow_up_threshold = 1e12;
    const double nR = norm(st.R, Norm::L2);
    const double nS = norm(st.S, Norm::L2);
    if (!std::isfinite(nR) || !std::isfinite(nS) || nR > blow_up_threshold ||
        nS > blow_up_threshold)
        throw blow_up_error(st.t, std::max(nR, nS));
}

}  // namespace detail

// One Euler-Maruyama step with exact viscous factor. The drift is evaluated
// with nu = 0 (the viscous part is the exponential).
inline SystemState step(const SystemState& st, const SdeParams& params, double dt, double dW) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    SdeParams nonstiff = params;
    nonstiff.nu = 0.0;
    const DriftIncrement d = params.cutoff_k ? drift_cutoff(st, nonstiff, *params.cutoff_k)
                                             : drift_limit(st, nonstiff);
    const SpectralField g = diffusion(st, params);

    const int K = st.order - 1;
    std::vector<cplx> halfR(std::size_t(K) + 1), halfS(std::size_t(K) + 1);
    for (int k = 0; k <= K; ++k) {
        const double factor = std::exp(-params.nu * (two_pi * k) * (two_pi * k) * dt);
        halfR[std::size_t(k)] =
            factor * (st.R.coeff(k) + dt * d.dR.coeff(k) + dW * g.coeff(k));
        halfS[std::size_t(k)] =
            factor * (st.S.coeff(k) + dt * d.dS.coeff(k) + dW * g.coeff(k));
    }
    SystemState out;
    out.t = st.t + dt;
    out.order = st.order;
    out.R = SpectralField::from_half_spectrum(std::move(halfR));
    out.S = SpectralField::from_half_spectrum(std::move(halfS));
    detail::check_finite(out);
    return out;
}

// Integrate over [0, horizon] against one Brownian realization. The step
// size must align with the path's dyadic increments: dt = stride * T_path /
// 2^depth for an integer stride. Stopping-time crossings of cutoff_k are
// recorded (first crossing only); integration continues past them.
inline Trajectory simulate(const RunSpec& spec, const BrownianPath& path) {
    const double T = spec.horizon;
    if (T < 0.0) throw std::invalid_argument("simulate: negative horizon");
    if (std::abs(spec.initial.R.mean() - spec.initial.S.mean()) > 1e-10)
        throw constraint_error("simulate: initial mean(R - S) must vanish",
                               spec.initial.R.mean() - spec.initial.S.mean());

    Trajectory traj;
    traj.params = spec.params;
    traj.dt = spec.dt;
    traj.states.push_back(spec.initial);
    traj.w_samples.push_back(0.0);
    if (T == 0.0) return traj;

    const std::size_t n_steps = std::size_t(std::llround(T / spec.dt));
    if (n_steps == 0 || std::abs(double(n_steps) * spec.dt - T) > 1e-9 * T)
        throw std::invalid_argument("simulate: dt does not divide the horizon");

    const bool noisy = !spec.params.sigma.is_zero();
    std::size_t stride = 0;
    if (noisy) {
        if (path.horizon() + 1e-12 < T)
            throw std::invalid_argument("simulate: path horizon shorter than run horizon");
        const double path_dt = path.horizon() / double(path.sample_count() - 1);
        const double ratio = spec.dt / path_dt;
        stride = std::size_t(std::llround(ratio));
        if (stride == 0 || std::abs(double(stride) - ratio) > 1e-9)
            throw std::invalid_argument(
                "simulate: dt is not an integer multiple of the path's dyadic increment");
    }

    SystemState st = spec.initial;
    bool stopped = false;
    if (spec.params.cutoff_k && stopping_predicate(st, *spec.params.cutoff_k)) {
        const double nR = norm(st.R, Norm::L2), nS = norm(st.S, Norm::L2);
        traj.events.push_back({st.t, *spec.params.cutoff_k, nR * nR + nS * nS});
        stopped = true;
    }
    for (std::size_t j = 0; j < n_steps; ++j) {
        const double dW =
            noisy ? path.value((j + 1) * stride) - path.value(j * stride) : 0.0;
        st = step(st, spec.params, spec.dt, dW);
        if (spec.params.cutoff_k && !stopped && stopping_predicate(st, *spec.params.cutoff_k)) {
            const double nR = norm(st.R, Norm::L2), nS = norm(st.S, Norm::L2);
            traj.events.push_back({st.t, *spec.params.cutoff_k, nR * nR + nS * nS});
            stopped = true;
        }
        if ((j + 1) % spec.sample_cadence == 0 || j + 1 == n_steps) {
            traj.states.push_back(st);
            traj.w_samples.push_back(noisy ? path.value((j + 1) * stride) : 0.0);
        }
    }
    return traj;
}

// Step-size guideline for defaults and config validation. Two constraints:
// a transport CFL bound, and a mean-square bound from the explicitly
// integrated second-order correction term, whose per-mode rate grows like
// (2 pi k sup|sigma|)^2.
inline double cfl_dt_guideline(int order, const WaveSpeed& speed, const SigmaProfile& sigma) {
    const double a = two_pi * double(order - 1);
    const double transport_rate =
        a * (speed.kappa() + 2.0 * sigma.sup_sigma() * sigma.sup_sigma_prime());
    const double correction_rate = 2.0 * a * a * sigma.sup_sigma() * sigma.sup_sigma();
    const double rate = std::max(transport_rate, correction_rate);
    return rate > 0.0 ? 0.5 / rate : 1.0;
}

}  // namespace svw

#endif  // SVW_INTEGRATOR_HPP
