#ifndef SVW_DIAGNOSTICS_HPP
#define SVW_DIAGNOSTICS_HPP

// Numerical checks of the analysis: energy/dissipation identities, moment
// ensembles, Holder-in-H^{-3} continuity, mollifier commutator decay,
// difference bounds for the reconstruction map, shared-noise Cauchy
// convergence in the Galerkin order, and temporal L2 continuity.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "svw/integrator.hpp"
#include "svw/reconstruction.hpp"

namespace svw {

// ---------------------------------------------------------------------------
// Small shared utilities

struct DecayTable {
    std::vector<double> parameters;  // strictly decreasing (delta, dt, ...)
    std::vector<double> errors;
    double fitted_slope = 0.0;  // least-squares slope of log(error) vs log(parameter)
};

inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    const double denom = double(n) * sxx - sx * sx;
    return denom != 0.0 ? (double(n) * sxy - sx * sy) / denom : 0.0;
}

// Deterministic fan-out over independent work items; results land in index
// order so worker count never affects output.
inline void parallel_for(std::size_t n, unsigned workers,
                         const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(workers, unsigned(n));
    for (unsigned w = 0; w < count; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += count) body(i);
        });
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Energy

// E = int R^2 + S^2 dx and D = int |R_x|^2 + |S_x|^2 dx, both by Parseval.
inline std::pair<double, double> energy(const SystemState& st) {
    const double nR = norm(st.R, Norm::L2), nS = norm(st.S, Norm::L2);
    const double dR = norm(st.R, Norm::H1_semi), dS = norm(st.S, Norm::H1_semi);
    return {nR * nR + nS * nS, dR * dR + dS * dS};
}

// Max over steps of |dE + 2 nu D dt| / E(0) on a noiseless trajectory
// sampled every step. The transport and nonlinear terms cancel in the energy
// balance; only viscous dissipation remains, up to O(dt^2) per step.
inline double energy_identity_report(const Trajectory& traj) {
    if (!traj.params.sigma.is_zero())
        throw std::invalid_argument("energy_identity_report: trajectory must have sigma = 0");
    if (traj.states.size() < 2) return 0.0;
    const double E0 = energy(traj.states.front()).first;
    if (E0 == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < traj.states.size(); ++j) {
        const auto [Ea, Da] = energy(traj.states[j]);
        const auto [Eb, Db] = energy(traj.states[j + 1]);
        const double dt = traj.states[j + 1].t - traj.states[j].t;
        const double resid = Eb - Ea + 2.0 * traj.params.nu * 0.5 * (Da + Db) * dt;
        worst = std::max(worst, std::abs(resid) / E0);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Moment ensembles

struct EnsembleSummary {
    std::size_t path_count = 0;
    std::size_t blow_up_count = 0;
    std::vector<double> sup_energy;       // per path: sup_t E(t)
    std::vector<double> dissipation;      // per path: int_0^T D dt
    double sup_energy_moment = 0.0;       // empirical mean of (sup_t E)^p
    double dissipation_moment = 0.0;      // empirical mean of (int D dt)^p
    double sup_energy_moment_radius = 0.0;  // bootstrap confidence radius
    double p = 1.0;
};

// Runs the same spec under each seed and summarizes p-th moments of the
// sup-energy and the dissipation integral. Blown-up paths are excluded and
// counted.
inline EnsembleSummary moment_ensemble(
    const std::function<Trajectory(std::uint64_t seed)>& run,
    const std::vector<std::uint64_t>& seeds, double p, unsigned workers = 1) {
    if (seeds.size() < 8)
        throw std::invalid_argument("moment_ensemble: need at least 8 seeds");
    EnsembleSummary out;
    out.p = p;
    std::vector<double> sup_e(seeds.size(), -1.0), diss(seeds.size(), -1.0);
    std::vector<char> blew(seeds.size(), 0);
    parallel_for(seeds.size(), workers, [&](std::size_t i) {
        try {
            const Trajectory traj = run(seeds[i]);
            double se = 0.0, di = 0.0;
            for (std::size_t j = 0; j < traj.states.size(); ++j) {
                const auto [E, D] = energy(traj.states[j]);
                se = std::max(se, E);
                if (j + 1 < traj.states.size())
                    di += D * (traj.states[j + 1].t - traj.states[j].t);
            }
            sup_e[i] = se;
            diss[i] = di;
        } catch (const blow_up_error&) {
            blew[i] = 1;
        }
    });
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (blew[i]) {
            ++out.blow_up_count;
            continue;
        }
        out.sup_energy.push_back(sup_e[i]);
        out.dissipation.push_back(diss[i]);
    }
    out.path_count = out.sup_energy.size();
    if (out.path_count == 0) return out;
    auto moment = [p](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += std::pow(x, p);
        return s / double(v.size());
    };
    out.sup_energy_moment = moment(out.sup_energy);
    out.dissipation_moment = moment(out.dissipation);
    // Bootstrap (fixed internal seed, 200 resamples).
    const std::size_t n = out.sup_energy.size();
    std::vector<double> boots(200);
    for (std::size_t b = 0; b < boots.size(); ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t pick =
                detail::mix64(0xB00757ull ^ detail::mix64(b * n + i)) % n;
            s += std::pow(out.sup_energy[pick], p);
        }
        boots[b] = s / double(n);
    }
    std::sort(boots.begin(), boots.end());
    out.sup_energy_moment_radius =
        0.5 * (boots[std::size_t(0.975 * double(boots.size()))] -
               boots[std::size_t(0.025 * double(boots.size()))]);
    return out;
}

// ---------------------------------------------------------------------------
// Holder continuity in H^{-3}

struct HolderReport {
    double sup_ratio = 0.0;        // max ||R(t)-R(s)||_{H^-3} / |t-s|^{1/2}
    double fitted_exponent = 0.0;  // least-squares slope of log-increments
};

// Lag/increment pairs of ||R(t)-R(s)||_{H^-3} up to max_lag_fraction of the
// horizon, appended to (lags, incs).
inline void holder_increments(const Trajectory& traj, double max_lag_fraction,
                              std::vector<double>& lags, std::vector<double>& incs) {
    if (traj.states.size() < 32)
        throw std::invalid_argument("holder_increments: need at least 32 stored samples");
    const double T = traj.states.back().t - traj.states.front().t;
    const double max_lag = max_lag_fraction * T;
    const std::size_t n = traj.states.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 64);
    for (std::size_t i = 0; i < n; i += stride) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double lag = traj.states[j].t - traj.states[i].t;
            if (lag > max_lag) break;
            const double inc = norm(traj.states[j].R - traj.states[i].R, Norm::H_neg3);
            if (inc > 0.0) {
                lags.push_back(lag);
                incs.push_back(inc);
            }
        }
    }
}

// Temporal Holder diagnostic on the stored samples of R.
inline HolderReport holder_h_neg3(const Trajectory& traj, double max_lag_fraction = 0.25) {
    std::vector<double> lags, incs;
    holder_increments(traj, max_lag_fraction, lags, incs);
    HolderReport rep;
    for (std::size_t i = 0; i < lags.size(); ++i)
        rep.sup_ratio = std::max(rep.sup_ratio, incs[i] / std::sqrt(lags[i]));
    rep.fitted_exponent = incs.empty() ? 0.0 : fit_loglog_slope(lags, incs);
    return rep;
}

// ---------------------------------------------------------------------------
// Commutator decay

// The four mollifier commutators of the uniqueness proof, as squared-L2
// errors for each delta in the (decreasing) list:
//   [0] c(u_d) dx R_d  - (c(u) dx R) * J_d      [1] the S-counterpart
//   [2] ct(u_d)(R_d - S_d) R_d - (ct(u)(R-S)R) * J_d   [3] the S-counterpart
inline std::array<DecayTable, 4> commutator_study(const SpectralField& R, const SpectralField& S,
                                                  const WaveSpeed& speed,
                                                  const std::vector<double>& deltas) {
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("commutator_study: deltas must decrease");

    const int band = std::max(R.max_freq(), S.max_freq());
    const std::size_t M = oversampled_size(band, 8);

    const auto fields_of = [&](const SpectralField& Rf, const SpectralField& Sf) {
        struct Pointwise {
            std::vector<double> cdR, cdS, ctR, ctS;
        } pw;
        const ReconstructedField rec = build_u(Rf, Sf, speed, M);
        const GridField dR = to_grid(derivative(Rf), M);
        const GridField dS = to_grid(derivative(Sf), M);
        const GridField Rg = to_grid(Rf, M), Sg = to_grid(Sf, M);
        pw.cdR.resize(M);
        pw.cdS.resize(M);
        pw.ctR.resize(M);
        pw.ctS.resize(M);
        for (std::size_t m = 0; m < M; ++m) {
            const double c = speed.c(rec.u[m]);
            const double ct = speed.c_tilde(rec.u[m]);
            const double q = Rg[m] - Sg[m];
            pw.cdR[m] = c * dR[m];
            pw.cdS[m] = c * dS[m];
            pw.ctR[m] = ct * q * Rg[m];
            pw.ctS[m] = ct * q * Sg[m];
        }
        return pw;
    };

    const auto base = fields_of(R, S);
    const auto mollified_grid = [&](const std::vector<double>& vals, double delta) {
        return to_grid(mollify(to_spectral(GridField(vals)), delta), M).values();
    };

    std::array<DecayTable, 4> tables;
    for (auto& t : tables) t.parameters = deltas;
    for (double delta : deltas) {
        const SpectralField Rd = mollify(R, delta), Sd = mollify(S, delta);
        const auto moll = fields_of(Rd, Sd);
        const std::array<const std::vector<double>*, 4> lhs = {&moll.cdR, &moll.cdS, &moll.ctR,
                                                               &moll.ctS};
        const std::array<const std::vector<double>*, 4> rhs = {&base.cdR, &base.cdS, &base.ctR,
                                                               &base.ctS};
        for (std::size_t q = 0; q < 4; ++q) {
            const auto smoothed = mollified_grid(*rhs[q], delta);
            double s = 0.0;
            for (std::size_t m = 0; m < M; ++m) {
                const double r = (*lhs[q])[m] - smoothed[m];
                s += r * r;
            }
            tables[q].errors.push_back(s / double(M));  // squared L2 error
        }
    }
    for (auto& t : tables) t.fitted_slope = fit_loglog_slope(t.parameters, t.errors);
    return tables;
}

// ---------------------------------------------------------------------------
// Difference bounds for the reconstruction map

struct DifferenceBoundReport {
    std::size_t pair_count = 0;
    std::size_t violations_u = 0;   // (i) with the explicit constant kappa
    std::size_t violations_cR = 0;  // (ii) with fitted constant + margin
    double fitted_constant = 0.0;   // calibration-set constant for (ii)
    double max_ratio_u = 0.0;       // worst observed lhs/bound in (i)
    double max_ratio_cR = 0.0;      // worst held-out lhs/(C * bound) in (ii)
};

// Checks, on random pairs produced by `make_pair`:
//   (i)  ||u1 - u2||_inf <= kappa (||R1-R2||_L1 + ||S1-S2||_L1)
//   (ii) ||c(u1)R1 - c(u2)R2||_L2 + ||c(u1)S1 - c(u2)S2||_L2
//          <= C (1 + min||Ri|| + min||Si||) (||R1-R2|| + ||S1-S2||)
// with C fitted on the first half and asserted on the second with margin.
inline DifferenceBoundReport difference_bound_check(
    const std::function<std::pair<SystemState, SystemState>(std::size_t)>& make_pair,
    const WaveSpeed& speed, std::size_t pairs, double margin = 0.2) {
    if (pairs < 100)
        throw std::invalid_argument("difference_bound_check: need at least 100 pairs");
    DifferenceBoundReport rep;
    rep.pair_count = pairs;
    std::vector<double> ratios(pairs);
    std::vector<double> lhs2(pairs), bound2(pairs);

    for (std::size_t i = 0; i < pairs; ++i) {
        const auto [a, b] = make_pair(i);
        const int band = std::max(a.R.max_freq(), b.R.max_freq());
        const std::size_t M = oversampled_size(band, 4);
        const ReconstructedField u1 = build_u(a.R, a.S, speed, M);
        const ReconstructedField u2 = build_u(b.R, b.S, speed, M);

        // (i)
        double du = 0.0;
        for (std::size_t m = 0; m < M; ++m) du = std::max(du, std::abs(u1.u[m] - u2.u[m]));
        const double b1 = speed.kappa() * (norm(a.R - b.R, Norm::L1) + norm(a.S - b.S, Norm::L1));
        if (b1 > 0.0) {
            rep.max_ratio_u = std::max(rep.max_ratio_u, du / b1);
            if (du > b1 * (1.0 + 1e-12)) ++rep.violations_u;
        }

        // (ii)
        const GridField R1 = to_grid(a.R, M), S1 = to_grid(a.S, M);
        const GridField R2 = to_grid(b.R, M), S2 = to_grid(b.S, M);
        double sR = 0.0, sS = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const double c1 = speed.c(u1.u[m]), c2 = speed.c(u2.u[m]);
            const double rr = c1 * R1[m] - c2 * R2[m];
            const double ss = c1 * S1[m] - c2 * S2[m];
            sR += rr * rr;
            sS += ss * ss;
        }
        lhs2[i] = std::sqrt(sR / double(M)) + std::sqrt(sS / double(M));
        const double minR = std::min(norm(a.R, Norm::L2), norm(b.R, Norm::L2));
        const double minS = std::min(norm(a.S, Norm::L2), norm(b.S, Norm::L2));
        bound2[i] = (1.0 + minR + minS) *
                    (norm(a.R - b.R, Norm::L2) + norm(a.S - b.S, Norm::L2));
    }

    // Fit C on the first half, assert on the second with the margin.
    const std::size_t half = pairs / 2;
    for (std::size_t i = 0; i < half; ++i)
        if (bound2[i] > 0.0)
            rep.fitted_constant = std::max(rep.fitted_constant, lhs2[i] / bound2[i]);
    const double C = rep.fitted_constant * (1.0 + margin);
    for (std::size_t i = half; i < pairs; ++i) {
        if (bound2[i] <= 0.0) continue;
        const double ratio = lhs2[i] / (C * bound2[i]);
        rep.max_ratio_cR = std::max(rep.max_ratio_cR, ratio);
        if (ratio > 1.0) ++rep.violations_cR;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Shared-noise Cauchy convergence in N

// One Brownian realization, one initial datum, increasing Galerkin orders;
// successive differences measured in sup_t L2 over the stored samples.
inline DecayTable shared_noise_convergence(
    const std::function<Trajectory(int order)>& run, const std::vector<int>& orders,
    unsigned workers = 1) {
    for (std::size_t i = 1; i < orders.size(); ++i)
        if (orders[i] <= orders[i - 1])
            throw std::invalid_argument("shared_noise_convergence: orders must increase");
    if (orders.size() < 2)
        throw std::invalid_argument("shared_noise_convergence: need at least two orders");

    std::vector<Trajectory> trajs(orders.size());
    parallel_for(orders.size(), workers, [&](std::size_t i) { trajs[i] = run(orders[i]); });

    DecayTable table;
    for (std::size_t i = 0; i + 1 < orders.size(); ++i) {
        const Trajectory& coarse = trajs[i];
        const Trajectory& fine = trajs[i + 1];
        const std::size_t n = std::min(coarse.states.size(), fine.states.size());
        double sup = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            sup = std::max(sup, norm(fine.states[j].R - coarse.states[j].R, Norm::L2) +
                                    norm(fine.states[j].S - coarse.states[j].S, Norm::L2));
        table.parameters.push_back(double(orders[i]));
        table.errors.push_back(sup);
    }
    // Slope vs 1/N so a positive slope means decay with refinement.
    std::vector<double> invN;
    for (double p : table.parameters) invN.push_back(1.0 / p);
    table.fitted_slope = fit_loglog_slope(invN, table.errors);
    return table;
}

// ---------------------------------------------------------------------------
// Temporal continuity

// Max over adjacent stored samples of ||R(t_{j+1}) - R(t_j)||_L2 +
// ||S(t_{j+1}) - S(t_j)||_L2.
inline double temporal_continuity_check(const Trajectory& traj) {
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < traj.states.size(); ++j)
        worst = std::max(worst,
                         norm(traj.states[j + 1].R - traj.states[j].R, Norm::L2) +
                             norm(traj.states[j + 1].S - traj.states[j].S, Norm::L2));
    return worst;
}

}  // namespace svw

#endif  // SVW_DIAGNOSTICS_HPP
