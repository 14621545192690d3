#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "svw/config.hpp"
#include "svw/integrator.hpp"

using namespace svw;

namespace {

SystemState sine_state(int order, double amp = 1.0) {
    SystemState st;
    st.order = order;
    SpectralField R(order - 1), S(order - 1);
    R.set_coeff(1, cplx(0.0, -0.5 * amp));
    st.R = R;
    st.S = S;
    return st;
}

SdeParams linear_params(double nu, double c0) {
    SdeParams p;
    p.nu = nu;
    p.speed = WaveSpeed::constant(c0);
    p.sigma = SigmaProfile::constant(0.0);
    return p;
}

// Straight-line reference for one step: exponential viscous factor applied
// to state + dt * drift + dW * diffusion, assembled coefficient by
// coefficient without going through `step`.
SystemState reference_step(const SystemState& st, const SdeParams& params, double dt,
                           double dW) {
    SdeParams nonstiff = params;
    nonstiff.nu = 0.0;
    const DriftIncrement d = params.cutoff_k ? drift_cutoff(st, nonstiff, *params.cutoff_k)
                                             : drift_limit(st, nonstiff);
    const SpectralField g = diffusion(st, params);
    SpectralField R(st.order - 1), S(st.order - 1);
    for (int k = 0; k <= st.order - 1; ++k) {
        const double factor = std::exp(-params.nu * (two_pi * k) * (two_pi * k) * dt);
        R.set_coeff(k, factor * (st.R.coeff(k) + dt * d.dR.coeff(k) + dW * g.coeff(k)));
        S.set_coeff(k, factor * (st.S.coeff(k) + dt * d.dS.coeff(k) + dW * g.coeff(k)));
    }
    SystemState out;
    out.t = st.t + dt;
    out.order = st.order;
    out.R = R;
    out.S = S;
    return out;
}

}  // namespace

TEST(Step, MatchesReferenceImplementation) {
    std::mt19937 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    SdeParams p;
    p.nu = 0.05;
    p.speed = WaveSpeed::cosine();
    p.sigma = SigmaProfile::sine(0.3, 0.1);
    SystemState st = sine_state(24, 0.8);
    for (int j = 0; j < 5; ++j) {
        const double dW = 0.01 * n(rng);
        const SystemState a = step(st, p, 1e-4, dW);
        const SystemState b = reference_step(st, p, 1e-4, dW);
        for (int k = 0; k <= st.order - 1; ++k) {
            EXPECT_NEAR(std::abs(a.R.coeff(k) - b.R.coeff(k)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(a.S.coeff(k) - b.S.coeff(k)), 0.0, 1e-14);
        }
        st = a;
    }
    EXPECT_THROW(step(st, p, 0.0, 0.0), std::invalid_argument);
}

TEST(Step, ZeroStateStaysZero) {
    SdeParams p;
    p.nu = 0.1;
    p.speed = WaveSpeed::cosine();
    p.sigma = SigmaProfile::sine(0.3, 0.1);
    SystemState st;
    st.order = 16;
    st.R = SpectralField(15);
    st.S = SpectralField(15);
    for (int j = 0; j < 10; ++j) st = step(st, p, 1e-3, 0.02);
    EXPECT_DOUBLE_EQ(norm(st.R, Norm::L2), 0.0);
    EXPECT_DOUBLE_EQ(norm(st.S, Norm::L2), 0.0);
}

TEST(Simulate, LinearExactSolution) {
    // c = c0, sigma = 0, R0 = sin(2 pi x), S0 = 0: the mode-1 coefficient
    // rotates at frequency c0 and decays at rate nu (2 pi)^2.
    const double nu = 0.05, c0 = 1.25, T = 0.2;
    RunSpec spec;
    spec.initial = sine_state(16);
    spec.params = linear_params(nu, c0);
    spec.dt = 1e-5;
    spec.horizon = T;
    spec.sample_cadence = 1u << 30;  // keep first and last only
    const Trajectory traj = simulate(spec, BrownianPath::generate(0, T, 0));
    const SystemState& fin = traj.states.back();
    EXPECT_NEAR(fin.t, T, 1e-9);
    const cplx exact = cplx(0.0, -0.5) * std::exp(cplx(-nu * two_pi * two_pi * T, two_pi * c0 * T));
    EXPECT_NEAR(std::abs(fin.R.coeff(1) - exact), 0.0, 5e-5);
    EXPECT_NEAR(norm(fin.S, Norm::L2), 0.0, 1e-13);
}

TEST(Simulate, FirstOrderInTime) {
    const double nu = 0.05, c0 = 1.25, T = 0.1;
    const cplx exact = cplx(0.0, -0.5) * std::exp(cplx(-nu * two_pi * two_pi * T, two_pi * c0 * T));
    std::vector<double> errors;
    for (double dt : {1e-3, 5e-4, 2.5e-4}) {
        RunSpec spec;
        spec.initial = sine_state(8);
        spec.params = linear_params(nu, c0);
        spec.dt = dt;
        spec.horizon = T;
        spec.sample_cadence = 1u << 30;
        const Trajectory traj = simulate(spec, BrownianPath::generate(0, T, 0));
        errors.push_back(std::abs(traj.states.back().R.coeff(1) - exact));
    }
    EXPECT_NEAR(errors[0] / errors[1], 2.0, 0.2);
    EXPECT_NEAR(errors[1] / errors[2], 2.0, 0.2);
}

TEST(Simulate, ZeroHorizonReturnsInitialOnly) {
    RunSpec spec;
    spec.initial = sine_state(8);
    spec.params = linear_params(0.01, 1.0);
    spec.horizon = 0.0;
    const Trajectory traj = simulate(spec, BrownianPath::generate(0, 1.0, 0));
    ASSERT_EQ(traj.states.size(), 1u);
    EXPECT_DOUBLE_EQ(traj.states[0].t, 0.0);
}

TEST(Simulate, RejectsBadSetups) {
    RunSpec spec;
    spec.initial = sine_state(8);
    spec.params = linear_params(0.01, 1.0);
    spec.horizon = 1.0;
    spec.dt = 0.3;  // does not divide 1.0
    const BrownianPath path = BrownianPath::generate(0, 1.0, 4);
    EXPECT_THROW(simulate(spec, path), std::invalid_argument);

    spec.dt = 0.25;
    spec.initial.R.set_coeff(0, cplx(0.5, 0.0));  // mean(R - S) != 0
    EXPECT_THROW(simulate(spec, path), constraint_error);
    spec.initial.R.set_coeff(0, cplx(0.0, 0.0));

    // Noisy run whose dt is not a multiple of the path increment.
    spec.params.sigma = SigmaProfile::sine(0.3, 0.1);
    spec.dt = 0.1;
    spec.horizon = 1.0;
    EXPECT_THROW(simulate(spec, path), std::invalid_argument);

    // Path shorter than the horizon.
    spec.dt = 0.25;
    EXPECT_THROW(simulate(spec, BrownianPath::generate(0, 0.5, 4)), std::invalid_argument);
}

TEST(Simulate, NoisyStepsConsumePathIncrements) {
    // With dt equal to the path increment, the stored driver samples must be
    // the path values themselves.
    RunSpec spec;
    spec.initial = sine_state(16, 0.3);
    spec.params.nu = 0.05;
    spec.params.speed = WaveSpeed::cosine();
    spec.params.sigma = SigmaProfile::sine(0.2, 0.1);
    spec.horizon = 0.25;
    spec.dt = 0.25 / 64.0;
    spec.sample_cadence = 1;
    const BrownianPath path = BrownianPath::generate(9, 0.25, 6);
    const Trajectory traj = simulate(spec, path);
    ASSERT_EQ(traj.states.size(), 65u);
    for (std::size_t j = 0; j < traj.w_samples.size(); ++j)
        EXPECT_DOUBLE_EQ(traj.w_samples[j], path.value(j));
    // A coarser run against the same deep path subsamples it bit-exactly.
    RunSpec coarse = spec;
    coarse.dt = 0.25 / 16.0;
    const Trajectory traj2 = simulate(coarse, path);
    ASSERT_EQ(traj2.states.size(), 17u);
    for (std::size_t j = 0; j < traj2.w_samples.size(); ++j)
        EXPECT_DOUBLE_EQ(traj2.w_samples[j], path.value(4 * j));
}

TEST(Simulate, RecordsFirstStoppingCrossing) {
    // A cutoff below the initial energy triggers the event at t = 0.
    RunSpec spec;
    spec.initial = sine_state(8);
    spec.params = linear_params(0.05, 1.0);
    spec.params.cutoff_k = 1e-6;
    spec.horizon = 0.01;
    spec.dt = 1e-3;
    const Trajectory traj = simulate(spec, BrownianPath::generate(0, 0.01, 0));
    ASSERT_EQ(traj.events.size(), 1u);
    EXPECT_DOUBLE_EQ(traj.events[0].t, 0.0);
    EXPECT_NEAR(traj.events[0].energy, 0.5, 1e-12);

    // A huge cutoff is never crossed.
    spec.params.cutoff_k = 1e9;
    const Trajectory calm = simulate(spec, BrownianPath::generate(0, 0.01, 0));
    EXPECT_TRUE(calm.events.empty());
}

TEST(Simulate, BlowUpDetected) {
    // Explicit transport far beyond the CFL bound amplifies the top modes.
    SystemState st;
    st.order = 64;
    SpectralField R(63), S(63);
    for (int k = 1; k <= 63; ++k) R.set_coeff(k, cplx(0.1, 0.0));
    st.R = R;
    st.S = S;
    RunSpec spec;
    spec.initial = st;
    spec.params = linear_params(0.0, 2.0);
    spec.horizon = 100.0;
    spec.dt = 1.0;
    const BrownianPath path = BrownianPath::generate(0, 100.0, 0);
    try {
        simulate(spec, path);
        FAIL() << "expected blow_up_error";
    } catch (const blow_up_error& e) {
        EXPECT_GT(e.norm_value(), 1e12);
        EXPECT_GT(e.t(), 0.0);
    }
}

TEST(CflGuideline, ShrinksWithOrderAndNoise) {
    const WaveSpeed w = WaveSpeed::cosine();
    const SigmaProfile calm = SigmaProfile::constant(0.0);
    const SigmaProfile loud = SigmaProfile::sine(0.4, 0.2);
    const double a = cfl_dt_guideline(32, w, calm);
    const double b = cfl_dt_guideline(128, w, calm);
    const double c = cfl_dt_guideline(128, w, loud);
    EXPECT_GT(a, 0.0);
    EXPECT_GT(a, b);
    EXPECT_GT(b, c);
    // The correction-term bound dominates for strong noise at high order.
    const double amp = two_pi * 127.0;
    EXPECT_NEAR(c, 0.5 / (2.0 * amp * amp * 0.36), 1e-15);
}
