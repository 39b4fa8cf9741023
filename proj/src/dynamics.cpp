#include "qhr/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace qhr {

Matrix buildHamiltonian(const InteractionMatrix& v, const PulseSpec& pulse,
                        const DetuningSpec& detuning, double t) {
    const std::size_t n = v.lowerCount();
    const std::size_t m = v.upperCount();
    const double f = pulse.envelope(t);
    Matrix h(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            h(i, n + j) = v.coupling(i, j) * f;
            h(n + j, i) = std::conj(v.coupling(i, j)) * f;
        }
    for (std::size_t j = 0; j < m; ++j) h(n + j, n + j) = detuning.value;
    return h;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,        7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct Stepper {
    const InteractionMatrix& v;
    const PulseSpec& pulse;
    const DetuningSpec& detuning;

    void rhs(double t, const Vec& y, Vec& dy) const {
        const std::size_t n = v.lowerCount();
        const std::size_t m = v.upperCount();
        const double f = pulse.envelope(t);
        const cplx mi(0.0, -1.0);
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += v.coupling(i, j) * y[n + j];
            dy[i] = mi * f * s;
        }
        for (std::size_t j = 0; j < m; ++j) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::conj(v.coupling(i, j)) * y[i];
            dy[n + j] = mi * (f * s + detuning.value * y[n + j]);
        }
    }
};

// Advances y from t to tEnd with adaptive step control; stops exactly at
// tEnd. relTol is the per-step relative error target.
void advance(const Stepper& st, Vec& y, double t, double tEnd, double relTol) {
    const std::size_t dim = y.size();
    std::vector<Vec> k(7, Vec(dim));
    Vec ytmp(dim), y5(dim);
    const double absTol = relTol * 1e-2;
    double h = (tEnd - t) * 1e-3;
    const double hMin = (tEnd - t) * 1e-14;

    st.rhs(t, y, k[0]);
    while (t < tEnd) {
        if (t + h > tEnd) h = tEnd - t;
        for (int s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < dim; ++i) {
                cplx acc = y[i];
                for (int j = 0; j < s; ++j) acc += h * kA[s][j] * k[j][i];
                ytmp[i] = acc;
            }
            st.rhs(t + kC[s] * h, ytmp, k[s]);
        }
        double errNorm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            cplx acc5 = y[i];
            cplx errAcc = 0.0;
            for (int s = 0; s < 7; ++s) {
                acc5 += h * kB5[s] * k[s][i];
                errAcc += h * (kB5[s] - kB4[s]) * k[s][i];
            }
            y5[i] = acc5;
            const double sc = absTol + relTol * std::max(std::abs(y[i]), std::abs(acc5));
            const double e = std::abs(errAcc) / sc;
            errNorm += e * e;
        }
        errNorm = std::sqrt(errNorm / static_cast<double>(dim));

        if (errNorm <= 1.0) {
            t += h;
            y.swap(y5);
            k[0] = k[6];  // FSAL
        } else {
            st.rhs(t, y, k[0]);
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(errNorm, 1e-10), -0.2), 0.2, 5.0);
        h *= factor;
        if (h < hMin)
            throw IntegrationError("integrate: step size underflow", t);
    }
}

}  // namespace

Trajectory integrate(const SimulationProblem& problem, double relTol) {
    if (relTol < 1e-12 || relTol > 1e-4)
        throw std::invalid_argument("integrate: relTol must be in [1e-12, 1e-4]");
    problem.pulse.validate();
    const std::size_t dim = problem.interaction.lowerCount() + problem.interaction.upperCount();
    if (problem.initialState.size() != dim)
        throw std::invalid_argument("integrate: initial state has wrong dimension");
    checkFinite(problem.initialState, "integrate initial state");
    if (std::abs(norm(problem.initialState) - 1.0) > 1e-12)
        throw std::invalid_argument("integrate: initial state is not normalized");

    const double tScale = problem.pulse.timeScale;
    const double t0 = problem.pulse.windowStart * tScale;
    const double t1 = problem.pulse.windowEnd * tScale;
    const std::size_t samples = std::max<std::size_t>(problem.sampleCount, 2);

    Stepper st{problem.interaction, problem.pulse, problem.detuning};
    Vec y = problem.initialState;

    Trajectory traj;
    traj.times.reserve(samples);
    traj.populations.reserve(samples);
    double tPrev = t0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double ts = t0 + (t1 - t0) * static_cast<double>(s) / static_cast<double>(samples - 1);
        if (ts > tPrev) advance(st, y, tPrev, ts, relTol);
        tPrev = ts;
        traj.times.push_back(ts / tScale);
        std::vector<double> pops(dim);
        for (std::size_t i = 0; i < dim; ++i) pops[i] = std::norm(y[i]);
        traj.populations.push_back(std::move(pops));
    }
    traj.finalState = y;
    return traj;
}

Matrix integratePropagator(const InteractionMatrix& v, const PulseSpec& pulse,
                           const DetuningSpec& detuning, double relTol) {
    const std::size_t dim = v.lowerCount() + v.upperCount();
    const double tScale = pulse.timeScale;
    Stepper st{v, pulse, detuning};
    Matrix u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        Vec y(dim, cplx{});
        y[col] = 1.0;
        advance(st, y, pulse.windowStart * tScale, pulse.windowEnd * tScale, relTol);
        u.setColumn(col, y);
    }
    return u;
}

double compareAnalytic(const SimulationProblem& problem, const BlockPropagator& block,
                       double relTol, const std::vector<Vec>* initialStates) {
    const std::size_t dim = problem.interaction.lowerCount() + problem.interaction.upperCount();
    const Matrix u = block.full();
    if (u.rows() != dim) throw std::invalid_argument("compareAnalytic: dimension mismatch");

    std::vector<Vec> states;
    if (initialStates) {
        states = *initialStates;
    } else {
        for (std::size_t i = 0; i < dim; ++i) {
            Vec e(dim, cplx{});
            e[i] = 1.0;
            states.push_back(std::move(e));
        }
    }

    Stepper st{problem.interaction, problem.pulse, problem.detuning};
    const double tScale = problem.pulse.timeScale;
    double maxDev = 0.0;
    for (const Vec& c0 : states) {
        Vec y = c0;
        advance(st, y, problem.pulse.windowStart * tScale, problem.pulse.windowEnd * tScale,
                relTol);
        const Vec predicted = u * c0;
        for (std::size_t i = 0; i < dim; ++i)
            maxDev = std::max(maxDev, std::abs(y[i] - predicted[i]));
    }
    return maxDev;
}

}  // namespace qhr
