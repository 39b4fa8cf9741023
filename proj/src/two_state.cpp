#include "qhr/two_state.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qhr {

namespace {

constexpr double kPi = 3.14159265358979323846;

double adaptiveSimpson(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptiveSimpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptiveSimpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate1d(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptiveSimpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

double sech(double x) {
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

}  // namespace

double PulseSpec::envelope(double t) const {
    switch (shape) {
        case PulseShape::Sech:
            return sech(t / timeScale);
        case PulseShape::Gaussian:
            return std::exp(-(t / timeScale) * (t / timeScale));
        case PulseShape::Constant:
            return 1.0;
    }
    return 0.0;
}

double PulseSpec::envelopeSquaredIntegral() const {
    switch (shape) {
        case PulseShape::Sech:
            return 2.0 * timeScale;
        case PulseShape::Gaussian:
            return std::sqrt(kPi / 2.0) * timeScale;
        case PulseShape::Constant:
            return (windowEnd - windowStart) * timeScale;
    }
    return 0.0;
}

void PulseSpec::validate() const {
    if (!(timeScale > 0.0)) throw std::invalid_argument("PulseSpec: time scale must be positive");
    if (!(windowStart < windowEnd)) throw std::invalid_argument("PulseSpec: empty window");
}

double pulseArea(const PulseSpec& pulse, double lambda) {
    pulse.validate();
    if (lambda < 0.0) throw std::invalid_argument("pulseArea: lambda must be nonnegative");
    if (lambda == 0.0) return 0.0;
    const double t0 = pulse.windowStart * pulse.timeScale;
    const double t1 = pulse.windowEnd * pulse.timeScale;
    const double integral =
        integrate1d([&pulse](double t) { return pulse.envelope(t); }, t0, t1, 1e-12);
    return 2.0 * lambda * integral;
}

CayleyKlein resonantCk(const PulseSpec& pulse, double lambda) {
    const double area = pulseArea(pulse, lambda);
    CayleyKlein ck;
    ck.a = std::cos(0.5 * area);
    ck.b = cplx(0.0, -std::sin(0.5 * area));
    return ck;
}

CayleyKlein rosenZenerCk(double lambdaT, double deltaT) {
    if (lambdaT < 0.0) throw std::invalid_argument("rosenZenerCk: lambdaT must be nonnegative");
    CayleyKlein ck;
    if (deltaT == 0.0) {
        ck.a = std::cos(kPi * lambdaT);
    } else {
        const cplx z0(0.5, 0.5 * deltaT);
        ck.a = std::exp(2.0 * logGamma(z0) - logGamma(z0 + lambdaT) - logGamma(z0 - lambdaT));
    }
    ck.b = cplx(0.0, -std::sin(kPi * lambdaT) * sech(0.5 * kPi * deltaT));
    return ck;
}

CayleyKlein withWindowPhase(CayleyKlein ck, double delta) {
    ck.b *= std::exp(cplx(0.0, -0.5 * delta));
    ck.delta = delta;
    return ck;
}

double rzPhase(int l, double deltaT) {
    if (l < 0) throw std::invalid_argument("rzPhase: l must be nonnegative");
    double phi = 0.0;
    for (int k = 0; k < l; ++k) phi += 2.0 * std::atan2(2.0 * k + 1.0, deltaT);
    double r = std::remainder(phi, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

double farOffPhase(const PulseSpec& pulse, double lambda, double delta, bool* warning) {
    pulse.validate();
    if (delta == 0.0) throw std::domain_error("farOffPhase: detuning must be nonzero");
    if (warning) *warning = std::abs(delta) < 5.0 * std::abs(lambda);
    return lambda * lambda / delta * pulse.envelopeSquaredIntegral();
}

namespace {

// Unreduced RZ phase for integer coupling l: monotone decreasing in ΔT on
// [0, ∞), from lπ down to 0.
double rzPhaseUnreduced(int l, double deltaT) {
    double phi = 0.0;
    for (int k = 0; k < l; ++k) phi += 2.0 * std::atan2(2.0 * k + 1.0, deltaT);
    return phi;
}

}  // namespace

DesignResult designRealization(const std::vector<double>& targets, DesignMode mode,
                               const PulseSpec& pulse, double delta, int l) {
    if (targets.empty()) throw std::invalid_argument("designRealization: no target phases");
    DesignResult res;
    res.mode = mode;

    if (mode == DesignMode::RosenZener) {
        const double target = targets.front();
        for (double t : targets)
            if (std::abs(t - target) > 1e-12)
                throw std::invalid_argument(
                    "designRealization: rosen_zener supports only equal target phases");
        if (l < 1) throw std::invalid_argument("designRealization: l must be >= 1");
        if (!(target > 0.0) || target > l * kPi + 1e-12)
            throw std::domain_error("designRealization: target phase outside (0, l*pi]");

        res.pulseOrder = l;
        if (target >= l * kPi) {
            res.deltaT = 0.0;  // resonant limit
        } else {
            double lo = 0.0;       // phi(lo) = l*pi >= target
            double hi = 1.0;
            while (rzPhaseUnreduced(l, hi) > target) hi *= 2.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (rzPhaseUnreduced(l, mid) > target)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
            }
            res.deltaT = 0.5 * (lo + hi);
        }
        res.lambdaT.assign(targets.size(), static_cast<double>(l));
        return res;
    }

    // FarOff: λ² = φ·Δ / ∫f²
    if (delta == 0.0) throw std::domain_error("designRealization: far_off requires nonzero detuning");
    const double integral = pulse.envelopeSquaredIntegral();
    for (double phi : targets) {
        const double lambdaSq = phi * delta / integral;
        if (lambdaSq < 0.0)
            throw std::domain_error(
                "designRealization: target phase and detuning have opposite signs");
        res.lambdaSq.push_back(lambdaSq);
        res.lambdaT.push_back(std::sqrt(lambdaSq) * pulse.timeScale);
    }
    return res;
}

}  // namespace qhr
