#include "qhr/linkages.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qhr {

namespace {

bool isHalfInteger(double j) { return std::abs(2.0 * j - std::round(2.0 * j)) < 1e-9; }

long double factorial(int n) {
    static std::vector<long double> table{1.0L};
    while (static_cast<int>(table.size()) <= n)
        table.push_back(table.back() * static_cast<long double>(table.size()));
    return table[n];
}

int twice(double j) { return static_cast<int>(std::llround(2.0 * j)); }

}  // namespace

double clebschGordan(double j1, double m1, double j2, double m2, double bigJ, double bigM) {
    for (double x : {j1, m1, j2, m2, bigJ, bigM})
        if (!isHalfInteger(x)) throw std::invalid_argument("clebschGordan: not a half-integer");
    if (j1 < 0 || j2 < 0 || bigJ < 0 || std::abs(m1) > j1 + 1e-9 || std::abs(m2) > j2 + 1e-9 ||
        std::abs(bigM) > bigJ + 1e-9)
        throw std::invalid_argument("clebschGordan: |m| exceeds j");
    if ((twice(j1) + twice(m1)) % 2 != 0 || (twice(j2) + twice(m2)) % 2 != 0 ||
        (twice(bigJ) + twice(bigM)) % 2 != 0)
        throw std::invalid_argument("clebschGordan: j and m differ by a non-integer");

    if (twice(m1) + twice(m2) != twice(bigM)) return 0.0;
    // Triangle condition, and j1+j2+J integer.
    if ((twice(j1) + twice(j2) + twice(bigJ)) % 2 != 0) return 0.0;
    if (bigJ > j1 + j2 + 1e-9 || bigJ < std::abs(j1 - j2) - 1e-9) return 0.0;

    // Racah closed form. All factorial arguments below are exact integers.
    auto f = [](double x) { return factorial(static_cast<int>(std::llround(x))); };

    const long double triangle = f(j1 + j2 - bigJ) * f(j1 - j2 + bigJ) * f(-j1 + j2 + bigJ) /
                                 f(j1 + j2 + bigJ + 1);
    const long double prefactor =
        std::sqrt(static_cast<long double>(2.0 * bigJ + 1.0) * triangle * f(bigJ + bigM) *
                  f(bigJ - bigM) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2));

    long double sum = 0.0L;
    const int kmin = std::max({0, twice(j2 - bigJ - m1) / 2, twice(j1 + m2 - bigJ) / 2});
    const int kmax = std::min({twice(j1 + j2 - bigJ) / 2, twice(j1 - m1) / 2, twice(j2 + m2) / 2});
    for (int k = kmin; k <= kmax; ++k) {
        const long double denom = factorial(k) * f(j1 + j2 - bigJ - k) * f(j1 - m1 - k) *
                                  f(j2 + m2 - k) * f(bigJ - j2 + m1 + k) * f(bigJ - j1 - m2 + k);
        sum += (k % 2 == 0 ? 1.0L : -1.0L) / denom;
    }
    return static_cast<double>(prefactor * sum);
}

LinkageSpec LinkageSpec::twoLevel(double jLower, double jUpper, PolarizationAmplitudes pol) {
    LinkageSpec s;
    s.kind = Kind::TwoLevel;
    s.jLower = jLower;
    s.jUpper = jUpper;
    s.pol = pol;
    return s;
}

LinkageSpec LinkageSpec::ladder010(PolarizationAmplitudes first, PolarizationAmplitudes second) {
    LinkageSpec s;
    s.kind = Kind::Ladder010;
    s.pol = first;
    s.polSecond = second;
    return s;
}

LinkageSpec LinkageSpec::explicitMatrix(Matrix v) {
    LinkageSpec s;
    s.kind = Kind::Explicit;
    s.explicitV = std::move(v);
    return s;
}

namespace {

std::vector<std::vector<int>> connectedComponents(const Matrix& v) {
    const int n = static_cast<int>(v.rows());
    const int m = static_cast<int>(v.cols());
    std::vector<int> label(n + m, -1);
    int next = 0;
    for (int s = 0; s < n + m; ++s) {
        if (label[s] >= 0) continue;
        std::vector<int> stack{s};
        label[s] = next;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            if (x < n) {
                for (int j = 0; j < m; ++j)
                    if (v(x, j) != cplx{} && label[n + j] < 0) {
                        label[n + j] = next;
                        stack.push_back(n + j);
                    }
            } else {
                for (int i = 0; i < n; ++i)
                    if (v(i, x - n) != cplx{} && label[i] < 0) {
                        label[i] = next;
                        stack.push_back(i);
                    }
            }
        }
        ++next;
    }
    std::vector<std::vector<int>> comps(next);
    for (int x = 0; x < n + m; ++x) comps[label[x]].push_back(x);
    return comps;
}

cplx polarizationAmplitude(const PolarizationAmplitudes& pol, int q) {
    switch (q) {
        case 1:
            return pol.plus;
        case 0:
            return pol.zero;
        case -1:
            return pol.minus;
        default:
            return cplx{};
    }
}

}  // namespace

LinkageResult buildLinkage(const LinkageSpec& spec) {
    LinkageResult res;
    Matrix v;

    switch (spec.kind) {
        case LinkageSpec::Kind::TwoLevel: {
            if (!isHalfInteger(spec.jLower) || !isHalfInteger(spec.jUpper) || spec.jLower < 0 ||
                spec.jUpper < 0)
                throw std::invalid_argument("buildLinkage: J values must be nonnegative half-integers");
            if (std::abs(spec.jLower - spec.jUpper) > 1.0 + 1e-9)
                throw std::invalid_argument("buildLinkage: |J_lower - J_upper| must be <= 1");
            const int n = twice(spec.jLower) + 1;
            const int m = twice(spec.jUpper) + 1;
            v = Matrix(n, m);
            for (int i = 0; i < n; ++i) {
                const double ml = -spec.jLower + i;
                res.lowerM.push_back(ml);
                for (int j = 0; j < m; ++j) {
                    const double mu = -spec.jUpper + j;
                    const int q = static_cast<int>(std::llround(mu - ml));
                    if (q < -1 || q > 1) continue;  // electric-dipole selection rule
                    const cplx amp = polarizationAmplitude(spec.pol, q);
                    if (amp == cplx{}) continue;
                    v(i, j) = clebschGordan(spec.jLower, ml, 1.0, q, spec.jUpper, mu) * amp;
                }
            }
            for (int j = 0; j < m; ++j) res.upperM.push_back(-spec.jUpper + j);
            break;
        }
        case LinkageSpec::Kind::Ladder010: {
            // The J=1 sublevels form the lower set; the two J=0 ends are
            // the upper set, each driven by its own field.
            v = Matrix(3, 2);
            for (int i = 0; i < 3; ++i) {
                const int ml = i - 1;
                const int q = -ml;  // couples to m = 0
                v(i, 0) = polarizationAmplitude(spec.pol, q);
                v(i, 1) = polarizationAmplitude(spec.polSecond, q);
                res.lowerM.push_back(ml);
            }
            res.upperM = {0.0, 0.0};
            break;
        }
        case LinkageSpec::Kind::Explicit:
            v = spec.explicitV;
            res.lowerM.assign(v.rows(), 0.0);
            res.upperM.assign(v.cols(), 0.0);
            break;
    }

    if (v.maxAbs() == 0.0) throw std::invalid_argument("buildLinkage: all couplings are zero");
    res.components = connectedComponents(v);
    res.interaction = makeInteractionMatrix(std::move(v));
    if (res.interaction.swapped) std::swap(res.lowerM, res.upperM);
    return res;
}

}  // namespace qhr
