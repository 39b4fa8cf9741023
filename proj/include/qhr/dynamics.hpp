#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qhr/linalg.hpp"
#include "qhr/mirrors.hpp"
#include "qhr/morris_shore.hpp"
#include "qhr/two_state.hpp"

namespace qhr {

/// Full (N+M)-state Schrödinger problem with the shared envelope and
/// common constant detuning.
struct SimulationProblem {
    InteractionMatrix interaction;
    PulseSpec pulse;
    DetuningSpec detuning;
    Vec initialState;  ///< dim N+M, unit norm
    std::size_t sampleCount = 201;
};

struct Trajectory {
    std::vector<double> times;                     ///< units of T
    std::vector<std::vector<double>> populations;  ///< per-time |C_n|²
    Vec finalState;
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// H(t): zero N-block, V f(t) off-diagonal blocks, Δ(t) I upper block.
Matrix buildHamiltonian(const InteractionMatrix& v, const PulseSpec& pulse,
                        const DetuningSpec& detuning, double t);

/// Adaptive Dormand-Prince 5(4) integration of i dC/dt = H(t) C.
Trajectory integrate(const SimulationProblem& problem, double relTol);

/// Numerical propagator over the pulse window, column by column.
Matrix integratePropagator(const InteractionMatrix& v, const PulseSpec& pulse,
                           const DetuningSpec& detuning, double relTol);

/// Max componentwise deviation between integrated final states and the
/// block propagator applied to the same initial states (default: all
/// basis states).
double compareAnalytic(const SimulationProblem& problem, const BlockPropagator& block,
                       double relTol, const std::vector<Vec>* initialStates = nullptr);

}  // namespace qhr
