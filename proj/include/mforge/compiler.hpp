#pragma once
// TIPG -> sequential point game with valid transitions, the
// valid -> strictly-valid epsilon-shift, and resource accounting.

#include <stdexcept>

#include "mforge/point_game.hpp"

namespace mforge {

struct CompilerPlan {
    Rational epsilon;      // final-point slack
    Rational gamma;        // catalyst weight  delta*m/(2(1-delta)(a+b))
    Rational gamma_prime;  // 1/ceil(1/gamma)
    Rational m;            // min over supp(v^-) of max{x,y}
    Rational a, b;         // catalyst axis masses, a+b = |v^-|
    Rational m_x, m_y;     // secondary split targets
    Rational n_x, n_y;     // raise targets dominating all of xi
    Rational delta;        // eps^2 / ((n_x-beta)(n_y-alpha))
    Rational delta_prime;  // eps/(n_x-beta) * (1 - eps/(n_y-alpha))
    long loop_count = 0;   // ceil(1/gamma)
    long transitions = 0;  // emitted transition count
    bool catalyst_degenerate = false;  // v^- empty: raises-only path
};

struct InfeasibleEpsilon : std::runtime_error {
    InfeasibleEpsilon() : std::runtime_error("epsilon forces delta+delta' >= 1") {}
};

struct CatalystRouteDegenerate : std::runtime_error {
    CatalystRouteDegenerate()
        : std::runtime_error(
              "catalyst creation needs both axis routes populated when m < 1") {}
};

// Emits the full frame sequence realizing
//   1/2[0,1] + 1/2[1,0] -> 1[beta+eps, alpha+eps].
// Orientations alternate starting Vertical. Every transition is valid by
// construction (re-verifiable with check_point_game).
std::pair<PointGame, CompilerPlan> tipg_to_sequential(const Tipg& t,
                                                      const Rational& epsilon);

struct RoundCount {
    long exact = 0;        // emitted transition count
    Rational envelope;     // |h| Gamma^2 / eps^2 reporting envelope
};

RoundCount count_rounds(const Tipg& t, const Rational& epsilon);

// Shifts frames cumulatively by eps/#H per horizontal and eps/#V per
// vertical transition: every valid transition becomes strictly valid and
// the final point moves to [beta+eps, alpha+eps].
PointGame shift_to_strict(const PointGame& g, const Rational& epsilon);

struct ResourceReport {
    long qubits = 0;
    long rounds = 0;
    std::size_t support_a = 0;  // |S_A|, distinct x-coordinates
    std::size_t support_b = 0;  // |S_B|, distinct y-coordinates
};

// qubits = ceil(log2 2|S_A|) + ceil(log2 |S_A||S_B|) + ceil(log2 2|S_B|).
ResourceReport resource_report(const PointGame& g);

}  // namespace mforge
