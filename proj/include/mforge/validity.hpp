#pragma once
// Validity / strict validity of line functions and 2-D transitions.
// A finite-support function h on [0,inf) is valid iff sum h = 0 and, for
// every lambda > 0, sum_x -h(x)/(lambda+x) >= 0 (strictly valid: > 0).
// The test is decided exactly through the polynomial
//   P(lambda) = -sum_i w_i prod_{j != i} (lambda + x_j),
// whose top nonvanishing coefficient equals sum_x x h(x), so the
// lambda -> infinity condition is subsumed.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mforge/point_game.hpp"
#include "mforge/polynomial.hpp"

namespace mforge {

enum class Validity { StrictlyValid, Valid, Invalid };

struct NonzeroSum {
    Rational total;
};
struct LambdaWitness {
    Rational lambda;
    Rational value;  // sum_x -h(x)/(lambda+x) at the witness, < 0
};
struct OriginWeight {};
using Violation = std::variant<NonzeroSum, LambdaWitness, OriginWeight>;

struct ValidityVerdict {
    Validity status = Validity::Valid;
    std::optional<Violation> violation;  // present iff Invalid

    bool at_least_valid() const { return status != Validity::Invalid; }
    bool strict() const { return status == Validity::StrictlyValid; }
};

std::string to_string(const ValidityVerdict& v);

// Verdict for a single line function (the empty function is Valid, not
// StrictlyValid). Duplicate coordinates are merged before the test.
ValidityVerdict check_line(const SupportFunction1D& h);

// Redundant debug oracle: evaluates sum_x -h(x)/(lambda+x) at one lambda.
Rational line_dual_value(const SupportFunction1D& h, const Rational& lambda);

// Always uses the polynomial (Sturm) decision path, bypassing the closed-form
// shortcut for large split/merge-shaped lines. Exposed for cross-checking.
ValidityVerdict check_line_polynomial(const SupportFunction1D& h);

struct LineVerdict {
    Rational line;  // the fixed coordinate (y for horizontal, x for vertical)
    ValidityVerdict verdict;
};

// Groups after - before by the fixed coordinate and checks each line.
// Any weight at [0,0] on either side yields an Invalid(OriginWeight) entry.
std::vector<LineVerdict> check_transition(const Transition& t);

// Aggregate of a list of line verdicts: Invalid dominates, then Valid.
ValidityVerdict aggregate(const std::vector<LineVerdict>& lines);

enum class ElementaryKind { Raise, Merge, Split };

struct ElementaryData {
    // Raise: source = {(x,w)}, targets = {(x',w)}
    // Merge: source = {(x1,w1),(x2,w2),...}, targets = {(x3, sum w)}
    // Split: source = {(x,w)}, targets = {(x1,w1),(x2,w2),...}
    std::vector<std::pair<Rational, Rational>> source;   // (coord, weight)
    std::vector<std::pair<Rational, Rational>> targets;  // (coord, weight)
};

struct ZeroCoordinateInSplit : std::runtime_error {
    ZeroCoordinateInSplit() : std::runtime_error("split target at coordinate 0") {}
};

// Closed-form elementary-transition conditions (exact):
//   Raise  w[x] -> w[x']           valid iff x' >= x
//   Merge  sum w_i[x_i] -> w[x3]   valid iff x3 >= (sum w_i x_i)/(sum w_i)
//   Split  w[x] -> sum w_i[x_i]    valid iff sum w_i = w and
//                                  w/x >= sum w_i/x_i  (multi-way form)
bool check_elementary(ElementaryKind kind, const ElementaryData& d);

struct GameReport {
    bool structure_ok = true;                // initial/final frame shape
    std::vector<std::string> structural_failures;
    std::vector<std::pair<std::size_t, LineVerdict>> invalid_lines;  // (transition, line)
    bool all_valid = false;
    bool all_strictly_valid = false;
    std::string summary() const;
};

GameReport check_point_game(const PointGame& g);

struct TipgReport {
    bool identity_ok = false;                    // h + v = final - initial
    SupportFunction2D identity_residual;         // exact residual when not
    std::vector<LineVerdict> h_failures;         // invalid y-lines of h
    std::vector<LineVerdict> v_failures;         // invalid x-lines of v
    bool h_valid = false;
    bool v_valid = false;
    bool ok() const { return identity_ok && h_valid && v_valid; }
    std::string summary() const;
};

TipgReport check_tipg(const Tipg& t);

}  // namespace mforge
