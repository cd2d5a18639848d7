#pragma once
// Mochon's width-k ladder: the bivariate polynomial f, per-height rung
// functions, the assembled ladder pair (h_lad, v_lad), the axis split
// distribution with its normalization C, exact evaluation of the split
// inequality, minimal-alpha search, and full TIPG assembly.

#include <stdexcept>
#include <utility>
#include <vector>

#include "mforge/point_game.hpp"
#include "mforge/validity.hpp"

namespace mforge {

struct LadderParams {
    int k = 1;          // ladder width
    Rational omega;     // grid step; 1/omega must be an integer
    long gamma = 0;     // top grid index
    long zeta = 0;      // final-point grid index, alpha = zeta * omega
    Rational C;         // split normalization, sum_j split(j) = 1/2

    Rational alpha() const { return Rational(zeta) * omega; }

    // Validates invariants and computes C. Throws std::invalid_argument on
    // malformed parameters, NonpositiveSplitWeight when some split(j) <= 0.
    static LadderParams make(int k, const Rational& omega, long gamma, long zeta);
};

struct NonpositiveSplitWeight : std::runtime_error {
    long j;
    explicit NonpositiveSplitWeight(long j_)
        : std::runtime_error("split(" + std::to_string(j_) + ") <= 0"), j(j_) {}
};

struct NoAdmissibleAlpha : std::runtime_error {
    NoAdmissibleAlpha() : std::runtime_error("no admissible alpha on the grid") {}
};

struct IdentityMismatch : std::runtime_error {
    explicit IdentityMismatch(const std::string& what) : std::runtime_error(what) {}
};

// f(x,y) = (-1)^(k+1) prod_{i=1}^{k-1} (alpha-i w-x)(alpha-i w-y)
//                     prod_{i=1}^{k}   (Gamma w+i w-x)(Gamma w+i w-y)
Rational f_eval(const LadderParams& p, const Rational& x, const Rational& y);

// The 2k+1-point line function of the rung at height j*omega:
//   weight -C f(0,jw) / prod_{l=-k}^{k} ((j+l)w)          at x = 0
//   weight  C f((j+i)w, jw)
//           / [ ((j+i)w)(jw) prod_{l != i, l != 0} ((l-i)w) ]
//                                                          at x = (j+i)w
// for i in {-k..k} \ {0}. Requires zeta <= j <= gamma.
SupportFunction1D rung_function(const LadderParams& p, long j);

// h_lad = sum_j rung(j) at height y = j*omega; v_lad(x,y) = h_lad(y,x)
// (h_lad is antisymmetric off the axes, so this equals -h_lad pointwise
// on the overlap).
// Postcondition (checked, IdentityMismatch on internal bug):
//   h_lad + v_lad = 1/2[alpha-kw, alpha] + 1/2[alpha, alpha-kw]
//                   - sum_j split(j) ([0,jw] + [jw,0])
std::pair<SupportFunction2D, SupportFunction2D> build_ladder(const LadderParams& p);

// split(j) = C f(0,jw) / prod_{l=-k}^{k} ((j+l)w), for j = zeta..gamma.
// All entries positive, summing to exactly 1/2.
std::vector<std::pair<long, Rational>> split_distribution(const LadderParams& p);

// Exact evaluation of sum_j p(jw) > sum_j p(jw)/(jw) with
//   p(jw) = prod_{i=1}^{k-1} (jw-(alpha-iw))/(alpha-iw)
//           prod_{i=1}^{k}   (Gw+iw-jw)/(Gw+iw)
//           prod_{i=-k}^{k}  1/((j+i)w)
bool check_split_inequality(const LadderParams& p);

// Least zeta with zeta*omega > 1/2 such that the split distribution is
// positive and both axis splits pass the generic validity checker.
// Throws NoAdmissibleAlpha when no zeta <= gamma works.
std::pair<long, Rational> find_min_alpha(int k, const Rational& omega, long gamma);

// Full TIPG: ladder + the two axis splits + the final raise to 1[alpha,alpha].
// h + v = 1[alpha,alpha] - 1/2[0,1] - 1/2[1,0] holds exactly.
Tipg build_tipg(int k, const Rational& omega, long gamma, long zeta);
Tipg build_tipg(const LadderParams& p);

// Serial reference for the parallel ladder construction (benchmark/tests).
std::pair<SupportFunction2D, SupportFunction2D> build_ladder_serial(
    const LadderParams& p);

}  // namespace mforge
