// TIPG -> sequential game compilation, the strictness shift, and resource
// accounting.

#include <doctest.h>

#include "mforge/compiler.hpp"
#include "mforge/ladder.hpp"
#include "mforge/validity.hpp"

using namespace mforge;

namespace {

Tipg small_ladder_tipg() {
    auto [zeta, alpha] = find_min_alpha(1, Rational(1, 8), 32);
    (void)alpha;
    return build_tipg(1, Rational(1, 8), 32, zeta);
}

}  // namespace

TEST_CASE("compiled ladder game is valid with the right endpoints") {
    Tipg t = small_ladder_tipg();
    const Rational eps(1, 20);
    auto [g, plan] = tipg_to_sequential(t, eps);

    CHECK(g.frames.front() == initial_distribution());
    REQUIRE(g.frames.back().size() == 1);
    const auto& [fp, fw] = *g.frames.back().entries().begin();
    CHECK(fw == 1);
    CHECK(fp.x == t.final_point.x + eps);
    CHECK(fp.y == t.final_point.y + eps);

    // Orientations strictly alternate starting vertical.
    REQUIRE(g.orientations.front() == Orientation::Vertical);
    for (std::size_t i = 1; i < g.orientations.size(); ++i)
        CHECK(g.orientations[i] == flipped(g.orientations[i - 1]));

    // Transition count matches the plan and the 10 + 2N formula.
    CHECK(plan.transitions == static_cast<long>(g.transition_count()));
    CHECK(plan.transitions == 10 + 2 * plan.loop_count);
    CHECK(plan.gamma_prime == Rational(1, plan.loop_count));
    CHECK(plan.loop_count == ceil_int(1 / plan.gamma).get_si());
    CHECK(plan.delta + plan.delta_prime < 1);
    CHECK(!plan.catalyst_degenerate);

    // Every transition is valid (exact re-verification).
    GameReport r = check_point_game(g);
    CHECK(r.structure_ok);
    CHECK(r.all_valid);
}

TEST_CASE("round count formula") {
    Tipg t = small_ladder_tipg();
    const Rational eps(1, 10);
    RoundCount rc = count_rounds(t, eps);
    auto [g, plan] = tipg_to_sequential(t, eps);
    CHECK(rc.exact == plan.transitions);
    CHECK(rc.envelope > 0);
}

TEST_CASE("oversized epsilon still compiles to a valid game") {
    // n_x and n_y are always chosen above beta+eps / alpha+eps, so
    // delta + delta' = eps / (n_x - beta) < 1 for every eps: the final point
    // simply lands far out at [beta+eps, alpha+eps].
    Tipg t = small_ladder_tipg();
    auto [g, plan] = tipg_to_sequential(t, Rational(10));
    CHECK(plan.delta + plan.delta_prime < 1);
    const auto& [fp, fw] = *g.frames.back().entries().begin();
    CHECK(fw == 1);
    CHECK(fp.x == t.final_point.x + 10);
    CHECK(check_point_game(g).all_valid);
}

TEST_CASE("strictness shift keeps validity and moves the endpoint") {
    // Small hand-made game: every transition valid, some only weakly.
    const Rational h(1, 2), q(1, 4), tq(3, 4), tt(2, 3);
    SupportFunction2D f1, f2, f3, f4;
    f1.add(0, 1, h);
    f1.add(tt, 0, q);
    f1.add(2, 0, q);
    f2.add(0, 1, h);
    f2.add(tt, 0, q);
    f2.add(2, 1, q);
    f3.add(tt, 0, q);
    f3.add(tt, 1, tq);
    f4.add(tt, tq, 1);
    PointGame g;
    g.frames = {initial_distribution(), f1, f2, f3, f4};
    g.orientations = {Orientation::Horizontal, Orientation::Vertical,
                      Orientation::Horizontal, Orientation::Vertical};
    REQUIRE(check_point_game(g).all_valid);
    REQUIRE(!check_point_game(g).all_strictly_valid);

    const Rational eps(1, 100);
    PointGame s = shift_to_strict(g, eps);
    REQUIRE(s.frames.size() == g.frames.size());
    CHECK(s.frames.front() == g.frames.front());
    GameReport r = check_point_game(s);
    CHECK(r.all_valid);
    CHECK(r.all_strictly_valid);
    // Final point lands at exactly (+eps, +eps).
    const auto& [fp, fw] = *s.frames.back().entries().begin();
    CHECK(fw == 1);
    CHECK(fp.x == tt + eps);
    CHECK(fp.y == tq + eps);
}

TEST_CASE("resource accounting") {
    // The 4-transition example: S_A = {0, 2/3, 1, 2}, S_B = {0, 3/4, 1}.
    const Rational h(1, 2), q(1, 4), tq(3, 4), tt(2, 3);
    SupportFunction2D f1, f2, f3, f4;
    f1.add(0, 1, h);
    f1.add(tt, 0, q);
    f1.add(2, 0, q);
    f2.add(0, 1, h);
    f2.add(tt, 0, q);
    f2.add(2, 1, q);
    f3.add(tt, 0, q);
    f3.add(tt, 1, tq);
    f4.add(tt, tq, 1);
    PointGame g;
    g.frames = {initial_distribution(), f1, f2, f3, f4};
    g.orientations = {Orientation::Horizontal, Orientation::Vertical,
                      Orientation::Horizontal, Orientation::Vertical};
    ResourceReport r = resource_report(g);
    CHECK(r.support_a == 4);
    CHECK(r.support_b == 3);
    CHECK(r.rounds == 4);
    // ceil(log2 8) + ceil(log2 12) + ceil(log2 6) = 3 + 4 + 3.
    CHECK(r.qubits == 10);
}
