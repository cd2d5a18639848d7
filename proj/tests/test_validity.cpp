// Exact validity decisions: line functions, elementary closed forms,
// transitions, whole games, and TIPGs.

#include <doctest.h>

#include "mforge/validity.hpp"

using namespace mforge;

namespace {

SupportFunction1D line(std::initializer_list<std::pair<Rational, Rational>> es) {
    SupportFunction1D f;
    for (const auto& [x, w] : es) f.add(x, w);
    return f;
}

PointGame example_game();  // defined below, shared by the game-level cases

}  // namespace

TEST_CASE("empty and trivial lines") {
    CHECK(check_line(SupportFunction1D{}).status == Validity::Valid);
    // Pure point deletion does not conserve weight.
    auto v = check_line(line({{1, Rational(-1)}}));
    REQUIRE(v.status == Validity::Invalid);
    REQUIRE(v.violation);
    CHECK(std::get<NonzeroSum>(*v.violation).total == -1);
}

TEST_CASE("raises are strictly valid, lowers are not") {
    CHECK(check_line(line({{1, -1}, {2, 1}})).strict());
    CHECK(check_line(line({{0, -1}, {1, 1}})).strict());
    auto v = check_line(line({{2, -1}, {1, 1}}));
    REQUIRE(v.status == Validity::Invalid);
    // The witness must certify: sum -h(x)/(lambda+x) < 0 at the witness.
    const auto& w = std::get<LambdaWitness>(*v.violation);
    CHECK(line_dual_value(line({{2, -1}, {1, 1}}), w.lambda) == w.value);
    CHECK(w.value < 0);
}

TEST_CASE("two-way split boundary cases") {
    // 1/2[1] -> w1[2/3] + w2[2] is valid iff 1/2 >= w1*3/2 + w2/2.
    // Equality: w1 = 1/4, w2 = 1/4 gives 3/8 + 1/8 = 1/2.
    // The dual value is 0 only in the lambda -> 0 limit, which lies off the
    // open axis, so the equality case is still strictly valid.
    auto boundary = line({{1, Rational(-1, 2)}, {Rational(2, 3), Rational(1, 4)}, {2, Rational(1, 4)}});
    auto v = check_line(boundary);
    CHECK(v.strict());

    // Push a little more weight to the low point: invalid, with witness.
    auto bad = line({{1, Rational(-1, 2)},
                     {Rational(2, 3), Rational(26, 100)},
                     {2, Rational(24, 100)}});
    auto vb = check_line(bad);
    REQUIRE(vb.status == Validity::Invalid);
    const auto& w = std::get<LambdaWitness>(*vb.violation);
    CHECK(line_dual_value(bad, w.lambda) < 0);

    // Pull weight back: strictly valid.
    auto good = line({{1, Rational(-1, 2)},
                      {Rational(2, 3), Rational(24, 100)},
                      {2, Rational(26, 100)}});
    CHECK(check_line(good).strict());
}

TEST_CASE("merges are valid at or above the mean") {
    // 1/2[0] + 1/4[2] -> 3/4[x3]: mean = (0 + 1/2) / (3/4) = 2/3.
    auto at_mean = line({{0, Rational(-1, 2)}, {2, Rational(-1, 4)}, {Rational(2, 3), Rational(3, 4)}});
    CHECK(check_line(at_mean).status == Validity::Valid);
    CHECK(!check_line(at_mean).strict());
    auto above = line({{0, Rational(-1, 2)}, {2, Rational(-1, 4)}, {Rational(3, 4), Rational(3, 4)}});
    CHECK(check_line(above).strict());
    auto below = line({{0, Rational(-1, 2)}, {2, Rational(-1, 4)}, {Rational(1, 2), Rational(3, 4)}});
    CHECK(check_line(below).status == Validity::Invalid);
}

TEST_CASE("closed-form and polynomial paths agree") {
    // Exercise check_line_polynomial directly on split/merge shapes that the
    // fast path would otherwise take (small instances use Sturm anyway, so
    // this doubles as a cross-check of the decision itself).
    std::vector<SupportFunction1D> cases = {
        line({{1, Rational(-1, 2)}, {Rational(2, 3), Rational(1, 4)}, {2, Rational(1, 4)}}),
        line({{0, Rational(-1, 2)}, {2, Rational(-1, 4)}, {Rational(2, 3), Rational(3, 4)}}),
        line({{2, -1}, {1, 1}}),
        line({{1, -1}, {3, 1}}),
        line({{Rational(1, 3), Rational(-1)}, {Rational(1, 4), Rational(1, 2)}, {Rational(1, 2), Rational(1, 2)}}),
    };
    for (const auto& c : cases) {
        auto a = check_line(c);
        auto b = check_line_polynomial(c);
        CHECK(a.status == b.status);
    }
}

TEST_CASE("elementary closed forms") {
    using K = ElementaryKind;
    // Raise
    CHECK(check_elementary(K::Raise, {{{1, Rational(1, 2)}}, {{2, Rational(1, 2)}}}));
    CHECK(check_elementary(K::Raise, {{{1, 1}}, {{1, 1}}}));
    CHECK(!check_elementary(K::Raise, {{{2, 1}}, {{1, 1}}}));
    // Merge: target at the exact mean or above
    CHECK(check_elementary(K::Merge, {{{0, Rational(1, 2)}, {2, Rational(1, 4)}},
                                      {{Rational(2, 3), Rational(3, 4)}}}));
    CHECK(!check_elementary(K::Merge, {{{0, Rational(1, 2)}, {2, Rational(1, 4)}},
                                       {{Rational(1, 2), Rational(3, 4)}}}));
    // Split: harmonic-mean condition
    CHECK(check_elementary(K::Split, {{{1, Rational(1, 2)}},
                                      {{Rational(2, 3), Rational(1, 4)}, {2, Rational(1, 4)}}}));
    CHECK(!check_elementary(K::Split, {{{1, Rational(1, 2)}},
                                       {{Rational(1, 2), Rational(1, 4)}, {2, Rational(1, 4)}}}));
    // Split conserves weight
    CHECK(!check_elementary(K::Split, {{{1, Rational(1, 2)}},
                                       {{Rational(2, 3), Rational(1, 4)}, {2, Rational(1, 2)}}}));
    // Split target at 0 is outlawed
    CHECK_THROWS_AS(check_elementary(K::Split, {{{1, 1}}, {{0, Rational(1, 2)}, {2, Rational(1, 2)}}}),
                    ZeroCoordinateInSplit);
}

TEST_CASE("transitions group by the fixed coordinate") {
    // Horizontal transition moving mass on two y-lines at once.
    Transition t;
    t.orientation = Orientation::Horizontal;
    t.before.add(1, 0, Rational(1, 2));
    t.before.add(1, 1, Rational(1, 2));
    t.after.add(2, 0, Rational(1, 2));
    t.after.add(Rational(1, 2), 1, Rational(1, 2));  // lower: invalid
    auto lines = check_transition(t);
    REQUIRE(lines.size() == 2);
    CHECK(aggregate(lines).status == Validity::Invalid);
    bool found = false;
    for (const auto& lv : lines)
        if (lv.line == 1) {
            found = true;
            CHECK(lv.verdict.status == Validity::Invalid);
        } else {
            CHECK(lv.verdict.strict());
        }
    CHECK(found);
}

TEST_CASE("origin weight is rejected") {
    Transition t;
    t.orientation = Orientation::Horizontal;
    t.before.add(0, 0, Rational(1));
    t.after.add(1, 0, Rational(1));
    auto lines = check_transition(t);
    auto agg = aggregate(lines);
    REQUIRE(agg.status == Validity::Invalid);
    bool origin = false;
    for (const auto& lv : lines)
        if (lv.verdict.violation &&
            std::holds_alternative<OriginWeight>(*lv.verdict.violation))
            origin = true;
    CHECK(origin);
}

namespace {

PointGame example_game() {
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
    return g;
}

}  // namespace

TEST_CASE("the worked example game is valid end to end") {
    GameReport r = check_point_game(example_game());
    CHECK(r.structure_ok);
    CHECK(r.all_valid);
    CHECK(r.invalid_lines.empty());
    // Boundary split and merges: valid but not strictly valid.
    CHECK(!r.all_strictly_valid);
}

TEST_CASE("a broken game is pinpointed") {
    PointGame g = example_game();
    // Sabotage the raise: lower 1/4[2,0] to 1/4[2,1'] with a smaller x... move
    // the raised point left instead of up.
    SupportFunction2D f2;
    f2.add(0, 1, Rational(1, 2));
    f2.add(Rational(2, 3), 0, Rational(1, 4));
    f2.add(1, 1, Rational(1, 4));  // was [2,1]: an x-move inside a V transition
    g.frames[2] = f2;
    GameReport r = check_point_game(g);
    CHECK(!r.all_valid);
    REQUIRE(!r.invalid_lines.empty());
    CHECK(r.invalid_lines.front().first >= 1);
}

TEST_CASE("game structure checks") {
    PointGame g = example_game();
    g.frames.front() = SupportFunction2D{};
    GameReport r = check_point_game(g);
    CHECK(!r.structure_ok);
    CHECK(!r.structural_failures.empty());
}

TEST_CASE("tipg report verifies the identity and both functions") {
    // Minimal hand-built TIPG: raise both initial points to [1,1].
    Tipg t;
    t.final_point = {Rational(1), Rational(1)};
    t.h.add(0, 1, Rational(-1, 2));
    t.h.add(1, 1, Rational(1, 2));
    t.v.add(1, 0, Rational(-1, 2));
    t.v.add(1, 1, Rational(1, 2));
    TipgReport r = check_tipg(t);
    CHECK(r.identity_ok);
    CHECK(r.h_valid);
    CHECK(r.v_valid);
    CHECK(r.ok());

    // Break the identity.
    Tipg bad = t;
    bad.final_point = {Rational(1), Rational(2)};
    TipgReport rb = check_tipg(bad);
    CHECK(!rb.identity_ok);
    CHECK(!rb.identity_residual.empty());
    CHECK(!rb.ok());

    // Break v's validity (lower a point).
    Tipg worse = t;
    worse.v = SupportFunction2D{};
    worse.v.add(1, 0, Rational(-1, 2));
    worse.v.add(1, 1, Rational(1, 2));
    worse.h.add(1, 1, Rational(-1, 2));  // now h lowers [1,1] mass to nothing
    TipgReport rw = check_tipg(worse);
    CHECK(!rw.ok());
}
