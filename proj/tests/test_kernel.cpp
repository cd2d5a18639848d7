// Exact scalar kernel: rationals, polynomials (Sturm machinery), and the
// sparse support functions everything else is built on.

#include <doctest.h>

#include "mforge/polynomial.hpp"
#include "mforge/rational.hpp"
#include "mforge/support_function.hpp"

using namespace mforge;

TEST_CASE("rational parsing and canonical printing") {
    CHECK(to_string(parse_rational("2/4")) == "1/2");
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_rational("7")) == "7");
    CHECK(to_string(parse_rational("0/5")) == "0");
    CHECK(parse_rational("1/3") + parse_rational("1/6") == parse_rational("1/2"));
    CHECK(!try_parse_rational("1/0"));
    CHECK(!try_parse_rational("a/b"));
    CHECK(!try_parse_rational(""));
    CHECK(!try_parse_rational("1.5"));
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("floor and ceiling") {
    CHECK(floor_int(Rational(7, 2)) == 3);
    CHECK(ceil_int(Rational(7, 2)) == 4);
    CHECK(floor_int(Rational(-7, 2)) == -4);
    CHECK(ceil_int(Rational(-7, 2)) == -3);
    CHECK(floor_int(Rational(4)) == 4);
    CHECK(ceil_int(Rational(4)) == 4);
}

TEST_CASE("polynomial arithmetic identities") {
    // p = (x-1)(x-2) = x^2 - 3x + 2
    Polynomial p =
        poly_from_linear_factors({Rational(-1), Rational(-2)}, Rational(1));
    CHECK(p.degree() == 2);
    CHECK(p.eval(1) == 0);
    CHECK(p.eval(2) == 0);
    CHECK(p.eval(0) == 2);
    Polynomial q({Rational(1), Rational(1)});  // x + 1
    CHECK((p * q).eval(3) == p.eval(3) * q.eval(3));
    CHECK((p + q).eval(5) == p.eval(5) + q.eval(5));
    CHECK((p - p).is_zero());
    CHECK(p.derivative().eval(Rational(3, 2)) == 0);  // vertex of the parabola
}

TEST_CASE("polynomial remainder and gcd") {
    Polynomial p = poly_from_linear_factors({Rational(-1), Rational(-2), Rational(-3)}, Rational(1));
    Polynomial d = poly_from_linear_factors({Rational(-2)}, Rational(1));
    CHECK(p.rem(d).is_zero());
    Polynomial g = Polynomial::gcd(
        poly_from_linear_factors({Rational(-1), Rational(-2)}, Rational(1)),
        poly_from_linear_factors({Rational(-2), Rational(-3)}, Rational(1)));
    CHECK(g.degree() == 1);
    CHECK(g.eval(2) == 0);
}

TEST_CASE("square-free part strips multiplicities") {
    // (x-1)^3 (x-2)
    Polynomial p = poly_from_linear_factors(
        {Rational(-1), Rational(-1), Rational(-1), Rational(-2)}, Rational(1));
    Polynomial s = p.square_free_part();
    CHECK(s.degree() == 2);
    CHECK(s.eval(1) == 0);
    CHECK(s.eval(2) == 0);
}

TEST_CASE("root counting in open intervals") {
    Polynomial p = poly_from_linear_factors({Rational(-1), Rational(-2), Rational(-3)}, Rational(1));
    CHECK(count_roots_in(p, 0, 4) == 3);
    CHECK(count_roots_in(p, 1, 3) == 1);  // endpoints excluded
    CHECK(count_roots_in(p, 0, 1) == 0);
    CHECK(count_roots_in(p, 3, 100) == 0);
    // Multiple roots count once.
    Polynomial q = poly_from_linear_factors({Rational(-1), Rational(-1)}, Rational(1));
    CHECK(count_roots_in(q, 0, 2) == 1);
}

TEST_CASE("sign on the positive axis") {
    // x^2 + 1 > 0 everywhere.
    CHECK(std::holds_alternative<StrictlyPositive>(
        sign_on_positive_axis(Polynomial({Rational(1), Rational(0), Rational(1)}))));
    // x - 1 changes sign: witness must certify.
    auto v = sign_on_positive_axis(Polynomial({Rational(-1), Rational(1)}));
    REQUIRE(std::holds_alternative<Violated>(v));
    CHECK(Polynomial({Rational(-1), Rational(1)}).eval(std::get<Violated>(v).sample) < 0);
    // (x-1)^2 touches zero but never goes negative.
    CHECK(std::holds_alternative<NonnegativeEverywhere>(
        sign_on_positive_axis(
            poly_from_linear_factors({Rational(-1), Rational(-1)}, Rational(1)))));
    // Negative leading coefficient is always violated far out.
    auto w = sign_on_positive_axis(
        poly_from_linear_factors({Rational(-1)}, Rational(-1)));
    REQUIRE(std::holds_alternative<Violated>(w));
    // x (x-1)^2 is nonnegative on (0, inf) with interior touch point.
    CHECK(std::holds_alternative<NonnegativeEverywhere>(sign_on_positive_axis(
        poly_from_linear_factors({Rational(0), Rational(-1), Rational(-1)}, Rational(1)))));
}

TEST_CASE("1-D support function merges and cancels") {
    SupportFunction1D f;
    f.add(Rational(1, 2), Rational(1, 3));
    f.add(Rational(1, 2), Rational(2, 3));
    CHECK(f.size() == 1);
    CHECK(f.entries().at(Rational(1, 2)) == 1);
    f.add(Rational(1, 2), Rational(-1));
    CHECK(f.empty());
    CHECK(f.total_weight() == 0);
}

TEST_CASE("2-D support function algebra") {
    SupportFunction2D f, g;
    f.add(0, 1, Rational(1, 2));
    f.add(1, 0, Rational(1, 2));
    g.add(1, 0, Rational(1, 2));
    SupportFunction2D d = f - g;
    CHECK(d.size() == 1);
    CHECK(d.at({Rational(0), Rational(1)}) == Rational(1, 2));
    CHECK(d.at({Rational(5), Rational(5)}) == 0);
    CHECK((f - f).empty());
    CHECK(f.scaled(2).total_weight() == 2);
    CHECK(f.scaled(0).empty());
    CHECK(f.total_weight() == 1);
    CHECK(f.nonnegative());
    SupportFunction2D h = f - g.scaled(3);
    CHECK(!h.nonnegative());
    CHECK(h.norm() == Rational(3, 2));
    CHECK(h.total_weight() == Rational(-1, 2));
}

TEST_CASE("split into positive and negative parts") {
    SupportFunction2D f;
    f.add(0, 1, Rational(1, 2));
    f.add(1, 0, Rational(-1, 3));
    auto [pos, neg] = split_parts(f);
    CHECK(pos.nonnegative());
    CHECK(neg.nonnegative());
    CHECK(pos - neg == f);
    CHECK(pos.size() == 1);
    CHECK(neg.size() == 1);
}

TEST_CASE("line restrictions group by the fixed coordinate") {
    SupportFunction2D f;
    f.add(0, 1, Rational(1, 4));
    f.add(2, 1, Rational(3, 4));
    f.add(2, 0, Rational(-1));
    auto by_y = f.lines_by_y();
    REQUIRE(by_y.size() == 2);
    CHECK(by_y.at(Rational(1)).total_weight() == 1);
    CHECK(by_y.at(Rational(0)).total_weight() == -1);
    auto by_x = f.lines_by_x();
    REQUIRE(by_x.size() == 2);
    CHECK(by_x.at(Rational(2)).size() == 2);
}

TEST_CASE("transpose mirrors across the diagonal") {
    SupportFunction2D f;
    f.add(0, 1, Rational(1, 2));
    f.add(Rational(2, 3), Rational(3, 4), Rational(1, 2));
    SupportFunction2D t = f.transposed();
    CHECK(t.at({Rational(1), Rational(0)}) == Rational(1, 2));
    CHECK(t.at({Rational(3, 4), Rational(2, 3)}) == Rational(1, 2));
    CHECK(t.transposed() == f);
}
