#pragma once
// Exact univariate polynomial arithmetic over the rationals, with a
// decision procedure for polynomial sign on the open positive axis
// (square-free decomposition + Sturm sequences; no floating point).

#include <variant>
#include <vector>

#include "mforge/rational.hpp"

namespace mforge {

class Polynomial {
public:
    Polynomial() = default;
    // Coefficients lowest degree first; trailing zeros are stripped.
    explicit Polynomial(std::vector<Rational> coeffs);
    static Polynomial constant(const Rational& c);

    // Zero polynomial has degree -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& leading() const;

    Rational eval(const Rational& x) const;  // exact Horner
    Polynomial derivative() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial scaled(const Rational& s) const;

    // Euclidean remainder (exact rational arithmetic); divisor nonzero.
    Polynomial rem(const Polynomial& divisor) const;
    // Monic gcd; gcd(0,0) = 0.
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);
    // p / gcd(p, p'): same roots, all simple.
    Polynomial square_free_part() const;

private:
    std::vector<Rational> c_;
    void normalize();
};

// scale * prod_j (lambda + roots[j]), expanded. Empty product = scale.
Polynomial poly_from_linear_factors(const std::vector<Rational>& roots,
                                    const Rational& scale);

inline Rational poly_eval(const Polynomial& p, const Rational& x) { return p.eval(x); }

// Number of distinct real roots of p in the open interval (a, b),
// via Sturm's theorem. p need not be square-free (handled internally).
int count_roots_in(const Polynomial& p, const Rational& a, const Rational& b);

struct StrictlyPositive {};
struct NonnegativeEverywhere {};
struct Violated {
    Rational sample;  // lambda > 0 with p(lambda) < 0
};
using PositiveAxisSign = std::variant<NonnegativeEverywhere, StrictlyPositive, Violated>;

// Classifies the sign of p on lambda in (0, infinity):
//   StrictlyPositive       p > 0 everywhere on the open axis
//   NonnegativeEverywhere  p >= 0 with a zero on (0, inf) or at a boundary
//                          limit (zero polynomial included, by convention)
//   Violated               carries a rational witness with p(witness) < 0
PositiveAxisSign sign_on_positive_axis(const Polynomial& p);

inline bool is_violated(const PositiveAxisSign& s) {
    return std::holds_alternative<Violated>(s);
}
inline bool is_strictly_positive(const PositiveAxisSign& s) {
    return std::holds_alternative<StrictlyPositive>(s);
}

}  // namespace mforge
