#include "mforge/polynomial.hpp"

#include <algorithm>
#include <cassert>

namespace mforge {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    normalize();
}

Polynomial Polynomial::constant(const Rational& c) {
    return Polynomial(std::vector<Rational>{c});
}

void Polynomial::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rational& Polynomial::leading() const {
    assert(!c_.empty());
    return c_.back();
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + (-o);
}

Polynomial Polynomial::operator-() const {
    std::vector<Rational> r(c_);
    for (auto& x : r) x = -x;
    return Polynomial(std::move(r));
}

Polynomial Polynomial::scaled(const Rational& s) const {
    std::vector<Rational> r(c_);
    for (auto& x : r) x *= s;
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial();
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::rem(const Polynomial& divisor) const {
    assert(!divisor.is_zero());
    std::vector<Rational> r(c_);
    const auto& d = divisor.c_;
    while (r.size() >= d.size() && !r.empty()) {
        // Strip any exact-zero leading entries produced by cancellation.
        if (r.back() == 0) {
            r.pop_back();
            continue;
        }
        Rational q = r.back() / d.back();
        const std::size_t off = r.size() - d.size();
        for (std::size_t i = 0; i < d.size(); ++i) r[off + i] -= q * d[i];
        r.pop_back();
    }
    return Polynomial(std::move(r));
}

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    Polynomial x = a, y = b;
    while (!y.is_zero()) {
        Polynomial r = x.rem(y);
        x = std::move(y);
        y = std::move(r);
    }
    if (x.is_zero()) return x;
    return x.scaled(1 / x.leading());  // monic
}

Polynomial Polynomial::square_free_part() const {
    if (degree() <= 0) return *this;
    Polynomial g = gcd(*this, derivative());
    if (g.degree() <= 0) return *this;
    // Exact division: this = q * g with zero remainder.
    std::vector<Rational> r(c_);
    const auto& d = g.c_;
    std::vector<Rational> q(r.size() - d.size() + 1, Rational(0));
    for (std::size_t step = r.size(); step >= d.size(); --step) {
        Rational coef = r[step - 1] / d.back();
        q[step - d.size()] = coef;
        const std::size_t off = step - d.size();
        for (std::size_t i = 0; i < d.size(); ++i) r[off + i] -= coef * d[i];
    }
    return Polynomial(std::move(q));
}

Polynomial poly_from_linear_factors(const std::vector<Rational>& roots,
                                    const Rational& scale) {
    Polynomial p = Polynomial::constant(scale);
    for (const auto& r : roots) p = p * Polynomial({r, Rational(1)});
    return p;
}

namespace {

// Sturm chain of a square-free polynomial.
std::vector<Polynomial> sturm_chain(const Polynomial& q) {
    std::vector<Polynomial> s;
    s.push_back(q);
    Polynomial d = q.derivative();
    if (d.is_zero()) return s;
    s.push_back(d);
    while (true) {
        Polynomial r = s[s.size() - 2].rem(s.back());
        if (r.is_zero()) break;
        s.push_back(-r);
    }
    return s;
}

int sign_variations(const std::vector<Polynomial>& chain, const Rational& x) {
    int vars = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sgn(p.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

// Cauchy bound: all real roots lie in (-B, B).
Rational root_bound(const Polynomial& p) {
    Rational m = 0;
    const auto& c = p.coeffs();
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        m = std::max(m, Rational(abs(c[i] / c.back())));
    return m + 1;
}

// Roots of square-free q in the half-open interval (a, b].
int roots_in_halfopen(const std::vector<Polynomial>& chain, const Rational& a,
                      const Rational& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
}

}  // namespace

int count_roots_in(const Polynomial& p, const Rational& a, const Rational& b) {
    if (p.is_zero() || a >= b) return 0;
    Polynomial q = p.square_free_part();
    if (q.degree() <= 0) return 0;
    auto chain = sturm_chain(q);
    int n = roots_in_halfopen(chain, a, b);
    if (q.eval(b) == 0) --n;  // open interval: exclude the right endpoint
    return n;
}

PositiveAxisSign sign_on_positive_axis(const Polynomial& p) {
    if (p.is_zero()) return NonnegativeEverywhere{};
    if (p.degree() == 0)
        return p.leading() > 0 ? PositiveAxisSign(StrictlyPositive{})
                               : PositiveAxisSign(Violated{Rational(1)});

    // Sign at +infinity: a negative leading coefficient always violates.
    if (p.leading() < 0) {
        Rational x = std::max(Rational(1), root_bound(p));
        while (p.eval(x) >= 0) x *= 2;
        return Violated{x};
    }

    Polynomial q = p.square_free_part();
    auto chain = sturm_chain(q);
    Rational bound = root_bound(p);
    int n = roots_in_halfopen(chain, Rational(0), bound);
    if (n == 0) {
        // Constant sign on the open axis; the leading coefficient is positive
        // and there is no root to cross, so the sign is positive throughout.
        return StrictlyPositive{};
    }

    // Isolate the n distinct roots in (0, bound] by bisection, then sample p
    // strictly between consecutive roots (and below the first). Any negative
    // sample is a witness; otherwise the roots are even-order touch points.
    struct Iv {
        Rational lo, hi;  // (lo, hi] holds exactly one root
    };
    std::vector<Iv> stack{{Rational(0), bound}}, isolated;
    while (!stack.empty()) {
        Iv iv = stack.back();
        stack.pop_back();
        int k = roots_in_halfopen(chain, iv.lo, iv.hi);
        if (k == 0) continue;
        if (k == 1) {
            isolated.push_back(iv);
            continue;
        }
        Rational mid = (iv.lo + iv.hi) / 2;
        while (q.eval(mid) == 0) mid = (iv.lo + mid) / 2;  // land off-root
        stack.push_back({iv.lo, mid});
        stack.push_back({mid, iv.hi});
    }
    std::sort(isolated.begin(), isolated.end(),
              [](const Iv& u, const Iv& v) { return u.lo < v.lo; });

    // Sample points: each interval's lo (off-root by construction, covers the
    // gap below that root) plus a point beyond the last root.
    std::vector<Rational> samples;
    for (const auto& iv : isolated)
        if (iv.lo > 0) samples.push_back(iv.lo);
    // Below the first root: lo of the first interval may be 0; use a point
    // inside (0, first root) found by shrinking.
    {
        Rational x = isolated.front().hi;
        while (roots_in_halfopen(chain, Rational(0), x) > 0 || q.eval(x) == 0) x /= 2;
        samples.push_back(x);
    }
    samples.push_back(bound + 1);

    for (const auto& x : samples) {
        if (p.eval(x) < 0) return Violated{x};
    }
    return NonnegativeEverywhere{};
}

}  // namespace mforge
