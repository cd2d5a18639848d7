#pragma once
// Finite-support weighted point sets on [0,inf) and on the quarter-plane,
// with exact pointwise algebra. Maps are ordered (lexicographic on exact
// rationals) so that iteration and serialization are deterministic.

#include <map>
#include <utility>
#include <vector>

#include "mforge/rational.hpp"

namespace mforge {

struct Point2D {
    Rational x;  // Alice-dual coordinate
    Rational y;  // Bob-dual coordinate
    bool operator==(const Point2D& o) const { return x == o.x && y == o.y; }
    bool operator<(const Point2D& o) const {
        int c = cmp(x, o.x);
        if (c != 0) return c < 0;
        return y < o.y;
    }
};

// 1-D function with finite support; zero weights are never stored.
class SupportFunction1D {
public:
    using Map = std::map<Rational, Rational>;

    void add(const Rational& coord, const Rational& weight);
    const Map& entries() const { return m_; }
    bool empty() const { return m_.empty(); }
    std::size_t size() const { return m_.size(); }
    Rational total_weight() const;

private:
    Map m_;
};

// 2-D function with finite support; zero weights are never stored.
class SupportFunction2D {
public:
    using Map = std::map<Point2D, Rational>;

    void add(const Point2D& p, const Rational& weight);
    void add(const Rational& x, const Rational& y, const Rational& w) {
        add(Point2D{x, y}, w);
    }
    Rational at(const Point2D& p) const;  // 0 when absent
    const Map& entries() const { return m_; }
    bool empty() const { return m_.empty(); }
    std::size_t size() const { return m_.size(); }

    Rational total_weight() const;
    Rational norm() const;  // sum of |w|
    bool nonnegative() const;

    SupportFunction2D operator+(const SupportFunction2D& o) const;
    SupportFunction2D operator-(const SupportFunction2D& o) const;
    SupportFunction2D scaled(const Rational& s) const;

    bool operator==(const SupportFunction2D& o) const { return m_ == o.m_; }

    // Groups entries by y (per_y) or by x (per_x): the 1-D restrictions used
    // by horizontal / vertical line checks.
    std::map<Rational, SupportFunction1D> lines_by_y() const;
    std::map<Rational, SupportFunction1D> lines_by_x() const;

    // Mirror across the diagonal: (x,y) -> (y,x).
    SupportFunction2D transposed() const;

private:
    Map m_;
};

enum class FnOp { Add, Subtract };

SupportFunction2D fn_algebra(const SupportFunction2D& a, const SupportFunction2D& b,
                             FnOp op);
SupportFunction2D fn_scale(const SupportFunction2D& a, const Rational& c);

// f = positive - negative, disjoint supports, both nonnegative.
std::pair<SupportFunction2D, SupportFunction2D> split_parts(const SupportFunction2D& f);

}  // namespace mforge
