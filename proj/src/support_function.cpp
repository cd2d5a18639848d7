#include "mforge/support_function.hpp"

namespace mforge {

void SupportFunction1D::add(const Rational& coord, const Rational& weight) {
    if (weight == 0) return;
    auto it = m_.find(coord);
    if (it == m_.end()) {
        // Two-argument mpq construction does not reduce to lowest terms, and
        // equality on unreduced values is unreliable; canonicalize stored
        // keys and weights.
        Rational c = coord, w = weight;
        c.canonicalize();
        w.canonicalize();
        m_.emplace(std::move(c), std::move(w));
        return;
    }
    it->second += weight;
    if (it->second == 0) m_.erase(it);
}

Rational SupportFunction1D::total_weight() const {
    Rational t = 0;
    for (const auto& [c, w] : m_) t += w;
    return t;
}

void SupportFunction2D::add(const Point2D& p, const Rational& weight) {
    if (weight == 0) return;
    auto it = m_.find(p);
    if (it == m_.end()) {
        Point2D q = p;  // see the 1-D case: store canonical forms only
        q.x.canonicalize();
        q.y.canonicalize();
        Rational w = weight;
        w.canonicalize();
        m_.emplace(std::move(q), std::move(w));
        return;
    }
    it->second += weight;
    if (it->second == 0) m_.erase(it);
}

Rational SupportFunction2D::at(const Point2D& p) const {
    auto it = m_.find(p);
    return it == m_.end() ? Rational(0) : it->second;
}

Rational SupportFunction2D::total_weight() const {
    Rational t = 0;
    for (const auto& [p, w] : m_) t += w;
    return t;
}

Rational SupportFunction2D::norm() const {
    Rational t = 0;
    for (const auto& [p, w] : m_) t += abs(w);
    return t;
}

bool SupportFunction2D::nonnegative() const {
    for (const auto& [p, w] : m_)
        if (w < 0) return false;
    return true;
}

SupportFunction2D SupportFunction2D::operator+(const SupportFunction2D& o) const {
    SupportFunction2D r = *this;
    for (const auto& [p, w] : o.m_) r.add(p, w);
    return r;
}

SupportFunction2D SupportFunction2D::operator-(const SupportFunction2D& o) const {
    SupportFunction2D r = *this;
    for (const auto& [p, w] : o.m_) r.add(p, -w);
    return r;
}

SupportFunction2D SupportFunction2D::scaled(const Rational& s) const {
    SupportFunction2D r;
    if (s == 0) return r;
    for (const auto& [p, w] : m_) r.m_.emplace(p, w * s);
    return r;
}

std::map<Rational, SupportFunction1D> SupportFunction2D::lines_by_y() const {
    std::map<Rational, SupportFunction1D> lines;
    for (const auto& [p, w] : m_) lines[p.y].add(p.x, w);
    return lines;
}

std::map<Rational, SupportFunction1D> SupportFunction2D::lines_by_x() const {
    std::map<Rational, SupportFunction1D> lines;
    for (const auto& [p, w] : m_) lines[p.x].add(p.y, w);
    return lines;
}

SupportFunction2D SupportFunction2D::transposed() const {
    SupportFunction2D r;
    for (const auto& [p, w] : m_) r.add(p.y, p.x, w);
    return r;
}

SupportFunction2D fn_algebra(const SupportFunction2D& a, const SupportFunction2D& b,
                             FnOp op) {
    return op == FnOp::Add ? a + b : a - b;
}

SupportFunction2D fn_scale(const SupportFunction2D& a, const Rational& c) {
    return a.scaled(c);
}

std::pair<SupportFunction2D, SupportFunction2D> split_parts(const SupportFunction2D& f) {
    SupportFunction2D pos, neg;
    for (const auto& [p, w] : f.entries()) {
        if (w > 0)
            pos.add(p, w);
        else
            neg.add(p, -w);
    }
    return {pos, neg};
}

}  // namespace mforge
