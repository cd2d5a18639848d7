#include "mforge/point_game.hpp"

namespace mforge {

SupportFunction2D initial_distribution() {
    SupportFunction2D f;
    f.add(Rational(0), Rational(1), Rational(1, 2));
    f.add(Rational(1), Rational(0), Rational(1, 2));
    return f;
}

NegativeFrame::NegativeFrame(std::size_t i, Point2D p, Rational w)
    : std::runtime_error("negative frame entry at index " + std::to_string(i) +
                         " point [" + to_string(p.x) + "," + to_string(p.y) +
                         "] weight " + to_string(w)),
      index(i),
      point(std::move(p)),
      weight(std::move(w)) {}

std::vector<SupportFunction2D> frames_to_functions(const PointGame& g) {
    std::vector<SupportFunction2D> t;
    for (std::size_t i = 1; i < g.frames.size(); ++i)
        t.push_back(g.frames[i] - g.frames[i - 1]);
    return t;
}

PointGame functions_to_frames(const std::vector<SupportFunction2D>& t,
                              const SupportFunction2D& initial,
                              const std::vector<Orientation>& orientations) {
    PointGame g;
    g.orientations = orientations;
    g.frames.push_back(initial);
    for (std::size_t i = 0; i < t.size(); ++i) {
        SupportFunction2D next = g.frames.back() + t[i];
        for (const auto& [p, w] : next.entries())
            if (w < 0) throw NegativeFrame(i + 1, p, w);
        g.frames.push_back(std::move(next));
    }
    return g;
}

PointGame functions_to_frames(const std::vector<SupportFunction2D>& t,
                              const SupportFunction2D& initial, Orientation first) {
    std::vector<Orientation> os;
    Orientation o = first;
    for (std::size_t i = 0; i < t.size(); ++i) {
        os.push_back(o);
        o = flipped(o);
    }
    return functions_to_frames(t, initial, os);
}

}  // namespace mforge
