#pragma once
// Sequential point games (ordered frames with alternating-orientation
// transitions) and time-independent point games, plus the conversions
// between the frame view and the difference-function view.

#include <stdexcept>
#include <vector>

#include "mforge/support_function.hpp"

namespace mforge {

enum class Orientation { Horizontal, Vertical };

inline Orientation flipped(Orientation o) {
    return o == Orientation::Horizontal ? Orientation::Vertical
                                        : Orientation::Horizontal;
}

struct Transition {
    SupportFunction2D before;  // nonnegative
    SupportFunction2D after;   // nonnegative
    Orientation orientation = Orientation::Horizontal;
};

struct PointGame {
    std::vector<SupportFunction2D> frames;       // n+1 frames
    std::vector<Orientation> orientations;       // n transitions
    std::size_t transition_count() const { return orientations.size(); }
    Transition transition(std::size_t i) const {
        return Transition{frames.at(i), frames.at(i + 1), orientations.at(i)};
    }
};

// h + v = final_weight [final_point] - 1/2 [0,1] - 1/2 [1,0], exactly.
struct Tipg {
    SupportFunction2D h;  // horizontal function
    SupportFunction2D v;  // vertical function
    Point2D final_point;
    Rational final_weight{1};
};

// The canonical initial distribution 1/2 [0,1] + 1/2 [1,0].
SupportFunction2D initial_distribution();

struct NegativeFrame : std::runtime_error {
    std::size_t index;
    Point2D point;
    Rational weight;
    NegativeFrame(std::size_t i, Point2D p, Rational w);
};

// t_i = p_i - p_{i-1} for i = 1..n.
std::vector<SupportFunction2D> frames_to_functions(const PointGame& g);

// Prefix-sum reconstruction; throws NegativeFrame if any prefix sum dips
// below zero anywhere. Orientations alternate starting from `first`.
PointGame functions_to_frames(const std::vector<SupportFunction2D>& t,
                              const SupportFunction2D& initial,
                              Orientation first = Orientation::Vertical);

// Same but with explicit orientations (one per function).
PointGame functions_to_frames(const std::vector<SupportFunction2D>& t,
                              const SupportFunction2D& initial,
                              const std::vector<Orientation>& orientations);

}  // namespace mforge
