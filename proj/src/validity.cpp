#include "mforge/validity.hpp"

#include <algorithm>
#include <sstream>

#include "mforge/parallel.hpp"

namespace mforge {

namespace {

// Support size above which the closed-form path is preferred for lines
// shaped like a multi-way split or merge (one entry of one sign). Below the
// threshold the polynomial (Sturm) test decides; the two agree provably and
// the property suite cross-checks them on random instances.
constexpr std::size_t kClosedFormThreshold = 12;

Rational sum_x_h(const SupportFunction1D& h) {
    Rational s = 0;
    for (const auto& [x, w] : h.entries()) s += x * w;
    return s;
}

// Builds P(lambda) = -sum_i w_i prod_{j != i}(lambda + x_j).
Polynomial line_polynomial(const SupportFunction1D& h) {
    std::vector<Rational> xs;
    xs.reserve(h.size());
    for (const auto& [x, w] : h.entries()) xs.push_back(x);
    Polynomial p;
    std::size_t i = 0;
    for (const auto& [x, w] : h.entries()) {
        std::vector<Rational> others;
        others.reserve(xs.size() - 1);
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (j != i) others.push_back(xs[j]);
        p = p + poly_from_linear_factors(others, -w);
        ++i;
    }
    return p;
}

ValidityVerdict invalid(Violation v) {
    ValidityVerdict r;
    r.status = Validity::Invalid;
    r.violation = std::move(v);
    return r;
}

ValidityVerdict verdict(Validity s) {
    ValidityVerdict r;
    r.status = s;
    return r;
}

// Searches a witness lambda with sum -h/(lambda+x) < 0, moving towards 0
// (shrink=true) or towards infinity (shrink=false). The caller guarantees
// one exists in that direction.
Rational find_witness(const SupportFunction1D& h, bool shrink) {
    Rational lambda = 1;
    while (line_dual_value(h, lambda) >= 0) {
        if (shrink)
            lambda /= 2;
        else
            lambda *= 2;
    }
    return lambda;
}

}  // namespace

Rational line_dual_value(const SupportFunction1D& h, const Rational& lambda) {
    Rational s = 0;
    for (const auto& [x, w] : h.entries()) s -= w / (lambda + x);
    return s;
}

ValidityVerdict check_line_polynomial(const SupportFunction1D& h) {
    if (h.empty()) return verdict(Validity::Valid);
    Rational total = h.total_weight();
    if (total != 0) return invalid(NonzeroSum{total});

    const Polynomial p = line_polynomial(h);
    const auto cls = sign_on_positive_axis(p);
    if (auto* viol = std::get_if<Violated>(&cls)) {
        return invalid(LambdaWitness{viol->sample, line_dual_value(h, viol->sample)});
    }
    if (std::holds_alternative<StrictlyPositive>(cls)) {
        // Strict validity additionally needs sum x h(x) > 0. Since the
        // leading coefficient of P at degree n-2 equals sum x h(x) (the
        // lambda -> infinity condition), full degree is the strictness test.
        if (p.degree() == static_cast<int>(h.size()) - 2)
            return verdict(Validity::StrictlyValid);
        return verdict(Validity::Valid);
    }
    return verdict(Validity::Valid);
}

// Closed-form path for a line with exactly one negative entry (a multi-way
// split w[x] -> sum w_i[x_i]). Equivalent to the polynomial test:
// with a_i = w_i (x_i - x), D(lambda) (lambda + x) = sum a_i/(lambda + x_i),
// and since t -> t/(lambda+t) is increasing,
//   sum a_i/(lambda+x_i) >= (x/(lambda+x)) sum a_i/x_i,
// strictly when both signs occur. Hence sum a_i/x_i >= 0 at lambda -> 0+
// already forces strict positivity on the whole open axis, and likewise
// sum a_i = sum x h(x) > 0.
ValidityVerdict check_line_split_form(const SupportFunction1D& h) {
    Rational total = h.total_weight();
    if (total != 0) return invalid(NonzeroSum{total});
    Rational src_x;
    bool has_zero_target = false;
    for (const auto& [x, w] : h.entries()) {
        if (w < 0) src_x = x;
        else if (x == 0) has_zero_target = true;
    }
    if (src_x == 0) {
        // Splitting from coordinate 0 conserves weight and can only lower
        // each term of sum w_i/(lambda+x_i): always strictly valid.
        return verdict(Validity::StrictlyValid);
    }
    if (has_zero_target) {
        // A positive target at 0 drives the dual sum to -infinity.
        return invalid(LambdaWitness{find_witness(h, /*shrink=*/true),
                                     Rational(0)});  // value patched below
    }
    Rational T = 0;  // sum a_i / x_i
    for (const auto& [x, w] : h.entries()) {
        if (w > 0) T += w * (x - src_x) / x;
    }
    if (T >= 0) return verdict(Validity::StrictlyValid);
    Rational lam = find_witness(h, /*shrink=*/true);
    return invalid(LambdaWitness{lam, line_dual_value(h, lam)});
}

// Closed-form path for a line with exactly one positive entry (a multi-way
// merge sum w_i[x_i] -> w[x3]). With b_i = w_i (x3 - x_i), sum b_i =
// sum x h(x); since t -> 1/(lambda+t) is decreasing,
//   sum b_i/(lambda+x_i) >= (1/(lambda+x3)) sum b_i,
// strictly when both signs occur. So sum x h(x) > 0 gives StrictlyValid,
// = 0 gives Valid (positivity on the open axis but no strictness at
// lambda -> infinity), < 0 is refuted at large lambda.
ValidityVerdict check_line_merge_form(const SupportFunction1D& h) {
    Rational total = h.total_weight();
    if (total != 0) return invalid(NonzeroSum{total});
    Rational sxh = sum_x_h(h);
    if (sxh > 0) return verdict(Validity::StrictlyValid);
    if (sxh == 0) return verdict(Validity::Valid);
    Rational lam = find_witness(h, /*shrink=*/false);
    return invalid(LambdaWitness{lam, line_dual_value(h, lam)});
}

ValidityVerdict check_line(const SupportFunction1D& h) {
    if (h.empty()) return verdict(Validity::Valid);
    if (h.size() > kClosedFormThreshold) {
        std::size_t negatives = 0, positives = 0;
        for (const auto& [x, w] : h.entries()) (w < 0 ? negatives : positives)++;
        if (negatives == 1) {
            auto r = check_line_split_form(h);
            if (r.violation && std::holds_alternative<LambdaWitness>(*r.violation)) {
                auto lw = std::get<LambdaWitness>(*r.violation);
                lw.value = line_dual_value(h, lw.lambda);
                r.violation = lw;
            }
            return r;
        }
        if (positives == 1) return check_line_merge_form(h);
    }
    return check_line_polynomial(h);
}

std::vector<LineVerdict> check_transition(const Transition& t) {
    std::vector<LineVerdict> out;
    const Point2D origin{Rational(0), Rational(0)};
    if (t.before.at(origin) != 0 || t.after.at(origin) != 0) {
        out.push_back({Rational(0), invalid(OriginWeight{})});
        return out;
    }
    const SupportFunction2D diff = t.after - t.before;
    const auto lines = t.orientation == Orientation::Horizontal ? diff.lines_by_y()
                                                                : diff.lines_by_x();
    for (const auto& [coord, line] : lines)
        out.push_back({coord, check_line(line)});
    return out;
}

ValidityVerdict aggregate(const std::vector<LineVerdict>& lines) {
    bool strict = true;
    for (const auto& lv : lines) {
        if (lv.verdict.status == Validity::Invalid) return lv.verdict;
        if (lv.verdict.status != Validity::StrictlyValid) strict = false;
    }
    return verdict(strict ? Validity::StrictlyValid : Validity::Valid);
}

bool check_elementary(ElementaryKind kind, const ElementaryData& d) {
    switch (kind) {
        case ElementaryKind::Raise: {
            if (d.source.size() != 1 || d.targets.size() != 1) return false;
            if (d.source[0].second != d.targets[0].second) return false;
            if (d.source[0].second <= 0) return false;
            return d.targets[0].first >= d.source[0].first;
        }
        case ElementaryKind::Merge: {
            if (d.targets.size() != 1 || d.source.empty()) return false;
            Rational wsum = 0, xwsum = 0;
            for (const auto& [x, w] : d.source) {
                if (w <= 0) return false;
                wsum += w;
                xwsum += x * w;
            }
            if (d.targets[0].second != wsum) return false;
            return d.targets[0].first * wsum >= xwsum;
        }
        case ElementaryKind::Split: {
            if (d.source.size() != 1 || d.targets.empty()) return false;
            const Rational& x = d.source[0].first;
            const Rational& w = d.source[0].second;
            if (w <= 0) return false;
            Rational wsum = 0, ratio = 0;
            for (const auto& [xi, wi] : d.targets) {
                if (wi <= 0) return false;
                if (xi == 0) throw ZeroCoordinateInSplit{};
                wsum += wi;
                ratio += wi / xi;
            }
            if (wsum != w) return false;
            if (x == 0) return true;  // w/x unbounded
            return w / x >= ratio;
        }
    }
    return false;
}

std::string to_string(const ValidityVerdict& v) {
    switch (v.status) {
        case Validity::StrictlyValid:
            return "StrictlyValid";
        case Validity::Valid:
            return "Valid";
        case Validity::Invalid:
            break;
    }
    std::ostringstream os;
    os << "Invalid(";
    if (v.violation) {
        if (auto* ns = std::get_if<NonzeroSum>(&*v.violation))
            os << "NonzeroSum " << to_string(ns->total);
        else if (auto* lw = std::get_if<LambdaWitness>(&*v.violation))
            os << "LambdaWitness lambda=" << to_string(lw->lambda)
               << " value=" << to_string(lw->value);
        else
            os << "OriginWeight";
    }
    os << ")";
    return os.str();
}

GameReport check_point_game(const PointGame& g) {
    GameReport rep;
    if (g.frames.empty()) {
        rep.structure_ok = false;
        rep.structural_failures.push_back("no frames");
        return rep;
    }
    if (g.frames.size() != g.orientations.size() + 1) {
        rep.structure_ok = false;
        rep.structural_failures.push_back("frame/orientation count mismatch");
    }
    if (!(g.frames.front() == initial_distribution())) {
        rep.structure_ok = false;
        rep.structural_failures.push_back("initial frame is not 1/2[0,1] + 1/2[1,0]");
    }
    if (g.frames.back().size() != 1) {
        rep.structure_ok = false;
        rep.structural_failures.push_back("final frame is not a single point");
    }
    const Point2D origin{Rational(0), Rational(0)};
    for (std::size_t i = 0; i < g.frames.size(); ++i) {
        if (!g.frames[i].nonnegative()) {
            rep.structure_ok = false;
            rep.structural_failures.push_back("negative weight in frame " +
                                              std::to_string(i));
        }
        if (g.frames[i].at(origin) != 0) {
            rep.structure_ok = false;
            rep.structural_failures.push_back("weight at [0,0] in frame " +
                                              std::to_string(i));
        }
    }
    bool strict = true;
    for (std::size_t i = 0; i < g.transition_count() && i + 1 < g.frames.size(); ++i) {
        auto lines = check_transition(g.transition(i));
        for (auto& lv : lines) {
            if (lv.verdict.status == Validity::Invalid)
                rep.invalid_lines.push_back({i, lv});
            else if (lv.verdict.status != Validity::StrictlyValid)
                strict = false;
        }
    }
    rep.all_valid = rep.structure_ok && rep.invalid_lines.empty();
    rep.all_strictly_valid = rep.all_valid && strict;
    return rep;
}

std::string GameReport::summary() const {
    if (all_strictly_valid) return "AllStrictlyValid";
    if (all_valid) return "AllValid";
    std::ostringstream os;
    os << "Failures:";
    for (const auto& s : structural_failures) os << " [" << s << "]";
    for (const auto& [i, lv] : invalid_lines)
        os << " [transition " << i << " line " << to_string(lv.line) << ": "
           << to_string(lv.verdict) << "]";
    return os.str();
}

namespace {

// Checks every line of `lines`; parallel over lines when enabled, with
// deterministic aggregation in ascending line order.
std::vector<LineVerdict> check_lines(const std::map<Rational, SupportFunction1D>& lines) {
    std::vector<const std::pair<const Rational, SupportFunction1D>*> items;
    items.reserve(lines.size());
    for (const auto& kv : lines) items.push_back(&kv);
    std::vector<LineVerdict> verdicts(items.size());
#ifdef MFORGE_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(worker_count())
#endif
    for (long long i = 0; i < static_cast<long long>(items.size()); ++i) {
        verdicts[i] = LineVerdict{items[i]->first, check_line(items[i]->second)};
    }
    return verdicts;
}

}  // namespace

TipgReport check_tipg(const Tipg& t) {
    TipgReport rep;
    SupportFunction2D target;
    target.add(t.final_point, t.final_weight);
    rep.identity_residual = (t.h + t.v) - (target - initial_distribution());
    rep.identity_ok = rep.identity_residual.empty();

    for (auto& lv : check_lines(t.h.lines_by_y()))
        if (lv.verdict.status == Validity::Invalid) rep.h_failures.push_back(lv);
    for (auto& lv : check_lines(t.v.lines_by_x()))
        if (lv.verdict.status == Validity::Invalid) rep.v_failures.push_back(lv);
    rep.h_valid = rep.h_failures.empty();
    rep.v_valid = rep.v_failures.empty();
    return rep;
}

std::string TipgReport::summary() const {
    if (ok()) return "TIPG ok";
    std::ostringstream os;
    os << "TIPG failures:";
    if (!identity_ok) os << " [identity mismatch, residual support "
                         << identity_residual.size() << "]";
    for (const auto& lv : h_failures)
        os << " [h line y=" << to_string(lv.line) << ": " << to_string(lv.verdict) << "]";
    for (const auto& lv : v_failures)
        os << " [v line x=" << to_string(lv.line) << ": " << to_string(lv.verdict) << "]";
    return os.str();
}

}  // namespace mforge
