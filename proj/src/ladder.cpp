#include "mforge/ladder.hpp"

#include <cassert>

#include "mforge/parallel.hpp"

namespace mforge {

namespace {

// s(j) = f(0, j w) / prod_{l=-k}^{k} ((j+l) w), up to the positive factor
// w^(2k-3), as an integer ratio. Positivity and the comparison of
// sum s(j) against sum s(j)/(j w) are invariant under that scaling.
Rational s_scaled(int k, long zeta, long gamma, long j) {
    Integer a = 1;
    for (int i = 1; i < k; ++i) {
        a *= zeta - i;
        a *= zeta - i - j;
    }
    for (int i = 1; i <= k; ++i) {
        a *= gamma + i;
        a *= gamma + i - j;
    }
    if (k % 2 == 0) a = -a;  // (-1)^(k+1)
    Integer b = 1;
    for (int l = -k; l <= k; ++l) b *= j + l;
    Rational r(a, b);
    r.canonicalize();
    return r;
}

struct ScanResult {
    bool all_positive = true;
    long bad_j = 0;
    Rational s1;  // sum s(j)            (scaled)
    Rational s2;  // sum s(j) / (j w)    (same scaling)
};

ScanResult scan(int k, long n, long zeta, long gamma) {
    ScanResult r;
    for (long j = zeta; j <= gamma; ++j) {
        Rational s = s_scaled(k, zeta, gamma, j);
        if (s <= 0) {
            r.all_positive = false;
            r.bad_j = j;
            return r;
        }
        r.s1 += s;
        r.s2 += s * n / j;
    }
    return r;
}

long denominator_as_long(const Rational& omega) {
    // 1/omega must be a positive integer.
    if (omega <= 0 || omega.get_num() != 1) return 0;
    if (!omega.get_den().fits_slong_p()) return 0;
    return omega.get_den().get_si();
}

}  // namespace

LadderParams LadderParams::make(int k, const Rational& omega, long gamma, long zeta) {
    LadderParams p;
    p.k = k;
    p.omega = omega;
    p.gamma = gamma;
    p.zeta = zeta;
    const long n = denominator_as_long(omega);
    if (k < 1 || n == 0)
        throw std::invalid_argument("ladder: k >= 1 and omega = 1/N required");
    if (!(gamma > zeta && zeta > k))
        throw std::invalid_argument("ladder: need gamma > zeta > k");
    if (2 * zeta <= n) throw std::invalid_argument("ladder: need zeta*omega > 1/2");

    ScanResult r = scan(k, n, zeta, gamma);
    if (!r.all_positive) throw NonpositiveSplitWeight(r.bad_j);
    // True sum = w^(2k-3) * s1; C = 1/(2 * sum).
    Rational wpow = 1;
    for (int i = 0; i < 2 * k - 3; ++i) wpow *= omega;
    for (int i = 0; i < 3 - 2 * k; ++i) wpow /= omega;
    p.C = 1 / (2 * wpow * r.s1);
    return p;
}

Rational f_eval(const LadderParams& p, const Rational& x, const Rational& y) {
    const Rational alpha = p.alpha();
    Rational r = (p.k % 2 == 0) ? Rational(-1) : Rational(1);
    for (int i = 1; i < p.k; ++i) {
        Rational c = alpha - i * p.omega;
        r *= (c - x) * (c - y);
    }
    for (int i = 1; i <= p.k; ++i) {
        Rational c = Rational(p.gamma + i) * p.omega;
        r *= (c - x) * (c - y);
    }
    return r;
}

SupportFunction1D rung_function(const LadderParams& p, long j) {
    assert(p.zeta <= j && j <= p.gamma);
    SupportFunction1D rung;
    const Rational jw = Rational(j) * p.omega;

    Rational denom = 1;
    for (int l = -p.k; l <= p.k; ++l) denom *= Rational(j + l) * p.omega;
    rung.add(Rational(0), -p.C * f_eval(p, Rational(0), jw) / denom);

    for (int i = -p.k; i <= p.k; ++i) {
        if (i == 0) continue;
        const Rational xi = Rational(j + i) * p.omega;
        Rational d = xi * jw;
        for (int l = -p.k; l <= p.k; ++l) {
            if (l == i || l == 0) continue;
            d *= Rational(l - i) * p.omega;
        }
        rung.add(xi, p.C * f_eval(p, xi, jw) / d);
    }
    return rung;
}

namespace {

std::pair<SupportFunction2D, SupportFunction2D> assemble_ladder(
    const LadderParams& p, bool parallel) {
    const long count = p.gamma - p.zeta + 1;
    std::vector<SupportFunction1D> rungs(count);
#ifdef MFORGE_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (parallel)
#endif
    for (long idx = 0; idx < count; ++idx)
        rungs[idx] = rung_function(p, p.zeta + idx);

    SupportFunction2D h;
    for (long idx = 0; idx < count; ++idx) {
        const Rational y = Rational(p.zeta + idx) * p.omega;
        for (const auto& [x, w] : rungs[idx].entries()) h.add(x, y, w);
    }
    // v_lad(x,y) = -h_lad(x,y) on the overlap and h_lad is antisymmetric
    // there, so v_lad is the plain transpose of h_lad.
    SupportFunction2D v = h.transposed();

    // Internal bookkeeping guard: the ladder identity must hold exactly.
    const Rational alpha = p.alpha();
    const Rational step = Rational(p.k) * p.omega;
    SupportFunction2D expected;
    expected.add(alpha - step, alpha, Rational(1, 2));
    expected.add(alpha, alpha - step, Rational(1, 2));
    for (const auto& [j, w] : split_distribution(p)) {
        const Rational jw = Rational(j) * p.omega;
        expected.add(Rational(0), jw, -w);
        expected.add(jw, Rational(0), -w);
    }
    if (!((h + v) - expected).empty())
        throw IdentityMismatch("ladder identity violated (internal bug)");
    return {h, v};
}

}  // namespace

std::pair<SupportFunction2D, SupportFunction2D> build_ladder(const LadderParams& p) {
    return assemble_ladder(p, parallel_enabled());
}

std::pair<SupportFunction2D, SupportFunction2D> build_ladder_serial(
    const LadderParams& p) {
    return assemble_ladder(p, false);
}

std::vector<std::pair<long, Rational>> split_distribution(const LadderParams& p) {
    std::vector<std::pair<long, Rational>> out;
    out.reserve(p.gamma - p.zeta + 1);
    for (long j = p.zeta; j <= p.gamma; ++j) {
        Rational denom = 1;
        for (int l = -p.k; l <= p.k; ++l) denom *= Rational(j + l) * p.omega;
        Rational w = p.C * f_eval(p, Rational(0), Rational(j) * p.omega) / denom;
        if (w <= 0) throw NonpositiveSplitWeight(j);
        out.emplace_back(j, w);
    }
    return out;
}

bool check_split_inequality(const LadderParams& p) {
    // sum p(jw) > sum p(jw)/(jw), both sides exact.
    const Rational alpha = p.alpha();
    Rational lhs = 0, rhs = 0;
    for (long j = p.zeta; j <= p.gamma; ++j) {
        const Rational jw = Rational(j) * p.omega;
        Rational term = 1;
        for (int i = 1; i < p.k; ++i) {
            const Rational c = alpha - i * p.omega;
            term *= (jw - c) / c;
        }
        for (int i = 1; i <= p.k; ++i) {
            const Rational c = Rational(p.gamma + i) * p.omega;
            term *= (c - jw) / c;
        }
        for (int i = -p.k; i <= p.k; ++i) term /= Rational(j + i) * p.omega;
        lhs += term;
        rhs += term / jw;
    }
    return lhs > rhs;
}

namespace {

// The two axis splits as transitions, for checker certification.
std::pair<Transition, Transition> axis_splits(const LadderParams& p) {
    Transition hsplit, vsplit;
    hsplit.orientation = Orientation::Horizontal;
    vsplit.orientation = Orientation::Vertical;
    hsplit.before.add(Rational(1), Rational(0), Rational(1, 2));
    vsplit.before.add(Rational(0), Rational(1), Rational(1, 2));
    for (const auto& [j, w] : split_distribution(p)) {
        const Rational jw = Rational(j) * p.omega;
        hsplit.after.add(jw, Rational(0), w);
        vsplit.after.add(Rational(0), jw, w);
    }
    return {hsplit, vsplit};
}

}  // namespace

std::pair<long, Rational> find_min_alpha(int k, const Rational& omega, long gamma) {
    const long n = denominator_as_long(omega);
    if (k < 1 || n == 0)
        throw std::invalid_argument("ladder: k >= 1 and omega = 1/N required");
    long zeta = n / 2 + 1;  // least zeta with zeta*omega > 1/2
    if (zeta <= k) zeta = k + 1;
    for (; zeta < gamma; ++zeta) {
        ScanResult r = scan(k, n, zeta, gamma);
        if (!r.all_positive || r.s1 < r.s2) continue;
        // Candidate passes the closed form; certify with the generic checker.
        LadderParams p = LadderParams::make(k, omega, gamma, zeta);
        auto [hs, vs] = axis_splits(p);
        if (aggregate(check_transition(hs)).at_least_valid() &&
            aggregate(check_transition(vs)).at_least_valid())
            return {zeta, p.alpha()};
    }
    throw NoAdmissibleAlpha{};
}

Tipg build_tipg(const LadderParams& p) {
    auto [h, v] = build_ladder(p);
    const Rational alpha = p.alpha();
    const Rational step = Rational(p.k) * p.omega;

    // Axis splits: 1/2[1,0] -> sum split(j)[jw,0] (horizontal) and the
    // mirrored vertical split of 1/2[0,1].
    for (const auto& [j, w] : split_distribution(p)) {
        const Rational jw = Rational(j) * p.omega;
        h.add(jw, Rational(0), w);
        v.add(Rational(0), jw, w);
    }
    h.add(Rational(1), Rational(0), Rational(-1, 2));
    v.add(Rational(0), Rational(1), Rational(-1, 2));

    // Final raise: 1/2[alpha-kw, alpha] + 1/2[alpha, alpha-kw] -> 1[alpha,alpha].
    h.add(alpha - step, alpha, Rational(-1, 2));
    h.add(alpha, alpha, Rational(1, 2));
    v.add(alpha, alpha - step, Rational(-1, 2));
    v.add(alpha, alpha, Rational(1, 2));

    Tipg t;
    t.h = std::move(h);
    t.v = std::move(v);
    t.final_point = Point2D{alpha, alpha};
    t.final_weight = 1;
    return t;
}

Tipg build_tipg(int k, const Rational& omega, long gamma, long zeta) {
    return build_tipg(LadderParams::make(k, omega, gamma, zeta));
}

}  // namespace mforge
