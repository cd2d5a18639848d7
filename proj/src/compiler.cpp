#include "mforge/compiler.hpp"

#include <algorithm>
#include <cmath>

namespace mforge {

namespace {

Integer denominator_lcm(const Tipg& t, const Rational& epsilon) {
    Integer L = 1;
    auto absorb = [&L](const Rational& q) { mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), q.get_den().get_mpz_t()); };
    for (const auto& [p, w] : t.h.entries()) {
        (void)w;
        absorb(p.x);
        absorb(p.y);
    }
    for (const auto& [p, w] : t.v.entries()) {
        (void)w;
        absorb(p.x);
        absorb(p.y);
    }
    absorb(t.final_point.x);
    absorb(t.final_point.y);
    absorb(epsilon);
    return L;
}

// Smallest multiple of 1/L that is >= q.
Rational grid_ceil(const Rational& q, const Integer& L) {
    Rational r(ceil_int(q * L), L);
    r.canonicalize();
    return r;
}

// Smallest multiple of 1/L that is > q.
Rational grid_above(const Rational& q, const Integer& L) {
    Rational r(floor_int(q * L) + 1, L);
    r.canonicalize();
    return r;
}

struct RoutedPoint {
    Point2D p;
    Rational w;
};

struct Plan {
    CompilerPlan plan;
    SupportFunction2D vminus;
    std::vector<RoutedPoint> route_a;  // reach [x,y] via [0,me] -> [0,y] -> [x,y]
    std::vector<RoutedPoint> route_b;  // reach [x,y] via [me,0] -> [me,y] -> [x,y]
    Rational me;                       // min(m, 1), the catalyst pivot actually used
    SupportFunction2D xi;              // |xi| = 1; post-loop frame is (1-d)[b,a] + d*xi
};

Plan make_plan(const Tipg& t, const Rational& epsilon) {
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    if (t.final_weight != 1)
        throw std::invalid_argument("final weight must be 1");
    Plan pl;
    CompilerPlan& plan = pl.plan;
    plan.epsilon = epsilon;
    const Rational beta = t.final_point.x;
    const Rational alpha = t.final_point.y;

    pl.vminus = split_parts(t.v).second;
    if (pl.vminus.empty()) {
        plan.catalyst_degenerate = true;
        plan.transitions = 4;
        return pl;
    }

    bool first = true;
    for (const auto& [p, w] : pl.vminus.entries()) {
        (void)w;
        const Rational mx = std::max(p.x, p.y);
        if (first || mx < plan.m) plan.m = mx;
        first = false;
    }
    pl.me = std::min(plan.m, Rational(1));

    for (const auto& [p, w] : pl.vminus.entries()) {
        const bool ea = p.y >= pl.me;
        const bool eb = p.x >= pl.me;
        if (ea && eb) {
            pl.route_a.push_back({p, w / 2});
            pl.route_b.push_back({p, w / 2});
            plan.a += w / 2;
            plan.b += w / 2;
        } else if (ea) {
            pl.route_a.push_back({p, w});
            plan.a += w;
        } else {
            pl.route_b.push_back({p, w});
            plan.b += w;
        }
    }
    const Rational W = plan.a + plan.b;
    if (pl.me < 1 && (plan.a == 0 || plan.b == 0)) throw CatalystRouteDegenerate{};

    const Integer L = denominator_lcm(t, epsilon);
    plan.m_y = plan.b > 0
                   ? grid_ceil((plan.b + plan.a * (1 - pl.me)) / plan.b, L)
                   : Rational(1);
    plan.m_x = plan.a > 0
                   ? grid_ceil((plan.a + plan.b * (1 - pl.me)) / plan.a, L)
                   : Rational(1);

    // xi: the delta-fraction of the frame parked off [beta, alpha] after the
    // main loop: the catalyst plus the two secondary-split leftovers.
    pl.xi = pl.vminus.scaled(pl.me / (2 * W));
    pl.xi.add(Rational(0), plan.m_y, (plan.b + plan.a * (1 - pl.me)) / (2 * W));
    pl.xi.add(plan.m_x, Rational(0), (plan.a + plan.b * (1 - pl.me)) / (2 * W));

    Rational max_x = beta + epsilon, max_y = alpha + epsilon;
    for (const auto& [p, w] : pl.xi.entries()) {
        (void)w;
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    plan.n_x = grid_above(max_x, L);
    plan.n_y = grid_above(max_y, L);

    plan.delta = epsilon * epsilon / ((plan.n_x - beta) * (plan.n_y - alpha));
    plan.delta_prime =
        epsilon / (plan.n_x - beta) * (1 - epsilon / (plan.n_y - alpha));
    if (plan.delta + plan.delta_prime >= 1) throw InfeasibleEpsilon{};

    plan.gamma = plan.delta * pl.me / (2 * (1 - plan.delta) * W);
    Integer n = ceil_int(1 / plan.gamma);
    if (!n.fits_slong_p())
        throw std::runtime_error("round count does not fit in a machine word");
    plan.loop_count = n.get_si();
    plan.gamma_prime = Rational(1, n);
    plan.gamma_prime.canonicalize();
    plan.transitions = 10 + 2 * plan.loop_count;
    return pl;
}

}  // namespace

std::pair<PointGame, CompilerPlan> tipg_to_sequential(const Tipg& t,
                                                      const Rational& epsilon) {
    Plan pl = make_plan(t, epsilon);
    const CompilerPlan& plan = pl.plan;
    const Rational beta = t.final_point.x;
    const Rational alpha = t.final_point.y;

    PointGame g;
    SupportFunction2D cur = initial_distribution();
    g.frames.push_back(cur);
    auto emit = [&g, &cur](Orientation o, const SupportFunction2D& diff) {
        cur = cur + diff;
        for (const auto& [p, w] : cur.entries())
            if (w < 0) throw NegativeFrame(g.frames.size(), p, w);
        g.frames.push_back(cur);
        g.orientations.push_back(o);
    };

    if (plan.catalyst_degenerate) {
        emit(Orientation::Vertical, t.v);
        emit(Orientation::Horizontal, t.h);
        SupportFunction2D up;
        up.add(beta, alpha, Rational(-1));
        up.add(beta, alpha + epsilon, Rational(1));
        emit(Orientation::Vertical, up);
        SupportFunction2D right;
        right.add(beta, alpha + epsilon, Rational(-1));
        right.add(beta + epsilon, alpha + epsilon, Rational(1));
        emit(Orientation::Horizontal, right);
        return {std::move(g), plan};
    }

    const Rational me = pl.me;
    const Rational W = plan.a + plan.b;
    const Rational d = plan.delta;
    const Rational dp = plan.delta_prime;
    const Rational cat = d * me / (2 * W);  // catalyst scale gamma*(1-delta)

    // T1: split a delta/2 piece of [0,1] down to [0,me] and up to [0,m_y].
    {
        SupportFunction2D f;
        f.add(Rational(0), Rational(1), -d / 2);
        f.add(Rational(0), me, cat * plan.a);
        f.add(Rational(0), plan.m_y, d * (plan.b + plan.a * (1 - me)) / (2 * W));
        emit(Orientation::Vertical, f);
    }
    // T2: mirrored split of a delta/2 piece of [1,0].
    {
        SupportFunction2D f;
        f.add(Rational(1), Rational(0), -d / 2);
        f.add(me, Rational(0), cat * plan.b);
        f.add(plan.m_x, Rational(0), d * (plan.a + plan.b * (1 - me)) / (2 * W));
        emit(Orientation::Horizontal, f);
    }
    // T3 + T4: catalyst creation, two legs per routed point.
    {
        SupportFunction2D f;
        for (const auto& r : pl.route_a) {
            f.add(Rational(0), me, -cat * r.w);
            f.add(Rational(0), r.p.y, cat * r.w);
        }
        for (const auto& r : pl.route_b) {
            f.add(me, Rational(0), -cat * r.w);
            f.add(me, r.p.y, cat * r.w);
        }
        emit(Orientation::Vertical, f);
    }
    {
        SupportFunction2D f;
        for (const auto& r : pl.route_a) {
            f.add(Rational(0), r.p.y, -cat * r.w);
            f.add(r.p.x, r.p.y, cat * r.w);
        }
        for (const auto& r : pl.route_b) {
            f.add(me, r.p.y, -cat * r.w);
            f.add(r.p.x, r.p.y, cat * r.w);
        }
        emit(Orientation::Horizontal, f);
    }

    // Main loop: apply gamma'(1-delta) (v then h), loop_count times. The
    // catalyst covers each v^- withdrawal since gamma' <= gamma.
    const Rational step = plan.gamma_prime * (1 - d);
    const SupportFunction2D dv = t.v.scaled(step);
    const SupportFunction2D dh = t.h.scaled(step);
    for (long i = 0; i < plan.loop_count; ++i) {
        emit(Orientation::Vertical, dv);
        emit(Orientation::Horizontal, dh);
    }

    // Bookkeeping guard: the loop must land exactly on (1-d)[beta,alpha] + d*xi.
    {
        SupportFunction2D want = pl.xi.scaled(d);
        want.add(beta, alpha, 1 - d);
        if (!(cur == want))
            throw std::runtime_error("compiler bookkeeping error after main loop");
    }

    // T5: raise every xi point to height n_y.
    {
        SupportFunction2D f;
        for (const auto& [p, w] : pl.xi.entries()) {
            f.add(p, -d * w);
            f.add(p.x, plan.n_y, d * w);
        }
        emit(Orientation::Vertical, f);
    }
    // T6: merge the row at n_y into delta [n_x, n_y].
    {
        SupportFunction2D f;
        for (const auto& [p, w] : pl.xi.entries()) f.add(p.x, plan.n_y, -d * w);
        f.add(plan.n_x, plan.n_y, d);
        emit(Orientation::Horizontal, f);
    }
    // T7: raise all but delta' of the main mass to alpha + epsilon.
    {
        SupportFunction2D f;
        f.add(beta, alpha, -(1 - d - dp));
        f.add(beta, alpha + epsilon, 1 - d - dp);
        emit(Orientation::Vertical, f);
    }
    // T8: push the delta' sliver out to n_x.
    {
        SupportFunction2D f;
        f.add(beta, alpha, -dp);
        f.add(plan.n_x, alpha, dp);
        emit(Orientation::Horizontal, f);
    }
    // T9: merge at x = n_x down to height alpha + epsilon (exact mean).
    {
        SupportFunction2D f;
        f.add(plan.n_x, alpha, -dp);
        f.add(plan.n_x, plan.n_y, -d);
        f.add(plan.n_x, alpha + epsilon, d + dp);
        emit(Orientation::Vertical, f);
    }
    // T10: merge the row at alpha + epsilon into the final point (exact mean).
    {
        SupportFunction2D f;
        f.add(beta, alpha + epsilon, -(1 - d - dp));
        f.add(plan.n_x, alpha + epsilon, -(d + dp));
        f.add(beta + epsilon, alpha + epsilon, Rational(1));
        emit(Orientation::Horizontal, f);
    }
    return {std::move(g), plan};
}

RoundCount count_rounds(const Tipg& t, const Rational& epsilon) {
    Plan pl = make_plan(t, epsilon);
    RoundCount rc;
    rc.exact = pl.plan.transitions;
    Rational top = 0;
    for (const auto& [p, w] : t.h.entries()) {
        (void)w;
        top = std::max({top, p.x, p.y});
    }
    for (const auto& [p, w] : t.v.entries()) {
        (void)w;
        top = std::max({top, p.x, p.y});
    }
    rc.envelope = t.h.norm() * top * top / (epsilon * epsilon);
    return rc;
}

PointGame shift_to_strict(const PointGame& g, const Rational& epsilon) {
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    long nh = 0, nv = 0;
    for (Orientation o : g.orientations)
        (o == Orientation::Horizontal ? nh : nv)++;
    const Rational sx = nh > 0 ? epsilon / nh : Rational(0);
    const Rational sy = nv > 0 ? epsilon / nv : Rational(0);

    PointGame out;
    out.orientations = g.orientations;
    out.frames.reserve(g.frames.size());
    out.frames.push_back(g.frames.front());
    Rational ox = 0, oy = 0;
    for (std::size_t i = 0; i < g.orientations.size(); ++i) {
        if (g.orientations[i] == Orientation::Horizontal)
            ox += sx;
        else
            oy += sy;
        SupportFunction2D shifted;
        for (const auto& [p, w] : g.frames[i + 1].entries())
            shifted.add(p.x + ox, p.y + oy, w);
        out.frames.push_back(std::move(shifted));
    }
    return out;
}

ResourceReport resource_report(const PointGame& g) {
    std::vector<Rational> xs, ys;
    for (const auto& fr : g.frames)
        for (const auto& [p, w] : fr.entries()) {
            (void)w;
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    ResourceReport r;
    r.support_a = xs.size();
    r.support_b = ys.size();
    r.rounds = static_cast<long>(g.transition_count());
    auto clog2 = [](unsigned long v) {
        long b = 0;
        while ((1ul << b) < v) ++b;
        return b;
    };
    r.qubits = clog2(2 * r.support_a) + clog2(r.support_a * r.support_b) +
               clog2(2 * r.support_b);
    return r;
}

}  // namespace mforge
