#include "mforge/protocol.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace mforge {

NonElementaryTransition::NonElementaryTransition(std::size_t i, const Rational& l)
    : std::runtime_error("transition " + std::to_string(i) + ", line " +
                         to_string(l) + ": no elementary decomposition"),
      index(i),
      line(l) {}

namespace {

double min_eig(const Matrix& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(((m + m.transpose()) / 2).eval());
    return es.eigenvalues().minCoeff();
}

// Extends k orthonormal columns to a full orthonormal basis of R^D, picking
// the coordinate vector with the largest residual at every step.
Matrix mgs_complete(const Matrix& q) {
    const long D = q.rows(), k = q.cols();
    Matrix out(D, D);
    out.leftCols(k) = q;
    long have = k;
    while (have < D) {
        long best = -1;
        double best_norm = -1;
        Vector best_r;
        for (long c = 0; c < D; ++c) {
            Vector r = Vector::Unit(D, c);
            r -= out.leftCols(have) * (out.leftCols(have).transpose() * r);
            // second orthogonalization pass for stability
            r -= out.leftCols(have) * (out.leftCols(have).transpose() * r);
            const double n = r.norm();
            if (n > best_norm) {
                best_norm = n;
                best = c;
                best_r = r;
            }
        }
        (void)best;
        out.col(have++) = best_r / best_norm;
    }
    return out;
}

long canon_idx(long b, long zj, long zk, long n) { return (b * n + zj) * n + zk; }

}  // namespace

EbmWitness synthesize_witness(ElementaryKind kind, const ElementaryData& d,
                              double lambda_hint, double tol) {
    if (!check_elementary(kind, d)) throw NotElementarilyValid{};
    EbmWitness w;
    w.lambda = lambda_hint;
    auto sqrtw = [](const Rational& r) { return std::sqrt(to_double(r)); };

    if (kind == ElementaryKind::Raise) {
        w.X = Matrix::Constant(1, 1, to_double(d.source.at(0).first));
        w.Y = Matrix::Constant(1, 1, to_double(d.targets.at(0).first));
        w.psi = Vector::Constant(1, sqrtw(d.source.at(0).second));
        return w;
    }
    if (kind == ElementaryKind::Split) {
        const long k = static_cast<long>(d.targets.size());
        w.Y = Matrix::Zero(k, k);
        w.psi = Vector::Zero(k);
        for (long i = 0; i < k; ++i) {
            w.Y(i, i) = to_double(d.targets[i].first);
            w.psi(i) = sqrtw(d.targets[i].second);
        }
        Vector u = w.psi.normalized();
        w.X = to_double(d.source.at(0).first) * (u * u.transpose());
        return w;
    }
    // Merge: Y = x3 P_u + lambda (I - P_u); boundary merges only admit
    // approximate witnesses, so lambda doubles until the margin clears.
    const long k = static_cast<long>(d.source.size());
    w.X = Matrix::Zero(k, k);
    w.psi = Vector::Zero(k);
    for (long i = 0; i < k; ++i) {
        w.X(i, i) = to_double(d.source[i].first);
        w.psi(i) = sqrtw(d.source[i].second);
    }
    Vector u = w.psi.normalized();
    const double x3 = to_double(d.targets.at(0).first);
    for (int iter = 0; iter < 64; ++iter) {
        Matrix pu = u * u.transpose();
        w.Y = x3 * pu + w.lambda * (Matrix::Identity(k, k) - pu);
        if (min_eig(w.Y - w.X) >= -tol * std::max(1.0, w.Y.norm())) return w;
        w.lambda *= 2;
    }
    throw std::runtime_error("merge witness: no feasible lambda found");
}

EbmWitness direct_sum_witnesses(const std::vector<EbmWitness>& ws) {
    long d = 0;
    double lambda = 0;
    for (const auto& w : ws) {
        d += w.X.rows();
        lambda = std::max(lambda, w.lambda);
    }
    EbmWitness out;
    out.lambda = lambda;
    out.X = Matrix::Zero(d, d);
    out.Y = Matrix::Zero(d, d);
    out.psi = Vector::Zero(d);
    long at = 0;
    for (const auto& w : ws) {
        const long k = w.X.rows();
        out.X.block(at, at, k, k) = w.X;
        out.Y.block(at, at, k, k) = w.Y;
        out.psi.segment(at, k) = w.psi;
        at += k;
    }
    return out;
}

Matrix CanonicalWitness::X() const {
    const long n = static_cast<long>(S.size());
    Matrix x = Matrix::Zero(2 * n * n, 2 * n * n);
    for (long j = 0; j < n; ++j)
        x += S[j] * (phi.col(j) * phi.col(j).transpose());
    return x;
}

Matrix CanonicalWitness::Y() const {
    const long n = static_cast<long>(S.size());
    Matrix y = Matrix::Zero(2 * n * n, 2 * n * n);
    for (long j = 0; j < n; ++j) {
        y(canon_idx(0, j, j, n), canon_idx(0, j, j, n)) = S[j];
        y(canon_idx(1, j, j, n), canon_idx(1, j, j, n)) = lambda;
    }
    return y;
}

namespace {

// Distinct eigenvalue clusters of a symmetric matrix together with the
// (unnormalized) projections of psi onto each cluster eigenspace.
struct SpectralPart {
    double value;
    Vector proj;  // Pi^[value] psi
};

std::vector<SpectralPart> spectral_parts(const Matrix& m, const Vector& psi,
                                         double ctol) {
    std::vector<SpectralPart> out;
    const long d = m.rows();
    if (d == 0) return out;
    Eigen::SelfAdjointEigenSolver<Matrix> es(((m + m.transpose()) / 2).eval());
    long i = 0;
    while (i < d) {
        long j = i;
        Vector p = Vector::Zero(d);
        double vsum = 0;
        while (j < d && es.eigenvalues()(j) - es.eigenvalues()(i) <= ctol) {
            p += es.eigenvectors().col(j) *
                 (es.eigenvectors().col(j).dot(psi));
            vsum += es.eigenvalues()(j);
            ++j;
        }
        out.push_back({vsum / (j - i), p});
        i = j;
    }
    return out;
}

long snap_to(const std::vector<double>& vals, double x, double tol) {
    long best = -1;
    double bd = tol;
    for (std::size_t j = 0; j < vals.size(); ++j)
        if (std::abs(vals[j] - x) < bd) {
            bd = std::abs(vals[j] - x);
            best = static_cast<long>(j);
        }
    return best;
}

}  // namespace

CanonicalWitness canonicalize_witness(const EbmWitness& w,
                                      const std::vector<double>& S,
                                      double lambda, double tol) {
    const long n = static_cast<long>(S.size());
    const long D = 2 * n * n;
    const long d = w.X.rows();
    const double keep = 1e-10;
    const double ctol = 1e-7;

    // Multiplicity stripping: one direction per eigenvalue, spanned by the
    // projection of psi.
    std::vector<long> xlabel, ylabel;    // S-index of each kept part
    std::vector<Vector> xvec, yvec;      // directions in the original space
    for (const auto& part : spectral_parts(w.X, w.psi, ctol)) {
        if (part.proj.norm() <= keep) continue;
        long j = snap_to(S, part.value, 1e-6);
        if (j < 0 && std::abs(part.value) < 1e-6) continue;  // harmless 0 mass
        if (j < 0)
            throw std::runtime_error("witness X eigenvalue off the grid");
        xlabel.push_back(j);
        xvec.push_back(part.proj);
    }
    for (const auto& part : spectral_parts(w.Y, w.psi, ctol)) {
        if (part.proj.norm() <= keep) continue;
        long j = snap_to(S, part.value, 1e-6);
        if (j < 0)
            throw std::runtime_error("witness Y eigenvalue off the grid");
        ylabel.push_back(j);
        yvec.push_back(part.proj);
    }

    // Orthonormal basis of the span (modified Gram-Schmidt, two passes).
    std::vector<Vector> basis;
    auto add_to_basis = [&](Vector v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) v -= b * b.dot(v);
        if (v.norm() > 1e-9) basis.push_back(v.normalized());
    };
    for (const auto& v : xvec) add_to_basis(v);
    for (const auto& v : yvec) add_to_basis(v);
    const long h = static_cast<long>(basis.size());
    if (h > D) throw std::runtime_error("witness span exceeds canonical space");

    auto coords = [&](const Vector& v) {
        Vector c = Vector::Zero(D);
        for (long i = 0; i < h; ++i) c(i) = basis[i].dot(v);
        return c;
    };

    // Labeled eigen-directions and psi, embedded in R^D.
    std::vector<Vector> xs(n), ys(n), lams;
    std::vector<bool> has_x(n, false), has_y(n, false);
    for (std::size_t i = 0; i < xlabel.size(); ++i) {
        xs[xlabel[i]] = coords(xvec[i].normalized());
        has_x[xlabel[i]] = true;
    }
    for (std::size_t i = 0; i < ylabel.size(); ++i) {
        ys[ylabel[i]] = coords(yvec[i].normalized());
        has_y[ylabel[i]] = true;
    }
    Vector psi1 = Vector::Zero(d);
    psi1 = w.psi;
    Vector psic = coords(psi1);

    // Append the S-values missing from either spectrum, one fresh axis each.
    long cursor = h;
    auto fresh = [&]() {
        if (cursor >= D)
            throw std::runtime_error("canonical space exhausted");
        return Vector::Unit(D, cursor++);
    };
    for (long j = 0; j < n; ++j) {
        if (has_x[j] && !has_y[j]) {
            ys[j] = fresh();
        } else if (has_y[j] && !has_x[j]) {
            Vector e = fresh();
            xs[j] = e;
            lams.push_back(e);
        } else if (!has_x[j] && !has_y[j]) {
            Vector e = fresh();
            xs[j] = e;
            ys[j] = e;
        }
    }
    while (static_cast<long>(lams.size()) < n) lams.push_back(fresh());

    // Rotate onto the standard basis: ys[j] -> |0,j,j>, lams[j] -> |1,j,j>.
    Matrix q(D, 2 * n);
    for (long j = 0; j < n; ++j) q.col(j) = ys[j];
    for (long j = 0; j < n; ++j) q.col(n + j) = lams[j];
    Matrix t(D, 2 * n);
    t.setZero();
    for (long j = 0; j < n; ++j) t(canon_idx(0, j, j, n), j) = 1;
    for (long j = 0; j < n; ++j) t(canon_idx(1, j, j, n), n + j) = 1;
    Matrix qf = mgs_complete(q);
    Matrix tf = mgs_complete(t);
    Matrix u = tf * qf.transpose();

    CanonicalWitness out;
    out.S = S;
    out.lambda = lambda;
    out.phi = Matrix(D, n);
    for (long j = 0; j < n; ++j) out.phi.col(j) = u * xs[j];
    out.psi = u * psic;
    // The rotated psi must sit on the |0,z,z> pattern.
    for (long b = 0; b < 2; ++b)
        for (long zj = 0; zj < n; ++zj)
            for (long zk = 0; zk < n; ++zk)
                if (b != 0 || zj != zk)
                    if (std::abs(out.psi(canon_idx(b, zj, zk, n))) >
                        1e-7 * (1 + psic.norm()))
                        throw std::runtime_error(
                            "canonical psi off the standard pattern");
    (void)tol;
    return out;
}

// ---------------------------------------------------------------------------
// Elementary decomposition of a line transition l -> r.

namespace {

using LineMap = std::map<Rational, Rational>;

struct Move {
    ElementaryKind kind;
    ElementaryData data;
};

// Decomposes into: spectator stays, parallel raises, or a single
// raise / merge / split after removing the common part. Returns false when
// no such decomposition exists.
bool decompose_line(const LineMap& l, const LineMap& r, std::vector<Move>& out) {
    LineMap dm, dp;
    Rational total;
    for (const auto& [x, w] : l) total += w;
    for (const auto& [x, w] : r) total -= w;
    if (total != 0) return false;
    for (const auto& [x, w] : l) {
        Rational rw;
        auto it = r.find(x);
        if (it != r.end()) rw = it->second;
        Rational common = std::min(w, rw);
        if (common > 0)
            out.push_back({ElementaryKind::Raise,
                           ElementaryData{{{x, common}}, {{x, common}}}});
        if (w > common) dm[x] = w - common;
    }
    for (const auto& [x, w] : r) {
        Rational lw;
        auto it = l.find(x);
        if (it != l.end()) lw = it->second;
        if (w > lw) dp[x] = w - lw;
    }
    if (dm.empty() && dp.empty()) return true;
    if (dm.size() == 1 && dp.size() == 1) {
        if (dm.begin()->second != dp.begin()->second) return false;
        out.push_back({ElementaryKind::Raise,
                       ElementaryData{{*dm.begin()}, {*dp.begin()}}});
        return true;
    }
    if (dm.size() == 1) {
        ElementaryData d;
        d.source = {*dm.begin()};
        d.targets.assign(dp.begin(), dp.end());
        out.push_back({ElementaryKind::Split, d});
        return true;
    }
    if (dp.size() == 1) {
        ElementaryData d;
        d.source.assign(dm.begin(), dm.end());
        d.targets = {*dp.begin()};
        out.push_back({ElementaryKind::Merge, d});
        return true;
    }
    // Parallel raises: pair off ascending with equal weights.
    if (dm.size() != dp.size()) return false;
    auto a = dm.begin();
    auto b = dp.begin();
    std::vector<Move> raises;
    for (; a != dm.end(); ++a, ++b) {
        if (a->second != b->second || b->first < a->first) return false;
        raises.push_back({ElementaryKind::Raise, ElementaryData{{*a}, {*b}}});
    }
    out.insert(out.end(), raises.begin(), raises.end());
    return true;
}

// Per-fixed-coordinate restrictions of a frame.
std::map<Rational, LineMap> frame_lines(const SupportFunction2D& f, bool by_y) {
    std::map<Rational, LineMap> out;
    for (const auto& [p, w] : f.entries()) {
        if (by_y)
            out[p.y][p.x] = w;
        else
            out[p.x][p.y] = w;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// emit_protocol

Matrix ProtocolDescription::pi_a1() const {
    Matrix m = Matrix::Zero(dim_a(), dim_a());
    for (long a = 0; a < na(); ++a)
        if (sa[a] == 1) m(a, a) = 1;  // bit 0 block is the first na() entries
    return m;
}

Matrix ProtocolDescription::pi_b0() const {
    Matrix m = Matrix::Zero(dim_b(), dim_b());
    for (long b = 0; b < nb(); ++b)
        if (sb[b] == 1) m(b, b) = 1;
    return m;
}

ProtocolDescription emit_protocol(const PointGame& g) {
    if (g.frames.empty()) throw std::invalid_argument("empty game");
    if (!(g.frames.front() == initial_distribution()))
        throw std::invalid_argument("game must start at 1/2[0,1] + 1/2[1,0]");
    if (g.frames.back().size() != 1)
        throw std::invalid_argument("game must end at a single point");

    // Normalize: strict alternation, horizontal last, vertical first.
    std::vector<SupportFunction2D> frames;
    std::vector<Orientation> orients;
    frames.push_back(g.frames.front());
    for (std::size_t i = 0; i < g.orientations.size(); ++i) {
        if (!orients.empty() && orients.back() == g.orientations[i]) {
            orients.push_back(flipped(orients.back()));
            frames.push_back(frames.back());
        }
        orients.push_back(g.orientations[i]);
        frames.push_back(g.frames[i + 1]);
    }
    if (orients.empty() || orients.back() != Orientation::Horizontal) {
        orients.push_back(Orientation::Horizontal);
        frames.push_back(frames.back());
    }
    if (orients.front() != Orientation::Vertical) {
        orients.insert(orients.begin(), Orientation::Vertical);
        frames.insert(frames.begin(), frames.front());
    }
    const long n = static_cast<long>(orients.size());

    ProtocolDescription p;
    {
        std::set<Rational> sax, sby;
        for (const auto& f : frames)
            for (const auto& [pt, w] : f.entries()) {
                (void)w;
                sax.insert(pt.x);
                sby.insert(pt.y);
            }
        p.sa.assign(sax.begin(), sax.end());
        p.sb.assign(sby.begin(), sby.end());
    }
    const long na = p.na(), nb = p.nb();
    std::vector<double> sad(na), sbd(nb);
    for (long i = 0; i < na; ++i) sad[i] = to_double(p.sa[i]);
    for (long i = 0; i < nb; ++i) sbd[i] = to_double(p.sb[i]);
    double coord_max = 0;
    for (double v : sad) coord_max = std::max(coord_max, v);
    for (double v : sbd) coord_max = std::max(coord_max, v);
    const double lambda_hint = coord_max + 1;

    p.rounds = static_cast<int>(n);
    p.round_orientation.resize(n);
    p.tol = 1e-9;

    // Pass 1: raw witnesses per (round, control line); track the lambda each
    // merge needed so one game-wide padding eigenvalue can be used per side.
    std::vector<std::vector<EbmWitness>> raw(n);
    double need_a = lambda_hint, need_b = lambda_hint;
    for (long i = 1; i <= n; ++i) {
        const long j = n - i;  // game transition index
        const Orientation o = orients[j];
        p.round_orientation[i - 1] = o;
        const bool alice = (o == Orientation::Horizontal);
        if (alice != (i % 2 == 1))
            throw std::logic_error("orientation parity broken");
        auto before = frame_lines(frames[j], alice);
        auto after = frame_lines(frames[j + 1], alice);
        const auto& controls = alice ? p.sb : p.sa;
        raw[i - 1].reserve(controls.size());
        for (const auto& c : controls) {
            LineMap l, r;
            if (auto it = before.find(c); it != before.end()) l = it->second;
            if (auto it = after.find(c); it != after.end()) r = it->second;
            std::vector<Move> moves;
            if (!decompose_line(l, r, moves))
                throw NonElementaryTransition(static_cast<std::size_t>(j), c);
            std::vector<EbmWitness> ws;
            ws.reserve(moves.size());
            for (const auto& mv : moves)
                ws.push_back(
                    synthesize_witness(mv.kind, mv.data, lambda_hint, p.tol));
            EbmWitness w = direct_sum_witnesses(ws);
            (alice ? need_a : need_b) =
                std::max(alice ? need_a : need_b, w.lambda);
            raw[i - 1].push_back(std::move(w));
        }
    }
    p.lambda_a = need_a;
    p.lambda_b = need_b;

    // Pass 2: canonicalize with the global lambda and build the controlled
    // unitary blocks (phi(z) -> |0,z,z>, completed orthonormally).
    p.unitary_blocks.resize(n);
    for (long i = 1; i <= n; ++i) {
        const bool alice = p.round_orientation[i - 1] == Orientation::Horizontal;
        const auto& svals = alice ? sad : sbd;
        const double lambda = alice ? p.lambda_a : p.lambda_b;
        for (auto& w : raw[i - 1]) {
            CanonicalWitness c = canonicalize_witness(w, svals, lambda, p.tol);
            const long nn = static_cast<long>(svals.size());
            const long D = 2 * nn * nn;
            Matrix t(D, nn);
            t.setZero();
            for (long z = 0; z < nn; ++z) t(canon_idx(0, z, z, nn), z) = 1;
            Matrix u = mgs_complete(t) * mgs_complete(c.phi).transpose();
            p.unitary_blocks[i - 1].push_back(std::move(u));
        }
    }

    // Honest states: psi_i carries the amplitudes of game frame n-i.
    const long DT = p.dim_total();
    p.honest.resize(n + 1);
    for (long i = 0; i <= n; ++i) {
        Vector s = Vector::Zero(DT);
        for (const auto& [pt, w] : frames[n - i].entries()) {
            const long a = static_cast<long>(
                std::lower_bound(p.sa.begin(), p.sa.end(), pt.x) - p.sa.begin());
            const long b = static_cast<long>(
                std::lower_bound(p.sb.begin(), p.sb.end(), pt.y) - p.sb.begin());
            // |0,z_A> |z_A,z_B> |z_B,0>
            const long idx = (((0 * na + a) * na + a) * nb + b) * (2 * nb) +
                             (0 * nb + b);
            s(idx) = std::sqrt(to_double(w));
        }
        p.honest[i] = std::move(s);
    }

    // Dual matrices.
    Matrix za = Matrix::Zero(2 * na, 2 * na);
    for (long a = 0; a < na; ++a) {
        za(a, a) = sad[a];
        za(na + a, na + a) = p.lambda_a;
    }
    Matrix zbm = Matrix::Zero(2 * nb, 2 * nb);
    for (long b = 0; b < nb; ++b) {
        zbm(b, b) = sbd[b];
        zbm(nb + b, nb + b) = p.lambda_b;
    }
    p.za.assign(n + 1, za);
    p.zb.assign(n + 1, zbm);
    p.za[n] = p.pi_a1();
    p.zb[n] = p.pi_b0();
    return p;
}

// ---------------------------------------------------------------------------
// Full-space state evolution.

namespace {

// State index: (((iA * na + ap) * nb + bp) * 2nb) + iB, with iA = bitA*na+a,
// iB = bitB*nb+b.
struct Dims {
    long na, nb;
    long da() const { return 2 * na; }
    long db() const { return 2 * nb; }
    long total() const { return da() * na * nb * db(); }
};

Vector apply_round(const ProtocolDescription& p, long i, const Vector& in) {
    const Dims d{p.na(), p.nb()};
    const bool alice = p.round_orientation[i - 1] == Orientation::Horizontal;
    Vector out = Vector::Zero(in.size());
    if (alice) {
        const long CA = d.da() * d.na;  // A x A' composite, canonical order
        const auto& blocks = p.unitary_blocks[i - 1];
        for (long bp = 0; bp < d.nb; ++bp) {
            const Matrix& u = blocks[bp];
            for (long ib = 0; ib < d.db(); ++ib) {
                Vector v(CA);
                for (long c = 0; c < CA; ++c)
                    v(c) = in((c * d.nb + bp) * d.db() + ib);
                Vector r = u * v;
                for (long c = 0; c < CA; ++c)
                    out((c * d.nb + bp) * d.db() + ib) += r(c);
            }
        }
        // E_A: keep |0,z_A> |z_A, .>
        for (long s = 0; s < in.size(); ++s) {
            const long ib_rest = s % (d.nb * d.db());
            const long c = s / (d.nb * d.db());
            (void)ib_rest;
            const long ap = c % d.na;
            const long ia = c / d.na;
            if (!(ia < d.na && ia == ap)) out(s) = 0;
        }
    } else {
        const long CB = d.db() * d.nb;  // canonical |bit,z,z'> over S_B
        const auto& blocks = p.unitary_blocks[i - 1];
        for (long ia = 0; ia < d.da(); ++ia)
            for (long ap = 0; ap < d.na; ++ap) {
                const Matrix& u = blocks[ap];
                Vector v(CB);
                for (long bp = 0; bp < d.nb; ++bp)
                    for (long ib = 0; ib < d.db(); ++ib)
                        v(ib * d.nb + bp) =
                            in(((ia * d.na + ap) * d.nb + bp) * d.db() + ib);
                Vector r = u * v;
                for (long bp = 0; bp < d.nb; ++bp)
                    for (long ib = 0; ib < d.db(); ++ib)
                        out(((ia * d.na + ap) * d.nb + bp) * d.db() + ib) =
                            r(ib * d.nb + bp);
            }
        // E_B: keep |., z_B> |z_B, 0>
        for (long s = 0; s < in.size(); ++s) {
            const long ib = s % d.db();
            const long bp = (s / d.db()) % d.nb;
            if (!(ib < d.nb && ib == bp)) out(s) = 0;
        }
    }
    return out;
}

}  // namespace

HonestRun simulate_honest(const ProtocolDescription& p) {
    const Dims d{p.na(), p.nb()};
    HonestRun run;
    Vector s = p.honest.at(0);
    for (long i = 1; i <= p.rounds; ++i) {
        s = apply_round(p, i, s);
        run.replay_residual =
            std::max(run.replay_residual, (s - p.honest.at(i)).norm());
    }
    long ia1 = -1, ib1 = -1;
    for (long a = 0; a < d.na; ++a)
        if (p.sa[a] == 1) ia1 = a;
    for (long b = 0; b < d.nb; ++b)
        if (p.sb[b] == 1) ib1 = b;
    double p00 = 0, p11 = 0, p01 = 0, p10 = 0;
    for (long idx = 0; idx < s.size(); ++idx) {
        if (s(idx) == 0) continue;
        const long ib = idx % d.db();
        const long c = idx / (d.nb * d.db());
        const long ia = c / d.na;
        // Outcome 1 for Alice: bit 0, z_A = 1. Outcome 0 for Bob: bit 0, z_B=1.
        const bool alice1 = (ia == ia1);
        const bool bob0 = (ib == ib1);
        const double w = s(idx) * s(idx);
        if (!alice1 && bob0) p00 += w;       // both output 0: Alice wins
        else if (alice1 && !bob0) p11 += w;  // both output 1: Bob wins
        else if (!alice1 && !bob0) p01 += w; // Alice 0, Bob 1: disagree
        else p10 += w;                       // Alice 1, Bob 0: disagree
    }
    run.p_a = p00;
    run.p_b = p11;
    run.correctness_residual = std::sqrt(std::max(p01, p10));
    return run;
}

// ---------------------------------------------------------------------------
// Dual feasibility.

namespace {

// U_{A,i} on A x M (index (c * nb + bp), c in A x A' canonical order).
Matrix alice_unitary_am(const ProtocolDescription& p, long i) {
    const long na = p.na(), nb = p.nb();
    const long CA = 2 * na * na;
    Matrix u = Matrix::Zero(CA * nb, CA * nb);
    for (long bp = 0; bp < nb; ++bp) {
        const Matrix& blk = p.unitary_blocks[i - 1][bp];
        for (long r = 0; r < CA; ++r)
            for (long c = 0; c < CA; ++c)
                if (blk(r, c) != 0) u(r * nb + bp, c * nb + bp) = blk(r, c);
    }
    return u;
}

// U_{B,i} on M x B (index ((ap * nb + bp) * 2nb + ib)).
Matrix bob_unitary_mb(const ProtocolDescription& p, long i) {
    const long na = p.na(), nb = p.nb();
    const long CB = 2 * nb * nb;
    const long DM = na * nb * 2 * nb;
    Matrix u = Matrix::Zero(DM, DM);
    for (long ap = 0; ap < na; ++ap) {
        const Matrix& blk = p.unitary_blocks[i - 1][ap];
        for (long r = 0; r < CB; ++r) {
            const long rb = r / nb, rbp = r % nb;  // r = ib*nb + bp
            for (long c = 0; c < CB; ++c) {
                if (blk(r, c) == 0) continue;
                const long cb = c / nb, cbp = c % nb;
                u((ap * nb + rbp) * (2 * nb) + rb,
                  (ap * nb + cbp) * (2 * nb) + cb) = blk(r, c);
            }
        }
    }
    return u;
}

Matrix diag_keep(long dim, const std::function<bool(long)>& f) {
    Matrix m = Matrix::Zero(dim, dim);
    for (long s = 0; s < dim; ++s)
        if (f(s)) m(s, s) = 1;
    return m;
}

}  // namespace

DualReport verify_dual_feasibility(const ProtocolDescription& p, double tol) {
    const long na = p.na(), nb = p.nb(), n = p.rounds;
    DualReport rep;
    rep.min_lmi_margin = 0;
    auto fail = [&rep](const std::string& s) { rep.failures.push_back(s); };

    for (long i = 0; i <= n; ++i) {
        if (min_eig(p.za[i]) < -tol * std::max(1.0, p.za[i].norm()))
            fail("Z_A," + std::to_string(i) + " not PSD");
        if (min_eig(p.zb[i]) < -tol * std::max(1.0, p.zb[i].norm()))
            fail("Z_B," + std::to_string(i) + " not PSD");
    }
    if ((p.za[n] - p.pi_a1()).norm() > tol) fail("Z_A,n != Pi_A^(1)");
    if ((p.zb[n] - p.pi_b0()).norm() > tol) fail("Z_B,n != Pi_B^(0)");

    // Unitarity.
    for (long i = 1; i <= n; ++i)
        for (const auto& blk : p.unitary_blocks[i - 1]) {
            const double r =
                (blk.transpose() * blk -
                 Matrix::Identity(blk.rows(), blk.cols()))
                    .norm();
            if (r > 1e-9 * blk.rows())
                fail("round " + std::to_string(i) + ": unitarity " +
                     std::to_string(r));
        }

    // LMIs and equality constraints.
    const Matrix ea = diag_keep(2 * na * na * nb, [&](long s) {
        const long c = s / nb;
        return c / na < na && c / na == c % na;
    });
    const Matrix eb = diag_keep(na * nb * 2 * nb, [&](long s) {
        const long ib = s % (2 * nb);
        const long bp = (s / (2 * nb)) % nb;
        return ib < nb && ib == bp;
    });
    for (long i = 1; i <= n; ++i) {
        const bool alice = p.round_orientation[i - 1] == Orientation::Horizontal;
        if (alice) {
            const Matrix u = alice_unitary_am(p, i);
            Matrix zl = Matrix::Zero(2 * na * na * nb, 2 * na * na * nb);
            Matrix zr = zl;
            for (long r = 0; r < 2 * na; ++r)
                for (long c = 0; c < 2 * na; ++c) {
                    if (p.za[i - 1](r, c) != 0 || p.za[i](r, c) != 0)
                        for (long m = 0; m < na * nb; ++m) {
                            zl(r * na * nb + m, c * na * nb + m) =
                                p.za[i - 1](r, c);
                            zr(r * na * nb + m, c * na * nb + m) = p.za[i](r, c);
                        }
                }
            const Matrix lhs = zl - u.transpose() * ea * zr * ea * u;
            const double m =
                min_eig(lhs) / std::max(1.0, std::max(zl.norm(), zr.norm()));
            rep.min_lmi_margin = std::min(rep.min_lmi_margin, m);
            if (m < -tol) fail("round " + std::to_string(i) + ": Alice LMI");
            // Bob's matrices must not change on Alice's rounds.
            const double g = (p.zb[i - 1] - p.zb[i]).norm();
            rep.max_equality_gap = std::max(rep.max_equality_gap, g);
            if (g > tol) fail("round " + std::to_string(i) + ": Z_B changed");
        } else {
            const Matrix u = bob_unitary_mb(p, i);
            const long DM = na * nb * 2 * nb;
            Matrix zl = Matrix::Zero(DM, DM);
            Matrix zr = zl;
            for (long m = 0; m < na * nb; ++m)
                for (long r = 0; r < 2 * nb; ++r)
                    for (long c = 0; c < 2 * nb; ++c) {
                        if (p.zb[i - 1](r, c) != 0)
                            zl(m * 2 * nb + r, m * 2 * nb + c) =
                                p.zb[i - 1](r, c);
                        if (p.zb[i](r, c) != 0)
                            zr(m * 2 * nb + r, m * 2 * nb + c) = p.zb[i](r, c);
                    }
            const Matrix lhs = zl - u.transpose() * eb * zr * eb * u;
            const double m =
                min_eig(lhs) / std::max(1.0, std::max(zl.norm(), zr.norm()));
            rep.min_lmi_margin = std::min(rep.min_lmi_margin, m);
            if (m < -tol) fail("round " + std::to_string(i) + ": Bob LMI");
            // Alice's matrices: equality except the final relabeling to the
            // POVM, which must only decrease (Z_A,n <= Z_A,n-1).
            if (i < n) {
                const double g = (p.za[i - 1] - p.za[i]).norm();
                rep.max_equality_gap = std::max(rep.max_equality_gap, g);
                if (g > tol)
                    fail("round " + std::to_string(i) + ": Z_A changed");
            } else {
                const double m2 = min_eig((p.za[n - 1] - p.za[n]).eval());
                if (m2 < -tol * std::max(1.0, p.za[n - 1].norm()))
                    fail("Z_A,n not dominated by Z_A,n-1");
            }
        }
    }

    // Constraint (6): psi_{A,0} (resp. psi_{B,0}) eigenvector of Z_{A,0}.
    // Evaluated on the full product state psi_0.
    const Dims d{na, nb};
    const Vector& s0 = p.honest.at(0);
    Vector zs = Vector::Zero(s0.size());
    for (long idx = 0; idx < s0.size(); ++idx) {
        if (s0(idx) == 0) continue;
        const long rest = idx % (d.na * d.nb * d.db());
        const long ia = idx / (d.na * d.nb * d.db());
        for (long r = 0; r < d.da(); ++r)
            if (p.za[0](r, ia) != 0)
                zs(r * (d.na * d.nb * d.db()) + rest) += p.za[0](r, ia) * s0(idx);
    }
    const double nrm2 = s0.squaredNorm();
    rep.beta = s0.dot(zs) / nrm2;
    rep.eigvec_residual = (zs - rep.beta * s0).norm();
    Vector zsb = Vector::Zero(s0.size());
    for (long idx = 0; idx < s0.size(); ++idx) {
        if (s0(idx) == 0) continue;
        const long ib = idx % d.db();
        const long base = idx - ib;
        for (long r = 0; r < d.db(); ++r)
            if (p.zb[0](r, ib) != 0) zsb(base + r) += p.zb[0](r, ib) * s0(idx);
    }
    rep.alpha = s0.dot(zsb) / nrm2;
    rep.eigvec_residual =
        std::max(rep.eigvec_residual, (zsb - rep.alpha * s0).norm());
    if (rep.eigvec_residual > tol * std::max(1.0, p.za[0].norm()))
        fail("initial state not an eigenvector of Z_0");

    rep.ok = rep.failures.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Extraction.

namespace {

struct Clusters {
    std::vector<double> values;      // one per cluster
    Matrix vecs;                     // eigenvectors, original order
    std::vector<long> cluster_of;    // eigenvector -> cluster
};

Clusters cluster_spectrum(const Matrix& z, double ctol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(((z + z.transpose()) / 2).eval());
    Clusters c;
    c.vecs = es.eigenvectors();
    const long d = z.rows();
    c.cluster_of.resize(d);
    long i = 0;
    while (i < d) {
        long j = i;
        double sum = 0;
        while (j < d && es.eigenvalues()(j) - es.eigenvalues()(i) <= ctol) {
            sum += es.eigenvalues()(j);
            ++j;
        }
        for (long k2 = i; k2 < j; ++k2)
            c.cluster_of[k2] = static_cast<long>(c.values.size());
        c.values.push_back(sum / (j - i));
        i = j;
    }
    for (std::size_t a = 0; a + 1 < c.values.size(); ++a)
        if (c.values[a + 1] - c.values[a] < 10 * ctol)
            throw AmbiguousEigenvalueClustering{};
    return c;
}

Rational snap_rational(double v, long den_bound) {
    // Best rational approximation by continued fractions.
    if (v < 0) return -snap_rational(-v, den_bound);
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = v;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(x);
        if (fl > 1e17) break;
        const long a = static_cast<long>(fl);
        if (q1 * a + q0 > den_bound || (q1 * a + q0) < 0) break;
        const long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if (std::abs(x - fl) < 1e-12) break;
        x = 1.0 / (x - fl);
    }
    if (q1 == 0) return Rational(0);
    Rational r(p1, q1);
    r.canonicalize();
    return r;
}

}  // namespace

PointGame extract_point_game(const ProtocolDescription& p, double cluster_tol,
                             long den_bound) {
    const Dims d{p.na(), p.nb()};
    const long n = p.rounds;
    PointGame g;
    g.frames.resize(n + 1);
    for (long i = n; i >= 0; --i) {
        const Clusters ca = cluster_spectrum(p.za[i], cluster_tol);
        const Clusters cb = cluster_spectrum(p.zb[i], cluster_tol);
        const Vector& s = p.honest.at(i);
        // Rotate the A and B factors into the eigenbases.
        const long M = d.na * d.nb;
        std::map<std::pair<long, long>, double> weight;
        for (long ka = 0; ka < d.da(); ++ka)
            for (long kb = 0; kb < d.db(); ++kb) {
                // amplitude of (eigvec ka) x m x (eigvec kb), summed over m
                double wsum = 0;
                for (long m = 0; m < M; ++m) {
                    double amp = 0;
                    for (long ia = 0; ia < d.da(); ++ia)
                        for (long ib = 0; ib < d.db(); ++ib) {
                            const double v =
                                s((ia * M + m) * d.db() + ib);
                            if (v != 0)
                                amp += ca.vecs(ia, ka) * cb.vecs(ib, kb) * v;
                        }
                    wsum += amp * amp;
                }
                if (wsum > 1e-12)
                    weight[{ca.cluster_of[ka], cb.cluster_of[kb]}] += wsum;
            }
        SupportFunction2D fr;
        for (const auto& [key, w] : weight)
            fr.add(snap_rational(ca.values[key.first], den_bound),
                   snap_rational(cb.values[key.second], den_bound),
                   snap_rational(w, den_bound));
        g.frames[n - i] = std::move(fr);
    }
    g.orientations.resize(n);
    for (long j = 0; j < n; ++j)
        g.orientations[j] = p.round_orientation[n - j - 1];
    return g;
}

}  // namespace mforge
