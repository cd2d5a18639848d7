#pragma once
// Lifting point games with elementary transitions to explicit WCF protocol
// descriptions with numerically verified dual-feasible certificates, plus the
// reverse extraction and honest simulation. This is the only floating-point
// module; exact rationals are converted to double at the boundary.

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "mforge/point_game.hpp"
#include "mforge/validity.hpp"

namespace mforge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Certificate for one EBM line transition l -> r:
//   l = prob[X, psi], r = prob[Y, psi], 0 <= X <= Y (up to tolerance).
struct EbmWitness {
    Matrix X;
    Matrix Y;
    Vector psi;
    double lambda = 0;  // padding eigenvalue used (merge case), > max coord
};

struct NotElementarilyValid : std::runtime_error {
    NotElementarilyValid() : std::runtime_error("elementary condition fails") {}
};

struct NonElementaryTransition : std::runtime_error {
    std::size_t index;  // transition index in the game
    Rational line;      // fixed coordinate of the offending line
    NonElementaryTransition(std::size_t i, const Rational& l);
};

struct AmbiguousEigenvalueClustering : std::runtime_error {
    AmbiguousEigenvalueClustering()
        : std::runtime_error("eigenvalue clusters closer than 10x tolerance") {}
};

// Elementary witnesses. Raise: X=[x], Y=[x']. Merge: X=diag(x_i),
// Y = x3 P_u + lambda (I-P_u) with u = psi/|psi|; lambda starts at the hint
// and doubles until min eig(Y-X) >= -tol max(1,|Y|) (boundary merges are
// EBM-closure points and only admit approximate witnesses). Split mirrored:
// X = x P_u, Y = diag(x_i). Throws NotElementarilyValid when the exact
// closed-form condition fails.
EbmWitness synthesize_witness(ElementaryKind kind, const ElementaryData& d,
                              double lambda_hint, double tol = 1e-9);

// Block-diagonal direct sum; prob functions add.
EbmWitness direct_sum_witnesses(const std::vector<EbmWitness>& ws);

// Standard form over the 2|S|^2-dimensional space span{|b,z,z'>}:
//   Y = sum_z z |0,z,z><0,z,z| + lambda sum_z |1,z,z><1,z,z|,
//   X = sum_z z |phi(z)><phi(z)|,  psi = sum_z sqrt(r(z)) |0,z,z>.
struct CanonicalWitness {
    std::vector<double> S;  // sorted coordinate values
    double lambda = 0;
    Matrix phi;  // 2|S|^2 x |S| orthonormal columns, column j for S[j]
    Vector psi;  // in the standard basis
    Matrix X() const;
    Matrix Y() const;
};

// Runs the spectrum-normalization algorithm: multiplicity stripping through
// the projections of psi, appending of missing S-values, padding, and the
// basis rotation onto |b,z,z'>.
CanonicalWitness canonicalize_witness(const EbmWitness& w,
                                      const std::vector<double>& S,
                                      double lambda, double tol = 1e-9);

struct ProtocolDescription {
    std::vector<Rational> sa;  // S_A, sorted x-coordinates (exact)
    std::vector<Rational> sb;  // S_B, sorted y-coordinates (exact)
    double lambda_a = 0, lambda_b = 0;
    int rounds = 0;  // n, even; round i odd = Alice (horizontal)
    // Round i (1-based) at [i-1]: controlled-unitary blocks in the canonical
    // |b,z,z'> index convention; one block per control value (z_B for Alice
    // rounds, z_A for Bob rounds). Block dimension 2|S|^2 of the acting side.
    std::vector<std::vector<Matrix>> unitary_blocks;
    std::vector<Orientation> round_orientation;  // [i-1]; Horizontal = Alice
    std::vector<Vector> honest;                  // psi_0..psi_n, full space
    std::vector<Matrix> za;                      // Z_{A,i}, i=0..n, on A
    std::vector<Matrix> zb;                      // Z_{B,i}, i=0..n, on B
    double tol = 1e-9;

    long na() const { return static_cast<long>(sa.size()); }
    long nb() const { return static_cast<long>(sb.size()); }
    long dim_a() const { return 2 * na(); }         // |b, z_A>
    long dim_b() const { return 2 * nb(); }         // |z_B, b>
    long dim_m() const { return na() * nb(); }      // |z_A, z_B>
    long dim_total() const { return dim_a() * dim_m() * dim_b(); }
    Matrix pi_a1() const;  // |0, z_A=1><...|
    Matrix pi_b0() const;  // |z_B=1, 0><...|
};

// Lift a point game whose per-line moves are elementary. The game is first
// normalized: identity transitions are inserted so orientations strictly
// alternate, end horizontally, and start vertically (protocol time runs
// backward through the game). Throws NonElementaryTransition when a line
// does not decompose into a single raise/merge/split plus parallel raises.
ProtocolDescription emit_protocol(const PointGame& g);

struct DualReport {
    bool ok = false;
    double beta = 0;   // certified P_B* <= beta
    double alpha = 0;  // certified P_A* <= alpha
    double min_lmi_margin = 0;      // most negative scaled LMI eigenvalue
    double max_equality_gap = 0;    // even-round equality / boundary checks
    double eigvec_residual = 0;     // constraint (6) residuals
    std::vector<std::string> failures;
};

DualReport verify_dual_feasibility(const ProtocolDescription& p, double tol);

// Frames from prob[Z_{A,i}, Z_{B,i}, psi_i] (game frame j at i = n-j);
// eigenvalues clustered at cluster_tol, weights snapped to rationals with
// denominator <= den_bound. Orientations inferred from line conservation.
PointGame extract_point_game(const ProtocolDescription& p,
                             double cluster_tol = 1e-7,
                             long den_bound = 1000000);

struct HonestRun {
    double p_a = 0;                  // |Pi_A0 x I x Pi_B0 psi_n|^2
    double p_b = 0;                  // |Pi_A1 x I x Pi_B1 psi_n|^2
    double correctness_residual = 0; // max disagreement projection norm
    double replay_residual = 0;      // max_i |E_i U_i psi_{i-1} - psi_i|
};

HonestRun simulate_honest(const ProtocolDescription& p);

}  // namespace mforge
