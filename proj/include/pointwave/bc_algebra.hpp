#pragma once

#include "pointwave/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pointwave {

/// A point-interaction configuration: interaction points, the boundary
/// matrix pair (A, B), and the derived geometry matrices
///   G_ij = 1/(4*pi*|y_i - y_j|) (i != j), G_jj = 0,
///   D_ij = |y_i - y_j|.
struct InteractionConfig {
    std::vector<Vec3> points;
    CMatrix A;
    CMatrix B;
    RMatrix green_matrix;
    RMatrix distance_matrix;

    int size() const { return static_cast<int>(points.size()); }
    /// Smallest positive pairwise distance; +inf when fewer than two points.
    double min_delay() const;
};

/// Free-space Green function of -Laplace in 3D, 1/(4*pi*|x|).
double green_function(const Vec3& x);

InteractionConfig build_config(std::vector<Vec3> points, CMatrix A, CMatrix B);

struct ValidationCheck {
    std::string id;      // "symmetry" | "rank"
    bool passed;
    double residual;     // scale-free measure, see label
    double threshold;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool a_invertible = false;
    double cond_A = 0.0;            // +inf when singular
    double det_gram = 0.0;          // det(AA* + BB*), diagnostic
    bool passed() const;
    const ValidationCheck* first_failure() const;
    std::string to_text() const;
};

/// Checks the admissibility conditions on (A, B): AB* = BA* and full rank of
/// the n x 2n block (A, B). Failures are report entries, never exceptions.
/// det(AA* + BB*) is reported alongside as the pencil-regularity diagnostic.
ValidationReport validate_pair(const InteractionConfig& config);

struct ExtensionClass {
    enum class Verdict { Invalid, Local, NonLocal };
    Verdict verdict = Verdict::Invalid;
    std::string invalid_reason;     // check id when verdict == Invalid
    std::string invalid_message;

    // Local only: M*A and M*B are diagonal with these diagonals.
    CMatrix transform;              // M, invertible
    CVector diag_A;
    CVector diag_B;

    bool a_invertible = false;
    std::optional<CMatrix> hermitian_H;   // A^{-1} B, present when A invertible

    bool is_local() const { return verdict == Verdict::Local; }
    std::string verdict_name() const;
};

/// Classifies the boundary conditions. Local means that for every k the k-th
/// columns of A and B span a one-dimensional space and the chosen nonzero
/// representatives are linearly independent; the returned transform
/// diagonalizes the pair from the left.
ExtensionClass classify_locality(const InteractionConfig& config);

/// Generalized boundary values: regular part phi^r and singular part phi^s.
struct BoundaryVector {
    CVector regular;
    CVector singular;
};

/// The symplectic form [u, v] = <(u^r, u^s), J (v^r, v^s)> on C^{2n} with
/// J = [[0, I], [-I, 0]] and the inner product conjugate-linear in its
/// second slot:  [u, v] = sum_j u^r_j conj(v^s_j) - u^s_j conj(v^r_j).
Cplx boundary_symplectic_form(const BoundaryVector& u, const BoundaryVector& v);

/// n linearly independent boundary vectors spanning the null space of the
/// n x 2n map (phi^r, phi^s) -> A phi^r - B phi^s (the Lagrangian plane).
std::vector<BoundaryVector> boundary_kernel_basis(const InteractionConfig& config);

/// Solves (B - A G) zeta = A phi0(Y) for the static charge decomposition.
CVector initial_charges(const InteractionConfig& config, const CVector& phi0_at_points);

namespace tol {
inline constexpr double kRankRatio = 1e-10;        // sigma_min/sigma_max of (A,B)
inline constexpr double kParallelRatio = 1e-10;    // sigma_2/sigma_1 of [a_k b_k]
inline constexpr double kCondLimit = 1e12;         // invertibility threshold
inline double symm(double normA, double normB) { return 1e-10 * (1.0 + normA * normB); }
} // namespace tol

} // namespace pointwave
