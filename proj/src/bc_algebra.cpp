#include "pointwave/bc_algebra.hpp"

#include <Eigen/SVD>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pointwave {

std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double InteractionConfig::min_delay() const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            m = std::min(m, distance_matrix(i, j));
    return m;
}

double green_function(const Vec3& x) {
    const double r = x.norm();
    if (r == 0.0)
        throw std::domain_error("green_function: singular at the origin");
    return 1.0 / (kFourPi * r);
}

InteractionConfig build_config(std::vector<Vec3> points, CMatrix A, CMatrix B) {
    const int n = static_cast<int>(points.size());
    if (A.rows() != n || A.cols() != n || B.rows() != n || B.cols() != n)
        throw std::invalid_argument(
            "build_config: A and B must be " + std::to_string(n) + "x" +
            std::to_string(n) + " to match the point count");
    InteractionConfig cfg;
    cfg.green_matrix = RMatrix::Zero(n, n);
    cfg.distance_matrix = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = (points[i] - points[j]).norm();
            if (d == 0.0)
                throw std::invalid_argument(
                    "build_config: duplicate interaction points at indices " +
                    std::to_string(i) + " and " + std::to_string(j));
            cfg.distance_matrix(i, j) = cfg.distance_matrix(j, i) = d;
            const double g = 1.0 / (kFourPi * d);
            cfg.green_matrix(i, j) = cfg.green_matrix(j, i) = g;
        }
    }
    cfg.points = std::move(points);
    cfg.A = std::move(A);
    cfg.B = std::move(B);
    return cfg;
}

bool ValidationReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

const ValidationCheck* ValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.passed) return &c;
    return nullptr;
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    os << "boundary pair validation\n";
    for (const auto& c : checks)
        os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.id
           << "  residual=" << format_sig12(c.residual)
           << "  threshold=" << format_sig12(c.threshold)
           << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    os << "  [INFO] A " << (a_invertible ? "invertible" : "not invertible")
       << "  cond(A)=" << format_sig12(cond_A) << "\n";
    os << "  [INFO] det(AA*+BB*)=" << format_sig12(det_gram) << "\n";
    os << "overall: " << (passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

namespace {

double cond_number(const CMatrix& m) {
    if (m.rows() == 0) return 1.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

} // namespace

ValidationReport validate_pair(const InteractionConfig& config) {
    const CMatrix& A = config.A;
    const CMatrix& B = config.B;
    const int n = config.size();
    ValidationReport rep;

    const double normA = A.norm();
    const double normB = B.norm();
    const double symm_tol = tol::symm(normA, normB);
    const double symm_res = (A * B.adjoint() - B * A.adjoint()).norm();
    rep.checks.push_back({"symmetry", symm_res <= symm_tol, symm_res, symm_tol,
                          "|AB* - BA*|_F"});

    double rank_ratio = 1.0;
    if (n > 0) {
        CMatrix AB(n, 2 * n);
        AB << A, B;
        Eigen::JacobiSVD<CMatrix> svd(AB);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(n - 1);
        rank_ratio = (smax == 0.0) ? 0.0 : smin / smax;
    }
    rep.checks.push_back({"rank", rank_ratio > tol::kRankRatio, rank_ratio,
                          tol::kRankRatio, "sigma_min/sigma_max of (A,B)"});

    const CMatrix gram = A * A.adjoint() + B * B.adjoint();
    rep.det_gram = (n == 0) ? 1.0 : gram.determinant().real();

    rep.cond_A = cond_number(A);
    rep.a_invertible = rep.cond_A < tol::kCondLimit;
    return rep;
}

std::string ExtensionClass::verdict_name() const {
    switch (verdict) {
        case Verdict::Invalid: return "Invalid";
        case Verdict::Local: return "Local";
        case Verdict::NonLocal: return "NonLocal";
    }
    return "?";
}

ExtensionClass classify_locality(const InteractionConfig& config) {
    const int n = config.size();
    ExtensionClass out;
    const ValidationReport rep = validate_pair(config);
    out.a_invertible = rep.a_invertible;
    if (!rep.passed()) {
        const ValidationCheck* fail = rep.first_failure();
        out.verdict = ExtensionClass::Verdict::Invalid;
        out.invalid_reason = fail->id;
        out.invalid_message = fail->id + " check failed: residual " +
                              format_sig12(fail->residual) + " vs threshold " +
                              format_sig12(fail->threshold);
        return out;
    }
    if (rep.a_invertible)
        out.hermitian_H = config.A.fullPivLu().solve(config.B);

    if (n == 0) {
        out.verdict = ExtensionClass::Verdict::Local;
        out.transform = CMatrix(0, 0);
        out.diag_A = CVector(0);
        out.diag_B = CVector(0);
        return out;
    }

    // Column-span test: [a_k b_k] must be numerically rank one for every k.
    CMatrix reps(n, n);
    for (int k = 0; k < n; ++k) {
        CMatrix pair(n, 2);
        pair.col(0) = config.A.col(k);
        pair.col(1) = config.B.col(k);
        Eigen::JacobiSVD<CMatrix> svd(pair);
        const double s1 = svd.singularValues()(0);
        const double s2 = svd.singularValues()(1);
        if (s1 == 0.0 || s2 > tol::kParallelRatio * s1) {
            out.verdict = ExtensionClass::Verdict::NonLocal;
            return out;
        }
        const double na = config.A.col(k).norm();
        const double nb = config.B.col(k).norm();
        reps.col(k) = (na >= nb) ? config.A.col(k) : config.B.col(k);
    }
    if (cond_number(reps) >= tol::kCondLimit) {
        out.verdict = ExtensionClass::Verdict::NonLocal;
        return out;
    }
    const CMatrix M = reps.fullPivLu().inverse();
    const CMatrix DA = M * config.A;
    const CMatrix DB = M * config.B;
    const double offdiag = (DA - CMatrix(DA.diagonal().asDiagonal())).norm() +
                           (DB - CMatrix(DB.diagonal().asDiagonal())).norm();
    if (offdiag > 1e-8 * (1.0 + DA.norm() + DB.norm())) {
        out.verdict = ExtensionClass::Verdict::NonLocal;
        return out;
    }
    out.verdict = ExtensionClass::Verdict::Local;
    out.transform = M;
    out.diag_A = DA.diagonal();
    out.diag_B = DB.diagonal();
    return out;
}

Cplx boundary_symplectic_form(const BoundaryVector& u, const BoundaryVector& v) {
    if (u.regular.size() != v.regular.size() ||
        u.singular.size() != v.singular.size() ||
        u.regular.size() != u.singular.size())
        throw std::invalid_argument("boundary_symplectic_form: dimension mismatch");
    return (u.regular.array() * v.singular.array().conjugate()).sum() -
           (u.singular.array() * v.regular.array().conjugate()).sum();
}

std::vector<BoundaryVector> boundary_kernel_basis(const InteractionConfig& config) {
    const ValidationReport rep = validate_pair(config);
    if (!rep.passed())
        throw std::invalid_argument("boundary_kernel_basis: pair failed validation (" +
                                    rep.first_failure()->id + ")");
    const int n = config.size();
    std::vector<BoundaryVector> basis;
    if (n == 0) return basis;
    CMatrix K(n, 2 * n);
    K << config.A, -config.B;
    Eigen::JacobiSVD<CMatrix> svd(K, Eigen::ComputeFullV);
    basis.reserve(n);
    for (int k = n; k < 2 * n; ++k) {
        BoundaryVector bv;
        bv.regular = svd.matrixV().col(k).head(n);
        bv.singular = svd.matrixV().col(k).tail(n);
        basis.push_back(std::move(bv));
    }
    return basis;
}

CVector initial_charges(const InteractionConfig& config, const CVector& phi0_at_points) {
    const int n = config.size();
    if (phi0_at_points.size() != n)
        throw std::invalid_argument("initial_charges: value vector size mismatch");
    const CMatrix lhs = config.B - config.A * config.green_matrix.cast<Cplx>();
    if (cond_number(lhs) >= tol::kCondLimit)
        throw std::runtime_error("initial_charges: matrix B - A*G is numerically singular");
    return lhs.fullPivLu().solve(config.A * phi0_at_points);
}

} // namespace pointwave
