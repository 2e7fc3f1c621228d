#include "spikepca/eigencore.hpp"
#include "spikepca/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace spikepca {

namespace {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw Error(ErrorKind::NonFinite, std::string(what) + " has NaN or Inf entries");
}

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    const Eigen::Index n = a.rows();
    for (Eigen::Index q = 1; q < n; ++q)
        for (Eigen::Index p = 0; p < q; ++p) sum += a(p, q) * a(p, q);
    return std::sqrt(2.0 * sum);
}

// Descending order plus the largest-component-positive sign rule.
EigenResult finalize(const Vector& values, const Matrix& vectors, EigenPath path) {
    const Eigen::Index n = values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });

    EigenResult out;
    out.path = path;
    out.values.resize(n);
    out.vectors.resize(vectors.rows(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values[k] = values[src];
        auto col = vectors.col(src);
        Eigen::Index lead = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::abs(col[i]) > best) {
                best = std::abs(col[i]);
                lead = i;
            }
        }
        out.vectors.col(k) = col[lead] < 0 ? Vector(-col) : Vector(col);
    }
    return out;
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) {
    if (m.rows() != m.cols())
        throw Error(ErrorKind::DimensionMismatch,
                    "symmetric matrix must be square, got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
    if (m.rows() < 1) throw Error(ErrorKind::DimensionMismatch, "symmetric matrix needs order >= 1");
    m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index order) {
    if (order < 1) throw Error(ErrorKind::DimensionMismatch, "symmetric matrix needs order >= 1");
    return SymMatrix(Matrix::Identity(order, order), Trusted{});
}

SymMatrix SymMatrix::diagonal(const Vector& diag) {
    if (diag.size() < 1) throw Error(ErrorKind::DimensionMismatch, "symmetric matrix needs order >= 1");
    return SymMatrix(Matrix(diag.asDiagonal()), Trusted{});
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
    if (order() != other.order()) throw Error(ErrorKind::DimensionMismatch, "order mismatch in sum");
    return SymMatrix(m_ + other.m_, Trusted{});
}

const char* to_string(EigenPath path) { return path == EigenPath::Direct ? "direct" : "dual"; }

namespace detail {

void jacobi_eigen(Matrix a, Vector& values, Matrix& vectors) {
    const Eigen::Index n = a.rows();
    vectors = Matrix::Identity(n, n);
    const double threshold = kJacobiTolerance * a.norm();

    int sweep = 0;
    for (;; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) break;
        if (sweep == kJacobiMaxSweeps)
            throw Error(ErrorKind::NoConvergence,
                        "Jacobi did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                double* cp = a.col(p).data();
                double* cq = a.col(q).data();
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double x = cp[i];
                    const double y = cq[i];
                    cp[i] = c * x - s * y;
                    cq[i] = s * x + c * y;
                }
                for (Eigen::Index i = 0; i < n; ++i) {
                    a(p, i) = cp[i];
                    a(q, i) = cq[i];
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                double* vp = vectors.col(p).data();
                double* vq = vectors.col(q).data();
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double x = vp[i];
                    const double y = vq[i];
                    vp[i] = c * x - s * y;
                    vq[i] = s * x + c * y;
                }
            }
        }
    }
    values = a.diagonal();
}

}  // namespace detail

EigenResult sym_eigen(const SymMatrix& m, SolverMethod method) {
    require_finite(m.matrix(), "matrix");
    if (method == SolverMethod::Auto)
        method = m.order() <= kJacobiMaxOrder ? SolverMethod::Jacobi : SolverMethod::TridiagonalQL;

    Vector values;
    Matrix vectors;
    if (method == SolverMethod::Jacobi)
        detail::jacobi_eigen(m.matrix(), values, vectors);
    else
        detail::tridiagonal_ql_eigen(m.matrix(), values, vectors);
    return finalize(values, vectors, EigenPath::Direct);
}

SymMatrix sample_cov(const DataMatrix& x) {
    if (x.rows() < 1 || x.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "data matrix must be nonempty");
    require_finite(x, "data matrix");
    const Eigen::Index d = x.rows();
    Matrix s = Matrix::Zero(d, d);
    s.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(x.cols()));
    s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
    return SymMatrix(s);
}

SymMatrix dual_cov(const DataMatrix& x) {
    if (x.rows() < 1 || x.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "data matrix must be nonempty");
    require_finite(x, "data matrix");
    const Eigen::Index n = x.cols();
    Matrix s = Matrix::Zero(n, n);
    s.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / static_cast<double>(n));
    s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
    return SymMatrix(s);
}

Eigen::Index nonzero_count(const Vector& values) {
    if (values.size() == 0 || !(values[0] > 0.0)) return 0;
    const double cutoff = kZeroEigenvalueRel * values[0];
    Eigen::Index k = 0;
    while (k < values.size() && values[k] > cutoff) ++k;
    return k;
}

EigenResult dual_eigen(const DataMatrix& x, SolverMethod method) {
    const SymMatrix dual = dual_cov(x);
    const EigenResult small = sym_eigen(dual, method);
    const Eigen::Index k = std::min<Eigen::Index>(nonzero_count(small.values), x.rows());

    Vector values = small.values.head(k);
    Matrix vectors(x.rows(), k);
    const double n = static_cast<double>(x.cols());
    for (Eigen::Index j = 0; j < k; ++j) {
        Vector u = x * small.vectors.col(j) / std::sqrt(n * values[j]);
        // Absorb the O(eps) norm drift of the reconstruction.
        vectors.col(j) = u / u.norm();
    }
    EigenResult out = finalize(values, vectors, EigenPath::Dual);
    return out;
}

EigenResult direct_eigen(const DataMatrix& x, SolverMethod method) {
    EigenResult full = sym_eigen(sample_cov(x), method);
    const Eigen::Index k = std::min<Eigen::Index>(nonzero_count(full.values), x.cols());
    EigenResult out;
    out.path = EigenPath::Direct;
    out.values = full.values.head(k);
    out.vectors = full.vectors.leftCols(k);
    return out;
}

WielandtBounds wielandt_check(const SymMatrix& a, const SymMatrix& b, Eigen::Index j) {
    const Eigen::Index p = a.order();
    if (b.order() != p) throw Error(ErrorKind::DimensionMismatch, "Wielandt check needs equal orders");
    if (j < 1 || j > p)
        throw Error(ErrorKind::DimensionMismatch, "index j=" + std::to_string(j) + " outside 1.." + std::to_string(p));

    const Vector la = sym_eigen(a).values;
    const Vector lb = sym_eigen(b).values;
    const Vector lab = sym_eigen(a + b).values;
    // 1-based accessors.
    auto eig_a = [&](Eigen::Index i) { return la[i - 1]; };
    auto eig_b = [&](Eigen::Index i) { return lb[i - 1]; };

    WielandtBounds out;
    out.lower = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k <= p - j; ++k) out.lower = std::max(out.lower, eig_a(j + k) + eig_b(p - k));
    out.upper = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k <= j - 1; ++k) out.upper = std::min(out.upper, eig_a(j - k) + eig_b(1 + k));
    out.value = lab[j - 1];

    const double slack = 1e-10 * std::max(1.0, a.matrix().norm() + b.matrix().norm());
    out.holds = out.lower - slack <= out.value && out.value <= out.upper + slack;
    return out;
}

}  // namespace spikepca
