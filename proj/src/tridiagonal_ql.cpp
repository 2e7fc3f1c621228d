// Householder tridiagonalization followed by the implicit QL algorithm with
// Wilkinson-type shifts (the classic tred2/tql2 pair). Used for orders where
// Jacobi sweeps are too slow.

#include "spikepca/eigencore.hpp"
#include "spikepca/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spikepca::detail {

namespace {

constexpr int kMaxQlIterations = 60;

// Reduces the symmetric matrix held in v to tridiagonal form. On exit v holds
// the accumulated orthogonal transform, d the diagonal and e the subdiagonal
// (e[0] unused).
void householder_tridiagonalize(Matrix& v, Vector& d, Vector& e) {
    const Eigen::Index n = v.rows();
    for (Eigen::Index j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (Eigen::Index i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (Eigen::Index k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (Eigen::Index j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (Eigen::Index k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (Eigen::Index j = 0; j < i; ++j) e[j] = 0.0;

            for (Eigen::Index j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (Eigen::Index k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (Eigen::Index j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (Eigen::Index j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (Eigen::Index j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                double* col = v.col(j).data();
                for (Eigen::Index k = j; k <= i - 1; ++k) col[k] -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (Eigen::Index i = 0; i < n - 1; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (Eigen::Index k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
            const double* next = v.col(i + 1).data();
            for (Eigen::Index j = 0; j <= i; ++j) {
                double* col = v.col(j).data();
                double g = 0.0;
                for (Eigen::Index k = 0; k <= i; ++k) g += next[k] * col[k];
                for (Eigen::Index k = 0; k <= i; ++k) col[k] -= g * d[k];
            }
        }
        for (Eigen::Index k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

void implicit_ql(Matrix& v, Vector& d, Vector& e) {
    const Eigen::Index n = v.rows();
    for (Eigen::Index i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (Eigen::Index l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        Eigen::Index m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iterations = 0;
            do {
                if (++iterations > kMaxQlIterations) {
                    throw Error(ErrorKind::NoConvergence,
                                "tridiagonal QL exceeded " + std::to_string(kMaxQlIterations) +
                                    " iterations at index " + std::to_string(l));
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (Eigen::Index i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (Eigen::Index i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    double* vi = v.col(i).data();
                    double* vi1 = v.col(i + 1).data();
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double t = vi1[k];
                        vi1[k] = s * vi[k] + c * t;
                        vi[k] = c * vi[k] - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

void tridiagonal_ql_eigen(const Matrix& a, Vector& values, Matrix& vectors) {
    const Eigen::Index n = a.rows();
    vectors = a;
    values.resize(n);
    if (n == 1) {
        values[0] = a(0, 0);
        vectors.setOnes();
        return;
    }
    Vector e(n);
    householder_tridiagonalize(vectors, values, e);
    implicit_ql(vectors, values, e);
}

}  // namespace spikepca::detail
