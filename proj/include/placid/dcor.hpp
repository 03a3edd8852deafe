#pragma once

#include "placid/types.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>

namespace placid {

// Empirical distance-dependence statistics for one scalar pair (x, y).
struct DcorStats {
    double v2_xy = 0.0;  // squared distance covariance
    double v2_xx = 0.0;  // squared distance variance of x
    double v2_yy = 0.0;
    double r = 0.0;      // distance correlation, in [0, 1]
    double s2 = 0.0;     // product of the mean pairwise distances
    double t = 0.0;      // n * v2_xy / s2
    bool reject = false;
};

// q x p matrices of distance correlations and rejection indicators between
// every secondary column X_i and primary column Y_j.
struct DcorMatrices {
    Matrix c;
    Eigen::MatrixXi rejections;
    Matrix t;
    double alpha = 0.0;
};

namespace detail {

inline void check_pair(Eigen::Index nx, Eigen::Index ny) {
    if (nx != ny) throw InvalidArgument("dcor: x and y must have the same length");
    if (nx < 2) throw InvalidArgument("dcor: at least two observations are required");
}

template <class Derived>
void check_finite(const Eigen::MatrixBase<Derived>& v, const char* name) {
    if (!v.allFinite()) throw InvalidArgument(std::string("dcor: non-finite entry in ") + name);
}

// Row means of the pairwise distance matrix |v_r - v_s| and their grand mean.
template <class Derived>
vec_type<typename Derived::Scalar> distance_row_means(const Eigen::MatrixBase<Derived>& v,
                                                      typename Derived::Scalar& grand) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = v.size();
    vec_type<Scalar> means = vec_type<Scalar>::Zero(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index s = r + 1; s < n; ++s) {
            Scalar d = std::abs(v(r) - v(s));
            means(r) += d;
            means(s) += d;
        }
    }
    means /= static_cast<Scalar>(n);
    grand = means.mean();
    return means;
}

// (1/n^2) sum_{r,s} |x_r - x_s| |y_r - y_s|
template <class DX, class DY>
typename DX::Scalar distance_cross_mean(const Eigen::MatrixBase<DX>& x,
                                        const Eigen::MatrixBase<DY>& y) {
    using Scalar = typename DX::Scalar;
    const Eigen::Index n = x.size();
    Scalar acc = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
        Scalar row = 0;
        for (Eigen::Index s = r + 1; s < n; ++s) {
            row += std::abs(x(r) - x(s)) * std::abs(y(r) - y(s));
        }
        acc += row;
    }
    return 2 * acc / (static_cast<Scalar>(n) * static_cast<Scalar>(n));
}

} // namespace detail

// Squared empirical distance covariance as S1 + S2 - 2 S3, with S3 factored
// through the distance-matrix row means so the cost is O(n^2).
template <class DX, class DY>
typename DX::Scalar dcov_sq_direct(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
    using Scalar = typename DX::Scalar;
    detail::check_pair(x.size(), y.size());
    detail::check_finite(x, "x");
    detail::check_finite(y, "y");
    Scalar ax = 0, by = 0;
    auto a = detail::distance_row_means(x, ax);
    auto b = detail::distance_row_means(y, by);
    Scalar s1 = detail::distance_cross_mean(x, y);
    Scalar s2 = ax * by;
    Scalar s3 = a.dot(b) / static_cast<Scalar>(x.size());
    return s1 + s2 - 2 * s3;
}

// Squared empirical distance covariance via double-centered distance
// matrices: n^-2 sum_ij A_ij B_ij. Materializes two n x n matrices.
template <class DX, class DY>
typename DX::Scalar dcov_sq_centered(const Eigen::MatrixBase<DX>& x,
                                     const Eigen::MatrixBase<DY>& y) {
    using Scalar = typename DX::Scalar;
    detail::check_pair(x.size(), y.size());
    detail::check_finite(x, "x");
    detail::check_finite(y, "y");
    const Eigen::Index n = x.size();
    auto centered = [n](const auto& v) {
        mat_type<Scalar> d(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::abs(v(i) - v(j));
        }
        vec_type<Scalar> row = d.rowwise().mean();
        vec_type<Scalar> col = d.colwise().mean().transpose();
        Scalar grand = d.mean();
        d.colwise() -= row;
        d.rowwise() -= col.transpose();
        d.array() += grand;
        return d;
    };
    mat_type<Scalar> A = centered(x);
    mat_type<Scalar> B = centered(y);
    return (A.array() * B.array()).sum() / (static_cast<Scalar>(n) * static_cast<Scalar>(n));
}

// Precomputed per-column quantities so that a column can be paired with many
// others without recomputing its distance row means.
struct DistanceProfile {
    Vector values;
    Vector row_means;
    double grand_mean = 0.0;
    double v2_self = 0.0;

    explicit DistanceProfile(const Eigen::Ref<const Vector>& v);
};

DcorStats dcor_from_profiles(const DistanceProfile& x, const DistanceProfile& y, double alpha);

// Distance correlation and asymptotic independence test. Rejects when
// sqrt(T_n) exceeds the standard normal 1 - alpha/2 quantile.
DcorStats dcor_test(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                    double alpha);

// All q x p pairwise tests between columns of X (n x q) and Y (n x p).
// `threads` > 1 evaluates cells concurrently; results are identical.
DcorMatrices independence_matrices(const Matrix& X, const Matrix& Y, double alpha,
                                   unsigned threads = 1);

} // namespace placid
