#include "placid/dcor.hpp"

#include "placid/normal.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace placid {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("dcor: alpha must lie in (0, 1)");
}

} // namespace

DistanceProfile::DistanceProfile(const Eigen::Ref<const Vector>& v) : values(v) {
    if (values.size() < 2) throw InvalidArgument("dcor: at least two observations are required");
    detail::check_finite(values, "column");
    row_means = detail::distance_row_means(values, grand_mean);
    double s1 = detail::distance_cross_mean(values, values);
    double s3 = row_means.squaredNorm() / static_cast<double>(values.size());
    v2_self = std::max(0.0, s1 + grand_mean * grand_mean - 2.0 * s3);
}

DcorStats dcor_from_profiles(const DistanceProfile& x, const DistanceProfile& y, double alpha) {
    detail::check_pair(x.values.size(), y.values.size());
    const double n = static_cast<double>(x.values.size());
    DcorStats st;
    double s1 = detail::distance_cross_mean(x.values, y.values);
    st.s2 = x.grand_mean * y.grand_mean;
    double s3 = x.row_means.dot(y.row_means) / n;
    st.v2_xy = std::max(0.0, s1 + st.s2 - 2.0 * s3);
    st.v2_xx = x.v2_self;
    st.v2_yy = y.v2_self;
    double denom = st.v2_xx * st.v2_yy;
    if (denom > 0.0) {
        st.r = std::min(1.0, std::sqrt(st.v2_xy / std::sqrt(denom)));
    }
    if (st.s2 > 0.0 && denom > 0.0) {
        st.t = n * st.v2_xy / st.s2;
        st.reject = std::sqrt(st.t) > normal_quantile(1.0 - alpha / 2.0);
    }
    return st;
}

DcorStats dcor_test(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                    double alpha) {
    check_alpha(alpha);
    detail::check_pair(x.size(), y.size());
    return dcor_from_profiles(DistanceProfile(x), DistanceProfile(y), alpha);
}

DcorMatrices independence_matrices(const Matrix& X, const Matrix& Y, double alpha,
                                   unsigned threads) {
    check_alpha(alpha);
    if (X.rows() != Y.rows()) throw InvalidArgument("dcor: X and Y must have the same row count");
    if (X.rows() < 2) throw InvalidArgument("dcor: at least two observations are required");
    const Eigen::Index q = X.cols();
    const Eigen::Index p = Y.cols();

    std::vector<DistanceProfile> xs, ys;
    xs.reserve(q);
    ys.reserve(p);
    for (Eigen::Index i = 0; i < q; ++i) xs.emplace_back(X.col(i));
    for (Eigen::Index j = 0; j < p; ++j) ys.emplace_back(Y.col(j));

    DcorMatrices out;
    out.alpha = alpha;
    out.c = Matrix::Zero(q, p);
    out.t = Matrix::Zero(q, p);
    out.rejections = Eigen::MatrixXi::Zero(q, p);

    const Eigen::Index cells = q * p;
    auto work = [&](Eigen::Index begin, Eigen::Index end) {
        for (Eigen::Index cell = begin; cell < end; ++cell) {
            Eigen::Index i = cell / p, j = cell % p;
            DcorStats st = dcor_from_profiles(xs[i], ys[j], alpha);
            out.c(i, j) = st.r;
            out.t(i, j) = st.t;
            out.rejections(i, j) = st.reject ? 1 : 0;
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<Eigen::Index>(cells, 1))));
    if (threads == 1) {
        work(0, cells);
    } else {
        std::vector<std::thread> pool;
        Eigen::Index chunk = (cells + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            Eigen::Index b = t * chunk, e = std::min(cells, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

} // namespace placid
