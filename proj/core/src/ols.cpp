#include "wordlelab/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <boost/math/distributions/students_t.hpp>

namespace wordlelab {

namespace {

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& x) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    // Relative threshold on |R_kk| scaled by the largest pivot.
    qr.setThreshold(1e-10);
    return qr;
}

double two_sided_p(double t, double df) {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

bool same_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!(a(i) == b(i) || (std::isnan(a(i)) && std::isnan(b(i))))) return false;
    }
    return true;
}

}  // namespace

std::string_view to_string(SmallSampleCorrection c) noexcept { return c == SmallSampleCorrection::CR1 ? "CR1" : "none"; }

std::size_t RegressionResult::index_of(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("no coefficient named '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names.begin());
}

bool operator==(const RegressionResult& a, const RegressionResult& b) {
    return a.dependent == b.dependent && a.names == b.names && same_vector(a.estimates, b.estimates) &&
           same_vector(a.std_errors, b.std_errors) && same_vector(a.t_stats, b.t_stats) &&
           same_vector(a.p_values, b.p_values) && a.covariance == b.covariance && same_vector(a.residuals, b.residuals) &&
           a.n_observations == b.n_observations && a.n_clusters == b.n_clusters && a.correction == b.correction &&
           a.dropped == b.dropped;
}

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

std::vector<std::size_t> dependent_columns(const Eigen::MatrixXd& x) {
    auto qr = decompose(x);
    const auto rank = qr.rank();
    std::vector<std::size_t> out;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = rank; k < x.cols(); ++k) out.push_back(static_cast<std::size_t>(perm(k)));
    std::sort(out.begin(), out.end());
    return out;
}

RegressionResult fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const std::int64_t> clusters,
                         std::vector<std::string> names, SmallSampleCorrection correction) {
    const auto n = x.rows();
    const auto k = x.cols();
    if (y.size() != n || static_cast<Eigen::Index>(clusters.size()) != n) {
        throw std::invalid_argument("design, response and cluster ids must have the same number of rows");
    }
    if (static_cast<Eigen::Index>(names.size()) != k) throw std::invalid_argument("one name per design column required");

    std::map<std::int64_t, Eigen::Index> cluster_slot;
    for (auto c : clusters) cluster_slot.emplace(c, static_cast<Eigen::Index>(cluster_slot.size()));
    const auto g = static_cast<Eigen::Index>(cluster_slot.size());
    if (g < 2) throw TooFewClusters("cluster-robust errors need at least two clusters");
    if (n <= k) throw std::invalid_argument("need more observations than regressors");

    auto qr = decompose(x);
    if (qr.rank() < k) {
        auto dep = dependent_columns(x);
        std::string what = "design matrix is rank deficient; dependent columns:";
        for (auto d : dep) what += " " + names[d];
        throw RankDeficient(std::move(dep), what);
    }

    RegressionResult r;
    r.names = std::move(names);
    r.estimates = qr.solve(y);
    r.residuals = y - x * r.estimates;
    r.n_observations = static_cast<std::size_t>(n);
    r.n_clusters = static_cast<std::size_t>(g);
    r.correction = correction;

    // (X'X)^-1 = P R^-1 R^-T P' from X P = Q R.
    const Eigen::MatrixXd rtop = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd rinv =
        rtop.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd inner = rinv * rinv.transpose();
    const auto& perm = qr.colsPermutation();
    const Eigen::MatrixXd bread = perm * inner * perm.transpose();

    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(g, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        scores.row(cluster_slot.at(clusters[static_cast<std::size_t>(i)])) += r.residuals(i) * x.row(i);
    }
    const Eigen::MatrixXd meat = scores.transpose() * scores;

    double scale = 1.0;
    if (correction == SmallSampleCorrection::CR1) {
        scale = (static_cast<double>(g) / static_cast<double>(g - 1)) *
                (static_cast<double>(n - 1) / static_cast<double>(n - k));
    }
    r.covariance = scale * bread * meat * bread;
    r.std_errors = r.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();

    const double df = static_cast<double>(g - 1);
    r.t_stats.resize(k);
    r.p_values.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double est = r.estimates(j);
        const double se = r.std_errors(j);
        double t;
        if (se > 0.0) {
            t = est / se;
        } else {
            t = est == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), est);
        }
        r.t_stats(j) = t;
        r.p_values(j) = two_sided_p(t, df);
    }
    return r;
}

}  // namespace wordlelab
