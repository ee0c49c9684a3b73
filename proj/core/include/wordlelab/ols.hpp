#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wordlelab {

enum class SmallSampleCorrection { None, CR1 };

std::string_view to_string(SmallSampleCorrection c) noexcept;

class RankDeficient : public std::runtime_error {
public:
    RankDeficient(std::vector<std::size_t> dependent, const std::string& what)
        : std::runtime_error(what), dependent_(std::move(dependent)) {}
    /// Column indices (into the original design) that are linear combinations of the others.
    const std::vector<std::size_t>& dependent_columns() const noexcept { return dependent_; }

private:
    std::vector<std::size_t> dependent_;
};

class TooFewClusters : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RegressionResult {
    std::string dependent;
    std::vector<std::string> names;
    Eigen::VectorXd estimates;
    Eigen::VectorXd std_errors;
    Eigen::VectorXd t_stats;
    Eigen::VectorXd p_values;
    Eigen::MatrixXd covariance;
    Eigen::VectorXd residuals;
    std::size_t n_observations = 0;
    std::size_t n_clusters = 0;
    SmallSampleCorrection correction = SmallSampleCorrection::CR1;
    /// Design columns removed before fitting because they were collinear with earlier ones.
    std::vector<std::string> dropped;

    std::size_t index_of(std::string_view name) const;
    double estimate(std::string_view name) const { return estimates(static_cast<Eigen::Index>(index_of(name))); }
    double std_error(std::string_view name) const { return std_errors(static_cast<Eigen::Index>(index_of(name))); }
    double p_value(std::string_view name) const { return p_values(static_cast<Eigen::Index>(index_of(name))); }

    friend bool operator==(const RegressionResult& a, const RegressionResult& b);
};

/// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, otherwise empty.
std::string significance_stars(double p);

/// Column indices of `x` that are linearly dependent on earlier-pivoted columns.
std::vector<std::size_t> dependent_columns(const Eigen::MatrixXd& x);

/**
 * @brief Least squares with a cluster-robust sandwich covariance.
 *
 * The fit uses a column-pivoting Householder QR. The covariance is
 *
 *   V = c (X'X)^-1 [ sum_g X_g' e_g e_g' X_g ] (X'X)^-1,
 *   c = G/(G-1) * (N-1)/(N-K)   (CR1; c = 1 without correction)
 *
 * and p-values come from a t distribution with G-1 degrees of freedom.
 *
 * Throws RankDeficient when X lacks full column rank and TooFewClusters when
 * fewer than two distinct cluster ids are present.
 */
RegressionResult fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const std::int64_t> clusters,
                         std::vector<std::string> names,
                         SmallSampleCorrection correction = SmallSampleCorrection::CR1);

}  // namespace wordlelab
