#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "tsxfer/diversity.hpp"

namespace tsxfer {

PcaResult pca2(const std::vector<FeatureMatrix>& matrices) {
    if (matrices.empty()) throw Error(Errc::EmptyInput, "PCA without matrices");
    const FeatureSet set = matrices.front().set;
    const std::size_t p = matrices.front().feature_count();
    if (p < 2) throw Error(Errc::TooFewFeatures, fmt::format("PCA needs >= 2 features, got {}", p));
    std::size_t rows = 0;
    for (const auto& m : matrices) {
        if (m.set != set || m.feature_count() != p)
            throw Error(Errc::FeatureSetMismatch, fmt::format("'{}' uses a different feature set", m.dataset_name));
        if (!m.standardized())
            throw Error(Errc::NotStandardized, fmt::format("'{}' is not standardized", m.dataset_name));
        rows += m.row_count();
    }
    if (rows < 3) throw Error(Errc::InsufficientPoints, fmt::format("PCA needs >= 3 rows, got {}", rows));

    // Pooled data in matrix order, then row order.
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
    Eigen::Index r = 0;
    for (const auto& m : matrices)
        for (const auto& row : m.rows) {
            for (std::size_t f = 0; f < p; ++f) x(r, static_cast<Eigen::Index>(f)) = row[f];
            ++r;
        }
    const Eigen::RowVectorXd mu = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mu;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(rows - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
    const double trace = cov.trace();

    PcaResult out;
    out.set = set;
    out.feature_names = matrices.front().feature_names;
    const auto last = static_cast<Eigen::Index>(p) - 1;
    for (int c = 0; c < 2; ++c) {
        Eigen::VectorXd v = eig.eigenvectors().col(last - c);
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < v.size(); ++i)
            if (std::fabs(v(i)) > std::fabs(v(arg))) arg = i;
        if (v(arg) < 0) v = -v;
        out.loadings[static_cast<std::size_t>(c)].assign(v.data(), v.data() + v.size());
        const double lambda = std::max(0.0, values(last - c));
        out.explained_variance_ratio[static_cast<std::size_t>(c)] = trace > 0.0 ? lambda / trace : 0.0;
    }
    if (!(trace > 0.0)) out.warnings.emplace_back("RankDeficient: pooled features have zero variance");
    else if (values(last - 1) <= 1e-12 * trace) {
        out.explained_variance_ratio[1] = 0.0;
        out.warnings.emplace_back("RankDeficient: fewer than 2 positive eigenvalues");
    }

    for (const auto& m : matrices)
        for (std::size_t i = 0; i < m.row_count(); ++i) {
            PcaProjection proj{m.dataset_name, m.series_ids[i], 0.0, 0.0};
            for (std::size_t f = 0; f < p; ++f) {
                proj.pc1 += m.rows[i][f] * out.loadings[0][f];
                proj.pc2 += m.rows[i][f] * out.loadings[1][f];
            }
            out.projections.push_back(std::move(proj));
        }
    return out;
}

}  // namespace tsxfer
