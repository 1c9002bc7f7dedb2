#include "riskscout/gp.hpp"

#include <cmath>

namespace riskscout {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / 2.5066282746310002; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

GpPosterior GpPosterior::fit(const std::vector<BitVector>& x, const std::vector<double>& y,
                             GpParams params) {
    if (x.empty()) fail(Errc::EmptyHistory, "gp fit needs at least one observation");
    if (x.size() != y.size()) fail(Errc::LengthMismatch, "gp inputs and targets differ in size");
    const int n = static_cast<int>(x.size());
    if (params.length_scale <= 0.0)
        params.length_scale = std::sqrt(static_cast<double>(x[0].size())) / 2.0;
    const double inv2l2 = 1.0 / (2.0 * params.length_scale * params.length_scale);

    GpPosterior gp;
    gp.x_ = x;
    gp.params_ = params;
    gp.y_mean_ = 0.0;
    for (double v : y) gp.y_mean_ += v;
    gp.y_mean_ /= static_cast<double>(n);

    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            double v = std::exp(-static_cast<double>(x[i].hamming(x[j])) * inv2l2);
            k(i, j) = v;
            k(j, i) = v;
        }
    }

    Eigen::VectorXd centered(n);
    for (int i = 0; i < n; ++i) centered(i) = y[i] - gp.y_mean_;

    // Jitter escalation: retry the factorization with growing diagonal boost.
    double jitter = 0.0;
    for (int attempt = 0;; ++attempt) {
        Eigen::MatrixXd kj = k;
        kj.diagonal().array() += params.noise + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(kj);
        if (llt.info() == Eigen::Success) {
            gp.chol_ = llt.matrixL();
            gp.alpha_ = llt.solve(centered);
            gp.jitter_ = jitter;
            return gp;
        }
        if (attempt >= 5)
            fail(Errc::SingularKernel,
                 "kernel matrix not positive definite after jitter escalation");
        jitter = jitter == 0.0 ? 1e-12 : jitter * 100.0;
    }
}

GpPosterior::Prediction GpPosterior::predict(const BitVector& z) const {
    std::vector<double> mean, var;
    predict_batch({z}, mean, var);
    return {mean[0], var[0]};
}

void GpPosterior::predict_batch(const std::vector<BitVector>& zs, std::vector<double>& mean,
                                std::vector<double>& var) const {
    const int n = static_cast<int>(x_.size());
    const int q = static_cast<int>(zs.size());
    const double inv2l2 = 1.0 / (2.0 * params_.length_scale * params_.length_scale);

    Eigen::MatrixXd kstar(n, q);
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < n; ++i)
            kstar(i, j) = std::exp(-static_cast<double>(x_[i].hamming(zs[j])) * inv2l2);

    Eigen::VectorXd mu = kstar.transpose() * alpha_;
    // var = k(z,z) - ||L^-1 k*||^2, latent (noise-free) predictive variance
    Eigen::MatrixXd v = chol_.triangularView<Eigen::Lower>().solve(kstar);
    mean.resize(zs.size());
    var.resize(zs.size());
    for (int j = 0; j < q; ++j) {
        mean[j] = y_mean_ + mu(j);
        var[j] = std::max(0.0, 1.0 - v.col(j).squaredNorm());
    }
}

double expected_improvement(double mu, double sigma, double incumbent) {
    double imp = mu - incumbent;
    if (sigma <= 0.0) return std::max(0.0, imp);
    double u = imp / sigma;
    return imp * normal_cdf(u) + sigma * normal_pdf(u);
}

double upper_confidence_bound(double mu, double sigma, double kappa) {
    return mu + kappa * sigma;
}

} // namespace riskscout
