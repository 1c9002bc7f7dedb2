#pragma once

#include <vector>

#include <Eigen/Dense>

#include "riskscout/bitvector.hpp"
#include "riskscout/errors.hpp"

namespace riskscout {

struct GpParams {
    double length_scale = 0.0; // <= 0 resolves to sqrt(N)/2 at fit time
    double noise = 1e-6;
};

double normal_pdf(double x);
double normal_cdf(double x);

// Exact GP over bitvectors with kernel k(a,b) = exp(-H(a,b)/(2*l^2)), H the
// Hamming distance. Prior variance 1; predictions report latent variance.
class GpPosterior {
public:
    static GpPosterior fit(const std::vector<BitVector>& x, const std::vector<double>& y,
                           GpParams params);

    struct Prediction {
        double mean;
        double var;
    };
    Prediction predict(const BitVector& z) const;
    void predict_batch(const std::vector<BitVector>& zs, std::vector<double>& mean,
                       std::vector<double>& var) const;

    double length_scale() const { return params_.length_scale; }
    double jitter() const { return jitter_; }
    size_t size() const { return x_.size(); }

private:
    std::vector<BitVector> x_;
    double y_mean_ = 0.0;
    Eigen::VectorXd alpha_;
    Eigen::MatrixXd chol_; // lower triangular factor of K + (noise+jitter) I
    GpParams params_;
    double jitter_ = 0.0;
};

// EI for maximization: (mu-f*)*Phi(u) + sigma*phi(u), u = (mu-f*)/sigma;
// collapses to max(0, mu-f*) when sigma = 0.
double expected_improvement(double mu, double sigma, double incumbent);
double upper_confidence_bound(double mu, double sigma, double kappa);

} // namespace riskscout
