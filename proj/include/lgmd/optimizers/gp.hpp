#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace lgmd::opt {

double kernel_matern52(std::span<const double> xi, std::span<const double> xj, double theta,
                       std::span<const double> lengthscales);

Eigen::MatrixXd gram_matrix(const std::vector<std::vector<double>>& X, double theta,
                            std::span<const double> lengthscales);

class GpFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GpHyper {
    double theta = 1.0;
    std::vector<double> lengthscales;
    double noise = 1e-6;  // variance on standardised y
};

struct GpFitOptions {
    double noise_floor = 1e-6;
    double max_jitter = 1e-2;
    std::size_t restarts = 4;  // random starts on top of the default start
    bool optimise_hyper = true;
    GpHyper fixed;  // used when optimise_hyper is false
    std::uint64_t seed = 0;
};

struct GpModel {
    std::vector<std::vector<double>> X;  // unit-cube inputs
    Eigen::VectorXd y;                   // standardised observations
    double y_mean = 0.0;
    double y_scale = 1.0;
    GpHyper hyper;
    double jitter = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd alpha;
    double log_marginal_likelihood = 0.0;

    std::size_t dims() const { return X.empty() ? 0 : X.front().size(); }
};

struct Posterior {
    double mu = 0.0;
    double sigma = 0.0;
};

/// Log marginal likelihood of standardised targets under `h`; -inf when the
/// covariance cannot be factorised.
double gp_log_likelihood(const std::vector<std::vector<double>>& X, const Eigen::VectorXd& y, const GpHyper& h);

/// Zero-mean GP regression on standardised y. Throws GpFitError when the
/// covariance stays indefinite after the largest jitter.
GpModel gp_fit(const std::vector<std::vector<double>>& X, std::span<const double> y, const GpFitOptions& options);

/// Posterior on the standardised scale.
Posterior gp_posterior(const GpModel& model, std::span<const double> x);
/// Posterior mapped back to the units of the observations.
Posterior to_original_scale(const GpModel& model, const Posterior& p);

/// Bounded Nelder-Mead minimisation (coordinates clamped to [lo, hi]).
std::vector<double> nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                                double step, std::span<const double> lo, std::span<const double> hi,
                                std::size_t max_iter, double* fmin = nullptr);

}  // namespace lgmd::opt
