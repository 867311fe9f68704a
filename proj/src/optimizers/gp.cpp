#include "lgmd/optimizers/gp.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>

namespace lgmd::opt {

double kernel_matern52(std::span<const double> xi, std::span<const double> xj, double theta,
                       std::span<const double> lengthscales) {
    double r2 = 0.0;
    for (std::size_t d = 0; d < xi.size(); ++d) {
        const double z = (xi[d] - xj[d]) / lengthscales[d];
        r2 += z * z;
    }
    const double s = std::sqrt(5.0 * r2);
    return theta * (1.0 + s + 5.0 / 3.0 * r2) * std::exp(-s);
}

Eigen::MatrixXd gram_matrix(const std::vector<std::vector<double>>& X, double theta,
                            std::span<const double> lengthscales) {
    const auto n = static_cast<Eigen::Index>(X.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = theta;
        for (Eigen::Index j = 0; j < i; ++j) {
            K(i, j) = K(j, i) = kernel_matern52(X[i], X[j], theta, lengthscales);
        }
    }
    return K;
}

namespace {

constexpr double kThetaMin = 0.05, kThetaMax = 20.0;
constexpr double kLengthMin = 0.01, kLengthMax = 100.0;
constexpr double kNoiseMax = 1.0;

struct Factorised {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
    bool ok = false;
};

Factorised factorise(const std::vector<std::vector<double>>& X, const GpHyper& h, double max_jitter) {
    Eigen::MatrixXd K = gram_matrix(X, h.theta, h.lengthscales);
    K.diagonal().array() += h.noise;
    Factorised f;
    f.llt.compute(K);
    if (f.llt.info() == Eigen::Success) {
        f.ok = true;
        return f;
    }
    for (double j = 1e-8; j <= max_jitter * (1.0 + 1e-12); j *= 10.0) {
        Eigen::MatrixXd Kj = K;
        Kj.diagonal().array() += j;
        f.llt.compute(Kj);
        if (f.llt.info() == Eigen::Success) {
            f.jitter = j;
            f.ok = true;
            return f;
        }
    }
    return f;
}

double likelihood_of(const Factorised& f, const Eigen::VectorXd& y) {
    const Eigen::VectorXd alpha = f.llt.solve(y);
    const Eigen::MatrixXd L = f.llt.matrixL();
    const double log_det = 2.0 * L.diagonal().array().log().sum();
    return -0.5 * y.dot(alpha) - 0.5 * log_det - 0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
}

GpHyper unpack(std::span<const double> z, std::size_t dims) {
    GpHyper h;
    h.theta = std::exp(z[0]);
    h.lengthscales.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) h.lengthscales[d] = std::exp(z[1 + d]);
    h.noise = std::exp(z[1 + dims]);
    return h;
}

}  // namespace

double gp_log_likelihood(const std::vector<std::vector<double>>& X, const Eigen::VectorXd& y, const GpHyper& h) {
    const Factorised f = factorise(X, h, 0.0);
    if (!f.ok) return -std::numeric_limits<double>::infinity();
    return likelihood_of(f, y);
}

GpModel gp_fit(const std::vector<std::vector<double>>& X, std::span<const double> y, const GpFitOptions& options) {
    if (X.empty() || X.size() != y.size()) throw GpFitError("GP needs matching, non-empty inputs and targets");
    const std::size_t n = X.size();
    const std::size_t dims = X.front().size();

    GpModel m;
    m.X = X;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    m.y_mean = mean;
    m.y_scale = var > 0.0 ? std::sqrt(var) : 1.0;
    m.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) m.y[static_cast<Eigen::Index>(i)] = (y[i] - mean) / m.y_scale;

    if (options.optimise_hyper) {
        std::vector<double> lo(dims + 2), hi(dims + 2);
        lo[0] = std::log(kThetaMin);
        hi[0] = std::log(kThetaMax);
        for (std::size_t d = 0; d < dims; ++d) {
            lo[1 + d] = std::log(kLengthMin);
            hi[1 + d] = std::log(kLengthMax);
        }
        lo[1 + dims] = std::log(options.noise_floor);
        hi[1 + dims] = std::log(kNoiseMax);

        auto objective = [&](std::span<const double> z) {
            const double l = gp_log_likelihood(m.X, m.y, unpack(z, dims));
            return std::isfinite(l) ? -l : 1e300;
        };
        std::vector<std::vector<double>> starts;
        std::vector<double> z0(dims + 2);
        z0[0] = 0.0;
        for (std::size_t d = 0; d < dims; ++d) z0[1 + d] = std::log(0.5);
        z0[1 + dims] = std::log(std::max(options.noise_floor, 1e-4));
        starts.push_back(z0);
        std::mt19937_64 rng(options.seed);
        for (std::size_t s = 0; s < options.restarts; ++s) {
            std::vector<double> z(dims + 2);
            for (std::size_t k = 0; k < z.size(); ++k) {
                z[k] = std::uniform_real_distribution<double>(lo[k], hi[k])(rng);
            }
            starts.push_back(z);
        }
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> best_z = z0;
        for (const auto& z : starts) {
            double f = 0.0;
            const auto zopt = nelder_mead(objective, z, 0.5, lo, hi, 150 * (dims + 2), &f);
            if (f < best) {
                best = f;
                best_z = zopt;
            }
        }
        m.hyper = unpack(best_z, dims);
    } else {
        m.hyper = options.fixed;
        if (m.hyper.lengthscales.size() != dims) throw GpFitError("fixed GP hyper-parameters have wrong dimension");
        m.hyper.noise = std::max(m.hyper.noise, options.noise_floor);
    }

    Factorised f = factorise(m.X, m.hyper, options.max_jitter);
    if (!f.ok) throw GpFitError("covariance not positive definite after maximum jitter");
    m.jitter = f.jitter;
    m.llt = std::move(f.llt);
    m.alpha = m.llt.solve(m.y);
    const Eigen::MatrixXd L = m.llt.matrixL();
    m.log_marginal_likelihood = -0.5 * m.y.dot(m.alpha) - L.diagonal().array().log().sum() -
                                0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    return m;
}

Posterior gp_posterior(const GpModel& m, std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(m.X.size());
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i) k[i] = kernel_matern52(m.X[i], x, m.hyper.theta, m.hyper.lengthscales);
    const double mu = k.dot(m.alpha);
    const Eigen::VectorXd v = m.llt.matrixL().solve(k);
    const double var = m.hyper.theta - v.squaredNorm();
    return {mu, std::sqrt(std::max(var, 0.0))};
}

Posterior to_original_scale(const GpModel& m, const Posterior& p) {
    return {m.y_mean + m.y_scale * p.mu, m.y_scale * p.sigma};
}

namespace {

struct NmContext {
    const std::function<double(std::span<const double>)>* f;
    std::span<const double> lo, hi;
    std::vector<double> buffer;
};

double nm_trampoline(const gsl_vector* v, void* params) {
    auto* ctx = static_cast<NmContext*>(params);
    for (std::size_t i = 0; i < ctx->buffer.size(); ++i) {
        ctx->buffer[i] = std::clamp(gsl_vector_get(v, i), ctx->lo[i], ctx->hi[i]);
    }
    const double r = (*ctx->f)(ctx->buffer);
    return std::isnan(r) ? 1e300 : r;
}

}  // namespace

std::vector<double> nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                                double step, std::span<const double> lo, std::span<const double> hi,
                                std::size_t max_iter, double* fmin) {
    static std::once_flag quiet_gsl;
    std::call_once(quiet_gsl, [] { gsl_set_error_handler_off(); });
    const std::size_t n = x0.size();
    for (std::size_t i = 0; i < n; ++i) x0[i] = std::clamp(x0[i], lo[i], hi[i]);
    NmContext ctx{&f, lo, hi, std::vector<double>(n)};
    gsl_multimin_function fn{&nm_trampoline, n, &ctx};
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* ss = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, x0[i]);
        gsl_vector_set(ss, i, step);
    }
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x, ss);
    for (std::size_t it = 0; it < max_iter; ++it) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-6) == GSL_SUCCESS) break;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(gsl_vector_get(s->x, i), lo[i], hi[i]);
    if (fmin) *fmin = f(out);
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(ss);
    gsl_vector_free(x);
    return out;
}

}  // namespace lgmd::opt
