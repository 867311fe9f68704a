#include "lgmd/optimizers/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace lgmd::opt {

std::string to_string(AcquisitionKind kind) {
    switch (kind) {
        case AcquisitionKind::PI: return "PI";
        case AcquisitionKind::EI: return "EI";
        case AcquisitionKind::UCB: return "UCB";
    }
    return "EI";
}

AcquisitionKind parse_acquisition(const std::string& text) {
    if (text == "PI" || text == "pi") return AcquisitionKind::PI;
    if (text == "EI" || text == "ei") return AcquisitionKind::EI;
    if (text == "UCB" || text == "ucb") return AcquisitionKind::UCB;
    throw std::invalid_argument("unknown acquisition '" + text + "'");
}

void AcquisitionConfig::validate() const {
    if (!(zeta >= 0.0)) throw std::invalid_argument("zeta must be >= 0");
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (fixed_kappa && !(*fixed_kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double acq_pi(double mu, double sigma, double f_best, double zeta) {
    if (!(sigma > 0.0)) return 0.0;
    return normal_cdf((mu - f_best - zeta) / sigma);
}

double acq_ei(double mu, double sigma, double f_best, double zeta) {
    if (!(sigma > 0.0)) return 0.0;
    const double gain = mu - f_best - zeta;
    const double z = gain / sigma;
    return gain * normal_cdf(z) + sigma * normal_pdf(z);
}

double acq_ucb(double mu, double sigma, double kappa) { return mu + kappa * sigma; }

double ucb_kappa(double nu, double t, double d, double delta) {
    const double tau = 2.0 * std::log(std::pow(t, d / 2.0 + 2.0) * std::numbers::pi * std::numbers::pi / (3.0 * delta));
    return std::sqrt(nu * tau);
}

std::vector<double> bo_propose(const GpModel& model, const AcquisitionConfig& acq, std::size_t t,
                               std::mt19937_64& rng, const ProposalOptions& options) {
    const std::size_t dims = model.dims();
    const double f_best = model.y.size() ? model.y.maxCoeff() : 0.0;
    const double kappa = acq.fixed_kappa ? *acq.fixed_kappa
                                         : ucb_kappa(acq.nu, static_cast<double>(std::max<std::size_t>(t, 1)),
                                                     static_cast<double>(dims), acq.delta);
    auto value = [&](std::span<const double> x) {
        const Posterior p = gp_posterior(model, x);
        switch (acq.kind) {
            case AcquisitionKind::PI: return acq_pi(p.mu, p.sigma, f_best, acq.zeta);
            case AcquisitionKind::EI: return acq_ei(p.mu, p.sigma, f_best, acq.zeta);
            case AcquisitionKind::UCB: return acq_ucb(p.mu, p.sigma, kappa);
        }
        return 0.0;
    };

    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> points(options.samples, std::vector<double>(dims));
    std::vector<double> scores(options.samples);
    for (std::size_t s = 0; s < options.samples; ++s) {
        for (auto& c : points[s]) c = u(rng);
        scores[s] = value(points[s]);
    }
    std::vector<std::size_t> order(options.samples);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t top = std::min(options.refine, options.samples);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });

    std::vector<double> best = points[order[0]];
    double best_score = scores[order[0]];
    const std::vector<double> lo(dims, 0.0), hi(dims, 1.0);
    auto negated = [&](std::span<const double> x) { return -value(x); };
    for (std::size_t k = 0; k < top; ++k) {
        double f = 0.0;
        auto x = nelder_mead(negated, points[order[k]], 0.05, lo, hi, options.refine_iterations, &f);
        if (-f > best_score) {
            best_score = -f;
            best = std::move(x);
        }
    }
    return best;
}

}  // namespace lgmd::opt
