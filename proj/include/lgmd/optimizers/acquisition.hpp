#pragma once

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lgmd/optimizers/bounds.hpp"
#include "lgmd/optimizers/gp.hpp"

namespace lgmd::opt {

enum class AcquisitionKind { PI, EI, UCB };

std::string to_string(AcquisitionKind kind);
AcquisitionKind parse_acquisition(const std::string& text);

struct AcquisitionConfig {
    AcquisitionKind kind = AcquisitionKind::EI;
    double zeta = 0.01;
    double nu = 1.0;
    double delta = 0.1;
    std::optional<double> fixed_kappa;  // overrides the nu/delta schedule

    void validate() const;
};

double normal_pdf(double z);
double normal_cdf(double z);

double acq_pi(double mu, double sigma, double f_best, double zeta);
double acq_ei(double mu, double sigma, double f_best, double zeta);
double acq_ucb(double mu, double sigma, double kappa);
/// sqrt(nu * tau_t), tau_t = 2 log(t^(d/2 + 2) pi^2 / (3 delta)).
double ucb_kappa(double nu, double t, double d, double delta);

struct ProposalOptions {
    std::size_t samples = 10000;
    std::size_t refine = 10;
    std::size_t refine_iterations = 200;
};

/// Maximises the acquisition over the unit cube of `model`; `t` is the
/// iteration number fed to the UCB schedule. Returns a unit-cube point.
std::vector<double> bo_propose(const GpModel& model, const AcquisitionConfig& acquisition, std::size_t t,
                               std::mt19937_64& rng, const ProposalOptions& options = {});

}  // namespace lgmd::opt
