#include "sigmalab/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sigmalab/errors.hpp"

namespace sigmalab {

double envelope(double E0, double kappa, double c_sigma, const SigmaClock& clock, double t) {
    if (kappa < 0.0 || c_sigma < 0.0) throw DomainError("envelope: kappa and c_sigma must be >= 0");
    return E0 * std::exp(-2.0 * kappa * c_sigma * clock.sigma(t));
}

double envelope_left(double E0, double kappa, double c_sigma, const SigmaClock& clock, double t) {
    if (kappa < 0.0 || c_sigma < 0.0) throw DomainError("envelope: kappa and c_sigma must be >= 0");
    return E0 * std::exp(-2.0 * kappa * c_sigma * clock.sigma_left(t));
}

namespace {

// Number of atoms already applied at a sample: t_k <= t for step/post samples, t_k < t for pre.
std::size_t atoms_applied(const SigmaClock& clock, const Sample& s) {
    const auto& atoms = clock.atoms();
    if (s.event == SampleEvent::AtomPre)
        return static_cast<std::size_t>(
            std::lower_bound(atoms.begin(), atoms.end(), s.t,
                             [](const Atom& a, double x) { return a.t < x; }) -
            atoms.begin());
    return static_cast<std::size_t>(
        std::upper_bound(atoms.begin(), atoms.end(), s.t,
                         [](double x, const Atom& a) { return x < a.t; }) -
        atoms.begin());
}

double sample_sigma(const SigmaClock& clock, const Sample& s) {
    return s.event == SampleEvent::AtomPre ? clock.sigma_left(s.t) : clock.sigma(s.t);
}

}  // namespace

MasterDecayReport verify_master_decay(const Trajectory& traj, const SigmaClock& clock,
                                      double kappa_h, const std::vector<double>& rho, double tol) {
    if (rho.size() != clock.atoms().size())
        throw ConfigError("atoms", "verify_master_decay needs one factor per atom (" +
                                       std::to_string(clock.atoms().size()) + " atoms, " +
                                       std::to_string(rho.size()) + " factors)");
    std::vector<double> log_rho_prefix(rho.size() + 1, 0.0);
    for (std::size_t k = 0; k < rho.size(); ++k) {
        if (!(rho[k] >= 0.0)) throw DomainError("verify_master_decay: negative atom factor");
        log_rho_prefix[k + 1] = log_rho_prefix[k] + std::log(std::max(rho[k], 1e-300));
    }

    MasterDecayReport rep;
    const double log_slack = std::log1p(tol);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    bool seen_zero = false;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        if (s.E < 0.0 || !std::isfinite(s.E)) throw DomainError("verify_master_decay: invalid energy sample");
        const double logL = -2.0 * kappa_h * clock.ac(s.t) + log_rho_prefix[atoms_applied(clock, s)];
        if (s.E == 0.0) {
            seen_zero = true;
            continue;
        }
        const double F = std::log(s.E) - logL;
        if (i > 0) {
            if (seen_zero) {
                rep.pass = false;
                rep.worst_ratio = std::numeric_limits<double>::infinity();
                rep.worst_t = i;
            } else if (std::isfinite(best)) {
                const double ratio = std::exp(F - best);
                if (ratio > rep.worst_ratio || i == 1) {
                    rep.worst_ratio = ratio;
                    rep.worst_s = best_idx;
                    rep.worst_t = i;
                }
                if (F - best > log_slack) rep.pass = false;
            }
        }
        if (F > best) {
            best = F;
            best_idx = i;
        }
    }
    return rep;
}

MasterDecayReport verify_windowed_decay(const Trajectory& traj, const SigmaClock& clock, double kappa_h,
                                        const std::vector<double>& rho, double window, double tol) {
    if (rho.size() != clock.atoms().size())
        throw ConfigError("atoms", "verify_windowed_decay needs one factor per atom");
    if (!(window > 0.0)) throw DomainError("verify_windowed_decay: window must be positive");
    std::vector<double> log_rho_prefix(rho.size() + 1, 0.0);
    for (std::size_t k = 0; k < rho.size(); ++k) {
        if (!(rho[k] > 0.0)) throw DomainError("verify_windowed_decay: atom factors must be positive");
        log_rho_prefix[k + 1] = log_rho_prefix[k] + std::log(rho[k]);
    }
    const auto& S = traj.samples;
    std::vector<double> F(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (!(S[i].E > 0.0) || !std::isfinite(S[i].E))
            throw DomainError("verify_windowed_decay: energies must be positive and finite");
        F[i] = std::log(S[i].E) + 2.0 * kappa_h * clock.ac(S[i].t) - log_rho_prefix[atoms_applied(clock, S[i])];
    }
    MasterDecayReport rep;
    const double log_slack = std::log1p(tol);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0, p = 0;
    bool any = false;
    for (std::size_t j = 0; j < S.size(); ++j) {
        while (p < j && S[p].t <= S[j].t - window) {
            if (F[p] > best) {
                best = F[p];
                best_idx = p;
            }
            ++p;
        }
        if (!std::isfinite(best)) continue;
        const double ratio = std::exp(F[j] - best);
        if (!any || ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_s = best_idx;
            rep.worst_t = j;
            any = true;
        }
        if (F[j] - best > log_slack) rep.pass = false;
    }
    return rep;
}

Rates extract_rates(const Trajectory& traj, const SigmaClock& clock, double kappa, double t_min) {
    if (traj.samples.empty()) throw DomainError("extract_rates: empty trajectory");
    if (!(kappa > 0.0)) throw DomainError("extract_rates: kappa must be positive");
    const double E0 = traj.samples.front().E;
    if (!(E0 > 0.0)) throw DomainError("extract_rates: E0 must be positive");
    if (t_min < 0.0) t_min = 0.01 * clock.horizon();

    Rates r;
    r.wall_rate = std::numeric_limits<double>::infinity();
    r.sigma_rate = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.samples) {
        if (!(s.t > t_min)) continue;
        const double decay = -std::log(s.E / E0);
        r.wall_rate = std::min(r.wall_rate, decay / (2.0 * kappa * s.t));
        const double sig = sample_sigma(clock, s);
        if (sig > 0.0) {
            r.sigma_rate = std::min(r.sigma_rate, decay / (2.0 * kappa * sig));
            r.sigma_rate_defined = true;
        }
    }
    if (!std::isfinite(r.wall_rate)) r.wall_rate = 0.0;
    if (!r.sigma_rate_defined) r.sigma_rate = std::numeric_limits<double>::quiet_NaN();
    return r;
}

EnvelopeReport envelope_report(const Trajectory& traj, const SigmaClock& clock, double kappa,
                               double c_sigma, double t_min) {
    EnvelopeReport rep;
    rep.kappa = kappa;
    rep.c_sigma = c_sigma;
    const double E0 = traj.samples.front().E;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto& s : traj.samples) {
        const double B = E0 * std::exp(-2.0 * kappa * c_sigma * sample_sigma(clock, s));
        rep.max_violation = std::max(rep.max_violation, s.E / B - 1.0);
    }
    rep.rates = extract_rates(traj, clock, kappa, t_min);
    return rep;
}

std::string EnvelopeReport::key_values() const {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "kappa = " << kappa << "\n"
       << "c_sigma = " << c_sigma << "\n"
       << "max_violation = " << max_violation << "\n"
       << "wall_rate = " << rates.wall_rate << "\n"
       << "sigma_rate = ";
    if (rates.sigma_rate_defined)
        os << rates.sigma_rate;
    else
        os << "undefined";
    os << "\n";
    return os.str();
}

std::string EnvelopeReport::csv_header() { return "kappa,c_sigma,max_violation,wall_rate,sigma_rate"; }

std::string EnvelopeReport::csv_row() const {
    std::ostringstream os;
    os << std::setprecision(12) << kappa << "," << c_sigma << "," << max_violation << ","
       << rates.wall_rate << ",";
    if (rates.sigma_rate_defined)
        os << rates.sigma_rate;
    else
        os << "undefined";
    return os.str();
}

double average_rate(const SigmaClock& clock, const std::vector<double>& rho, double kappa) {
    if (rho.size() != clock.atoms().size())
        throw DomainError("average_rate_condition: one factor per atom is required");
    double sum = 2.0 * kappa * clock.ac_mass();
    for (double r : rho) {
        if (!(r > 0.0)) throw DomainError("average_rate_condition: atom factors must be positive");
        sum += std::log(1.0 / r);
    }
    return sum / clock.horizon();
}

bool average_rate_condition(const SigmaClock& clock, const std::vector<double>& rho, double kappa,
                            double eta) {
    const double avg = average_rate(clock, rho, kappa);
    return avg >= eta - 1e-12 * std::max(1.0, std::abs(eta));
}

bool monotonicity_check(const SigmaClock& c1, const SigmaClock& c2, double kappa, double c_sigma) {
    if (!dominates(c1, c2)) throw DomainError("monotonicity_check: first clock does not lie below the second");
    std::vector<double> grid = c1.breakpoints();
    const auto g2 = c2.breakpoints();
    grid.insert(grid.end(), g2.begin(), g2.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (double t : grid) {
        const double b1 = envelope(1.0, kappa, c_sigma, c1, t);
        const double b2 = envelope(1.0, kappa, c_sigma, c2, t);
        if (b2 > b1 * (1.0 + 1e-12)) return false;
        const double l1 = envelope_left(1.0, kappa, c_sigma, c1, t);
        const double l2 = envelope_left(1.0, kappa, c_sigma, c2, t);
        if (l2 > l1 * (1.0 + 1e-12)) return false;
    }
    return true;
}

}  // namespace sigmalab
