#include "sigmalab/integrators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "sigmalab/errors.hpp"

namespace sigmalab {

std::string to_string(Integrator k) {
    switch (k) {
        case Integrator::Midpoint: return "midpoint";
        case Integrator::Euler: return "euler";
        case Integrator::Heun: return "heun";
    }
    return "unknown";
}

Integrator integrator_from_string(const std::string& s) {
    if (s == "midpoint") return Integrator::Midpoint;
    if (s == "euler") return Integrator::Euler;
    if (s == "heun") return Integrator::Heun;
    throw DomainError("unknown integrator '" + s + "' (expected midpoint, euler or heun)");
}

std::string to_string(SampleEvent e) {
    switch (e) {
        case SampleEvent::Step: return "step";
        case SampleEvent::AtomPre: return "atom_pre";
        case SampleEvent::AtomPost: return "atom_post";
    }
    return "unknown";
}

Eigen::VectorXd midpoint_step(const Eigen::MatrixXd& M, const Eigen::VectorXd& u, double dt) {
    if (!(dt > 0.0)) throw DomainError("midpoint_step: dt must be positive");
    const auto n = M.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I - 0.5 * dt * M);
    if (std::abs(lu.determinant()) == 0.0) throw NumericalError("midpoint_step: singular resolvent");
    return lu.solve(u + 0.5 * dt * (M * u));
}

double spectral_radius(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double cfl_limit(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    double limit = std::numeric_limits<double>::infinity();
    for (const auto& l : es.eigenvalues()) {
        const double mag2 = std::norm(l);
        if (mag2 <= 1e-24 * scale * scale) continue;
        limit = std::min(limit, std::max(0.0, -2.0 * l.real() / mag2));
    }
    return limit;
}

double cfl_limit_from_bound(double lambda_max) {
    if (!(lambda_max > 0.0)) throw DomainError("cfl_limit: Lambda_max must be positive");
    return 2.0 / lambda_max;
}

Eigen::VectorXd euler_step(const Eigen::MatrixXd& M, const Eigen::VectorXd& u, double dt,
                           bool override_cfl) {
    if (!(dt > 0.0)) throw DomainError("euler_step: dt must be positive");
    if (!override_cfl) {
        const double lim = cfl_limit(M);
        if (dt > lim * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "euler_step: dt = " << dt << " exceeds the CFL limit " << lim;
            throw NumericalError(os.str());
        }
    }
    return u + dt * (M * u);
}

Eigen::VectorXd heun_step(const Eigen::MatrixXd& M, const Eigen::VectorXd& u, double dt) {
    const Eigen::VectorXd k1 = M * u;
    const Eigen::VectorXd k2 = M * (u + dt * k1);
    return u + 0.5 * dt * (k1 + k2);
}

Eigen::MatrixXd step_matrix(const Eigen::MatrixXd& M, double dt, Integrator k) {
    const auto n = M.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    switch (k) {
        case Integrator::Midpoint:
            return (I - 0.5 * dt * M).partialPivLu().solve(I + 0.5 * dt * M);
        case Integrator::Euler:
            return I + dt * M;
        case Integrator::Heun:
            return I + dt * M + 0.5 * dt * dt * M * M;
    }
    return I;
}

double certified_step_rate(const LinearSystem& sys, double w, double dt, Integrator k) {
    const double g = energy_gain(step_matrix(sys.generator(w), dt, k), sys.energy);
    if (w == 0.0) return g < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return std::max(0.0, -std::log(g) / (2.0 * w * dt));
}

namespace {

class StepCache {
public:
    StepCache(const LinearSystem& sys, const StepPlan& plan) : sys_(sys), plan_(plan) {}

    const Eigen::MatrixXd& get(double w, double dt) {
        auto key = std::make_pair(w, dt);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const Eigen::MatrixXd M = sys_.generator(w);
        if (plan_.integrator == Integrator::Euler && !plan_.cfl_override) {
            const double lim = cfl_limit(M);
            if (dt > lim * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "integrate_on_clock: Euler step " << dt << " exceeds the CFL limit " << lim
                   << " at density w = " << w;
                throw NumericalError(os.str());
            }
        }
        return cache_.emplace(key, step_matrix(M, dt, plan_.integrator)).first->second;
    }

private:
    const LinearSystem& sys_;
    const StepPlan& plan_;
    std::map<std::pair<double, double>, Eigen::MatrixXd> cache_;
};

}  // namespace

Trajectory integrate_on_clock(const LinearSystem& sys, const SigmaClock& clock,
                              const std::vector<JumpMap>& jumps, const Eigen::VectorXd& u0,
                              const StepPlan& plan) {
    if (jumps.size() != clock.atoms().size())
        throw ConfigError("atoms", "clock has " + std::to_string(clock.atoms().size()) +
                                       " atoms but " + std::to_string(jumps.size()) +
                                       " jump maps were supplied");
    if (u0.size() != sys.dim()) throw DomainError("integrate_on_clock: state dimension mismatch");
    if (!u0.allFinite()) throw DomainError("integrate_on_clock: initial state is not finite");
    if (!(plan.dt > 0.0)) throw DomainError("integrate_on_clock: dt must be positive");
    for (std::size_t k = 0; k < jumps.size(); ++k)
        if (jumps[k].J.rows() != sys.dim() || jumps[k].J.cols() != sys.dim())
            throw ConfigError("atoms[" + std::to_string(k) + "]", "jump map dimension mismatch");

    Trajectory tr;
    StepCache cache(sys, plan);
    Eigen::VectorXd u = u0;
    auto record = [&](double t, double s, SampleEvent ev) {
        const double E = sys.energy_of(u);
        if (!std::isfinite(E)) {
            std::ostringstream os;
            os << "integrate_on_clock: non-finite energy at t = " << t;
            throw NumericalError(os.str());
        }
        tr.samples.push_back({t, s, E, ev});
    };
    record(0.0, 0.0, SampleEvent::Step);

    const auto grid = clock.breakpoints();
    const auto& atoms = clock.atoms();
    std::size_t next_atom = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        const double w = clock.density(a);
        const double len = b - a;
        const auto m = static_cast<long>(std::ceil(len / plan.dt - 1e-9));
        const double h = len / static_cast<double>(std::max(1L, m));
        const Eigen::MatrixXd& Phi = cache.get(w, h);
        for (long k = 1; k <= m; ++k) {
            u = Phi * u;
            const double t = (k == m) ? b : a + static_cast<double>(k) * h;
            const bool atom_here = (k == m) && next_atom < atoms.size() && atoms[next_atom].t == b;
            if (atom_here) break;
            record(t, clock.sigma(t), SampleEvent::Step);
        }
        if (next_atom < atoms.size() && atoms[next_atom].t == b) {
            record(b, clock.sigma_left(b), SampleEvent::AtomPre);
            u = apply_jump(jumps[next_atom], u);
            record(b, clock.sigma(b), SampleEvent::AtomPost);
            ++next_atom;
        }
    }
    tr.final_state = u;
    return tr;
}

}  // namespace sigmalab
