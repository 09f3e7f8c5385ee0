#include "sigmalab/jumps.hpp"

#include <cmath>

#include "sigmalab/errors.hpp"
#include "sigmalab/rng.hpp"
#include "sigmalab/system.hpp"

namespace sigmalab {

Eigen::MatrixXd orthogonal_projector(const Eigen::VectorXd& weights, const std::vector<int>& idx) {
    const auto n = weights.size();
    if ((weights.array() <= 0.0).any()) throw DomainError("projector: weights must be positive");
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] < 0 || idx[j] >= n) throw DomainError("projector: index out of range");
        E(idx[j], static_cast<Eigen::Index>(j)) = 1.0;
    }
    const Eigen::MatrixXd WE = weights.asDiagonal() * E;
    const Eigen::MatrixXd G = E.transpose() * WE;
    return E * G.ldlt().solve(WE.transpose());
}

JumpMap cayley_tick(const Eigen::VectorXd& weights, const std::vector<int>& idx, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("cayley_tick: theta must lie in [0, 1]");
    const auto n = weights.size();
    const Eigen::MatrixXd P = orthogonal_projector(weights, idx);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    JumpMap m;
    m.kind = JumpKind::Cayley;
    m.theta = theta;
    m.subspace = idx;
    m.J = (I + theta * P).partialPivLu().solve(I - theta * P);
    m.rho = contraction_factor(m.J, weights);
    return m;
}

JumpMap scale_map(Eigen::Index dim, double amplitude) {
    if (!std::isfinite(amplitude)) throw DomainError("scale_map: amplitude must be finite");
    JumpMap m;
    m.kind = JumpKind::Scale;
    m.J = amplitude * Eigen::MatrixXd::Identity(dim, dim);
    m.rho = amplitude * amplitude;
    return m;
}

JumpMap ledger_map(Eigen::Index dim, double kappa, double c_sigma, double alpha) {
    if (!(kappa > 0.0) || !(c_sigma >= 0.0) || !(alpha > 0.0))
        throw DomainError("ledger_map: need kappa > 0, c_sigma >= 0, alpha > 0");
    JumpMap m = scale_map(dim, std::exp(-kappa * c_sigma * alpha));
    m.kind = JumpKind::Ledger;
    m.rho = std::exp(-2.0 * kappa * c_sigma * alpha);
    return m;
}

double contraction_factor(const Eigen::MatrixXd& J, const Eigen::VectorXd& weights) {
    return energy_gain(J, weights);
}

Eigen::VectorXd apply_jump(const JumpMap& map, const Eigen::VectorXd& u) {
    if (map.J.cols() != u.size()) throw DomainError("apply_jump: dimension mismatch");
    return map.J * u;
}

double jump_product(const std::vector<JumpMap>& maps) {
    double p = 1.0;
    for (const auto& m : maps) p *= m.rho;
    return p;
}

double jump_product(const std::vector<double>& rhos) {
    double p = 1.0;
    for (double r : rhos) p *= r;
    return p;
}

double sampled_energy_ratio(const JumpMap& map, const Eigen::VectorXd& weights, int samples,
                            std::uint64_t seed) {
    CounterRng rng(seed, 0);
    double worst = 0.0;
    Eigen::VectorXd u(weights.size());
    for (int s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = rng.normal();
        const Eigen::VectorXd v = map.J * u;
        const double e0 = u.dot(weights.cwiseProduct(u));
        if (e0 <= 0.0) continue;
        worst = std::max(worst, v.dot(weights.cwiseProduct(v)) / e0);
    }
    return worst;
}

std::string to_string(JumpKind kind) {
    switch (kind) {
        case JumpKind::Cayley: return "cayley";
        case JumpKind::Scale: return "scale";
        case JumpKind::Ledger: return "ledger";
    }
    return "unknown";
}

JumpKind jump_kind_from_string(const std::string& s) {
    if (s == "cayley") return JumpKind::Cayley;
    if (s == "scale") return JumpKind::Scale;
    if (s == "ledger") return JumpKind::Ledger;
    throw DomainError("unknown atom kind '" + s + "' (expected cayley, scale or ledger)");
}

}  // namespace sigmalab
