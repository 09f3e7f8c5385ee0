#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace sigmalab {

enum class JumpKind { Cayley, Scale, Ledger };

/// Instantaneous map applied at a clock atom, with its certified energy factor rho:
/// E(J u) <= rho E(u) for every u.
struct JumpMap {
    JumpKind kind = JumpKind::Scale;
    Eigen::MatrixXd J;
    double rho = 1.0;
    double theta = 0.0;         // Cayley strength, when kind == Cayley
    std::vector<int> subspace;  // coordinates hit by a Cayley tick
};

/// W-orthogonal projector onto span{e_i : i in idx}.
Eigen::MatrixXd orthogonal_projector(const Eigen::VectorXd& weights, const std::vector<int>& idx);

/// J = (I + theta P)^{-1} (I - theta P) for the projector onto the given coordinates.
JumpMap cayley_tick(const Eigen::VectorXd& weights, const std::vector<int>& idx, double theta);

/// Uniform amplitude scaling u -> s u; rho = s^2.
JumpMap scale_map(Eigen::Index dim, double amplitude);

/// Ledger-rule atom: energy factor exp(-2 kappa c_sigma alpha), realised as a uniform scaling.
JumpMap ledger_map(Eigen::Index dim, double kappa, double c_sigma, double alpha);

/// Largest generalized eigenvalue of (J^T W J, W).
double contraction_factor(const Eigen::MatrixXd& J, const Eigen::VectorXd& weights);

Eigen::VectorXd apply_jump(const JumpMap& map, const Eigen::VectorXd& u);

/// Product of rho over the maps.
double jump_product(const std::vector<JumpMap>& maps);
double jump_product(const std::vector<double>& rhos);

/// Largest observed E(Ju)/E(u) over random Gaussian states (cross-check of contraction_factor).
double sampled_energy_ratio(const JumpMap& map, const Eigen::VectorXd& weights, int samples,
                            std::uint64_t seed);

std::string to_string(JumpKind kind);
JumpKind jump_kind_from_string(const std::string& s);

}  // namespace sigmalab
