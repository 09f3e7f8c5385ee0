#pragma once

#include <Eigen/Dense>
#include <string>

namespace sigmalab {

/// Linear semi-discrete system u' = M(w) u with M(w) = K - w P.
/// w is the clock density on the current segment; K carries transport and SAT terms,
/// P the gated damping. Energy is 1/2 u^T diag(energy) u.
struct LinearSystem {
    Eigen::MatrixXd K;
    Eigen::MatrixXd P;
    Eigen::VectorXd energy;
    std::string name;

    Eigen::Index dim() const { return energy.size(); }
    Eigen::MatrixXd generator(double w) const { return K - w * P; }
    double energy_of(const Eigen::VectorXd& u) const {
        return 0.5 * u.dot(energy.asDiagonal() * u);
    }
};

/// Largest eigenvalue of the weight-symmetrized part of M: max over u of <Mu,u>_W / <u,u>_W.
double weighted_sym_max_eig(const Eigen::MatrixXd& M, const Eigen::VectorXd& weights);

/// Largest generalized eigenvalue of (J^T W J, W): the worst energy ratio E(Ju)/E(u).
double energy_gain(const Eigen::MatrixXd& J, const Eigen::MatrixXd& W);
double energy_gain(const Eigen::MatrixXd& J, const Eigen::VectorXd& weights);

}  // namespace sigmalab
