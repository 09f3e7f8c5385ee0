#include "sigmalab/system.hpp"

#include <Eigen/Eigenvalues>

#include "sigmalab/errors.hpp"

namespace sigmalab {

double weighted_sym_max_eig(const Eigen::MatrixXd& M, const Eigen::VectorXd& weights) {
    if (M.rows() != weights.size() || M.cols() != weights.size())
        throw DomainError("weighted_sym_max_eig: dimension mismatch");
    if ((weights.array() <= 0.0).any())
        throw DomainError("weighted_sym_max_eig: weights must be positive");
    const Eigen::VectorXd s = weights.array().sqrt();
    const Eigen::VectorXd si = s.cwiseInverse();
    // W^{1/2} M W^{-1/2} is similar to M; its symmetric part carries the energy rate.
    const Eigen::MatrixXd T = s.asDiagonal() * M * si.asDiagonal();
    const Eigen::MatrixXd S = 0.5 * (T + T.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double energy_gain(const Eigen::MatrixXd& J, const Eigen::MatrixXd& W) {
    if (J.rows() != J.cols() || W.rows() != J.rows() || W.cols() != J.cols())
        throw DomainError("energy_gain: dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(W);
    if (llt.info() != Eigen::Success) throw DomainError("energy_gain: energy matrix is not positive definite");
    const Eigen::MatrixXd A = J.transpose() * W * J;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()), W,
                                                                  Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double energy_gain(const Eigen::MatrixXd& J, const Eigen::VectorXd& weights) {
    if ((weights.array() <= 0.0).any())
        throw DomainError("energy_gain: weights must be positive");
    const Eigen::VectorXd s = weights.array().sqrt();
    const Eigen::MatrixXd T = s.asDiagonal() * J * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.transpose() * T, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace sigmalab
