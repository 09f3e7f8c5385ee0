#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sigmalab/sbp.hpp"

namespace sigmalab {

using ScalarFn = std::function<double(double)>;

/// SAT_h(u) = tau_h (u_0^2 + u_N^2) / 2.
double sat_energy(const SbpOperator& op, const SatConfig& sat, const Eigen::VectorXd& u);

/// E_h(u) = 1/2 <Du, A Du>_H + 1/2 <C u, u>_H + SAT_h(u).
double discrete_energy(const SbpOperator& op, const Eigen::VectorXd& A, const Eigen::VectorXd& C,
                       const std::optional<SatConfig>& sat, const Eigen::VectorXd& u);

/// Dual-cell averages: (Pi_h u)_i = (1/H_ii) * integral of u over [x_i - h/2, x_i + h/2] clipped to
/// the domain (order-2 operators), computed by 5-point Gauss-Legendre per cell.
Eigen::VectorXd project_dual_cells(const SbpOperator& op, const ScalarFn& u);

/// 1/2 int (A u'^2 + C u^2) dx by composite 2-point Gauss on m cells.
double continuum_energy(const ScalarFn& du, const ScalarFn& u, const ScalarFn& A, const ScalarFn& C,
                        double L, int m);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct GammaStudy {
    std::vector<double> h_list;
    std::vector<double> energies;
    std::vector<double> errors;
    std::vector<double> sat_residues;
    double exact_energy = 0.0;
    double error_slope = 0.0;
    double sat_slope = 0.0;
    bool errors_decreasing = false;
    bool passed = false;  // decreasing errors and both slopes >= 0.9 (zero sequences pass trivially)
};

struct GammaProblem {
    ScalarFn u;
    ScalarFn du;
    ScalarFn A = [](double) { return 1.0; };
    ScalarFn C = [](double) { return 0.0; };
    double L = 1.0;
    std::optional<double> exact_energy;  // else quadrature at 8x the finest grid
};

GammaStudy recovery_study(const GammaProblem& p, const std::vector<double>& h_list, const SatConfig& sat);

struct EquicoercivityEntry {
    SbpOperator op;
    Eigen::VectorXd u;
};

struct EquicoercivityReport {
    std::vector<double> energies;
    std::vector<double> poincare_ratios;  // ||u||_H / ||Du||_H
    std::vector<double> trace_ratios;     // (u_0^2 + u_N^2) / ||u||_H^2
    bool energy_bounded = true;
    bool poincare_uniform = true;  // max within 5% of min
    bool trace_controlled = true;  // trace ratio does not grow more than 2x along the sequence
    bool pass = true;
};

EquicoercivityReport equicoercivity_check(const std::vector<EquicoercivityEntry>& seq,
                                          const SatConfig& sat, double energy_bound);

}  // namespace sigmalab
