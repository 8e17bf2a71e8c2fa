#pragma once

#include "sxt/field_simulator.hpp"

#include <Eigen/Core>

namespace sxt {

/// sum_i w_i 1{Z(x_i, t_k) >= u}.
double excursion_area(const FieldSample& s, const SphereQuadrature& sphere, int t_index, double u);

/// Expected area 4 pi P(Z >= u).
double expected_area(double u);

/// M_T(u) = int_0^T (A_u(t) - 4 pi P(Z >= u)) dt by the midpoint rule.
double m_functional(const FieldSample& s, const SphereQuadrature& sphere, double u);

/// value / sqrt(variance).
double m_tilde(double value, double variance);

/// S_q = int_0^T int_{S^2} H_q(Z) dx dt for q = 1..Q (entry q-1), in one pass over the field.
/// These do not depend on the level, so every u shares them.
Eigen::VectorXd hermite_integrals(const FieldSample& s, const SphereQuadrature& sphere, int Q);

/// (J_q(u)/q!) S_q for q = 1..Q.
Eigen::VectorXd chaos_projections(const Eigen::VectorXd& hermite_sums, double u);

/// (J_q(u)/q!) int int H_q(Z) dx dt.
double chaos_projection(const FieldSample& s, const SphereQuadrature& sphere, double u, int q);

/// First chaos from the constant mode alone: phi(u) sqrt(4 pi) int_0^T a_00(t) dt, since
/// int_{S^2} Z(x,t) dx = sqrt(4 pi) a_00(t).
double first_chaos_from_coefficients(const FieldSample& s, double u);

/// (u / (2 sigma)) phi(u / sigma) int int H_2(Z_l / sigma) dx dt with sigma^2 = (2l+1) C_l(0) / (4 pi).
double m_monochromatic(const FieldSimulator& sim, const FieldSample& s, int ell_star, double u);

}  // namespace sxt
