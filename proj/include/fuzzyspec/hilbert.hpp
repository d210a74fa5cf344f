#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>

#include "fuzzyspec/errors.hpp"

namespace fuzzyspec {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// 1-D quadrature grid.  The inner product everywhere in this library is
/// <phi,psi> = sum_k w_k conj(phi_k) psi_k.
struct Grid {
  RVec points;
  RVec weights;
  std::string measure_label = "lebesgue";

  Eigen::Index size() const { return points.size(); }
  void validate() const;
};

/// Uniform grid on [a,b] including both endpoints, trapezoid weights.
Grid uniform_trapezoid_grid(double a, double b, int n);

/// Periodic grid on [0,1): points k/n, uniform weights 1/n (trapezoid rule
/// with the duplicate endpoint identified).
Grid periodic_unit_grid(int n);

/// All weights 1 (plain matrix models).
Grid unit_weight_grid(int n);

/// Columns orthonormal with respect to the grid inner product.
struct Subspace {
  Eigen::Index ambient_dim = 0;
  CMat basis;  // ambient_dim x dim, columns W-orthonormal

  Eigen::Index dim() const { return basis.cols(); }
  static Subspace full(const Grid& g);
  static Subspace empty(Eigen::Index ambient);
};

struct SpectralData {
  RVec eigenvalues;   // ascending
  CMat eigenvectors;  // columns W-orthonormal, aligned with eigenvalues
};

Complex inner_product(const CVec& phi, const CVec& psi, const Grid& g);
double weighted_norm(const CVec& phi, const Grid& g);

/// Rank-revealing modified Gram-Schmidt in the weighted inner product.
/// Columns whose residual norm falls below tol * (largest input norm) are
/// dropped.  All-zero input yields the empty subspace.
Subspace orthonormalize(const CMat& v, const Grid& g, double tol = 1e-8);

/// Thin QR in the weighted inner product; requires full column rank.
std::pair<CMat, CMat> weighted_thin_qr(const CMat& v, const Grid& g);

/// Full Hermitian eigendecomposition with respect to the weighted inner
/// product.  Throws symmetry_error if the weighted Hermiticity defect
/// exceeds 1e-9 * ||M||.
SpectralData eigh(const CMat& m, const Grid& g);

/// Orthonormal basis of the orthogonal complement of S.
Subspace complement(const Subspace& s, const Grid& g);

/// max |B^H W B - I| entrywise; diagnostic for the Subspace invariant.
double orthonormality_defect(const Subspace& s, const Grid& g);

/// Distance of v from the subspace (weighted norm of the projection residual).
double distance_to_subspace(const CVec& v, const Subspace& s, const Grid& g);

/// Cheap bound on the operator norm: sqrt(||M||_1 ||M||_inf).
double operator_norm_estimate(const CMat& m);

}  // namespace fuzzyspec
