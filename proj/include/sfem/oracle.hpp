#pragma once

// Brute-force reference implementations for tests and self-verification:
// dense global assembly, dense factorizations, dense pencil eigensolves and
// O(K^2) transform summation. Independent of the fast paths they check.

#include <Eigen/Dense>

#include "sfem/grid1d.hpp"
#include "sfem/poisson.hpp"
#include "sfem/spectral.hpp"

namespace sfem::oracle {

inline constexpr int kDenseCap = 4096;

/// Assembled 1D stiffness and mass matrices over the interleaved dof
/// ordering (boundary excluded), order n*K-1.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble_global_1d(int order, int elements);

/// Ascending eigenvalues of the pencil (A, C), C positive definite.
Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

/// Pack a 1D grid function into the interleaved dof vector and back.
Eigen::VectorXd pack_1d(const GridFunction1D& g);
GridFunction1D unpack_1d(const Eigen::VectorXd& v, int order, int elements);

/// Pack/unpack an N-D grid function into the tensor ordering induced by the
/// per-axis interleaved dof maps.
Eigen::VectorXd pack_nd(const GridFunctionND& g);
GridFunctionND unpack_nd(const Eigen::VectorXd& v, const std::vector<AxisSpec>& axes);

/// Direct solve of the full Kronecker-assembled system (pivoted LDLT).
GridFunctionND dense_solve_nd(const ProblemSpec& spec, const GridFunctionND& load);

/// Mass operator application through the element stencil (used to build
/// right-hand sides whose expansions are known).
GridFunction1D mass_apply(const GridFunction1D& w, const ElementMatrices& em);

/// C-inner product of two 1D grid functions.
double mass_inner(const GridFunction1D& a, const GridFunction1D& b, const ElementMatrices& em);

/// O(K^2) direct summations of the three trigonometric transforms.
std::vector<double> dst1_direct(std::span<const double> x);
std::vector<double> dst3_synthesis_direct(std::span<const double> b);
std::vector<double> dct3_synthesis_direct(std::span<const double> a);

/// Coefficients of y in the mass-weighted eigenvector basis obtained by
/// solving the dense Gram system (no orthogonality shortcut).
CoefficientArray1D gram_solve_coefficients(const GridFunction1D& y, const SpectralTable1D& table);

/// Dense synthesis: sum of coefficients times materialized eigenvectors.
GridFunction1D dense_synthesize(const CoefficientArray1D& coeffs, const SpectralTable1D& table);

}  // namespace sfem::oracle
