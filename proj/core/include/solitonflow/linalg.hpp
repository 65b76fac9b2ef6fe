#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace solitonflow {

/// Dense square matrix, row-major.  Sized for the phase-space Jacobians in
/// this project (n <= 12); not a general linear-algebra type.
struct Matrix {
  int n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Reduce to upper Hessenberg form by Householder similarity transforms.
void hessenberg_reduce(Matrix& m);

/// Eigenvalues of a dense real matrix: Hessenberg reduction followed by
/// shifted (Francis double-shift) QR iteration.  Throws std::runtime_error
/// if the iteration fails to converge.
std::vector<std::complex<double>> eigenvalues(Matrix m);

/// Sorted real parts; throws std::runtime_error if any eigenvalue has an
/// imaginary part larger than `imag_tol`.
std::vector<double> real_eigenvalues(const Matrix& m, double imag_tol = 1e-9);

}  // namespace solitonflow
