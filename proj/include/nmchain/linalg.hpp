#pragma once

#include <cstddef>
#include <vector>

namespace nmchain::linalg {

// Eigenvalues of a symmetric tridiagonal matrix with diagonal d and
// off-diagonal e (e.size() == d.size() - 1), returned ascending.
// Implicit-shift QL; the sign of e is irrelevant.
std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e);

// Eigenvalues of a dense symmetric n x n matrix in row-major storage,
// returned ascending. Householder reduction to tridiagonal form + QL.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

} // namespace nmchain::linalg
