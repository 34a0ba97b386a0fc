#ifndef BELLSCOPE_HERMITIAN_HPP
#define BELLSCOPE_HERMITIAN_HPP

#include <span>
#include <string_view>
#include <vector>

#include "bellscope/complex_matrix.hpp"

namespace bellscope
{

struct eigen_decomposition
{
    std::vector<double> eigenvalues; // ascending
    complex_matrix eigenvectors;     // columns are orthonormal eigenvectors
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Sweeps over all (p,q) pairs until the off-diagonal Frobenius mass falls
/// below 1e-13 (scaled by the matrix norm when it exceeds one). Throws
/// validation_error when the input is not Hermitian within 1e-12.
eigen_decomposition hermitian_eigen(const complex_matrix& m);

// Eigenvalues only, ascending.
std::vector<double> hermitian_eigenvalues(const complex_matrix& m);

// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue(const complex_matrix& m);

// Largest singular value. Hermitian input takes the max |eigenvalue| path.
double spectral_norm(const complex_matrix& m);

// exp(i H) for Hermitian H.
complex_matrix unitary_exp(const complex_matrix& hermitian);

// V diag(values) V^dagger
complex_matrix reconstruct(const complex_matrix& vectors, std::span<const double> values);

enum class spectrum_class
{
    dichotomic,  // spectrum in {-1, +1}
    contraction, // spectrum in [-1, 1]
};

std::string_view to_string(spectrum_class c) noexcept;

/// A Hermitian matrix whose spectrum is certified to lie in the declared class.
class observable
{
public:
    static constexpr double hermitian_tol = 1e-12;
    static constexpr double spectrum_tol = 1e-9;

    observable(complex_matrix matrix, spectrum_class cls);

    const complex_matrix& matrix() const noexcept { return matrix_; }
    spectrum_class cls() const noexcept { return class_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }

private:
    complex_matrix matrix_;
    spectrum_class class_;
};

} // namespace bellscope

#endif
