#ifndef BELLSCOPE_COMPLEX_MATRIX_HPP
#define BELLSCOPE_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace bellscope
{

using complex = std::complex<double>;
using state_vector = std::vector<complex>;

// Largest dimension any matrix in the library may take (two 8-dim factors).
inline constexpr std::size_t max_dim = 64;

// Dense square complex matrix, row-major. Entries are always finite.
class complex_matrix
{
public:
    explicit complex_matrix(std::size_t dim);
    complex_matrix(std::size_t dim, std::vector<complex> entries);
    complex_matrix(std::initializer_list<std::initializer_list<complex>> rows);

    static complex_matrix identity(std::size_t dim);
    static complex_matrix zero(std::size_t dim) { return complex_matrix(dim); }
    static complex_matrix diagonal(std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }
    std::span<const complex> entries() const noexcept { return entries_; }

    complex operator()(std::size_t row, std::size_t col) const noexcept
    {
        return entries_[row * dim_ + col];
    }
    complex& operator()(std::size_t row, std::size_t col) noexcept
    {
        return entries_[row * dim_ + col];
    }

    complex_matrix adjoint() const;
    complex trace() const noexcept;

    // max_ij |M_ij - M*_ji|
    double hermitian_defect() const noexcept;
    bool is_hermitian(double tol = 1e-12) const noexcept { return hermitian_defect() <= tol; }

    // max_ij |M_ij|
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;

    complex_matrix& operator+=(const complex_matrix& rhs);
    complex_matrix& operator-=(const complex_matrix& rhs);
    complex_matrix& operator*=(complex s) noexcept;

    friend complex_matrix operator+(complex_matrix lhs, const complex_matrix& rhs) { return lhs += rhs; }
    friend complex_matrix operator-(complex_matrix lhs, const complex_matrix& rhs) { return lhs -= rhs; }
    friend complex_matrix operator*(complex_matrix m, complex s) noexcept { return m *= s; }
    friend complex_matrix operator*(complex s, complex_matrix m) noexcept { return m *= s; }
    friend complex_matrix operator*(const complex_matrix& lhs, const complex_matrix& rhs);
    friend complex_matrix operator-(complex_matrix m) noexcept { return m *= -1.0; }

    friend bool operator==(const complex_matrix&, const complex_matrix&) = default;

private:
    std::size_t dim_;
    std::vector<complex> entries_;
};

// max_ij |A_ij - B_ij|; dims must agree.
double max_abs_diff(const complex_matrix& a, const complex_matrix& b);

state_vector apply(const complex_matrix& m, std::span<const complex> v);
complex inner(std::span<const complex> lhs, std::span<const complex> rhs); // <lhs|rhs>
double norm(std::span<const complex> v);

// <v|M|v>
complex expectation_value(const complex_matrix& m, std::span<const complex> v);

// Standard Kronecker product; the result dimension is capped at `cap`.
complex_matrix tensor(const complex_matrix& a, const complex_matrix& b, std::size_t cap = max_dim);

// AB - BA
complex_matrix commutator(const complex_matrix& a, const complex_matrix& b);

// (AB + BA) / 2
complex_matrix jordan_product(const complex_matrix& a, const complex_matrix& b);

namespace pauli
{
complex_matrix x();
complex_matrix y();
complex_matrix z();
} // namespace pauli

} // namespace bellscope

#endif
