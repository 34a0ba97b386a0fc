#include "bellscope/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellscope/errors.hpp"

namespace bellscope
{

namespace
{

void require_finite(std::span<const complex> entries)
{
    for(const auto& z : entries)
    {
        if(!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw validation_error("matrix entry is not finite");
    }
}

void require_same_dim(const complex_matrix& a, const complex_matrix& b, const char* what)
{
    if(a.dim() != b.dim())
    {
        throw shape_error(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
    }
}

} // namespace

complex_matrix::complex_matrix(std::size_t dim) : dim_(dim), entries_(dim * dim)
{
    if(dim == 0) throw validation_error("matrix dimension must be at least 1");
}

complex_matrix::complex_matrix(std::size_t dim, std::vector<complex> entries) : dim_(dim), entries_(std::move(entries))
{
    if(dim == 0) throw validation_error("matrix dimension must be at least 1");
    if(entries_.size() != dim * dim) throw shape_error("entry count does not match dim*dim");
    require_finite(entries_);
}

complex_matrix::complex_matrix(std::initializer_list<std::initializer_list<complex>> rows) : dim_(rows.size())
{
    if(dim_ == 0) throw validation_error("matrix dimension must be at least 1");
    entries_.reserve(dim_ * dim_);
    for(const auto& row : rows)
    {
        if(row.size() != dim_) throw shape_error("matrix literal is not square");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    require_finite(entries_);
}

complex_matrix complex_matrix::identity(std::size_t dim)
{
    complex_matrix m(dim);
    for(std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

complex_matrix complex_matrix::diagonal(std::span<const double> values)
{
    complex_matrix m(values.size());
    for(std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    require_finite(m.entries_);
    return m;
}

complex_matrix complex_matrix::adjoint() const
{
    complex_matrix m(dim_);
    for(std::size_t i = 0; i < dim_; ++i)
        for(std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

complex complex_matrix::trace() const noexcept
{
    complex t = 0.0;
    for(std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double complex_matrix::hermitian_defect() const noexcept
{
    double worst = 0.0;
    for(std::size_t i = 0; i < dim_; ++i)
        for(std::size_t j = i; j < dim_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
}

double complex_matrix::max_abs() const noexcept
{
    double worst = 0.0;
    for(const auto& z : entries_) worst = std::max(worst, std::abs(z));
    return worst;
}

double complex_matrix::frobenius_norm() const noexcept
{
    double s = 0.0;
    for(const auto& z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

complex_matrix& complex_matrix::operator+=(const complex_matrix& rhs)
{
    require_same_dim(*this, rhs, "addition");
    for(std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
    return *this;
}

complex_matrix& complex_matrix::operator-=(const complex_matrix& rhs)
{
    require_same_dim(*this, rhs, "subtraction");
    for(std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
    return *this;
}

complex_matrix& complex_matrix::operator*=(complex s) noexcept
{
    for(auto& z : entries_) z *= s;
    return *this;
}

complex_matrix operator*(const complex_matrix& lhs, const complex_matrix& rhs)
{
    require_same_dim(lhs, rhs, "product");
    const std::size_t n = lhs.dim();
    complex_matrix out(n);
    for(std::size_t i = 0; i < n; ++i)
    {
        for(std::size_t k = 0; k < n; ++k)
        {
            const complex l = lhs(i, k);
            if(l == complex{}) continue;
            for(std::size_t j = 0; j < n; ++j) out(i, j) += l * rhs(k, j);
        }
    }
    return out;
}

double max_abs_diff(const complex_matrix& a, const complex_matrix& b)
{
    require_same_dim(a, b, "max_abs_diff");
    double worst = 0.0;
    for(std::size_t k = 0; k < a.entries().size(); ++k) worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
    return worst;
}

state_vector apply(const complex_matrix& m, std::span<const complex> v)
{
    if(v.size() != m.dim()) throw shape_error("vector length does not match matrix dimension");
    state_vector out(m.dim());
    for(std::size_t i = 0; i < m.dim(); ++i)
    {
        complex s = 0.0;
        for(std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

complex inner(std::span<const complex> lhs, std::span<const complex> rhs)
{
    if(lhs.size() != rhs.size()) throw shape_error("inner product of vectors with different lengths");
    complex s = 0.0;
    for(std::size_t i = 0; i < lhs.size(); ++i) s += std::conj(lhs[i]) * rhs[i];
    return s;
}

double norm(std::span<const complex> v)
{
    double s = 0.0;
    for(const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

complex expectation_value(const complex_matrix& m, std::span<const complex> v)
{
    const auto mv = apply(m, v);
    return inner(v, mv);
}

complex_matrix tensor(const complex_matrix& a, const complex_matrix& b, std::size_t cap)
{
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    if(na * nb > cap)
    {
        throw sizing_error("tensor product dimension " + std::to_string(na * nb) + " exceeds cap " +
                           std::to_string(cap));
    }
    complex_matrix out(na * nb);
    for(std::size_t i = 0; i < na; ++i)
        for(std::size_t j = 0; j < na; ++j)
        {
            const complex aij = a(i, j);
            for(std::size_t k = 0; k < nb; ++k)
                for(std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return out;
}

complex_matrix commutator(const complex_matrix& a, const complex_matrix& b)
{
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

complex_matrix jordan_product(const complex_matrix& a, const complex_matrix& b)
{
    require_same_dim(a, b, "jordan_product");
    auto out = a * b;
    out += b * a;
    out *= 0.5;
    return out;
}

namespace pauli
{

complex_matrix x()
{
    return {{0.0, 1.0}, {1.0, 0.0}};
}

complex_matrix y()
{
    const complex i{0.0, 1.0};
    return {{0.0, -i}, {i, 0.0}};
}

complex_matrix z()
{
    return {{1.0, 0.0}, {0.0, -1.0}};
}

} // namespace pauli

} // namespace bellscope
