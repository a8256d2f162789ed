#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace qdiv {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major storage.
class ComplexMatrix {
public:
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
        if (dim == 0) throw DomainError("matrix dimension must be positive");
    }

    ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim == 0) throw DomainError("matrix dimension must be positive");
        if (entries_.size() != dim * dim)
            throw DomainError("entry count " + std::to_string(entries_.size()) +
                              " does not match dim " + std::to_string(dim) + " squared");
        for (const Complex& z : entries_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw DomainError("matrix entries must be finite");
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    const std::vector<Complex>& entries() const { return entries_; }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    /// Largest entry of |M - M†|.
    double hermiticity_defect() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i; j < dim_; ++j)
                worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return worst;
    }

    bool is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

    double max_abs_diff(const ComplexMatrix& other) const {
        if (other.dim_ != dim_) throw DimensionMismatchError("matrix dimensions differ");
        double worst = 0.0;
        for (std::size_t k = 0; k < entries_.size(); ++k)
            worst = std::max(worst, std::abs(entries_[k] - other.entries_[k]));
        return worst;
    }

    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.dim_ != b.dim_) throw DimensionMismatchError("matrix dimensions differ");
        ComplexMatrix out(a.dim_);
        for (std::size_t k = 0; k < out.entries_.size(); ++k)
            out.entries_[k] = a.entries_[k] + b.entries_[k];
        return out;
    }

    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.dim_ != b.dim_) throw DimensionMismatchError("matrix dimensions differ");
        ComplexMatrix out(a.dim_);
        for (std::size_t k = 0; k < out.entries_.size(); ++k)
            out.entries_[k] = a.entries_[k] - b.entries_[k];
        return out;
    }

    friend ComplexMatrix operator*(const Complex& scale, const ComplexMatrix& m) {
        ComplexMatrix out(m.dim_);
        for (std::size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] = scale * m.entries_[k];
        return out;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.dim_ != b.dim_) throw DimensionMismatchError("matrix dimensions differ");
        const std::size_t n = a.dim_;
        ComplexMatrix out(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0)) continue;
                for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

/// Kronecker product: entry ((i*dimB + k), (j*dimB + l)) = A(i,j) * B(k,l).
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return out;
}

}  // namespace qdiv
