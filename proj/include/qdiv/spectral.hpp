#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "complex_matrix.hpp"

namespace qdiv {

/// Largest |M - M†| entry accepted as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops.
inline constexpr double kJacobiOffThreshold = 1e-12;

inline constexpr int kJacobiMaxSweeps = 100;

/// Eigenvalues within kEigenvalueClampWindow of zero are treated as exact
/// zeros before a spectral map is applied: round-off turns exact kernels into
/// +/- dust, and maps like x^q or sqrt amplify positive dust badly. Anything
/// below -window is the caller's problem (state validation rejects it).
inline constexpr double kEigenvalueClampWindow = 1e-9;

/// Eigenvalues (ascending) paired with orthonormal eigenvector columns:
/// column k of `eigenvectors` belongs to `eigenvalues[k]`.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    /// Σ_k λ_k v_k v_k†
    ComplexMatrix reconstruct() const;
};

namespace detail {

inline double off_diagonal_frobenius(const ComplexMatrix& a) {
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < a.dim(); ++p)
        for (std::size_t q = p + 1; q < a.dim(); ++q)
            sum += std::norm(a(p, q)) + std::norm(a(q, p));
    return std::sqrt(sum);
}

// One unitary Jacobi rotation in the (p, q) plane, chosen so that the
// transformed A has A(p,q) = 0. Also accumulates the rotation into V.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double b = std::abs(apq);
    if (b == 0.0) return;

    const Complex phase = apq / b;
    const double alpha = a(p, p).real();
    const double gamma = a(q, q).real();
    const double theta = (gamma - alpha) / (2.0 * b);

    // Smaller root of t^2 + 2 theta t - 1 = 0 keeps the rotation angle below 45 deg.
    double t;
    if (std::abs(theta) > 1e150) {
        t = 1.0 / (2.0 * theta);
    } else {
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const Complex w = (t * c) * phase;
    const Complex wc = std::conj(w);

    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {  // A <- A G
        const Complex ap = a(i, p), aq = a(i, q);
        a(i, p) = c * ap - wc * aq;
        a(i, q) = w * ap + c * aq;
    }
    for (std::size_t j = 0; j < n; ++j) {  // A <- G† A
        const Complex ap = a(p, j), aq = a(q, j);
        a(p, j) = c * ap - w * aq;
        a(q, j) = wc * ap + c * aq;
    }
    // Closed forms for the rotated 2x2 block beat the round-off of the updates above.
    a(p, p) = Complex(alpha - t * b, 0.0);
    a(q, q) = Complex(gamma + t * b, 0.0);
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (std::size_t i = 0; i < n; ++i) {  // V <- V G
        const Complex vp = v(i, p), vq = v(i, q);
        v(i, p) = c * vp - wc * vq;
        v(i, q) = w * vp + c * vq;
    }
}

}  // namespace detail

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
inline SpectralDecomposition eigh(const ComplexMatrix& input) {
    const double defect = input.hermiticity_defect();
    if (defect > kHermitianTolerance)
        throw NotHermitianError("matrix is not Hermitian: max |M - M^dag| entry " +
                                std::to_string(defect));

    const std::size_t n = input.dim();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);

    bool converged = detail::off_diagonal_frobenius(a) < kJacobiOffThreshold;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
        converged = detail::off_diagonal_frobenius(a) < kJacobiOffThreshold;
    }
    if (!converged)
        throw NoConvergenceError("Jacobi eigensolver did not converge within " +
                                 std::to_string(kJacobiMaxSweeps) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    SpectralDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Σ_k f(λ_k) v_k v_k† for an already-computed decomposition. The map is
/// applied to the stored eigenvalues verbatim.
template <class F>
ComplexMatrix matrix_function(const SpectralDecomposition& s, F&& f) {
    const std::size_t n = s.eigenvectors.dim();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = f(s.eigenvalues[k]);
        if (!std::isfinite(w))
            throw DomainError("matrix function map undefined at eigenvalue " +
                              std::to_string(s.eigenvalues[k]));
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex wi = w * s.eigenvectors(i, k);
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += wi * std::conj(s.eigenvectors(j, k));
        }
    }
    return out;
}

/// f applied to a Hermitian matrix through its spectrum, with the zero-window
/// clamp applied first so maps defined on [0, inf) work on numerically
/// positive-semidefinite inputs.
template <class F>
ComplexMatrix matrix_function(const ComplexMatrix& m, F&& f) {
    SpectralDecomposition s = eigh(m);
    for (double& lambda : s.eigenvalues)
        if (std::abs(lambda) <= kEigenvalueClampWindow) lambda = 0.0;
    return matrix_function(s, std::forward<F>(f));
}

/// λ^p through the spectrum; IEEE pow gives the 0^p = 0 (p > 0) convention
/// exactly on snapped-to-zero eigenvalues.
inline ComplexMatrix matrix_power(const SpectralDecomposition& s, double exponent) {
    return matrix_function(s, [exponent](double x) { return std::pow(x, exponent); });
}

inline ComplexMatrix SpectralDecomposition::reconstruct() const {
    return matrix_function(*this, [](double x) { return x; });
}

}  // namespace qdiv
