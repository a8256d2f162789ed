#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spectral.hpp"

namespace qdiv {

/// |Tr(rho) - 1| accepted for a density matrix.
inline constexpr double kTraceTolerance = 1e-10;

/// Eigenvalues below -kNegativeEigenvalueTolerance fail validation; anything
/// in [-tol, 0) is round-off and gets clamped to 0.
inline constexpr double kNegativeEigenvalueTolerance = 1e-9;

/// Spectrum entries at or below this are the numerical kernel: they are
/// snapped to exact zero in the cached decomposition so that spectral maps
/// with infinite slope at 0 (x^q, ln, sqrt) see true zeros instead of dust.
inline constexpr double kSupportCutoff = 1e-12;

inline constexpr double kPureNormTolerance = 1e-10;

/// Normalized complex state vector |psi>.
class PureState {
public:
    explicit PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.empty()) throw DomainError("pure state needs at least one amplitude");
        double norm2 = 0.0;
        for (const Complex& z : amplitudes_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw DomainError("pure state amplitudes must be finite");
            norm2 += std::norm(z);
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > kPureNormTolerance)
            throw ValidationError("pure state norm " + std::to_string(std::sqrt(norm2)) +
                                  " deviates from 1");
    }

    /// Rescales an arbitrary nonzero vector onto the unit sphere.
    static PureState normalized(std::vector<Complex> amplitudes) {
        double norm2 = 0.0;
        for (const Complex& z : amplitudes) norm2 += std::norm(z);
        if (norm2 <= 0.0) throw DomainError("cannot normalize the zero vector");
        const double scale = 1.0 / std::sqrt(norm2);
        for (Complex& z : amplitudes) z *= scale;
        return PureState(std::move(amplitudes));
    }

    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

private:
    std::vector<Complex> amplitudes_;
};

/// <a|b>
inline Complex inner_product(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw DimensionMismatchError("pure state dimensions differ");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

/// Validated density operator: Hermitian, positive semidefinite, unit trace.
/// The spectral decomposition is computed once at construction; its
/// eigenvalues are clamped into [0, 1] with the numerical kernel snapped to
/// exact zero (see kSupportCutoff).
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix matrix)
        : matrix_(std::move(matrix)), spectrum_{{}, ComplexMatrix(1)} {
        const double defect = matrix_.hermiticity_defect();
        if (defect > kHermitianTolerance)
            throw NotHermitianError("density matrix is not Hermitian: max |M - M^dag| entry " +
                                    std::to_string(defect));
        const Complex tr = matrix_.trace();
        if (std::abs(tr - Complex(1.0)) > kTraceTolerance)
            throw TraceNotOneError("density matrix trace " + std::to_string(tr.real()) +
                                   " deviates from 1");
        spectrum_ = eigh(matrix_);
        for (double& lambda : spectrum_.eigenvalues) {
            if (lambda < -kNegativeEigenvalueTolerance)
                throw NotPositiveError("density matrix has eigenvalue " + std::to_string(lambda));
            lambda = std::min(std::max(lambda, 0.0), 1.0);
            if (lambda <= kSupportCutoff) lambda = 0.0;
        }
    }

    std::size_t dim() const { return matrix_.dim(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const SpectralDecomposition& spectrum() const { return spectrum_; }

private:
    ComplexMatrix matrix_;
    SpectralDecomposition spectrum_;
};

/// |psi><psi| as a validated density matrix.
inline DensityMatrix projector(const PureState& psi) {
    const std::size_t n = psi.dim();
    ComplexMatrix p(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = psi[i] * std::conj(psi[j]);
    return DensityMatrix(std::move(p));
}

// Two-qubit computational basis order: |uu>, |ud>, |du>, |dd> (u = index 0).
enum class BellKind { PsiMinus, PsiPlus, PhiPlus, PhiMinus };

inline PureState bell_state(BellKind kind) {
    const double r = std::sqrt(0.5);
    switch (kind) {
        case BellKind::PsiMinus: return PureState({0.0, r, -r, 0.0});
        case BellKind::PsiPlus: return PureState({0.0, r, r, 0.0});
        case BellKind::PhiPlus: return PureState({r, 0.0, 0.0, r});
        case BellKind::PhiMinus: return PureState({r, 0.0, 0.0, -r});
    }
    throw DomainError("unknown Bell state kind");
}

/// Mixing weight F of the |Psi-> component of a Werner state.
class WernerParameter {
public:
    explicit WernerParameter(double f) : f_(f) {
        if (!(f >= 0.25 && f <= 1.0))
            throw OutOfRangeError("Werner parameter F = " + std::to_string(f) +
                                  " outside [1/4, 1]");
    }
    double value() const { return f_; }
    bool separable() const { return f_ <= 0.5; }

private:
    double f_;
};

/// F |Psi-><Psi-| + (1-F)/3 (|Psi+><Psi+| + |Phi+><Phi+| + |Phi-><Phi-|)
inline DensityMatrix werner_state(WernerParameter f) {
    const double rest = (1.0 - f.value()) / 3.0;
    ComplexMatrix m(4);
    for (BellKind kind :
         {BellKind::PsiMinus, BellKind::PsiPlus, BellKind::PhiPlus, BellKind::PhiMinus}) {
        const double weight = kind == BellKind::PsiMinus ? f.value() : rest;
        const PureState psi = bell_state(kind);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) += weight * psi[i] * std::conj(psi[j]);
    }
    return DensityMatrix(std::move(m));
}

inline DensityMatrix werner_state(double f) { return werner_state(WernerParameter(f)); }

inline DensityMatrix maximally_mixed(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
    return DensityMatrix(std::move(m));
}

/// Deterministic standard-normal source: std::mt19937_64 drives Box-Muller on
/// 53-bit uniforms. This generator identity is part of the output contract
/// (same seed, same draws, everywhere) and must not change silently.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    /// Uniform on (0, 1]; never 0, so log() below is safe.
    double uniform01() {
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    }

    /// Independent N(0,1) real and imaginary parts.
    Complex complex_normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    std::mt19937_64 rng_;
};

/// Ginibre-induced random state: rho = G G† / Tr(G G†) with i.i.d. complex
/// normal G. Full rank almost surely, so generic tests keep KL finite.
inline DensityMatrix random_density(std::size_t dim, std::uint64_t seed) {
    GaussianSource source(seed);
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = source.complex_normal();
    ComplexMatrix gg = g * g.adjoint();
    const double tr = gg.trace().real();
    ComplexMatrix rho = Complex(1.0 / tr) * gg;
    for (std::size_t i = 0; i < dim; ++i)  // kill round-off drift on the diagonal
        rho(i, i) = Complex(rho(i, i).real(), 0.0);
    return DensityMatrix(std::move(rho));
}

inline PureState random_pure(std::size_t dim, std::uint64_t seed) {
    GaussianSource source(seed);
    std::vector<Complex> amplitudes(dim);
    for (Complex& z : amplitudes) z = source.complex_normal();
    return PureState::normalized(std::move(amplitudes));
}

}  // namespace qdiv
