#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "states.hpp"

namespace qdiv {

/// Eigenvalue terms at or below this contribute nothing to entropy/divergence
/// sums (the 0 ln 0 = 0 and 0^q = 0 conventions).
inline constexpr double kTermCutoff = 1e-14;

/// Squared projection of a populated eigenvector of rho onto the kernel of
/// sigma above which the KL divergence is infinite.
inline constexpr double kKernelOverlapCutoff = 1e-10;

/// Finite divergence results in [-kDivergenceClamp, 0) read as 0.
inline constexpr double kDivergenceClamp = 1e-12;

/// Entropic index q, strictly inside (0, 1). q = 1 is deliberately
/// unrepresentable: the additive limit lives in kl_divergence alone.
class EntropicIndex {
public:
    explicit EntropicIndex(double q) : q_(q) {
        if (!(q > 0.0 && q < 1.0))
            throw OutOfRangeError("entropic index q = " + std::to_string(q) +
                                  " outside the open interval (0, 1)");
    }
    double value() const { return q_; }

private:
    double q_;
};

/// A divergence result: finite nonnegative, or the explicit infinite marker.
class DivergenceValue {
public:
    static DivergenceValue finite(double v) { return DivergenceValue(v, false); }
    static DivergenceValue infinite() { return DivergenceValue(0.0, true); }

    bool is_infinite() const { return infinite_; }

    /// Round-off negatives inside the clamp window read as 0.
    double value() const {
        if (infinite_) throw Error("divergence value is infinite");
        return (raw_ < 0.0 && raw_ >= -kDivergenceClamp) ? 0.0 : raw_;
    }

private:
    DivergenceValue(double raw, bool inf) : raw_(raw), infinite_(inf) {}
    double raw_;
    bool infinite_;
};

namespace detail {

inline double clamp_divergence(double v) {
    return (v < 0.0 && v >= -kDivergenceClamp) ? 0.0 : v;
}

inline void require_same_dim(std::size_t a, std::size_t b) {
    if (a != b)
        throw DimensionMismatchError("state dimensions differ: " + std::to_string(a) + " vs " +
                                     std::to_string(b));
}

/// Row-major |<a_i|b_j>|^2 for two eigenbases.
inline std::vector<double> overlap_sq(const SpectralDecomposition& a,
                                      const SpectralDecomposition& b) {
    const std::size_t n = a.eigenvectors.dim();
    std::vector<double> o(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex dot = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                dot += std::conj(a.eigenvectors(k, i)) * b.eigenvectors(k, j);
            o[i * n + j] = std::norm(dot);
        }
    return o;
}

inline double expectation(const PureState& psi, const ComplexMatrix& m) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            acc += std::conj(psi[i]) * m(i, j) * psi[j];
    return acc.real();
}

}  // namespace detail

/// ln_q x = (x^{1-q} - 1) / (1 - q); at x = 0 this is -1/(1-q).
inline double q_log(double x, EntropicIndex q) {
    const double p = 1.0 - q.value();
    return (std::pow(x, p) - 1.0) / p;
}

/// D_q f(x) = (f(qx) - f(x)) / (x (q - 1))
template <class F>
double jackson_derivative(F&& f, double x, EntropicIndex q) {
    if (x == 0.0) throw ZeroPointError("Jackson derivative is undefined at x = 0");
    return (f(q.value() * x) - f(x)) / (x * (q.value() - 1.0));
}

/// D_q(fg) - (D_q f) g - f (D_q g) - x (q-1) (D_q f)(D_q g); identically zero.
template <class F, class G>
double leibniz_defect(F&& f, G&& g, double x, EntropicIndex q) {
    const auto product = [&](double t) { return f(t) * g(t); };
    const double dq_fg = jackson_derivative(product, x, q);
    const double dq_f = jackson_derivative(f, x, q);
    const double dq_g = jackson_derivative(g, x, q);
    return dq_fg - dq_f * g(x) - f(x) * dq_g - x * (q.value() - 1.0) * dq_f * dq_g;
}

/// S[rho] = -Tr(rho ln rho), in nats.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    double s = 0.0;
    for (double r : rho.spectrum().eigenvalues)
        if (r > kTermCutoff) s -= r * std::log(r);
    return std::max(s, 0.0);
}

/// S_q[rho] = (Tr rho^q - 1) / (1 - q)
inline double tsallis_entropy(const DensityMatrix& rho, EntropicIndex q) {
    double trace_q = 0.0;
    for (double r : rho.spectrum().eigenvalues) trace_q += std::pow(r, q.value());
    return std::max((trace_q - 1.0) / (1.0 - q.value()), 0.0);
}

/// Uhlmann fidelity F[sigma, rho] = [Tr (sqrt(sigma) rho sqrt(sigma))^{1/2}]^2.
/// Eigenvalues of the sandwich at or below kSupportCutoff are dust from exact
/// zeros and are dropped before the square root.
inline double fidelity(const DensityMatrix& sigma, const DensityMatrix& rho) {
    detail::require_same_dim(sigma.dim(), rho.dim());
    const ComplexMatrix root = matrix_power(sigma.spectrum(), 0.5);
    const SpectralDecomposition sandwich = eigh(root * rho.matrix() * root);
    double root_sum = 0.0;
    for (double mu : sandwich.eigenvalues)
        if (mu > kSupportCutoff) root_sum += std::sqrt(mu);
    return root_sum * root_sum;
}

/// d_B^2 = 2 - 2 sqrt(F); round-off residue inside the clamp window reads 0.
inline double bures_metric_sq(const DensityMatrix& sigma, const DensityMatrix& rho) {
    const double d = 2.0 - 2.0 * std::sqrt(fidelity(sigma, rho));
    return std::abs(d) < kDivergenceClamp ? 0.0 : std::max(d, 0.0);
}

/// K[rho||sigma] = Tr[rho (ln rho - ln sigma)]. Infinite whenever a populated
/// eigenvector of rho leaks onto the kernel of sigma.
inline DivergenceValue kl_divergence(const DensityMatrix& rho, const DensityMatrix& sigma) {
    detail::require_same_dim(rho.dim(), sigma.dim());
    const SpectralDecomposition& r = rho.spectrum();
    const SpectralDecomposition& s = sigma.spectrum();
    const std::size_t n = rho.dim();
    const std::vector<double> overlap = detail::overlap_sq(r, s);

    for (std::size_t a = 0; a < n; ++a) {
        if (r.eigenvalues[a] <= kSupportCutoff) continue;
        double kernel_weight = 0.0;
        for (std::size_t b = 0; b < n; ++b)
            if (s.eigenvalues[b] <= kSupportCutoff) kernel_weight += overlap[a * n + b];
        if (kernel_weight > kKernelOverlapCutoff) return DivergenceValue::infinite();
    }

    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double ra = r.eigenvalues[a];
        if (ra <= kTermCutoff) continue;
        const double log_ra = std::log(ra);
        for (std::size_t b = 0; b < n; ++b) {
            const double sb = s.eigenvalues[b];
            if (sb <= kSupportCutoff) continue;  // weight <= cutoff by the check above
            sum += overlap[a * n + b] * ra * (log_ra - std::log(sb));
        }
    }
    return DivergenceValue::finite(sum);
}

/// K_q[rho||sigma] = Tr[rho^q (rho^{1-q} - sigma^{1-q})] / (1-q), built from
/// the two spectra through matrix powers. Finite for every state pair.
inline double q_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                           EntropicIndex q) {
    detail::require_same_dim(rho.dim(), sigma.dim());
    const ComplexMatrix rho_q = matrix_power(rho.spectrum(), q.value());
    const ComplexMatrix rho_p = matrix_power(rho.spectrum(), 1.0 - q.value());
    const ComplexMatrix sigma_p = matrix_power(sigma.spectrum(), 1.0 - q.value());
    const double raw = (rho_q * (rho_p - sigma_p)).trace().real() / (1.0 - q.value());
    return detail::clamp_divergence(raw);
}

/// Same quantity as an explicit eigenbasis double sum:
/// (1/(1-q)) sum_{a,b} |<a|b>|^2 r(a) [1 - (s(b)/r(a))^{1-q}].
inline double q_divergence_eigensum(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    EntropicIndex q) {
    detail::require_same_dim(rho.dim(), sigma.dim());
    const SpectralDecomposition& r = rho.spectrum();
    const SpectralDecomposition& s = sigma.spectrum();
    const std::size_t n = rho.dim();
    const std::vector<double> overlap = detail::overlap_sq(r, s);
    const double p = 1.0 - q.value();

    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double ra = r.eigenvalues[a];
        if (ra <= kTermCutoff) continue;  // r^q prefactor vanishes
        const double ra_q = std::pow(ra, q.value());
        for (std::size_t b = 0; b < n; ++b) {
            const double sb = s.eigenvalues[b];
            const double term = sb <= kTermCutoff ? ra : ra - ra_q * std::pow(sb, p);
            sum += overlap[a * n + b] * term;
        }
    }
    return detail::clamp_divergence(sum / p);
}

/// Same quantity as the Jackson q-derivative of g(x) = Tr(rho^x sigma^{1-x})
/// at x = 1, where g(1) = Tr rho = 1 by normalization.
inline double q_divergence_jackson(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   EntropicIndex q) {
    detail::require_same_dim(rho.dim(), sigma.dim());
    const ComplexMatrix rho_q = matrix_power(rho.spectrum(), q.value());
    const ComplexMatrix sigma_p = matrix_power(sigma.spectrum(), 1.0 - q.value());
    const double g_q = (rho_q * sigma_p).trace().real();
    return detail::clamp_divergence((g_q - 1.0) / (q.value() - 1.0));
}

/// K_q against a pure reference: (1 - <psi| rho^q |psi>) / (1-q).
inline double q_divergence_pure_ref(const DensityMatrix& rho, const PureState& psi,
                                    EntropicIndex q) {
    detail::require_same_dim(rho.dim(), psi.dim());
    const ComplexMatrix rho_q = matrix_power(rho.spectrum(), q.value());
    const double raw = (1.0 - detail::expectation(psi, rho_q)) / (1.0 - q.value());
    return detail::clamp_divergence(raw);
}

/// d_FS^2 = 1 - |<phi|psi>|^2, squared Fubini-Study distance between rays.
inline double fubini_study_sq(const PureState& phi, const PureState& psi) {
    return 1.0 - std::norm(inner_product(phi, psi));
}

/// Closed form K_q[rho_w || |Psi-><Psi-|] = (1 - F^q) / (1-q).
inline double werner_q_divergence_closed(WernerParameter f, EntropicIndex q) {
    return (1.0 - std::pow(f.value(), q.value())) / (1.0 - q.value());
}

/// K_q[rho1 x rho2 || sigma1 x sigma2] - K1 - K2 - (q-1) K1 K2; identically
/// zero, so the returned value is the numerical defect of the identity.
inline double nonadditivity_defect(const DensityMatrix& rho1, const DensityMatrix& sigma1,
                                   const DensityMatrix& rho2, const DensityMatrix& sigma2,
                                   EntropicIndex q) {
    detail::require_same_dim(rho1.dim(), sigma1.dim());
    detail::require_same_dim(rho2.dim(), sigma2.dim());
    const DensityMatrix rho12(tensor_product(rho1.matrix(), rho2.matrix()));
    const DensityMatrix sigma12(tensor_product(sigma1.matrix(), sigma2.matrix()));
    const double k12 = q_divergence(rho12, sigma12, q);
    const double k1 = q_divergence(rho1, sigma1, q);
    const double k2 = q_divergence(rho2, sigma2, q);
    return k12 - k1 - k2 - (q.value() - 1.0) * k1 * k2;
}

}  // namespace qdiv
