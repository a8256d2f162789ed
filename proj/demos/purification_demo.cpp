// How close is a noisy Werner state to the Bell state it decayed from?
// Walks the Werner family and prints the purification measures side by side.

#include <cstdio>

#include "qdiv/qdiv.hpp"

int main() {
    using namespace qdiv;

    const PureState target = bell_state(BellKind::PsiMinus);
    const DensityMatrix target_projector = projector(target);
    const EntropicIndex q(0.5);

    std::printf("Werner family against |Psi->  (q = %.2f)\n", q.value());
    std::printf("%6s %10s %10s %12s %14s %12s\n", "F", "fidelity", "bures^2", "K_q", "KL",
                "S_q(state)");
    for (double f = 0.25; f <= 1.0; f += 0.15) {
        const WernerParameter parameter(f);
        const DensityMatrix state = werner_state(parameter);
        const DivergenceValue kl = kl_divergence(state, target_projector);
        std::printf("%6.2f %10.6f %10.6f %12.6f %14s %12.6f  %s\n", f,
                    fidelity(target_projector, state), bures_metric_sq(target_projector, state),
                    q_divergence(state, target_projector, q),
                    kl.is_infinite() ? "inf" : format_number(kl.value()).c_str(),
                    tsallis_entropy(state, q), parameter.separable() ? "(separable)" : "");
    }

    std::printf("\nSame comparison for a random 4-dim mixed state:\n");
    const DensityMatrix noisy = random_density(4, 2024);
    std::printf("  fidelity = %.6f, K_q = %.6f, KL %s\n", fidelity(target_projector, noisy),
                q_divergence_pure_ref(noisy, target, q),
                kl_divergence(noisy, target_projector).is_infinite() ? "= inf" : "finite");
    return 0;
}
