#pragma once

#include "lpwave/symbol.hpp"

namespace lpwave {

/// Rescaling applied to a symbol before its kernel is measured.
struct KernelVariant {
    enum class Kind {
        Plain,            ///< the symbol itself
        GradientScaled,   ///< lambda^{-1} |2 pi xi| . s  (for lambda^{-1} grad S_lambda)
        ResolventScaled,  ///< (lambda d) / (4 pi^2 (tau^2 - |xi|^2)) . s
    };
    Kind kind = Kind::Plain;
    double lambda = 0.0;
    double d = 0.0;

    static KernelVariant plain() { return {}; }
    static KernelVariant gradient(double lambda) { return {Kind::GradientScaled, lambda, 0.0}; }
    static KernelVariant resolvent(double lambda, double d) {
        return {Kind::ResolventScaled, lambda, d};
    }
};

/// L^1 norm of the space-time convolution kernel of the (rescaled) symbol,
/// quadrature on a tensor grid oversampled at least `oversample`-fold
/// relative to the symbol's support box. Symbols mixing a cone-distance
/// factor with an angular block are integrated in null-rotated coordinates
/// (the frame in which their support box is axis-aligned); the two tau
/// half-spaces are measured separately and summed.
///
/// Sharp-profile symbols are refused: that kernel family is unbounded
/// (Dirichlet-type divergence).
double kernel_l1_norm(const MultiplierSymbol& s, KernelVariant variant = KernelVariant::plain(),
                      int oversample = 4);

/// ||K-hat||_{L^1_t(L^inf_xi)}: the time-L^1 of the spatial sup of the
/// partial (tau -> t) transform of the symbol; the quantity behind the
/// L^q(L^2) boundedness of S_{lambda,d} and S_{lambda,.<=d}.
double l1tau_linf_bound(const MultiplierSymbol& s, int oversample = 4);

}  // namespace lpwave
