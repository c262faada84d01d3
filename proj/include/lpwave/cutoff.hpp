#pragma once

#include <stdexcept>

namespace lpwave {

/// Radial cutoff profile shared by every Fourier localization.
///
/// Two roles, split deliberately: the sharp profile is an exact indicator
/// (half-open shells tile, projectors are idempotent, partitions are exact)
/// and backs all norm/decomposition algebra; the smooth profile is a
/// polynomial-spline bump (C^order, = 1 on |s| <= 1, vanishing for
/// |s| >= 1 + 2*transition) and is what the kernel-boundedness checks use.
struct CutoffProfile {
    enum class Kind { Sharp, Smooth };

    Kind kind = Kind::Sharp;
    double transition = 0.25;  // relative width, smooth only, in (0, 1/2]
    int order = 5;             // smoothness order of the spline bump, >= 4

    static CutoffProfile sharp() { return CutoffProfile{}; }
    static CutoffProfile smooth(double transition = 0.25, int order = 5);

    bool is_sharp() const { return kind == Kind::Sharp; }

    /// Bump value: 1 on |s| <= 1, 0 beyond the transition band.
    /// Sharp profile gives the indicator of |s| < 1.
    double bump(double s) const;

    /// Scaled bump phi_d(s) = bump(s/d).
    double bump_at(double s, double d) const { return bump(s / d); }
};

/// Polynomial smoothstep of order m: C^m monotone ramp 0 -> 1 on [0, 1].
double smoothstep(int order, double x);

}  // namespace lpwave
