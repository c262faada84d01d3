#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "lpwave/cutoff.hpp"
#include "lpwave/field.hpp"
#include "lpwave/sectors.hpp"

namespace lpwave {

/// Conservative superset of a symbol's support, used for fast enumeration,
/// kernel-grid sizing and composite validity checks.
struct SupportDescriptor {
    static constexpr double inf = std::numeric_limits<double>::infinity();
    double r_lo = 0.0, r_hi = inf;      ///< space-time modulus |(tau, xi)|
    double mod_lo = 0.0, mod_hi = inf;  ///< cone distance ||tau| - |xi||
    double xi_lo = 0.0, xi_hi = inf;    ///< spatial modulus |xi|
    int sign = 0;                       ///< -1 / 0 (both) / +1 for tau half-space
    std::vector<int> sectors;           ///< restricted sector ids (empty = all)
    bool excludes_residue = false;      ///< vanishes on the exact light cone

    void intersect(const SupportDescriptor& o);
};

/// How a composite symbol constrains the cone distance ||tau|-|xi||.
///
/// Eq selects one dyadic cone shell (ladder membership required; the bottom
/// and top shells absorb sub- and super-ladder distances). Le/Lt/Ge are raw
/// threshold cutoffs, defined for any positive d: Le(d) = (0, 2d),
/// Lt(d) = (0, d), Ge(d) = [d, inf). All exclude the exact cone; the residue
/// class is addressable only through its own factor.
enum class ConeMode { None, Eq, Le, Lt, Ge };

/// One multiplicative factor of a symbol.
struct SymbolFactor {
    enum class Kind {
        STShell,      // s_lambda
        Cone,         // c_d and threshold variants, per ConeMode
        Spatial,      // p_lambda
        SpatialLe,    // P_{. <= lambda}
        Sign,         // indicator(+-tau > 0)
        Block,        // b^omega_{lambda, delta}
        NotResidue,   // vanish on the exact cone
        ResidueOnly,  // select the exact cone
    };
    Kind kind;
    double param = 0.0;
    ConeMode cone_mode = ConeMode::None;
    int sign = 0;
    int sector = -1;
    CutoffProfile profile;
    std::shared_ptr<const AngularSectorSet> sectors;
};

/// A real-valued weight on frequency points in [0, 1], built as a product of
/// shell / cone / spatial / sign / angular-block factors. Immutable.
class MultiplierSymbol {
public:
    MultiplierSymbol(GridSpec grid, std::vector<SymbolFactor> factors);

    const GridSpec& grid() const { return grid_; }
    const std::vector<SymbolFactor>& factors() const { return factors_; }
    const SupportDescriptor& support() const { return desc_; }
    bool all_smooth_profiles() const;

    /// Pointwise evaluation at an arbitrary frequency point.
    double operator()(const FreqPoint& p) const;

    /// Canonical JSON-text spec (stable key order).
    std::string spec_json() const;

    /// Product symbol; grids must agree, support descriptors intersect.
    friend MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b);

private:
    GridSpec grid_;
    std::vector<SymbolFactor> factors_;
    SupportDescriptor desc_;
};

/// s_lambda: dyadic space-time frequency shell. Sharp profile realizes the
/// half-open indicator {lambda <= |(tau,xi)| < 2 lambda} (ends absorbing);
/// smooth realizes the telescoping difference phi_{2 lambda} - phi_{lambda/2}.
MultiplierSymbol shell_symbol(const GridSpec& g, double lambda,
                              CutoffProfile profile = CutoffProfile::sharp());

/// c_d: dyadic cone-distance shell (same conventions on the modulation).
MultiplierSymbol cone_symbol(const GridSpec& g, double d,
                             CutoffProfile profile = CutoffProfile::sharp());

/// p_lambda: dyadic spatial frequency shell.
MultiplierSymbol spatial_symbol(const GridSpec& g, double lambda,
                                CutoffProfile profile = CutoffProfile::sharp());

/// P_{. <= lambda}: spatial low-pass, |xi| < 2 lambda.
MultiplierSymbol spatial_lowpass_symbol(const GridSpec& g, double lambda,
                                        CutoffProfile profile = CutoffProfile::sharp());

/// Indicator of the half space +-tau > 0 (the tau = 0 row belongs to neither).
MultiplierSymbol sign_symbol(const GridSpec& g, int sign);

/// Selector of the cone residue class (lattice points with |tau| = |xi| exactly).
MultiplierSymbol cone_residue_symbol(const GridSpec& g);

/// b^omega: radially directed block, supported on
/// {xi : |xi| in [lambda/2, 4 lambda], direction assigned to omega}.
MultiplierSymbol block_symbol(const GridSpec& g, std::shared_ptr<const AngularSectorSet> sectors,
                              int omega, CutoffProfile profile = CutoffProfile::sharp());

/// Builder for the composite operators S_{lambda,d}, S_{lambda,.<=d},
/// S_{lambda,d<=.}, S^+-_{lambda,d}, S^omega_{lambda,d} and friends.
struct CompositeSpec {
    double lambda = 0.0;  ///< space-time shell; 0 = no shell factor
    ConeMode cone = ConeMode::None;
    double d = 0.0;
    int sign = 0;
    int omega = -1;  ///< >= 0 requests the angular block B^omega_{lambda,(lambda d)^{1/2}}
    std::shared_ptr<const AngularSectorSet> sectors;  ///< required when omega >= 0
    CutoffProfile profile;
};
MultiplierSymbol composite_symbol(const GridSpec& g, const CompositeSpec& spec);

/// Sector set at the S^omega width (lambda d)^{1/2}.
std::shared_ptr<const AngularSectorSet> s_omega_sectors(int n, double lambda, double d);

/// Apply the symbol as a space-time Fourier multiplier. Accepts any
/// representation and returns the result in the caller's representation.
SpaceTimeField apply(const MultiplierSymbol& s, const SpaceTimeField& u);

/// Apply a spatial symbol to a spatial field (Cauchy data projections).
SpatialField apply_spatial(const MultiplierSymbol& s, const SpatialField& f);

namespace ref {
/// Serial reference apply (same evaluation, plain loop).
SpaceTimeField apply(const MultiplierSymbol& s, const SpaceTimeField& u);
}  // namespace ref

namespace lattice {
/// Exact residue test: |tau|^2 == |xi|^2 with both sides exact in double.
bool on_cone(double tau, double xi_sq);
}  // namespace lattice

}  // namespace lpwave
