#include "lpwave/symbol.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "lpwave/transforms.hpp"

namespace lpwave {

namespace lattice {
bool on_cone(double tau, double xi_sq) { return tau * tau == xi_sq; }
}  // namespace lattice

void SupportDescriptor::intersect(const SupportDescriptor& o) {
    r_lo = std::max(r_lo, o.r_lo);
    r_hi = std::min(r_hi, o.r_hi);
    mod_lo = std::max(mod_lo, o.mod_lo);
    mod_hi = std::min(mod_hi, o.mod_hi);
    xi_lo = std::max(xi_lo, o.xi_lo);
    xi_hi = std::min(xi_hi, o.xi_hi);
    if (sign == 0) sign = o.sign;
    else if (o.sign != 0 && o.sign != sign) sign = 2;  // empty
    if (sectors.empty()) sectors = o.sectors;
    excludes_residue = excludes_residue || o.excludes_residue;
}

namespace {

struct EvalContext {
    const DyadicLadder* st_ladder = nullptr;
    const DyadicLadder* cone_ladder = nullptr;
    const DyadicLadder* sp_ladder = nullptr;
    // per-factor resolved ladder indices for Eq factors
    std::vector<int> eq_index;
};

double smooth_shell_value(const CutoffProfile& p, double v, double lambda) {
    // phi_{2 lambda} - phi_{lambda/2}
    return p.bump(v / (2.0 * lambda)) - p.bump(2.0 * v / lambda);
}

double annulus_bump(const CutoffProfile& p, double v, double a, double b) {
    // 1 on [a, b], supported in [a/(1+2w), b(1+2w)]
    const double w = 1.0 + 2.0 * p.transition;
    return p.bump(v / b) - p.bump(v * w / a);
}

}  // namespace

MultiplierSymbol::MultiplierSymbol(GridSpec grid, std::vector<SymbolFactor> factors)
    : grid_(std::move(grid)), factors_(std::move(factors)) {
    for (const SymbolFactor& f : factors_) {
        SupportDescriptor d;
        const double w = f.profile.is_sharp() ? 1.0 : 1.0 + 2.0 * f.profile.transition;
        switch (f.kind) {
            case SymbolFactor::Kind::STShell: {
                const DyadicLadder lad = frequency_shells(grid_);
                const int idx = lad.index_of(f.param);
                if (idx < 0)
                    throw config_error("shell_symbol: lambda outside the grid's resolvable range");
                if (f.profile.is_sharp()) {
                    d.r_lo = idx == 0 ? 0.0 : f.param;
                    d.r_hi = idx + 1 == int(lad.size()) ? SupportDescriptor::inf : 2.0 * f.param;
                } else {
                    d.r_lo = f.param / 2.0;
                    d.r_hi = 2.0 * f.param * w;
                }
                break;
            }
            case SymbolFactor::Kind::Cone: {
                d.excludes_residue = true;
                if (f.cone_mode == ConeMode::Eq) {
                    const DyadicLadder lad = cone_shells(grid_);
                    const int idx = lad.index_of(f.param);
                    if (idx < 0)
                        throw config_error("cone_symbol: d outside the grid's resolvable range");
                    if (f.profile.is_sharp()) {
                        d.mod_lo = idx == 0 ? 0.0 : f.param;
                        d.mod_hi = idx + 1 == int(lad.size()) ? SupportDescriptor::inf : 2.0 * f.param;
                    } else {
                        d.mod_lo = f.param / 2.0;
                        d.mod_hi = 2.0 * f.param * w;
                    }
                } else if (f.cone_mode == ConeMode::Le) {
                    d.mod_hi = 2.0 * f.param * w;
                } else if (f.cone_mode == ConeMode::Lt) {
                    d.mod_hi = f.param * w;
                } else if (f.cone_mode == ConeMode::Ge) {
                    d.mod_lo = f.profile.is_sharp() ? f.param : f.param / 2.0;
                }
                if (!(f.param > 0.0)) throw config_error("cone factor: d must be positive");
                break;
            }
            case SymbolFactor::Kind::Spatial: {
                const DyadicLadder lad = spatial_shells(grid_);
                const int idx = lad.index_of(f.param);
                if (idx < 0)
                    throw config_error("spatial_symbol: lambda outside the grid's resolvable range");
                if (f.profile.is_sharp()) {
                    d.xi_lo = idx == 0 ? 0.0 : f.param;
                    d.xi_hi = idx + 1 == int(lad.size()) ? SupportDescriptor::inf : 2.0 * f.param;
                } else {
                    d.xi_lo = f.param / 2.0;
                    d.xi_hi = 2.0 * f.param * w;
                }
                break;
            }
            case SymbolFactor::Kind::SpatialLe:
                d.xi_hi = 2.0 * f.param * w;
                break;
            case SymbolFactor::Kind::Sign:
                d.sign = f.sign;
                break;
            case SymbolFactor::Kind::Block:
                d.xi_lo = (f.sectors->lambda() / 2.0) / w;
                d.xi_hi = 4.0 * f.sectors->lambda() * w;
                d.sectors = {f.sector};
                break;
            case SymbolFactor::Kind::NotResidue:
                d.excludes_residue = true;
                break;
            case SymbolFactor::Kind::ResidueOnly:
                d.mod_hi = 0.0;
                break;
        }
        desc_.intersect(d);
    }
}

bool MultiplierSymbol::all_smooth_profiles() const {
    for (const SymbolFactor& f : factors_) {
        switch (f.kind) {
            case SymbolFactor::Kind::STShell:
            case SymbolFactor::Kind::Cone:
            case SymbolFactor::Kind::Spatial:
            case SymbolFactor::Kind::SpatialLe:
            case SymbolFactor::Kind::Block:
                if (f.profile.is_sharp()) return false;
                break;
            default:
                break;
        }
    }
    return true;
}

namespace {

/// Shared pointwise evaluation. sector_hint: -2 = unknown (compute from xi),
/// otherwise the precomputed sector id (or -1 for outside-annulus points).
double eval_factors(const GridSpec& grid, const std::vector<SymbolFactor>& factors, double tau,
                    double xi_sq, const double* xi, int sector_hint,
                    const DyadicLadder& st_lad, const DyadicLadder& cone_lad,
                    const DyadicLadder& sp_lad) {
    const double r = std::sqrt(tau * tau + xi_sq);
    const double xin = std::sqrt(xi_sq);
    const bool residue = lattice::on_cone(tau, xi_sq);
    const double mod = std::fabs(std::fabs(tau) - xin);
    double value = 1.0;
    for (const SymbolFactor& f : factors) {
        double v = 1.0;
        switch (f.kind) {
            case SymbolFactor::Kind::STShell:
                if (f.profile.is_sharp())
                    v = (r > 0.0 && st_lad.classify(r) == st_lad.index_of(f.param)) ? 1.0 : 0.0;
                else
                    v = smooth_shell_value(f.profile, r, f.param);
                break;
            case SymbolFactor::Kind::Cone: {
                if (residue) { v = 0.0; break; }
                if (f.profile.is_sharp()) {
                    switch (f.cone_mode) {
                        case ConeMode::Eq:
                            v = cone_lad.classify(mod) == cone_lad.index_of(f.param) ? 1.0 : 0.0;
                            break;
                        case ConeMode::Le: v = mod < 2.0 * f.param ? 1.0 : 0.0; break;
                        case ConeMode::Lt: v = mod < f.param ? 1.0 : 0.0; break;
                        case ConeMode::Ge: v = mod >= f.param ? 1.0 : 0.0; break;
                        case ConeMode::None: break;
                    }
                } else {
                    switch (f.cone_mode) {
                        case ConeMode::Eq: v = smooth_shell_value(f.profile, mod, f.param); break;
                        case ConeMode::Le: v = f.profile.bump(mod / (2.0 * f.param)); break;
                        case ConeMode::Lt: v = f.profile.bump(mod / f.param); break;
                        case ConeMode::Ge: v = 1.0 - f.profile.bump(mod / f.param); break;
                        case ConeMode::None: break;
                    }
                }
                break;
            }
            case SymbolFactor::Kind::Spatial:
                if (f.profile.is_sharp())
                    v = (xin > 0.0 && sp_lad.classify(xin) == sp_lad.index_of(f.param)) ? 1.0 : 0.0;
                else
                    v = smooth_shell_value(f.profile, xin, f.param);
                break;
            case SymbolFactor::Kind::SpatialLe:
                if (f.profile.is_sharp())
                    v = xin < 2.0 * f.param ? 1.0 : 0.0;
                else
                    v = f.profile.bump(xin / (2.0 * f.param));
                break;
            case SymbolFactor::Kind::Sign:
                v = (f.sign > 0 ? tau > 0.0 : tau < 0.0) ? 1.0 : 0.0;
                break;
            case SymbolFactor::Kind::Block: {
                const double lam = f.sectors->lambda();
                if (f.profile.is_sharp()) {
                    if (xi_sq < lam * lam / 4.0 || xi_sq > 16.0 * lam * lam || xi_sq == 0.0) {
                        v = 0.0;
                    } else {
                        int sec = sector_hint;
                        if (sec == -2) sec = xi ? f.sectors->assign(xi) : -1;
                        v = sec == f.sector ? 1.0 : 0.0;
                    }
                } else {
                    const double radial = annulus_bump(f.profile, xin, lam / 2.0, 4.0 * lam);
                    double ang = 0.0;
                    if (xin > 0.0 && xi) {
                        const double theta =
                            geodesic_angle(xi, f.sectors->center(f.sector).data(), grid.n());
                        ang = f.profile.bump(theta * lam / f.sectors->delta());
                    }
                    v = radial * ang;
                }
                break;
            }
            case SymbolFactor::Kind::NotResidue: v = residue ? 0.0 : 1.0; break;
            case SymbolFactor::Kind::ResidueOnly: v = residue ? 1.0 : 0.0; break;
        }
        value *= v;
        if (value == 0.0) return 0.0;
    }
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace

double MultiplierSymbol::operator()(const FreqPoint& p) const {
    const DyadicLadder st = frequency_shells(grid_);
    const DyadicLadder cl = cone_shells(grid_);
    const DyadicLadder sp = spatial_shells(grid_);
    return eval_factors(grid_, factors_, p.tau, p.xi_norm_sq(), p.xi.data(), -2, st, cl, sp);
}

std::string MultiplierSymbol::spec_json() const {
    nlohmann::json out;
    out["grid"] = {{"n", grid_.n()}, {"N_x", grid_.nx()}, {"L", grid_.L()},
                   {"N_t", grid_.nt()}, {"T", grid_.T()}};
    nlohmann::json fs = nlohmann::json::array();
    for (const SymbolFactor& f : factors_) {
        nlohmann::json j;
        switch (f.kind) {
            case SymbolFactor::Kind::STShell: j["kind"] = "st_shell"; j["lambda"] = f.param; break;
            case SymbolFactor::Kind::Cone: {
                j["kind"] = "cone";
                j["d"] = f.param;
                const char* m = f.cone_mode == ConeMode::Eq   ? "eq"
                                : f.cone_mode == ConeMode::Le ? "le"
                                : f.cone_mode == ConeMode::Lt ? "lt"
                                                              : "ge";
                j["mode"] = m;
                break;
            }
            case SymbolFactor::Kind::Spatial: j["kind"] = "spatial"; j["lambda"] = f.param; break;
            case SymbolFactor::Kind::SpatialLe:
                j["kind"] = "spatial_lowpass";
                j["lambda"] = f.param;
                break;
            case SymbolFactor::Kind::Sign: j["kind"] = "sign"; j["sign"] = f.sign; break;
            case SymbolFactor::Kind::Block:
                j["kind"] = "block";
                j["lambda"] = f.sectors->lambda();
                j["delta"] = f.sectors->delta();
                j["omega"] = f.sector;
                break;
            case SymbolFactor::Kind::NotResidue: j["kind"] = "not_residue"; break;
            case SymbolFactor::Kind::ResidueOnly: j["kind"] = "residue"; break;
        }
        if (f.kind != SymbolFactor::Kind::Sign && f.kind != SymbolFactor::Kind::NotResidue &&
            f.kind != SymbolFactor::Kind::ResidueOnly) {
            j["profile"] = f.profile.is_sharp() ? "sharp" : "smooth";
            if (!f.profile.is_sharp()) {
                j["transition"] = f.profile.transition;
                j["order"] = f.profile.order;
            }
        }
        fs.push_back(j);
    }
    out["factors"] = fs;
    return out.dump();
}

MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b) {
    if (!(a.grid() == b.grid())) throw contract_error("product: symbol grids differ");
    std::vector<SymbolFactor> fs = a.factors_;
    fs.insert(fs.end(), b.factors_.begin(), b.factors_.end());
    return MultiplierSymbol(a.grid_, std::move(fs));
}

MultiplierSymbol shell_symbol(const GridSpec& g, double lambda, CutoffProfile profile) {
    SymbolFactor f;
    f.kind = SymbolFactor::Kind::STShell;
    f.param = lambda;
    f.profile = profile;
    return MultiplierSymbol(g, {f});
}

MultiplierSymbol cone_symbol(const GridSpec& g, double d, CutoffProfile profile) {
    SymbolFactor f;
    f.kind = SymbolFactor::Kind::Cone;
    f.cone_mode = ConeMode::Eq;
    f.param = d;
    f.profile = profile;
    return MultiplierSymbol(g, {f});
}

MultiplierSymbol spatial_symbol(const GridSpec& g, double lambda, CutoffProfile profile) {
    SymbolFactor f;
    f.kind = SymbolFactor::Kind::Spatial;
    f.param = lambda;
    f.profile = profile;
    return MultiplierSymbol(g, {f});
}

MultiplierSymbol spatial_lowpass_symbol(const GridSpec& g, double lambda, CutoffProfile profile) {
    SymbolFactor f;
    f.kind = SymbolFactor::Kind::SpatialLe;
    f.param = lambda;
    f.profile = profile;
    return MultiplierSymbol(g, {f});
}

MultiplierSymbol sign_symbol(const GridSpec& g, int sign) {
    if (sign != 1 && sign != -1) throw config_error("sign_symbol: sign must be +1 or -1");
    SymbolFactor f;
    f.kind = SymbolFactor::Kind::Sign;
    f.sign = sign;
    return MultiplierSymbol(g, {f});
}

MultiplierSymbol cone_residue_symbol(const GridSpec& g) {
    SymbolFactor f;
    f.kind = SymbolFactor::Kind::ResidueOnly;
    return MultiplierSymbol(g, {f});
}

MultiplierSymbol block_symbol(const GridSpec& g, std::shared_ptr<const AngularSectorSet> sectors,
                              int omega, CutoffProfile profile) {
    if (!sectors) throw config_error("block_symbol: sector set required");
    if (omega < 0 || omega >= sectors->count())
        throw std::domain_error("block_symbol: sector id out of range");
    SymbolFactor f;
    f.kind = SymbolFactor::Kind::Block;
    f.sector = omega;
    f.sectors = std::move(sectors);
    f.profile = profile;
    return MultiplierSymbol(g, {f});
}

std::shared_ptr<const AngularSectorSet> s_omega_sectors(int n, double lambda, double d) {
    const double delta = std::sqrt(lambda * d);
    if (delta > lambda)
        throw std::domain_error("s_omega_sectors: (lambda d)^(1/2) exceeds lambda");
    return std::make_shared<AngularSectorSet>(n, lambda, delta);
}

MultiplierSymbol composite_symbol(const GridSpec& g, const CompositeSpec& spec) {
    std::vector<SymbolFactor> fs;
    if (spec.cone != ConeMode::None && spec.lambda > 0.0 && spec.d > 4.0 * spec.lambda)
        throw config_error("composite_symbol: d-range exceeds the lambda-range guard (d <= 4 lambda)");
    if (spec.lambda > 0.0) {
        SymbolFactor f;
        f.kind = SymbolFactor::Kind::STShell;
        f.param = spec.lambda;
        f.profile = spec.profile;
        fs.push_back(f);
    }
    if (spec.cone != ConeMode::None) {
        SymbolFactor f;
        f.kind = SymbolFactor::Kind::Cone;
        f.cone_mode = spec.cone;
        f.param = spec.d;
        f.profile = spec.profile;
        fs.push_back(f);
    }
    if (spec.sign != 0) {
        SymbolFactor f;
        f.kind = SymbolFactor::Kind::Sign;
        f.sign = spec.sign;
        fs.push_back(f);
    }
    if (spec.omega >= 0) {
        if (!spec.sectors) throw config_error("composite_symbol: omega set without sector set");
        SymbolFactor f;
        f.kind = SymbolFactor::Kind::Block;
        f.sector = spec.omega;
        f.sectors = spec.sectors;
        f.profile = spec.profile;
        fs.push_back(f);
    }
    if (fs.empty()) throw config_error("composite_symbol: empty spec");
    return MultiplierSymbol(g, std::move(fs));
}

namespace {

SpaceTimeField apply_impl(const MultiplierSymbol& s, const SpaceTimeField& u, bool parallel) {
    const GridSpec& g = u.grid();
    if (!(g == s.grid())) throw contract_error("apply: symbol was built for a different grid");
    const Rep caller_rep = u.rep();
    SpaceTimeField work = convert(u, Rep::SpaceTimeFourier);

    const DyadicLadder st = frequency_shells(g);
    const DyadicLadder cl = cone_shells(g);
    const DyadicLadder sp = spatial_shells(g);

    // Per-spatial-point tables: |xi|^2 always; sector ids when a block factor
    // is present (sharp blocks only; smooth blocks evaluate the angle).
    const std::int64_t spn = g.spatial_points();
    std::vector<double> xi2(spn);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < spn; ++i) xi2[i] = g.xi_norm_sq(i);

    std::shared_ptr<const std::vector<std::int32_t>> sector_table;
    bool need_xi_vec = false;
    for (const SymbolFactor& f : s.factors()) {
        if (f.kind == SymbolFactor::Kind::Block) {
            if (f.profile.is_sharp() && !sector_table) {
                const double lam = f.sectors->lambda();
                sector_table = f.sectors->assign_table(g, lam * lam / 4.0, 16.0 * lam * lam);
            } else if (!f.profile.is_sharp()) {
                need_xi_vec = true;
            }
        }
    }

    const int nt = g.nt();
#pragma omp parallel if (parallel)
    {
        std::vector<int> k(g.n());
        std::vector<double> xi(g.n());
#pragma omp for schedule(static) collapse(1)
        for (int m = 0; m < nt; ++m) {
            const double tau = g.tau_of(m);
            for (std::int64_t i = 0; i < spn; ++i) {
                const double* xiv = nullptr;
                if (need_xi_vec) {
                    g.spatial_signed(i, k.data());
                    for (int a = 0; a < g.n(); ++a) xi[a] = k[a] / g.L();
                    xiv = xi.data();
                }
                const int hint = sector_table ? (*sector_table)[i] : -2;
                const double v =
                    eval_factors(g, s.factors(), tau, xi2[i], xiv, hint, st, cl, sp);
                work.data()[std::int64_t(m) * spn + i] *= v;
            }
        }
    }
    return convert(work, caller_rep);
}

}  // namespace

SpaceTimeField apply(const MultiplierSymbol& s, const SpaceTimeField& u) {
    return apply_impl(s, u, true);
}

SpatialField apply_spatial(const MultiplierSymbol& s, const SpatialField& f) {
    for (const SymbolFactor& fac : s.factors())
        if (fac.kind != SymbolFactor::Kind::Spatial && fac.kind != SymbolFactor::Kind::SpatialLe &&
            fac.kind != SymbolFactor::Kind::Block)
            throw contract_error("apply_spatial: symbol has space-time factors");
    const GridSpec& g = f.grid();
    SpatialField work = convert(f, SpatialField::SRep::Fourier);
    const DyadicLadder st = frequency_shells(g);
    const DyadicLadder cl = cone_shells(g);
    const DyadicLadder sp = spatial_shells(g);
    const std::int64_t spn = g.spatial_points();
    std::vector<int> k(g.n());
    std::vector<double> xi(g.n());
    for (std::int64_t i = 0; i < spn; ++i) {
        g.spatial_signed(i, k.data());
        double ksq = 0.0;
        for (int a = 0; a < g.n(); ++a) {
            xi[a] = k[a] / g.L();
            ksq += xi[a] * xi[a];
        }
        work.data()[i] *= eval_factors(g, s.factors(), 0.0, ksq, xi.data(), -2, st, cl, sp);
    }
    return convert(work, f.rep());
}

namespace ref {
SpaceTimeField apply(const MultiplierSymbol& s, const SpaceTimeField& u) {
    return apply_impl(s, u, false);
}
}  // namespace ref

}  // namespace lpwave
