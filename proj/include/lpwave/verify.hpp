#pragma once

#include <functional>

#include "lpwave/solver.hpp"

namespace lpwave {

/// Reproducible random ensembles on frequency-localized cells.
struct EnsembleSpec {
    int count = 8;
    enum class Law { GaussianComplex, Unimodular };
    Law law = Law::GaussianComplex;
    std::uint64_t seed = 1;

    static EnsembleSpec parse_law(const std::string& name, int count, std::uint64_t seed);
};

/// Membership predicate on lattice points: signed tau, |xi|^2 and the signed
/// integer spatial indices.
using LatticePredicate = std::function<bool(double tau, double xi2, const int* k)>;

/// Random space-time field supported where the predicate holds; coefficients
/// drawn from a deterministic per-(seed, sample) stream.
SpaceTimeField random_field(const GridSpec& g, const EnsembleSpec& es, int sample,
                            const LatticePredicate& pred);
SpatialField random_spatial_field(const GridSpec& g, const EnsembleSpec& es, int sample,
                                  const LatticePredicate& pred);

/// Measured-constant report for one estimate over an ensemble.
struct EstimateReport {
    std::string id;
    std::vector<std::pair<std::string, double>> params;
    std::vector<double> ratios;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    double ceiling = std::numeric_limits<double>::quiet_NaN();
    bool pass = true;
    bool warned = false;
    std::string note;

    void finalize();  ///< fills max/median/pass from ratios + ceiling
};

/// Frequency-support geometry report for the bilinear decomposition lemmas.
struct SupportCheckReport {
    std::string lemma;  // wide | small | b-term
    std::vector<std::pair<std::string, double>> params;
    std::int64_t pairs_examined = 0;
    std::int64_t contributing = 0;
    std::int64_t violation_count = 0;
    struct Violation {
        std::string what;
        double taup, tau;
        std::vector<double> xip, xi;
    };
    std::vector<Violation> violations;  ///< capped sample of the violations
    double c_ang_measured = 0.0;
    int max_omega2_multiplicity = 0;
    int max_omega3_multiplicity = 0;
    double max_out_mod_over_mu = 0.0;
    int sign_violations = 0;
    std::string status;  // pass | fail | inconclusive
};

/// Homogeneous Strichartz ratio || e^{2 pi i t |D|} P_{<=lambda} u ||_{Lq Lr}
/// / (lambda^gamma || P u ||_{L2}); admissibility 1/q + s/r <= s/2 with
/// s = (n-1)/2 is enforced, gamma = n/2 - n/r - 1/q.
EstimateReport strichartz_ratio(const GridSpec& g, double q, double r, double lambda,
                                const EnsembleSpec& es);

double strichartz_gamma(int n, double q, double r);
bool strichartz_admissible(int n, double q, double r);

/// Local (angular-block) Strichartz ratio at sector width (lambda d)^{1/2}:
/// per-sector L2(Linf) of the evolution vs lambda^{(n+1)/4} d^{(n-3)/4} ||.||_{L2};
/// the square-summed variant is recorded in params as "square_sum_ratio".
/// Each sample populates `sectors_per_sample` randomly chosen sectors.
EstimateReport local_strichartz_ratio(const GridSpec& g, double lambda, double d,
                                      const EnsembleSpec& es, int sectors_per_sample = 4);

/// Y subset Z intermediate bound: (sum_w ||Xi^{-1} S^w_{l,d} u||^2_{L1 Linf})^{1/2}
/// <= C lambda^{(n-4)/2} (d/lambda)^{(n-5)/4} || S_lambda u ||_{L1 L2}
/// on ensembles localized in the (lambda, d) cell.
EstimateReport y_outer_block_ratio(const GridSpec& g, double lambda, double d,
                                   const EnsembleSpec& es);

/// d^{1/2} S_{lambda,d}(Y_lambda) subset L2(L2).
EstimateReport y_l2_ratio(const GridSpec& g, double lambda, double d, const EnsembleSpec& es);

/// Angular reconstruction: (sum_w ||B^w u||^2_N)^{1/2} <= ||u||_N for
/// N = X^{1/2}_{lambda,1} ("x1") or Y_lambda ("y"); sharp sectors give <= 1.
EstimateReport angular_reconstruction_ratio(const GridSpec& g, double lambda, double delta,
                                            const EnsembleSpec& es, const std::string& which);

/// Energy estimate: sup_t of the dyadic Sobolev norm (value at s, time
/// derivative at s-1) against the F^s norm.
EstimateReport energy_ratio(const GridSpec& g, double s, const EnsembleSpec& es);

/// Support-geometry verification of the bilinear decomposition lemmas.
struct SupportCheckConfig {
    std::string lemma = "wide";  // wide | small | b-term
    double lambda = 64.0;
    double mu = 8.0;
    double d = 1.0;
    double c = 0.125;
    bool exhaustive = true;
    std::int64_t sample_pairs = 100000;  ///< contributing-pair target in sampled mode
    std::uint64_t seed = 1;
    double c_ang_ceiling = 4.0;
    int c_diag_ceiling = 16;
    double c_bterm_ceiling = 4.0;  ///< out-modulation <= ceiling * mu
};
SupportCheckReport bilinear_support_check(const GridSpec& g, const SupportCheckConfig& cfg);

/// Localized product / division estimates of the iteration proof.
struct ProductCheckConfig {
    std::string kind = "HL-A";  // HH | HL-A | HL-B | C_I | C_II | C_III
    double lambda = 8.0;
    double mu = 1.0;
    double d = 1.0;   ///< cone parameter for the d-localized cases
    double c = 0.125;
    int kmax_factor_u = 0;  ///< per-axis |k| cap on u (0 = grid third)
    int kmax_factor_v = 0;  ///< per-axis |k| cap on v (0 = grid third)
};
EstimateReport product_estimate_check(const GridSpec& g, const ProductCheckConfig& cfg,
                                      const EnsembleSpec& es);

/// Report serialization (CSV rows + JSON with embedded config).
void write_estimate_report_csv(const std::string& path, const std::vector<EstimateReport>& reports);
void write_estimate_report_json(const std::string& path, const std::vector<EstimateReport>& reports,
                                const std::string& resolved_config);
void write_support_report_csv(const std::string& path, const std::vector<SupportCheckReport>& reports);
void write_support_report_json(const std::string& path, const std::vector<SupportCheckReport>& reports,
                               const std::string& resolved_config);

}  // namespace lpwave
