#include "lpwave/cutoff.hpp"

#include <cmath>

#include "lpwave/grid.hpp"

namespace lpwave {

CutoffProfile CutoffProfile::smooth(double transition, int order) {
    if (!(transition > 0.0) || transition > 0.5)
        throw config_error("CutoffProfile: transition must lie in (0, 1/2]");
    if (order < 4) throw config_error("CutoffProfile: smoothness order must be >= 4");
    CutoffProfile p;
    p.kind = Kind::Smooth;
    p.transition = transition;
    p.order = order;
    return p;
}

double smoothstep(int order, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // S_m(x) = x^{m+1} * sum_{k=0..m} C(m+k,k) C(2m+1,m-k) (-x)^k
    double sum = 0.0;
    double xk = 1.0;
    for (int k = 0; k <= order; ++k) {
        double c1 = 1.0;  // C(m+k, k)
        for (int i = 1; i <= k; ++i) c1 *= double(order + i) / double(i);
        double c2 = 1.0;  // C(2m+1, m-k)
        for (int i = 1; i <= order - k; ++i) c2 *= double(order + 1 + k + i) / double(i);
        sum += c1 * c2 * xk;
        xk *= -x;
    }
    return std::pow(x, order + 1) * sum;
}

double CutoffProfile::bump(double s) const {
    const double a = std::fabs(s);
    if (kind == Kind::Sharp) return a < 1.0 ? 1.0 : 0.0;
    if (a <= 1.0) return 1.0;
    const double w = 2.0 * transition;
    if (a >= 1.0 + w) return 0.0;
    return 1.0 - smoothstep(order, (a - 1.0) / w);
}

}  // namespace lpwave
