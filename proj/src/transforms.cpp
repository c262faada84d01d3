#include "lpwave/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace lpwave {

namespace {

// FFTW plans are not thread-safe to create; execution via fftw_execute_dft on
// distinct arrays is. Plans are cached per shape and created FFTW_UNALIGNED so
// they run on any buffer.
class PlanCache {
public:
    using Key = std::tuple<std::vector<int>, int>;  // dims, sign

    fftw_plan get(const std::vector<int>& dims, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find({dims, sign});
        if (it != plans_.end()) return it->second;
        std::int64_t total = 1;
        for (int d : dims) total *= d;
        std::vector<fftw_complex> in(total), out(total);
        fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), in.data(),
                                    out.data(), sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(Key{dims, sign}, p);
        return p;
    }

    // Strided 1d transform along the time axis: howmany columns at dist 1,
    // stride = spatial_points.
    fftw_plan get_time(int nt, std::int64_t stride, std::int64_t howmany, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(std::vector<int>{nt, int(stride), int(howmany)}, sign + 7);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<fftw_complex> in(std::size_t(nt) * stride), out(std::size_t(nt) * stride);
        int n[1] = {nt};
        fftw_plan p = fftw_plan_many_dft(1, n, static_cast<int>(howmany), in.data(), nullptr,
                                         static_cast<int>(stride), 1, out.data(), nullptr,
                                         static_cast<int>(stride), 1, sign,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

fftw_complex* fc(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
const fftw_complex* fc(const cplx* p) { return reinterpret_cast<const fftw_complex*>(p); }

void scale_all(std::vector<cplx>& v, double s) {
    const std::int64_t count = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) v[i] *= s;
}

std::vector<int> spatial_dims(const GridSpec& g) {
    return std::vector<int>(static_cast<std::size_t>(g.n()), g.nx());
}

void spatial_pass(const SpaceTimeField& in, SpaceTimeField& out, int sign, bool parallel) {
    const GridSpec& g = in.grid();
    fftw_plan plan = cache().get(spatial_dims(g), sign);
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int m = 0; m < nt; ++m)
            fftw_execute_dft(plan, const_cast<fftw_complex*>(fc(in.data().data() + m * sp)),
                             fc(out.data().data() + m * sp));
    } else {
        for (int m = 0; m < nt; ++m)
            fftw_execute_dft(plan, const_cast<fftw_complex*>(fc(in.data().data() + m * sp)),
                             fc(out.data().data() + m * sp));
    }
    scale_all(out.data(), 1.0 / std::sqrt(double(sp)));
}

void time_pass(const SpaceTimeField& in, SpaceTimeField& out, int sign) {
    const GridSpec& g = in.grid();
    const std::int64_t sp = g.spatial_points();
    // Chunk the spatial columns; chunk count fixed for determinism.
    const int chunks = static_cast<int>(std::min<std::int64_t>(64, sp));
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges(chunks);
    for (int c = 0; c < chunks; ++c) ranges[c] = {sp * c / chunks, sp * (c + 1) / chunks};
    // One plan per distinct chunk width.
    for (int c = 0; c < chunks; ++c) {
        auto [lo, hi] = ranges[c];
        if (hi > lo) cache().get_time(g.nt(), sp, hi - lo, sign);
    }
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) {
        auto [lo, hi] = ranges[c];
        if (hi <= lo) continue;
        fftw_plan plan = cache().get_time(g.nt(), sp, hi - lo, sign);
        fftw_execute_dft(plan, const_cast<fftw_complex*>(fc(in.data().data() + lo)),
                         fc(out.data().data() + lo));
    }
    scale_all(out.data(), 1.0 / std::sqrt(double(g.nt())));
}

void require_rep(const SpaceTimeField& u, Rep r, const char* op) {
    if (u.rep() != r)
        throw contract_error(std::string(op) + ": field is in representation '" +
                             rep_name(u.rep()) + "', expected '" + rep_name(r) + "'");
}

}  // namespace

SpaceTimeField to_spatial_fourier(const SpaceTimeField& u) {
    require_rep(u, Rep::Physical, "to_spatial_fourier");
    SpaceTimeField out(u.grid(), Rep::SpatialFourier);
    spatial_pass(u, out, FFTW_FORWARD, true);
    return out;
}

SpaceTimeField from_spatial_fourier(const SpaceTimeField& u) {
    require_rep(u, Rep::SpatialFourier, "from_spatial_fourier");
    SpaceTimeField out(u.grid(), Rep::Physical);
    spatial_pass(u, out, FFTW_BACKWARD, true);
    return out;
}

SpaceTimeField to_spacetime_fourier(const SpaceTimeField& u) {
    require_rep(u, Rep::Physical, "to_spacetime_fourier");
    SpaceTimeField mid(u.grid(), Rep::SpatialFourier);
    spatial_pass(u, mid, FFTW_FORWARD, true);
    SpaceTimeField out(u.grid(), Rep::SpaceTimeFourier);
    time_pass(mid, out, FFTW_FORWARD);
    return out;
}

SpaceTimeField from_spacetime_fourier(const SpaceTimeField& u) {
    require_rep(u, Rep::SpaceTimeFourier, "from_spacetime_fourier");
    SpaceTimeField mid(u.grid(), Rep::SpatialFourier);
    time_pass(u, mid, FFTW_BACKWARD);
    SpaceTimeField out(u.grid(), Rep::Physical);
    spatial_pass(mid, out, FFTW_BACKWARD, true);
    return out;
}

SpaceTimeField convert(const SpaceTimeField& u, Rep target) {
    if (u.rep() == target) return u;
    switch (u.rep()) {
        case Rep::Physical:
            return target == Rep::SpatialFourier ? to_spatial_fourier(u) : to_spacetime_fourier(u);
        case Rep::SpatialFourier: {
            if (target == Rep::Physical) return from_spatial_fourier(u);
            SpaceTimeField out(u.grid(), Rep::SpaceTimeFourier);
            time_pass(u, out, FFTW_FORWARD);
            return out;
        }
        case Rep::SpaceTimeFourier: {
            if (target == Rep::Physical) return from_spacetime_fourier(u);
            SpaceTimeField out(u.grid(), Rep::SpatialFourier);
            time_pass(u, out, FFTW_BACKWARD);
            return out;
        }
    }
    throw contract_error("convert: unknown representation");
}

SpatialField to_fourier(const SpatialField& f) {
    if (f.rep() != SpatialField::SRep::Physical)
        throw contract_error("to_fourier: spatial field already in Fourier representation");
    SpatialField out(f.grid(), SpatialField::SRep::Fourier);
    fftw_plan plan = cache().get(spatial_dims(f.grid()), FFTW_FORWARD);
    fftw_execute_dft(plan, const_cast<fftw_complex*>(fc(f.data().data())), fc(out.data().data()));
    scale_all(out.data(), 1.0 / std::sqrt(double(f.grid().spatial_points())));
    return out;
}

SpatialField to_physical(const SpatialField& f) {
    if (f.rep() != SpatialField::SRep::Fourier)
        throw contract_error("to_physical: spatial field already physical");
    SpatialField out(f.grid(), SpatialField::SRep::Physical);
    fftw_plan plan = cache().get(spatial_dims(f.grid()), FFTW_BACKWARD);
    fftw_execute_dft(plan, const_cast<fftw_complex*>(fc(f.data().data())), fc(out.data().data()));
    scale_all(out.data(), 1.0 / std::sqrt(double(f.grid().spatial_points())));
    return out;
}

SpatialField convert(const SpatialField& f, SpatialField::SRep target) {
    if (f.rep() == target) return f;
    return target == SpatialField::SRep::Fourier ? to_fourier(f) : to_physical(f);
}

std::vector<cplx> time_inverse_on_columns(const SpaceTimeField& u_st,
                                          const std::vector<std::int64_t>& columns,
                                          const std::function<cplx(int, std::int64_t)>& weight) {
    if (u_st.rep() != Rep::SpaceTimeFourier)
        throw contract_error("time_inverse_on_columns: expected SpaceTimeFourier representation");
    const GridSpec& g = u_st.grid();
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    fftw_plan plan = cache().get(std::vector<int>{nt}, FFTW_BACKWARD);
    const double scale = 1.0 / std::sqrt(double(nt));
    const std::int64_t count = static_cast<std::int64_t>(columns.size());
    std::vector<cplx> out(static_cast<std::size_t>(count) * nt);
#pragma omp parallel
    {
        std::vector<cplx> buf(nt);
#pragma omp for schedule(static)
        for (std::int64_t c = 0; c < count; ++c) {
            const std::int64_t col = columns[c];
            for (int j = 0; j < nt; ++j) {
                cplx v = u_st.data()[std::int64_t(j) * sp + col];
                if (weight) v *= weight(j, col);
                buf[j] = v;
            }
            fftw_execute_dft(plan, fc(buf.data()), fc(out.data() + c * nt));
            for (int j = 0; j < nt; ++j) out[c * nt + j] *= scale;
        }
    }
    return out;
}

namespace ref {

SpaceTimeField to_spatial_fourier(const SpaceTimeField& u) {
    require_rep(u, Rep::Physical, "ref::to_spatial_fourier");
    SpaceTimeField out(u.grid(), Rep::SpatialFourier);
    spatial_pass(u, out, FFTW_FORWARD, false);
    return out;
}

SpaceTimeField from_spatial_fourier(const SpaceTimeField& u) {
    require_rep(u, Rep::SpatialFourier, "ref::from_spatial_fourier");
    SpaceTimeField out(u.grid(), Rep::Physical);
    spatial_pass(u, out, FFTW_BACKWARD, false);
    return out;
}

}  // namespace ref

namespace detail {
std::mutex& fftw_planner_mutex() {
    static std::mutex mu;
    return mu;
}
}  // namespace detail

}  // namespace lpwave
