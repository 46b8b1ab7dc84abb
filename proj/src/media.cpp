#include "meshwave/media.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "meshwave/errors.hpp"

namespace meshwave {

namespace {

void validate(const VelocityModel::Variant& v) {
    if (const auto* u = std::get_if<UniformVelocity>(&v)) {
        if (!(u->v > 0)) throw ValidationError("uniform velocity must be positive");
    } else if (const auto* t = std::get_if<TwoLayerVelocity>(&v)) {
        if (!(t->v_top > 0) || !(t->v_bottom > 0))
            throw ValidationError("layer velocities must be positive");
    } else if (const auto* g = std::get_if<GriddedVelocity>(&v)) {
        if (g->nx < 1 || g->nz < 1 || !(g->dx > 0) || !(g->dz > 0))
            throw ValidationError("gridded model: bad dimensions");
        if (g->values.size() != static_cast<std::size_t>(g->nx) * g->nz)
            throw ValidationError("gridded model: value count does not match nx*nz");
        for (double x : g->values)
            if (!(x > 0)) throw ValidationError("gridded model: non-positive velocity sample");
    } else if (const auto* s = std::get_if<ScatteredVelocity>(&v)) {
        if (s->positions.empty() || s->positions.size() != s->values.size())
            throw ValidationError("scattered model: bad sample lists");
        for (double x : s->values)
            if (!(x > 0)) throw ValidationError("scattered model: non-positive velocity sample");
    }
}

// Shepard over the regular grid: candidates from the 5x5 sample window around
// the clamped query point, k nearest by (distance, index).
double gridded_at(const GriddedVelocity& g, Vec2 p, std::size_t k, double power) {
    const double x_max = g.origin.x + (g.nx - 1) * g.dx;
    const double z_max = g.origin.z + (g.nz - 1) * g.dz;
    p.x = std::clamp(p.x, g.origin.x, x_max);
    p.z = std::clamp(p.z, g.origin.z, z_max);
    const int ci = static_cast<int>((p.x - g.origin.x) / g.dx);
    const int cj = static_cast<int>((p.z - g.origin.z) / g.dz);

    std::vector<std::pair<double, int>> cand;  // (dist2, linear index)
    for (int j = std::max(0, cj - 2); j <= std::min(g.nz - 1, cj + 2); ++j)
        for (int i = std::max(0, ci - 2); i <= std::min(g.nx - 1, ci + 2); ++i) {
            const Vec2 s{g.origin.x + i * g.dx, g.origin.z + j * g.dz};
            cand.emplace_back(dist2(s, p), j * g.nx + i);
        }
    std::sort(cand.begin(), cand.end());
    if (cand.size() > k) cand.resize(k);

    double wsum = 0.0, acc = 0.0;
    for (const auto& [d2, idx] : cand) {
        const double d = std::sqrt(d2);
        if (d < 1e-12) return g.values[idx];
        const double w = 1.0 / std::pow(d, power);
        wsum += w;
        acc += w * g.values[idx];
    }
    return acc / wsum;
}

}  // namespace

VelocityModel::VelocityModel(Variant v) : variant_(std::move(v)) {
    validate(variant_);
    if (const auto* s = std::get_if<ScatteredVelocity>(&variant_))
        scattered_index_ = std::make_shared<NeighborQuery>(s->positions);
}

double VelocityModel::at(const Vec2& p) const {
    if (const auto* u = std::get_if<UniformVelocity>(&variant_)) return u->v;
    if (const auto* t = std::get_if<TwoLayerVelocity>(&variant_))
        return p.z >= t->interface_depth ? t->v_bottom : t->v_top;
    if (const auto* g = std::get_if<GriddedVelocity>(&variant_)) return gridded_at(*g, p, 8, 2.0);
    const auto& s = std::get<ScatteredVelocity>(variant_);
    return shepard_interpolate(*scattered_index_, s.values, p,
                               std::min<std::size_t>(8, s.values.size()), 2.0);
}

double VelocityModel::max_velocity() const {
    if (const auto* u = std::get_if<UniformVelocity>(&variant_)) return u->v;
    if (const auto* t = std::get_if<TwoLayerVelocity>(&variant_))
        return std::max(t->v_top, t->v_bottom);
    if (const auto* g = std::get_if<GriddedVelocity>(&variant_))
        return *std::max_element(g->values.begin(), g->values.end());
    const auto& s = std::get<ScatteredVelocity>(variant_);
    return *std::max_element(s.values.begin(), s.values.end());
}

double shepard_interpolate(std::span<const SampleRef> samples, const Vec2& p, std::size_t k,
                           double power) {
    if (samples.empty() || k < 1) throw ValidationError("shepard: need at least one sample");
    k = std::min(k, samples.size());

    std::vector<std::pair<double, std::size_t>> d(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) d[i] = {dist2(samples[i].position, p), i};
    std::partial_sort(d.begin(), d.begin() + k, d.end());

    double wsum = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = std::sqrt(d[i].first);
        if (r < 1e-12) return samples[d[i].second].value;
        const double w = 1.0 / std::pow(r, power);
        wsum += w;
        acc += w * samples[d[i].second].value;
    }
    return acc / wsum;
}

double shepard_interpolate(const NeighborQuery& index, std::span<const double> values,
                           const Vec2& p, std::size_t k, double power) {
    if (index.size() == 0 || k < 1) throw ValidationError("shepard: need at least one sample");
    const auto nn = index.knn(p, std::min(k, index.size()));
    double wsum = 0.0, acc = 0.0;
    for (std::uint32_t idx : nn) {
        const double r = dist(index.point(idx), p);
        if (r < 1e-12) return values[idx];
        const double w = 1.0 / std::pow(r, power);
        wsum += w;
        acc += w * values[idx];
    }
    return acc / wsum;
}

SpacingField spacing_from_velocity(const VelocityModel& model, const Rect& domain, double sigma_R,
                                   double nodes_per_wavelength, double smoothing_window) {
    if (!(sigma_R > 0) || !(nodes_per_wavelength > 0) || !(smoothing_window >= 0))
        throw ValidationError("spacing_from_velocity: non-positive input");

    const double t_char = 2.0 * std::numbers::pi * sigma_R;
    const double scale = t_char / nodes_per_wavelength;
    auto raw = [model, scale](Vec2 p) { return model.at(p) * scale; };

    std::function<double(Vec2)> eval;
    if (smoothing_window <= 0) {
        eval = raw;
    } else {
        const double w = smoothing_window;
        const double z_lo = domain.z_min, z_hi = domain.z_max;
        eval = [raw, w, z_lo, z_hi](Vec2 p) {
            constexpr int m = 33;  // midpoint rule along depth
            double acc = 0.0;
            for (int i = 0; i < m; ++i) {
                double z = p.z - 0.5 * w + (i + 0.5) * w / m;
                z = std::clamp(z, z_lo, z_hi);
                acc += raw({p.x, z});
            }
            return acc / m;
        };
    }
    SpacingField f;
    f.eval = std::move(eval);
    f.average_spacing = estimate_average_spacing(f.eval, domain);
    return f;
}

SpacingField delayed_jump_spacing(const Rect& domain, double a_shallow, double a_deep,
                                  double jump_depth, double smoothing_window) {
    if (!(a_shallow > 0) || !(a_deep > 0) || a_shallow > a_deep)
        throw ValidationError("delayed_jump_spacing: need 0 < a_shallow <= a_deep");
    const double w = smoothing_window;
    SpacingField f;
    f.eval = [=](Vec2 p) {
        if (w <= 0) return p.z >= jump_depth ? a_deep : a_shallow;
        const double t = std::clamp((p.z - jump_depth + 0.5 * w) / w, 0.0, 1.0);
        return a_shallow + t * (a_deep - a_shallow);
    };
    f.average_spacing = estimate_average_spacing(f.eval, domain);
    return f;
}

VelocityModel read_velocity_model(std::istream& in) {
    std::string first;
    if (!std::getline(in, first)) throw IoError("velocity model: empty file");

    if (first.find(',') != std::string::npos) {
        // CSV x,z,v scattered samples (optional header)
        ScatteredVelocity s;
        std::string line = first;
        do {
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::string fx, fz, fv;
            if (!std::getline(ss, fx, ',') || !std::getline(ss, fz, ',') || !std::getline(ss, fv))
                throw IoError("velocity CSV: malformed line '" + line + "'");
            try {
                const double x = std::stod(fx), z = std::stod(fz), v = std::stod(fv);
                s.positions.push_back({x, z});
                s.values.push_back(v);
            } catch (const std::invalid_argument&) {
                if (!s.positions.empty()) throw IoError("velocity CSV: malformed line '" + line + "'");
                // header row, skip
            }
        } while (std::getline(in, line));
        return VelocityModel(std::move(s));
    }

    GriddedVelocity g;
    {
        std::istringstream hs(first);
        if (!(hs >> g.nx >> g.nz >> g.dx >> g.dz))
            throw IoError("velocity grid: bad header, expected 'nx nz dx dz'");
    }
    g.values.reserve(static_cast<std::size_t>(g.nx) * g.nz);
    double v;
    while (in >> v) g.values.push_back(v);
    if (g.values.size() != static_cast<std::size_t>(g.nx) * g.nz)
        throw IoError("velocity grid: expected " + std::to_string(g.nx * g.nz) + " values, got " +
                      std::to_string(g.values.size()));
    return VelocityModel(std::move(g));
}

VelocityModel read_velocity_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open velocity model '" + path + "'");
    return read_velocity_model(f);
}

}  // namespace meshwave
