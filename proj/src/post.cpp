#include "meshwave/post.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

#include "meshwave/errors.hpp"
#include "meshwave/media.hpp"
#include "meshwave/parallel.hpp"

namespace meshwave {

SeismogramRecorder::SeismogramRecorder(const NodeSet& nodes, const std::vector<double>& receiver_x,
                                       double receiver_depth, std::size_t k, double power)
    : depth_(receiver_depth) {
    for (double x : receiver_x)
        if (x < nodes.domain.x_min || x > nodes.domain.x_max)
            throw ValidationError("receiver x outside domain width");

    // Top strip: nodes within a few spacings of the recording depth.
    const double z_rec = nodes.domain.z_min + receiver_depth;
    std::vector<std::uint32_t> strip;
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
        const double margin = 3.0 * nodes.spacing[i];
        if (nodes.positions[i].z <= z_rec + margin) strip.push_back(i);
    }
    if (strip.size() < k) {
        strip.resize(nodes.size());
        for (std::uint32_t i = 0; i < nodes.size(); ++i) strip[i] = i;
    }

    std::vector<Vec2> strip_pos(strip.size());
    for (std::size_t i = 0; i < strip.size(); ++i) strip_pos[i] = nodes.positions[strip[i]];
    const NeighborQuery q(std::move(strip_pos));

    for (double x : receiver_x) {
        const Vec2 r{x, z_rec};
        const auto nn = q.knn(r, std::min(k, strip.size()));
        std::vector<std::uint32_t> idx;
        std::vector<double> w;
        double wsum = 0.0;
        int exact = -1;
        for (std::size_t j = 0; j < nn.size(); ++j) {
            const double d = dist(q.point(nn[j]), r);
            idx.push_back(strip[nn[j]]);
            if (d < 1e-12) { exact = static_cast<int>(j); break; }
            w.push_back(1.0 / std::pow(d, power));
            wsum += w.back();
        }
        if (exact >= 0) {
            idx = {idx[static_cast<std::size_t>(exact)]};
            w = {1.0};
        } else {
            for (auto& v : w) v /= wsum;
        }
        idx_.push_back(std::move(idx));
        w_.push_back(std::move(w));
    }
}

std::vector<double> SeismogramRecorder::record(const std::vector<double>& field) const {
    std::vector<double> row(idx_.size(), 0.0);
    for (std::size_t r = 0; r < idx_.size(); ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < idx_[r].size(); ++j) acc += w_[r][j] * field[idx_[r][j]];
        row[r] = acc;
    }
    return row;
}

double sample_snapshot(const SnapshotField& snapshot, const NeighborQuery& index, const Vec2& p,
                       std::size_t k, double power) {
    return shepard_interpolate(index, snapshot.values, p, k, power);
}

GridField to_grid(const SnapshotField& snapshot, const UniformGrid& grid) {
    if (snapshot.positions.size() != snapshot.values.size())
        throw ValidationError("to_grid: snapshot value count mismatch");
    const NeighborQuery q(snapshot.positions);

    GridField out;
    out.grid = grid;
    out.values.assign(grid.size(), 0.0);
    out.hole.assign(grid.size(), 0);

    parallel_for_each(static_cast<std::size_t>(grid.nz), [&](std::size_t j) {
        for (int i = 0; i < grid.nx; ++i) {
            const Vec2 p = grid.point(i, static_cast<int>(j));
            const std::size_t c = grid.index(i, static_cast<int>(j));
            const auto nn = q.knn(p, std::min<std::size_t>(8, q.size()));
            const double d_near = dist(q.point(nn[0]), p);
            // local spacing proxy: nearest node's own nearest-neighbor distance
            double d_loc = std::numeric_limits<double>::infinity();
            for (std::size_t j = 1; j < nn.size(); ++j)
                d_loc = std::min(d_loc, dist(q.point(nn[0]), q.point(nn[j])));
            if (nn.size() > 1 && d_near > 3.0 * d_loc) {
                out.values[c] = std::numeric_limits<double>::quiet_NaN();
                out.hole[c] = 1;
                continue;
            }
            if (d_near < 1e-12) {
                out.values[c] = snapshot.values[nn[0]];
                continue;
            }
            double wsum = 0.0, acc = 0.0;
            for (std::uint32_t idx : nn) {
                const double d = dist(q.point(idx), p);
                const double w = 1.0 / (d * d);
                wsum += w;
                acc += w * snapshot.values[idx];
            }
            out.values[c] = acc / wsum;
        }
    });
    return out;
}

std::vector<double> difference_field(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ValidationError("difference_field: dimension mismatch");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b[i]);
    return d;
}

CircleProbeResult circle_probe(const SnapshotField& snapshot, const Vec2& center, double radius,
                               int samples) {
    if (samples < 1) throw ValidationError("circle_probe: need at least one sample");
    const NeighborQuery q(snapshot.positions);
    CircleProbeResult res;
    res.values.resize(samples);
    for (int s = 0; s < samples; ++s) {
        const double th = 2.0 * std::numbers::pi * s / samples;
        const Vec2 p{center.x + radius * std::cos(th), center.z + radius * std::sin(th)};
        res.values[s] = sample_snapshot(snapshot, q, p);
    }
    double sum = 0.0;
    for (double v : res.values) sum += v;
    res.mean = sum / samples;
    double var = 0.0;
    for (double v : res.values) var += (v - res.mean) * (v - res.mean);
    res.stddev = std::sqrt(var / samples);
    return res;
}

// ---- artifact writers ------------------------------------------------------

void write_seismogram_csv(const Seismogram& s, std::ostream& out) {
    out << "t";
    char buf[64];
    for (double x : s.receiver_x) {
        std::snprintf(buf, sizeof(buf), ",%.17g", x);
        out << buf;
    }
    out << "\n";
    for (std::size_t r = 0; r < s.times.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "%.17g", s.times[r]);
        out << buf;
        for (double v : s.values[r]) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out << buf;
        }
        out << "\n";
    }
}

void write_seismogram_csv(const Seismogram& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_seismogram_csv(s, f);
    if (!f) throw IoError("write failed for '" + path + "'");
}

void write_snapshot_csv(const SnapshotField& s, std::ostream& out) {
    out << "x,z,u\n";
    char buf[128];
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s.positions[i].x, s.positions[i].z,
                      s.values[i]);
        out << buf;
    }
}

void write_snapshot_csv(const SnapshotField& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_snapshot_csv(s, f);
    if (!f) throw IoError("write failed for '" + path + "'");
}

void write_grid_binary(const GridField& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write("MWV1", 4);
    const std::uint32_t nx = static_cast<std::uint32_t>(g.grid.nx);
    const std::uint32_t nz = static_cast<std::uint32_t>(g.grid.nz);
    f.write(reinterpret_cast<const char*>(&nx), 4);
    f.write(reinterpret_cast<const char*>(&nz), 4);
    const double hdr[3] = {g.grid.origin.x, g.grid.origin.z, g.grid.h};
    f.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
    f.write(reinterpret_cast<const char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!f) throw IoError("write failed for '" + path + "'");
}

GridField read_grid_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "MWV1", 4) != 0) throw IoError("bad snapshot magic");
    std::uint32_t nx = 0, nz = 0;
    f.read(reinterpret_cast<char*>(&nx), 4);
    f.read(reinterpret_cast<char*>(&nz), 4);
    double hdr[3];
    f.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
    GridField g;
    g.grid.nx = static_cast<int>(nx);
    g.grid.nz = static_cast<int>(nz);
    g.grid.origin = {hdr[0], hdr[1]};
    g.grid.h = hdr[2];
    g.values.resize(static_cast<std::size_t>(nx) * nz);
    g.hole.assign(g.values.size(), 0);
    f.read(reinterpret_cast<char*>(g.values.data()),
           static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!f) throw IoError("truncated snapshot '" + path + "'");
    return g;
}

}  // namespace meshwave
