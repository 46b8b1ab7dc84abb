#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "meshwave/grid.hpp"
#include "meshwave/nodes.hpp"

namespace meshwave {

/// Receiver-line time history of the wavefield near the surface.
struct Seismogram {
    std::vector<double> receiver_x;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // one row per time, one column per receiver
};

/// Wavefield at one instant on the run's node set.
struct SnapshotField {
    double t = 0.0;
    std::string backend;  // "rbffd" or "fdm"
    std::vector<Vec2> positions;
    std::vector<double> values;
};

/// Fixed-geometry seismogram recorder: Shepard weights from each receiver to
/// its nearest top-strip nodes are computed once, rows are then dot products.
class SeismogramRecorder {
  public:
    SeismogramRecorder(const NodeSet& nodes, const std::vector<double>& receiver_x,
                       double receiver_depth, std::size_t k = 8, double power = 2.0);

    std::vector<double> record(const std::vector<double>& field) const;
    double receiver_depth() const { return depth_; }

  private:
    double depth_;
    std::vector<std::vector<std::uint32_t>> idx_;  // per receiver
    std::vector<std::vector<double>> w_;           // normalized weights
};

/// Scattered-to-grid resampling (Shepard, k=8, power 2). Grid points with no
/// node within 3x the local spacing are flagged as holes (NaN + hole mask).
struct GridField {
    UniformGrid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> hole;
};

GridField to_grid(const SnapshotField& snapshot, const UniformGrid& grid);

/// Entrywise |a - b|; dimension mismatch is an error.
std::vector<double> difference_field(const std::vector<double>& a, const std::vector<double>& b);

struct CircleProbeResult {
    std::vector<double> values;
    double mean = 0.0;
    double stddev = 0.0;
};

/// Interpolates the snapshot at equiangular points of the circle.
CircleProbeResult circle_probe(const SnapshotField& snapshot, const Vec2& center, double radius,
                               int samples);

/// Shepard evaluation of a snapshot at an arbitrary point.
double sample_snapshot(const SnapshotField& snapshot, const NeighborQuery& index, const Vec2& p,
                       std::size_t k = 8, double power = 2.0);

// CSV / binary artifact writers.
void write_seismogram_csv(const Seismogram& s, std::ostream& out);
void write_seismogram_csv(const Seismogram& s, const std::string& path);
void write_snapshot_csv(const SnapshotField& s, std::ostream& out);
void write_snapshot_csv(const SnapshotField& s, const std::string& path);

/// Binary grid snapshot: magic `MWV1`, u32 nx,nz, f64 origin x/z + spacing,
/// then f64 values row-major. Little-endian.
void write_grid_binary(const GridField& g, const std::string& path);
GridField read_grid_binary(const std::string& path);

}  // namespace meshwave
