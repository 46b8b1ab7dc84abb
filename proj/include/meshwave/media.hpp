#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "meshwave/geometry.hpp"
#include "meshwave/nodes.hpp"

namespace meshwave {

struct UniformVelocity {
    double v;  // m/s
};

/// Half-open convention: z >= interface_depth takes the bottom velocity.
struct TwoLayerVelocity {
    double v_top;
    double v_bottom;
    double interface_depth;
};

/// Regular grid of samples, row-major with z-major rows from the surface
/// downward; queries outside the footprint clamp to the nearest sample.
struct GriddedVelocity {
    int nx = 0, nz = 0;
    double dx = 0.0, dz = 0.0;
    Vec2 origin{0.0, 0.0};
    std::vector<double> values;  // values[iz*nx + ix]
};

/// Scattered (x,z,v) samples; Shepard interpolation applies directly.
struct ScatteredVelocity {
    std::vector<Vec2> positions;
    std::vector<double> values;
};

class VelocityModel {
  public:
    using Variant =
        std::variant<UniformVelocity, TwoLayerVelocity, GriddedVelocity, ScatteredVelocity>;

    VelocityModel(Variant v);  // validates

    double at(const Vec2& p) const;
    double max_velocity() const;
    const Variant& variant() const { return variant_; }

  private:
    Variant variant_;
    // lazily built for the scattered case
    std::shared_ptr<const NeighborQuery> scattered_index_;
};

struct SampleRef {
    Vec2 position;
    double value;
};

/// Inverse-distance-weighted mean over the k nearest samples; exact at
/// sample points.
double shepard_interpolate(std::span<const SampleRef> samples, const Vec2& p, std::size_t k,
                           double power);

/// Shepard over a pre-indexed point set (large sample counts).
double shepard_interpolate(const NeighborQuery& index, std::span<const double> values,
                           const Vec2& p, std::size_t k, double power);

/// Target spacing from the nodes-per-wavelength rule:
///   a_raw(p) = v(p) * T_char / nodes_per_wavelength,  T_char = 2*pi*sigma_R,
/// then a depth moving average of the given window width.
SpacingField spacing_from_velocity(const VelocityModel& model, const Rect& domain, double sigma_R,
                                   double nodes_per_wavelength, double smoothing_window);

/// Step spacing profile a_shallow -> a_deep at jump_depth, moving-averaged
/// (closed form: linear ramp of the window width centered on the jump).
SpacingField delayed_jump_spacing(const Rect& domain, double a_shallow, double a_deep,
                                  double jump_depth, double smoothing_window);

/// Gridded model file: header `nx nz dx dz`, then nx*nz velocities; or CSV
/// `x,z,v` scattered samples.
VelocityModel read_velocity_model(const std::string& path);
VelocityModel read_velocity_model(std::istream& in);

}  // namespace meshwave
