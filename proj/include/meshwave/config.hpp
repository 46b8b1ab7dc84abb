#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "meshwave/geometry.hpp"
#include "meshwave/rbf.hpp"
#include "meshwave/source.hpp"

namespace meshwave {

enum class Backend { RbfFd, Fdm };

struct VelocitySpec {
    enum class Kind { Uniform, TwoLayer, Gridded };
    Kind kind = Kind::Uniform;
    double v = 0.0;
    double v_top = 0.0;
    double v_bottom = 0.0;
    double interface_depth = 0.0;
    std::string grid_file;

    bool operator==(const VelocitySpec&) const = default;
};

struct SpacingSpec {
    enum class Mode { Constant, TwoLayer, FromVelocity };
    Mode mode = Mode::Constant;
    double a = 0.0;
    double a_shallow = 0.0;
    double a_deep = 0.0;
    double jump_depth = 0.0;
    double smoothing_window = 40.0;
    double nodes_per_wavelength = 12.0;

    bool operator==(const SpacingSpec&) const = default;
};

struct RecorderSpec {
    std::vector<double> snapshot_times;
    std::vector<double> receivers;       // x positions along the surface
    double receiver_depth = 0.0;         // m below the top; 0 = 2x average spacing
    int seismogram_interval = 1;         // steps between seismogram rows
    std::vector<Vec2> probes;

    bool operator==(const RecorderSpec&) const = default;
};

/// Everything a run needs; validated up front, immutable afterwards.
struct ScenarioConfig {
    std::string name = "scenario";
    Rect domain{0, 1, 0, 1};
    Backend backend = Backend::RbfFd;
    VelocitySpec velocity;
    SpacingSpec spacing;
    double fdm_h = 0.0;                  // 0 = use average target spacing
    RickerSource source;
    double dt = 0.0;
    int n_steps = 0;
    int support = 7;
    ShapeParameter shape{70.0, false};
    int abc_i_max = 30;
    double cfl_constant = 0.70710678118654752;
    RecorderSpec recorders;
    std::uint64_t seed = 0;

    bool operator==(const ScenarioConfig&) const = default;
};

struct ConfigError {
    int line;  // 0 when not tied to a line
    std::string message;
};

/// Parses the flat `key = value` scenario format. Throws ValidationError with
/// every problem found (unknown keys, missing keys, out-of-domain source...)
/// joined into the message; `errors`, when given, receives them structured.
ScenarioConfig parse_config(const std::string& text, std::vector<ConfigError>* errors = nullptr);
ScenarioConfig load_config(const std::string& path);

std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace meshwave
