#include "meshwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "meshwave/errors.hpp"

namespace meshwave {

namespace {

struct RawValue {
    std::string text;
    int line;
    bool used = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Parser {
  public:
    Parser(const std::string& text, std::vector<ConfigError>& errors) : errors_(errors) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                fail(lineno, "expected 'key = value', got '" + line + "'");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) {
                fail(lineno, "empty key");
                continue;
            }
            if (raw_.count(key)) {
                fail(lineno, "duplicate key '" + key + "'");
                continue;
            }
            raw_[key] = RawValue{value, lineno};
        }
    }

    void fail(int line, const std::string& msg) { errors_.push_back({line, msg}); }

    bool has(const std::string& key) const { return raw_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback,
                           bool required = false) {
        auto it = raw_.find(key);
        if (it == raw_.end()) {
            if (required) fail(0, "missing required key '" + key + "'");
            return fallback;
        }
        it->second.used = true;
        return it->second.text;
    }

    double get_double(const std::string& key, double fallback, bool required = false) {
        auto it = raw_.find(key);
        if (it == raw_.end()) {
            if (required) fail(0, "missing required key '" + key + "'");
            return fallback;
        }
        it->second.used = true;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.text, &pos);
            if (pos != it->second.text.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(it->second.line, "key '" + key + "': not a number: '" + it->second.text + "'");
            return fallback;
        }
    }

    long long get_int(const std::string& key, long long fallback, bool required = false) {
        auto it = raw_.find(key);
        if (it == raw_.end()) {
            if (required) fail(0, "missing required key '" + key + "'");
            return fallback;
        }
        it->second.used = true;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(it->second.text, &pos);
            if (pos != it->second.text.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(it->second.line, "key '" + key + "': not an integer: '" + it->second.text + "'");
            return fallback;
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        const std::string s = get_string(key, fallback ? "true" : "false");
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
        fail(line_of(key), "key '" + key + "': expected true/false");
        return fallback;
    }

    std::vector<double> get_list(const std::string& key) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return {};
        it->second.used = true;
        std::vector<double> out;
        std::istringstream ss(it->second.text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(it->second.line, "key '" + key + "': bad list entry '" + item + "'");
            }
        }
        return out;
    }

    int line_of(const std::string& key) const {
        auto it = raw_.find(key);
        return it == raw_.end() ? 0 : it->second.line;
    }

    void report_unknown() {
        for (const auto& [key, rv] : raw_)
            if (!rv.used) fail(rv.line, "unknown key '" + key + "'");
    }

  private:
    std::map<std::string, RawValue> raw_;
    std::vector<ConfigError>& errors_;
};

}  // namespace

ScenarioConfig parse_config(const std::string& text, std::vector<ConfigError>* errors_out) {
    std::vector<ConfigError> errors;
    Parser p(text, errors);
    ScenarioConfig cfg;

    cfg.name = p.get_string("name", "scenario");

    const double x0 = p.get_double("domain.x_min", 0, true);
    const double x1 = p.get_double("domain.x_max", 1, true);
    const double z0 = p.get_double("domain.z_min", 0, true);
    const double z1 = p.get_double("domain.z_max", 1, true);
    if (x0 < x1 && z0 < z1)
        cfg.domain = Rect(x0, x1, z0, z1);
    else if (errors.empty() || p.has("domain.x_min"))
        p.fail(p.line_of("domain.x_min"), "domain extents must satisfy x_min < x_max, z_min < z_max");

    const std::string backend = p.get_string("backend", "rbffd", true);
    if (backend == "rbffd")
        cfg.backend = Backend::RbfFd;
    else if (backend == "fdm")
        cfg.backend = Backend::Fdm;
    else
        p.fail(p.line_of("backend"), "backend must be 'rbffd' or 'fdm'");

    const std::string vel = p.get_string("velocity.model", "uniform", true);
    if (vel == "uniform") {
        cfg.velocity.kind = VelocitySpec::Kind::Uniform;
        cfg.velocity.v = p.get_double("velocity.v", 0, true);
        if (p.has("velocity.v") && !(cfg.velocity.v > 0))
            p.fail(p.line_of("velocity.v"), "velocity.v must be positive");
    } else if (vel == "two_layer") {
        cfg.velocity.kind = VelocitySpec::Kind::TwoLayer;
        cfg.velocity.v_top = p.get_double("velocity.v_top", 0, true);
        cfg.velocity.v_bottom = p.get_double("velocity.v_bottom", 0, true);
        cfg.velocity.interface_depth = p.get_double("velocity.interface_depth", 0, true);
        if (p.has("velocity.v_top") && !(cfg.velocity.v_top > 0))
            p.fail(p.line_of("velocity.v_top"), "velocity.v_top must be positive");
        if (p.has("velocity.v_bottom") && !(cfg.velocity.v_bottom > 0))
            p.fail(p.line_of("velocity.v_bottom"), "velocity.v_bottom must be positive");
    } else if (vel == "gridded") {
        cfg.velocity.kind = VelocitySpec::Kind::Gridded;
        cfg.velocity.grid_file = p.get_string("velocity.grid_file", "", true);
    } else {
        p.fail(p.line_of("velocity.model"),
               "velocity.model must be 'uniform', 'two_layer' or 'gridded'");
    }

    const std::string sp = p.get_string("spacing.mode", "constant", true);
    if (sp == "constant") {
        cfg.spacing.mode = SpacingSpec::Mode::Constant;
        cfg.spacing.a = p.get_double("spacing.a", 0, true);
        if (p.has("spacing.a") && !(cfg.spacing.a > 0))
            p.fail(p.line_of("spacing.a"), "spacing.a must be positive");
    } else if (sp == "two_layer") {
        cfg.spacing.mode = SpacingSpec::Mode::TwoLayer;
        cfg.spacing.a_shallow = p.get_double("spacing.a_shallow", 0, true);
        cfg.spacing.a_deep = p.get_double("spacing.a_deep", 0, true);
        cfg.spacing.jump_depth = p.get_double("spacing.jump_depth", 0, true);
        cfg.spacing.smoothing_window = p.get_double("spacing.smoothing_window", 40.0);
    } else if (sp == "from_velocity") {
        cfg.spacing.mode = SpacingSpec::Mode::FromVelocity;
        cfg.spacing.nodes_per_wavelength = p.get_double("spacing.nodes_per_wavelength", 12.0);
        cfg.spacing.smoothing_window = p.get_double("spacing.smoothing_window", 40.0);
        if (!(cfg.spacing.nodes_per_wavelength > 0))
            p.fail(p.line_of("spacing.nodes_per_wavelength"),
                   "spacing.nodes_per_wavelength must be positive");
    } else {
        p.fail(p.line_of("spacing.mode"),
               "spacing.mode must be 'constant', 'two_layer' or 'from_velocity'");
    }

    cfg.fdm_h = p.get_double("fdm.h", 0.0);

    cfg.source.s0 = p.get_double("source.s0", 1.0, true);
    cfg.source.sigma_R = p.get_double("source.sigma_r", 0, true);
    cfg.source.position.x = p.get_double("source.x", 0, true);
    cfg.source.position.z = p.get_double("source.z", 0, true);
    cfg.source.epsilon = p.get_double("source.epsilon", 4.0);
    cfg.source.t_delay = p.get_double("source.t_delay", 0.0);
    if (p.has("source.sigma_r") && !(cfg.source.sigma_R > 0))
        p.fail(p.line_of("source.sigma_r"), "source.sigma_r must be positive");
    if (!(cfg.source.epsilon > 0))
        p.fail(p.line_of("source.epsilon"), "source.epsilon must be positive");
    if (p.has("source.x") && p.has("source.z") && !cfg.domain.contains(cfg.source.position))
        p.fail(p.line_of("source.x"), "source position outside domain");

    cfg.dt = p.get_double("time.dt", 0, true);
    cfg.n_steps = static_cast<int>(p.get_int("time.n_steps", 0, true));
    if (p.has("time.dt") && !(cfg.dt > 0)) p.fail(p.line_of("time.dt"), "time.dt must be positive");
    if (cfg.n_steps < 0) p.fail(p.line_of("time.n_steps"), "time.n_steps must be >= 0");

    cfg.support = static_cast<int>(p.get_int("rbf.support", 7));
    cfg.shape.value = p.get_double("rbf.sigma_b", 70.0);
    cfg.shape.relative = p.get_bool("rbf.shape_relative", false);
    if (cfg.support < 3) p.fail(p.line_of("rbf.support"), "rbf.support must be >= 3");
    if (!(cfg.shape.value > 0)) p.fail(p.line_of("rbf.sigma_b"), "rbf.sigma_b must be positive");

    cfg.abc_i_max = static_cast<int>(p.get_int("abc.i_max", 30));
    if (cfg.abc_i_max < 0) p.fail(p.line_of("abc.i_max"), "abc.i_max must be >= 0");
    cfg.cfl_constant = p.get_double("stability.c", cfg.cfl_constant);
    if (!(cfg.cfl_constant > 0))
        p.fail(p.line_of("stability.c"), "stability.c must be positive");

    cfg.recorders.snapshot_times = p.get_list("recorders.snapshot_times");
    cfg.recorders.receivers = p.get_list("recorders.receivers");
    cfg.recorders.receiver_depth = p.get_double("recorders.receiver_depth", 0.0);
    cfg.recorders.seismogram_interval =
        static_cast<int>(p.get_int("recorders.seismogram_interval", 1));
    if (cfg.recorders.seismogram_interval < 1)
        p.fail(p.line_of("recorders.seismogram_interval"),
               "recorders.seismogram_interval must be >= 1");
    for (double t : cfg.recorders.snapshot_times)
        if (t < 0 || t > cfg.dt * cfg.n_steps + 1e-12)
            p.fail(p.line_of("recorders.snapshot_times"),
                   "snapshot time outside the simulated interval");
    for (double x : cfg.recorders.receivers)
        if (x < cfg.domain.x_min || x > cfg.domain.x_max)
            p.fail(p.line_of("recorders.receivers"), "receiver x outside domain width");

    // probes: semicolon-separated x:z pairs
    const std::string probes = p.get_string("recorders.probes", "");
    if (!probes.empty()) {
        std::istringstream ss(probes);
        std::string item;
        while (std::getline(ss, item, ';')) {
            item = trim(item);
            if (item.empty()) continue;
            const auto colon = item.find(':');
            bool ok = colon != std::string::npos;
            Vec2 pt;
            if (ok) {
                try {
                    pt.x = std::stod(item.substr(0, colon));
                    pt.z = std::stod(item.substr(colon + 1));
                } catch (const std::exception&) {
                    ok = false;
                }
            }
            if (!ok || !cfg.domain.contains(pt))
                p.fail(p.line_of("recorders.probes"), "bad or out-of-domain probe '" + item + "'");
            else
                cfg.recorders.probes.push_back(pt);
        }
    }

    cfg.seed = static_cast<std::uint64_t>(p.get_int("seed", 0));

    p.report_unknown();
    if (errors_out) *errors_out = errors;
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "scenario config invalid (" << errors.size() << " error(s)):";
        for (const auto& e : errors) {
            msg << "\n  ";
            if (e.line > 0) msg << "line " << e.line << ": ";
            msg << e.message;
        }
        throw ValidationError(msg.str());
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

namespace {
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream o;
    o << "name = " << cfg.name << "\n";
    o << "backend = " << (cfg.backend == Backend::RbfFd ? "rbffd" : "fdm") << "\n";
    o << "domain.x_min = " << fmt(cfg.domain.x_min) << "\n";
    o << "domain.x_max = " << fmt(cfg.domain.x_max) << "\n";
    o << "domain.z_min = " << fmt(cfg.domain.z_min) << "\n";
    o << "domain.z_max = " << fmt(cfg.domain.z_max) << "\n";
    switch (cfg.velocity.kind) {
        case VelocitySpec::Kind::Uniform:
            o << "velocity.model = uniform\n";
            o << "velocity.v = " << fmt(cfg.velocity.v) << "\n";
            break;
        case VelocitySpec::Kind::TwoLayer:
            o << "velocity.model = two_layer\n";
            o << "velocity.v_top = " << fmt(cfg.velocity.v_top) << "\n";
            o << "velocity.v_bottom = " << fmt(cfg.velocity.v_bottom) << "\n";
            o << "velocity.interface_depth = " << fmt(cfg.velocity.interface_depth) << "\n";
            break;
        case VelocitySpec::Kind::Gridded:
            o << "velocity.model = gridded\n";
            o << "velocity.grid_file = " << cfg.velocity.grid_file << "\n";
            break;
    }
    switch (cfg.spacing.mode) {
        case SpacingSpec::Mode::Constant:
            o << "spacing.mode = constant\n";
            o << "spacing.a = " << fmt(cfg.spacing.a) << "\n";
            break;
        case SpacingSpec::Mode::TwoLayer:
            o << "spacing.mode = two_layer\n";
            o << "spacing.a_shallow = " << fmt(cfg.spacing.a_shallow) << "\n";
            o << "spacing.a_deep = " << fmt(cfg.spacing.a_deep) << "\n";
            o << "spacing.jump_depth = " << fmt(cfg.spacing.jump_depth) << "\n";
            o << "spacing.smoothing_window = " << fmt(cfg.spacing.smoothing_window) << "\n";
            break;
        case SpacingSpec::Mode::FromVelocity:
            o << "spacing.mode = from_velocity\n";
            o << "spacing.nodes_per_wavelength = " << fmt(cfg.spacing.nodes_per_wavelength) << "\n";
            o << "spacing.smoothing_window = " << fmt(cfg.spacing.smoothing_window) << "\n";
            break;
    }
    if (cfg.fdm_h > 0) o << "fdm.h = " << fmt(cfg.fdm_h) << "\n";
    o << "source.s0 = " << fmt(cfg.source.s0) << "\n";
    o << "source.sigma_r = " << fmt(cfg.source.sigma_R) << "\n";
    o << "source.x = " << fmt(cfg.source.position.x) << "\n";
    o << "source.z = " << fmt(cfg.source.position.z) << "\n";
    o << "source.epsilon = " << fmt(cfg.source.epsilon) << "\n";
    if (cfg.source.t_delay > 0) o << "source.t_delay = " << fmt(cfg.source.t_delay) << "\n";
    o << "time.dt = " << fmt(cfg.dt) << "\n";
    o << "time.n_steps = " << cfg.n_steps << "\n";
    o << "rbf.support = " << cfg.support << "\n";
    o << "rbf.sigma_b = " << fmt(cfg.shape.value) << "\n";
    o << "rbf.shape_relative = " << (cfg.shape.relative ? "true" : "false") << "\n";
    o << "abc.i_max = " << cfg.abc_i_max << "\n";
    o << "stability.c = " << fmt(cfg.cfl_constant) << "\n";
    auto list = [&](const char* key, const std::vector<double>& xs) {
        if (xs.empty()) return;
        o << key << " = ";
        for (std::size_t i = 0; i < xs.size(); ++i) o << (i ? "," : "") << fmt(xs[i]);
        o << "\n";
    };
    list("recorders.snapshot_times", cfg.recorders.snapshot_times);
    list("recorders.receivers", cfg.recorders.receivers);
    if (cfg.recorders.receiver_depth > 0)
        o << "recorders.receiver_depth = " << fmt(cfg.recorders.receiver_depth) << "\n";
    o << "recorders.seismogram_interval = " << cfg.recorders.seismogram_interval << "\n";
    if (!cfg.recorders.probes.empty()) {
        o << "recorders.probes = ";
        for (std::size_t i = 0; i < cfg.recorders.probes.size(); ++i)
            o << (i ? ";" : "") << fmt(cfg.recorders.probes[i].x) << ":"
              << fmt(cfg.recorders.probes[i].z);
        o << "\n";
    }
    o << "seed = " << cfg.seed << "\n";
    return o.str();
}

}  // namespace meshwave
