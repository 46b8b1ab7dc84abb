// meshwave command line: scenario runs, node export, convergence studies and
// RBF-FD vs FDM comparisons.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "meshwave/errors.hpp"
#include "meshwave/fdm.hpp"
#include "meshwave/parallel.hpp"
#include "meshwave/post.hpp"
#include "meshwave/solver.hpp"
#include "meshwave/study.hpp"

namespace fs = std::filesystem;
using namespace meshwave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::localtime(&tt));
    return buf;
}

fs::path output_root(const std::string& out_flag) {
    if (!out_flag.empty()) return out_flag;
    if (const char* env = std::getenv("MESHWAVE_OUT")) return env;
    return "out";
}

fs::path make_run_dir(const std::string& out_flag, const std::string& scenario_name) {
    fs::path dir = output_root(out_flag) / scenario_name / timestamp();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << text;
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "snapshot_t%.6f.csv", t);
    return buf;
}

void write_artifacts(const RunArtifacts& art, const ScenarioConfig& cfg, const fs::path& dir) {
    write_text(dir / "scenario.cfg", serialize_config(cfg));
    write_nodes_csv(art.nodes, (dir / "nodes.csv").string());
    if (!art.seismogram.receiver_x.empty())
        write_seismogram_csv(art.seismogram, (dir / "seismogram.csv").string());
    for (const auto& snap : art.snapshots)
        write_snapshot_csv(snap, (dir / snapshot_name(snap.t)).string());
    if (!art.probes.empty()) {
        std::ofstream f(dir / "probes.csv");
        f << "t";
        for (const auto& p : art.probes) f << ",u(" << p.position.x << ";" << p.position.z << ")";
        f << "\n";
        char buf[64];
        for (std::size_t i = 0; i < art.probe_times.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", art.probe_times[i]);
            f << buf;
            for (const auto& p : art.probes) {
                std::snprintf(buf, sizeof(buf), ",%.17g", p.values[i]);
                f << buf;
            }
            f << "\n";
        }
    }
    write_text(dir / "diagnostics.txt", art.diagnostics);
}

Vec2 parse_point(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ValidationError("expected 'x:z', got '" + s + "'");
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"meshwave: RBF-FD / FDM 2D acoustic wave simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // allow --out/--threads after the subcommand too

    std::string out_dir;
    int threads = 1;
    app.add_option("--out", out_dir, "Output directory root (default $MESHWAVE_OUT or ./out)");
    app.add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);

    std::string run_cfg;
    bool force = false, dry_run = false;
    std::int64_t seed_override = -1;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write artifacts");
    run_cmd->add_option("config", run_cfg, "Scenario config file")->required();
    run_cmd->add_flag("--force", force, "Run even if the CFL stability check fails");
    run_cmd->add_flag("--dry-run", dry_run, "Validate the scenario only, write nothing");
    run_cmd->add_option("--seed", seed_override, "Override the scenario seed");

    std::string nodes_cfg;
    std::int64_t nodes_seed = -1;
    auto* nodes_cmd = app.add_subcommand("nodes", "Generate and export the node set only");
    nodes_cmd->add_option("config", nodes_cfg, "Scenario config file")->required();
    nodes_cmd->add_option("--seed", nodes_seed, "Override the scenario seed");

    std::string conv_cfg, conv_spacings, conv_probe;
    double conv_t = 0.0;
    auto* conv_cmd = app.add_subcommand("converge", "Refinement study of the probe peak value");
    conv_cmd->add_option("config", conv_cfg, "Scenario config file")->required();
    conv_cmd->add_option("--spacings", conv_spacings, "Comma list of decreasing target spacings")
        ->required();
    conv_cmd->add_option("--probe", conv_probe, "Probe point as x:z")->required();
    conv_cmd->add_option("--t-probe", conv_t, "Probe time in s")->required();

    std::string cmp_a, cmp_b;
    bool cmp_force = false;
    auto* cmp_cmd = app.add_subcommand("compare", "Run two scenarios and emit difference fields");
    cmp_cmd->add_option("config_a", cmp_a, "First scenario config")->required();
    cmp_cmd->add_option("config_b", cmp_b, "Second scenario config")->required();
    cmp_cmd->add_flag("--force", cmp_force, "Run past failed CFL checks");

    CLI11_PARSE(app, argc, argv);
    set_thread_count(threads);

    try {
        if (run_cmd->parsed()) {
            ScenarioConfig cfg = load_config(run_cfg);
            if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
            if (dry_run) {
                std::cout << "scenario '" << cfg.name << "' ok\n";
                return kExitOk;
            }
            const RunArtifacts art = run(cfg, force);
            const fs::path dir = make_run_dir(out_dir, cfg.name);
            write_artifacts(art, cfg, dir);
            std::cout << "wrote " << dir.string() << " (" << art.nodes.size() << " nodes, "
                      << art.snapshots.size() << " snapshots)\n";
            return kExitOk;
        }

        if (nodes_cmd->parsed()) {
            ScenarioConfig cfg = load_config(nodes_cfg);
            if (nodes_seed >= 0) cfg.seed = static_cast<std::uint64_t>(nodes_seed);
            const VelocityModel model = make_velocity_model(cfg);
            const SpacingField spacing = make_spacing_field(cfg, model);
            const NodeSet ns = generate_nodes(cfg.domain, spacing, cfg.seed);
            const fs::path dir = make_run_dir(out_dir, cfg.name);
            write_nodes_csv(ns, (dir / "nodes.csv").string());
            std::cout << "wrote " << (dir / "nodes.csv").string() << " (" << ns.size()
                      << " nodes)\n";
            return kExitOk;
        }

        if (conv_cmd->parsed()) {
            const ScenarioConfig cfg = load_config(conv_cfg);
            std::vector<double> spacings;
            std::stringstream ss(conv_spacings);
            std::string item;
            while (std::getline(ss, item, ',')) spacings.push_back(std::stod(item));
            const auto points = convergence_study(cfg, spacings, parse_point(conv_probe), conv_t);
            const fs::path dir = make_run_dir(out_dir, cfg.name + "_convergence");
            std::ofstream f(dir / "convergence.csv");
            f << "spacing,n_nodes,peak\n";
            for (const auto& p : points)
                f << p.spacing << ',' << p.node_count << ',' << p.peak_value << '\n';
            std::cout << "wrote " << (dir / "convergence.csv").string() << "\n";
            return kExitOk;
        }

        if (cmp_cmd->parsed()) {
            const ScenarioConfig cfg_a = load_config(cmp_a);
            const ScenarioConfig cfg_b = load_config(cmp_b);
            const RunArtifacts art_a = run(cfg_a, cmp_force);
            const RunArtifacts art_b = run(cfg_b, cmp_force);

            const fs::path dir = make_run_dir(out_dir, cfg_a.name + "_vs_" + cfg_b.name);
            if (!art_a.seismogram.receiver_x.empty())
                write_seismogram_csv(art_a.seismogram, (dir / "seismogram_a.csv").string());
            if (!art_b.seismogram.receiver_x.empty())
                write_seismogram_csv(art_b.seismogram, (dir / "seismogram_b.csv").string());

            // Resample both runs onto a shared grid per matching snapshot time.
            const Rect dom = cfg_a.domain;
            const double h = std::max(dom.width(), dom.depth()) / 256.0;
            const UniformGrid grid = make_grid(dom, h);
            for (const auto& sa : art_a.snapshots) {
                const SnapshotField* sb = nullptr;
                for (const auto& s : art_b.snapshots)
                    if (std::abs(s.t - sa.t) < 1e-9) sb = &s;
                if (!sb) continue;
                const GridField ga = to_grid(sa, grid);
                const GridField gb = to_grid(*sb, grid);
                const auto diff = difference_field(ga.values, gb.values);
                SnapshotField out;
                out.t = sa.t;
                out.backend = "diff";
                for (int j = 0; j < grid.nz; ++j)
                    for (int i = 0; i < grid.nx; ++i) out.positions.push_back(grid.point(i, j));
                out.values = diff;
                char name[64];
                std::snprintf(name, sizeof(name), "difference_t%.6f.csv", sa.t);
                write_snapshot_csv(out, (dir / name).string());
            }
            std::cout << "wrote " << dir.string() << "\n";
            return kExitOk;
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
