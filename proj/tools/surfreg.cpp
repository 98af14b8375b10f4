// surfreg command-line driver.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "surfreg/errors.hpp"
#include "surfreg/fixtures.hpp"
#include "surfreg/gradient_check.hpp"
#include "surfreg/mesh_io.hpp"
#include "surfreg/shape_statistics.hpp"
#include "surfreg/surface_geometry.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace surfreg;

namespace {

enum Exit { kOk = 0, kNumerical = 1, kUsage = 2, kIo = 3 };

// Thrown when a run finished and wrote its outputs but did not converge.
struct NotConverged : Error {
    using Error::Error;
};

std::string indexed(const char* stem, int i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03d%s", stem, i, ext);
    return buf;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void write_json(const json& j, const fs::path& path) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_text(const std::string& text, const fs::path& path) {
    auto out = open_out(path);
    out << text;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json energy_json(const IterationRecord& r) {
    return {{"E_total", number(r.e_total)}, {"E_kinetic", number(r.e_kinetic)}, {"E_match", number(r.e_match)},
            {"l2_error", number(r.l2)},     {"grad_norm", number(r.grad_norm)}};
}

void write_history(const RegistrationResult& r, const fs::path& path) {
    auto out = open_out(path);
    out << "iter,E_total,E_kin,E_match,grad_norm,step,L2\n";
    for (const auto& h : r.history)
        out << h.iter << ',' << format_double(h.e_total) << ',' << format_double(h.e_kinetic) << ','
            << format_double(h.e_match) << ',' << format_double(h.grad_norm) << ',' << format_double(h.step) << ','
            << format_double(h.l2) << '\n';
}

// Frames as native + OBJ and the per-frame displacement magnitude |q_i - q_0|.
void write_frames(const GeodesicPath& path, const fs::path& dir) {
    const Immersion& q0 = path.q.front();
    for (int i = 0; i <= path.steps(); ++i) {
        const Immersion& q = path.q[std::size_t(i)];
        save_mesh(q.domain(), q, dir / indexed("frame", i, ".imesh"));
        export_obj(q, dir / indexed("frame", i, ".obj"));
        write_magnitude_csv(TangentField(q.coords - q0.coords), dir / indexed("magnitude", i, ".csv"));
    }
}

json registration_json(const RegistrationResult& r) {
    json j;
    j["status"] = std::string(to_string(r.status));
    j["message"] = r.message;
    j["iterations"] = r.iterations;
    j["initial"] = energy_json(r.history.front());
    j["final"] = energy_json(r.final_record());
    j["path_length"] = number(path_length(r.path));
    return j;
}

void save_surface(const Immersion& q, const fs::path& dir, const std::string& stem) {
    save_mesh(q.domain(), q, dir / (stem + ".imesh"));
    export_obj(q, dir / (stem + ".obj"));
}

// --------------------------------------------------------------------------
// Option groups

struct RegOptions {
    RegistrationConfig cfg;
    std::string init = "zero";
    std::string kinetic = "path-sum";

    void add(CLI::App* app) {
        app->add_option("--alpha", cfg.alpha, "metric length scale")->capture_default_str();
        app->add_option("--sigma", cfg.sigma, "matching weight")->capture_default_str();
        app->add_option("--steps,-N", cfg.steps, "time steps N")->capture_default_str();
        app->add_option("--max-iters", cfg.max_iters, "descent iterations")->capture_default_str();
        app->add_option("--step-eps", cfg.step_eps, "initial step length")->capture_default_str();
        app->add_option("--armijo-c", cfg.armijo_c)->capture_default_str();
        app->add_option("--armijo-shrink", cfg.armijo_shrink)->capture_default_str();
        app->add_option("--eps-min", cfg.eps_min)->capture_default_str();
        app->add_option("--tol-grad", cfg.tol_grad, "absolute gradient norm tolerance")->capture_default_str();
        app->add_option("--tol-grad-rel", cfg.tol_grad_rel, "gradient tolerance relative to the first iterate; 0 off")
            ->capture_default_str();
        app->add_option("--tol-match", cfg.tol_match, "L2 error tolerance; 0 off")->capture_default_str();
        app->add_option("--tol-energy-rel", cfg.tol_energy_rel, "relative energy decrease tolerance; 0 off")
            ->capture_default_str();
        app->add_option("--init", init, "initial velocity policy")
            ->check(CLI::IsMember({"zero", "l2diff"}))
            ->capture_default_str();
        app->add_flag("--fixed-step", cfg.fixed_step, "plain descent with constant step, no line search");
        app->add_option("--kinetic", kinetic, "kinetic term of the objective")
            ->check(CLI::IsMember({"path-sum", "initial-metric"}))
            ->capture_default_str();
        app->add_option("--solver-tol", cfg.solver.rel_tol, "CG relative residual")->capture_default_str();
        app->add_option("--solver-max-iter", cfg.solver.max_iter, "CG iteration cap; 0 selects 10*(3n)")
            ->capture_default_str();
    }

    RegistrationConfig resolve() const {
        RegistrationConfig c = cfg;
        c.init = init == "l2diff" ? InitPolicy::L2Diff : InitPolicy::Zero;
        c.kinetic = kinetic == "initial-metric" ? KineticModel::InitialMetric : KineticModel::PathSum;
        c.validate();
        return c;
    }
};

struct GridOptions {
    std::string topology = "cylinder";
    int nx = 16;
    int ny = 16;

    void add(CLI::App* app, const std::string& default_topology, int dnx, int dny) {
        topology = default_topology;
        nx = dnx;
        ny = dny;
        app->add_option("--topology", topology, "plane, cylinder or torus")->capture_default_str();
        app->add_option("--nx", nx, "cells in x^1")->capture_default_str();
        app->add_option("--ny", ny, "cells in x^2")->capture_default_str();
    }

    MeshPtr mesh() const { return make_grid(topology_from_string(topology), nx, ny); }
};

Immersion default_immersion(const MeshPtr& mesh) {
    switch (mesh->topology) {
        case Topology::PlaneSheet: return identity_immersion(mesh);
        case Topology::Cylinder: return straight_cylinder(mesh);
        case Topology::Torus: return torus(mesh, TorusParams{});
    }
    throw InvalidArgument("unknown topology");
}

// Every subcommand takes --config FILE, a key = value file whose keys are
// long option names. The file is expanded into arguments placed before the
// command line, so explicit flags override it (options keep the last value).
std::string g_config_path;

void add_config(CLI::App* app) {
    app->add_option("--config", g_config_path, "key = value file; command-line flags override it");
}

std::vector<std::string> expand_config(const std::string& path, const std::string& command) {
    if (!fs::exists(path)) throw IoError("cannot open config file '" + path + "'");
    std::vector<std::string> args;
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(path)) {
        if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == command)) continue;
        std::string key = item.name;
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "config" || item.name == "++" || item.name == "--") continue;
        const std::string flag = (key.size() == 1 ? "-" : "--") + key;
        if (item.inputs.empty() || (item.inputs.size() == 1 && item.inputs.front().empty())) continue;
        if (item.inputs.size() == 1) {
            args.push_back(flag + "=" + item.inputs.front());
        } else {
            args.push_back(flag);
            args.insert(args.end(), item.inputs.begin(), item.inputs.end());
        }
    }
    return args;
}

// argv with every "--config FILE" expanded in place after the subcommand name.
std::vector<std::string> preprocess(int argc, char** argv) {
    std::vector<std::string> in(argv + 1, argv + argc);
    std::vector<std::string> config_args;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == "--config" && i + 1 < in.size()) {
            const auto extra = expand_config(in[i + 1], in.empty() ? "" : in[0]);
            config_args.insert(config_args.end(), extra.begin(), extra.end());
            ++i;
        } else if (in[i].rfind("--config=", 0) == 0) {
            const auto extra = expand_config(in[i].substr(9), in[0]);
            config_args.insert(config_args.end(), extra.begin(), extra.end());
        } else {
            rest.push_back(in[i]);
        }
    }
    if (rest.empty() || config_args.empty()) return rest;
    std::vector<std::string> out{rest.front()};
    out.insert(out.end(), config_args.begin(), config_args.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

// The resolved settings of a run, written next to its outputs.
void write_effective_config(const CLI::App* app, const fs::path& dir) {
    std::string text = app->config_to_str(true, false);
    // Drop the --config entry itself; the file holds the resolved values.
    std::string kept;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);)
        if (line.rfind("config=", 0) != 0) kept += line + '\n';
    write_text(kept, dir / "config.ini");
}

// --------------------------------------------------------------------------
// Commands

struct MeshgenCmd {
    GridOptions grid;
    std::string out;
    std::string obj;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("meshgen", "write the default immersion of a topology");
        add_config(app);
        grid.add(app, "cylinder", 16, 16);
        app->add_option("--out,-o", out, "native mesh file")->required();
        app->add_option("--obj", obj, "also export an OBJ file");
        app->callback([this] { run(); });
    }

    void run() const {
        const Immersion q = default_immersion(grid.mesh());
        save_mesh(q.domain(), q, out);
        if (!obj.empty()) export_obj(q, obj);
    }
};

struct FixtureCmd {
    std::string kind;
    int nx = 16;
    int ny = 16;
    std::string out;
    bool obj = false;
    CylinderParams cyl{0.25, 1.0, 90.0, 5, 0.02};
    TorusParams tor{0.35, 0.15, 0.3};
    VaseParams vas{0.25, 1.0, 0.3, 0.0, 0.0};

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("fixture", "write parametric test shapes");
        add_config(app);
        app->add_option("kind", kind, "cylinder, bent-cylinder, torus, tori, vase or vases")
            ->required()
            ->check(CLI::IsMember({"cylinder", "bent-cylinder", "torus", "tori", "vase", "vases"}));
        app->add_option("--nx", nx)->capture_default_str();
        app->add_option("--ny", ny)->capture_default_str();
        app->add_option("--out,-o", out, "file for single shapes, directory for tori and vases")->required();
        app->add_flag("--obj", obj, "also export OBJ files");
        app->add_option("--radius", cyl.radius, "cylinder and vase radius")->capture_default_str();
        app->add_option("--height", cyl.height, "cylinder and vase height")->capture_default_str();
        app->add_option("--bend", cyl.bend_degrees, "bend angle in degrees")->capture_default_str();
        app->add_option("--ripples", cyl.ripples)->capture_default_str();
        app->add_option("--ripple-amplitude", cyl.ripple_amplitude)->capture_default_str();
        app->add_option("--major", tor.major)->capture_default_str();
        app->add_option("--minor", tor.minor)->capture_default_str();
        app->add_option("--asymmetry", tor.asymmetry)->capture_default_str();
        app->add_option("--bulge", vas.bulge)->capture_default_str();
        app->add_option("--waist", vas.waist)->capture_default_str();
        app->add_option("--flare", vas.flare)->capture_default_str();
        app->callback([this] { run(); });
    }

    void write(const Immersion& q, const fs::path& path) const {
        save_mesh(q.domain(), q, path);
        if (obj) export_obj(q, fs::path(path).replace_extension(".obj"));
    }

    void run() const {
        if (kind == "cylinder") {
            write(straight_cylinder(make_grid(Topology::Cylinder, nx, ny), cyl.radius, cyl.height), out);
        } else if (kind == "bent-cylinder") {
            write(bent_cylinder(make_grid(Topology::Cylinder, nx, ny), cyl), out);
        } else if (kind == "torus") {
            write(torus(make_grid(Topology::Torus, nx, ny), tor), out);
        } else if (kind == "tori") {
            ensure_dir(out);
            const auto t = triangle_tori(make_grid(Topology::Torus, nx, ny), tor);
            const char* names[] = {"torus_a.imesh", "torus_b.imesh", "torus_c.imesh"};
            for (int i = 0; i < 3; ++i) write(t[std::size_t(i)], fs::path(out) / names[i]);
        } else if (kind == "vase") {
            VaseParams p = vas;
            p.radius = cyl.radius;
            p.height = cyl.height;
            write(vase(make_grid(Topology::Cylinder, nx, ny), p), out);
        } else {
            ensure_dir(out);
            const MeshPtr mesh = make_grid(Topology::Cylinder, nx, ny);
            const auto params = default_vases();
            for (std::size_t i = 0; i < params.size(); ++i)
                write(vase(mesh, params[i]), fs::path(out) / indexed("vase", int(i), ".imesh"));
        }
    }
};

struct RegisterCmd {
    CLI::App* app = nullptr;
    RegOptions reg;
    std::string templ, target, start, out;
    bool no_frames = false;

    void add(CLI::App& root) {
        app = root.add_subcommand("register", "register a template surface to a target");
        add_config(app);
        app->add_option("--template", templ, "native mesh of q0")->required();
        app->add_option("--target", target, "native mesh of the target")->required();
        app->add_option("--start", start, "IVEC file with the initial velocity (overrides --init)");
        app->add_option("--out,-o", out, "output directory")->required();
        app->add_flag("--no-frames", no_frames, "skip exporting the frames of the geodesic");
        reg.add(app);
        app->callback([this] { run(); });
    }

    void run() const {
        const RegistrationConfig cfg = reg.resolve();
        const auto [mesh, q0] = load_mesh(templ);
        const Immersion qt = load_mesh(target).second;
        std::optional<TangentField> init;
        if (!start.empty()) init = load_field(start, mesh);

        const RegistrationResult r = register_surfaces(q0, qt, cfg, init);

        ensure_dir(out);
        const fs::path dir(out);
        write_effective_config(app, dir);
        save_field(q0.domain(), r.u0, dir / "u0.ivec");
        write_history(r, dir / "history.csv");
        if (!no_frames) write_frames(r.path, dir);
        save_surface(r.path.endpoint(), dir, "result");

        json j;
        j["command"] = "register";
        j["nodes"] = q0.node_count();
        j["steps"] = cfg.steps;
        j["alpha"] = cfg.alpha;
        j["sigma"] = cfg.sigma;
        j["registration"] = registration_json(r);
        j["u0_norm"] = number(norm(MetricOperator(q0, cfg.alpha, cfg.solver), r.u0));
        write_json(j, dir / "summary.json");

        std::cout << "register: " << to_string(r.status) << " after " << r.iterations << " iterations, E "
                  << format_double(r.final_record().e_total) << ", L2 " << format_double(r.final_record().l2) << '\n';
        if (r.status == RegistrationStatus::StepFailure) throw StepFailure(-1, r.message);
        if (r.status != RegistrationStatus::Converged) throw NotConverged(r.message);
    }
};

struct ShootCmd {
    CLI::App* app = nullptr;
    std::string templ, velocity, out;
    int steps = 10;
    double alpha = 0.6;
    SolverOptions solver;

    void add(CLI::App& root) {
        app = root.add_subcommand("shoot", "integrate the geodesic from q0 with initial velocity u0");
        add_config(app);
        app->add_option("--template", templ, "native mesh of q0")->required();
        app->add_option("--velocity", velocity, "IVEC file with u0")->required();
        app->add_option("--out,-o", out, "output directory")->required();
        app->add_option("--steps,-N", steps)->capture_default_str();
        app->add_option("--alpha", alpha)->capture_default_str();
        app->add_option("--solver-tol", solver.rel_tol)->capture_default_str();
        app->add_option("--solver-max-iter", solver.max_iter)->capture_default_str();
        app->callback([this] { run(); });
    }

    void run() const {
        if (steps < 1) throw InvalidArgument("steps must be at least 1");
        if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be non-negative");
        const auto [mesh, q0] = load_mesh(templ);
        const TangentField u0 = load_field(velocity, mesh);
        ShootOptions opts;
        opts.solver = solver;
        const GeodesicPath path = shoot(q0, u0, steps, alpha, opts);

        ensure_dir(out);
        const fs::path dir(out);
        write_effective_config(app, dir);
        write_frames(path, dir);
        save_field(q0.domain(), path.u.back(), dir / "u_final.ivec");

        json j;
        j["command"] = "shoot";
        j["nodes"] = q0.node_count();
        j["steps"] = steps;
        j["alpha"] = alpha;
        json kin = json::array();
        for (double k : path.kinetic) kin.push_back(number(k));
        j["kinetic"] = kin;
        j["path_energy"] = number(path_energy(path));
        j["path_length"] = number(path_length(path));
        j["endpoint_area"] = number(surface_area(path.endpoint()));
        write_json(j, dir / "summary.json");
        std::cout << "shoot: " << steps << " steps, path length " << format_double(path_length(path)) << '\n';
    }
};

struct TriangleCmd {
    CLI::App* app = nullptr;
    RegOptions reg;
    std::string a, b, c, out;
    std::string angle = "metric";

    void add(CLI::App& root) {
        app = root.add_subcommand("triangle", "geodesic triangle between three surfaces");
        add_config(app);
        app->add_option("--a", a, "vertex A")->required();
        app->add_option("--b", b, "vertex B")->required();
        app->add_option("--c", c, "vertex C")->required();
        app->add_option("--out,-o", out, "output directory")->required();
        app->add_option("--angle-metric", angle, "inner product for the vertex angles")
            ->check(CLI::IsMember({"metric", "l2"}))
            ->capture_default_str();
        reg.cfg.sigma = 0.1;
        reg.cfg.alpha = 0.3;
        reg.cfg.max_iters = 300;
        reg.cfg.tol_grad_rel = 1e-3;
        reg.add(app);
        app->callback([this] { run(); });
    }

    void run() const {
        const RegistrationConfig cfg = reg.resolve();
        if (cfg.steps % 2 != 0) throw InvalidArgument("triangle needs an even number of steps");
        const Immersion qa = load_mesh(a).second;
        const Immersion qb = load_mesh(b).second;
        const Immersion qc = load_mesh(c).second;
        const TriangleReport t =
            triangle_experiment(qa, qb, qc, cfg, angle == "l2" ? AngleMetric::L2 : AngleMetric::Metric);

        ensure_dir(out);
        const fs::path dir(out);
        write_effective_config(app, dir);
        const char* names = "ABC";
        json regs;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) {
                if (i == k) continue;
                const std::string tag{names[i], names[k]};
                const RegistrationResult& r = t.registrations[std::size_t(i)][std::size_t(k)];
                write_history(r, dir / ("history_" + tag + ".csv"));
                regs[tag] = registration_json(r);
            }
        const std::array<const Immersion*, 3> verts{&qa, &qb, &qc};
        json sides = json::array(), mids = json::array();
        for (int i = 0; i < 3; ++i) {
            const std::string tag{names[i], names[(i + 1) % 3]};
            save_surface(t.midpoints[std::size_t(i)], dir, "midpoint_" + tag);
            sides.push_back({{"edge", tag},
                             {"length", number(t.side_lengths[std::size_t(i)])},
                             {"reverse_length", number(t.reverse_side_lengths[std::size_t(i)])}});
            mids.push_back({{"edge", tag}, {"area", number(surface_area(t.midpoints[std::size_t(i)]))}});
        }
        json j;
        j["command"] = "triangle";
        j["angle_metric"] = angle;
        j["angles"] = {number(t.angles[0]), number(t.angles[1]), number(t.angles[2])};
        j["angle_sum"] = number(t.angle_sum);
        j["sides"] = sides;
        j["vertex_areas"] = {number(surface_area(*verts[0])), number(surface_area(*verts[1])),
                             number(surface_area(*verts[2]))};
        j["midpoints"] = mids;
        j["all_converged"] = t.all_converged();
        j["registrations"] = regs;
        write_json(j, dir / "summary.json");

        std::cout << "triangle: angles " << format_double(t.angles[0]) << ' ' << format_double(t.angles[1]) << ' '
                  << format_double(t.angles[2]) << ", sum " << format_double(t.angle_sum) << '\n';
        if (!t.all_converged()) throw NotConverged("not all pairwise registrations converged");
    }
};

struct MeanCmd {
    CLI::App* app = nullptr;
    RegOptions reg;
    std::vector<std::string> shapes;
    std::string init, out;
    double mean_tol = 1e-3;
    int max_outer = 6;
    int jobs = 1;

    void add(CLI::App& root) {
        app = root.add_subcommand("mean", "Karcher mean of surfaces");
        add_config(app);
        app->add_option("shapes", shapes, "native meshes to average")->required()->take_all();
        app->add_option("--init-mesh", init, "starting mean (default: the first shape)");
        app->add_option("--out,-o", out, "output directory")->required();
        app->add_option("--mean-tol", mean_tol, "stop once the averaged velocity norm is below this")
            ->capture_default_str();
        app->add_option("--max-outer", max_outer)->capture_default_str();
        app->add_option("--jobs,-j", jobs, "concurrent registrations per round")->capture_default_str();
        reg.cfg.sigma = 0.05;
        reg.cfg.tol_grad = 1e-2;
        reg.add(app);
        app->callback([this] { run(); });
    }

    void run() const {
        const RegistrationConfig cfg = reg.resolve();
        if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
        std::vector<Immersion> qs;
        for (const auto& s : shapes) qs.push_back(load_mesh(s).second);
        const Immersion q_init = init.empty() ? qs.front() : load_mesh(init).second;
        const MeanResult m = karcher_mean(qs, q_init, cfg, mean_tol, max_outer, jobs);

        ensure_dir(out);
        const fs::path dir(out);
        write_effective_config(app, dir);
        save_surface(m.mean, dir, "mean");
        for (std::size_t i = 0; i < m.per_shape_velocities.size(); ++i)
            save_field(m.mean.domain(), m.per_shape_velocities[i], dir / indexed("velocity", int(i), ".ivec"));
        {
            auto csv = open_out(dir / "norms.csv");
            csv << "iter,norm\n";
            for (std::size_t i = 0; i < m.velocity_norms.size(); ++i)
                csv << i + 1 << ',' << format_double(m.velocity_norms[i]) << '\n';
        }
        json norms = json::array(), status = json::array();
        for (double n : m.velocity_norms) norms.push_back(number(n));
        for (auto s : m.per_shape_status) status.push_back(std::string(to_string(s)));
        json j;
        j["command"] = "mean";
        j["shapes"] = shapes.size();
        j["status"] = std::string(to_string(m.status));
        j["iterations"] = m.iterations;
        j["velocity_norms"] = norms;
        j["per_shape_status"] = status;
        j["mean_area"] = number(surface_area(m.mean));
        write_json(j, dir / "summary.json");

        std::cout << "mean: " << to_string(m.status) << " after " << m.iterations << " rounds, norm "
                  << format_double(m.velocity_norms.back()) << '\n';
        if (m.status != MeanStatus::Converged) throw NotConverged("averaged velocity norm above tolerance");
    }
};

struct GradcheckCmd {
    RegOptions reg;
    GridOptions grid;
    std::string templ, target;
    int directions = 10;
    std::uint64_t seed = 1;
    double u0_scale = 0.2;
    double target_scale = 0.05;
    double tol = 1e-5;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("gradcheck", "compare the adjoint gradient with finite differences");
        add_config(app);
        grid.add(app, "cylinder", 8, 8);
        app->add_option("--template", templ, "native mesh of q0 (default: the topology's default immersion)");
        app->add_option("--target", target, "native target mesh (default: q0 plus seeded noise)");
        app->add_option("--directions,-k", directions)->capture_default_str();
        app->add_option("--seed", seed)->capture_default_str();
        app->add_option("--u0-scale", u0_scale, "std. dev. of the random u0")->capture_default_str();
        app->add_option("--target-scale", target_scale, "std. dev. of the target noise")->capture_default_str();
        app->add_option("--tol", tol, "pass threshold on the min-over-h relative error")->capture_default_str();
        reg.cfg.steps = 5;
        reg.add(app);
        app->callback([this] { run(); });
    }

    void run() const {
        const RegistrationConfig cfg = reg.resolve();
        const Immersion q0 = templ.empty() ? default_immersion(grid.mesh()) : load_mesh(templ).second;
        const std::size_t n = q0.node_count();
        const Immersion qt = target.empty() ? Immersion(q0.mesh, q0.coords + random_nodal(n, target_scale, seed + 1))
                                            : load_mesh(target).second;
        require_compatible(q0, qt);
        const TangentField u0(random_nodal(n, u0_scale, seed));

        const GradientCheckReport rep = gradient_check(q0, u0, qt, cfg, directions, seed + 2);
        const ObjectiveGradient og = objective_and_gradient(q0, u0, qt, cfg);
        const MetricOperator op(q0, cfg.alpha, cfg.solver);
        const double u0n = norm(op, u0);
        const double dev = u0n > 0.0 ? norm(op, TangentField(og.gradient.values - u0.values)) / u0n : 0.0;

        std::printf("gradient norm %.6e, |grad - u0| / |u0| = %.3e\n", rep.gradient_norm, dev);
        std::printf("%4s %16s %10s %8s\n", "dir", "analytic", "min_err", "best_h");
        for (std::size_t d = 0; d < rep.directions.size(); ++d) {
            const auto& c = rep.directions[d];
            std::printf("%4zu %16.8e %10.3e %8.0e\n", d, c.analytic, c.best_rel_error, c.best_h);
        }
        const bool ok = rep.passed(tol);
        std::printf("worst min-over-h relative error %.3e (tolerance %.1e): %s\n", rep.worst_best_error(), tol,
                    ok ? "PASS" : "FAIL");
        if (!ok) {
            std::printf("\nfull h sweep (relative error)\n%4s", "dir");
            for (double h : rep.step_sizes) std::printf(" %10.0e", h);
            std::printf("\n");
            for (std::size_t d = 0; d < rep.directions.size(); ++d) {
                std::printf("%4zu", d);
                for (double e : rep.directions[d].rel_error) std::printf(" %10.3e", e);
                std::printf("\n");
            }
            throw NotConverged("gradient check failed");
        }
    }
};

int fail(int code, const char* kind, const std::exception& e) {
    std::cerr << "surfreg: " << kind << ": " << e.what() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surface registration under an H1 inner metric", "surfreg"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    MeshgenCmd meshgen;
    FixtureCmd fixture;
    RegisterCmd reg;
    ShootCmd shoot_cmd;
    TriangleCmd triangle;
    MeanCmd mean;
    GradcheckCmd gradcheck;
    meshgen.add(app);
    fixture.add(app);
    reg.add(app);
    shoot_cmd.add(app);
    triangle.add(app);
    mean.add(app);
    gradcheck.add(app);

    try {
        std::vector<std::string> args = preprocess(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        return fail(kIo, "config", e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const NotConverged& e) {
        return fail(kNumerical, "non-convergence", e);
    } catch (const StepFailure& e) {
        return fail(kNumerical, "step failure", e);
    } catch (const SolverError& e) {
        return fail(kNumerical, "solver failure", e);
    } catch (const DegenerateElementError& e) {
        return fail(kNumerical, "degenerate surface", e);
    } catch (const MismatchError& e) {
        return fail(kIo, "mesh mismatch", e);
    } catch (const ParseError& e) {
        return fail(kIo, "parse error", e);
    } catch (const IoError& e) {
        return fail(kIo, "i/o error", e);
    } catch (const InvalidArgument& e) {
        return fail(kUsage, "invalid argument", e);
    } catch (const MeshError& e) {
        return fail(kUsage, "invalid mesh", e);
    } catch (const std::exception& e) {
        return fail(kNumerical, "error", e);
    }
    return kOk;
}
