// Batch driver: reproducible pipelines over the library with CSV/JSON/GFA
// artifacts. Exit codes: 0 success, 2 config or validation failure,
// 3 numerical tolerance failure, 1 I/O or internal error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parlp/parlp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace parlp;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunConfig {
    Matrix P = Matrix::identity(2);
    int n = 2;
    double L = 16.0;
    int N = 256;
    std::string symbol_id = "heat";
    std::optional<double> b;
    std::optional<std::array<int, 3>> window; // j_min, j_max, K
    double p = 1.0;
    double q = 2.0;
    double weight_exponent = 0.3;
    double weight_regularizer = 1e-3;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    std::vector<Vec> points;
    int count = 30;
    std::string input;
    std::string raw; // config file bytes, hashed into the manifest
};

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
}

RunConfig parse_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg.raw = ss.str();
    json j = json::parse(cfg.raw, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config: malformed JSON in " + path);
    check_keys(j,
               {"matrix", "grid", "symbol", "b", "window", "exponents", "weight", "seed",
                "output_dir", "points", "count", "input"},
               "top level");
    if (j.contains("grid")) {
        check_keys(j["grid"], {"n", "L", "N"}, "grid");
        cfg.n = j["grid"].value("n", cfg.n);
        cfg.L = j["grid"].value("L", cfg.L);
        cfg.N = j["grid"].value("N", cfg.N);
    }
    if (j.contains("matrix")) {
        const auto flat = j["matrix"].get<std::vector<double>>();
        if (flat.size() != static_cast<std::size_t>(cfg.n) * cfg.n)
            throw ConfigError("config: matrix must be a row-major list of n*n entries");
        cfg.P = Matrix(cfg.n, cfg.n);
        for (int i = 0; i < cfg.n; ++i)
            for (int k = 0; k < cfg.n; ++k)
                cfg.P(i, k) = flat[static_cast<std::size_t>(i) * cfg.n + k];
    } else {
        cfg.P = Matrix::identity(cfg.n);
    }
    if (j.contains("symbol")) {
        check_keys(j["symbol"], {"id"}, "symbol");
        cfg.symbol_id = j["symbol"].value("id", cfg.symbol_id);
    }
    if (j.contains("b")) cfg.b = j["b"].get<double>();
    if (j.contains("window")) {
        check_keys(j["window"], {"j_min", "j_max", "K"}, "window");
        cfg.window = {j["window"].value("j_min", -6), j["window"].value("j_max", 3),
                      j["window"].value("K", 8)};
    }
    if (j.contains("exponents")) {
        check_keys(j["exponents"], {"p", "q"}, "exponents");
        cfg.p = j["exponents"].value("p", cfg.p);
        cfg.q = j["exponents"].value("q", cfg.q);
    }
    if (j.contains("weight")) {
        check_keys(j["weight"], {"exponent", "regularizer"}, "weight");
        cfg.weight_exponent = j["weight"].value("exponent", cfg.weight_exponent);
        cfg.weight_regularizer = j["weight"].value("regularizer", cfg.weight_regularizer);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    if (j.contains("points"))
        for (const auto& row : j["points"]) cfg.points.push_back(row.get<Vec>());
    cfg.count = j.value("count", cfg.count);
    cfg.input = j.value("input", cfg.input);
    return cfg;
}

// seeded band-limited real test function avoiding the Nyquist rows
GridFunction seeded_band(const PeriodicGrid& grid, const DilationGroup& g, double lo, double hi,
                         std::uint64_t seed) {
    Rng rng(seed);
    GridFunction spec(grid, Side::frequency);
    const auto tab = rho_star_table(g, grid);
    for (std::size_t i = 0; i < spec.samples.size(); ++i) {
        std::array<int, 3> idx{};
        grid.unflatten(i, idx);
        bool nyquist = false;
        for (int d = 0; d < grid.dim; ++d)
            if (idx[static_cast<std::size_t>(d)] == 0) nyquist = true;
        const double r = (*tab)[i];
        const double re = rng.normal(), im = rng.normal(); // always drawn: stream is index-keyed
        if (nyquist || r < lo || r > hi) continue;
        spec.samples[i] = cplx(re, im);
    }
    GridFunction f = to_physical(spec);
    for (auto& v : f.samples) v = cplx(v.real(), 0.0);
    return f;
}

std::pair<double, double> default_band(const PeriodicGrid& grid) {
    const double nyq = 0.5 * grid.samples / grid.length;
    return {0.5, std::min(3.5, 0.8 * nyq)};
}

struct Artifacts {
    fs::path dir;
    std::vector<std::string> files;

    std::ofstream open_csv(const std::string& name) {
        files.push_back(name);
        return std::ofstream(dir / name);
    }
};

void write_manifest(const Artifacts& art, const std::string& command, const RunConfig& cfg,
                    double wall_ms) {
    json m;
    m["command"] = command;
    m["config_hash"] =
        "0x" + [&] {
            char buf[20];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(
                              fnv1a64(cfg.raw.data(), cfg.raw.size())));
            return std::string(buf);
        }();
    m["seed"] = cfg.seed;
    m["version"] = PARLP_VERSION_STRING;
    m["threads"] = thread_count();
    m["wall_ms"] = wall_ms;
    m["artifacts"] = art.files;
    std::ofstream out(art.dir / "manifest.json");
    out << m.dump(2) << "\n";
}

int cmd_validate(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    Rng rng(cfg.seed);
    double semigroup = 0.0, det_dev = 0.0;
    for (int i = 0; i < 25; ++i) {
        const double t = rng.log_uniform(1e-3, 1e3);
        const double s = rng.log_uniform(1e-3, 1e3);
        const Matrix lhs = dilate(g, t) * dilate(g, s);
        const Matrix rhs = dilate(g, t * s);
        semigroup = std::max(semigroup, (lhs - rhs).frobenius() / rhs.frobenius());
        Matrix A = dilate(g, t);
        double det;
        if (g.dim == 2)
            det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
        else if (g.dim == 1)
            det = A(0, 0);
        else
            det = A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
                  A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
                  A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
        det_dev = std::max(det_dev, std::abs(det - std::pow(t, g.gamma)) / std::pow(t, g.gamma));
    }
    json rep;
    rep["n"] = g.dim;
    rep["gamma"] = g.gamma;
    rep["kappa"] = g.kappa;
    rep["euclidean_norm"] = g.euclidean;
    rep["diagonal"] = g.diagonal;
    rep["semigroup_rel_dev"] = semigroup;
    rep["det_rel_dev"] = det_dev;
    art.files.push_back("validate.json");
    std::ofstream out(art.dir / "validate.json");
    out << rep.dump(2) << "\n";
    std::cout << "validate: gamma=" << g.gamma << " kappa=" << g.kappa
              << " semigroup_dev=" << semigroup << "\n";
    return (semigroup <= 1e-10 && det_dev <= 1e-10) ? 0 : 3;
}

int cmd_rho_table(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    std::vector<Vec> pts = cfg.points;
    Rng rng(cfg.seed);
    while (pts.size() < 8) {
        Vec x(static_cast<std::size_t>(g.dim));
        for (auto& c : x) c = rng.uniform(-8.0, 8.0);
        pts.push_back(x);
    }
    auto csv = art.open_csv("rho_table.csv");
    for (int d = 0; d < g.dim; ++d) csv << "x" << (d + 1) << ",";
    csv << "rho,rho_star\n";
    for (const auto& x : pts) {
        for (double c : x) csv << fmt(c) << ",";
        csv << fmt(rho(g, x)) << "," << fmt(rho(g, x, true)) << "\n";
    }
    return 0;
}

int cmd_partition(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    const PeriodicGrid grid(cfg.n, cfg.L, cfg.N);
    const FrequencySymbol sym = make_symbol(cfg.symbol_id, g);
    const IntervalCover cover = default_cover(sym, g);
    const double b = cfg.b ? *cfg.b : std::max(0.5, cover.b0());
    const PartitionOfUnity pou = build_partition(sym, g, cover, b);
    const double residual = partition_residual(pou, grid);

    const GridFunction eta = sample_symbol(pou.eta_hat, g, grid);
    write_gfa((art.dir / "eta_hat.gfa").string(), eta);
    art.files.push_back("eta_hat.gfa");

    json side;
    side["symbol"] = cfg.symbol_id;
    side["b"] = pou.b;
    side["b0"] = pou.b0;
    side["r1"] = pou.r1;
    side["r2"] = pou.r2;
    side["m"] = pou.theta_m;
    side["H"] = pou.theta_h;
    side["c"] = pou.cover_c;
    side["psi_floor"] = pou.psi_floor;
    side["residual"] = residual;
    side["intervals"] = json::array();
    for (const auto& iv : cover.intervals) side["intervals"].push_back({iv[0], iv[1]});
    art.files.push_back("partition.json");
    std::ofstream out(art.dir / "partition.json");
    out << side.dump(2) << "\n";
    std::cout << "partition: b=" << pou.b << " r1=" << pou.r1 << " r2=" << pou.r2
              << " residual=" << residual << " psi_floor=" << pou.psi_floor << "\n";
    if (residual > 1e-8 || pou.psi_floor < 0.9 * pou.cover_c) return 3;
    return 0;
}

int cmd_transform(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    const PeriodicGrid grid(cfg.n, cfg.L, cfg.N);
    GridFunction f = cfg.input.empty()
                         ? seeded_band(grid, g, default_band(grid).first,
                                       default_band(grid).second, cfg.seed)
                         : read_gfa(cfg.input, Side::physical);
    const GridFunction fhat = transform(f);
    write_gfa((art.dir / "physical.gfa").string(), f);
    write_gfa((art.dir / "frequency.gfa").string(), fhat);
    art.files.push_back("physical.gfa");
    art.files.push_back("frequency.gfa");
    const GridFunction back = transform(fhat);
    const double rt = rel_l2_error(back, f);
    std::cout << "transform: round-trip error " << rt << "\n";
    return rt <= 1e-12 ? 0 : 3;
}

int cmd_reconstruct(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    const PeriodicGrid grid(cfg.n, cfg.L, cfg.N);
    const FrequencySymbol sym = make_symbol(cfg.symbol_id, g);
    const PartitionOfUnity pou = cfg.b
                                     ? build_partition(sym, g, default_cover(sym, g), *cfg.b)
                                     : default_partition(sym, g);
    const auto [blo, bhi] = default_band(grid);
    const GridFunction f = seeded_band(grid, g, blo, bhi, cfg.seed);
    const ScaleWindow window = cfg.window
                                   ? ScaleWindow(pou.b, (*cfg.window)[0], (*cfg.window)[1],
                                                 (*cfg.window)[2])
                                   : window_for_band(pou, blo, bhi);
    const GridFunction rec = synthesize(analyze(f, sym, g, window), pou);
    const double residual = rel_l2_error(rec, f);
    write_gfa((art.dir / "input.gfa").string(), f);
    write_gfa((art.dir / "reconstruction.gfa").string(), rec);
    art.files.push_back("input.gfa");
    art.files.push_back("reconstruction.gfa");
    auto csv = art.open_csv("reconstruct.csv");
    csv << "seed,symbol,b,j_min,j_max,band_lo,band_hi,rel_l2_error\n";
    csv << cfg.seed << "," << cfg.symbol_id << "," << fmt(pou.b) << "," << window.j_min << ","
        << window.j_max << "," << fmt(blo) << "," << fmt(bhi) << "," << fmt(residual) << "\n";
    std::cout << "reconstruct: rel L2 residual " << residual << "\n";
    return residual <= 1e-6 ? 0 : 3;
}

int cmd_gfunc(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    const PeriodicGrid grid(cfg.n, cfg.L, cfg.N);
    const FrequencySymbol sym = make_symbol(cfg.symbol_id, g);
    const auto [blo, bhi] = default_band(grid);
    const GridFunction f = seeded_band(grid, g, blo, bhi, cfg.seed);
    const ScaleWindow window = cfg.window ? ScaleWindow(cfg.b ? *cfg.b : 0.5, (*cfg.window)[0],
                                                        (*cfg.window)[1], (*cfg.window)[2])
                                          : ScaleWindow(0.5, -6, 3, 8);
    const GridFunction gd = g_discrete(analyze(f, sym, g, window));
    const GridFunction gc = g_continuous(f, sym, g, window);
    write_gfa((art.dir / "g_discrete.gfa").string(), gd, /*as_complex=*/false);
    write_gfa((art.dir / "g_continuous.gfa").string(), gc, /*as_complex=*/false);
    art.files.push_back("g_discrete.gfa");
    art.files.push_back("g_continuous.gfa");
    auto csv = art.open_csv("gfunc.csv");
    csv << "point,g_discrete,g_continuous\n";
    for (std::size_t i = 0; i < gd.samples.size(); ++i)
        csv << i << "," << fmt(gd.samples[i].real()) << "," << fmt(gc.samples[i].real()) << "\n";
    std::cout << "gfunc: ||g_discrete||_2 = " << lp_norm(gd, 2.0)
              << ", ||g_continuous||_2 = " << lp_norm(gc, 2.0) << "\n";
    return 0;
}

int cmd_maximal(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    const PeriodicGrid grid(cfg.n, cfg.L, std::min(cfg.N, 64));
    const auto [blo, bhi] = default_band(grid);
    const GridFunction f = seeded_band(grid, g, blo, bhi, cfg.seed);
    const auto radii = log_space(2.0 * grid.spacing(), grid.length / 4.0, 10);
    const GridFunction M = hl_max(f, g, radii);
    const GridFunction Pe = peetre_max(f, g, 2.0, 1.0);
    const FrequencySymbol Phi = bump_mollifier_symbol(g.dim);
    const auto s_grid = log_space(0.125, 8.0, 19);
    const GridFunction Gm = grand_max(f, Phi, g, s_grid);
    write_gfa((art.dir / "hl_max.gfa").string(), M, false);
    write_gfa((art.dir / "peetre.gfa").string(), Pe, false);
    write_gfa((art.dir / "grand_max.gfa").string(), Gm, false);
    art.files.push_back("hl_max.gfa");
    art.files.push_back("peetre.gfa");
    art.files.push_back("grand_max.gfa");

    const Weight w = make_power_weight(grid, g, cfg.weight_exponent, cfg.weight_regularizer);
    const double ap = ap_constant(w, g, grid, std::max(1.5, cfg.q), radii);
    const double hp = hp_quasinorm(f, Phi, g, cfg.p, s_grid);
    auto csv = art.open_csv("maximal.csv");
    csv << "quantity,value\n";
    csv << "ap_constant," << fmt(ap) << "\n";
    csv << "hp_quasinorm," << fmt(hp) << "\n";
    csv << "hl_max_l2," << fmt(lp_norm(M, 2.0)) << "\n";
    csv << "peetre_l2," << fmt(lp_norm(Pe, 2.0)) << "\n";
    csv << "grand_max_l2," << fmt(lp_norm(Gm, 2.0)) << "\n";
    std::cout << "maximal: ap=" << ap << " hp_quasinorm=" << hp << "\n";
    return 0;
}

int cmd_atoms(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    const PeriodicGrid grid(cfg.n, cfg.L, std::min(cfg.N, 128));
    Rng rng(cfg.seed);
    auto csv = art.open_csv("atoms.csv");
    csv << "atom,p,radius,moment_order,sup_value,sup_bound,max_moment_residual,outside_max,"
           "pass\n";
    bool all_pass = true;
    for (int k = 0; k < cfg.count; ++k) {
        const double radius = rng.uniform(0.75, 1.5);
        Vec center(static_cast<std::size_t>(g.dim));
        for (auto& c : center)
            c = grid.spacing() * static_cast<double>(rng.uniform_int(-cfg.N / 8, cfg.N / 8));
        const Atom a = make_atom(cfg.seed * 7919ull + static_cast<std::uint64_t>(k), center,
                                 radius, cfg.p, g, grid);
        all_pass = all_pass && a.report.pass;
        csv << k << "," << fmt(cfg.p) << "," << fmt(radius) << "," << a.moment_order << ","
            << fmt(a.report.sup_value) << "," << fmt(a.report.sup_bound) << ","
            << fmt(a.report.max_moment_residual) << "," << fmt(a.report.outside_max) << ","
            << (a.report.pass ? 1 : 0) << "\n";
    }
    std::cout << "atoms: " << cfg.count << " generated, all_pass=" << all_pass << "\n";
    return all_pass ? 0 : 3;
}

int cmd_equivalence(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    const PeriodicGrid grid(cfg.n, cfg.L, std::min(cfg.N, 128));
    const FrequencySymbol sym = make_symbol(cfg.symbol_id, g);
    const ScaleWindow window = cfg.window ? ScaleWindow(cfg.b ? *cfg.b : 0.5, (*cfg.window)[0],
                                                        (*cfg.window)[1], (*cfg.window)[2])
                                          : ScaleWindow(0.5, -5, 3, 2);
    const FrequencySymbol Phi = bump_mollifier_symbol(g.dim);
    const FamilySpec spec{cfg.count, cfg.seed};
    const EquivalenceReport rep = equivalence_experiment(sym, g, Phi, cfg.p, spec, grid, window,
                                                         window.nodes(), /*refine=*/true);
    auto csv = art.open_csv("equivalence.csv");
    csv << "function,p,hp_quasinorm,g_norm,ratio,resolution\n";
    for (const auto& row : rep.rows) {
        csv << row.id << "," << fmt(rep.p) << "," << fmt(row.hp) << "," << fmt(row.g_norm) << ","
            << fmt(row.ratio) << "," << grid.samples << "\n";
        csv << row.id << "," << fmt(rep.p) << "," << fmt(row.hp_fine) << ","
            << fmt(row.g_norm_fine) << "," << fmt(row.ratio_fine) << "," << grid.samples * 2
            << "\n";
    }
    json side;
    side["c1"] = rep.c1;
    side["c2"] = rep.c2;
    side["spread"] = rep.c2 / rep.c1;
    side["max_drift"] = rep.max_drift;
    side["excluded"] = rep.excluded;
    art.files.push_back("equivalence.json");
    std::ofstream out(art.dir / "equivalence.json");
    out << side.dump(2) << "\n";
    std::cout << "equivalence: c1=" << rep.c1 << " c2=" << rep.c2 << " spread="
              << rep.c2 / rep.c1 << " max_drift=" << rep.max_drift << "\n";
    const bool ok = rep.c1 > 0.0 && std::isfinite(rep.c2) && rep.max_drift <= 0.05;
    return ok ? 0 : 3;
}

int cmd_constants(const RunConfig& cfg, Artifacts& art) {
    const DilationGroup g = validate_matrix(cfg.P);
    const PeriodicGrid grid(cfg.n, cfg.L, std::min(cfg.N, 128));
    const FrequencySymbol sym = make_symbol(cfg.symbol_id, g);
    const PartitionOfUnity pou = default_partition(sym, g);
    const auto [jlo, jhi] = valid_j_window(sym, pou);
    auto csv = art.open_csv("constants.csv");
    csv << "j,C_psi_j_L,b_pow_neg_j,product\n";
    double sup = 0.0;
    bool finite = true;
    for (int j = jlo; j <= jhi; ++j) {
        const double C = transition_constant(sym, pou, grid, j, 0.0);
        const double bp = std::pow(pou.b, -j);
        finite = finite && std::isfinite(C);
        sup = std::max(sup, C * bp);
        csv << j << "," << fmt(C) << "," << fmt(bp) << "," << fmt(C * bp) << "\n";
    }
    json side;
    side["sup_C_b_neg_j"] = sup;
    side["window"] = {jlo, jhi};
    side["D"] = json::array();
    for (int axis = 0; axis < g.dim; ++axis) {
        const double D = lowpass_constant(pou, grid, axis, 0.0);
        finite = finite && std::isfinite(D);
        side["D"].push_back(D);
    }
    art.files.push_back("constants.json");
    std::ofstream out(art.dir / "constants.json");
    out << side.dump(2) << "\n";
    std::cout << "constants: sup C(psi,j,0) b^-j = " << sup << "\n";
    return finite ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic Littlewood-Paley toolkit"};
    app.set_version_flag("--version", PARLP_VERSION_STRING);
    std::string config_path, out_dir;
    int threads = 0;
    std::int64_t seed_override = -1;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed_override, "seed override");
    app.add_option("--threads", threads, "worker thread count");
    app.add_flag("--verbose", verbose, "chatty progress output");
    app.require_subcommand(1);

    const std::vector<std::string> commands = {"validate", "rho-table", "partition",
                                               "transform", "reconstruct", "gfunc",
                                               "maximal", "atoms", "equivalence", "constants"};
    for (const auto& name : commands) app.add_subcommand(name, "");

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = parse_config(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (threads > 0) set_thread_count(threads);
        if (verbose)
            std::cerr << "running '" << command << "' with seed " << cfg.seed << " into "
                      << cfg.output_dir << "\n";

        Artifacts art;
        art.dir = cfg.output_dir;
        fs::create_directories(art.dir);

        const auto t0 = std::chrono::steady_clock::now();
        int code = 1;
        if (command == "validate")
            code = cmd_validate(cfg, art);
        else if (command == "rho-table")
            code = cmd_rho_table(cfg, art);
        else if (command == "partition")
            code = cmd_partition(cfg, art);
        else if (command == "transform")
            code = cmd_transform(cfg, art);
        else if (command == "reconstruct")
            code = cmd_reconstruct(cfg, art);
        else if (command == "gfunc")
            code = cmd_gfunc(cfg, art);
        else if (command == "maximal")
            code = cmd_maximal(cfg, art);
        else if (command == "atoms")
            code = cmd_atoms(cfg, art);
        else if (command == "equivalence")
            code = cmd_equivalence(cfg, art);
        else if (command == "constants")
            code = cmd_constants(cfg, art);
        const auto t1 = std::chrono::steady_clock::now();
        write_manifest(art, command, cfg,
                       std::chrono::duration<double, std::milli>(t1 - t0).count());
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const AdmissibilityError& e) {
        std::cerr << "validation error (admissibility): " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const BaseTooSmall& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NonAdmissibleExponent& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
