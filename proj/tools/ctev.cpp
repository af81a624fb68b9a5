#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctev/cgo.hpp"
#include "ctev/dimred3d.hpp"
#include "ctev/eigensolver.hpp"
#include "ctev/herglotz.hpp"
#include "ctev/identity_lab.hpp"
#include "ctev/vanishing.hpp"

namespace fs = std::filesystem;
using namespace ctev;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value file, '#' comments; duplicate keys are an error.
struct Config {
    std::map<std::string, std::string> kv;
    std::string raw;

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        Config c;
        std::string line;
        int lineno = 0;
        std::ostringstream raw;
        while (std::getline(in, line)) {
            ++lineno;
            raw << line << '\n';
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                if (a == std::string::npos) return std::string();
                const auto b = s.find_last_not_of(" \t\r");
                return s.substr(a, b - a + 1);
            };
            const std::string t = trim(line);
            if (t.empty()) continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(t.substr(0, eq));
            const std::string val = trim(t.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            if (!c.kv.emplace(key, val).second)
                throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                                  key + "'");
        }
        c.raw = raw.str();
        return c;
    }

    bool has(const std::string& k) const { return kv.count(k) > 0; }

    std::string str(const std::string& k, const std::string& dflt) const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }

    std::string require(const std::string& k) const {
        auto it = kv.find(k);
        if (it == kv.end()) throw ConfigError("missing required key '" + k + "'");
        return it->second;
    }

    double num(const std::string& k, double dflt) const {
        return has(k) ? parse_num(k, kv.at(k)) : dflt;
    }

    int integer(const std::string& k, int dflt) const {
        const double v = num(k, dflt);
        if (v != std::floor(v)) throw ConfigError("key '" + k + "': expected an integer");
        return int(v);
    }

    std::vector<double> list(const std::string& k, const std::string& dflt) const {
        std::vector<double> out;
        std::stringstream ss(str(k, dflt));
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_num(k, item));
        if (out.empty()) throw ConfigError("key '" + k + "': empty schedule");
        return out;
    }

    static double parse_num(const std::string& k, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
            if (pos != v.size()) throw std::invalid_argument("");
            return x;
        } catch (const std::exception&) {
            throw ConfigError("key '" + k + "': cannot parse number from '" + v + "'");
        }
    }

    void check_keys(std::initializer_list<const char*> known) const {
        for (const auto& [k, v] : kv) {
            bool ok = false;
            for (const char* name : known) ok = ok || k == name;
            if (!ok) throw ConfigError("unknown key '" + k + "'");
        }
    }
};

struct RunContext {
    fs::path out;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string experiment;
};

void write_file(const RunContext& ctx, const std::string& name, const std::string& body) {
    const fs::path path = ctx.out / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << body;
    if (!os) throw ConfigError("write failed for " + path.string());
    if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") {
        json meta{{"tool_version", kVersion},
                  {"experiment", ctx.experiment},
                  {"config_hash", ctx.config_hash},
                  {"seed", ctx.seed},
                  {"file", name}};
        std::ofstream ms(ctx.out / (name + ".meta.json"), std::ios::binary);
        ms << meta.dump(2) << '\n';
    }
}

std::string loglog_svg(std::span<const double> xs, std::span<const double> ys,
                       const std::string& title) {
    const int W = 480, H = 320, m = 40;
    auto lg = [](double v) { return std::log10(std::max(v, 1e-300)); };
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x0 = std::min(x0, lg(xs[i]));
        x1 = std::max(x1, lg(xs[i]));
        y0 = std::min(y0, lg(ys[i]));
        y1 = std::max(y1, lg(ys[i]));
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1;
    if (y1 - y0 < 1e-12) y1 = y0 + 1;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<text x=\"" << m
       << "\" y=\"20\" font-size=\"13\">" << title << "</text>\n<polyline fill=\"none\" "
       << "stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    char buf[64];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double px = m + (W - 2 * m) * (lg(xs[i]) - x0) / (x1 - x0);
        const double py = H - m - (H - 2 * m) * (lg(ys[i]) - y0) / (y1 - y0);
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
        os << buf;
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

Sector config_sector(const Config& cfg) {
    return Sector(cfg.num("theta_m", -pi / 4), cfg.num("theta_M", pi / 4));
}

Medium config_medium(const Config& cfg) {
    Medium med;
    med.V = Complex(cfg.num("V_re", 3.0), cfg.num("V_im", 0.0));
    med.eta = EtaSpec(cfg.num("eta0", 1.0), cfg.num("eta_c", 0.0),
                      cfg.num("eta_alpha", 0.5));
    return med;
}

int run_cgo_checks(const Config& cfg, const RunContext& ctx) {
    cfg.check_keys({"experiment", "out", "seed", "theta_m", "theta_M", "s_schedule",
                    "h_schedule", "alpha_schedule", "closed_tol"});
    const Sector sec = config_sector(cfg);
    const auto ss = cfg.list("s_schedule", "1,4,16,64,256");
    const auto hs = cfg.list("h_schedule", "0.5,1");
    const auto as = cfg.list("alpha_schedule", "0,0.5,1");
    const double tol = cfg.num("closed_tol", 1e-8);

    bool pass = true;
    std::ostringstream closed;
    closed << "s,quadrature_re,quadrature_im,closed_re,closed_im,rel_err\n";
    char buf[256];
    for (double s : ss) {
        const Complex q = sector_integral_quadrature(sec, CgoScale(s));
        const Complex c = sector_integral_closed(sec, CgoScale(s));
        const double rel = std::abs(q - c) / std::abs(c);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s, q.real(),
                      q.imag(), c.real(), c.imag(), rel);
        closed << buf;
        pass = pass && rel <= tol;
    }
    write_file(ctx, "cgo_closed.csv", closed.str());

    std::vector<CgoBoundsReport> reports;
    for (double s : ss)
        for (double h : hs)
            for (double a : as) {
                reports.push_back(cgo_bounds(TruncatedSector(sec, h), CgoScale(s), a));
                pass = pass && reports.back().all_core_pass();
            }
    std::ostringstream bounds;
    write_cgo_csv(bounds, reports);
    write_file(ctx, "cgo_bounds.csv", bounds.str());
    return pass ? 0 : 2;
}

int run_eigen_scan(const Config& cfg, const RunContext& ctx) {
    cfg.check_keys({"experiment", "out", "seed", "domain", "radius", "h", "theta_m",
                    "theta_M", "V_re", "V_im", "eta0", "eta_c", "eta_alpha", "k_min",
                    "k_max", "grid", "basis_n", "oracle_m_max", "match_tol"});
    const Medium med = config_medium(cfg);
    const std::string dom_name = cfg.str("domain", "disk");
    Domain dom;
    if (dom_name == "disk")
        dom = Disk{cfg.num("radius", 1.0)};
    else if (dom_name == "pacman")
        dom = Pacman{TruncatedSector(config_sector(cfg), cfg.num("h", 1.0))};
    else
        throw ConfigError("domain must be disk or pacman");
    const auto basis = CollocationBasis::fourier_bessel(cfg.integer("basis_n", 12));
    const double k_min = cfg.num("k_min", 1.0), k_max = cfg.num("k_max", 6.0);

    auto res = scan(k_min, k_max, cfg.integer("grid", 500), dom, med, basis);
    std::ostringstream csv;
    write_scan_csv(csv, res);
    write_file(ctx, "eigen_scan.csv", csv.str());

    json js{{"detected_minima", json::array()}};
    for (auto [k, sg] : res.detected_minima) js["detected_minima"].push_back({k, sg});

    bool pass = !res.detected_minima.empty();
    if (dom_name == "disk") {
        const double tol = cfg.num("match_tol", 1e-4);
        auto roots = disk_oracle_roots(k_min, k_max, med, cfg.integer("oracle_m_max", 8));
        js["oracle_roots"] = json::array();
        for (auto [k, m] : roots) js["oracle_roots"].push_back({k, m});
        for (auto [kd, sg] : res.detected_minima) {
            bool matched = false;
            for (auto [kr, m] : roots) matched = matched || std::abs(kd - kr) <= tol;
            pass = pass && matched;
        }
        for (auto [kr, m] : roots) {
            bool matched = false;
            for (auto [kd, sg] : res.detected_minima)
                matched = matched || std::abs(kd - kr) <= tol;
            pass = pass && matched;
        }
    }
    js["pass"] = pass;
    write_file(ctx, "eigen_scan.json", js.dump(2) + "\n");
    return pass ? 0 : 2;
}

Density seeded_density(int n, std::uint64_t seed) {
    Density g = Density::circle(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (auto& z : g.samples) z = Complex(nd(rng), nd(rng));
    return g;
}

int run_herglotz_fit(const Config& cfg, const RunContext& ctx) {
    cfg.check_keys({"experiment", "out", "seed", "k", "theta_m", "theta_M", "h",
                    "j_schedule", "tau", "grid_size", "density_n", "order"});
    const double k = cfg.num("k", 2.0);
    const TruncatedSector ts(config_sector(cfg), cfg.num("h", 0.5));
    const auto jd = cfg.list("j_schedule", "2,3,4,6,8,12,16,24");
    std::vector<int> sched(jd.begin(), jd.end());

    Density g = seeded_density(cfg.integer("density_n", 32), ctx.seed);
    auto fs = sample_field(
        ts, cfg.integer("order", 10),
        [&](const Vector2d& x) { return herglotz_eval(g, k, x); },
        [&](const Vector2d& x) { return herglotz_grad(g, k, x); });
    auto rep = admissibility_scan(fs, k, sched, cfg.num("tau", 4.0),
                                  cfg.integer("grid_size", 48));

    std::ostringstream csv;
    write_admissibility_csv(csv, rep);
    write_file(ctx, "admissibility.csv", csv.str());
    write_file(ctx, "admissibility.json", admissibility_to_json(rep).dump(2) + "\n");
    std::vector<double> js(rep.j.begin(), rep.j.end());
    write_file(ctx, "admissibility.svg", loglog_svg(js, rep.residuals, "fit residual vs j"));
    return rep.admissible ? 0 : 2;
}

int run_vanish(const Config& cfg, const RunContext& ctx) {
    cfg.check_keys({"experiment", "out", "seed", "theta_m", "theta_M", "h", "V_re", "V_im",
                    "eta0", "eta_c", "eta_alpha", "k_lo", "k_hi", "basis_n", "rho_levels",
                    "rate_min"});
    const Medium med = config_medium(cfg);
    const TruncatedSector ts(config_sector(cfg), cfg.num("h", 1.0));
    Domain dom = Pacman{ts};
    auto ep = refine_and_extract(cfg.num("k_lo", 5.9), cfg.num("k_hi", 6.05), dom, med,
                                 CollocationBasis::fourier_bessel(cfg.integer("basis_n", 20)),
                                 1e-6);
    std::vector<double> rhos;
    for (int i = 1; i <= cfg.integer("rho_levels", 7); ++i)
        rhos.push_back(ts.h / std::pow(2.0, i));
    auto dc = decay_curve([&](const Vector2d& x) { return ep.v(x); }, {0, 0}, rhos,
                          ts.sector);

    std::ostringstream csv, svg;
    write_decay_csv(csv, dc);
    write_decay_svg(svg, dc);
    write_file(ctx, "decay.csv", csv.str());
    write_file(ctx, "decay.svg", svg.str());
    write_file(ctx, "eigenpair.json", eigenpair_to_json(ep).dump(2) + "\n");
    return dc.fitted_rate > cfg.num("rate_min", 0.1) ? 0 : 2;
}

int run_verify_identities(const Config& cfg, const RunContext& ctx) {
    cfg.check_keys({"experiment", "out", "seed", "k", "theta_m", "theta_M", "h", "eta0",
                    "eta_c", "eta_alpha", "beta", "j_schedule", "tau", "grid_size",
                    "order"});
    const double k = cfg.num("k", 2.0);
    const TruncatedSector ts(config_sector(cfg), cfg.num("h", 0.5));
    const auto jd = cfg.list("j_schedule", "2,3,4,6,8,12,16,24");
    std::vector<int> sched(jd.begin(), jd.end());
    Medium med;
    med.V = Complex(0, 0);
    med.eta = EtaSpec(cfg.num("eta0", 1.0), cfg.num("eta_c", 0.0),
                      cfg.num("eta_alpha", 0.5));

    // smooth vanishing Herglotz field v = w = 2 pi i J_1(k r) e^{i theta}
    Density gm = Density::circle(32);
    for (std::size_t i = 0; i < gm.xi.size(); ++i) {
        const double p = std::atan2(gm.xi[i].y(), gm.xi[i].x());
        gm.samples[i] = std::exp(Complex(0, p));
    }
    FieldPair fp;
    fp.k = k;
    fp.q = Complex(1, 0);
    fp.v = fp.w = [&gm, k](const Vector2d& x) { return herglotz_eval(gm, k, x); };
    fp.grad_v = fp.grad_w = [&gm, k](const Vector2d& x) { return herglotz_grad(gm, k, x); };

    auto rep = master_limit_check(fp, med, ts, sched, cfg.num("beta", 2.5),
                                  cfg.num("tau", 4.0), cfg.integer("grid_size", 48),
                                  cfg.integer("order", 8));

    std::vector<IdentityTerms> cells;
    for (std::size_t i = 0; i < sched.size(); ++i) {
        auto fit = fit_density(sample_field(ts, cfg.integer("order", 8), fp.v, fp.grad_v),
                               k, cfg.integer("grid_size", 48),
                               std::pow(double(sched[i]), -cfg.num("tau", 4.0)), sched[i]);
        cells.push_back(assemble_identity_terms(fp, fit.density, med, ts,
                                                CgoScale(rep.s_values[i]), sched[i],
                                                cfg.integer("order", 8), 1e-3));
    }
    std::ostringstream csv;
    write_identity_csv(csv, cells);
    write_file(ctx, "identity_terms.csv", csv.str());
    write_file(ctx, "master_limit.json", master_limit_to_json(rep).dump(2) + "\n");
    write_file(ctx, "master_product.svg",
               loglog_svg(rep.s_values, rep.product, "|s/2 RHS| vs s"));
    return rep.pass ? 0 : 2;
}

int run_dimred_checks(const Config& cfg, const RunContext& ctx) {
    cfg.check_keys({"experiment", "out", "seed", "L", "x3c", "k", "l_max", "x_prime_list",
                    "gamma_l_max", "densities", "theta_m", "theta_M"});
    const BumpFunction psi(cfg.num("x3c", 0.0), cfg.num("L", 0.3));
    const double k = cfg.num("k", 1.0);
    bool pass = true;

    std::vector<BesselBracket> rows;
    for (int l = 0; l <= cfg.integer("l_max", 4); ++l)
        for (double r : cfg.list("x_prime_list", "0.4,0.5,0.7")) {
            rows.push_back(reduced_bessel_bracket(l, k, psi, {r, 0.0}));
            pass = pass && rows.back().pass;
        }
    std::ostringstream csv;
    write_bracket_csv(csv, rows);
    write_file(ctx, "bessel_brackets.csv", csv.str());

    auto rc = reduction_constants(psi, k, cfg.list("x_prime_list", "0.4,0.5,0.7").front(),
                                  config_sector(cfg));
    pass = pass && rc.c1_in_range && rc.C2_lower <= rc.C2_upper;
    json cj{{"C_psi", rc.C_psi},          {"C1_psi", rc.C1_psi},
            {"c1_upper", rc.c1_upper},    {"C2_lower", rc.C2_lower},
            {"C2_upper", rc.C2_upper},    {"corner_nonzero", rc.corner_nonzero},
            {"corner_combination_min", rc.corner_combination_min}};

    std::mt19937_64 rng(ctx.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    bool gamma_ok = true;
    for (int t = 0; t < cfg.integer("densities", 20); ++t) {
        Density d = Density::sphere(44, 32);
        for (auto& z : d.samples) z = Complex(nd(rng), nd(rng));
        gamma_ok = gamma_ok && gamma_moment_bound(d, cfg.integer("gamma_l_max", 40)).all_pass;
    }
    pass = pass && gamma_ok;
    cj["gamma_bound_pass"] = gamma_ok;
    cj["pass"] = pass;
    write_file(ctx, "dimred_constants.json", cj.dump(2) + "\n");
    return pass ? 0 : 2;
}

int run_experiment(const std::string& config_path, const std::string& out_override,
                   int threads, std::uint64_t seed_override, bool has_seed) {
    if (threads < 1) throw ConfigError("--threads must be >= 1");
    Config cfg = Config::load(config_path);
    RunContext ctx;
    ctx.experiment = cfg.require("experiment");
    ctx.out = out_override.empty() ? fs::path(cfg.str("out", "out")) : fs::path(out_override);
    ctx.seed = has_seed ? seed_override : std::uint64_t(cfg.num("seed", 0));
    ctx.config_hash = fnv1a(cfg.raw + "#seed=" + std::to_string(ctx.seed));
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec || !fs::is_directory(ctx.out))
        throw ConfigError("cannot create output directory " + ctx.out.string());

    if (ctx.experiment == "cgo-checks") return run_cgo_checks(cfg, ctx);
    if (ctx.experiment == "eigen-scan") return run_eigen_scan(cfg, ctx);
    if (ctx.experiment == "herglotz-fit") return run_herglotz_fit(cfg, ctx);
    if (ctx.experiment == "vanish") return run_vanish(cfg, ctx);
    if (ctx.experiment == "verify-identities") return run_verify_identities(cfg, ctx);
    if (ctx.experiment == "dimred-checks") return run_dimred_checks(cfg, ctx);
    throw ConfigError("unknown experiment '" + ctx.experiment + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ctev: corner transmission eigenfunction verification toolkit"};
    app.set_version_flag("--version", kVersion);

    std::string config_path, out_dir;
    int threads = 1;
    std::uint64_t seed = 0;
    bool has_seed = false;

    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "config file path")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--threads", threads, "worker threads (reductions stay ordered)");
    run->add_option("--seed", seed, "seed for randomized probes (overrides config)")
        ->each([&](const std::string&) { has_seed = true; });
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        return run_experiment(config_path, out_dir, threads, seed, has_seed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
