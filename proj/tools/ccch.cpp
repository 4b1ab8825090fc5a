// ccch: batch front end. Each subcommand reads a JSON config, writes CSV files with a JSON
// manifest beside each one, and exits 0 (ok), 2 (config), 3 (numeric) or 4 (acceptance failure).
#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "ccch/acceptance.hpp"
#include "ccch/asymptotics.hpp"
#include "ccch/pde_sim.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ccch;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kSchema = 1;

enum class Verbosity { Quiet, Info, Debug };

Verbosity verbosity() {
    const char* v = std::getenv("CCCH_LOG");
    if (!v) return Verbosity::Info;
    std::string s(v);
    if (s == "quiet" || s == "0" || s == "error") return Verbosity::Quiet;
    if (s == "debug" || s == "2") return Verbosity::Debug;
    return Verbosity::Info;
}

template <class... A>
void log_info(fmt::format_string<A...> f, A&&... a) {
    if (verbosity() != Verbosity::Quiet) std::cerr << fmt::format(f, std::forward<A>(a)...) << '\n';
}

template <class... A>
void log_debug(fmt::format_string<A...> f, A&&... a) {
    if (verbosity() == Verbosity::Debug) std::cerr << fmt::format(f, std::forward<A>(a)...) << '\n';
}

struct Run {
    std::string command;
    fs::path config_path, out;
    json config = json::object();
    int threads = 4;
    std::uint64_t seed = 20240601;
};

// ---- config access -------------------------------------------------------------------------

json load_config(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", p.string()));
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: {}", p.string(), e.what()));
    }
    if (!j.is_object()) throw ConfigError(p.string() + ": top level must be an object");
    if (!j.contains("schema")) throw ConfigError(p.string() + ": missing field 'schema'");
    if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kSchema)
        throw ConfigError(fmt::format("{}: unsupported schema {} (expected {})", p.string(), j["schema"].dump(), kSchema));
    return j;
}

template <class T>
T field(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(fmt::format("{}: missing field '{}'", where, key));
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("{}: field '{}' has the wrong type ({})", where, key, j.at(key).dump()));
    }
}

template <class T>
T field_or(const json& j, const std::string& key, T fallback, const std::string& where) {
    return j.contains(key) ? field<T>(j, key, where) : fallback;
}

double positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(fmt::format("{} must be positive and finite (got {})", what, v));
    return v;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<cplx> complex_list(const json& j, const std::string& key, const std::string& where) {
    std::vector<cplx> out;
    for (const auto& e : field<std::vector<std::vector<double>>>(j, key, where)) {
        if (e.size() != 2) throw ConfigError(fmt::format("{}: entries of '{}' must be [re, im] pairs", where, key));
        out.emplace_back(e[0], e[1]);
    }
    return out;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

fs::path resolve(const Run& run, const std::string& p) {
    fs::path q(p);
    return q.is_absolute() ? q : run.config_path.parent_path() / q;
}

struct Grid {
    double L = 30.0;
    int N = 1024;
};

Grid read_grid(const json& c, double L0, int N0) {
    Grid g{L0, N0};
    if (c.contains("grid")) {
        const json& j = c["grid"];
        g.L = field_or<double>(j, "L", L0, "grid");
        g.N = field_or<int>(j, "N", N0, "grid");
    }
    positive(g.L, "grid.L");
    if (!power_of_two(g.N) || g.N < 256 || g.N > (1 << 20))
        throw ConfigError(fmt::format("grid.N must be a power of two in [256, 2^20] (got {})", g.N));
    return g;
}

SolitonData soliton_data(const json& j, const std::string& where) {
    SolitonData d;
    d.poles = complex_list(j, "poles", where);
    d.norming_mod = complex_list(j, "norming", where);
    if (d.poles.size() != d.norming_mod.size())
        throw ConfigError(where + ": 'poles' and 'norming' must have the same length");
    if (field_or<bool>(j, "partners", true, where)) d = with_partners(d);
    try {
        d.validate();
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return d;
}

// Initial datum on the periodic grid of [-L, L).
std::vector<cplx> datum_samples(const json& c, const Grid& g) {
    const json d = field<json>(c, "datum", "config");
    const auto type = field<std::string>(d, "type", "datum");
    if (type == "zero") return std::vector<cplx>(std::size_t(g.N), 0.0);
    if (type == "sech")
        return sech_profile(g.L, g.N, field<double>(d, "amplitude", "datum"), field_or<double>(d, "velocity", 0.0, "datum"));
    if (type == "soliton") return soliton_on_grid(soliton_data(d, "datum"), 0.0, g.L, g.N).u;
    throw ConfigError(fmt::format("datum: unknown type '{}' (zero, sech, soliton)", type));
}

// ---- output --------------------------------------------------------------------------------

std::string num(double v) { return fmt::format("{:.16e}", v); }

class CsvWriter {
public:
    CsvWriter(const Run& run, const std::string& name, std::vector<std::string> columns, json extra = json::object())
        : run_(run), name_(name), columns_(std::move(columns)), extra_(std::move(extra)) {
        fs::create_directories(run.out);
        file_.open(run.out / (name + ".csv"), std::ios::binary);
        if (!file_) throw ConfigError(fmt::format("cannot write '{}'", (run.out / (name + ".csv")).string()));
        for (std::size_t k = 0; k < columns_.size(); ++k) file_ << (k ? "," : "") << columns_[k];
        file_ << '\n';
    }
    // No manifest is written when a command aborts mid-file.
    ~CsvWriter() {
        file_.close();
        if (std::uncaught_exceptions() > unwinding_) return;
        json m;
        m["command"] = run_.command;
        m["version"] = kVersion;
        m["schema"] = kSchema;
        m["csv"] = name_ + ".csv";
        m["columns"] = columns_;
        m["rows"] = rows_;
        m["threads"] = run_.threads;
        m["seed"] = run_.seed;
        m["config_file"] = run_.config_path.filename().string();
        m["config"] = run_.config;
        for (auto& [k, v] : extra_.items()) m[k] = v;
        std::ofstream(run_.out / (name_ + ".json"), std::ios::binary) << m.dump(2) << '\n';
    }

    void row(std::initializer_list<std::string> cells) {
        std::size_t k = 0;
        for (const auto& c : cells) file_ << (k++ ? "," : "") << c;
        file_ << '\n';
        ++rows_;
    }
    json& extra() { return extra_; }

private:
    const Run& run_;
    std::string name_;
    std::vector<std::string> columns_;
    json extra_;
    std::ofstream file_;
    std::size_t rows_ = 0;
    int unwinding_ = std::uncaught_exceptions();
};

// ---- subcommands ---------------------------------------------------------------------------

int cmd_phase(Run& run) {
    const auto xis = field_or<std::vector<double>>(run.config, "xi", {}, "config");
    json gc = field_or<json>(run.config, "im_theta_grid", json::object(), "config");
    const auto re = field_or<std::vector<double>>(gc, "re", {-3.0, 3.0}, "im_theta_grid");
    const auto im = field_or<std::vector<double>>(gc, "im", {-3.0, 3.0}, "im_theta_grid");
    const int n = field_or<int>(gc, "n", 61, "im_theta_grid");
    if (re.size() != 2 || im.size() != 2 || n < 2 || n > 4001)
        throw ConfigError("im_theta_grid: 're' and 'im' are [lo, hi] and 2 <= n <= 4001");

    CsvWriter pts(run, "stationary_points", {"xi", "region", "k", "xi_k", "theta2", "eta"});
    CsvWriter counts(run, "point_counts", {"xi", "region", "count"});
    CsvWriter grid(run, "im_theta", {"xi", "re_z", "im_z", "im_theta"});
    for (double xi : xis) {
        auto P = stationary_points(xi);
        counts.row({num(xi), region_name(P.region), std::to_string(P.points.size())});
        for (std::size_t k = 0; k < P.points.size(); ++k)
            pts.row({num(xi), region_name(P.region), std::to_string(k + 1), num(P.points[k]), num(P.theta_second[k]),
                     std::to_string(P.eta_signs[k])});
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double x = re[0] + (re[1] - re[0]) * a / (n - 1), y = im[0] + (im[1] - im[0]) * b / (n - 1);
                const cplx z(x, y);
                const double v = std::abs(z) < 1e-12 || std::abs(z * z + 1.0) < 1e-12
                                     ? std::numeric_limits<double>::quiet_NaN()
                                     : im_theta(z, xi);
                grid.row({num(xi), num(x), num(y), num(v)});
            }
        log_debug("xi = {}: {} points", xi, P.points.size());
    }
    log_info("phase: {} xi values", xis.size());
    return 0;
}

int cmd_scatter(Run& run) {
    const Grid g = read_grid(run.config, 30.0, 2048);
    const int nz = field_or<int>(run.config, "nz", 512, "config");
    if (nz < 8 || nz % 4 != 0 || nz > (1 << 16)) throw ConfigError("nz must be a multiple of 4 in [8, 65536]");
    auto D = precompute_geometry(datum_samples(run.config, g), g.L, g.N);
    auto T = scattering_coeffs(D, nz, run.threads);
    const cplx ai = scatter_at(D, kI).a;
    json extra;
    extra["g"] = cjson(D.g);
    extra["K"] = D.K;
    extra["alpha_cap"] = T.alpha_cap;
    extra["a_at_i"] = cjson(ai);
    CsvWriter w(run, "scatter", {"phi", "z", "re_a", "im_a", "re_b", "im_b", "re_r", "im_r"}, extra);
    for (std::size_t j = 0; j < T.z.size(); ++j)
        w.row({num(T.phi[j]), num(T.z[j]), num(T.a[j].real()), num(T.a[j].imag()), num(T.b[j].real()),
               num(T.b[j].imag()), num(T.r[j].real()), num(T.r[j].imag())});
    log_info("scatter: {} samples, g = {}i, K = {}", T.z.size(), D.g.imag(), D.K);
    return 0;
}

SearchBox read_box(const json& c) {
    SearchBox b;
    if (!c.contains("box")) return b;
    const json& j = c["box"];
    b.re0 = field_or<double>(j, "re0", b.re0, "box");
    b.re1 = field_or<double>(j, "re1", b.re1, "box");
    b.im0 = field_or<double>(j, "im0", b.im0, "box");
    b.im1 = field_or<double>(j, "im1", b.im1, "box");
    if (!(b.re0 < b.re1) || !(0.0 < b.im0 && b.im0 < b.im1)) throw ConfigError("box: need re0 < re1 and 0 < im0 < im1");
    return b;
}

int cmd_spectrum(Run& run) {
    const Grid g = read_grid(run.config, 30.0, 2048);
    const SearchBox box = read_box(run.config);
    auto D = precompute_geometry(datum_samples(run.config, g), g.L, g.N);
    const int winding = winding_number(D, box);
    auto S = find_discrete_spectrum(D, box);
    json extra;
    extra["winding_number"] = winding;
    CsvWriter w(run, "spectrum", {"re_pole", "im_pole", "re_norming", "im_norming"}, extra);
    for (std::size_t k = 0; k < S.poles.size(); ++k)
        w.row({num(S.poles[k].real()), num(S.poles[k].imag()), num(S.norming[k].real()), num(S.norming[k].imag())});
    log_info("spectrum: winding {}, {} poles", winding, S.poles.size());
    return 0;
}

std::vector<double> time_list(const json& c, const std::string& key) {
    auto ts = field<std::vector<double>>(c, key, "config");
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (!std::isfinite(ts[k]) || ts[k] < 0.0) throw ConfigError(fmt::format("{}[{}] must be finite and >= 0", key, k));
        if (k && ts[k] <= ts[k - 1]) throw ConfigError(key + " must be strictly increasing");
    }
    return ts;
}

void write_profile(const Run& run, const std::string& name, const std::vector<double>& x, const std::vector<cplx>& u,
                   json extra) {
    CsvWriter w(run, name, {"x", "re_u", "im_u", "abs_u"}, std::move(extra));
    for (std::size_t j = 0; j < x.size(); ++j)
        w.row({num(x[j]), num(u[j].real()), num(u[j].imag()), num(std::abs(u[j]))});
}

int cmd_soliton(Run& run) {
    const Grid g = read_grid(run.config, 40.0, 1024);
    auto d = soliton_data(field<json>(run.config, "soliton", "config"), "soliton");
    const auto ts = time_list(run.config, "t");
    for (std::size_t k = 0; k < ts.size(); ++k) {
        auto P = soliton_on_grid(d, ts[k], g.L, g.N);
        json extra;
        extra["t"] = ts[k];
        extra["g_tilde"] = cjson(P.g_tilde);
        write_profile(run, fmt::format("soliton_t{:03d}", k), P.x, P.u, extra);
    }
    log_info("soliton: {} poles, {} slices", d.poles.size(), ts.size());
    return 0;
}

int cmd_simulate(Run& run) {
    const Grid g = read_grid(run.config, 40.0, 1024);
    const auto ts = time_list(run.config, "t");
    Simulator S(g.L, g.N);
    const double dt = field_or<double>(run.config, "dt", 0.25 * S.dx(), "config");
    positive(dt, "dt");
    if (dt > 0.25 * S.dx()) throw ConfigError(fmt::format("dt must be <= 0.25 dx = {}", 0.25 * S.dx()));
    S.edge_tolerance = positive(field_or<double>(run.config, "edge_tolerance", S.edge_tolerance, "config"), "edge_tolerance");
    auto init = S.snapshot_from_u(datum_samples(run.config, g));
    std::vector<double> save;
    for (double t : ts)
        if (t > 0.0) save.push_back(t);
    auto tr = save.empty() ? Trajectory{{init}, {phase_functional(init.m, g.L)}, 0.0, 0, dt} : S.evolve(init, dt, save);
    std::size_t q = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const auto& snap = ts[k] > 0.0 ? tr.snapshots[++q] : tr.snapshots[0];
        const cplx gk = ts[k] > 0.0 ? tr.g[q] : tr.g[0];
        json extra;
        extra["t"] = ts[k];
        extra["g"] = cjson(gk);
        extra["g_drift"] = std::abs(gk - tr.g[0]);
        extra["dt"] = dt;
        extra["max_edge_ratio"] = tr.max_edge_ratio;
        write_profile(run, fmt::format("simulate_t{:03d}", k), snap.x, snap.u, extra);
    }
    log_info("simulate: {} steps, edge ratio {:.2e}", tr.steps, tr.max_edge_ratio);
    return 0;
}

// Reads a scatter CSV and its manifest back into a table.
SpectralTable read_scatter(const fs::path& csv, cplx& g) {
    fs::path man = csv;
    man.replace_extension(".json");
    std::ifstream mj(man);
    if (!mj) throw ConfigError(fmt::format("missing manifest '{}' (run the scatter command first)", man.string()));
    json m;
    try {
        m = json::parse(mj);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: {}", man.string(), e.what()));
    }
    auto gv = field<std::vector<double>>(m, "g", man.string());
    g = cplx(gv.at(0), gv.at(1));
    SpectralTable T;
    T.alpha_cap = field<double>(m, "alpha_cap", man.string());
    std::ifstream in(csv);
    if (!in) throw ConfigError(fmt::format("missing input '{}'", csv.string()));
    std::string line;
    std::getline(in, line);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
        if (v.size() != 8) throw ConfigError(fmt::format("{}:{}: expected 8 columns", csv.string(), lineno));
        T.phi.push_back(v[0]);
        T.z.push_back(v[1]);
        T.a.emplace_back(v[2], v[3]);
        T.b.emplace_back(v[4], v[5]);
        T.r.emplace_back(v[6], v[7]);
    }
    if (T.z.size() < 8 || T.z.size() % 4 != 0) throw ConfigError(csv.string() + ": table size must be a multiple of 4");
    return T;
}

DiscreteSpectrum read_spectrum(const fs::path& csv) {
    std::ifstream in(csv);
    if (!in) throw ConfigError(fmt::format("missing input '{}'", csv.string()));
    DiscreteSpectrum S;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
        if (v.size() != 4) throw ConfigError(csv.string() + ": expected 4 columns");
        S.poles.emplace_back(v[0], v[1]);
        S.norming.emplace_back(v[2], v[3]);
    }
    return S;
}

int cmd_asym(Run& run) {
    const auto& c = run.config;
    cplx g = 0.0;
    auto table = read_scatter(resolve(run, field<std::string>(c, "scatter", "config")), g);
    AsymptoticInputs in;
    ReflectionInterpolant r(table);
    in.r = [r](double s) { return r(s); };
    in.nu = NuProfile::from_table(table);
    in.g = g;
    if (c.contains("spectrum")) in.spectrum = read_spectrum(resolve(run, field<std::string>(c, "spectrum", "config")));
    in.delta0 = positive(field_or<double>(c, "delta0", 0.1, "config"), "delta0");
    const auto conv_name = field_or<std::string>(c, "convention", "derived", "config");
    if (conv_name != "derived" && conv_name != "literal") throw ConfigError("convention must be 'derived' or 'literal'");
    const Convention conv = conv_name == "derived" ? Convention::Derived : Convention::Literal;
    const auto ts = time_list(c, "t");
    const auto xis = field<std::vector<double>>(c, "xi", "config");

    json factors = json::array();
    CsvWriter w(run, "asym",
                {"t", "xi", "y", "x", "re_u", "im_u", "abs_u", "region", "re_k11", "im_k11", "re_k12", "im_k12", "re_T_i",
                 "im_T_i"});
    for (double t : ts) {
        if (!(t > 0.0)) throw ConfigError("asym: times must be positive");
        for (double xi : xis) {
            auto L = u_leading(xi * t, t, in, conv);
            const auto& T = L.term;
            w.row({num(t), num(xi), num(xi * t), num(L.x), num(L.u.real()), num(L.u.imag()), num(std::abs(L.u)),
                   region_name(T.region), num(T.k.k11.real()), num(T.k.k11.imag()), num(T.k.k12.real()),
                   num(T.k.k12.imag()), num(T.T_at_i.real()), num(T.T_at_i.imag())});
            json f;
            f["t"] = t;
            f["xi"] = xi;
            f["T_at_i"] = cjson(T.T_at_i);
            f["Sigma0"] = cjson(T.Sigma0);
            json pts = json::array();
            for (const auto& q : T.local.points)
                pts.push_back({{"xi_k", q.xi_k}, {"nu", q.nu}, {"T_k", cjson(q.T_k)}});
            f["points"] = pts;
            factors.push_back(f);
        }
    }
    w.extra()["scalar_factor"] = factors;
    w.extra()["convention"] = conv_name;
    log_info("asym: {} rows", ts.size() * xis.size());
    return 0;
}

int cmd_validate(Run& run) {
    AcceptanceOptions opt;
    opt.threads = run.threads;
    opt.seed = run.seed;
    opt.only = field_or<std::vector<int>>(run.config, "criteria", {}, "config");
    for (int id : opt.only)
        if (id < 1 || id > 8) throw ConfigError(fmt::format("criteria: {} is not in 1..8", id));
    auto results = run_acceptance(opt);
    json report = json::array();
    bool ok = true;
    {
        CsvWriter w(run, "validate", {"criterion", "name", "pass", "quantity", "value"});
        for (const auto& r : results) {
            std::cout << format_result(r) << std::endl;
            ok = ok && r.pass;
            for (const auto& [k, v] : r.values) w.row({std::to_string(r.id), r.name, r.pass ? "1" : "0", k, num(v)});
            report.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"measured", r.measured},
                              {"bound", r.bound}});
        }
        w.extra()["report"] = report;
    }
    return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering, solitons, simulation and long-time asymptotics for the complex cubic Camassa-Holm equation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Run run;
    std::string config, out = "out";
    struct Cmd {
        const char* name;
        const char* help;
        int (*fn)(Run&);
        bool needs_config;
    };
    const Cmd cmds[] = {
        {"phase", "stationary points, theta'' and eta per xi, and Im theta sign-chart grids", cmd_phase, true},
        {"scatter", "scattering coefficients a, b, r of an initial datum", cmd_scatter, true},
        {"spectrum", "discrete spectrum and norming constants", cmd_spectrum, true},
        {"soliton", "reflectionless solutions on a grid", cmd_soliton, true},
        {"asym", "leading-order asymptotics from a scatter table", cmd_asym, true},
        {"simulate", "pseudospectral time evolution", cmd_simulate, true},
        {"validate", "run the acceptance suite", cmd_validate, false},
    };
    std::vector<std::pair<CLI::App*, const Cmd*>> subs;
    for (const auto& c : cmds) {
        auto* s = app.add_subcommand(c.name, c.help);
        auto* o = s->add_option("--config", config, "JSON config with \"schema\": 1");
        if (c.needs_config) o->required()->check(CLI::ExistingFile);
        s->add_option("--out", out, "output directory")->capture_default_str();
        s->add_option("--threads", run.threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
        s->add_option("--seed", run.seed, "seed for random sweeps")->capture_default_str();
        subs.emplace_back(s, &c);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (auto [s, c] : subs) {
            if (!s->parsed()) continue;
            run.command = c->name;
            run.out = out;
            if (!config.empty()) {
                run.config_path = config;
                run.config = load_config(config);
            } else {
                run.config = json{{"schema", kSchema}};
            }
            return c->fn(run);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
