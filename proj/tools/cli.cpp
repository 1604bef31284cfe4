#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string_view>
#include <variant>

#include "entropometer/entropy.hpp"
#include "entropometer/error.hpp"
#include "entropometer/extension.hpp"
#include "entropometer/format.hpp"
#include "entropometer/harness.hpp"
#include "entropometer/thermo.hpp"

namespace entropometer::cli {

namespace {

constexpr double kBoltzmannSi = 1.380649e-23;
constexpr int kExitFailure = 1;
constexpr int kExitError = 2;

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ParseError("cannot read " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return value;
}

long long parse_int(std::string_view text, std::string_view what) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError("cannot read " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return value;
}

std::pair<std::string, std::string> split_last(const std::string& text, std::string_view what) {
    const auto pos = text.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == text.size()) {
        throw ParseError("expected " + std::string(what) + ", got '" + text + "'");
    }
    return {text.substr(0, pos), text.substr(pos + 1)};
}

// "a:b:n", linear or geometric.
std::vector<double> parse_grid(const std::string& text, bool logarithmic) {
    const auto [head, count] = split_last(text, "grid a:b:n");
    const auto [a_text, b_text] = split_last(head, "grid a:b:n");
    const double a = parse_double(a_text, "grid start");
    const double b = parse_double(b_text, "grid end");
    const long long n = parse_int(count, "grid size");
    if (n < 1) throw ParseError("grid size must be >= 1");
    if (!std::isfinite(a) || !std::isfinite(b)) throw ParseError("grid bounds must be finite");
    if (logarithmic && !(a > 0.0 && b > 0.0)) throw ParseError("logarithmic grid needs positive bounds");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        grid.push_back(logarithmic ? a * std::pow(b / a, t) : a + (b - a) * t);
    }
    if (n > 1) grid.back() = b;
    return grid;
}

// "<spectrum>:E" or "<spectrum>:beta=x"; the split is at the last colon so builtin
// references and paths keep their own punctuation.
SePoint parse_point(SpectrumLibrary& library, const std::string& text) {
    const auto [ref, value] = split_last(text, "<spectrum>:<energy>");
    const auto& spectrum = library.resolve(ref);
    if (value.rfind("beta=", 0) == 0) {
        return SePoint::at_beta(spectrum, parse_double(value.substr(5), "beta"));
    }
    return SePoint(spectrum, parse_double(value, "energy"));
}

// "triple-point", "<spectrum>:E:Tref", or "<spectrum>:E" for a calibrated scale.
TemperatureScale parse_scale(SpectrumLibrary& library, const std::string& text) {
    if (text == "triple-point") return TemperatureScale::triple_point();
    const auto [head, tail] = split_last(text, "<spectrum>:<energy>[:<Tref>]");
    if (head.find(':') != std::string::npos) {
        return TemperatureScale(parse_point(library, head), parse_double(tail, "reference temperature"));
    }
    return TemperatureScale::calibrated(parse_point(library, text));
}

// ENTROPOMETER_TOL: a bare number sets the quadrature tolerance; otherwise a
// comma-separated list of key=value pairs.
void apply_tolerance_overrides(const char* env, harness::Tolerances& tol, QuadratureConfig& quad) {
    if (env == nullptr || *env == '\0') return;
    const std::string text(env);
    auto positive = [](double v, const std::string& key) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("ENTROPOMETER_TOL: " + key + " must be positive");
        return v;
    };
    if (text.find('=') == std::string::npos) {
        quad.abs_tol = positive(parse_double(text, "ENTROPOMETER_TOL"), "value");
        return;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, end - start);
        start = end + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("ENTROPOMETER_TOL: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const double v = positive(parse_double(item.substr(eq + 1), "ENTROPOMETER_TOL " + key), key);
        if (key == "composition") tol.composition = v;
        else if (key == "shift_invariance") tol.shift_invariance = v;
        else if (key == "derivative_rel") tol.derivative_rel = v;
        else if (key == "reference_rel") tol.reference_rel = v;
        else if (key == "auxiliary") tol.auxiliary = v;
        else if (key == "von_neumann") tol.von_neumann = v;
        else if (key == "nondecrease") tol.nondecrease = v;
        else if (key == "additivity") tol.additivity = v;
        else if (key == "bracket") tol.bracket = v;
        else if (key == "quad_abs") quad.abs_tol = v;
        else if (key == "consistency") quad.consistency_tol = v;
        else throw ConfigError("ENTROPOMETER_TOL: unknown key '" + key + "'");
    }
}

using Cell = std::variant<double, std::int64_t, bool, std::string>;

std::string csv_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

// Rows with a fixed header, written as CSV or as one JSON object per row.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(std::vector<Cell> cells) { rows_.push_back(std::move(cells)); }

    void write(std::ostream& out, bool json) const {
        if (json) {
            for (const auto& r : rows_) {
                JsonLine line;
                for (std::size_t i = 0; i < header_.size(); ++i) {
                    std::visit([&](const auto& v) { line.add(header_[i], v); }, r[i]);
                }
                out << line.str() << '\n';
            }
            return;
        }
        for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
        out << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
            out << '\n';
        }
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

struct Options {
    double kb = 1.0;
    bool si = false;
    std::string format;

    std::string spectrum_file;
    std::string spectrum_other;
    std::string output;

    std::string grid;
    bool log_grid = false;
    bool clip = false;
    double fd_step = FiniteDifference{}.relative_step;

    std::string point_b;
    std::string point_c;
    std::string point;
    std::string ref;
    std::string method = "analytic";

    std::string a0;
    std::string a1;
    std::string a2;
    std::string b_back;
    double sigma = 0.0;
    double sigma_f = 0.0;
    double sigma_b = 0.0;
    double s0 = 0.0;

    std::string graph;
    std::string node;

    std::uint64_t seed = 1;
    std::optional<int> instances;
    bool inject_skew = false;
    bool parallel = false;
};

class Runner {
public:
    Runner(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {
        apply_tolerance_overrides(std::getenv("ENTROPOMETER_TOL"), tol_, quad_);
    }

    bool json(bool default_json) const {
        return opt_.format.empty() ? default_json : opt_.format == "json";
    }

    void record(std::vector<std::pair<std::string, Cell>> fields) {
        std::vector<std::string> header;
        std::vector<Cell> cells;
        for (auto& [k, v] : fields) {
            header.push_back(k);
            cells.push_back(std::move(v));
        }
        Table t(std::move(header));
        t.row(std::move(cells));
        t.write(out_, json(true));
    }

    std::vector<std::pair<std::string, Cell>> spectrum_fields(const EnergySpectrum& s) const {
        const auto window = thermo::entropy_window(s);
        return {{"name", s.name()},
                {"levels", static_cast<std::int64_t>(s.level_count())},
                {"microstates", s.microstate_count()},
                {"E_min", s.ground_energy()},
                {"E_max", s.top_energy()},
                {"E_inf", s.infinite_temperature_energy()},
                {"S_min", opt_.kb * window.lo},
                {"S_max", opt_.kb * window.hi}};
    }

    int spectrum_info() {
        record(spectrum_fields(library_.resolve(opt_.spectrum_file)));
        return 0;
    }

    int spectrum_compose() {
        const auto composite = compose(library_.resolve(opt_.spectrum_file), library_.resolve(opt_.spectrum_other));
        save_spectrum(composite, opt_.output);
        record(spectrum_fields(composite));
        return 0;
    }

    int thermo_table() {
        const auto& s = library_.resolve(opt_.spectrum_file);
        Table t({"beta", "lnZ", "E", "S", "C"});
        for (double beta : parse_grid(opt_.grid, opt_.log_grid)) {
            const auto p = thermo::evaluate(s, beta);
            t.row({p.beta, p.ln_z, p.energy, opt_.kb * p.entropy, opt_.kb * p.heat_capacity});
        }
        t.write(out_, json(false));
        return 0;
    }

    int f11_curve() {
        const auto b = parse_point(library_, opt_.point_b);
        const auto c = parse_point(library_, opt_.point_c);
        const FiniteDifference fd{opt_.fd_step};
        const auto domain = interconnect::f11_domain(b, c);
        Table t({"E_B", "E_C", "df_analytic", "df_fd"});
        for (double e : parse_grid(opt_.grid, false)) {
            if (opt_.clip && !(e > domain.lo && e < domain.hi)) continue;
            t.row({e, interconnect::f11(b, c, e), interconnect::df11(b, c, e, Analytic{}),
                   interconnect::df11(b, c, e, fd)});
        }
        t.write(out_, json(false));
        return 0;
    }

    DerivativeMethod method() const {
        if (opt_.method == "fd") return FiniteDifference{opt_.fd_step};
        return Analytic{};
    }

    int temperature() {
        const auto point = parse_point(library_, opt_.point);
        const auto scale = parse_scale(library_, opt_.ref);
        record({{"T", interconnect::temperature(point, scale, method())},
                {"beta", point.beta()},
                {"T_ref", scale.t_ref()},
                {"method", opt_.method}});
        return 0;
    }

    int process_run() {
        const auto a1 = load_state(opt_.a1);
        const auto a2 = load_state(opt_.a2);
        const auto b = parse_point(library_, opt_.point_b);
        const auto outcome = simulate_standard_process(a1, a2, b, opt_.sigma);
        record({{"E_B1", outcome.e_b_initial},
                {"E_B2", outcome.e_b_final},
                {"sigma", opt_.kb * outcome.sigma},
                {"reversible", outcome.reversible},
                {"delta_S_A", opt_.kb * (vn_entropy(a2) - vn_entropy(a1))}});
        return 0;
    }

    TemperatureScale scale_or_calibrated(const SePoint& b) {
        return opt_.ref.empty() ? TemperatureScale::calibrated(b) : parse_scale(library_, opt_.ref);
    }

    int entropy_diff() {
        const auto a1 = load_state(opt_.a1);
        const auto a2 = load_state(opt_.a2);
        const auto b = parse_point(library_, opt_.point_b);
        const auto m = entropy::entropy_difference(a1, a2, b, scale_or_calibrated(b), quad_);
        record({{"delta_S", opt_.kb * m.delta_s},
                {"E_B1", m.e_b_initial},
                {"E_B2rev", m.e_b_final},
                {"err_estimate", opt_.kb * m.quadrature_error_estimate}});
        return 0;
    }

    int entropy_value() {
        const auto a0 = load_state(opt_.a0);
        const auto a1 = load_state(opt_.a1);
        const auto b = parse_point(library_, opt_.point_b);
        const double s = entropy::entropy_value(a1, a0, opt_.s0 / opt_.kb, b, scale_or_calibrated(b), quad_);
        record({{"S", opt_.kb * s}});
        return 0;
    }

    int entropy_bracket() {
        const auto a1 = load_state(opt_.a1);
        const auto a2 = load_state(opt_.a2);
        const auto b = parse_point(library_, opt_.point_b);
        const auto back = opt_.b_back.empty() ? b : parse_point(library_, opt_.b_back);
        const auto bracket = entropy::irreversible_bound(a1, a2, b, opt_.sigma_f / opt_.kb, back,
                                                         opt_.sigma_b / opt_.kb, scale_or_calibrated(b), quad_);
        record({{"lower", opt_.kb * bracket.lower}, {"upper", opt_.kb * bracket.upper}});
        return 0;
    }

    int extend_range() {
        const auto g = load_graph(opt_.graph);
        const auto r = extension::entropy_range(g, opt_.node);
        record({{"node", opt_.node}, {"low", r.low}, {"high", r.high}, {"in_sigma", g.in_sigma(g.index(opt_.node))}});
        return 0;
    }

    int extend_check() {
        const auto g = load_graph(opt_.graph, false);
        const auto issues = validate(g);
        std::int64_t forbidden = 0;
        std::int64_t undetermined = 0;
        std::vector<std::string> problems;
        for (const auto& issue : issues) problems.push_back(issue.describe());
        if (issues.empty()) {
            for (const auto& x : g.nodes()) {
                for (const auto& y : g.nodes()) {
                    if (x.id == y.id) continue;
                    try {
                        if (extension::assert_nondecrease(g, x.id, y.id) == NondecreaseVerdict::forbidden) {
                            ++forbidden;
                        } else {
                            ++undetermined;
                        }
                    } catch (const InconsistentGraph& ex) {
                        problems.push_back(ex.what());
                    }
                }
            }
        }
        std::string joined;
        for (const auto& p : problems) joined += (joined.empty() ? "" : "; ") + p;
        std::int64_t sigma = 0;
        for (std::size_t i = 0; i < g.size(); ++i) sigma += g.in_sigma(i) ? 1 : 0;
        record({{"nodes", static_cast<std::int64_t>(g.size())},
                {"sigma_nodes", sigma},
                {"forbidden_pairs", forbidden},
                {"undetermined_pairs", undetermined},
                {"consistent", problems.empty()},
                {"issues", joined}});
        return problems.empty() ? 0 : kExitFailure;
    }

    int verify_all() {
        harness::SuiteConfig config;
        config.seed = opt_.seed;
        config.instances = opt_.instances;
        config.tol = tol_;
        config.quad = quad_;
        config.parallel = opt_.parallel;
        if (opt_.inject_skew) config.f11_skew = 1e-3;
        const auto reports = harness::run_suite(config);
        if (!opt_.output.empty()) {
            std::ofstream file(opt_.output);
            if (!file) throw ConfigError("cannot write " + opt_.output);
            file << harness::report_json(config, reports) << '\n';
            if (!file) throw ConfigError("cannot write " + opt_.output);
        }
        Table t({"check", "instances", "max_residual", "tolerance", "pass"});
        for (const auto& r : reports) {
            t.row({r.name, static_cast<std::int64_t>(r.instances), r.max_residual, r.tolerance, r.pass});
        }
        t.write(out_, json(false));
        return harness::all_pass(reports) ? 0 : kExitFailure;
    }

private:
    const Options& opt_;
    std::ostream& out_;
    SpectrumLibrary library_;
    harness::Tolerances tol_;
    QuadratureConfig quad_;
};

std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    while (!text.empty() && text.back() == ' ') text.pop_back();
    return text;
}

// First word that is neither an option, an option value, nor a known
// subcommand at its level.
std::optional<std::string> unknown_command(CLI::App& app, const std::vector<std::string>& args) {
    CLI::App* level = &app;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& word = args[i];
        if (word.rfind("-", 0) == 0) {
            if (word.find('=') == std::string::npos && (word == "--kB" || word == "--format")) ++i;
            continue;
        }
        if (level->get_subcommands({}).empty()) return std::nullopt;
        try {
            level = level->get_subcommand(word);
        } catch (const CLI::OptionNotFound&) {
            return word;
        }
    }
    return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Operational entropy and temperature on discrete spectra", "entropometer"};
    app.require_subcommand(1);
    app.fallthrough();
    auto* kb = app.add_option("--kB", opt.kb, "Boltzmann constant applied to entropy outputs")
                   ->check(CLI::PositiveNumber);
    app.add_flag("--si", opt.si, "Entropies in J/K (kB = 1.380649e-23)")->excludes(kb);
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* spectrum = app.add_subcommand("spectrum", "Inspect and combine spectra")->require_subcommand(1);
    auto* spectrum_info = spectrum->add_subcommand("info", "Summary of a spectrum");
    spectrum_info->add_option("file", opt.spectrum_file, "Spectrum file or @builtin")->required();
    auto* spectrum_compose = spectrum->add_subcommand("compose", "Spectrum of a noninteracting composite");
    spectrum_compose->add_option("a", opt.spectrum_file)->required();
    spectrum_compose->add_option("b", opt.spectrum_other)->required();
    spectrum_compose->add_option("-o,--output", opt.output, "Output spectrum file")->required();

    auto* thermo = app.add_subcommand("thermo", "Canonical thermodynamics")->require_subcommand(1);
    auto* thermo_table = thermo->add_subcommand("table", "beta,lnZ,E,S,C over a beta grid");
    thermo_table->add_option("spectrum", opt.spectrum_file)->required();
    thermo_table->add_option("--beta-grid", opt.grid, "a:b:n")->required();
    thermo_table->add_flag("--log", opt.log_grid, "Geometric grid");

    auto* f11 = app.add_subcommand("f11", "Interconnection function")->require_subcommand(1);
    auto* f11_curve = f11->add_subcommand("curve", "E_B,E_C,df_analytic,df_fd over an E_B grid");
    f11_curve->add_option("--b", opt.point_b, "<spectrum>:E")->required();
    f11_curve->add_option("--c", opt.point_c, "<spectrum>:E")->required();
    f11_curve->add_option("--grid", opt.grid, "a:b:n")->required();
    f11_curve->add_flag("--clip", opt.clip, "Skip grid points outside the f11 domain");
    f11_curve->add_option("--fd-step", opt.fd_step, "Finite-difference step fraction")->check(CLI::PositiveNumber);

    auto* temperature = app.add_subcommand("temperature", "Temperature of a stable-equilibrium point");
    temperature->add_option("--point", opt.point, "<spectrum>:E")->required();
    temperature->add_option("--ref", opt.ref, "<spectrum>:E:Tref or triple-point")->required();
    temperature->add_option("--method", opt.method)->check(CLI::IsMember({"analytic", "fd"}));
    temperature->add_option("--fd-step", opt.fd_step)->check(CLI::PositiveNumber);

    auto* process = app.add_subcommand("process", "Standard weight processes")->require_subcommand(1);
    auto* process_run = process->add_subcommand("run", "Simulate a standard process");
    process_run->add_option("--a1", opt.a1, "Initial state file")->required();
    process_run->add_option("--a2", opt.a2, "Final state file")->required();
    process_run->add_option("--b", opt.point_b, "<spectrum>:E")->required();
    process_run->add_option("--sigma", opt.sigma, "Entropy production")->check(CLI::NonNegativeNumber);

    auto* ent = app.add_subcommand("entropy", "Operational entropy")->require_subcommand(1);
    auto* ent_diff = ent->add_subcommand("diff", "S(a2) - S(a1) along a reversible standard process");
    auto* ent_value = ent->add_subcommand("value", "S(a1) from a reference state a0 with entropy S0");
    auto* ent_bracket = ent->add_subcommand("bracket", "Bounds from two irreversible processes");
    for (auto* sub : {ent_diff, ent_value, ent_bracket}) {
        sub->add_option("--a1", opt.a1, "State file")->required();
        sub->add_option("--b", opt.point_b, "Auxiliary <spectrum>:E")->required();
        sub->add_option("--ref", opt.ref, "<spectrum>:E:Tref or triple-point (default: calibrated on --b)");
    }
    ent_diff->add_option("--a2", opt.a2, "State file")->required();
    ent_value->add_option("--a0", opt.a0, "Reference state file")->required();
    ent_value->add_option("--S0", opt.s0, "Entropy of the reference state");
    ent_bracket->add_option("--a2", opt.a2, "State file")->required();
    ent_bracket->add_option("--b-back", opt.b_back, "Auxiliary for the backward process (default: --b)");
    ent_bracket->add_option("--sigma-f", opt.sigma_f)->required()->check(CLI::NonNegativeNumber);
    ent_bracket->add_option("--sigma-b", opt.sigma_b)->required()->check(CLI::NonNegativeNumber);

    auto* extend = app.add_subcommand("extend", "Entropy outside Sigma")->require_subcommand(1);
    auto* extend_range = extend->add_subcommand("range", "Entropy range of a node");
    extend_range->add_option("graph", opt.graph)->required();
    extend_range->add_option("node", opt.node)->required();
    auto* extend_check = extend->add_subcommand("check", "Validate a graph and its nondecrease verdicts");
    extend_check->add_option("graph", opt.graph)->required();

    auto* verify = app.add_subcommand("verify", "Certification suite")->require_subcommand(1);
    auto* verify_all = verify->add_subcommand("all", "Run every check");
    verify_all->add_option("--seed", opt.seed);
    verify_all->add_option("--instances", opt.instances)->check(CLI::PositiveNumber);
    verify_all->add_option("--out", opt.output, "Report JSON file");
    verify_all->add_flag("--inject-f11-skew", opt.inject_skew, "Skew every f11 evaluation by 1e-3");
    verify_all->add_flag("--parallel", opt.parallel, "Run checks concurrently");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& ex) {
        std::string message = one_line(ex.what());
        if (const auto unknown = unknown_command(app, args)) message = "unknown command '" + *unknown + "'";
        err << "entropometer: error: " << message << '\n';
        return kExitError;
    }
    if (opt.si) opt.kb = kBoltzmannSi;

    try {
        Runner runner(opt, out);
        if (spectrum_info->parsed()) return runner.spectrum_info();
        if (spectrum_compose->parsed()) return runner.spectrum_compose();
        if (thermo_table->parsed()) return runner.thermo_table();
        if (f11_curve->parsed()) return runner.f11_curve();
        if (temperature->parsed()) return runner.temperature();
        if (process_run->parsed()) return runner.process_run();
        if (ent_diff->parsed()) return runner.entropy_diff();
        if (ent_value->parsed()) return runner.entropy_value();
        if (ent_bracket->parsed()) return runner.entropy_bracket();
        if (extend_range->parsed()) return runner.extend_range();
        if (extend_check->parsed()) return runner.extend_check();
        if (verify_all->parsed()) return runner.verify_all();
        err << "entropometer: error: no command\n";
        return kExitError;
    } catch (const std::exception& ex) {
        err << "entropometer: error: " << one_line(ex.what()) << '\n';
        return kExitError;
    }
}

}  // namespace entropometer::cli
