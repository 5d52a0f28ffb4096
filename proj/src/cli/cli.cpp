#include "dtc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtc/errors.hpp"
#include "dtc/gauss_oracle.hpp"
#include "dtc/mac_regions.hpp"
#include "dtc/rate_core.hpp"
#include "dtc/timeshare.hpp"

namespace dtc::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct Flag {
    const char* key;
    const char* help;
};

constexpr Flag kCommon[] = {
    {"units", "bits|nats"},
    {"format", "csv|json"},
    {"out", "output path (default stdout)"},
    {"seed", "u64 seed"},
};

std::vector<Flag> flags_for(std::string_view cmd)
{
    std::vector<Flag> f(std::begin(kCommon), std::end(kCommon));
    if (cmd == "single-user") {
        f.insert(f.end(), {{"p", "single transmit power"},
                           {"p-range", "lo:hi for the log-spaced sweep"},
                           {"points", "sweep points"},
                           {"ps", "interference power (default 100)"},
                           {"pz", "noise power"},
                           {"grid", "time-sharing grid points per axis"}});
    } else if (cmd == "mac-dtc" || cmd == "jdpt") {
        f.insert(f.end(), {{"p1", "power of transmitter 1"},
                           {"p2", "power of transmitter 2"},
                           {"ps", "interference power (required)"},
                           {"pz", "noise power"},
                           {"grid", "coefficient grid points per axis"},
                           {"r1-points", "R1 grid points"}});
        if (cmd == "jdpt")
            f.insert(f.end(), {{"alpha-bracket", "lo:hi search range of alpha"},
                               {"alpha-points", "alpha grid points"}});
    } else if (cmd == "verify") {
        f.insert(f.end(), {{"p", "power for the property checks (default 100)"},
                           {"ps", "interference power for the property checks (default 100)"},
                           {"pz", "noise power for the property checks"},
                           {"trials", "random draws per oracle suite"},
                           {"triple-trials", "random Gaussian triples"},
                           {"mc-samples", "Monte Carlo samples per construction"}});
    }
    return f;
}

double parse_double(const std::string& key, const ojson& v)
{
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) throw ParameterError("'" + key + "' must be a number");
    const std::string s = v.get<std::string>();
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParameterError("'" + key + "' must be a number, got '" + s + "'");
    return out;
}

long long parse_integer(const std::string& key, const ojson& v)
{
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == std::floor(d) && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        long long out = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return out;
    }
    throw ParameterError("'" + key + "' must be an integer");
}

int parse_count(const std::string& key, const ojson& v)
{
    const long long n = parse_integer(key, v);
    if (n < 0 || n > 100000000) throw ParameterError("'" + key + "' out of range");
    return static_cast<int>(n);
}

std::uint64_t parse_seed(const ojson& v)
{
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return out;
    }
    throw ParameterError("'seed' must be an unsigned 64-bit integer");
}

std::pair<double, double> parse_pair(const std::string& key, const ojson& v)
{
    if (v.is_array() && v.size() == 2) return {parse_double(key, v[0]), parse_double(key, v[1])};
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto colon = s.find(':');
        if (colon != std::string::npos)
            return {parse_double(key, s.substr(0, colon)), parse_double(key, s.substr(colon + 1))};
    }
    throw ParameterError("'" + key + "' must be lo:hi");
}

std::string parse_string(const std::string& key, const ojson& v)
{
    if (!v.is_string()) throw ParameterError("'" + key + "' must be a string");
    return v.get<std::string>();
}

RunConfig config_from_object(const std::string& command, const ojson& obj)
{
    if (!obj.is_object()) throw ParameterError("config must be a JSON object");
    RunConfig cfg;
    cfg.command = command;
    const auto allowed = flags_for(command);
    for (const auto& [key, v] : obj.items()) {
        if (key == "command") {
            if (!v.is_string() || v.get<std::string>() != command)
                throw ParameterError("config command does not match '" + command + "'");
            continue;
        }
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const Flag& f) { return key == f.key; });
        if (!known) throw ParameterError("unknown key '" + key + "' for " + command);

        if (key == "p") cfg.p = parse_double(key, v);
        else if (key == "p-range") std::tie(cfg.p_lo, cfg.p_hi) = parse_pair(key, v);
        else if (key == "points") cfg.points = parse_count(key, v);
        else if (key == "p1") cfg.p1 = parse_double(key, v);
        else if (key == "p2") cfg.p2 = parse_double(key, v);
        else if (key == "ps") cfg.ps = parse_double(key, v);
        else if (key == "pz") cfg.pz = parse_double(key, v);
        else if (key == "grid") cfg.grid = parse_count(key, v);
        else if (key == "alpha-bracket") std::tie(cfg.alpha_lo, cfg.alpha_hi) = parse_pair(key, v);
        else if (key == "alpha-points") cfg.alpha_points = parse_count(key, v);
        else if (key == "r1-points") cfg.r1_points = parse_count(key, v);
        else if (key == "units") cfg.unit = parse_unit(parse_string(key, v));
        else if (key == "format") {
            const std::string f = parse_string(key, v);
            if (f == "csv") cfg.format = Format::Csv;
            else if (f == "json") cfg.format = Format::Json;
            else throw ParameterError("unknown format '" + f + "' (expected csv|json)");
        }
        else if (key == "out") cfg.out = parse_string(key, v);
        else if (key == "seed") cfg.seed = parse_seed(v);
        else if (key == "trials") cfg.trials = parse_count(key, v);
        else if (key == "triple-trials") cfg.triple_trials = parse_count(key, v);
        else if (key == "mc-samples") cfg.mc_samples = parse_count(key, v);
    }
    return cfg;
}

void require(bool ok, const std::string& what)
{
    if (!ok) throw ParameterError(what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::vector<double> sweep_powers(const RunConfig& cfg)
{
    if (cfg.p) return {*cfg.p};
    if (cfg.points == 1) return {cfg.p_lo};
    std::vector<double> ps(static_cast<std::size_t>(cfg.points));
    const double a = std::log10(cfg.p_lo);
    const double b = std::log10(cfg.p_hi);
    for (int i = 0; i < cfg.points; ++i) ps[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (cfg.points - 1));
    ps.front() = cfg.p_lo;
    ps.back() = cfg.p_hi;
    return ps;
}

Cell unit_value(const Rate& r, Unit u) { return r.in(u); }

void add_frontier_rows(Table& t, const char* block, const Frontier& f, Unit u)
{
    for (const auto& pt : f.points)
        t.rows.push_back({std::string(block), unit_value(Rate::nats(pt.r1), u), unit_value(Rate::nats(pt.r2), u)});
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c)
{
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return std::to_string(std::get<long long>(c));
}

ojson cell_json(const Cell& c)
{
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return nullptr;
        // Round-trip through the 12-digit text so both formats carry the same value.
        return std::strtod(format_number(*d).c_str(), nullptr);
    }
    return std::get<long long>(c);
}

std::string grid_text(int n) { return std::to_string(n) + "x" + std::to_string(n); }

} // namespace

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string render(const Table& t, Format f)
{
    if (f == Format::Json) {
        ojson meta = ojson::object();
        for (const auto& [k, v] : t.meta) meta[k] = cell_json(v);
        ojson rows = ojson::array();
        for (const auto& r : t.rows) {
            ojson row = ojson::object();
            for (std::size_t i = 0; i < t.columns.size() && i < r.size(); ++i) row[t.columns[i]] = cell_json(r[i]);
            rows.push_back(std::move(row));
        }
        ojson doc = ojson::object();
        doc["meta"] = std::move(meta);
        doc["rows"] = std::move(rows);
        return doc.dump(2) + "\n";
    }

    std::ostringstream os;
    for (const auto& [k, v] : t.meta) os << "# " << k << ": " << cell_text(v) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(r[i]));
        os << "\n";
    }
    return os.str();
}

RunConfig config_from_json(const std::string& command, const std::string& json_text)
{
    ojson obj;
    try {
        obj = ojson::parse(json_text);
    } catch (const ojson::parse_error& e) {
        throw ParameterError(std::string("invalid config JSON: ") + e.what());
    }
    return config_from_object(command, obj);
}

void validate(const RunConfig& cfg)
{
    const std::string& cmd = cfg.command;
    require(cmd == "single-user" || cmd == "mac-dtc" || cmd == "jdpt" || cmd == "verify",
            "unknown command '" + cmd + "'");
    require(std::isfinite(cfg.pz) && cfg.pz > 0.0, "pz must be finite and > 0");
    if (cfg.ps) require(finite_nonneg(*cfg.ps), "ps must be finite and >= 0");

    if (cmd == "single-user") {
        if (cfg.p) {
            require(std::isfinite(*cfg.p) && *cfg.p > 0.0, "p must be finite and > 0");
        } else {
            require(std::isfinite(cfg.p_lo) && cfg.p_lo > 0.0, "p-range lower end must be finite and > 0");
            require(std::isfinite(cfg.p_hi) && cfg.p_hi >= cfg.p_lo, "p-range needs lo <= hi < inf");
            require(cfg.points >= 1, "points must be >= 1");
        }
        if (cfg.grid) require(*cfg.grid >= 2, "grid must be >= 2");
        validate(SingleUserParams{cfg.p.value_or(cfg.p_hi), cfg.ps.value_or(100.0), cfg.pz});
    } else if (cmd == "mac-dtc" || cmd == "jdpt") {
        require(cfg.ps.has_value(), cmd + " requires --ps");
        validate(MacParams{cfg.p1, cfg.p2, *cfg.ps, cfg.pz});
        if (cfg.grid) require(*cfg.grid >= 1, "grid must be >= 1");
        require(cfg.r1_points >= 2, "r1-points must be >= 2");
        if (cmd == "jdpt") {
            require(std::isfinite(cfg.alpha_lo) && std::isfinite(cfg.alpha_hi) && cfg.alpha_lo <= cfg.alpha_hi,
                    "alpha-bracket needs finite lo <= hi");
            require(cfg.alpha_points >= 1, "alpha-points must be >= 1");
        }
    } else {
        validate(SingleUserParams{cfg.p.value_or(100.0), cfg.ps.value_or(100.0), cfg.pz});
        require(cfg.trials >= 1, "trials must be >= 1");
        require(cfg.triple_trials >= 1, "triple-trials must be >= 1");
        require(cfg.mc_samples >= 1000, "mc-samples must be >= 1000");
    }
}

Table single_user_table(const RunConfig& cfg)
{
    validate(cfg);
    const double ps = cfg.ps.value_or(100.0);
    const auto powers = sweep_powers(cfg);
    TimeShareGrid grid;
    if (cfg.grid) grid.points = *cfg.grid;

    const double lo = *std::min_element(powers.begin(), powers.end());
    const double hi = *std::max_element(powers.begin(), powers.end());
    const CompensationTable table(ps, cfg.pz, 1e-6 * std::min(lo, cfg.pz), 1e4 * std::max(hi, cfg.pz), 1.02, grid);

    Table t;
    t.meta = {{"version", std::string(kVersion)},
              {"command", cfg.command},
              {"units", std::string(to_string(cfg.unit))},
              {"ps", ps},
              {"pz", cfg.pz},
              {"p_min", lo},
              {"p_max", hi},
              {"points", static_cast<long long>(powers.size())},
              {"timeshare_grid", grid_text(grid.points)},
              {"timeshare_refinements", static_cast<long long>(grid.refinements)},
              {"timeshare_edge_rounds", static_cast<long long>(grid.edge_rounds)},
              {"c2_table_nodes", static_cast<long long>(table.size())},
              {"c2_table_range", format_number(table.power_lo()) + ":" + format_number(table.power_hi())}};
    t.columns = {"p", "snr_db", "c1", "c2", "c3", "c4", "upper"};
    for (double p : powers) {
        const SingleUserParams prm{p, ps, cfg.pz};
        t.rows.push_back({p, 10.0 * std::log10(p / cfg.pz), unit_value(c1(prm), cfg.unit),
                          unit_value(c2(prm, grid).rate, cfg.unit), unit_value(c3(prm), cfg.unit),
                          unit_value(c4(prm, table, grid).rate, cfg.unit), unit_value(trivial_upper(prm), cfg.unit)});
    }
    return t;
}

Table mac_dtc_table(const RunConfig& cfg)
{
    validate(cfg);
    const MacParams prm{cfg.p1, cfg.p2, *cfg.ps, cfg.pz};
    MacDtcGrid grid;
    if (cfg.grid) grid.beta_points = *cfg.grid;
    grid.r1_points = cfg.r1_points;
    const auto region = mac_dtc_frontier(prm, grid);

    Table t;
    t.meta = {{"version", std::string(kVersion)},
              {"command", cfg.command},
              {"units", std::string(to_string(cfg.unit))},
              {"p1", prm.p1},
              {"p2", prm.p2},
              {"ps", prm.ps},
              {"pz", prm.pz},
              {"beta_grid", grid_text(grid.beta_points)},
              {"r1_points", static_cast<long long>(grid.r1_points)},
              {"pentagons", static_cast<long long>(region.pentagon_count)},
              {"clamped_pentagons", static_cast<long long>(region.clamped_count)}};
    t.columns = {"block", "r1", "r2"};
    add_frontier_rows(t, "frontier", region.frontier, cfg.unit);
    add_frontier_rows(t, "outer", region.outer, cfg.unit);
    return t;
}

Table jdpt_table(const RunConfig& cfg)
{
    validate(cfg);
    const MacParams prm{cfg.p1, cfg.p2, *cfg.ps, cfg.pz};
    JdptGrid grid;
    if (cfg.grid) grid.beta_points = *cfg.grid;
    grid.alpha_lo = cfg.alpha_lo;
    grid.alpha_hi = cfg.alpha_hi;
    grid.alpha_points = cfg.alpha_points;
    grid.r1_points = cfg.r1_points;
    const auto region = jdpt_frontier(prm, grid);

    Table t;
    t.meta = {{"version", std::string(kVersion)},
              {"command", cfg.command},
              {"units", std::string(to_string(cfg.unit))},
              {"p1", prm.p1},
              {"p2", prm.p2},
              {"ps", prm.ps},
              {"pz", prm.pz},
              {"alpha_bracket", format_number(grid.alpha_lo) + ":" + format_number(grid.alpha_hi)},
              {"alpha_points", static_cast<long long>(grid.alpha_points)},
              {"beta_points", static_cast<long long>(grid.beta_points)},
              {"refine_rounds", static_cast<long long>(grid.refine_rounds)},
              {"r1_points", static_cast<long long>(grid.r1_points)},
              {"pentagons", static_cast<long long>(region.pentagon_count)},
              {"clamped_pentagons", static_cast<long long>(region.clamped_count)},
              {"alpha_edge_hits", static_cast<long long>(region.alpha_edge_hits)}};
    if (region.alpha_edge_hits > 0)
        t.meta.push_back({"warning", std::string("frontier optimum on the alpha bracket edge; widen --alpha-bracket")});
    t.columns = {"block", "r1", "r2"};
    add_frontier_rows(t, "frontier", region.frontier, cfg.unit);
    add_frontier_rows(t, "outer", region.outer, cfg.unit);
    return t;
}

Table verify_table(const RunConfig& cfg, bool& all_pass)
{
    validate(cfg);
    const SingleUserParams prm{cfg.p.value_or(100.0), cfg.ps.value_or(100.0), cfg.pz};
    const auto trials = static_cast<std::size_t>(cfg.trials);

    Table t;
    t.meta = {{"version", std::string(kVersion)},
              {"command", cfg.command},
              {"units", std::string("nats")},
              {"seed", std::to_string(cfg.seed)},
              {"trials", static_cast<long long>(cfg.trials)},
              {"triple_trials", static_cast<long long>(cfg.triple_trials)},
              {"mc_samples", static_cast<long long>(cfg.mc_samples)},
              {"p", prm.p},
              {"ps", prm.ps},
              {"pz", prm.pz}};
    t.columns = {"check", "item", "trials", "failures", "worst", "tolerance", "status", "note"};
    all_pass = true;

    const auto row = [&](const std::string& check, const std::string& item, std::size_t n, std::size_t fails,
                         double worst, double tol, bool pass, const std::string& note) {
        t.rows.push_back({check, item, static_cast<long long>(n), static_cast<long long>(fails), worst, tol,
                          std::string(pass ? "pass" : "fail"), note});
        all_pass = all_pass && pass;
    };
    const auto guarded = [&](const std::string& check, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            t.rows.push_back({check, std::string("all"), 0LL, 0LL, std::nan(""), 0.0, std::string("error"),
                              std::string(e.what())});
            all_pass = false;
        }
    };

    for (auto suite : {&verify_c1_suite, &verify_mac_dtc_suite, &verify_jdpt_suite}) {
        guarded("oracle-suite", [&] {
            const SuiteResult r = suite(trials, cfg.seed);
            row(r.name, "all", r.trials, r.failures, r.worst, r.tolerance, r.pass(), r.note);
            for (const auto& [bound, worst] : r.per_bound)
                row(r.name, bound, r.trials, 0, worst, r.tolerance, worst <= r.tolerance, "");
        });
    }

    guarded("linear-input", [&] {
        const LinearInputReport rep = linear_input_check(prm);
        const double bstar = beta_star(prm);
        std::size_t fails = 0;
        for (const auto& r : rep.rows) {
            const double margin = r.mi - r.bound;
            const bool tight = std::abs(margin) <= rep.tolerance;
            const bool should_be_tight = r.density == "gaussian" && r.beta == bstar;
            if (margin > rep.tolerance || tight != should_be_tight) ++fails;
        }
        row("linear-input", "mi <= c1, equality only for gaussian at beta*", rep.rows.size(), fails,
            rep.worst_margin(), rep.tolerance, fails == 0, "");
    });

    guarded("gaussian-triple", [&] {
        const GaussianTripleReport rep =
            gaussian_triple_check(prm, TripleSpec{}, static_cast<std::size_t>(cfg.triple_trials), cfg.seed);
        row("gaussian-triple", "I(U;Y) <= c1", rep.trials, rep.violations, rep.worst_margin, rep.tolerance,
            rep.pass(), "");
    });

    guarded("monte-carlo", [&] {
        for (const auto& m : mc_consistency_check(static_cast<std::size_t>(cfg.mc_samples), cfg.seed)) {
            const double z = m.z();
            row("monte-carlo", m.name, m.estimate.samples, z <= 3.0 ? 0 : 1, z, 3.0, z <= 3.0,
                "worst and tolerance in standard errors");
        }
    });
    return t;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Achievable rates and rate regions for Gaussian dirty-tape channels", "dirtytape"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    const char* commands[][2] = {
        {"single-user", "c1..c4 and the trivial upper bound over a power sweep"},
        {"mac-dtc", "frontier of the two-user causal (dirty tape) MAC region"},
        {"jdpt", "frontier of the mixed noncausal/causal MAC region"},
        {"verify", "closed forms against the Gaussian oracle, property checks, Monte Carlo"},
    };
    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::string> config_path;
    std::vector<std::pair<std::string, CLI::App*>> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        for (const Flag& f : flags_for(name)) sub->add_option(std::string("--") + f.key, values[name][f.key], f.help);
        sub->add_option("--config", config_path[name], "JSON config; flags override its values");
        subs.emplace_back(name, sub);
    }

    std::vector<const char*> argv{"dirtytape"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    std::string command;
    CLI::App* sub = nullptr;
    for (const auto& [name, s] : subs)
        if (s->parsed()) {
            command = name;
            sub = s;
        }

    RunConfig cfg;
    try {
        ojson merged = ojson::object();
        if (const std::string& path = config_path[command]; !path.empty()) {
            std::ifstream in(path);
            if (!in) {
                err << "error: cannot read config file '" << path << "'\n";
                return kIoError;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                merged = ojson::parse(ss.str());
            } catch (const ojson::parse_error& e) {
                throw ParameterError(std::string("invalid config JSON: ") + e.what());
            }
            if (!merged.is_object()) throw ParameterError("config must be a JSON object");
        }
        for (const Flag& f : flags_for(command))
            if (sub->count(std::string("--") + f.key) > 0) merged[f.key] = values[command][f.key];
        cfg = config_from_object(command, merged);
        validate(cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    Table table;
    bool pass = true;
    try {
        if (command == "single-user") table = single_user_table(cfg);
        else if (command == "mac-dtc") table = mac_dtc_table(cfg);
        else if (command == "jdpt") table = jdpt_table(cfg);
        else table = verify_table(cfg, pass);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    const std::string text = render(table, cfg.format);
    if (cfg.out.empty()) {
        out << text;
        out.flush();
        if (!out) return kIoError;
    } else {
        std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
        if (file) file << text;
        file.close();
        if (!file) {
            err << "error: cannot write '" << cfg.out << "'\n";
            return kIoError;
        }
    }
    return pass ? kOk : kVerifyFailed;
}

} // namespace dtc::cli
