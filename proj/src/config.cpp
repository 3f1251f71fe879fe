#include "pcns/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pcns/csv.hpp"
#include "pcns/errors.hpp"

namespace pcns {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
        throw ConfigError(line, "expected a finite number, got '" + v + "'");
    return d;
}

long parse_long(const std::string& v, int line) {
    errno = 0;
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0' || errno == ERANGE) throw ConfigError(line, "expected an integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(line, "expected true or false, got '" + v + "'");
}

std::vector<Point> parse_seeds(const std::string& v, int line) {
    std::vector<Point> out;
    std::stringstream all(v);
    std::string item;
    while (std::getline(all, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        std::stringstream ss(item);
        std::string a, b, c, extra;
        if (!(ss >> a >> b >> c) || (ss >> extra)) throw ConfigError(line, "seed '" + item + "' is not 'x y z'");
        out.push_back({parse_double(a, line), parse_double(b, line), parse_double(c, line)});
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> m = {
        {"grid.n", [](RunConfig& c, const std::string& v, int l) { c.n = static_cast<int>(parse_long(v, l)); }},
        {"grid.L", [](RunConfig& c, const std::string& v, int l) { c.L = parse_double(v, l); }},
        {"pulse.delta", [](RunConfig& c, const std::string& v, int l) { c.pulse.delta = parse_double(v, l); }},
        {"pulse.alpha", [](RunConfig& c, const std::string& v, int l) { c.pulse.alpha = parse_double(v, l); }},
        {"pulse.gamma", [](RunConfig& c, const std::string& v, int l) { c.pulse.gamma = parse_double(v, l); }},
        {"pulse.mu", [](RunConfig& c, const std::string& v, int l) { c.pulse.mu = parse_double(v, l); }},
        {"pulse.lambda", [](RunConfig& c, const std::string& v, int l) { c.pulse.lambda = parse_double(v, l); }},
        {"pulse.epsilon", [](RunConfig& c, const std::string& v, int l) { c.pulse.epsilon = parse_double(v, l); }},
        {"pulse.phi_amp", [](RunConfig& c, const std::string& v, int l) { c.pulse.phi_amp = parse_double(v, l); }},
        {"pulse.v_amp", [](RunConfig& c, const std::string& v, int l) { c.pulse.v_amp = parse_double(v, l); }},
        {"solver.dt_init", [](RunConfig& c, const std::string& v, int l) { c.solver.dt_init = parse_double(v, l); }},
        {"solver.cfl_safety",
         [](RunConfig& c, const std::string& v, int l) { c.solver.cfl_safety = parse_double(v, l); }},
        {"solver.t_end", [](RunConfig& c, const std::string& v, int l) { c.solver.t_end = parse_double(v, l); }},
        {"solver.dealias", [](RunConfig& c, const std::string& v, int l) { c.solver.dealias = parse_bool(v, l); }},
        {"solver.scheme",
         [](RunConfig& c, const std::string& v, int l) {
             if (v == "explicit_rk4") c.solver.scheme = Scheme::explicit_rk4;
             else if (v == "imex") c.solver.scheme = Scheme::imex;
             else throw ConfigError(l, "scheme must be explicit_rk4 or imex, got '" + v + "'");
         }},
        {"solver.checkpoint_every",
         [](RunConfig& c, const std::string& v, int l) {
             c.solver.checkpoint_every = static_cast<int>(parse_long(v, l));
         }},
        {"solver.diagnostics_every",
         [](RunConfig& c, const std::string& v, int l) {
             c.solver.diagnostics_every = static_cast<int>(parse_long(v, l));
         }},
        {"solver.positivity_floor",
         [](RunConfig& c, const std::string& v, int l) { c.solver.positivity_floor = parse_double(v, l); }},
        {"diagnostics.c1", [](RunConfig& c, const std::string& v, int l) { c.diagnostics.c1 = parse_double(v, l); }},
        {"diagnostics.q", [](RunConfig& c, const std::string& v, int l) { c.diagnostics.q = parse_double(v, l); }},
        {"diagnostics.r", [](RunConfig& c, const std::string& v, int l) { c.diagnostics.r = parse_double(v, l); }},
        {"diagnostics.besov_every",
         [](RunConfig& c, const std::string& v, int l) {
             c.diagnostics.besov_every = static_cast<int>(parse_long(v, l));
         }},
        {"tracking.seeds", [](RunConfig& c, const std::string& v, int l) { c.seeds = parse_seeds(v, l); }},
        {"tracking.tau", [](RunConfig& c, const std::string& v, int l) { c.tau = parse_double(v, l); }},
        {"tracking.every", [](RunConfig& c, const std::string& v, int l) { c.track_every = parse_long(v, l); }},
        {"output.dir",
         [](RunConfig& c, const std::string& v, int l) {
             if (v.empty()) throw ConfigError(l, "output.dir must not be empty");
             c.output_dir = v;
         }},
    };
    return m;
}

} // namespace

void RunConfig::validate() const {
    try {
        grid();
        pulse.validate();
        solver.validate();
    } catch (const InputError& e) {
        throw ConfigError(0, e.what());
    }
    if (!(diagnostics.c1 > 0.0)) throw ConfigError(0, "diagnostics.c1 must be positive");
    if (!(diagnostics.q >= 1.0)) throw ConfigError(0, "diagnostics.q must be >= 1");
    if (!(diagnostics.r > 0.0)) throw ConfigError(0, "diagnostics.r must be positive");
    if (diagnostics.besov_every < 0) throw ConfigError(0, "diagnostics.besov_every must be >= 0");
    if (track_every < 1) throw ConfigError(0, "tracking.every must be >= 1");
    if (!(tau >= 0.0)) throw ConfigError(0, "tracking.tau must be >= 0");
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(line, "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(line, "repeated key '" + key + "'");
        it->second(c, value, line);
    }
    c.validate();
    return c;
}

RunConfig read_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot read config " + path.string());
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const RunConfig& c) {
    std::ostringstream os;
    auto d = [](double v) { return format_double(v); };
    os << "# pulse_cns run configuration\n"
       << "grid.n = " << c.n << "\n"
       << "grid.L = " << d(c.L) << "\n\n"
       << "pulse.delta = " << d(c.pulse.delta) << "\n"
       << "pulse.alpha = " << d(c.pulse.alpha) << "\n"
       << "pulse.gamma = " << d(c.pulse.gamma) << "\n"
       << "pulse.mu = " << d(c.pulse.mu) << "\n"
       << "pulse.lambda = " << d(c.pulse.lambda) << "\n"
       << "pulse.epsilon = " << d(c.pulse.epsilon) << "\n"
       << "pulse.phi_amp = " << d(c.pulse.phi_amp) << "\n"
       << "pulse.v_amp = " << d(c.pulse.v_amp) << "\n\n"
       << "solver.dt_init = " << d(c.solver.dt_init) << "\n"
       << "solver.cfl_safety = " << d(c.solver.cfl_safety) << "\n"
       << "solver.t_end = " << d(c.solver.t_end) << "\n"
       << "solver.dealias = " << (c.solver.dealias ? "true" : "false") << "\n"
       << "solver.scheme = " << (c.solver.scheme == Scheme::imex ? "imex" : "explicit_rk4") << "\n"
       << "solver.checkpoint_every = " << c.solver.checkpoint_every << "\n"
       << "solver.diagnostics_every = " << c.solver.diagnostics_every << "\n"
       << "solver.positivity_floor = " << d(c.solver.positivity_floor) << "\n\n"
       << "diagnostics.c1 = " << d(c.diagnostics.c1) << "\n"
       << "diagnostics.q = " << d(c.diagnostics.q) << "\n"
       << "diagnostics.r = " << d(c.diagnostics.r) << "\n"
       << "diagnostics.besov_every = " << c.diagnostics.besov_every << "\n\n";
    if (!c.seeds.empty()) {
        os << "tracking.seeds = ";
        for (std::size_t i = 0; i < c.seeds.size(); ++i)
            os << (i ? "; " : "") << d(c.seeds[i][0]) << " " << d(c.seeds[i][1]) << " " << d(c.seeds[i][2]);
        os << "\n";
    }
    os << "tracking.tau = " << d(c.tau) << "\n"
       << "tracking.every = " << c.track_every << "\n\n"
       << "output.dir = " << c.output_dir.string() << "\n";
    return os.str();
}

} // namespace pcns
