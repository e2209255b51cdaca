#include "qburgers/config.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qburgers/errors.hpp"
#include "qburgers/io.hpp"
#include "qburgers/rng.hpp"

namespace qburgers {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

/// Cuts an unquoted trailing comment: '#' or ';' at line start or after
/// whitespace (so paths like "out#1" survive, which nobody should use
/// anyway).
std::string strip_comment(const std::string& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((s[i] == '#' || s[i] == ';') &&
            (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t'))
            return s.substr(0, i);
    }
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
    if (!parts.empty() && parts.back().empty()) parts.pop_back();
    return parts;
}

/// key = value sections -> the same JSON tree the native JSON form parses
/// to, with every leaf still a string (coercion happens during extraction).
nlohmann::json parse_sections(std::istream& in) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* section = &root;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = &root;
            for (const auto& part : split(line.substr(1, line.size() - 2), '.'))
                section = &(*section)[part];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (key == "rho_vecs") {
            // groups split on ';', components on ','
            nlohmann::json vecs = nlohmann::json::array();
            for (const auto& group : split(value, ';'))
                vecs.push_back(split(group, ','));
            (*section)[key] = vecs;
        } else if (value.find(',') != std::string::npos) {
            (*section)[key] = split(value, ',');
        } else {
            (*section)[key] = value;
        }
    }
    return root;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "': " + why);
}

double as_double(const nlohmann::json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        try {
            std::size_t used = 0;
            const double x = std::stod(s, &used);
            if (trim(s.substr(used)).empty()) return x;
        } catch (const std::exception&) {
        }
        bad_key(key, "not a number: '" + s + "'");
    }
    bad_key(key, "expected a number");
}

long long as_int(const nlohmann::json& v, const std::string& key) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        try {
            std::size_t used = 0;
            const long long x = std::stoll(s, &used);
            if (trim(s.substr(used)).empty()) return x;
        } catch (const std::exception&) {
        }
        bad_key(key, "not an integer: '" + s + "'");
    }
    bad_key(key, "expected an integer");
}

std::uint64_t as_u64(const nlohmann::json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const long long x = v.get<long long>();
        if (x < 0) bad_key(key, "seed must be non-negative");
        return static_cast<std::uint64_t>(x);
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        try {
            std::size_t used = 0;
            const std::uint64_t x = std::stoull(s, &used);
            if (trim(s.substr(used)).empty()) return x;
        } catch (const std::exception&) {
        }
        bad_key(key, "not a 64-bit seed: '" + s + "'");
    }
    bad_key(key, "expected a 64-bit seed");
}

std::string as_string(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    bad_key(key, "expected a string");
}

std::vector<double> as_double_list(const nlohmann::json& v, const std::string& key) {
    std::vector<double> out;
    if (v.is_array())
        for (const auto& e : v) out.push_back(as_double(e, key));
    else
        out.push_back(as_double(v, key));
    return out;
}

std::vector<long long> as_int_list(const nlohmann::json& v, const std::string& key) {
    std::vector<long long> out;
    if (v.is_array())
        for (const auto& e : v) out.push_back(as_int(e, key));
    else
        out.push_back(as_int(v, key));
    return out;
}

/// Rejects keys the schema does not know; typos must not silently fall
/// back to defaults.
void check_keys(const nlohmann::json& block, const std::set<std::string>& known,
                const std::string& where) {
    if (!block.is_object()) throw ConfigError("config block '" + where + "' must be a table");
    for (const auto& [k, _] : block.items())
        if (!known.count(k))
            throw ConfigError("config block '" + where + "': unknown key '" + k + "'");
}

const nlohmann::json kEmpty = nlohmann::json::object();

const nlohmann::json& sub(const nlohmann::json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? kEmpty : *it;
}

} // namespace

std::vector<std::vector<long long>> RunConfig::sweep_for_order(int n) const {
    std::vector<std::vector<long long>> out;
    for (const auto& v : pipeline.rho_vecs)
        if (static_cast<int>(v.size()) == n - 1) out.push_back(v);
    for (long long r : pipeline.rhos) {
        std::vector<long long> vec(static_cast<std::size_t>(n - 1));
        for (int i = 0; i < n - 1; ++i) vec[static_cast<std::size_t>(i)] = (i + 1) * r;
        out.push_back(std::move(vec));
    }
    if (out.empty()) out.emplace_back(static_cast<std::size_t>(n - 1), 0);
    return out;
}

std::vector<double> RunConfig::taus_grid() const {
    std::vector<double> out = pipeline.taus;
    if (pipeline.tau_unit == TauUnit::Domain) {
        const double scale = static_cast<double>(grid.N_x) * static_cast<double>(grid.N_x);
        for (double& t : out) t *= scale;
    }
    return out;
}

std::vector<double> RunConfig::taus_domain() const {
    std::vector<double> out = pipeline.taus;
    if (pipeline.tau_unit == TauUnit::Grid) {
        const double scale = static_cast<double>(grid.N_x) * static_cast<double>(grid.N_x);
        for (double& t : out) t /= scale;
    }
    return out;
}

RunConfig config_from_json(const nlohmann::json& j) {
    check_keys(j, {"grid", "physics", "ic", "pipeline", "readout", "ensemble", "output",
                   "max_qubits"},
               "<top>");
    RunConfig cfg;

    // --- grid ---
    {
        const auto& g = sub(j, "grid");
        check_keys(g, {"n_x", "L", "bc"}, "grid");
        int n_x = 7;
        double L = 1.0;
        BoundaryCondition bc = BoundaryCondition::Periodic;
        if (g.contains("n_x")) n_x = static_cast<int>(as_int(g["n_x"], "grid.n_x"));
        if (g.contains("L")) L = as_double(g["L"], "grid.L");
        if (g.contains("bc")) {
            const std::string s = as_string(g["bc"], "grid.bc");
            if (s == "periodic")
                bc = BoundaryCondition::Periodic;
            else if (s == "dirichlet")
                bc = BoundaryCondition::Dirichlet;
            else
                bad_key("grid.bc", "must be 'periodic' or 'dirichlet'");
        }
        try {
            cfg.grid = GridSpec::make(n_x, L, bc);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config block 'grid': ") + e.what());
        }
    }

    // --- physics ---
    {
        const auto& p = sub(j, "physics");
        check_keys(p, {"nu"}, "physics");
        if (p.contains("nu")) cfg.physics.nu = as_double(p["nu"], "physics.nu");
        if (!(cfg.physics.nu > 0.0)) bad_key("physics.nu", "must be positive");
    }

    // --- ic (exactly one variant) ---
    {
        const auto& ic = sub(j, "ic");
        check_keys(ic, {"random", "plane_wave", "file"}, "ic");
        const int present = static_cast<int>(ic.contains("random")) +
                            static_cast<int>(ic.contains("plane_wave")) +
                            static_cast<int>(ic.contains("file"));
        if (present != 1)
            throw ConfigError("config block 'ic': exactly one of random / plane_wave / "
                              "file must be present");
        if (ic.contains("random")) {
            const auto& r = ic["random"];
            check_keys(r, {"sigma_xi", "j_max", "seed"}, "ic.random");
            cfg.ic.kind = IcKind::Random;
            if (r.contains("sigma_xi"))
                cfg.ic.random.sigma_xi = as_double(r["sigma_xi"], "ic.random.sigma_xi");
            if (r.contains("j_max"))
                cfg.ic.random.j_max = static_cast<int>(as_int(r["j_max"], "ic.random.j_max"));
            if (r.contains("seed")) cfg.ic.random.seed = as_u64(r["seed"], "ic.random.seed");
            if (!(cfg.ic.random.sigma_xi >= 0.0))
                bad_key("ic.random.sigma_xi", "must be non-negative");
            if (cfg.ic.random.j_max < 1) bad_key("ic.random.j_max", "must be >= 1");
        } else if (ic.contains("plane_wave")) {
            const auto& p = ic["plane_wave"];
            check_keys(p, {"delta_m", "m"}, "ic.plane_wave");
            cfg.ic.kind = IcKind::PlaneWave;
            if (p.contains("delta_m"))
                cfg.ic.plane_wave.delta_m = as_double(p["delta_m"], "ic.plane_wave.delta_m");
            if (p.contains("m"))
                cfg.ic.plane_wave.m = static_cast<int>(as_int(p["m"], "ic.plane_wave.m"));
            if (!(std::abs(cfg.ic.plane_wave.delta_m) < 1.0))
                bad_key("ic.plane_wave.delta_m", "must satisfy |delta_m| < 1");
            if (cfg.ic.plane_wave.m < 1 ||
                static_cast<std::size_t>(cfg.ic.plane_wave.m) * 2 >= cfg.grid.N_x)
                bad_key("ic.plane_wave.m", "must satisfy 1 <= m < N_x / 2");
        } else {
            const auto& f = ic["file"];
            cfg.ic.kind = IcKind::File;
            if (f.is_string()) {
                cfg.ic.file_path = f.get<std::string>();
            } else {
                check_keys(f, {"path"}, "ic.file");
                if (!f.contains("path")) bad_key("ic.file.path", "missing");
                cfg.ic.file_path = as_string(f["path"], "ic.file.path");
            }
            if (!std::filesystem::exists(cfg.ic.file_path))
                bad_key("ic.file.path", "no such file: " + cfg.ic.file_path);
        }
    }

    // --- pipeline ---
    {
        const auto& p = sub(j, "pipeline");
        check_keys(p, {"taus", "ns", "m", "rhos", "rho_vecs", "tau_unit", "n_seeds"},
                   "pipeline");
        if (p.contains("taus")) cfg.pipeline.taus = as_double_list(p["taus"], "pipeline.taus");
        if (cfg.pipeline.taus.empty()) bad_key("pipeline.taus", "must be non-empty");
        for (double t : cfg.pipeline.taus)
            if (!(t >= 0.0)) bad_key("pipeline.taus", "entries must be >= 0");
        if (p.contains("ns")) {
            cfg.pipeline.ns.clear();
            for (long long n : as_int_list(p["ns"], "pipeline.ns")) {
                if (n < 2) bad_key("pipeline.ns", "orders must be >= 2");
                cfg.pipeline.ns.push_back(static_cast<int>(n));
            }
        }
        if (p.contains("m")) cfg.pipeline.m = static_cast<int>(as_int(p["m"], "pipeline.m"));
        if (cfg.pipeline.m < 0 || cfg.pipeline.m > cfg.grid.n_x)
            bad_key("pipeline.m", "must lie in [0, n_x]");
        if (p.contains("rhos")) cfg.pipeline.rhos = as_int_list(p["rhos"], "pipeline.rhos");
        if (p.contains("rho_vecs")) {
            if (!p["rho_vecs"].is_array()) bad_key("pipeline.rho_vecs", "expected a list");
            for (const auto& v : p["rho_vecs"])
                cfg.pipeline.rho_vecs.push_back(as_int_list(v, "pipeline.rho_vecs"));
        }
        if (p.contains("tau_unit")) {
            const std::string s = as_string(p["tau_unit"], "pipeline.tau_unit");
            if (s == "grid")
                cfg.pipeline.tau_unit = TauUnit::Grid;
            else if (s == "domain")
                cfg.pipeline.tau_unit = TauUnit::Domain;
            else
                bad_key("pipeline.tau_unit", "must be 'grid' or 'domain'");
        }
        if (p.contains("n_seeds"))
            cfg.pipeline.n_seeds = static_cast<int>(as_int(p["n_seeds"], "pipeline.n_seeds"));
        if (cfg.pipeline.n_seeds < 1) bad_key("pipeline.n_seeds", "must be >= 1");
    }

    // --- readout ---
    {
        const auto& r = sub(j, "readout");
        check_keys(r, {"mode", "epsilon3", "repetitions", "seed"}, "readout");
        if (r.contains("mode")) {
            const std::string s = as_string(r["mode"], "readout.mode");
            if (s == "exact")
                cfg.readout.mode = ReadoutMode::Exact;
            else if (s == "gaussian")
                cfg.readout.mode = ReadoutMode::Gaussian;
            else if (s == "shot")
                cfg.readout.mode = ReadoutMode::Shot;
            else
                bad_key("readout.mode", "must be exact, gaussian, or shot");
        }
        if (r.contains("epsilon3"))
            cfg.readout.epsilon3 = as_double(r["epsilon3"], "readout.epsilon3");
        if (!(cfg.readout.epsilon3 >= 0.0)) bad_key("readout.epsilon3", "must be >= 0");
        if (r.contains("repetitions"))
            cfg.readout.repetitions = as_int(r["repetitions"], "readout.repetitions");
        if (cfg.readout.mode == ReadoutMode::Shot && cfg.readout.repetitions < 1)
            bad_key("readout.repetitions", "shot mode needs at least one repetition");
        if (r.contains("seed")) cfg.readout.seed = as_u64(r["seed"], "readout.seed");
    }

    // --- ensemble ---
    {
        const auto& e = sub(j, "ensemble");
        check_keys(e, {"n_en", "base_seed"}, "ensemble");
        if (e.contains("n_en"))
            cfg.ensemble.n_en = static_cast<int>(as_int(e["n_en"], "ensemble.n_en"));
        if (cfg.ensemble.n_en < 1 ||
            (cfg.ensemble.n_en & (cfg.ensemble.n_en - 1)) != 0)
            bad_key("ensemble.n_en", "must be a positive power of two");
        if (e.contains("base_seed"))
            cfg.ensemble.base_seed = as_u64(e["base_seed"], "ensemble.base_seed");
    }

    // --- output ---
    {
        const auto& o = sub(j, "output");
        check_keys(o, {"directory", "formats"}, "output");
        if (o.contains("directory"))
            cfg.output.directory = as_string(o["directory"], "output.directory");
        if (o.contains("formats")) {
            cfg.output.formats.clear();
            const auto& f = o["formats"];
            if (f.is_array())
                for (const auto& e : f)
                    cfg.output.formats.push_back(as_string(e, "output.formats"));
            else
                cfg.output.formats.push_back(as_string(f, "output.formats"));
        }
        if (cfg.output.formats.empty()) bad_key("output.formats", "must be non-empty");
        for (const auto& f : cfg.output.formats)
            if (f != "csv" && f != "json")
                bad_key("output.formats", "unknown format '" + f + "'");
    }

    if (j.contains("max_qubits"))
        cfg.max_qubits = static_cast<int>(as_int(j["max_qubits"], "max_qubits"));
    if (cfg.max_qubits < 1 || cfg.max_qubits > 30)
        bad_key("max_qubits", "must lie in [1, 30]");

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    // Detect the format from the first non-space character.
    int c = in.peek();
    while (c != EOF && std::isspace(c)) {
        in.get();
        c = in.peek();
    }
    if (c == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config JSON parse error: ") + e.what());
        }
        return config_from_json(j);
    }
    return config_from_json(parse_sections(in));
}

void apply_seed_override(RunConfig& cfg, std::uint64_t master) {
    Rng root(master);
    cfg.ic.random.seed = root.split(1).seed();
    cfg.readout.seed = root.split(2).seed();
    cfg.ensemble.base_seed = root.split(3).seed();
}

nlohmann::json effective_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["grid"] = {{"n_x", cfg.grid.n_x},
                 {"L", cfg.grid.L},
                 {"bc", cfg.grid.bc == BoundaryCondition::Periodic ? "periodic"
                                                                   : "dirichlet"}};
    j["physics"] = {{"nu", cfg.physics.nu}};
    switch (cfg.ic.kind) {
        case IcKind::Random:
            j["ic"] = {{"random",
                        {{"sigma_xi", cfg.ic.random.sigma_xi},
                         {"j_max", cfg.ic.random.j_max},
                         {"seed", cfg.ic.random.seed}}}};
            break;
        case IcKind::PlaneWave:
            j["ic"] = {{"plane_wave",
                        {{"delta_m", cfg.ic.plane_wave.delta_m},
                         {"m", cfg.ic.plane_wave.m}}}};
            break;
        case IcKind::File:
            j["ic"] = {{"file", {{"path", cfg.ic.file_path}}}};
            break;
    }
    j["pipeline"] = {{"taus", cfg.pipeline.taus},
                     {"ns", cfg.pipeline.ns},
                     {"m", cfg.pipeline.m},
                     {"rhos", cfg.pipeline.rhos},
                     {"rho_vecs", cfg.pipeline.rho_vecs},
                     {"tau_unit", cfg.pipeline.tau_unit == TauUnit::Grid ? "grid" : "domain"},
                     {"n_seeds", cfg.pipeline.n_seeds}};
    const char* mode = cfg.readout.mode == ReadoutMode::Exact      ? "exact"
                       : cfg.readout.mode == ReadoutMode::Gaussian ? "gaussian"
                                                                   : "shot";
    j["readout"] = {{"mode", mode},
                    {"epsilon3", cfg.readout.epsilon3},
                    {"repetitions", cfg.readout.repetitions},
                    {"seed", cfg.readout.seed}};
    j["ensemble"] = {{"n_en", cfg.ensemble.n_en}, {"base_seed", cfg.ensemble.base_seed}};
    j["output"] = {{"formats", cfg.output.formats}};
    j["max_qubits"] = cfg.max_qubits;
    return j;
}

std::string config_hash(const RunConfig& cfg) {
    return hex64(fnv1a64(effective_json(cfg).dump()));
}

} // namespace qburgers
