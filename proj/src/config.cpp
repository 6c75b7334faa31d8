#include "fqmag/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fqmag/errors.hpp"

namespace fqmag {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

long long parse_ll(const std::string& s, const std::string& field) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw ConfigInvalid(field + ": not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigInvalid(field + ": trailing junk in '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& field) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw ConfigInvalid(field + ": not an unsigned integer: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigInvalid(field + ": trailing junk in '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::string& field) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigInvalid(field + ": not a number: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigInvalid(field + ": trailing junk in '" + s + "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

const std::vector<std::string>& all_checks() {
    static const std::vector<std::string> names = {
        "identities", "lemma_audit", "r41",    "moments",            "L3.2",      "L3.3",
        "realaim",    "holder",      "extension_constant", "sharpness", "sign_sweep"};
    return names;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.k_values.clear();
    cfg.seeds.clear();
    std::vector<std::string> seen;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigInvalid("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw ConfigInvalid("duplicate key '" + key + "'");
        seen.push_back(key);

        if (key == "grid") {
            for (const auto& item : split_list(val, ',')) {
                const auto parts = split_list(item, ':');
                if (parts.size() != 3)
                    throw ConfigInvalid("grid: expected p:n:d, got '" + item + "'");
                GridPoint g;
                g.p = static_cast<int>(parse_ll(parts[0], "grid.p"));
                g.n = static_cast<int>(parse_ll(parts[1], "grid.n"));
                g.d = static_cast<int>(parse_ll(parts[2], "grid.d"));
                if (g.p < 2 || g.n < 1 || g.d < 1)
                    throw ConfigInvalid("grid: nonpositive entry in '" + item + "'");
                cfg.grid.push_back(g);
            }
        } else if (key == "k_values") {
            for (const auto& item : split_list(val, ',')) {
                const int k = static_cast<int>(parse_ll(item, "k_values"));
                if (k < 2) throw ConfigInvalid("k_values: k must be >= 2, got " + item);
                cfg.k_values.push_back(k);
            }
        } else if (key == "set_specs") {
            cfg.set_specs = split_list(val, '|');
        } else if (key == "seeds") {
            for (const auto& item : split_list(val, ','))
                cfg.seeds.push_back(parse_u64(item, "seeds"));
        } else if (key == "checks") {
            for (const auto& item : split_list(val, ',')) {
                const auto& known = all_checks();
                if (std::find(known.begin(), known.end(), item) == known.end())
                    throw ConfigInvalid("checks: unknown check '" + item + "'");
                cfg.checks.push_back(item);
            }
        } else if (key == "tolerance") {
            cfg.tolerance = parse_double(val, "tolerance");
            if (!(cfg.tolerance > 0)) throw ConfigInvalid("tolerance must be positive");
        } else if (key == "out_csv") {
            cfg.out_csv = val;
        } else if (key == "out_json") {
            cfg.out_json = val;
        } else if (key == "parallelism") {
            cfg.parallelism = static_cast<int>(parse_ll(val, "parallelism"));
            if (cfg.parallelism < 0) throw ConfigInvalid("parallelism must be >= 0");
        } else if (key == "timing") {
            if (val == "1" || val == "true") cfg.timing = true;
            else if (val == "0" || val == "false") cfg.timing = false;
            else throw ConfigInvalid("timing: expected 0/1/true/false, got '" + val + "'");
        } else if (key == "master_seed") {
            cfg.master_seed = parse_u64(val, "master_seed");
        } else if (key == "trials") {
            cfg.trials = static_cast<int>(parse_ll(val, "trials"));
            if (cfg.trials < 1) throw ConfigInvalid("trials must be >= 1");
        } else {
            throw ConfigInvalid("unknown key '" + key + "'");
        }
    }

    if (cfg.grid.empty()) throw ConfigInvalid("grid is required and nonempty");
    if (cfg.k_values.empty()) throw ConfigInvalid("k_values is required and nonempty");
    if (cfg.checks.empty()) throw ConfigInvalid("checks is required and nonempty");
    if (cfg.seeds.empty() && cfg.set_specs.empty())
        throw ConfigInvalid("seeds is required when set_specs is empty (standard corpus)");
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "grid = ";
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        if (i) out << ", ";
        out << cfg.grid[i].p << ":" << cfg.grid[i].n << ":" << cfg.grid[i].d;
    }
    out << "\nk_values = ";
    for (std::size_t i = 0; i < cfg.k_values.size(); ++i) {
        if (i) out << ", ";
        out << cfg.k_values[i];
    }
    out << "\nset_specs = ";
    for (std::size_t i = 0; i < cfg.set_specs.size(); ++i) {
        if (i) out << " | ";
        out << cfg.set_specs[i];
    }
    out << "\nseeds = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        if (i) out << ", ";
        out << cfg.seeds[i];
    }
    out << "\nchecks = ";
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
        if (i) out << ", ";
        out << cfg.checks[i];
    }
    out << "\ntolerance = " << format_double(cfg.tolerance);
    out << "\nout_csv = " << cfg.out_csv;
    out << "\nout_json = " << cfg.out_json;
    out << "\nparallelism = " << cfg.parallelism;
    out << "\ntiming = " << (cfg.timing ? 1 : 0);
    out << "\nmaster_seed = " << cfg.master_seed;
    out << "\ntrials = " << cfg.trials;
    out << "\n";
    return out.str();
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ExperimentConfig acceptance_preset() {
    ExperimentConfig cfg;
    cfg.grid = {{3, 1, 2}, {5, 1, 2}, {7, 1, 2}, {3, 2, 2}, {3, 1, 4},
                {5, 1, 4}, {7, 1, 4}, {3, 2, 4}, {3, 1, 6}, {3, 1, 8}};
    cfg.k_values = {2, 3, 4};
    cfg.set_specs = {};
    cfg.seeds = {1, 2, 3};
    cfg.checks = all_checks();
    cfg.tolerance = 1e-8;
    cfg.out_csv = "acceptance_report.csv";
    cfg.out_json = "acceptance_report.json";
    cfg.parallelism = 0;
    cfg.timing = false;
    cfg.master_seed = 1;
    cfg.trials = 8;
    return cfg;
}

} // namespace fqmag
