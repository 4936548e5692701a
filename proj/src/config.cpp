#include "orbitcert/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "orbitcert/errors.hpp"
#include "orbitcert/expr.hpp"

namespace orbitcert {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

struct RawConfig {
    std::string file;
    std::map<std::string, std::map<std::string, RawEntry>> sections;

    [[nodiscard]] bool has(const std::string& section, const std::string& key) const {
        auto sec = sections.find(section);
        if (sec == sections.end()) return false;
        return sec->second.find(key) != sec->second.end();
    }

    [[nodiscard]] const RawEntry* find(const std::string& section, const std::string& key) const {
        auto sec = sections.find(section);
        if (sec == sections.end()) return nullptr;
        auto entry = sec->second.find(key);
        if (entry == sec->second.end()) return nullptr;
        entry->second.used = true;
        return &entry->second;
    }

    [[nodiscard]] bool has_section(const std::string& section) const {
        return sections.find(section) != sections.end();
    }
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

RawConfig parse_ini(std::istream& in, const std::string& name) {
    RawConfig raw;
    raw.file = name;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(name, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(name, lineno, "empty section name");
            raw.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(name, lineno, "expected key = value");
        }
        if (section.empty()) {
            throw ConfigError(name, lineno, "key outside of any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(name, lineno, "empty key");
        auto [it, inserted] = raw.sections[section].emplace(key, RawEntry{value, lineno});
        if (!inserted) throw ConfigError(name, lineno, "duplicate key '" + key + "'");
    }
    return raw;
}

double eval_number(const RawConfig& raw, const RawEntry& entry) {
    try {
        return Expression::parse(entry.value, {}).eval({});
    } catch (const ExprError& err) {
        throw ConfigError(raw.file, entry.line, err.what());
    }
}

double get_number(const RawConfig& raw, const std::string& section, const std::string& key,
                  double fallback) {
    const RawEntry* entry = raw.find(section, key);
    return entry ? eval_number(raw, *entry) : fallback;
}

int get_int(const RawConfig& raw, const std::string& section, const std::string& key,
            int fallback) {
    const RawEntry* entry = raw.find(section, key);
    if (!entry) return fallback;
    const double v = eval_number(raw, *entry);
    if (std::abs(v - std::round(v)) > 1e-9) {
        throw ConfigError(raw.file, entry->line, "expected an integer for '" + key + "'");
    }
    return static_cast<int>(std::llround(v));
}

std::string get_string(const RawConfig& raw, const std::string& section, const std::string& key,
                       const std::string& fallback) {
    const RawEntry* entry = raw.find(section, key);
    return entry ? entry->value : fallback;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(trim(current));
    return parts;
}

Vec get_vector(const RawConfig& raw, const std::string& section, const std::string& key, int dim) {
    const RawEntry* entry = raw.find(section, key);
    if (!entry) {
        throw ConfigError(raw.file + ": missing required key '" + key + "' in [" + section + "]");
    }
    const auto parts = split(entry->value, ',');
    if (static_cast<int>(parts.size()) != dim) {
        std::ostringstream msg;
        msg << "'" << key << "' needs " << dim << " comma-separated values";
        throw ConfigError(raw.file, entry->line, msg.str());
    }
    Vec v(dim);
    for (int j = 0; j < dim; ++j) {
        try {
            v[j] = Expression::parse(parts[j], {}).eval({});
        } catch (const ExprError& err) {
            throw ConfigError(raw.file, entry->line, err.what());
        }
    }
    return v;
}

std::vector<std::string> ambient_variables(int k) {
    std::vector<std::string> names;
    names.reserve(k);
    for (int j = 1; j <= k; ++j) names.push_back("x" + std::to_string(j));
    return names;
}

EmbeddedManifold build_manifold(const RawConfig& raw) {
    const std::string kind = get_string(raw, "manifold", "kind", "euclidean");
    if (kind == "euclidean") {
        return EmbeddedManifold::euclidean(get_int(raw, "manifold", "dim", 1));
    }
    if (kind == "sphere") {
        return EmbeddedManifold::sphere(get_int(raw, "manifold", "dim", 3));
    }
    if (kind == "torus") {
        return EmbeddedManifold::torus2(get_number(raw, "manifold", "R", 2.0),
                                        get_number(raw, "manifold", "rho", 0.5));
    }
    if (kind == "custom") {
        const int k = get_int(raw, "manifold", "ambient_dim", 0);
        const RawEntry* constraints = raw.find("manifold", "constraints");
        if (k < 1 || !constraints) {
            throw ConfigError(raw.file +
                              ": custom manifolds need ambient_dim and constraints in [manifold]");
        }
        const auto parts = split(constraints->value, ';');
        const int c = static_cast<int>(parts.size());
        const auto vars = ambient_variables(k);
        std::vector<Expression> exprs;
        for (const auto& part : parts) {
            try {
                exprs.push_back(Expression::parse(part, vars));
            } catch (const ExprError& err) {
                throw ConfigError(raw.file, constraints->line, err.what());
            }
        }
        auto constraint = [exprs, c](const Vec& p) {
            Vec f(c);
            std::span<const double> values(p.data(), static_cast<std::size_t>(p.size()));
            for (int i = 0; i < c; ++i) f[i] = exprs[static_cast<std::size_t>(i)].eval(values);
            return f;
        };
        std::optional<int> chi;
        if (raw.has("manifold", "euler_characteristic")) {
            chi = get_int(raw, "manifold", "euler_characteristic", 0);
        }
        return EmbeddedManifold::implicit(k, c, constraint, nullptr, chi);
    }
    throw ConfigError(raw.file + ": unknown manifold kind '" + kind + "'");
}

TangentField build_g(const RawConfig& raw, const EmbeddedManifold& manifold) {
    const RawEntry* expr = raw.find("g", "expr");
    if (!expr) throw ConfigError(raw.file + ": missing expr in [g]");
    const int k = manifold.ambient_dim();
    const auto parts = split(expr->value, ';');
    if (static_cast<int>(parts.size()) != k) {
        throw ConfigError(raw.file, expr->line, "[g] expr needs k = " +
                                                    std::to_string(k) + " components");
    }
    const auto vars = ambient_variables(k);
    std::vector<Expression> exprs;
    for (const auto& part : parts) {
        try {
            exprs.push_back(Expression::parse(part, vars));
        } catch (const ExprError& err) {
            throw ConfigError(raw.file, expr->line, err.what());
        }
    }
    TangentField field([exprs, k](const Vec& p) {
        Vec v(k);
        std::span<const double> values(p.data(), static_cast<std::size_t>(p.size()));
        for (int i = 0; i < k; ++i) v[i] = exprs[static_cast<std::size_t>(i)].eval(values);
        return v;
    });
    // User-supplied fields are projected onto the tangent spaces so the
    // tangency hypothesis holds unconditionally.
    return tangentize(manifold, field);
}

PerturbationField build_f(const RawConfig& raw, const EmbeddedManifold& manifold, double T,
                          double r) {
    const int k = manifold.ambient_dim();
    if (!raw.has_section("f") || !raw.has("f", "expr")) return zero_perturbation(k, T, r);
    const RawEntry* expr = raw.find("f", "expr");
    const auto parts = split(expr->value, ';');
    if (static_cast<int>(parts.size()) != k) {
        throw ConfigError(raw.file, expr->line, "[f] expr needs k = " +
                                                    std::to_string(k) + " components");
    }
    std::vector<std::string> vars = {"t"};
    for (int j = 1; j <= k; ++j) vars.push_back("x" + std::to_string(j));
    for (int j = 1; j <= k; ++j) vars.push_back("y" + std::to_string(j));
    std::vector<Expression> exprs;
    for (const auto& part : parts) {
        try {
            exprs.push_back(Expression::parse(part, vars));
        } catch (const ExprError& err) {
            throw ConfigError(raw.file, expr->line, err.what());
        }
    }
    PerturbationField field(
        [exprs, k](double t, const Vec& p, const Vec& q) {
            std::vector<double> values(static_cast<std::size_t>(1 + 2 * k));
            values[0] = t;
            for (int j = 0; j < k; ++j) values[static_cast<std::size_t>(1 + j)] = p[j];
            for (int j = 0; j < k; ++j) values[static_cast<std::size_t>(1 + k + j)] = q[j];
            Vec v(k);
            for (int i = 0; i < k; ++i) v[i] = exprs[static_cast<std::size_t>(i)].eval(values);
            return v;
        },
        T, r);
    return tangentize(manifold, field);
}

RegionPredicate build_region(const RawConfig& raw, const EmbeddedManifold& manifold) {
    const int k = manifold.ambient_dim();
    const double margin = get_number(raw, "region", "margin", 1e-6);
    const std::string kind = get_string(raw, "region", "kind", "box");
    if (kind == "box" || kind == "interval") {
        const Vec lo = get_vector(raw, "region", "lo", k);
        const Vec hi = get_vector(raw, "region", "hi", k);
        return RegionPredicate::box(lo, hi, margin);
    }
    if (kind == "ball") {
        const Vec center = get_vector(raw, "region", "center", k);
        return RegionPredicate::ball(center, get_number(raw, "region", "radius", 1.0), margin);
    }
    if (kind == "all") {
        if (manifold.compact_bbox) return RegionPredicate::all(*manifold.compact_bbox);
        const Vec lo = get_vector(raw, "region", "lo", k);
        const Vec hi = get_vector(raw, "region", "hi", k);
        return RegionPredicate::all(Box{lo, hi});
    }
    throw ConfigError(raw.file + ": unknown region kind '" + kind + "'");
}

}  // namespace

RunConfig load_config(std::istream& in, const std::string& name) {
    const RawConfig raw = parse_ini(in, name);

    BuiltinSystem sys;
    sys.name = name;
    sys.manifold = build_manifold(raw);
    sys.T = get_number(raw, "problem", "T", 1.0);
    if (!(sys.T > 0.0)) throw ConfigError(raw.file + ": [problem] T must be > 0");
    sys.r = get_number(raw, "problem", "r", 0.0);
    if (sys.r < 0.0) throw ConfigError(raw.file + ": [problem] r must be >= 0");
    sys.g = build_g(raw, sys.manifold);
    sys.f = build_f(raw, sys.manifold, sys.T, sys.r);
    if (raw.has_section("region")) {
        sys.region = build_region(raw, sys.manifold);
    } else if (sys.manifold.compact_bbox) {
        sys.region = RegionPredicate::all(*sys.manifold.compact_bbox);
    } else {
        sys.region = RegionPredicate::box(Vec::Constant(sys.manifold.ambient_dim(), -2.0),
                                          Vec::Constant(sys.manifold.ambient_dim(), 2.0));
    }

    // Solver knobs.
    const int steps = get_int(raw, "solver", "steps_per_period", 200);
    sys.controls.integrator.dt = sys.T / steps;
    sys.controls.integrator.adaptive = get_int(raw, "solver", "adaptive", 0) != 0;
    sys.controls.integrator.local_tol = get_number(raw, "solver", "local_tol", 1e-10);
    sys.controls.integrator.escape_radius = get_number(raw, "solver", "escape_radius", 1e6);
    sys.controls.n_history_nodes = get_int(raw, "solver", "n_history_nodes", 32);
    sys.controls.periodic_tol = get_number(raw, "solver", "periodic_tol", 1e-8);
    sys.controls.lambda_max = get_number(raw, "solver", "lambda_max", 5.0);
    sys.controls.norm_max = get_number(raw, "solver", "norm_max", 1e3);
    sys.controls.ds0 = get_number(raw, "solver", "ds0", 1e-2);
    sys.controls.ds_min = get_number(raw, "solver", "ds_min", 1e-6);
    sys.controls.ds_max = get_number(raw, "solver", "ds_max", 0.5);
    sys.controls.lambda_vert_tol = get_number(raw, "solver", "lambda_vert_tol", 1e-6);
    sys.controls.n_vert = get_int(raw, "solver", "n_vert", 5);
    sys.search.seeds_per_axis = get_int(raw, "solver", "seeds_per_axis", 16);
    sys.search.zero_tol = get_number(raw, "solver", "zero_tol", 1e-8);
    sys.search.singular_tol = get_number(raw, "solver", "singular_tol", 1e-8);

    // Ω.
    if (raw.has_section("omega")) {
        const std::string kind = get_string(raw, "omega", "kind", "all");
        const int k = sys.manifold.ambient_dim();
        if (kind == "all") {
            Box seed = sys.region.bbox;
            if (raw.has("omega", "seed_lo")) {
                seed = Box{get_vector(raw, "omega", "seed_lo", k),
                           get_vector(raw, "omega", "seed_hi", k)};
            }
            sys.omega = PairRegion::all(seed);
        } else if (kind == "cylinder") {
            sys.omega = PairRegion::cylinder(get_number(raw, "omega", "lambda_hi", 10.0),
                                             get_vector(raw, "omega", "center", k),
                                             get_number(raw, "omega", "radius", 1.0),
                                             get_number(raw, "omega", "margin", 1e-6));
        } else {
            throw ConfigError(raw.file + ": unknown omega kind '" + kind + "'");
        }
    } else {
        sys.omega = PairRegion::all(sys.region.bbox);
    }

    RunConfig config;
    config.system = std::move(sys);
    config.lambda = get_number(raw, "problem", "lambda", 1.0);
    if (config.lambda < 0.0) throw ConfigError(raw.file + ": [problem] lambda must be >= 0");
    config.t1 = get_number(raw, "problem", "t1", 0.0);
    config.out_path = get_string(raw, "output", "path", "");

    // W region for the index subcommand.
    if (raw.has_section("w_region")) {
        const int k = config.system.manifold.ambient_dim();
        const double rn = normalize_delay(config.system.r, config.system.T).value_or(0.0);
        const int n_nodes = config.system.controls.n_history_nodes;
        const std::string kind = get_string(raw, "w_region", "kind", "sup_ball");
        const double margin = get_number(raw, "w_region", "margin", 1e-6);
        if (kind == "sup_ball") {
            const Vec center = get_vector(raw, "w_region", "center", k);
            const double radius = get_number(raw, "w_region", "radius", 0.5);
            config.w_region = HistoryRegion::sup_ball(History::constant(center, rn, n_nodes),
                                                      radius, margin);
        } else if (kind == "phi0_box") {
            const Vec lo = get_vector(raw, "w_region", "lo", k);
            const Vec hi = get_vector(raw, "w_region", "hi", k);
            const double osc = get_number(raw, "w_region", "osc_bound", 0.5);
            config.w_region = HistoryRegion::phi0_box(Box{lo, hi}, osc, rn, n_nodes, margin);
        } else {
            throw ConfigError(raw.file + ": unknown w_region kind '" + kind + "'");
        }
    }

    // Initial data for flow / periodic.
    if (raw.has_section("initial")) {
        const int k = config.system.manifold.ambient_dim();
        const double rn = normalize_delay(config.system.r, config.system.T).value_or(0.0);
        const int n_nodes = config.system.controls.n_history_nodes;
        if (raw.has("initial", "expr")) {
            const RawEntry* expr = raw.find("initial", "expr");
            const auto parts = split(expr->value, ';');
            if (static_cast<int>(parts.size()) != k) {
                throw ConfigError(raw.file, expr->line,
                                  "[initial] expr needs k = " + std::to_string(k) + " components");
            }
            std::vector<Expression> exprs;
            for (const auto& part : parts) {
                try {
                    exprs.push_back(Expression::parse(part, {"theta"}));
                } catch (const ExprError& err) {
                    throw ConfigError(raw.file, expr->line, err.what());
                }
            }
            History phi = History::constant(Vec::Zero(k), rn, n_nodes);
            for (std::size_t i = 0; i < phi.grid.size(); ++i) {
                const double theta = phi.grid[i];
                Vec v(k);
                for (int j = 0; j < k; ++j) {
                    v[j] = exprs[static_cast<std::size_t>(j)].eval(std::span(&theta, 1));
                }
                if (auto projected = config.system.manifold.project_point(v)) v = *projected;
                phi.values[i] = v;
            }
            config.initial = std::move(phi);
        } else if (raw.has("initial", "point")) {
            Vec p = get_vector(raw, "initial", "point", k);
            if (auto projected = config.system.manifold.project_point(p)) p = *projected;
            config.initial = History::constant(p, rn, n_nodes);
        }
    }

    // Reject anything unconsumed.
    for (const auto& [section, keys] : raw.sections) {
        for (const auto& [key, entry] : keys) {
            if (!entry.used) {
                throw ConfigError(raw.file, entry.line,
                                  "unknown key '" + key + "' in [" + section + "]");
            }
        }
    }
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return load_config(in, path);
}

RunConfig load_builtin(const std::string& name) {
    RunConfig config;
    config.system = builtin_system(name);
    config.lambda = (name == "delay_oscillator") ? 1.0 : 0.1;
    config.t1 = 0.0;
    const double rn = normalize_delay(config.system.r, config.system.T).value_or(0.0);
    Vec anchor;
    if (name == "sphere_height") {
        anchor = Vec::Zero(3);
        anchor[2] = 1.0;
    } else if (name == "torus_flow") {
        anchor = Vec::Zero(3);
        anchor[0] = 2.5;
    } else {
        anchor = Vec::Zero(config.system.manifold.ambient_dim());
    }
    config.initial = History::constant(anchor, rn, config.system.controls.n_history_nodes);
    return config;
}

}  // namespace orbitcert
