#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "orbitcert/builtin.hpp"
#include "orbitcert/region.hpp"

namespace orbitcert {

/// A fully built run: the system plus subcommand-specific inputs.
struct RunConfig {
    BuiltinSystem system;
    double lambda = 1.0;                  // for flow / periodic
    double t1 = 0.0;                      // flow horizon; 0 means 2T
    std::optional<HistoryRegion> w_region;  // for index
    std::optional<History> initial;       // initial history / point
    std::string out_path;
};

/// Parses the flat key = value / [section] format. Unknown sections or keys
/// are rejected; numeric values go through the expression evaluator (so
/// "2*pi" is a number). Throws ConfigError with line numbers.
[[nodiscard]] RunConfig load_config(std::istream& in, const std::string& name);
[[nodiscard]] RunConfig load_config_file(const std::string& path);

/// Built-in example wrapped in the default RunConfig for its demos.
[[nodiscard]] RunConfig load_builtin(const std::string& name);

}  // namespace orbitcert
