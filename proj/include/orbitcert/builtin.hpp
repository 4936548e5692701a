#pragma once

#include <string>
#include <vector>

#include "orbitcert/branch.hpp"
#include "orbitcert/fields.hpp"
#include "orbitcert/manifold.hpp"
#include "orbitcert/region.hpp"

namespace orbitcert {

/// A ready-to-run problem: manifold, fields, period, delay and default
/// regions/controls. Every system named in the docs is constructible by name.
struct BuiltinSystem {
    std::string name;
    std::string description;
    EmbeddedManifold manifold;
    TangentField g;
    PerturbationField f;
    double T = 1.0;
    double r = 0.0;
    RegionPredicate region;  // default zero-search region
    PairRegion omega;        // default Ω for certificates
    ContinuationControls controls;
    ZeroSearchOptions search;
};

/// cubic1d | delay_oscillator | resonance | sphere_height | torus_flow | rotation
[[nodiscard]] BuiltinSystem builtin_system(const std::string& name);
[[nodiscard]] std::vector<std::string> builtin_names();

/// f ≡ 0 with the given period/delay metadata.
[[nodiscard]] PerturbationField zero_perturbation(int ambient_dim, double T, double r);

}  // namespace orbitcert
