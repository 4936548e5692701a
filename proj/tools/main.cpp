#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "orbitcert/branch.hpp"
#include "orbitcert/config.hpp"
#include "orbitcert/degree.hpp"
#include "orbitcert/errors.hpp"
#include "orbitcert/index.hpp"
#include "orbitcert/records.hpp"
#include "orbitcert/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitAnomaly = 3;

struct CommonOptions {
    std::string config_path;
    std::string example;
    std::string out_path;
    std::uint64_t seed = 12345;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& common, bool needs_system) {
    auto* config = cmd->add_option("--config", common.config_path, "configuration file");
    auto* example = cmd->add_option("--example", common.example, "built-in example name");
    if (needs_system) {
        config->excludes(example);
    }
    cmd->add_option("--out", common.out_path, "write data records to this path");
    cmd->add_option("--seed", common.seed, "seed for randomized property checks");
    cmd->add_flag("--quiet", common.quiet, "suppress informational output");
}

orbitcert::RunConfig load(const CommonOptions& common) {
    if (!common.config_path.empty()) return orbitcert::load_config_file(common.config_path);
    if (!common.example.empty()) return orbitcert::load_builtin(common.example);
    throw orbitcert::ConfigError("either --config or --example is required");
}

// Data records go to --out when given, stdout otherwise.
class RecordSink {
  public:
    explicit RecordSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw orbitcert::ConfigError("cannot open output path '" + path + "'");
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

int cmd_degree(const CommonOptions& common) {
    const orbitcert::RunConfig config = load(common);
    const auto& sys = config.system;
    const auto zeros = orbitcert::find_zeros(sys.manifold, sys.g, sys.region, sys.search);
    int deg = 0;
    for (const auto& z : zeros) deg += z.local_sign;
    if (!common.quiet) {
        std::cout << "degree = " << deg << " (" << zeros.size() << " zero(s))\n";
    }
    RecordSink sink(common.out_path);
    orbitcert::records::write_zero_table(sink.stream(), zeros);
    return kExitOk;
}

int cmd_index(const CommonOptions& common) {
    orbitcert::RunConfig config = load(common);
    const auto& sys = config.system;
    const double rn = orbitcert::normalize_delay(sys.r, sys.T).value_or(0.0);
    if (!config.w_region) {
        // Default W: a sup-norm ball around the constant history at the first
        // zero in the default region.
        const auto zeros = orbitcert::find_zeros(sys.manifold, sys.g, sys.region, sys.search);
        if (zeros.empty()) {
            throw orbitcert::ConfigError("no [w_region] given and no zero to center one on");
        }
        config.w_region = orbitcert::HistoryRegion::sup_ball(
            orbitcert::History::constant(zeros.front().point, rn, sys.controls.n_history_nodes),
            0.5);
    }
    orbitcert::IndexOptions opts;
    opts.search = sys.search;
    opts.integrator = sys.controls.integrator;
    const orbitcert::TangentField neg_g(
        [&sys](const orbitcert::Vec& p) { return orbitcert::Vec(-sys.g(p)); },
        [&sys](const orbitcert::Vec& p) { return orbitcert::Mat(-sys.g.jacobian(p)); });
    const int ind_q = orbitcert::index_Q_region(sys.manifold, sys.g, *config.w_region, sys.T, opts);
    const int deg = orbitcert::degree(sys.manifold, neg_g, config.w_region->check_set(), opts.search);
    const int ind_p = config.w_region->check_set().bbox.empty()
                          ? 0
                          : orbitcert::index_P_region(sys.manifold, sys.g,
                                                      config.w_region->check_set(), sys.T, opts);
    const bool ok = (ind_q == deg && deg == ind_p);
    std::cout << "ind(Q,W) = " << ind_q << "\n"
              << "deg(-g,W_check) = " << deg << "\n"
              << "ind(P,W_check) = " << ind_p << "\n"
              << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitDomainError;
}

int cmd_flow(const CommonOptions& common) {
    const orbitcert::RunConfig config = load(common);
    const auto& sys = config.system;
    const double rn = orbitcert::normalize_delay(sys.r, sys.T).value_or(0.0);
    orbitcert::History initial =
        config.initial.value_or(orbitcert::History::constant(
            orbitcert::Vec::Zero(sys.manifold.ambient_dim()), rn,
            sys.controls.n_history_nodes));
    const double t1 = config.t1 > 0.0 ? config.t1 : 2.0 * sys.T;
    // λ = 0 is a plain ODE; use the one-sided integrator (it also honors the
    // adaptive step option).
    const orbitcert::Trajectory traj =
        config.lambda == 0.0
            ? orbitcert::flow_ode(sys.manifold, sys.g, initial.at_zero(), 0.0, t1,
                                  sys.controls.integrator)
            : orbitcert::flow_dde(sys.manifold, sys.g, sys.f, config.lambda, initial, t1,
                                  sys.controls.integrator);
    if (!common.quiet) {
        std::cout << "flow: lambda = " << config.lambda << ", t in [" << -rn << ", " << t1
                  << "], " << traj.times.size() << " nodes\n";
    }
    RecordSink sink(common.out_path);
    orbitcert::records::write_trajectory(sink.stream(), traj);
    return kExitOk;
}

int cmd_periodic(const CommonOptions& common) {
    const orbitcert::RunConfig config = load(common);
    const auto& sys = config.system;
    const double rn = orbitcert::normalize_delay(sys.r, sys.T).value_or(0.0);
    const orbitcert::History guess =
        config.initial.value_or(orbitcert::History::constant(
            orbitcert::Vec::Zero(sys.manifold.ambient_dim()), rn,
            sys.controls.n_history_nodes));
    const orbitcert::History solved = orbitcert::solve_periodic(
        sys.manifold, sys.g, sys.f, config.lambda, guess, sys.T, sys.controls);
    const orbitcert::Vec residual = orbitcert::periodic_residual(
        sys.manifold, sys.g, sys.f, config.lambda, solved, sys.T, sys.controls.integrator);
    const orbitcert::Trajectory traj = orbitcert::flow_dde(
        sys.manifold, sys.g, sys.f, config.lambda, solved, sys.T, sys.controls.integrator);
    if (!common.quiet) {
        std::cout << "periodic solution at lambda = " << config.lambda
                  << ", residual = " << residual.cwiseAbs().maxCoeff() << "\n";
    }
    RecordSink sink(common.out_path);
    orbitcert::records::write_trajectory(sink.stream(), traj);
    return kExitOk;
}

int cmd_branch(const CommonOptions& common) {
    const orbitcert::RunConfig config = load(common);
    const auto& sys = config.system;
    const orbitcert::Certificate cert = orbitcert::branch_certificate(
        sys.manifold, sys.g, sys.f, sys.T, sys.r, sys.omega, sys.controls, sys.search);
    if (!common.quiet) std::cout << cert.report();
    RecordSink sink(common.out_path);
    for (std::size_t i = 0; i < cert.witnesses.size(); ++i) {
        sink.stream() << "# branch " << i << "\n";
        orbitcert::records::write_branch(sink.stream(), cert.witnesses[i]);
    }
    return cert.any_anomaly ? kExitAnomaly : kExitOk;
}

int cmd_verify(const CommonOptions& common) {
    const auto results = orbitcert::run_acceptance(common.seed);
    bool all_pass = true;
    for (const auto& result : results) {
        all_pass = all_pass && result.pass;
        std::cout << (result.pass ? "[PASS] " : "[FAIL] ") << "criterion " << result.id << ": "
                  << result.name;
        if (!common.quiet || !result.pass) std::cout << " — " << result.detail;
        std::cout << "\n";
    }
    std::cout << (all_pass ? "verification suite: PASS" : "verification suite: FAIL") << "\n";
    return all_pass ? kExitOk : kExitDomainError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic branches and topological certificates for delay-perturbed "
                 "flows on implicit manifolds"};
    app.require_subcommand(1);

    CommonOptions common;
    auto* degree_cmd = app.add_subcommand("degree", "count the zeros of g algebraically");
    add_common(degree_cmd, common, true);
    auto* index_cmd =
        app.add_subcommand("index", "fixed point indices of P and Q with cross-checks");
    add_common(index_cmd, common, true);
    auto* flow_cmd = app.add_subcommand("flow", "integrate the (delay) equation");
    add_common(flow_cmd, common, true);
    auto* periodic_cmd =
        app.add_subcommand("periodic", "solve for a T-periodic solution at fixed lambda");
    add_common(periodic_cmd, common, true);
    auto* branch_cmd =
        app.add_subcommand("branch", "continue branches of T-periodic pairs and certify");
    add_common(branch_cmd, common, true);
    auto* verify_cmd = app.add_subcommand("verify", "run the built-in verification suite");
    add_common(verify_cmd, common, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (degree_cmd->parsed()) return cmd_degree(common);
        if (index_cmd->parsed()) return cmd_index(common);
        if (flow_cmd->parsed()) return cmd_flow(common);
        if (periodic_cmd->parsed()) return cmd_periodic(common);
        if (branch_cmd->parsed()) return cmd_branch(common);
        if (verify_cmd->parsed()) return cmd_verify(common);
    } catch (const orbitcert::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfigError;
    } catch (const orbitcert::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitDomainError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitDomainError;
    }
    return kExitConfigError;
}
