#include "orbitcert/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orbitcert/errors.hpp"

namespace orbitcert {

namespace {

constexpr int kDefaultStepsPerSpan = 200;

Vec hermite(double t, double t0, double t1, const Vec& v0, const Vec& v1, const Vec& d0,
            const Vec& d1) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * v0 + (s3 - 2.0 * s2 + s) * h * d0 +
           (-2.0 * s3 + 3.0 * s2) * v1 + (s3 - s2) * h * d1;
}

Vec interp(const std::vector<double>& times, const std::vector<Vec>& values,
           const std::vector<Vec>& slopes, double t) {
    const auto n = times.size();
    if (n == 1) return values.front();
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    auto i = static_cast<std::size_t>(it - times.begin());
    if (i == 0) i = 1;
    if (i >= n) i = n - 1;
    return hermite(t, times[i - 1], times[i], values[i - 1], values[i], slopes[i - 1], slopes[i]);
}

std::vector<Vec> fd_slopes_on_grid(const std::vector<double>& grid,
                                   const std::vector<Vec>& values) {
    const auto n = grid.size();
    std::vector<Vec> slopes(n);
    if (n == 1) {
        slopes[0] = Vec::Zero(values[0].size());
        return slopes;
    }
    if (n == 2) {
        slopes[0] = (values[1] - values[0]) / (grid[1] - grid[0]);
        slopes[1] = slopes[0];
        return slopes;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        slopes[i] = (values[i + 1] - values[i - 1]) / (grid[i + 1] - grid[i - 1]);
    }
    const double h0 = grid[1] - grid[0];
    slopes[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h0);
    const double hn = grid[n - 1] - grid[n - 2];
    slopes[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * hn);
    return slopes;
}

Vec project_interpolated(const EmbeddedManifold& manifold, const Vec& q) {
    if (manifold.constraint_dim() == 0) return q;
    if (auto projected = manifold.project_point(q)) return *projected;
    return q;  // interpolated point too far off M; leave it to the caller's checks
}

void check_escape(const Vec& state, double escape_radius) {
    if (!state.allFinite() || state.norm() > escape_radius) {
        raise(ErrorCode::BlowUp, "solution left the escape radius");
    }
}

}  // namespace

Vec Trajectory::raw_at(double t) const {
    return interp(times, states, derivs, t);
}

Vec Trajectory::at(const EmbeddedManifold& manifold, double t) const {
    return project_interpolated(manifold, raw_at(t));
}

double Trajectory::sup_norm() const {
    double sup = 0.0;
    for (const auto& s : states) sup = std::max(sup, s.norm());
    return sup;
}

double Trajectory::max_constraint_violation(const EmbeddedManifold& manifold) const {
    if (manifold.constraint_dim() == 0) return 0.0;
    double worst = 0.0;
    for (const auto& s : states) {
        worst = std::max(worst, manifold.constraint(s).cwiseAbs().maxCoeff());
    }
    return worst;
}

History History::constant(const Vec& p, double delay, int n_nodes) {
    History phi;
    phi.delay = delay;
    if (delay == 0.0) {
        phi.grid = {0.0};
        phi.values = {p};
        return phi;
    }
    const int n = std::max(n_nodes, 4);
    phi.grid.resize(n + 1);
    phi.values.assign(n + 1, p);
    for (int i = 0; i <= n; ++i) phi.grid[i] = -delay + delay * i / n;
    phi.grid.back() = 0.0;
    return phi;
}

Vec History::at(const EmbeddedManifold& manifold, double theta) const {
    if (values.size() == 1) return values.front();
    return project_interpolated(manifold, interp(grid, values, fd_slopes(), theta));
}

std::vector<Vec> History::fd_slopes() const {
    return fd_slopes_on_grid(grid, values);
}

double History::sup_distance(const History& other) const {
    double sup = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sup = std::max(sup, (values[i] - other.values[i]).norm());
    }
    return sup;
}

double History::sup_norm() const {
    double sup = 0.0;
    for (const auto& v : values) sup = std::max(sup, v.norm());
    return sup;
}

std::optional<double> normalize_delay(double r, double T) {
    if (T <= 0.0) throw std::invalid_argument("normalize_delay requires T > 0");
    if (r < 0.0) throw std::invalid_argument("normalize_delay requires r >= 0");
    if (r == 0.0) return std::nullopt;
    const double n = std::ceil(r / T) - 1.0;
    double reduced = r - n * T;
    if (reduced <= 0.0) reduced = T;  // guard against roundoff at exact multiples
    return reduced;
}

namespace {

// One classical RK4 step followed by retraction onto M. rhs(t, x) must be
// evaluable slightly off the manifold (tangentized fields are).
template <typename Rhs>
Vec rk4_step(const EmbeddedManifold& manifold, const Rhs& rhs, double t, const Vec& x, double h) {
    const Vec k1 = rhs(t, x);
    const Vec k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vec k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vec k4 = rhs(t + h, x + h * k3);
    const Vec increment = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return manifold.retract(x, increment);
}

template <typename Rhs>
void integrate_fixed(const EmbeddedManifold& manifold, const Rhs& rhs, Trajectory& traj,
                     double t_to, int steps, double escape_radius) {
    double t = traj.times.back();
    const double h = (t_to - t) / steps;
    Vec x = traj.states.back();
    for (int i = 0; i < steps; ++i) {
        const double t_next = (i + 1 == steps) ? t_to : t + h;
        x = rk4_step(manifold, rhs, t, x, t_next - t);
        t = t_next;
        check_escape(x, escape_radius);
        // The derivative is evaluated before the node is appended so delayed
        // lookups only ever see fully stored intervals.
        const Vec d = rhs(t, x);
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.derivs.push_back(d);
    }
}

template <typename Rhs>
void integrate_adaptive(const EmbeddedManifold& manifold, const Rhs& rhs, Trajectory& traj,
                        double t_to, double h0, double tol, double escape_radius) {
    double t = traj.times.back();
    Vec x = traj.states.back();
    double h = std::min(h0, t_to - t);
    const double h_min = 1e-12 * std::max(1.0, std::abs(t_to));
    while (t < t_to) {
        h = std::min(h, t_to - t);
        const Vec big = rk4_step(manifold, rhs, t, x, h);
        const Vec half = rk4_step(manifold, rhs, t, x, 0.5 * h);
        const Vec two_half = rk4_step(manifold, rhs, t + 0.5 * h, half, 0.5 * h);
        const double err = (big - two_half).norm() / 15.0;
        const double scale = tol * (1.0 + x.norm());
        if (err <= scale || h <= h_min) {
            t += h;
            x = two_half;
            check_escape(x, escape_radius);
            const Vec d = rhs(t, x);
            traj.times.push_back(t);
            traj.states.push_back(x);
            traj.derivs.push_back(d);
        }
        const double factor =
            (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 4.0;
        h *= std::clamp(factor, 0.1, 4.0);
        if (h < h_min) h = h_min;
    }
}

}  // namespace

Trajectory flow_ode(const EmbeddedManifold& manifold, const TangentField& g, const Vec& p,
                    double t0, double t1, const IntegratorOptions& opts) {
    if (t1 < t0) throw std::invalid_argument("flow_ode requires t1 >= t0");
    auto rhs = [&g](double, const Vec& x) { return g(x); };
    Trajectory traj;
    traj.times = {t0};
    traj.states = {p};
    traj.derivs = {rhs(t0, p)};
    if (t1 == t0) return traj;
    const double span = t1 - t0;
    if (opts.adaptive) {
        const double h0 = opts.dt > 0.0 ? opts.dt : span / kDefaultStepsPerSpan;
        integrate_adaptive(manifold, rhs, traj, t1, h0, opts.local_tol, opts.escape_radius);
    } else {
        const double dt = opts.dt > 0.0 ? opts.dt : span / kDefaultStepsPerSpan;
        const int steps = std::max(1, static_cast<int>(std::ceil(span / dt - 1e-12)));
        integrate_fixed(manifold, rhs, traj, t1, steps, opts.escape_radius);
    }
    return traj;
}

Trajectory flow_dde(const EmbeddedManifold& manifold, const TangentField& g,
                    const PerturbationField& f, double lambda, const History& phi, double t1,
                    const IntegratorOptions& opts) {
    if (t1 <= 0.0) throw std::invalid_argument("flow_dde requires t1 > 0");
    const double r = phi.delay;
    const bool zero_delay = (r == 0.0);
    const bool has_f = f.valid() && lambda != 0.0;
    if (has_f && f.period() > 0.0) {
        const double rn = normalize_delay(f.delay(), f.period()).value_or(0.0);
        if (std::abs(rn - r) > 1e-9 * (1.0 + rn)) {
            throw std::invalid_argument(
                "flow_dde: history delay does not match the perturbation's normalized delay");
        }
    }

    Trajectory traj;
    traj.times = phi.grid;
    traj.states = phi.values;
    traj.derivs = phi.fd_slopes();

    // Delayed state read from the already computed part of the trajectory.
    // The node at t = 0 keeps the history's own one-sided slope: reads of a
    // cornered φ must follow φ, and the solution is read left of any lookup
    // time anyway.
    auto delayed = [&](double t) { return traj.at(manifold, t - r); };
    auto rhs = [&](double t, const Vec& x) {
        Vec value = g(x);
        if (has_f) value += lambda * f(t, x, zero_delay ? x : delayed(t));
        return value;
    };

    const double dt = opts.dt > 0.0 ? opts.dt : t1 / kDefaultStepsPerSpan;
    // Breakpoints at multiples of r keep the delayed argument strictly in the
    // past of each segment and avoid interpolating across derivative kinks.
    const double seg_len = zero_delay ? t1 : r;
    double t = 0.0;
    while (t < t1 - 1e-14 * t1) {
        const double t_to = std::min(t + seg_len, t1);
        const int steps = std::max(1, static_cast<int>(std::ceil((t_to - t) / dt - 1e-12)));
        integrate_fixed(manifold, rhs, traj, t_to, steps, opts.escape_radius);
        t = t_to;
    }
    return traj;
}

Mat variational_flow(const EmbeddedManifold& manifold, const TangentField& g, const Vec& p,
                     double T, const IntegratorOptions& opts) {
    const int m = manifold.dim();
    const Mat basis0 = manifold.tangent_basis(p);

    const double dt = opts.dt > 0.0 ? opts.dt : (T > 0.0 ? T / kDefaultStepsPerSpan : 1.0);
    const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-12)));
    const double h = T / steps;

    Vec x = p;
    Mat v = basis0;
    auto rhs_x = [&g](const Vec& q) { return g(q); };
    auto rhs_v = [&g](const Vec& q, const Mat& w) -> Mat { return g.jacobian(q) * w; };

    for (int i = 0; i < steps; ++i) {
        const Vec k1 = rhs_x(x);
        const Mat l1 = rhs_v(x, v);
        const Vec x2 = x + 0.5 * h * k1;
        const Vec k2 = rhs_x(x2);
        const Mat l2 = rhs_v(x2, v + 0.5 * h * l1);
        const Vec x3 = x + 0.5 * h * k2;
        const Vec k3 = rhs_x(x3);
        const Mat l3 = rhs_v(x3, v + 0.5 * h * l2);
        const Vec x4 = x + h * k3;
        const Vec k4 = rhs_x(x4);
        const Mat l4 = rhs_v(x4, v + h * l3);

        x = manifold.retract(x, (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        check_escape(x, opts.escape_radius);
        v += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        if (manifold.constraint_dim() > 0) {
            for (int j = 0; j < m; ++j) {
                v.col(j) = manifold.project_tangent(x, Vec(v.col(j)));
            }
        }
    }
    const Mat basis1 = manifold.tangent_basis(x);
    return basis1.transpose() * v;
}

}  // namespace orbitcert
