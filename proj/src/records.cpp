#include "orbitcert/records.hpp"

#include <cstdio>

namespace orbitcert::records {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.16e", value);
    return buffer;
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << "t=" << format_double(traj.times[i]);
        const Vec& x = traj.states[i];
        for (int j = 0; j < x.size(); ++j) {
            out << " x" << j << "=" << format_double(x[j]);
        }
        out << "\n";
    }
}

void write_history(std::ostream& out, const History& phi) {
    for (std::size_t i = 0; i < phi.grid.size(); ++i) {
        out << "theta=" << format_double(phi.grid[i]);
        const Vec& x = phi.values[i];
        for (int j = 0; j < x.size(); ++j) {
            out << " x" << j << "=" << format_double(x[j]);
        }
        out << "\n";
    }
}

void write_zero_table(std::ostream& out, const std::vector<ZeroRecord>& zeros) {
    for (const auto& zero : zeros) {
        out << "point=";
        for (int j = 0; j < zero.point.size(); ++j) {
            if (j > 0) out << ",";
            out << format_double(zero.point[j]);
        }
        out << " sign=" << zero.local_sign << " residual=" << format_double(zero.residual)
            << "\n";
    }
}

void write_branch(std::ostream& out, const Branch& branch) {
    for (std::size_t i = 0; i < branch.pairs.size(); ++i) {
        const PeriodicPair& pair = branch.pairs[i];
        out << "index=" << i << " lambda=" << format_double(pair.lambda)
            << " arclength=" << format_double(branch.arclength[i])
            << " sup_norm=" << format_double(pair.sup_norm)
            << " residual=" << format_double(pair.residual)
            << " trivial=" << (pair.is_trivial ? 1 : 0) << " loop=";
        for (std::size_t node = 0; node < pair.loop.times.size(); ++node) {
            if (node > 0) out << ";";
            out << format_double(pair.loop.times[node]);
            for (int j = 0; j < pair.loop.states[node].size(); ++j) {
                out << "," << format_double(pair.loop.states[node][j]);
            }
        }
        out << "\n";
    }
}

}  // namespace orbitcert::records
