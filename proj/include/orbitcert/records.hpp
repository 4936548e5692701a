#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "orbitcert/branch.hpp"
#include "orbitcert/degree.hpp"
#include "orbitcert/integrate.hpp"

namespace orbitcert::records {

/// Full-precision scientific notation used by every data record.
[[nodiscard]] std::string format_double(double value);

/// One record per node: t=<v> x0=<v> ... x{k-1}=<v>
void write_trajectory(std::ostream& out, const Trajectory& traj);

/// One record per node: theta=<v> x0=<v> ... x{k-1}=<v>
void write_history(std::ostream& out, const History& phi);

/// One record per zero: point=<v,...> sign=<±1> residual=<v>
void write_zero_table(std::ostream& out, const std::vector<ZeroRecord>& zeros);

/// One record per pair: index=<i> lambda=<v> arclength=<v> sup_norm=<v>
/// residual=<v> trivial=<0|1> loop=t,x0,..;t,x0,..;...
void write_branch(std::ostream& out, const Branch& branch);

}  // namespace orbitcert::records
