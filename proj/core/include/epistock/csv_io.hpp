#ifndef EPISTOCK_CSV_IO_HPP_
#define EPISTOCK_CSV_IO_HPP_

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "epistock/model.hpp"
#include "epistock/sweep.hpp"

namespace epistock {

/// Frozen column order of timeseries.csv (format `epistock timeseries v1`).
inline constexpr const char* kTimeseriesHeader =
    "t,u_a,i_a,rec_a,d_a,s_a,p_a,re_a,"
    "u_b,i_b,rec_b,d_b,s_b,p_b,re_b,switch_value,transfer_rate";

/// Frozen column order of phase.csv (format `epistock phase v1`).
inline constexpr const char* kPhaseHeader =
    "x,y,infected_ratio_a,infected_ratio_b,infected_ratio_mean,"
    "depleted_a,depleted_b,outcome,unserved_a,unserved_b,complete";

/// Writes `#` metadata, the header row and one row per sample with 17
/// significant digits (lossless round trip). Returns the data row count.
std::size_t write_timeseries_csv(const Trajectory& traj, std::ostream& sink);

/// Reads rows written by write_timeseries_csv (metadata lines skipped).
std::vector<TrajectorySample> read_timeseries_csv(std::istream& source);

/// One row per grid cell, row-major; axis/engine metadata in leading
/// comment lines. Returns the data row count.
std::size_t write_phase_csv(const SweepResult& res, std::ostream& sink);

/// Rebuilds a SweepResult from phase.csv. The embedded base config is not
/// serialized; axes, coordinates and per-cell summaries are restored.
SweepResult read_phase_csv(std::istream& source);

}  // namespace epistock

#endif  // EPISTOCK_CSV_IO_HPP_
