#ifndef HYCOL_TRACE_IO_HPP
#define HYCOL_TRACE_IO_HPP

#include <ostream>
#include <string>

#include <json.hpp>

#include "hycol/hybrid.hpp"

namespace hycol {

inline constexpr const char* kTraceHeader = "t,record_type,robot_id,other_id,x,y,theta,v,w,q,extra";

/// Shortest-free, 17-significant-digit rendering used by every emitted file.
std::string format_number(double value);

/// One row per record. The `extra` column holds `key=value` pairs joined by ';'.
void write_trace_csv(const Trace& tr, std::ostream& out);

/// Columns t,x,y,theta,v,w taken from the robot's samples.
void write_plot_csv(const Trace& tr, int robot_id, std::ostream& out);

nlohmann::json metrics_to_json(const Metrics& m);

}  // namespace hycol

#endif  // HYCOL_TRACE_IO_HPP
