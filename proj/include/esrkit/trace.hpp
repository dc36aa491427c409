/* Copyright 2026 The Esrkit Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ESRKIT_TRACE_HPP
#define ESRKIT_TRACE_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "esrkit/json_util.hpp"

namespace esrkit {

enum class AxisKind { delay_ns, recovery_ns, time_ns, field_t };

inline std::string to_string(AxisKind kind) {
  switch (kind) {
    case AxisKind::delay_ns: return "delay_ns";
    case AxisKind::recovery_ns: return "recovery_ns";
    case AxisKind::time_ns: return "time_ns";
    case AxisKind::field_t: return "field_T";
  }
  throw std::logic_error("unreachable axis kind");
}

inline AxisKind axis_kind_from_string(const std::string& name) {
  if (name == "delay_ns") return AxisKind::delay_ns;
  if (name == "recovery_ns") return AxisKind::recovery_ns;
  if (name == "time_ns") return AxisKind::time_ns;
  if (name == "field_T") return AxisKind::field_t;
  throw config_error("unknown trace axis kind '" + name + "'");
}

/// A sampled one-dimensional signal: (abscissa, amplitude) pairs with a
/// declared axis kind and free-form metadata.
struct Trace {
  AxisKind kind = AxisKind::time_ns;
  std::vector<double> axis;
  std::vector<double> amplitude;
  std::map<std::string, std::string> meta;

  static Trace make(AxisKind kind, std::vector<double> axis, std::vector<double> amplitude,
                    std::map<std::string, std::string> meta = {}) {
    if (axis.size() != amplitude.size())
      throw std::invalid_argument("Trace: axis and amplitude lengths differ");
    for (double v : axis)
      if (!std::isfinite(v)) throw std::invalid_argument("Trace: non-finite abscissa");
    for (double v : amplitude)
      if (!std::isfinite(v)) throw std::invalid_argument("Trace: non-finite amplitude");
    Trace t;
    t.kind = kind;
    t.axis = std::move(axis);
    t.amplitude = std::move(amplitude);
    t.meta = std::move(meta);
    return t;
  }
};

namespace detail {

inline std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

inline void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << "# kind=" << to_string(trace.kind) << "\n";
  for (const auto& [key, value] : trace.meta) out << "# " << key << "=" << value << "\n";
  for (std::size_t i = 0; i < trace.axis.size(); ++i)
    out << detail::format_g12(trace.axis[i]) << "," << detail::format_g12(trace.amplitude[i])
        << "\n";
}

inline void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  write_trace_csv(trace, out);
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline Trace read_trace_csv(std::istream& in, const std::string& label = "<stream>") {
  std::string kind_name;
  std::map<std::string, std::string> meta;
  std::vector<double> axis, amplitude;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      const auto start = body.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      body = body.substr(start);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "kind")
        kind_name = value;
      else
        meta[key] = value;
      continue;
    }
    double x = 0.0, y = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2)
      throw config_error(label + ":" + std::to_string(lineno) + ": malformed CSV row");
    axis.push_back(x);
    amplitude.push_back(y);
  }
  if (kind_name.empty()) throw config_error(label + ": missing '# kind=' header");
  return Trace::make(axis_kind_from_string(kind_name), std::move(axis), std::move(amplitude),
                     std::move(meta));
}

inline Trace read_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return read_trace_csv(in, path);
}

}  // namespace esrkit

#endif  // ESRKIT_TRACE_HPP
