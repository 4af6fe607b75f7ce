// Copyright 2026 The rsvp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Plain-text operator files.
//
//   qubits=<q> p=<p> scale=<float>        followed by p code lines over IXYZ
//   gaussian m=<m> n=<n> p=<p> seed=<u64>  (the matrix is regenerated)

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "rsvp/core/format.hpp"
#include "rsvp/operators/gaussian.hpp"
#include "rsvp/operators/pauli.hpp"

namespace rsvp {

namespace detail {

inline std::map<std::string, std::string> parse_header_fields(const std::string& line) {
  std::map<std::string, std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      out[tok] = "";
    } else {
      out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  return out;
}

inline std::uint64_t header_u64(const std::map<std::string, std::string>& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end() || it->second.empty())
    throw dimension_error("operator file: header is missing '" + key + "'");
  std::size_t used = 0;
  const std::uint64_t v = std::stoull(it->second, &used);
  if (used != it->second.size()) throw dimension_error("operator file: bad value for '" + key + "'");
  return v;
}

}  // namespace detail

inline void write_operator(std::ostream& os, const PauliOperator& op) {
  os << "qubits=" << op.qubits() << " p=" << op.measurements()
     << " scale=" << format_double(op.scale()) << '\n';
  for (const PauliCode& c : op.codes()) os << c.to_string() << '\n';
}

inline void write_operator(std::ostream& os, const GaussianOperator& op) {
  require(op.seed().has_value(), "write_operator: Gaussian operator has no seed");
  os << "gaussian m=" << op.rows() << " n=" << op.cols() << " p=" << op.measurements()
     << " seed=" << *op.seed() << '\n';
}

inline PauliOperator read_pauli_operator(std::istream& is, bool real_mode = true) {
  std::string line;
  if (!std::getline(is, line)) throw dimension_error("operator file: empty input");
  const auto h = detail::parse_header_fields(line);
  const int q = static_cast<int>(detail::header_u64(h, "qubits"));
  const auto p = static_cast<Index>(detail::header_u64(h, "p"));
  std::vector<PauliCode> codes;
  codes.reserve(static_cast<std::size_t>(p));
  while (static_cast<Index>(codes.size()) < p && std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    codes.push_back(PauliCode::from_string(line));
  }
  require(static_cast<Index>(codes.size()) == p, "operator file: fewer codes than the header states");
  PauliOperator op(q, std::move(codes), real_mode);
  const auto s = h.find("scale");
  if (s != h.end()) {
    const double scale = std::stod(s->second);
    require(std::abs(scale - op.scale()) <= 1e-12 * op.scale(),
            "operator file: scale does not equal sqrt(n / p)");
  }
  return op;
}

inline GaussianOperator read_gaussian_operator(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw dimension_error("operator file: empty input");
  const auto h = detail::parse_header_fields(line);
  require(h.count("gaussian") == 1, "operator file: not a Gaussian operator header");
  return GaussianOperator(static_cast<Index>(detail::header_u64(h, "m")),
                          static_cast<Index>(detail::header_u64(h, "n")),
                          static_cast<Index>(detail::header_u64(h, "p")),
                          detail::header_u64(h, "seed"));
}

}  // namespace rsvp
