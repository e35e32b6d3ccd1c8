/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The v2x-sps Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "v2xsps/errors.hpp"
#include "v2xsps/grid.hpp"

namespace v2xsps {

enum class Method { proposed, greedy, random, oracle };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::proposed: return "proposed";
    case Method::greedy: return "greedy";
    case Method::random: return "random";
    case Method::oracle: return "oracle";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "proposed") return Method::proposed;
  if (s == "greedy") return Method::greedy;
  if (s == "random") return Method::random;
  if (s == "oracle") return Method::oracle;
  throw InputError("unknown method '" + std::string(s) + "'");
}

/// Vehicle -> global subchannel map for one cluster. `subchannel[i]` is the
/// subchannel of vehicle i.
struct Assignment {
  std::size_t cluster_id = 0;
  Method method = Method::proposed;
  std::vector<std::size_t> subchannel;

  std::size_t vehicles() const noexcept { return subchannel.size(); }
};

struct Violation {
  enum class Kind { out_of_range, same_subframe } kind;
  std::size_t first;   // vehicle
  std::size_t second;  // conflicting vehicle (same_subframe only)
  std::size_t subframe;
};

// Every vehicle holds exactly one in-range subchannel by construction of the
// vector; what remains to check is range and per-subframe exclusivity.
inline std::vector<Violation> find_violations(const Assignment& a, const ResourceGrid& grid) {
  std::vector<Violation> out;
  std::vector<std::size_t> owner(grid.subframes(), static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < a.subchannel.size(); ++v) {
    if (a.subchannel[v] >= grid.total_subchannels()) {
      out.push_back({Violation::Kind::out_of_range, v, v, 0});
      continue;
    }
    const std::size_t sf = grid.subframe_of(a.subchannel[v]);
    if (owner[sf] != static_cast<std::size_t>(-1)) {
      out.push_back({Violation::Kind::same_subframe, owner[sf], v, sf});
    } else {
      owner[sf] = v;
    }
  }
  return out;
}

inline bool is_feasible(const Assignment& a, const ResourceGrid& grid) {
  return find_violations(a, grid).empty();
}

inline void require_feasible(const Assignment& a, const ResourceGrid& grid) {
  auto v = find_violations(a, grid);
  if (v.empty()) return;
  const auto& f = v.front();
  if (f.kind == Violation::Kind::out_of_range) {
    throw ConstraintViolation("vehicle " + std::to_string(f.first) + " holds an out-of-range subchannel");
  }
  throw ConstraintViolation("vehicles " + std::to_string(f.first) + " and " +
                            std::to_string(f.second) + " share subframe " +
                            std::to_string(f.subframe));
}

}  // namespace v2xsps
