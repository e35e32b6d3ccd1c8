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

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "v2xsps/errors.hpp"

namespace v2xsps {

/// Sidelink time-frequency lattice for one scheduling window.
///
/// A window holds `subframes` subframes of `subframe_ms` each; every subframe
/// carries `subchannels_per_subframe` subchannels of `bandwidth_hz`. Global
/// subchannel indices are zero-based and row-major over (subframe, slot), so
/// index k lives in subframe k / K at slot k % K. The K subchannels sharing a
/// subframe form one macro-vertex.
class ResourceGrid {
 public:
  ResourceGrid(std::size_t subchannels_per_subframe, std::size_t subframes,
               double subframe_ms, double bandwidth_hz)
      : k_(subchannels_per_subframe), l_(subframes), t_ms_(subframe_ms), b_hz_(bandwidth_hz) {
    if (k_ < 1) throw InputError("grid: K must be >= 1");
    if (l_ < 1) throw InputError("grid: L must be >= 1");
    if (!(t_ms_ > 0.0) || !std::isfinite(t_ms_)) throw InputError("grid: T_ms must be > 0");
    if (!(b_hz_ > 0.0) || !std::isfinite(b_hz_)) throw InputError("grid: B_hz must be > 0");
  }

  std::size_t subchannels_per_subframe() const noexcept { return k_; }
  std::size_t subframes() const noexcept { return l_; }
  double subframe_ms() const noexcept { return t_ms_; }
  double bandwidth_hz() const noexcept { return b_hz_; }

  std::size_t total_subchannels() const noexcept { return k_ * l_; }
  double window_ms() const noexcept { return t_ms_ * static_cast<double>(l_); }

  std::size_t subframe_of(std::size_t subchannel) const {
    check(subchannel);
    return subchannel / k_;
  }

  std::size_t slot_of(std::size_t subchannel) const {
    check(subchannel);
    return subchannel % k_;
  }

  std::size_t subchannel_at(std::size_t subframe, std::size_t slot) const {
    if (subframe >= l_ || slot >= k_) {
      throw RangeError("grid: (subframe " + std::to_string(subframe) + ", slot " +
                       std::to_string(slot) + ") outside grid");
    }
    return subframe * k_ + slot;
  }

  // One-based r_1..r_KL labels are used only at I/O boundaries.
  static std::size_t to_one_based(std::size_t subchannel) noexcept { return subchannel + 1; }
  std::size_t from_one_based(std::size_t label) const {
    if (label == 0) throw RangeError("grid: one-based label 0");
    check(label - 1);
    return label - 1;
  }

  friend bool operator==(const ResourceGrid&, const ResourceGrid&) = default;

 private:
  void check(std::size_t subchannel) const {
    if (subchannel >= k_ * l_) {
      throw RangeError("grid: subchannel " + std::to_string(subchannel) + " outside [0, " +
                       std::to_string(k_ * l_) + ")");
    }
  }

  std::size_t k_;
  std::size_t l_;
  double t_ms_;
  double b_hz_;
};

/// Countdown of scheduling windows left in a semi-persistent reservation.
class SpsTimer {
 public:
  SpsTimer(double reservation_s, double window_ms)
      : reservation_s_(reservation_s), window_ms_(window_ms) {
    if (!(reservation_s_ >= 0.0) || !std::isfinite(reservation_s_)) {
      throw InputError("sps: reservation must be a finite non-negative duration");
    }
    if (!(window_ms_ > 0.0) || !std::isfinite(window_ms_)) {
      throw InputError("sps: window length must be > 0");
    }
    // Partial windows round up so the whole reservation is covered.
    remaining_ = static_cast<std::size_t>(std::ceil(reservation_s_ * 1000.0 / window_ms_));
  }

  double reservation_s() const noexcept { return reservation_s_; }
  double window_ms() const noexcept { return window_ms_; }
  std::size_t remaining_windows() const noexcept { return remaining_; }
  bool reselection_needed() const noexcept { return remaining_ == 0; }

  // Value semantics: returns the timer after one elapsed window.
  [[nodiscard]] SpsTimer ticked() const noexcept {
    SpsTimer next = *this;
    if (next.remaining_ > 0) --next.remaining_;
    return next;
  }

 private:
  double reservation_s_;
  double window_ms_;
  std::size_t remaining_ = 0;
};

inline SpsTimer tick_window(const SpsTimer& timer) noexcept { return timer.ticked(); }

/// Release-14 reservation durations in seconds.
inline const std::vector<double>& default_sps_pool_s() {
  static const std::vector<double> pool{1.0, 4.0, 8.0};
  return pool;
}

// Uniform draw from the reservation pool.
template <typename Rng>
double draw_reservation_s(std::span<const double> pool, Rng& rng) {
  if (pool.empty()) throw InputError("sps: empty reservation pool");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

}  // namespace v2xsps
