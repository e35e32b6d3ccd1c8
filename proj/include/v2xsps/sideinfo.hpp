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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "v2xsps/errors.hpp"
#include "v2xsps/matrix.hpp"
#include "v2xsps/scenario.hpp"

namespace v2xsps {

/// Uniform b-bit quantizer over [lo_db, hi_db], applied in the dB domain.
/// Reconstruction is the bin midpoint.
class QuantizerSpec {
 public:
  static constexpr unsigned kMaxBits = 8;

  QuantizerSpec(unsigned bits, double lo_db = -15.0, double hi_db = 35.0)
      : bits_(bits), lo_(lo_db), hi_(hi_db) {
    if (bits_ < 1 || bits_ > kMaxBits) {
      throw InputError("quantizer: bits must be in [1, 8], got " + std::to_string(bits_));
    }
    if (!(lo_ < hi_) || !std::isfinite(lo_) || !std::isfinite(hi_)) {
      throw InputError("quantizer: need finite lo_db < hi_db");
    }
  }

  unsigned bits() const noexcept { return bits_; }
  double lo_db() const noexcept { return lo_; }
  double hi_db() const noexcept { return hi_; }
  std::size_t levels() const noexcept { return std::size_t{1} << bits_; }
  double width_db() const noexcept { return (hi_ - lo_) / static_cast<double>(levels()); }

  double reconstruction(std::size_t index) const noexcept {
    return lo_ + (static_cast<double>(index) + 0.5) * width_db();
  }

 private:
  unsigned bits_;
  double lo_;
  double hi_;
};

struct Quantized {
  std::size_t index;
  double recon_db;
};

inline Quantized quantize(const QuantizerSpec& q, double sinr_db) {
  const double x = std::clamp(sinr_db, q.lo_db(), q.hi_db());
  const double pos = std::floor((x - q.lo_db()) / q.width_db());
  // hi_db itself lands on levels(); fold it into the top bin.
  const std::size_t top = q.levels() - 1;
  const std::size_t index = pos <= 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), top);
  return {index, q.reconstruction(index)};
}

// Shannon rate B*log2(1 + SINR) for SINR given in dB.
inline double rate_from_sinr(double bandwidth_hz, double sinr_db) {
  if (!(bandwidth_hz > 0.0)) throw InputError("rate: bandwidth must be > 0");
  return bandwidth_hz * std::log2(1.0 + std::pow(10.0, sinr_db / 10.0));
}

/// Achievable rates in bits/s for every (vehicle, subchannel) of one cluster.
/// Row-major storage is the vehicle-major edge-weight vector of the matching.
struct RateMatrix {
  std::size_t cluster_id = 0;
  Matrix<double> values;

  std::size_t vehicles() const noexcept { return values.rows(); }
  std::size_t subchannels() const noexcept { return values.cols(); }
};

inline RateMatrix first_rows(const RateMatrix& m, std::size_t n) {
  if (n > m.vehicles()) throw ShapeError("first_rows: not enough rows");
  const auto flat = m.values.flat();
  return {m.cluster_id, Matrix<double>(n, m.subchannels(),
                                       std::vector<double>(flat.begin(), flat.begin() + n * m.subchannels()))};
}

/// `decision` weights drive the scheduler; `truth` weights score it.
struct RatePair {
  RateMatrix decision;
  RateMatrix truth;
};

inline RateMatrix rates_of(const SinrMatrix& sinr, double bandwidth_hz) {
  RateMatrix out{sinr.cluster_id, Matrix<double>(sinr.vehicles(), sinr.subchannels())};
  auto& dst = out.values.storage();
  const auto src = sinr.values.flat();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = rate_from_sinr(bandwidth_hz, src[i]);
  return out;
}

inline SinrMatrix quantize_matrix(const SinrMatrix& sinr, const QuantizerSpec& q) {
  Matrix<double> m(sinr.vehicles(), sinr.subchannels());
  auto& dst = m.storage();
  const auto src = sinr.values.flat();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize(q, src[i]).recon_db;
  return SinrMatrix(sinr.cluster_id, std::move(m));
}

/// Truth uses the fine-grained SINR. Decision uses the quantized
/// reconstruction when `q` is set, otherwise it is a copy of truth.
inline RatePair build_rate_matrices(const SinrMatrix& sinr, const std::optional<QuantizerSpec>& q,
                                    double bandwidth_hz) {
  RateMatrix truth = rates_of(sinr, bandwidth_hz);
  if (!q) return {truth, truth};
  return {rates_of(quantize_matrix(sinr, *q), bandwidth_hz), std::move(truth)};
}

// bits == 0 means ideal side information.
inline std::optional<QuantizerSpec> quantizer_for_bits(unsigned bits, double lo_db, double hi_db) {
  if (bits == 0) return std::nullopt;
  return QuantizerSpec(bits, lo_db, hi_db);
}

}  // namespace v2xsps
