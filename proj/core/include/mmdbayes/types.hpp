// Copyright 2026 The mmdbayes Authors
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

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace mmdbayes {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;

/// Observations stored one per row; row-major so each row is a contiguous span.
using Samples = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Raised when a model/kernel/estimator pairing has no implementation.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline std::span<const double> row_span(const Samples& x, Index i) {
  return {x.data() + i * x.cols(), static_cast<std::size_t>(x.cols())};
}

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace mmdbayes
