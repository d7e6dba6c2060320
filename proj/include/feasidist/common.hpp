// Copyright 2026 The feasidist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEASIDIST_COMMON_HPP
#define FEASIDIST_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace feasidist {

// Input failed a structural precondition (bad masses, unordered atoms, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A requested construction is well-formed but exceeds a configured size cap.
class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

// A verification gate (domination certificate, level check) reported failure.
class CertificationError : public std::runtime_error {
 public:
  explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

// Compensated (Neumaier) accumulator.  Keeps the running error of a long sum
// near one ulp of the result instead of growing linearly with the term count;
// several mass-accounting invariants here sit at 1e-12 over 1e5..1e9 terms.
class NeumaierSum {
 public:
  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Tolerance used when merging atom locations that differ only by rounding.
inline constexpr double kAtomMergeTol = 1e-12;

// Tolerance for probability-mass normalization checks.
inline constexpr double kMassTol = 1e-12;

}  // namespace feasidist

#endif  // FEASIDIST_COMMON_HPP
