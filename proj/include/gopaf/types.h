// gopaf/include/gopaf/types.h

// Copyright 2026 The gopaf Authors
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

#ifndef GOPAF_TYPES_H_
#define GOPAF_TYPES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gopaf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when no accepted path fits into the available frames.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

using PhoneId = int;

// Log probabilities below this are treated as exact zeros (the smallest
// positive double is about exp(-745)).
inline constexpr double kLogUnderflow = -745.0;

/// Output symbol set: the phonemes plus the CTC blank, with dense ids.
class PhoneInventory {
 public:
  PhoneInventory(std::vector<std::string> symbols, PhoneId blank_id);

  int size() const { return static_cast<int>(symbols_.size()); }
  PhoneId blank() const { return blank_; }
  const std::string& name(PhoneId id) const;
  const std::vector<std::string>& symbols() const { return symbols_; }

  std::optional<PhoneId> find(std::string_view name) const;
  // Throws Error for unknown names.
  PhoneId id(std::string_view name) const;

  bool is_valid(PhoneId id) const { return id >= 0 && id < size(); }
  bool is_phone(PhoneId id) const { return is_valid(id) && id != blank_; }

  // Non-blank ids in inventory order.
  std::vector<PhoneId> phones() const;

 private:
  std::vector<std::string> symbols_;
  PhoneId blank_;
  std::unordered_map<std::string, PhoneId> index_;
};

/// T x V matrix of per-frame natural-log posteriors, row-major.
///
/// Every row must exponentiate-sum to one within the tolerance given at
/// construction. Entries are finite or -inf.
class Posteriorgram {
 public:
  static constexpr double kDefaultTolerance = 1e-6;

  Posteriorgram(int frames, int symbols, std::vector<double> log_posteriors,
                double tolerance = kDefaultTolerance);

  // Builds from linear probabilities (rows of length V).
  static Posteriorgram from_probabilities(
      const std::vector<std::vector<double>>& rows,
      double tolerance = kDefaultTolerance);

  int frames() const { return frames_; }
  int symbols() const { return symbols_; }

  double log_prob(int t, PhoneId v) const {
    return data_[static_cast<std::size_t>(t) * symbols_ + v];
  }
  std::span<const double> row(int t) const {
    return {data_.data() + static_cast<std::size_t>(t) * symbols_,
            static_cast<std::size_t>(symbols_)};
  }
  const std::vector<double>& data() const { return data_; }

  // Frames [first, last], both inclusive.
  Posteriorgram slice(int first, int last) const;

 private:
  int frames_;
  int symbols_;
  std::vector<double> data_;
};

/// Inclusive frame interval.
struct FrameSpan {
  int first = 0;
  int last = 0;

  int length() const { return last - first + 1; }
  friend bool operator==(const FrameSpan&, const FrameSpan&) = default;
};

/// Canonical phoneme sequence with optional per-phone labels and alignment.
struct CanonicalUtterance {
  std::string id;
  std::vector<PhoneId> phones;
  std::optional<std::vector<int>> labels;
  std::optional<std::vector<FrameSpan>> alignment;

  // Throws Error if phones are empty or not valid non-blank ids, if labels
  // or alignment have the wrong length, or if a span falls outside
  // [0, frames). Pass frames < 0 to skip the span range check.
  void validate(const PhoneInventory& inventory, int frames = -1) const;
};

}  // namespace gopaf

#endif  // GOPAF_TYPES_H_
