// gopaf/src/types.cc

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

#include "gopaf/types.h"

#include <cmath>
#include <limits>
#include <sstream>

namespace gopaf {

PhoneInventory::PhoneInventory(std::vector<std::string> symbols,
                               PhoneId blank_id)
    : symbols_(std::move(symbols)), blank_(blank_id) {
  if (symbols_.empty()) throw Error("phone inventory is empty");
  if (blank_ < 0 || blank_ >= size())
    throw Error("blank id " + std::to_string(blank_) + " out of range");
  for (PhoneId i = 0; i < size(); ++i) {
    if (symbols_[i].empty()) throw Error("empty phone name in inventory");
    if (!index_.emplace(symbols_[i], i).second)
      throw Error("duplicate phone name '" + symbols_[i] + "'");
  }
}

const std::string& PhoneInventory::name(PhoneId id) const {
  if (!is_valid(id)) throw Error("phone id " + std::to_string(id) + " out of range");
  return symbols_[id];
}

std::optional<PhoneId> PhoneInventory::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PhoneId PhoneInventory::id(std::string_view name) const {
  auto id = find(name);
  if (!id) throw Error("unknown phone '" + std::string(name) + "'");
  return *id;
}

std::vector<PhoneId> PhoneInventory::phones() const {
  std::vector<PhoneId> out;
  out.reserve(symbols_.size() - 1);
  for (PhoneId i = 0; i < size(); ++i)
    if (i != blank_) out.push_back(i);
  return out;
}

Posteriorgram::Posteriorgram(int frames, int symbols,
                             std::vector<double> log_posteriors,
                             double tolerance)
    : frames_(frames), symbols_(symbols), data_(std::move(log_posteriors)) {
  if (frames_ < 1) throw Error("posteriorgram needs at least one frame");
  if (symbols_ < 1) throw Error("posteriorgram needs at least one symbol");
  if (data_.size() != static_cast<std::size_t>(frames_) * symbols_)
    throw Error("posteriorgram data size does not match T x V");
  for (int t = 0; t < frames_; ++t) {
    double sum = 0.0;
    for (double x : row(t)) {
      if (std::isnan(x) || x == std::numeric_limits<double>::infinity())
        throw Error("posteriorgram frame " + std::to_string(t) +
                    " has a NaN or +inf entry");
      sum += std::exp(x);
    }
    if (std::abs(sum - 1.0) > tolerance) {
      std::ostringstream msg;
      msg << "posteriorgram frame " << t << " sums to " << sum
          << " (tolerance " << tolerance << ")";
      throw Error(msg.str());
    }
  }
}

Posteriorgram Posteriorgram::from_probabilities(
    const std::vector<std::vector<double>>& rows, double tolerance) {
  if (rows.empty()) throw Error("posteriorgram needs at least one frame");
  const int v = static_cast<int>(rows.front().size());
  std::vector<double> data;
  data.reserve(rows.size() * v);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != v) throw Error("ragged probability rows");
    for (double p : r) {
      if (p < 0.0) throw Error("negative probability");
      data.push_back(p > 0.0 ? std::log(p)
                             : -std::numeric_limits<double>::infinity());
    }
  }
  return Posteriorgram(static_cast<int>(rows.size()), v, std::move(data),
                       tolerance);
}

Posteriorgram Posteriorgram::slice(int first, int last) const {
  if (first < 0 || last >= frames_ || first > last)
    throw Error("invalid frame slice");
  std::vector<double> data(data_.begin() + static_cast<std::ptrdiff_t>(first) * symbols_,
                           data_.begin() + static_cast<std::ptrdiff_t>(last + 1) * symbols_);
  // Rows were already validated; skip the check by using an infinite tolerance.
  return Posteriorgram(last - first + 1, symbols_, std::move(data),
                       std::numeric_limits<double>::infinity());
}

void CanonicalUtterance::validate(const PhoneInventory& inventory,
                                  int frames) const {
  if (phones.empty()) throw Error("utterance '" + id + "' has no phones");
  for (PhoneId p : phones) {
    if (!inventory.is_valid(p))
      throw Error("utterance '" + id + "': phone id out of range");
    if (p == inventory.blank())
      throw Error("utterance '" + id + "': blank in canonical phones");
  }
  if (labels && labels->size() != phones.size())
    throw Error("utterance '" + id + "': label count does not match phones");
  if (alignment) {
    if (alignment->size() != phones.size())
      throw Error("utterance '" + id + "': alignment count does not match phones");
    for (const FrameSpan& s : *alignment) {
      if (s.first < 0 || s.first > s.last || (frames >= 0 && s.last >= frames))
        throw Error("utterance '" + id + "': alignment span [" +
                    std::to_string(s.first) + ", " + std::to_string(s.last) +
                    "] out of range");
    }
  }
}

}  // namespace gopaf
