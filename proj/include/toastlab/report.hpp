// Copyright 2026 The Toastlab Authors.
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

#ifndef TOASTLAB_REPORT_HPP_
#define TOASTLAB_REPORT_HPP_

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace toastlab {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  bool pass = true;
  Json witness;  // null when the check passes
  Json info;     // counts and measured values, present either way
};

/// Outcome of a verifier. Checks keep insertion order; witnesses inside a
/// check are sorted by the verifier so reports are order-independent.
class Report {
 public:
  Check& add(std::string name, bool pass, Json witness = nullptr, Json info = nullptr) {
    checks_.push_back(Check{std::move(name), pass, std::move(witness), std::move(info)});
    return checks_.back();
  }

  bool passed() const {
    return std::all_of(checks_.begin(), checks_.end(),
                       [](const Check& c) { return c.pass; });
  }

  const Check* find(const std::string& name) const {
    for (const Check& c : checks_) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  /// Pass state of a named check; absent checks count as failed.
  bool passed(const std::string& name) const {
    const Check* c = find(name);
    return c != nullptr && c->pass;
  }

  const std::vector<Check>& checks() const { return checks_; }

  Json to_json() const {
    Json out;
    out["pass"] = passed();
    Json list = Json::array();
    for (const Check& c : checks_) {
      Json item;
      item["name"] = c.name;
      item["pass"] = c.pass;
      item["witness"] = c.witness;
      if (!c.info.is_null()) item["info"] = c.info;
      list.push_back(std::move(item));
    }
    out["checks"] = std::move(list);
    return out;
  }

  std::string summary() const {
    std::string s;
    for (const Check& c : checks_) {
      if (!s.empty()) s += ' ';
      s += c.name + (c.pass ? "=ok" : "=FAIL");
    }
    return s;
  }

 private:
  std::vector<Check> checks_;
};

// Witness lists are truncated to keep reports readable; the full count goes
// in `info`.
inline constexpr std::size_t kMaxWitnesses = 16;

template <typename T>
Json capped(const std::vector<T>& items) {
  Json out = Json::array();
  for (std::size_t i = 0; i < items.size() && i < kMaxWitnesses; ++i) {
    out.push_back(items[i]);
  }
  return out;
}

}  // namespace toastlab

#endif  // TOASTLAB_REPORT_HPP_
