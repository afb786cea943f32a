// Copyright 2026 The rsa2 Authors
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

#include "rsa2/label_space.hpp"

#include <utility>

#include "rsa2/errors.hpp"

namespace rsa2 {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::kContext:
      return "context";
    case SpaceKind::kMeaning:
      return "meaning";
    case SpaceKind::kUtterance:
      return "utterance";
    case SpaceKind::kStrategy:
      return "strategy";
    case SpaceKind::kAffectArousal:
      return "affect-arousal";
    case SpaceKind::kAffectValence:
      return "affect-valence";
    case SpaceKind::kQud:
      return "qud";
  }
  return "unknown";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "context") return SpaceKind::kContext;
  if (name == "meaning") return SpaceKind::kMeaning;
  if (name == "utterance") return SpaceKind::kUtterance;
  if (name == "strategy") return SpaceKind::kStrategy;
  if (name == "affect-arousal") return SpaceKind::kAffectArousal;
  if (name == "affect-valence") return SpaceKind::kAffectValence;
  if (name == "qud") return SpaceKind::kQud;
  throw DataError("unknown label-space kind: \"" + name + "\"");
}

LabelSpace::LabelSpace(SpaceKind kind, std::vector<std::string> labels)
    : kind_(kind), labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw DataError("label space of kind " + to_string(kind_) +
                    " must have at least one label");
  }
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, inserted] = index_.emplace(labels_[i], i);
    if (!inserted) {
      throw DataError("duplicate label \"" + labels_[i] + "\" in " +
                      to_string(kind_) + " space");
    }
  }
}

const std::string& LabelSpace::label(std::size_t index) const {
  if (index >= labels_.size()) {
    throw LabelOutOfSpaceError("index " + std::to_string(index) +
                               " out of range for " + to_string(kind_) +
                               " space of size " +
                               std::to_string(labels_.size()));
  }
  return labels_[index];
}

bool LabelSpace::contains(const std::string& label) const {
  return index_.find(label) != index_.end();
}

std::size_t LabelSpace::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    throw LabelOutOfSpaceError("label \"" + label + "\" not in " +
                               to_string(kind_) + " space");
  }
  return it->second;
}

LabelSpacePtr make_space(SpaceKind kind, std::vector<std::string> labels) {
  return std::make_shared<const LabelSpace>(kind, std::move(labels));
}

bool same_space(const LabelSpacePtr& a, const LabelSpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace rsa2
