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

#ifndef RSA2_LABEL_SPACE_HPP_
#define RSA2_LABEL_SPACE_HPP_

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace rsa2 {

enum class SpaceKind {
  kContext,
  kMeaning,
  kUtterance,
  kStrategy,
  kAffectArousal,
  kAffectValence,
  kQud,
};

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

// An ordered, finite set of unique labels. The ordering is part of the
// space's identity: it fixes the index<->label bijection used by every
// Categorical defined over it. Immutable after construction.
class LabelSpace {
 public:
  LabelSpace(SpaceKind kind, std::vector<std::string> labels);

  SpaceKind kind() const { return kind_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t index) const;

  bool contains(const std::string& label) const;
  // Throws LabelOutOfSpaceError when the label is unknown.
  std::size_t index_of(const std::string& label) const;

  bool operator==(const LabelSpace& other) const {
    return kind_ == other.kind_ && labels_ == other.labels_;
  }

 private:
  SpaceKind kind_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using LabelSpacePtr = std::shared_ptr<const LabelSpace>;

LabelSpacePtr make_space(SpaceKind kind, std::vector<std::string> labels);

// True when the two handles denote the same space (pointer or content).
bool same_space(const LabelSpacePtr& a, const LabelSpacePtr& b);

}  // namespace rsa2

#endif  // RSA2_LABEL_SPACE_HPP_
