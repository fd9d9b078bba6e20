// Copyright 2026 The divminer Authors
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
//

#include "divminer/dataset.hpp"

#include <algorithm>
#include <cstdio>

#include "divminer/error.hpp"

namespace divminer {

void ItemDictionary::add_attribute(std::string name,
                                   const std::vector<std::string>& item_labels) {
  const auto attribute_index = static_cast<uint32_t>(attributes_.size());
  Attribute attribute;
  attribute.name = std::move(name);
  attribute.first_item = static_cast<ItemId>(items_.size());
  attribute.domain_size = static_cast<uint32_t>(item_labels.size());
  for (uint32_t v = 0; v < item_labels.size(); ++v) {
    items_.push_back(Item{attribute_index, v, item_labels[v]});
  }
  attributes_.push_back(std::move(attribute));
}

ItemId ItemDictionary::item_id(uint32_t attribute, uint32_t value) const {
  const Attribute& a = attributes_.at(attribute);
  if (value >= a.domain_size) {
    throw Error(ErrorCode::kInvalidArgument,
                "value " + std::to_string(value) + " outside domain of '" +
                    a.name + "'");
  }
  return a.first_item + value;
}

std::optional<ItemId> ItemDictionary::find_label(std::string_view label) const {
  for (const Item& item : items_) {
    if (item.label == label) {
      return item_id(item.attribute, item.value);
    }
  }
  return std::nullopt;
}

Itemset::Itemset(std::vector<ItemId> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool Itemset::contains(ItemId id) const {
  return std::binary_search(items_.begin(), items_.end(), id);
}

Itemset Itemset::with(ItemId id) const {
  std::vector<ItemId> items = items_;
  items.push_back(id);
  return Itemset(std::move(items));
}

Itemset Itemset::without(ItemId id) const {
  std::vector<ItemId> items;
  items.reserve(items_.size());
  for (ItemId item : items_) {
    if (item != id) items.push_back(item);
  }
  Itemset out;
  out.items_ = std::move(items);
  return out;
}

bool canonical_less(const Itemset& a, const Itemset& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

size_t ItemsetHash::operator()(const Itemset& itemset) const noexcept {
  uint64_t h = 1469598103934665603ULL;
  for (ItemId id : itemset.items()) {
    h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return static_cast<size_t>(h);
}

Itemset make_itemset(const ItemDictionary& dictionary, std::vector<ItemId> ids) {
  Itemset itemset(std::move(ids));
  std::optional<uint32_t> previous;
  for (ItemId id : itemset.items()) {
    if (id >= dictionary.num_items()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "item id " + std::to_string(id) + " not in dictionary");
    }
    const uint32_t attribute = dictionary.item(id).attribute;
    // Ids are grouped by attribute, so duplicates are adjacent after sorting.
    if (previous && *previous == attribute) {
      throw Error(ErrorCode::kInvalidArgument,
                  "itemset selects attribute '" +
                      dictionary.attribute(attribute).name + "' twice");
    }
    previous = attribute;
  }
  return itemset;
}

Itemset parse_itemset(const ItemDictionary& dictionary, std::string_view text) {
  std::vector<ItemId> ids;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(", ", start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view label = text.substr(start, end - start);
    while (!label.empty() && label.front() == ' ') label.remove_prefix(1);
    while (!label.empty() && label.back() == ' ') label.remove_suffix(1);
    if (!label.empty()) {
      auto id = dictionary.find_label(label);
      if (!id) {
        throw Error(ErrorCode::kInvalidArgument,
                    "unknown item '" + std::string(label) + "'");
      }
      ids.push_back(*id);
    }
    start = end + 2;
  }
  return make_itemset(dictionary, std::move(ids));
}

std::string itemset_label(const ItemDictionary& dictionary, const Itemset& itemset) {
  if (itemset.empty()) return "(all)";
  std::string out;
  for (ItemId id : itemset.items()) {
    if (!out.empty()) out += ", ";
    out += dictionary.item(id).label;
  }
  return out;
}

DiscretizedDataset::DiscretizedDataset(
    std::shared_ptr<const ItemDictionary> dictionary, std::vector<ItemId> cells,
    std::vector<size_t> source_rows)
    : dictionary_(std::move(dictionary)),
      cells_(std::move(cells)),
      source_rows_(std::move(source_rows)) {
  const size_t width = dictionary_->num_attributes();
  if (cells_.size() != width * source_rows_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cell count does not match rows x attributes");
  }
  for (size_t r = 0; r < source_rows_.size(); ++r) {
    for (size_t a = 0; a < width; ++a) {
      const ItemId id = cells_[r * width + a];
      if (id >= dictionary_->num_items() || dictionary_->item(id).attribute != a) {
        throw Error(ErrorCode::kInvalidArgument,
                    "row " + std::to_string(r) + " holds an invalid item for attribute '" +
                        dictionary_->attribute(a).name + "'");
      }
    }
  }
}

std::span<const ItemId> DiscretizedDataset::row(size_t index) const {
  const size_t width = dictionary_->num_attributes();
  return std::span<const ItemId>(cells_).subspan(index * width, width);
}

std::string DiscretizedDataset::content_hash() const {
  uint64_t h = 1469598103934665603ULL;
  auto mix_byte = [&h](unsigned char byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  auto mix_u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) mix_byte(static_cast<unsigned char>(v >> (8 * i)));
  };
  for (const Attribute& attribute : dictionary_->attributes()) {
    for (char c : attribute.name) mix_byte(static_cast<unsigned char>(c));
    mix_byte(0);
  }
  for (const Item& item : dictionary_->items()) {
    for (char c : item.label) mix_byte(static_cast<unsigned char>(c));
    mix_byte(0);
  }
  for (ItemId id : cells_) mix_u32(id);
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

bool matches(std::span<const ItemId> row, const Itemset& itemset) {
  for (ItemId id : itemset.items()) {
    if (std::find(row.begin(), row.end(), id) == row.end()) return false;
  }
  return true;
}

}  // namespace divminer
