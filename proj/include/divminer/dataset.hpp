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

#ifndef DIVMINER_DATASET_HPP_
#define DIVMINER_DATASET_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace divminer {

// Dense item index into an ItemDictionary. Ids are assigned attribute by
// attribute, value by value, so id order is the canonical item order.
using ItemId = uint32_t;

// One attribute=value selection.
struct Item {
  uint32_t attribute = 0;
  uint32_t value = 0;
  std::string label;
};

struct Attribute {
  std::string name;
  ItemId first_item = 0;
  uint32_t domain_size = 0;
};

// The item universe of a discretized dataset. Shared (immutable) between the
// dataset and every result mined from it.
class ItemDictionary {
 public:
  ItemDictionary() = default;

  // Adds an attribute with the given value labels (full item display labels).
  void add_attribute(std::string name, const std::vector<std::string>& item_labels);

  size_t num_items() const { return items_.size(); }
  size_t num_attributes() const { return attributes_.size(); }
  const Item& item(ItemId id) const { return items_.at(id); }
  const Attribute& attribute(size_t index) const { return attributes_.at(index); }
  const std::vector<Item>& items() const { return items_; }
  const std::vector<Attribute>& attributes() const { return attributes_; }

  ItemId item_id(uint32_t attribute, uint32_t value) const;
  std::optional<ItemId> find_label(std::string_view label) const;

 private:
  std::vector<Attribute> attributes_;
  std::vector<Item> items_;
};

// A conjunction of items over distinct attributes, held sorted by item id.
class Itemset {
 public:
  Itemset() = default;
  // Sorts and deduplicates; attribute distinctness is checked by
  // make_itemset() against a dictionary.
  explicit Itemset(std::vector<ItemId> items);

  std::span<const ItemId> items() const { return items_; }
  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(ItemId id) const;

  Itemset with(ItemId id) const;
  Itemset without(ItemId id) const;

  // Lexicographic by item id.
  auto operator<=>(const Itemset&) const = default;
  bool operator==(const Itemset&) const = default;

 private:
  std::vector<ItemId> items_;
};

// Shorter itemsets first, then lexicographic by item id.
bool canonical_less(const Itemset& a, const Itemset& b);

struct ItemsetHash {
  size_t operator()(const Itemset& itemset) const noexcept;
};

// Validates that every id exists and attributes are distinct.
Itemset make_itemset(const ItemDictionary& dictionary, std::vector<ItemId> ids);

// Parses "a=1, b=2" (labels separated by ", ") into an itemset.
Itemset parse_itemset(const ItemDictionary& dictionary, std::string_view text);

// "a=1, b=2"; the empty itemset renders as "(all)".
std::string itemset_label(const ItemDictionary& dictionary, const Itemset& itemset);

// Rows over finite-domain attributes. Each row holds exactly one item per
// attribute, in attribute order.
class DiscretizedDataset {
 public:
  DiscretizedDataset(std::shared_ptr<const ItemDictionary> dictionary,
                     std::vector<ItemId> cells, std::vector<size_t> source_rows);

  const ItemDictionary& dictionary() const { return *dictionary_; }
  std::shared_ptr<const ItemDictionary> shared_dictionary() const { return dictionary_; }
  size_t num_rows() const { return source_rows_.size(); }
  size_t num_attributes() const { return dictionary_->num_attributes(); }
  std::span<const ItemId> row(size_t index) const;
  // Index of each retained row in the original table.
  const std::vector<size_t>& source_rows() const { return source_rows_; }

  // Stable 64-bit FNV-1a digest of labels and cells, as 16 hex digits.
  std::string content_hash() const;

 private:
  std::shared_ptr<const ItemDictionary> dictionary_;
  std::vector<ItemId> cells_;
  std::vector<size_t> source_rows_;
};

// True iff every item of the itemset appears in the row.
bool matches(std::span<const ItemId> row, const Itemset& itemset);

}  // namespace divminer

#endif  // DIVMINER_DATASET_HPP_
