#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lcf {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

/// One raw feedback row: user, item, behavior tag, magnitude. The magnitude
/// is validated during parsing and then discarded.
struct InteractionRecord {
  std::string user_key;
  std::string item_key;
  std::string behavior;
  double magnitude = 0.0;
};

struct IngestConfig {
  std::string behavior = "purchase";  // rows with any other tag are dropped
  bool dedup = true;                  // false: a repeated (user,item) row is an error
};

struct DatasetStats {
  std::size_t n_users = 0;
  std::size_t n_items = 0;
  std::size_t n_interactions = 0;
  double sparsity = 0.0;  // 1 - n_interactions / (n_users * n_items)
};

/**
 * Interned, deduplicated implicit-feedback dataset.
 *
 * Users and items are mapped to dense ordinals in first-appearance order of
 * the kept rows, which keeps golden files stable across runs. Two aligned
 * adjacency structures are maintained as exact transposes of each other:
 * per-item liked sets (the users who gave positive feedback) and per-user
 * histories. Both are sorted ascending. Instances are immutable after
 * construction and safe for concurrent reads.
 */
class InteractionDataset {
 public:
  /// Streams CSV rows (user,item,behavior,value,flag), keeps those matching
  /// cfg.behavior, interns keys and builds both adjacency views.
  /// Throws std::runtime_error with the 1-based line number on a malformed
  /// row, and "no interactions" when nothing survives the filter.
  static InteractionDataset ingest(std::istream& in, const IngestConfig& cfg);

  /// Builds a dataset from pre-interned tables and per-user histories
  /// (liked sets are derived by transposition). Histories may be unsorted
  /// but must be duplicate-free. Used for fold training sets and fixtures.
  static InteractionDataset from_histories(std::vector<std::string> user_keys,
                                           std::vector<std::string> item_keys,
                                           std::vector<std::vector<ItemId>> history);

  std::size_t n_users() const { return user_keys_.size(); }
  std::size_t n_items() const { return item_keys_.size(); }
  std::size_t n_interactions() const { return n_interactions_; }

  /// L(i): sorted user ordinals with positive feedback on item. Throws
  /// std::out_of_range for a bad ordinal.
  const std::vector<UserId>& liked(ItemId item) const;

  /// H(u): sorted item ordinals in the user's positive history.
  const std::vector<ItemId>& history(UserId user) const;

  const std::string& user_key(UserId user) const;
  const std::string& item_key(ItemId item) const;
  std::optional<UserId> find_user(std::string_view key) const;
  std::optional<ItemId> find_item(std::string_view key) const;

  bool has_interaction(UserId user, ItemId item) const;

  /// Canonical JSON snapshot (tables + adjacency + stats); byte-stable for
  /// identical input.
  std::string snapshot_json() const;
  static InteractionDataset from_snapshot_json(std::string_view json_text);

 private:
  InteractionDataset() = default;
  void rebuild_liked_from_history();

  std::vector<std::string> user_keys_;
  std::vector<std::string> item_keys_;
  std::unordered_map<std::string, UserId> user_ids_;
  std::unordered_map<std::string, ItemId> item_ids_;
  std::vector<std::vector<UserId>> liked_;    // indexed by item
  std::vector<std::vector<ItemId>> history_;  // indexed by user
  std::size_t n_interactions_ = 0;
};

/// Which users could have seen each item. FullExposure treats every item as
/// shown to the whole user base (the conventional reading when no exposure
/// data exists); Explicit carries one sorted user set per item and enforces
/// L(j) being a subset of E(j) at construction.
class ExposureModel {
 public:
  static ExposureModel full_exposure();
  static ExposureModel explicit_sets(std::vector<std::vector<UserId>> sets,
                                     const InteractionDataset& ds);

  bool is_full() const { return full_; }

  /// |E(j)|.
  std::size_t exposure_size(const InteractionDataset& ds, ItemId item) const;

  /// Stored set for an Explicit model; throws for FullExposure.
  const std::vector<UserId>& explicit_set(ItemId item) const;

 private:
  ExposureModel() = default;
  bool full_ = true;
  std::vector<std::vector<UserId>> sets_;
};

/// View of E(j). A universal set is represented implicitly: users is empty
/// and size covers the whole user base.
struct ExposureSet {
  bool universal = false;
  std::span<const UserId> users;
  std::size_t size = 0;
};

InteractionDataset ingest_interactions(std::istream& in, const IngestConfig& cfg);
DatasetStats dataset_stats(const InteractionDataset& ds);
const std::vector<UserId>& liked_set(const InteractionDataset& ds, ItemId item);
ExposureSet exposure_set(const ExposureModel& exp, const InteractionDataset& ds, ItemId item);

}  // namespace lcf
