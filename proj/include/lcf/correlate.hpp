#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lcf/dataset.hpp"

namespace lcf {

struct ItemStats {
  ItemId item = 0;
  std::size_t n_liked = 0;    // |L(j)|
  std::size_t n_exposed = 0;  // |E(j)|
  double global_ctr = 0.0;    // |L(j)| / |E(j)|
};

/// One directed item-to-item correlation: r = local_ctr - global_ctr(target),
/// with support = |E(target) ∩ L(source)|.
struct CorrelationEntry {
  ItemId source = 0;
  ItemId target = 0;
  double r = 0.0;
  double local_ctr = 0.0;
  std::size_t support = 0;
};

/*
 * The same double expression is used everywhere an r value is produced: the
 * index builder, the on-demand path inside prediction, and the pairwise op.
 * Keeping one arithmetic shape is what makes results independent of which
 * route computed them (and lets tests compare against a naive oracle for
 * exact equality).
 */
inline double ctr_ratio_value(std::size_t clicked, std::size_t exposed) {
  return static_cast<double>(clicked) / static_cast<double>(exposed);
}
inline double r_from_counts(std::size_t co, std::size_t support, std::size_t liked_target,
                            std::size_t exposed_target) {
  return ctr_ratio_value(co, support) - ctr_ratio_value(liked_target, exposed_target);
}

/// θ1-filtered correlation entries per source item, each list sorted by
/// r descending, support descending, target ascending. Self-pairs are never
/// stored. Immutable once built; concurrent reads are safe.
class CorrelationIndex {
 public:
  std::size_t theta1() const { return theta1_; }
  const std::vector<ItemId>& sources() const { return sources_; }
  bool has_source(ItemId source) const { return slot_.count(source) != 0; }

  /// Entries for one source; throws std::out_of_range if absent.
  std::span<const CorrelationEntry> entries(ItemId source) const;

  std::size_t total_entries() const;

  /// CSV: source,target,r,local_ctr,support with 6-decimal ratios, rows
  /// grouped by source in index order.
  std::string to_csv(const InteractionDataset& ds) const;
  /// JSON array mirroring the CSV fields.
  std::string to_json(const InteractionDataset& ds) const;

 private:
  friend CorrelationIndex build_correlation_index(const InteractionDataset&, const ExposureModel&,
                                                  std::size_t, const std::vector<ItemId>*,
                                                  unsigned);
  std::size_t theta1_ = 0;
  std::vector<ItemId> sources_;                        // ascending
  std::vector<std::vector<CorrelationEntry>> entries_; // aligned with sources_
  std::unordered_map<ItemId, std::size_t> slot_;
};

/// CTR_U(j) = |L(j)| / |E(j)| plus the counts behind it. Throws on an empty
/// exposure set (undefined CTR).
ItemStats item_stats(const InteractionDataset& ds, const ExposureModel& exp, ItemId item);

double global_ctr(const InteractionDataset& ds, const ExposureModel& exp, ItemId item);

/// CTR of L(source) for target: |L(target) ∩ L(source)| / |E(target) ∩ L(source)|.
/// Throws when the denominator set is empty.
double local_ctr(const InteractionDataset& ds, const ExposureModel& exp, ItemId source,
                 ItemId target);

/// Support count |E(target) ∩ L(source)|; |L(source)| under full exposure.
std::size_t support_count(const InteractionDataset& ds, const ExposureModel& exp, ItemId source,
                          ItemId target);

/// r with its inputs, or nullopt when support does not exceed theta1.
std::optional<CorrelationEntry> correlation(const InteractionDataset& ds,
                                            const ExposureModel& exp, ItemId source, ItemId target,
                                            std::size_t theta1);

struct AsymmetryRatio {
  double r_ratio = 0.0;    // r_i(j) / r_j(i)
  double ctr_ratio = 0.0;  // CTR_U(j) / CTR_U(i)
};

/// Both sides of the full-exposure identity r_i(j)/r_j(i) = CTR_U(j)/CTR_U(i).
/// Requires a full-exposure model and nonzero denominators. Evaluated in
/// extended precision so the two values stay within 1e-12 of each other even
/// for extreme popularity ratios.
AsymmetryRatio asymmetry_ratio(const InteractionDataset& ds, const ExposureModel& exp,
                               ItemId item_i, ItemId item_j);

/// Evaluates r for every (source, target != source) pair with support > theta1.
/// sources == nullptr means all items. Work is split across n_workers threads
/// per source; the result is identical for any worker count.
CorrelationIndex build_correlation_index(const InteractionDataset& ds, const ExposureModel& exp,
                                         std::size_t theta1,
                                         const std::vector<ItemId>* sources = nullptr,
                                         unsigned n_workers = 1);

/// First K entries of the source's list (self already excluded). Throws when
/// the source is not in the index.
std::vector<CorrelationEntry> item_item_topk(const CorrelationIndex& index, ItemId source,
                                             std::size_t k);

}  // namespace lcf
