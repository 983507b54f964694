#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcf/correlate.hpp"
#include "lcf/dataset.hpp"

namespace lcf {

/// How the θ2 support filter treats a user's history terms.
/// Lenient averages over the qualifying terms only; Strict demands that
/// every history term qualifies and otherwise degrades to the fallback.
enum class ThresholdMode { kLenient, kStrict };

struct PredictionConfig {
  double p = 1.5;           // personalization coefficient; 0 = pure popularity
  std::size_t theta2 = 16;  // minimum support for a history term to count
  ThresholdMode mode = ThresholdMode::kLenient;
  bool clamp = true;        // clamp reported score into [0,1]
};

struct CtpPrediction {
  ItemId item = 0;
  double raw_score = 0.0;      // may lie outside [0,1]
  double clamped_score = 0.0;  // min(1, max(0, raw_score)); raw when clamping is off
  std::size_t n_effective = 0; // history terms that contributed
  bool fallback = false;       // no qualifying term; score degenerated to CTR_U
  bool already_consumed = false;
};

/**
 * Predicted click-through probability:
 *
 *   raw = CTR_U(j) + (p / n) * sum over qualifying history items of r_{i_k}(j)
 *
 * The sum runs in ascending item-ordinal order and every r term is produced
 * by the shared counts-to-double expression in correlate.hpp. Any path that
 * scores the same (user, item) — this single-pair op, the batch scorer below,
 * or a test oracle following the same recipe — yields the identical double.
 */
CtpPrediction predict_ctp(const InteractionDataset& ds, const ExposureModel& exp, UserId user,
                          ItemId item, const PredictionConfig& cfg);

/// History items i_k with |E(item) ∩ L(i_k)| > theta2 (ascending). Under full
/// exposure the filter reduces to |L(i_k)| > theta2, independent of the item.
std::vector<ItemId> effective_history(const InteractionDataset& ds, const ExposureModel& exp,
                                      UserId user, ItemId item, std::size_t theta2);

/// Top-K items the user has not consumed, ranked by raw score descending with
/// item ordinal as the tie break. With no qualifying history the ranking is
/// pure popularity and every entry is flagged fallback.
std::vector<CtpPrediction> recommend_topk(const InteractionDataset& ds, const ExposureModel& exp,
                                          UserId user, const PredictionConfig& cfg, std::size_t k);

/**
 * Batch scorer: computes the p-independent per-item correlation sums for one
 * user once, then ranks for any number of p values. This is what the
 * cross-validation sweep runs per (fold, user); the heavy counting pass is
 * shared across the whole p grid. Holds scratch arrays sized by the item
 * count — keep one instance per thread and reuse it across users.
 */
class UserScorer {
 public:
  UserScorer(const InteractionDataset& ds, const ExposureModel& exp, std::size_t theta2,
             ThresholdMode mode);

  /// Runs the counting pass for one user.
  void score_user(UserId user);

  /// Prediction for one item at a given p, from the last score_user call.
  CtpPrediction prediction(ItemId item, double p, bool clamp) const;

  /// Top-K over items outside the user's history.
  std::vector<CtpPrediction> topk(double p, bool clamp, std::size_t k) const;

 private:
  const InteractionDataset& ds_;
  const ExposureModel& exp_;
  std::size_t theta2_;
  ThresholdMode mode_;

  std::vector<double> ctr_;            // CTR_U per item
  UserId user_ = 0;
  std::vector<double> r_sum_;          // per item, k-ordered sum of r terms
  std::vector<std::uint32_t> n_eff_;   // per item, qualifying term count

  // scratch for the per-source co-click counting pass
  std::vector<std::uint32_t> co_;
  std::vector<std::uint32_t> epoch_;
  std::uint32_t current_epoch_ = 0;
};

/// CSV rows `user,rank,item,raw_score,clamped_score,n_effective,fallback`
/// for one user's top-K list (header not included).
std::string recommendations_csv_rows(const InteractionDataset& ds, UserId user,
                                     const std::vector<CtpPrediction>& recs);

inline constexpr const char* kRecommendationsCsvHeader =
    "user,rank,item,raw_score,clamped_score,n_effective,fallback\n";

}  // namespace lcf
