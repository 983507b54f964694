#include "lcf/predict.hpp"

#include <algorithm>
#include <stdexcept>

#include "lcf/csv.hpp"
#include "lcf/setops.hpp"

namespace lcf {

namespace {

void check_user(const InteractionDataset& ds, UserId user) {
  if (user >= ds.n_users()) {
    throw std::out_of_range("user ordinal " + std::to_string(user) + " out of range");
  }
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

bool ranks_before(const CtpPrediction& a, const CtpPrediction& b) {
  if (a.raw_score != b.raw_score) return a.raw_score > b.raw_score;
  return a.item < b.item;
}

}  // namespace

std::vector<ItemId> effective_history(const InteractionDataset& ds, const ExposureModel& exp,
                                      UserId user, ItemId item, std::size_t theta2) {
  check_user(ds, user);
  if (item >= ds.n_items()) {
    throw std::out_of_range("item ordinal " + std::to_string(item) + " out of range");
  }
  std::vector<ItemId> out;
  for (ItemId source : ds.history(user)) {
    if (support_count(ds, exp, source, item) > theta2) {
      out.push_back(source);
    }
  }
  return out;
}

CtpPrediction predict_ctp(const InteractionDataset& ds, const ExposureModel& exp, UserId user,
                          ItemId item, const PredictionConfig& cfg) {
  check_user(ds, user);
  ItemStats target = item_stats(ds, exp, item);
  const double ctr = target.global_ctr;
  const auto& hist = ds.history(user);

  CtpPrediction pred;
  pred.item = item;
  pred.already_consumed = sorted_contains(hist, item);

  // k-ordered sum of r terms over qualifying history items
  double r_sum = 0.0;
  std::size_t n = 0;
  for (ItemId source : hist) {
    std::size_t support = support_count(ds, exp, source, item);
    if (support <= cfg.theta2) continue;
    std::size_t co = intersection_size(ds.liked(item), ds.liked(source));
    r_sum += ctr_ratio_value(co, support) - ctr;
    ++n;
  }
  if (cfg.mode == ThresholdMode::kStrict && n != hist.size()) {
    n = 0;
  }

  if (n == 0) {
    pred.raw_score = ctr;
    pred.fallback = true;
  } else {
    pred.raw_score = ctr + (cfg.p / static_cast<double>(n)) * r_sum;
    pred.n_effective = n;
  }
  pred.clamped_score = cfg.clamp ? clamp01(pred.raw_score) : pred.raw_score;
  return pred;
}

UserScorer::UserScorer(const InteractionDataset& ds, const ExposureModel& exp, std::size_t theta2,
                       ThresholdMode mode)
    : ds_(ds), exp_(exp), theta2_(theta2), mode_(mode) {
  const std::size_t n_items = ds.n_items();
  ctr_.resize(n_items);
  for (ItemId j = 0; j < n_items; ++j) {
    std::size_t exposed = exp.exposure_size(ds, j);
    // items nobody could see are unpredictable; they are excluded from
    // rankings and prediction() throws on them, matching global_ctr
    ctr_[j] = exposed == 0 ? 0.0 : ctr_ratio_value(ds.liked(j).size(), exposed);
  }
  r_sum_.resize(n_items);
  n_eff_.resize(n_items);
  co_.resize(n_items, 0);
  epoch_.resize(n_items, 0);
}

void UserScorer::score_user(UserId user) {
  check_user(ds_, user);
  user_ = user;
  const auto& hist = ds_.history(user);
  const std::size_t n_items = ds_.n_items();
  std::fill(r_sum_.begin(), r_sum_.end(), 0.0);
  std::fill(n_eff_.begin(), n_eff_.end(), 0u);

  if (exp_.is_full()) {
    std::vector<ItemId> qualifying;
    qualifying.reserve(hist.size());
    for (ItemId source : hist) {
      if (ds_.liked(source).size() > theta2_) qualifying.push_back(source);
    }
    bool strict_fail =
        mode_ == ThresholdMode::kStrict && qualifying.size() != hist.size();
    if (strict_fail || qualifying.empty()) return;

    for (ItemId source : qualifying) {
      // co-click counting pass for this history term
      ++current_epoch_;
      for (UserId v : ds_.liked(source)) {
        for (ItemId j : ds_.history(v)) {
          if (epoch_[j] != current_epoch_) {
            epoch_[j] = current_epoch_;
            co_[j] = 1;
          } else {
            ++co_[j];
          }
        }
      }
      // accumulate this term for every item; adds happen in history order
      // per item, so each r_sum_[j] is the same k-ordered sum predict_ctp
      // produces
      const double support = static_cast<double>(ds_.liked(source).size());
      for (ItemId j = 0; j < n_items; ++j) {
        double term = epoch_[j] == current_epoch_
                          ? static_cast<double>(co_[j]) / support - ctr_[j]
                          : 0.0 - ctr_[j];
        r_sum_[j] += term;
      }
    }
    std::fill(n_eff_.begin(), n_eff_.end(), static_cast<std::uint32_t>(qualifying.size()));
  } else {
    // explicit exposure: support depends on the target, so qualification is
    // decided per (term, item) pair
    for (ItemId j = 0; j < n_items; ++j) {
      double r_sum = 0.0;
      std::uint32_t n = 0;
      for (ItemId source : hist) {
        std::size_t support = intersection_size(exp_.explicit_set(j), ds_.liked(source));
        if (support <= theta2_) continue;
        std::size_t co = intersection_size(ds_.liked(j), ds_.liked(source));
        r_sum += ctr_ratio_value(co, support) - ctr_[j];
        ++n;
      }
      if (mode_ == ThresholdMode::kStrict && n != hist.size()) n = 0;
      r_sum_[j] = r_sum;
      n_eff_[j] = n;
    }
  }
}

CtpPrediction UserScorer::prediction(ItemId item, double p, bool clamp) const {
  if (item >= ds_.n_items()) {
    throw std::out_of_range("item ordinal " + std::to_string(item) + " out of range");
  }
  if (exp_.exposure_size(ds_, item) == 0) {
    throw std::invalid_argument("CTR undefined: item '" + ds_.item_key(item) +
                                "' has an empty exposure set");
  }
  CtpPrediction pred;
  pred.item = item;
  pred.already_consumed = ds_.has_interaction(user_, item);
  std::uint32_t n = n_eff_[item];
  if (n == 0) {
    pred.raw_score = ctr_[item];
    pred.fallback = true;
  } else {
    pred.raw_score = ctr_[item] + (p / static_cast<double>(n)) * r_sum_[item];
    pred.n_effective = n;
  }
  pred.clamped_score = clamp ? clamp01(pred.raw_score) : pred.raw_score;
  return pred;
}

std::vector<CtpPrediction> UserScorer::topk(double p, bool clamp, std::size_t k) const {
  std::vector<CtpPrediction> best;
  if (k == 0) return best;
  best.reserve(std::min(k, ds_.n_items()));

  const auto& hist = ds_.history(user_);
  auto hist_it = hist.begin();
  for (ItemId j = 0; j < ds_.n_items(); ++j) {
    while (hist_it != hist.end() && *hist_it < j) ++hist_it;
    if (hist_it != hist.end() && *hist_it == j) continue;  // already consumed
    if (exp_.exposure_size(ds_, j) == 0) continue;

    CtpPrediction cand = prediction(j, p, clamp);
    if (best.size() == k && !ranks_before(cand, best.back())) continue;
    auto pos = std::upper_bound(best.begin(), best.end(), cand, ranks_before);
    best.insert(pos, cand);
    if (best.size() > k) best.pop_back();
  }
  return best;
}

std::vector<CtpPrediction> recommend_topk(const InteractionDataset& ds, const ExposureModel& exp,
                                          UserId user, const PredictionConfig& cfg,
                                          std::size_t k) {
  UserScorer scorer(ds, exp, cfg.theta2, cfg.mode);
  scorer.score_user(user);
  return scorer.topk(cfg.p, cfg.clamp, k);
}

std::string recommendations_csv_rows(const InteractionDataset& ds, UserId user,
                                     const std::vector<CtpPrediction>& recs) {
  std::string out;
  const std::string user_key = csv_escape(ds.user_key(user));
  std::size_t rank = 1;
  for (const auto& rec : recs) {
    out += user_key;
    out += ',';
    out += std::to_string(rank++);
    out += ',';
    out += csv_escape(ds.item_key(rec.item));
    out += ',';
    out += format_fixed(rec.raw_score, 6);
    out += ',';
    out += format_fixed(rec.clamped_score, 6);
    out += ',';
    out += std::to_string(rec.n_effective);
    out += ',';
    out += rec.fallback ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace lcf
