#include "lcf/correlate.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "lcf/csv.hpp"
#include "lcf/setops.hpp"

#include <json.hpp>

namespace lcf {

namespace {

void check_item(const InteractionDataset& ds, ItemId item) {
  if (item >= ds.n_items()) {
    throw std::out_of_range("item ordinal " + std::to_string(item) + " out of range");
  }
}

bool entry_before(const CorrelationEntry& a, const CorrelationEntry& b) {
  if (a.r != b.r) return a.r > b.r;
  if (a.support != b.support) return a.support > b.support;
  return a.target < b.target;
}

/// Co-click counts |L(target) ∩ L(source)| for every target sharing a user
/// with the source, via one pass over the likers' histories.
class CoClickCounter {
 public:
  explicit CoClickCounter(std::size_t n_items) : count_(n_items, 0), epoch_(n_items, 0) {}

  void tally(const InteractionDataset& ds, ItemId source) {
    ++current_;
    for (UserId u : ds.liked(source)) {
      for (ItemId j : ds.history(u)) {
        if (epoch_[j] != current_) {
          epoch_[j] = current_;
          count_[j] = 1;
        } else {
          ++count_[j];
        }
      }
    }
  }

  std::size_t count(ItemId item) const { return epoch_[item] == current_ ? count_[item] : 0; }

 private:
  std::vector<std::uint32_t> count_;
  std::vector<std::uint32_t> epoch_;
  std::uint32_t current_ = 0;
};

std::vector<CorrelationEntry> entries_for_source(const InteractionDataset& ds,
                                                 const ExposureModel& exp, ItemId source,
                                                 std::size_t theta1, CoClickCounter& counter) {
  std::vector<CorrelationEntry> out;
  const std::size_t n_items = ds.n_items();
  const auto& likers = ds.liked(source);

  if (exp.is_full()) {
    // support is |L(source)| for every target; skip sources below threshold
    const std::size_t support = likers.size();
    if (support <= theta1) return out;
    counter.tally(ds, source);
    out.reserve(n_items > 0 ? n_items - 1 : 0);
    for (ItemId j = 0; j < n_items; ++j) {
      if (j == source) continue;
      std::size_t co = counter.count(j);
      CorrelationEntry e;
      e.source = source;
      e.target = j;
      e.support = support;
      e.local_ctr = ctr_ratio_value(co, support);
      e.r = r_from_counts(co, support, ds.liked(j).size(), ds.n_users());
      out.push_back(e);
    }
  } else {
    counter.tally(ds, source);
    for (ItemId j = 0; j < n_items; ++j) {
      if (j == source) continue;
      std::size_t support = intersection_size(exp.explicit_set(j), likers);
      if (support <= theta1) continue;
      std::size_t co = counter.count(j);
      CorrelationEntry e;
      e.source = source;
      e.target = j;
      e.support = support;
      e.local_ctr = ctr_ratio_value(co, support);
      e.r = r_from_counts(co, support, ds.liked(j).size(), exp.exposure_size(ds, j));
      out.push_back(e);
    }
  }

  std::sort(out.begin(), out.end(), entry_before);
  return out;
}

}  // namespace

std::span<const CorrelationEntry> CorrelationIndex::entries(ItemId source) const {
  auto it = slot_.find(source);
  if (it == slot_.end()) {
    throw std::out_of_range("source item " + std::to_string(source) + " not in index");
  }
  return entries_[it->second];
}

std::size_t CorrelationIndex::total_entries() const {
  std::size_t total = 0;
  for (const auto& e : entries_) total += e.size();
  return total;
}

std::string CorrelationIndex::to_csv(const InteractionDataset& ds) const {
  std::string out = "source,target,r,local_ctr,support\n";
  for (std::size_t s = 0; s < sources_.size(); ++s) {
    const std::string source_key = csv_escape(ds.item_key(sources_[s]));
    for (const auto& e : entries_[s]) {
      out += source_key;
      out += ',';
      out += csv_escape(ds.item_key(e.target));
      out += ',';
      out += format_fixed(e.r, 6);
      out += ',';
      out += format_fixed(e.local_ctr, 6);
      out += ',';
      out += std::to_string(e.support);
      out += '\n';
    }
  }
  return out;
}

std::string CorrelationIndex::to_json(const InteractionDataset& ds) const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < sources_.size(); ++s) {
    for (const auto& e : entries_[s]) {
      rows.push_back({{"source", ds.item_key(e.source)},
                      {"target", ds.item_key(e.target)},
                      {"r", e.r},
                      {"local_ctr", e.local_ctr},
                      {"support", e.support}});
    }
  }
  return rows.dump() + "\n";
}

ItemStats item_stats(const InteractionDataset& ds, const ExposureModel& exp, ItemId item) {
  check_item(ds, item);
  ItemStats st;
  st.item = item;
  st.n_liked = ds.liked(item).size();
  st.n_exposed = exp.exposure_size(ds, item);
  if (st.n_exposed == 0) {
    throw std::invalid_argument("CTR undefined: item '" + ds.item_key(item) +
                                "' has an empty exposure set");
  }
  st.global_ctr = ctr_ratio_value(st.n_liked, st.n_exposed);
  return st;
}

double global_ctr(const InteractionDataset& ds, const ExposureModel& exp, ItemId item) {
  return item_stats(ds, exp, item).global_ctr;
}

std::size_t support_count(const InteractionDataset& ds, const ExposureModel& exp, ItemId source,
                          ItemId target) {
  check_item(ds, source);
  check_item(ds, target);
  if (exp.is_full()) return ds.liked(source).size();
  return intersection_size(exp.explicit_set(target), ds.liked(source));
}

double local_ctr(const InteractionDataset& ds, const ExposureModel& exp, ItemId source,
                 ItemId target) {
  std::size_t support = support_count(ds, exp, source, target);
  if (support == 0) {
    throw std::invalid_argument("local CTR undefined: E(" + ds.item_key(target) + ") ∩ L(" +
                                ds.item_key(source) + ") is empty");
  }
  std::size_t co = intersection_size(ds.liked(target), ds.liked(source));
  return ctr_ratio_value(co, support);
}

std::optional<CorrelationEntry> correlation(const InteractionDataset& ds,
                                            const ExposureModel& exp, ItemId source, ItemId target,
                                            std::size_t theta1) {
  std::size_t support = support_count(ds, exp, source, target);
  if (support <= theta1) return std::nullopt;

  CorrelationEntry e;
  e.source = source;
  e.target = target;
  e.support = support;
  std::size_t co = intersection_size(ds.liked(target), ds.liked(source));
  e.local_ctr = ctr_ratio_value(co, support);
  e.r = r_from_counts(co, support, ds.liked(target).size(), exp.exposure_size(ds, target));
  return e;
}

AsymmetryRatio asymmetry_ratio(const InteractionDataset& ds, const ExposureModel& exp,
                               ItemId item_i, ItemId item_j) {
  if (!exp.is_full()) {
    throw std::invalid_argument("asymmetry ratio is defined for the full-exposure model only");
  }
  check_item(ds, item_i);
  check_item(ds, item_j);

  const auto n = static_cast<std::uint64_t>(ds.n_users());
  const auto li = static_cast<std::uint64_t>(ds.liked(item_i).size());
  const auto lj = static_cast<std::uint64_t>(ds.liked(item_j).size());
  const auto co = static_cast<std::uint64_t>(intersection_size(ds.liked(item_i), ds.liked(item_j)));

  if (li == 0 || lj == 0) {
    throw std::invalid_argument("asymmetry ratio undefined: an item has no positive feedback");
  }
  // both r values share the numerator co*n - li*lj; zero means both vanish
  if (co * n == li * lj) {
    throw std::invalid_argument("asymmetry ratio undefined: r_j(i) is zero");
  }

  const auto nl = static_cast<long double>(n);
  const long double r_ij =
      static_cast<long double>(co) / static_cast<long double>(li) - static_cast<long double>(lj) / nl;
  const long double r_ji =
      static_cast<long double>(co) / static_cast<long double>(lj) - static_cast<long double>(li) / nl;

  AsymmetryRatio out;
  out.r_ratio = static_cast<double>(r_ij / r_ji);
  out.ctr_ratio = static_cast<double>((static_cast<long double>(lj) / nl) /
                                      (static_cast<long double>(li) / nl));
  return out;
}

CorrelationIndex build_correlation_index(const InteractionDataset& ds, const ExposureModel& exp,
                                         std::size_t theta1, const std::vector<ItemId>* sources,
                                         unsigned n_workers) {
  CorrelationIndex index;
  index.theta1_ = theta1;

  std::vector<ItemId> wanted;
  if (sources == nullptr) {
    wanted.resize(ds.n_items());
    for (ItemId i = 0; i < wanted.size(); ++i) wanted[i] = i;
  } else {
    wanted = *sources;
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    for (ItemId i : wanted) check_item(ds, i);
  }

  index.sources_ = wanted;
  index.entries_.resize(wanted.size());

  if (n_workers == 0) n_workers = 1;
  auto worker_count = static_cast<unsigned>(
      std::min<std::size_t>(n_workers, std::max<std::size_t>(wanted.size(), 1)));

  // each source slot is computed independently and stored by position, so
  // the result does not depend on scheduling
  std::atomic<std::size_t> next{0};
  auto run = [&]() {
    CoClickCounter counter(ds.n_items());
    while (true) {
      std::size_t s = next.fetch_add(1);
      if (s >= wanted.size()) break;
      index.entries_[s] = entries_for_source(ds, exp, wanted[s], theta1, counter);
    }
  };

  if (worker_count <= 1) {
    run();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w) threads.emplace_back(run);
    for (auto& t : threads) t.join();
  }

  index.slot_.reserve(wanted.size());
  for (std::size_t s = 0; s < wanted.size(); ++s) {
    index.slot_.emplace(wanted[s], s);
  }
  return index;
}

std::vector<CorrelationEntry> item_item_topk(const CorrelationIndex& index, ItemId source,
                                             std::size_t k) {
  auto all = index.entries(source);
  std::size_t take = std::min(k, all.size());
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take)};
}

}  // namespace lcf
