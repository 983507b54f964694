#include "lcf/dataset.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "lcf/csv.hpp"
#include "lcf/setops.hpp"

#include <json.hpp>

namespace lcf {

namespace {

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + why);
}

bool parse_magnitude(const std::string& text, double& out) {
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

}  // namespace

InteractionDataset InteractionDataset::ingest(std::istream& in, const IngestConfig& cfg) {
  InteractionDataset ds;
  std::vector<std::pair<UserId, ItemId>> pairs;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    try {
      fields = split_csv_row(line);
    } catch (const std::exception& e) {
      malformed(line_no, e.what());
    }
    if (fields.size() != 5) {
      malformed(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
    }

    std::string user_key(trim(fields[0]));
    std::string item_key(trim(fields[1]));
    std::string behavior(trim(fields[2]));
    if (user_key.empty()) malformed(line_no, "empty user id");
    if (item_key.empty()) malformed(line_no, "empty item id");

    double magnitude = 0.0;
    if (!parse_magnitude(fields[3], magnitude) || magnitude < 0.0) {
      malformed(line_no, "unparsable value field '" + fields[3] + "'");
    }

    if (behavior != cfg.behavior) continue;

    auto [uit, user_inserted] =
        ds.user_ids_.try_emplace(user_key, static_cast<UserId>(ds.user_keys_.size()));
    if (user_inserted) ds.user_keys_.push_back(user_key);
    auto [iit, item_inserted] =
        ds.item_ids_.try_emplace(item_key, static_cast<ItemId>(ds.item_keys_.size()));
    if (item_inserted) ds.item_keys_.push_back(item_key);
    pairs.emplace_back(uit->second, iit->second);
  }

  if (pairs.empty()) {
    throw std::runtime_error("no interactions after filtering behavior='" + cfg.behavior + "'");
  }

  std::vector<std::pair<UserId, ItemId>> sorted = pairs;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::unique(sorted.begin(), sorted.end());
  if (!cfg.dedup && dup != sorted.end()) {
    throw std::runtime_error("duplicate interaction " + ds.user_keys_[dup->first] + " / " +
                             ds.item_keys_[dup->second] + " with dedup disabled");
  }
  sorted.erase(dup, sorted.end());

  ds.history_.resize(ds.user_keys_.size());
  ds.liked_.resize(ds.item_keys_.size());
  for (auto [u, i] : sorted) {
    ds.history_[u].push_back(i);
    ds.liked_[i].push_back(u);
  }
  ds.n_interactions_ = sorted.size();
  return ds;
}

InteractionDataset InteractionDataset::from_histories(std::vector<std::string> user_keys,
                                                      std::vector<std::string> item_keys,
                                                      std::vector<std::vector<ItemId>> history) {
  if (history.size() != user_keys.size()) {
    throw std::invalid_argument("history size does not match user table");
  }
  InteractionDataset ds;
  ds.user_keys_ = std::move(user_keys);
  ds.item_keys_ = std::move(item_keys);
  ds.history_ = std::move(history);
  for (UserId u = 0; u < ds.user_keys_.size(); ++u) {
    ds.user_ids_.emplace(ds.user_keys_[u], u);
  }
  for (ItemId i = 0; i < ds.item_keys_.size(); ++i) {
    ds.item_ids_.emplace(ds.item_keys_[i], i);
  }
  if (ds.user_ids_.size() != ds.user_keys_.size() || ds.item_ids_.size() != ds.item_keys_.size()) {
    throw std::invalid_argument("duplicate keys in intern tables");
  }

  ds.n_interactions_ = 0;
  for (auto& h : ds.history_) {
    std::sort(h.begin(), h.end());
    if (std::adjacent_find(h.begin(), h.end()) != h.end()) {
      throw std::invalid_argument("duplicate item in user history");
    }
    if (!h.empty() && h.back() >= ds.item_keys_.size()) {
      throw std::out_of_range("item ordinal out of range in history");
    }
    ds.n_interactions_ += h.size();
  }
  ds.rebuild_liked_from_history();
  return ds;
}

void InteractionDataset::rebuild_liked_from_history() {
  liked_.assign(item_keys_.size(), {});
  for (UserId u = 0; u < history_.size(); ++u) {
    for (ItemId i : history_[u]) {
      liked_[i].push_back(u);
    }
  }
  // histories are walked in ascending user order, so each liked set comes
  // out sorted already
}

const std::vector<UserId>& InteractionDataset::liked(ItemId item) const {
  if (item >= liked_.size()) {
    throw std::out_of_range("item ordinal " + std::to_string(item) + " out of range");
  }
  return liked_[item];
}

const std::vector<ItemId>& InteractionDataset::history(UserId user) const {
  if (user >= history_.size()) {
    throw std::out_of_range("user ordinal " + std::to_string(user) + " out of range");
  }
  return history_[user];
}

const std::string& InteractionDataset::user_key(UserId user) const {
  if (user >= user_keys_.size()) {
    throw std::out_of_range("user ordinal " + std::to_string(user) + " out of range");
  }
  return user_keys_[user];
}

const std::string& InteractionDataset::item_key(ItemId item) const {
  if (item >= item_keys_.size()) {
    throw std::out_of_range("item ordinal " + std::to_string(item) + " out of range");
  }
  return item_keys_[item];
}

std::optional<UserId> InteractionDataset::find_user(std::string_view key) const {
  auto it = user_ids_.find(std::string(key));
  if (it == user_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<ItemId> InteractionDataset::find_item(std::string_view key) const {
  auto it = item_ids_.find(std::string(key));
  if (it == item_ids_.end()) return std::nullopt;
  return it->second;
}

bool InteractionDataset::has_interaction(UserId user, ItemId item) const {
  const auto& h = history(user);
  return sorted_contains(h, item);
}

std::string InteractionDataset::snapshot_json() const {
  nlohmann::ordered_json doc;
  doc["schema"] = "lcf-dataset-v1";
  DatasetStats st = dataset_stats(*this);
  doc["stats"] = {{"n_users", st.n_users},
                  {"n_items", st.n_items},
                  {"n_interactions", st.n_interactions},
                  {"sparsity", st.sparsity}};
  doc["users"] = user_keys_;
  doc["items"] = item_keys_;
  doc["history"] = history_;
  return doc.dump() + "\n";
}

InteractionDataset InteractionDataset::from_snapshot_json(std::string_view json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  if (doc.value("schema", "") != "lcf-dataset-v1") {
    throw std::runtime_error("unrecognized snapshot schema");
  }
  auto ds = from_histories(doc.at("users").get<std::vector<std::string>>(),
                           doc.at("items").get<std::vector<std::string>>(),
                           doc.at("history").get<std::vector<std::vector<ItemId>>>());
  auto recorded = doc.at("stats").at("n_interactions").get<std::size_t>();
  if (recorded != ds.n_interactions()) {
    throw std::runtime_error("snapshot interaction count mismatch");
  }
  return ds;
}

ExposureModel ExposureModel::full_exposure() {
  ExposureModel m;
  m.full_ = true;
  return m;
}

ExposureModel ExposureModel::explicit_sets(std::vector<std::vector<UserId>> sets,
                                           const InteractionDataset& ds) {
  if (sets.size() != ds.n_items()) {
    throw std::invalid_argument("exposure model must cover every item (" +
                                std::to_string(sets.size()) + " sets for " +
                                std::to_string(ds.n_items()) + " items)");
  }
  ExposureModel m;
  m.full_ = false;
  m.sets_ = std::move(sets);
  for (ItemId i = 0; i < m.sets_.size(); ++i) {
    auto& e = m.sets_[i];
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    if (!e.empty() && e.back() >= ds.n_users()) {
      throw std::out_of_range("exposure set for item " + std::to_string(i) +
                              " references unknown user");
    }
    // a click implies exposure: L(i) must be contained in E(i)
    const auto& l = ds.liked(i);
    if (intersection_size(l, e) != l.size()) {
      throw std::invalid_argument("exposure set for item '" + ds.item_key(i) +
                                  "' is missing users who clicked it");
    }
  }
  return m;
}

std::size_t ExposureModel::exposure_size(const InteractionDataset& ds, ItemId item) const {
  if (item >= ds.n_items()) {
    throw std::out_of_range("item ordinal " + std::to_string(item) + " out of range");
  }
  if (full_) return ds.n_users();
  return sets_[item].size();
}

const std::vector<UserId>& ExposureModel::explicit_set(ItemId item) const {
  if (full_) {
    throw std::logic_error("full-exposure model has no explicit sets");
  }
  if (item >= sets_.size()) {
    throw std::out_of_range("item ordinal " + std::to_string(item) + " out of range");
  }
  return sets_[item];
}

InteractionDataset ingest_interactions(std::istream& in, const IngestConfig& cfg) {
  return InteractionDataset::ingest(in, cfg);
}

DatasetStats dataset_stats(const InteractionDataset& ds) {
  if (ds.n_interactions() == 0) {
    throw std::invalid_argument("dataset is empty");
  }
  DatasetStats st;
  st.n_users = ds.n_users();
  st.n_items = ds.n_items();
  st.n_interactions = ds.n_interactions();
  st.sparsity = 1.0 - static_cast<double>(st.n_interactions) /
                          (static_cast<double>(st.n_users) * static_cast<double>(st.n_items));
  return st;
}

const std::vector<UserId>& liked_set(const InteractionDataset& ds, ItemId item) {
  return ds.liked(item);
}

ExposureSet exposure_set(const ExposureModel& exp, const InteractionDataset& ds, ItemId item) {
  if (item >= ds.n_items()) {
    throw std::out_of_range("item ordinal " + std::to_string(item) + " out of range");
  }
  ExposureSet view;
  if (exp.is_full()) {
    view.universal = true;
    view.size = ds.n_users();
    return view;
  }
  const auto& set = exp.explicit_set(item);
  view.universal = false;
  view.users = set;
  view.size = set.size();
  return view;
}

}  // namespace lcf
