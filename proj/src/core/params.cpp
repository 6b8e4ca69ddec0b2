#include "core/params.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace hbft {

ParamMap::ParamMap(
    std::initializer_list<std::pair<const std::string, double>> scalars) {
  for (const auto& [key, value] : scalars) set(key, value);
}

void ParamMap::set(const std::string& key, double value) {
  entries_[key] = {value};
}

void ParamMap::set(const std::string& key, std::vector<double> values) {
  entries_[key] = std::move(values);
}

bool ParamMap::contains(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

double ParamMap::scalar(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw InputError("missing required parameter '" + std::string(key) + "'");
  if (it->second.size() != 1)
    throw InputError("parameter '" + std::string(key) + "' must be a scalar");
  return it->second.front();
}

double ParamMap::scalar(std::string_view key, double fallback) const {
  return contains(key) ? scalar(key) : fallback;
}

std::vector<double> ParamMap::list(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw InputError("missing required parameter '" + std::string(key) + "'");
  return it->second;
}

std::vector<double> ParamMap::list(std::string_view key,
                                   std::vector<double> fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

void ParamMap::require_known(std::string_view owner,
                             std::initializer_list<std::string_view> known) const {
  for (const auto& [key, _] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      std::string allowed;
      for (auto k : known) {
        if (!allowed.empty()) allowed += ", ";
        allowed += k;
      }
      throw InputError("unknown parameter '" + key + "' for " + std::string(owner) +
                       " (accepted: " + (allowed.empty() ? "none" : allowed) + ")");
    }
  }
}

}  // namespace hbft
