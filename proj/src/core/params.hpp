#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hbft {

/// Named numeric parameters for builtin potentials and schedules.
/// Every entry is a list; scalars are one-element lists.
class ParamMap {
 public:
  ParamMap() = default;
  ParamMap(std::initializer_list<std::pair<const std::string, double>> scalars);

  void set(const std::string& key, double value);
  void set(const std::string& key, std::vector<double> values);

  bool contains(std::string_view key) const;

  /// Throws InputError when the key is absent or holds more than one value.
  double scalar(std::string_view key) const;
  double scalar(std::string_view key, double fallback) const;
  std::vector<double> list(std::string_view key) const;
  std::vector<double> list(std::string_view key, std::vector<double> fallback) const;

  /// Rejects keys outside `known`, naming `owner` in the message.
  void require_known(std::string_view owner,
                     std::initializer_list<std::string_view> known) const;

  const std::map<std::string, std::vector<double>, std::less<>>& entries() const {
    return entries_;
  }

  bool operator==(const ParamMap&) const = default;

 private:
  std::map<std::string, std::vector<double>, std::less<>> entries_;
};

}  // namespace hbft
