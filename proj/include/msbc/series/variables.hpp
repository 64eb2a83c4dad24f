#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace msbc {

inline constexpr std::size_t kMaxVariables = 8;

// Ordered variable names; parameter variables (e.g. eps) carry their own
// truncation cap and do not count towards the state degree.
class VariableSet {
 public:
  VariableSet(std::vector<std::string> names, std::vector<bool> is_parameter);

  static std::shared_ptr<const VariableSet> make(std::vector<std::string> state,
                                                 std::vector<std::string> parameters = {});

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  bool is_parameter(std::size_t i) const { return parameter_[i]; }
  std::size_t index_of(const std::string& name) const;  // throws if absent
  bool contains(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const VariableSet& other) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<bool> parameter_;
};

using VariablesPtr = std::shared_ptr<const VariableSet>;

bool same_variables(const VariablesPtr& a, const VariablesPtr& b);

}  // namespace msbc
