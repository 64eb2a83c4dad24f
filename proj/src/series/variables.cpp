#include "msbc/series/variables.hpp"

#include <algorithm>

#include "msbc/errors.hpp"

namespace msbc {

VariableSet::VariableSet(std::vector<std::string> names, std::vector<bool> is_parameter)
    : names_(std::move(names)), parameter_(std::move(is_parameter)) {
  if (names_.size() != parameter_.size())
    throw StructuralError("variable set: names and parameter flags differ in length");
  if (names_.size() > kMaxVariables)
    throw StructuralError("variable set: at most 8 variables are supported");
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw StructuralError("variable set: duplicate name " + names_[i]);
}

VariablesPtr VariableSet::make(std::vector<std::string> state, std::vector<std::string> parameters) {
  std::vector<bool> flags(state.size(), false);
  flags.resize(state.size() + parameters.size(), true);
  state.insert(state.end(), parameters.begin(), parameters.end());
  return std::make_shared<const VariableSet>(std::move(state), std::move(flags));
}

std::size_t VariableSet::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw StructuralError("unknown variable " + name);
  return static_cast<std::size_t>(it - names_.begin());
}

bool VariableSet::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

bool same_variables(const VariablesPtr& a, const VariablesPtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace msbc
