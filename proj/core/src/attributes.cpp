#include "lolog/attributes.hpp"

#include <algorithm>
#include <unordered_map>

#include "lolog/error.hpp"

namespace lolog {

std::optional<int> AttributeColumn::level_code(const std::string& level) const {
  auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) return std::nullopt;
  return static_cast<int>(it - levels.begin());
}

void VertexAttributes::check_size(const std::string& name, std::size_t n) {
  if (contains(name)) throw InvalidArgument("duplicate attribute column '" + name + "'");
  if (columns_.empty() && vertex_count_ == 0) vertex_count_ = n;
  if (n != vertex_count_) {
    throw InvalidArgument("attribute column '" + name + "' has " + std::to_string(n) +
                          " values, expected " + std::to_string(vertex_count_));
  }
}

void VertexAttributes::add_numeric(std::string name, std::vector<double> values) {
  check_size(name, values.size());
  AttributeColumn col;
  col.name = std::move(name);
  col.numeric = std::move(values);
  columns_.push_back(std::move(col));
}

void VertexAttributes::add_categorical(std::string name, const std::vector<std::string>& values) {
  check_size(name, values.size());
  AttributeColumn col;
  col.name = std::move(name);
  col.categorical = true;
  std::unordered_map<std::string, int> index;
  col.codes.reserve(values.size());
  for (const auto& v : values) {
    auto [it, inserted] = index.emplace(v, static_cast<int>(col.levels.size()));
    if (inserted) col.levels.push_back(v);
    col.codes.push_back(it->second);
  }
  columns_.push_back(std::move(col));
}

const AttributeColumn* VertexAttributes::find(const std::string& name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const AttributeColumn& VertexAttributes::at(const std::string& name) const {
  if (const auto* c = find(name)) return *c;
  throw InvalidArgument("vertex attribute '" + name + "' not found");
}

}  // namespace lolog
