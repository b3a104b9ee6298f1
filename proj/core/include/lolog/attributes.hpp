#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lolog {

/// One vertex covariate. Numeric columns keep doubles; categorical columns keep
/// dense level codes in first-seen order.
struct AttributeColumn {
  std::string name;
  bool categorical = false;
  std::vector<double> numeric;
  std::vector<int> codes;
  std::vector<std::string> levels;

  std::size_t size() const { return categorical ? codes.size() : numeric.size(); }
  std::optional<int> level_code(const std::string& level) const;
};

/// Vertex covariate table indexed by vertex id.
class VertexAttributes {
 public:
  VertexAttributes() = default;
  explicit VertexAttributes(std::size_t vertex_count) : vertex_count_(vertex_count) {}

  std::size_t vertex_count() const { return vertex_count_; }

  void add_numeric(std::string name, std::vector<double> values);
  void add_categorical(std::string name, const std::vector<std::string>& values);

  bool contains(const std::string& name) const { return find(name) != nullptr; }
  const AttributeColumn* find(const std::string& name) const;
  /// Throws InvalidArgument naming the missing column.
  const AttributeColumn& at(const std::string& name) const;

  const std::vector<AttributeColumn>& columns() const { return columns_; }

 private:
  void check_size(const std::string& name, std::size_t n);

  std::size_t vertex_count_ = 0;
  std::vector<AttributeColumn> columns_;
};

}  // namespace lolog
