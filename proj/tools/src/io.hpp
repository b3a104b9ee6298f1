#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "lolog/attributes.hpp"
#include "lolog/graph.hpp"

namespace lolog::cli {

/// Vertex labels and their dense ids.
struct VertexTable {
  std::vector<std::string> labels;
  std::unordered_map<std::string, Vertex> index;

  Vertex size() const { return static_cast<Vertex>(labels.size()); }
  /// Appends the label if new; returns its id.
  Vertex intern(const std::string& label);
  /// Throws InvalidArgument for unknown labels.
  Vertex at(const std::string& label) const;
};

/// Whitespace-separated edge list, one "tail head" pair per line. A line with
/// a single label declares an isolated vertex. '#' starts a comment.
struct EdgeList {
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> appearance;  // labels in first-seen order
};

EdgeList read_edge_list(const std::filesystem::path& path);
EdgeList parse_edge_list(const std::string& text, const std::string& source);

/// CSV with a header row; the first column holds vertex labels. Columns whose
/// every value parses as a number are numeric, the rest categorical.
struct AttributeTable {
  std::vector<std::string> labels;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> columns;
};

AttributeTable read_attribute_table(const std::filesystem::path& path);
AttributeTable parse_attribute_table(const std::string& text, const std::string& source);

/// Attribute columns reindexed to the vertex table's ids.
std::shared_ptr<VertexAttributes> build_attributes(const AttributeTable& table, const VertexTable& vertices);

Graph build_graph(const EdgeList& list, const VertexTable& vertices, bool directed);

void write_edge_list(const std::filesystem::path& path, const Graph& g, const VertexTable& vertices);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lolog::cli
