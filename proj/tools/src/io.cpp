#include "io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lolog/error.hpp"

namespace lolog::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Vertex VertexTable::intern(const std::string& label) {
  auto [it, inserted] = index.try_emplace(label, static_cast<Vertex>(labels.size()));
  if (inserted) labels.push_back(label);
  return it->second;
}

Vertex VertexTable::at(const std::string& label) const {
  const auto it = index.find(label);
  if (it == index.end()) throw InvalidArgument("unknown vertex '" + label + "'");
  return it->second;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidArgument("write failed for " + path.string());
}

EdgeList parse_edge_list(const std::string& text, const std::string& source) {
  EdgeList list;
  std::unordered_map<std::string, bool> seen;
  auto note = [&](const std::string& v) {
    if (seen.emplace(v, true).second) list.appearance.push_back(v);
  };
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(f);
    if (parts.empty()) continue;
    if (parts.size() > 2) {
      throw InvalidArgument(source + ":" + std::to_string(line_no) + ": expected 'tail head', got " +
                            std::to_string(parts.size()) + " fields");
    }
    note(parts[0]);
    if (parts.size() == 2) {
      if (parts[0] == parts[1]) throw InvalidArgument(source + ":" + std::to_string(line_no) + ": self-loop on '" + parts[0] + "'");
      note(parts[1]);
      list.edges.emplace_back(parts[0], parts[1]);
    }
  }
  return list;
}

EdgeList read_edge_list(const std::filesystem::path& path) { return parse_edge_list(read_file(path), path.string()); }

AttributeTable parse_attribute_table(const std::string& text, const std::string& source) {
  AttributeTable table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (header) {
      if (fields.size() < 2) throw InvalidArgument(source + ": header needs a label column and at least one attribute");
      table.names.assign(fields.begin() + 1, fields.end());
      table.columns.resize(table.names.size());
      header = false;
      continue;
    }
    if (fields.size() != table.names.size() + 1) {
      throw InvalidArgument(source + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.names.size() + 1) + " fields, got " + std::to_string(fields.size()));
    }
    table.labels.push_back(fields[0]);
    for (std::size_t j = 0; j < table.names.size(); ++j) table.columns[j].push_back(fields[j + 1]);
  }
  if (header) throw InvalidArgument(source + ": empty attribute file");
  return table;
}

AttributeTable read_attribute_table(const std::filesystem::path& path) {
  return parse_attribute_table(read_file(path), path.string());
}

std::shared_ptr<VertexAttributes> build_attributes(const AttributeTable& table, const VertexTable& vertices) {
  auto attrs = std::make_shared<VertexAttributes>(static_cast<std::size_t>(vertices.size()));
  std::vector<Vertex> row_of(table.labels.size());
  for (std::size_t i = 0; i < table.labels.size(); ++i) row_of[i] = vertices.at(table.labels[i]);
  if (table.labels.size() != static_cast<std::size_t>(vertices.size())) {
    throw InvalidArgument("attribute table covers " + std::to_string(table.labels.size()) + " of " +
                          std::to_string(vertices.size()) + " vertices");
  }
  for (std::size_t j = 0; j < table.names.size(); ++j) {
    const auto& raw = table.columns[j];
    std::vector<double> numbers(raw.size());
    bool numeric = true;
    for (std::size_t i = 0; i < raw.size() && numeric; ++i) numeric = parse_number(raw[i], numbers[i]);
    if (numeric) {
      std::vector<double> values(raw.size());
      for (std::size_t i = 0; i < raw.size(); ++i) values[static_cast<std::size_t>(row_of[i])] = numbers[i];
      attrs->add_numeric(table.names[j], std::move(values));
    } else {
      std::vector<std::string> values(raw.size());
      for (std::size_t i = 0; i < raw.size(); ++i) values[static_cast<std::size_t>(row_of[i])] = raw[i];
      attrs->add_categorical(table.names[j], values);
    }
  }
  return attrs;
}

Graph build_graph(const EdgeList& list, const VertexTable& vertices, bool directed) {
  Graph g(vertices.size(), directed);
  for (const auto& [a, b] : list.edges) g.add_edge({vertices.at(a), vertices.at(b)});
  return g;
}

void write_edge_list(const std::filesystem::path& path, const Graph& g, const VertexTable& vertices) {
  std::ostringstream out;
  std::vector<bool> touched(static_cast<std::size_t>(g.size()), false);
  for (const Dyad& d : g.edges()) {
    out << vertices.labels[static_cast<std::size_t>(d.tail)] << '\t' << vertices.labels[static_cast<std::size_t>(d.head)]
        << '\n';
    touched[static_cast<std::size_t>(d.tail)] = touched[static_cast<std::size_t>(d.head)] = true;
  }
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!touched[static_cast<std::size_t>(v)]) out << vertices.labels[static_cast<std::size_t>(v)] << '\n';
  }
  write_file(path, out.str());
}

}  // namespace lolog::cli
