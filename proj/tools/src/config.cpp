#include "config.hpp"

#include <algorithm>
#include <map>
#include <set>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "lolog/error.hpp"

namespace lolog::cli {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const toml::node& node, const std::string& key, const std::string& message) const {
    throw InvalidArgument(source_ + ":" + std::to_string(node.source().begin.line) + ": '" + key + "': " + message);
  }

  void only_keys(const toml::table& table, const std::string& where, std::initializer_list<std::string_view> allowed) const {
    for (auto&& [k, v] : table) {
      if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end()) {
        throw InvalidArgument(source_ + ":" + std::to_string(k.source().begin.line) + ": unknown key '" +
                              (where.empty() ? "" : where + ".") + std::string(k.str()) + "'");
      }
    }
  }

  double number(const toml::node& node, const std::string& key) const {
    if (auto v = node.as_floating_point()) return v->get();
    if (auto v = node.as_integer()) return static_cast<double>(v->get());
    fail(node, key, "expected a number");
  }

  std::int64_t integer(const toml::node& node, const std::string& key) const {
    if (auto v = node.as_integer()) return v->get();
    fail(node, key, "expected an integer");
  }

  bool boolean(const toml::node& node, const std::string& key) const {
    if (auto v = node.as_boolean()) return v->get();
    fail(node, key, "expected true or false");
  }

  std::string string(const toml::node& node, const std::string& key) const {
    if (auto v = node.as_string()) return v->get();
    fail(node, key, "expected a string");
  }

  const toml::array& array(const toml::node& node, const std::string& key) const {
    if (auto v = node.as_array()) return *v;
    fail(node, key, "expected an array");
  }

  const toml::table& table(const toml::node& node, const std::string& key) const {
    if (auto v = node.as_table()) return *v;
    fail(node, key, "expected a table");
  }

  std::vector<double> numbers(const toml::node& node, const std::string& key) const {
    std::vector<double> out;
    for (const auto& v : array(node, key)) out.push_back(number(v, key));
    return out;
  }

  TermSpec term(const toml::node& node, const std::string& key) const {
    const auto& t = table(node, key);
    only_keys(t, key, {"kind", "attr", "k", "levels"});
    const auto* kind_node = t.get("kind");
    if (!kind_node) fail(node, key, "missing 'kind'");
    const std::string kind = string(*kind_node, key + ".kind");
    const auto parsed = kind_from_name(kind);
    if (!parsed) fail(*kind_node, key + ".kind", "unknown term kind '" + kind + "'");
    TermSpec spec = TermSpec::of(*parsed);
    if (const auto* a = t.get("attr")) spec.attr = string(*a, key + ".attr");
    if (const auto* k = t.get("k")) {
      if (spec.kind == TermKind::degree) {
        spec.degree = static_cast<int>(integer(*k, key + ".k"));
      } else if (spec.kind == TermKind::pref_attach) {
        spec.offset = number(*k, key + ".k");
      } else {
        fail(*k, key + ".k", "only degree and pref-attach take 'k'");
      }
    }
    if (const auto* l = t.get("levels")) {
      const auto& levels = array(*l, key + ".levels");
      if (spec.kind != TermKind::nodemix || levels.size() != 2) fail(*l, key + ".levels", "nodemix takes two levels");
      spec.level_a = string(*levels.get(0), key + ".levels");
      spec.level_b = string(*levels.get(1), key + ".levels");
    }
    return spec;
  }

  std::vector<TermSpec> terms(const toml::node& node, const std::string& key) const {
    std::vector<TermSpec> out;
    const auto& list = array(node, key);
    for (std::size_t i = 0; i < list.size(); ++i) out.push_back(term(*list.get(i), key + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  std::string source_;
};

}  // namespace

ModelConfig parse_config(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw InvalidArgument(source + ":" + std::to_string(e.source().begin.line) + ": " + std::string(e.description()));
  }
  Reader rd(source);
  rd.only_keys(root, "", {"directed", "vertices", "theta", "terms", "order", "moments", "fit", "gof"});

  ModelConfig cfg;
  cfg.text = text;
  cfg.source = source;
  if (const auto* n = root.get("directed")) cfg.directed = rd.boolean(*n, "directed");
  if (const auto* n = root.get("vertices")) {
    const auto v = rd.integer(*n, "vertices");
    if (v < 1) rd.fail(*n, "vertices", "must be positive");
    cfg.vertices = static_cast<Vertex>(v);
  }
  if (const auto* n = root.get("theta")) cfg.theta = rd.numbers(*n, "theta");
  const auto* terms = root.get("terms");
  if (!terms) throw InvalidArgument(source + ": missing 'terms'");
  cfg.terms = rd.terms(*terms, "terms");
  if (cfg.terms.empty()) rd.fail(*terms, "terms", "needs at least one term");
  if (cfg.theta && cfg.theta->size() != cfg.terms.size()) {
    rd.fail(*root.get("theta"), "theta", "has " + std::to_string(cfg.theta->size()) + " values for " +
                                             std::to_string(cfg.terms.size()) + " terms");
  }

  if (const auto* n = root.get("order")) {
    const auto& t = rd.table(*n, "order");
    rd.only_keys(t, "order", {"type", "entry_attr", "groups"});
    if (const auto* type = t.get("type")) {
      const auto s = rd.string(*type, "order.type");
      if (s == "uniform") {
        cfg.order = OrderMode::uniform;
      } else if (s == "vertex-entry") {
        cfg.order = OrderMode::vertex_entry;
      } else {
        rd.fail(*type, "order.type", "expected \"uniform\" or \"vertex-entry\"");
      }
    }
    if (const auto* a = t.get("entry_attr")) cfg.entry_attr = rd.string(*a, "order.entry_attr");
    if (const auto* g = t.get("groups")) {
      for (const auto& group : rd.array(*g, "order.groups")) {
        std::vector<std::string> labels;
        for (const auto& v : rd.array(group, "order.groups")) labels.push_back(rd.string(v, "order.groups"));
        if (labels.empty()) rd.fail(group, "order.groups", "empty group");
        cfg.groups.push_back(std::move(labels));
      }
    }
    if (cfg.order == OrderMode::uniform && (!cfg.entry_attr.empty() || !cfg.groups.empty())) {
      rd.fail(*n, "order", "entry_attr and groups need type = \"vertex-entry\"");
    }
    if (!cfg.entry_attr.empty() && !cfg.groups.empty()) rd.fail(*n, "order", "give entry_attr or groups, not both");
  }

  if (const auto* n = root.get("moments")) cfg.moments = rd.terms(*n, "moments");

  if (const auto* n = root.get("fit")) {
    const auto& t = rd.table(*n, "fit");
    rd.only_keys(t, "fit", {"r", "epsilon", "max_iters", "beta1", "beta2", "alpha0", "variational_orders", "theta0"});
    if (const auto* v = t.get("r")) cfg.fit.r = static_cast<int>(rd.integer(*v, "fit.r"));
    if (const auto* v = t.get("epsilon")) cfg.fit.epsilon = rd.number(*v, "fit.epsilon");
    if (const auto* v = t.get("max_iters")) cfg.fit.max_iters = static_cast<int>(rd.integer(*v, "fit.max_iters"));
    if (const auto* v = t.get("beta1")) cfg.fit.beta1 = rd.number(*v, "fit.beta1");
    if (const auto* v = t.get("beta2")) cfg.fit.beta2 = rd.number(*v, "fit.beta2");
    if (const auto* v = t.get("alpha0")) cfg.fit.alpha0 = rd.number(*v, "fit.alpha0");
    if (const auto* v = t.get("variational_orders")) {
      cfg.fit.variational_orders = static_cast<int>(rd.integer(*v, "fit.variational_orders"));
    }
    if (const auto* v = t.get("theta0")) {
      const auto values = rd.numbers(*v, "fit.theta0");
      if (values.size() != cfg.terms.size()) rd.fail(*v, "fit.theta0", "needs one value per term");
      cfg.fit.theta0 = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    }
    try {
      cfg.fit.validate();
    } catch (const InvalidArgument& e) {
      rd.fail(*n, "fit", e.what());
    }
  }

  if (const auto* n = root.get("gof")) {
    const auto& t = rd.table(*n, "gof");
    rd.only_keys(t, "gof", {"r", "stats", "checkpoints", "log_bins"});
    if (const auto* v = t.get("r")) cfg.gof.r = static_cast<int>(rd.integer(*v, "gof.r"));
    if (const auto* v = t.get("stats")) {
      cfg.gof.stats.clear();
      for (const auto& s : rd.array(*v, "gof.stats")) {
        const auto name = rd.string(s, "gof.stats");
        const auto stat = gof_stat_from_name(name);
        if (!stat) rd.fail(s, "gof.stats", "unknown statistic '" + name + "'");
        cfg.gof.stats.push_back(*stat);
      }
    }
    if (const auto* v = t.get("checkpoints")) {
      for (const auto& c : rd.array(*v, "gof.checkpoints")) {
        cfg.gof.checkpoints.push_back(static_cast<Vertex>(rd.integer(c, "gof.checkpoints")));
      }
    }
    if (const auto* v = t.get("log_bins")) cfg.gof.log_bins = rd.boolean(*v, "gof.log_bins");
    if (cfg.gof.r < 1) rd.fail(*n, "gof.r", "must be positive");
  }
  return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path), path.string()); }

namespace {

OrderSpec build_order(const ModelConfig& cfg, const VertexTable& vertices, const VertexAttributes* attrs) {
  if (cfg.order == OrderMode::uniform) return OrderSpec::uniform();
  if (!cfg.groups.empty()) {
    std::vector<std::vector<Vertex>> groups;
    for (const auto& g : cfg.groups) {
      std::vector<Vertex> ids;
      for (const auto& label : g) ids.push_back(vertices.at(label));
      groups.push_back(std::move(ids));
    }
    return OrderSpec::vertex_entry(std::move(groups));
  }
  if (!cfg.entry_attr.empty()) {
    if (!attrs) throw InvalidArgument("order.entry_attr '" + cfg.entry_attr + "' needs an attribute file");
    const auto& column = attrs->at(cfg.entry_attr);
    if (column.categorical) throw InvalidArgument("order.entry_attr '" + cfg.entry_attr + "' must be numeric");
    // Ascending value; tied vertices form one group.
    std::map<double, std::vector<Vertex>> by_value;
    for (Vertex v = 0; v < vertices.size(); ++v) by_value[column.numeric[static_cast<std::size_t>(v)]].push_back(v);
    std::vector<std::vector<Vertex>> groups;
    for (auto& [value, ids] : by_value) groups.push_back(std::move(ids));
    return OrderSpec::vertex_entry(std::move(groups));
  }
  return OrderSpec::random_entry(vertices.size());
}

}  // namespace

Dataset load_dataset(const ModelConfig& cfg, const std::optional<std::filesystem::path>& graph_path,
                     const std::optional<std::filesystem::path>& attrs_path) {
  Dataset data;
  std::optional<EdgeList> edges;
  if (graph_path) edges = read_edge_list(*graph_path);
  std::optional<AttributeTable> table;
  if (attrs_path) table = read_attribute_table(*attrs_path);

  if (table) {
    for (const auto& label : table->labels) {
      if (data.vertices.index.count(label)) throw InvalidArgument(attrs_path->string() + ": duplicate vertex '" + label + "'");
      data.vertices.intern(label);
    }
  } else if (cfg.vertices) {
    for (Vertex v = 0; v < *cfg.vertices; ++v) data.vertices.intern(std::to_string(v));
  } else if (edges) {
    for (const auto& label : edges->appearance) data.vertices.intern(label);
  } else {
    throw InvalidArgument("cannot size the vertex set: give --graph, --attrs, or 'vertices' in the model file");
  }
  if (cfg.vertices && *cfg.vertices != data.vertices.size()) {
    throw InvalidArgument("model file says " + std::to_string(*cfg.vertices) + " vertices but the data has " +
                          std::to_string(data.vertices.size()));
  }
  if (edges) {
    for (const auto& label : edges->appearance) {
      if (!data.vertices.index.count(label)) {
        throw InvalidArgument(graph_path->string() + ": vertex '" + label + "' is not in the vertex set");
      }
    }
    data.graph = build_graph(*edges, data.vertices, cfg.directed);
  }

  Model& m = data.model;
  m.n = data.vertices.size();
  m.directed = cfg.directed;
  m.terms = cfg.terms;
  if (table) m.attributes = build_attributes(*table, data.vertices);
  m.order = build_order(cfg, data.vertices, m.attrs());
  try {
    m.validate();
    for (const auto& t : cfg.moments) validate_term(t, m.attrs());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(cfg.source + ": " + e.what());
  }
  return data;
}

}  // namespace lolog::cli
