#include "lolog/terms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>

#include "lolog/error.hpp"
#include "lolog/statistics.hpp"

namespace lolog {

namespace {

struct KindInfo {
  TermKind kind;
  std::string_view name;
  bool order_independent;
  bool dyad_independent;
};

constexpr std::array<KindInfo, 12> kKinds{{
    {TermKind::edges, "edges", true, true},
    {TermKind::triangles, "triangles", true, false},
    {TermKind::two_stars, "two-stars", true, false},
    {TermKind::degree, "degree", true, false},
    {TermKind::nodecov_main, "nodecov-main", true, true},
    {TermKind::nodecov_prod, "nodecov-prod", true, true},
    {TermKind::nodematch, "nodematch", true, true},
    {TermKind::nodemix, "nodemix", true, true},
    {TermKind::log_order, "log-order", false, false},
    {TermKind::pref_attach, "pref-attach", false, false},
    {TermKind::shared_nbrs, "shared-nbrs", false, false},
    {TermKind::sv_transitivity, "sv-transitivity", true, false},
}};

const KindInfo& info(TermKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw InvalidArgument("unknown term kind");
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Dense category codes for nodematch/nodemix. Numeric columns are treated as
// categorical on their distinct values.
struct Categories {
  std::vector<int> codes;
  std::vector<std::string> levels;

  static Categories from(const AttributeColumn& col) {
    Categories c;
    if (col.categorical) {
      c.codes = col.codes;
      c.levels = col.levels;
      return c;
    }
    std::map<double, int> index;
    for (double x : col.numeric) {
      auto [it, inserted] = index.emplace(x, static_cast<int>(c.levels.size()));
      if (inserted) c.levels.push_back(format_number(x));
      c.codes.push_back(it->second);
    }
    return c;
  }

  int code_of(const std::string& level, const std::string& attr) const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] == level) return static_cast<int>(i);
    }
    throw InvalidArgument("attribute '" + attr + "' has no level '" + level + "'");
  }
};

template <class F>
double sum_over_edges(const Graph& g, F&& f) {
  double total = 0.0;
  for (const Dyad& e : g.edges()) total += f(e);
  return total;
}

class EdgesTerm final : public Term {
 public:
  double change(const GrowthState&, Dyad) const override { return 1.0; }
  double value(const Graph& g, std::span<const int>) const override {
    return static_cast<double>(g.edge_count());
  }
};

class TrianglesTerm final : public Term {
 public:
  double change(const GrowthState& s, Dyad d) const override {
    return static_cast<double>(s.graph().shared_neighbors(d));
  }
  double value(const Graph& g, std::span<const int>) const override {
    return static_cast<double>(triangle_count(g));
  }
};

class TwoStarsTerm final : public Term {
 public:
  double change(const GrowthState& s, Dyad d) const override {
    return static_cast<double>(s.graph().degree(d.tail) + s.graph().degree(d.head));
  }
  double value(const Graph& g, std::span<const int>) const override {
    return static_cast<double>(two_star_count(g));
  }
};

class DegreeTerm final : public Term {
 public:
  explicit DegreeTerm(int k) : k_(k) {}
  double change(const GrowthState& s, Dyad d) const override {
    const int a = s.graph().degree(d.tail);
    const int b = s.graph().degree(d.head);
    return static_cast<double>((a + 1 == k_) + (b + 1 == k_) - (a == k_) - (b == k_));
  }
  double value(const Graph& g, std::span<const int>) const override {
    const auto dist = degree_distribution(g);
    return static_cast<std::size_t>(k_) < dist.size() ? static_cast<double>(dist[static_cast<std::size_t>(k_)]) : 0.0;
  }

 private:
  int k_;
};

class NodecovTerm final : public Term {
 public:
  NodecovTerm(std::vector<double> x, bool product) : x_(std::move(x)), product_(product) {}
  double change(const GrowthState&, Dyad d) const override { return eval(d); }
  double value(const Graph& g, std::span<const int>) const override {
    return sum_over_edges(g, [this](Dyad e) { return eval(e); });
  }

 private:
  double eval(Dyad d) const {
    const double a = x_[static_cast<std::size_t>(d.tail)];
    const double b = x_[static_cast<std::size_t>(d.head)];
    return product_ ? a * b : a + b;
  }
  std::vector<double> x_;
  bool product_;
};

class NodematchTerm final : public Term {
 public:
  explicit NodematchTerm(std::vector<int> codes) : codes_(std::move(codes)) {}
  double change(const GrowthState&, Dyad d) const override { return eval(d); }
  double value(const Graph& g, std::span<const int>) const override {
    return sum_over_edges(g, [this](Dyad e) { return eval(e); });
  }

 private:
  double eval(Dyad d) const {
    return codes_[static_cast<std::size_t>(d.tail)] == codes_[static_cast<std::size_t>(d.head)] ? 1.0 : 0.0;
  }
  std::vector<int> codes_;
};

class NodemixTerm final : public Term {
 public:
  NodemixTerm(std::vector<int> codes, int a, int b) : codes_(std::move(codes)), a_(a), b_(b) {}
  double change(const GrowthState&, Dyad d) const override { return eval(d); }
  double value(const Graph& g, std::span<const int>) const override {
    return sum_over_edges(g, [this](Dyad e) { return eval(e); });
  }

 private:
  double eval(Dyad d) const {
    const int x = codes_[static_cast<std::size_t>(d.tail)];
    const int y = codes_[static_cast<std::size_t>(d.head)];
    // Level pairs are unordered, also for directed graphs.
    return (x == a_ && y == b_) || (x == b_ && y == a_) ? 1.0 : 0.0;
  }
  std::vector<int> codes_;
  int a_;
  int b_;
};

class LogOrderTerm final : public Term {
 public:
  double change(const GrowthState& s, Dyad d) const override {
    return std::log(static_cast<double>(s.entry_time(s.acting(d))));
  }
  double value(const Graph& g, std::span<const int> entry_times) const override {
    if (entry_times.size() != static_cast<std::size_t>(g.size())) {
      throw InvalidArgument("log-order statistic needs the vertex entry positions");
    }
    return sum_over_edges(g, [&](Dyad e) {
      const int t = std::max(entry_times[static_cast<std::size_t>(e.tail)],
                             entry_times[static_cast<std::size_t>(e.head)]);
      return std::log(static_cast<double>(t));
    });
  }
};

// log((k + d_alter) / Σ_{entered j ≠ acting} (k + d_j)), degrees at t-1.
class PrefAttachTerm final : public Term {
 public:
  explicit PrefAttachTerm(double k) : k_(k) {}
  double change(const GrowthState& s, Dyad d) const override {
    if (s.entered_count() < 2) throw InvalidArgument("pref-attach evaluated before two vertices entered");
    const Vertex acting = s.acting(d);
    const Vertex alter = acting == d.head ? d.tail : d.head;
    const double denom = total_ - (k_ + s.graph().degree(acting));
    const double numer = k_ + s.graph().degree(alter);
    if (!(denom > 0.0) || !(numer > 0.0)) {
      throw InvalidArgument("pref-attach attachment weight is zero; the offset k must be positive");
    }
    return std::log(numer / denom);
  }
  void on_enter(const GrowthState& s, Vertex v) override { total_ += k_ + s.graph().degree(v); }
  void on_edge(const GrowthState&, Dyad) override { total_ += 2.0; }
  void reset() override { total_ = 0.0; }
  double value(const Graph&, std::span<const int>) const override {
    throw InvalidArgument("pref-attach is order dependent and has no graph-only value");
  }

 private:
  double k_;
  double total_ = 0.0;
};

class SharedNbrsTerm final : public Term {
 public:
  double change(const GrowthState& s, Dyad d) const override {
    const int m = std::min(s.graph().degree(d.tail), s.graph().degree(d.head));
    if (m == 0) return 0.0;
    return std::log1p(static_cast<double>(s.graph().shared_neighbors(d)) / static_cast<double>(m));
  }
  double value(const Graph&, std::span<const int>) const override {
    throw InvalidArgument("shared-nbrs is order dependent and has no graph-only value");
  }
};

class SvTransitivityStat final : public Term {
 public:
  double change(const GrowthState&, Dyad) const override {
    throw InvalidArgument("sv-transitivity is a moment statistic and cannot be a model term");
  }
  double value(const Graph& g, std::span<const int>) const override { return sv_transitivity(g); }
};

std::vector<double> numeric_column(const TermSpec& spec, const VertexAttributes* attrs) {
  const auto& col = attrs->at(spec.attr);
  if (col.categorical) {
    throw InvalidArgument("term " + spec.label() + " needs a numeric attribute; '" + spec.attr +
                          "' is categorical");
  }
  return col.numeric;
}

}  // namespace

std::string_view kind_name(TermKind kind) { return info(kind).name; }

std::optional<TermKind> kind_from_name(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

bool order_independent(TermKind kind) { return info(kind).order_independent; }
bool dyad_independent(TermKind kind) { return info(kind).dyad_independent; }
bool moment_only(TermKind kind) { return kind == TermKind::sv_transitivity; }

TermSpec TermSpec::degree_count(int k) {
  TermSpec t = of(TermKind::degree);
  t.degree = k;
  return t;
}

TermSpec TermSpec::nodecov(std::string attribute, bool product) {
  TermSpec t = of(product ? TermKind::nodecov_prod : TermKind::nodecov_main);
  t.attr = std::move(attribute);
  return t;
}

TermSpec TermSpec::nodematch(std::string attribute) {
  TermSpec t = of(TermKind::nodematch);
  t.attr = std::move(attribute);
  return t;
}

TermSpec TermSpec::nodemix(std::string attribute, std::string a, std::string b) {
  TermSpec t = of(TermKind::nodemix);
  t.attr = std::move(attribute);
  t.level_a = std::move(a);
  t.level_b = std::move(b);
  return t;
}

TermSpec TermSpec::pref_attach(double k) {
  TermSpec t = of(TermKind::pref_attach);
  t.offset = k;
  return t;
}

std::string TermSpec::label() const {
  const std::string name(kind_name(kind));
  switch (kind) {
    case TermKind::degree:
      return name + "(" + std::to_string(degree) + ")";
    case TermKind::nodecov_main:
    case TermKind::nodecov_prod:
    case TermKind::nodematch:
      return name + "(" + attr + ")";
    case TermKind::nodemix:
      return name + "(" + attr + ":" + level_a + "-" + level_b + ")";
    case TermKind::pref_attach:
      return name + "(" + format_number(offset) + ")";
    default:
      return name;
  }
}

void validate_term(const TermSpec& spec, const VertexAttributes* attrs) {
  switch (spec.kind) {
    case TermKind::degree:
      if (spec.degree < 0) throw InvalidArgument("degree term level must be >= 0");
      break;
    case TermKind::pref_attach:
      if (!(spec.offset > 0.0) || !std::isfinite(spec.offset)) {
        throw InvalidArgument("pref-attach offset k must be a positive finite number");
      }
      break;
    case TermKind::nodecov_main:
    case TermKind::nodecov_prod:
    case TermKind::nodematch:
    case TermKind::nodemix: {
      if (spec.attr.empty()) throw InvalidArgument("term " + spec.label() + " needs an attribute name");
      if (attrs == nullptr || !attrs->contains(spec.attr)) {
        throw InvalidArgument("term " + spec.label() + " references missing attribute '" + spec.attr + "'");
      }
      // Constructing the term checks column types and nodemix levels.
      make_term(spec, attrs);
      break;
    }
    default:
      break;
  }
}

std::unique_ptr<Term> make_term(const TermSpec& spec, const VertexAttributes* attrs) {
  auto need_attrs = [&] {
    if (attrs == nullptr) {
      throw InvalidArgument("term " + spec.label() + " references attribute '" + spec.attr +
                            "' but no vertex attributes were supplied");
    }
  };
  switch (spec.kind) {
    case TermKind::edges:
      return std::make_unique<EdgesTerm>();
    case TermKind::triangles:
      return std::make_unique<TrianglesTerm>();
    case TermKind::two_stars:
      return std::make_unique<TwoStarsTerm>();
    case TermKind::degree:
      return std::make_unique<DegreeTerm>(spec.degree);
    case TermKind::nodecov_main:
    case TermKind::nodecov_prod:
      need_attrs();
      return std::make_unique<NodecovTerm>(numeric_column(spec, attrs), spec.kind == TermKind::nodecov_prod);
    case TermKind::nodematch:
      need_attrs();
      return std::make_unique<NodematchTerm>(Categories::from(attrs->at(spec.attr)).codes);
    case TermKind::nodemix: {
      need_attrs();
      auto cats = Categories::from(attrs->at(spec.attr));
      const int a = cats.code_of(spec.level_a, spec.attr);
      const int b = cats.code_of(spec.level_b, spec.attr);
      return std::make_unique<NodemixTerm>(std::move(cats.codes), a, b);
    }
    case TermKind::log_order:
      return std::make_unique<LogOrderTerm>();
    case TermKind::pref_attach:
      return std::make_unique<PrefAttachTerm>(spec.offset);
    case TermKind::shared_nbrs:
      return std::make_unique<SharedNbrsTerm>();
    case TermKind::sv_transitivity:
      return std::make_unique<SvTransitivityStat>();
  }
  throw InvalidArgument("unknown term kind");
}

GrowthState::GrowthState(Vertex n, bool directed)
    : graph_(n, directed), entry_(static_cast<std::size_t>(n), 0) {}

std::vector<double> evaluate_statistics(std::span<const TermSpec> specs, const Graph& g,
                                        const VertexAttributes* attrs, std::span<const int> entry_times) {
  std::vector<double> values;
  values.reserve(specs.size());
  for (const auto& spec : specs) values.push_back(make_term(spec, attrs)->value(g, entry_times));
  return values;
}

}  // namespace lolog
