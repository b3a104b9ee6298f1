#include "lolog/model.hpp"

#include <algorithm>
#include <string>

#include "lolog/error.hpp"

namespace lolog {

void Model::validate() const {
  if (n < 1) throw InvalidArgument("model needs at least one vertex");
  if (terms.empty()) throw InvalidArgument("model has no terms");
  if (attributes && attributes->vertex_count() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("attribute table has " + std::to_string(attributes->vertex_count()) +
                          " rows but the model has " + std::to_string(n) + " vertices");
  }
  for (const auto& t : terms) {
    if (moment_only(t.kind)) {
      throw InvalidArgument("'" + std::string(kind_name(t.kind)) + "' can only be used as a moment statistic");
    }
    validate_term(t, attrs());
  }
  order.validate(n);
}

bool Model::term_order_independent(const TermSpec& t) const {
  if (t.kind == TermKind::log_order) return order.entry_observed();
  return lolog::order_independent(t.kind);
}

bool Model::order_independent() const {
  return std::all_of(terms.begin(), terms.end(), [this](const TermSpec& t) { return term_order_independent(t); });
}

bool Model::dyad_independent() const {
  return std::all_of(terms.begin(), terms.end(), [](const TermSpec& t) { return lolog::dyad_independent(t.kind); });
}

std::vector<std::string> Model::labels() const {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.label());
  return out;
}

ChangeStatEngine::ChangeStatEngine(const Model& model) : state_(model.n, model.directed) {
  terms_.reserve(model.terms.size());
  for (const auto& spec : model.terms) terms_.push_back(make_term(spec, model.attrs()));
}

void ChangeStatEngine::reset() {
  state_.graph_.clear();
  std::fill(state_.entry_.begin(), state_.entry_.end(), 0);
  state_.entered_ = 0;
  for (auto& t : terms_) t->reset();
}

void ChangeStatEngine::enter(Vertex v, int time) {
  state_.entry_[static_cast<std::size_t>(v)] = time;
  ++state_.entered_;
  for (auto& t : terms_) t->on_enter(state_, v);
}

void ChangeStatEngine::prepare(Dyad d, std::span<const int> entry_times) {
  const int ta = state_.entry_time(d.tail);
  const int tb = state_.entry_time(d.head);
  if (ta != 0 && tb != 0) return;
  const int et = entry_times[static_cast<std::size_t>(d.tail)];
  const int eh = entry_times[static_cast<std::size_t>(d.head)];
  if (ta == 0 && tb == 0) {
    if (et <= eh) {
      enter(d.tail, et);
      enter(d.head, eh);
    } else {
      enter(d.head, eh);
      enter(d.tail, et);
    }
  } else if (ta == 0) {
    enter(d.tail, et);
  } else {
    enter(d.head, eh);
  }
}

void ChangeStatEngine::change_stats(Dyad d, std::span<double> out) const {
  for (std::size_t j = 0; j < terms_.size(); ++j) out[j] = terms_[j]->change(state_, d);
}

void ChangeStatEngine::apply_edge(Dyad d, std::span<double> out) {
  change_stats(d, out);
  commit_edge(d);
}

void ChangeStatEngine::commit_edge(Dyad d) {
  state_.graph_.add_edge(d);
  for (auto& t : terms_) t->on_edge(state_, d);
}

std::vector<double> full_stats(const Model& model, const Graph& final_graph, const EdgeOrder& order) {
  if (final_graph.size() != model.n || final_graph.directed() != model.directed) {
    throw InvalidArgument("graph does not match the model's vertex set");
  }
  check_order(final_graph, order);
  ChangeStatEngine engine(model);
  std::vector<double> total(engine.size(), 0.0);
  std::vector<double> c(engine.size(), 0.0);
  for (const Dyad& d : order.sequence) {
    engine.prepare(d, order.entry_times);
    if (!final_graph.has_edge(d)) continue;
    engine.apply_edge(d, c);
    for (std::size_t j = 0; j < c.size(); ++j) total[j] += c[j];
  }
  return total;
}

}  // namespace lolog
