#include "lolog/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lolog/error.hpp"

namespace lolog {

OrderSpec OrderSpec::vertex_entry(std::vector<std::vector<Vertex>> groups) {
  OrderSpec spec;
  spec.mode = OrderMode::vertex_entry;
  spec.entry_groups = std::move(groups);
  return spec;
}

OrderSpec OrderSpec::random_entry(Vertex n) {
  std::vector<Vertex> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Vertex{0});
  return vertex_entry({std::move(all)});
}

OrderSpec OrderSpec::fixed_entry(std::span<const Vertex> sequence) {
  std::vector<std::vector<Vertex>> groups;
  groups.reserve(sequence.size());
  for (Vertex v : sequence) groups.push_back({v});
  return vertex_entry(std::move(groups));
}

void OrderSpec::validate(Vertex n) const {
  if (mode == OrderMode::uniform) {
    if (!entry_groups.empty()) throw InvalidArgument("uniform ordering takes no entry groups");
    return;
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::size_t total = 0;
  for (const auto& group : entry_groups) {
    if (group.empty()) throw InvalidArgument("vertex-entry ordering has an empty group");
    for (Vertex v : group) {
      if (v < 0 || v >= n) {
        throw InvalidArgument("entry group references vertex " + std::to_string(v) +
                              " outside [0, " + std::to_string(n) + ")");
      }
      if (seen[static_cast<std::size_t>(v)]) {
        throw InvalidArgument("vertex " + std::to_string(v) + " appears in more than one entry group");
      }
      seen[static_cast<std::size_t>(v)] = 1;
      ++total;
    }
  }
  if (total != static_cast<std::size_t>(n)) {
    throw InvalidArgument("entry groups cover " + std::to_string(total) + " of " + std::to_string(n) +
                          " vertices; they must partition the vertex set");
  }
}

bool OrderSpec::entry_observed() const {
  if (mode != OrderMode::vertex_entry) return false;
  // The first two entrants are interchangeable only if they share a group; the
  // entry positions themselves are fixed once every group is a singleton.
  return std::all_of(entry_groups.begin(), entry_groups.end(),
                     [](const auto& g) { return g.size() == 1; });
}

std::vector<Vertex> EdgeOrder::entry_sequence() const {
  std::vector<Vertex> seq(entry_times.size(), -1);
  for (std::size_t v = 0; v < entry_times.size(); ++v) {
    const int t = entry_times[v];
    if (t >= 1 && static_cast<std::size_t>(t) <= seq.size()) seq[static_cast<std::size_t>(t - 1)] = static_cast<Vertex>(v);
  }
  return seq;
}

OrderStream::OrderStream(const OrderSpec& spec, const Graph& layout, Rng& rng)
    : mode_(spec.mode),
      n_(layout.size()),
      directed_(layout.directed()),
      rng_(&rng),
      entry_times_(static_cast<std::size_t>(layout.size()), 0),
      layout_(&layout) {
  spec.validate(n_);
  if (mode_ == OrderMode::uniform) {
    shuffled_.resize(static_cast<std::size_t>(layout.dyad_count()));
    std::iota(shuffled_.begin(), shuffled_.end(), std::int64_t{0});
    shuffle(shuffled_.begin(), shuffled_.end(), rng);
    if (n_ == 1) entry_times_[0] = 1;
    return;
  }
  entry_sequence_ = sample_entry_sequence(spec, n_, rng);
  for (std::size_t t = 0; t < entry_sequence_.size(); ++t) {
    entry_times_[static_cast<std::size_t>(entry_sequence_[t])] = static_cast<int>(t + 1);
  }
  round_ = 1;
  begin_round();
}

void OrderStream::begin_round() {
  round_dyads_.clear();
  cursor_ = 0;
  if (round_ >= entry_sequence_.size()) return;
  const Vertex v = entry_sequence_[round_];
  for (std::size_t k = 0; k < round_; ++k) {
    const Vertex u = entry_sequence_[k];
    if (directed_) {
      round_dyads_.push_back({u, v});
      round_dyads_.push_back({v, u});
    } else {
      round_dyads_.push_back({std::min(u, v), std::max(u, v)});
    }
  }
  shuffle(round_dyads_.begin(), round_dyads_.end(), *rng_);
}

bool OrderStream::next(Dyad& out) {
  if (mode_ == OrderMode::uniform) {
    if (cursor_ >= shuffled_.size()) return false;
    out = layout_->dyad_at(shuffled_[cursor_++]);
    for (Vertex v : {out.tail, out.head}) {
      auto& t = entry_times_[static_cast<std::size_t>(v)];
      if (t == 0) t = next_entry_++;
    }
    return true;
  }
  while (cursor_ >= round_dyads_.size()) {
    if (round_ + 1 >= entry_sequence_.size()) return false;
    ++round_;
    begin_round();
  }
  out = round_dyads_[cursor_++];
  return true;
}

std::vector<Vertex> sample_entry_sequence(const OrderSpec& spec, Vertex n, Rng& rng) {
  spec.validate(n);
  std::vector<Vertex> sequence;
  sequence.reserve(static_cast<std::size_t>(n));
  for (const auto& group : spec.entry_groups) {
    const auto start = sequence.size();
    sequence.insert(sequence.end(), group.begin(), group.end());
    shuffle(sequence.begin() + static_cast<std::ptrdiff_t>(start), sequence.end(), rng);
  }
  return sequence;
}

EdgeOrder sample_order(const OrderSpec& spec, const Graph& layout, Rng& rng) {
  OrderStream stream(spec, layout, rng);
  EdgeOrder order;
  order.sequence.reserve(static_cast<std::size_t>(layout.dyad_count()));
  Dyad d;
  while (stream.next(d)) order.sequence.push_back(d);
  order.entry_times = stream.entry_times();
  return order;
}

std::vector<int> first_appearance_entry_times(Vertex n, std::span<const Dyad> sequence) {
  std::vector<int> times(static_cast<std::size_t>(n), 0);
  int next = 1;
  for (const Dyad& d : sequence) {
    for (Vertex v : {d.tail, d.head}) {
      auto& t = times[static_cast<std::size_t>(v)];
      if (t == 0) t = next++;
    }
  }
  if (n == 1) times[0] = 1;
  return times;
}

namespace {

bool is_entry_permutation(const std::vector<int>& times, Vertex n) {
  if (times.size() != static_cast<std::size_t>(n)) return false;
  std::vector<char> seen(times.size() + 1, 0);
  for (int t : times) {
    if (t < 1 || t > n || seen[static_cast<std::size_t>(t)]) return false;
    seen[static_cast<std::size_t>(t)] = 1;
  }
  return true;
}

bool is_dyad_permutation(const Graph& layout, const std::vector<Dyad>& sequence) {
  if (static_cast<std::int64_t>(sequence.size()) != layout.dyad_count()) return false;
  std::vector<char> seen(sequence.size(), 0);
  for (const Dyad& d : sequence) {
    if (d.tail < 0 || d.head < 0 || d.tail >= layout.size() || d.head >= layout.size() || d.tail == d.head) {
      return false;
    }
    if (!layout.directed() && d.tail > d.head) return false;
    const auto idx = static_cast<std::size_t>(layout.dyad_index(d));
    if (seen[idx]) return false;
    seen[idx] = 1;
  }
  return true;
}

// The vertices seen in every prefix must be exactly the earliest entrants.
bool entry_consistent(const EdgeOrder& order) {
  std::vector<char> seen(order.entry_times.size(), 0);
  int count = 0;
  int max_time = 0;
  for (const Dyad& d : order.sequence) {
    for (Vertex v : {d.tail, d.head}) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        max_time = std::max(max_time, order.entry_times[static_cast<std::size_t>(v)]);
      }
    }
    if (max_time != count) return false;
  }
  return true;
}

}  // namespace

void check_order(const Graph& layout, const EdgeOrder& order) {
  if (!is_dyad_permutation(layout, order.sequence)) {
    throw InvalidArgument("edge order is not a permutation of the graph's " +
                          std::to_string(layout.dyad_count()) + " dyads");
  }
  if (!is_entry_permutation(order.entry_times, layout.size()) || !entry_consistent(order)) {
    throw InvalidArgument("edge order entry times are inconsistent with its dyad sequence");
  }
}

double log_prob_order(const OrderSpec& spec, const Graph& layout, const EdgeOrder& order) {
  constexpr double impossible = -std::numeric_limits<double>::infinity();
  const Vertex n = layout.size();
  spec.validate(n);
  if (!is_dyad_permutation(layout, order.sequence) || !is_entry_permutation(order.entry_times, n)) {
    return impossible;
  }
  if (spec.mode == OrderMode::uniform) {
    if (order.entry_times != first_appearance_entry_times(n, order.sequence)) return impossible;
    return -std::lgamma(static_cast<double>(layout.dyad_count()) + 1.0);
  }

  // Group g occupies a contiguous block of entry positions.
  double logp = 0.0;
  int block_start = 1;
  for (const auto& group : spec.entry_groups) {
    const int block_end = block_start + static_cast<int>(group.size());
    for (Vertex v : group) {
      const int t = order.entry_times[static_cast<std::size_t>(v)];
      if (t < block_start || t >= block_end) return impossible;
    }
    logp -= std::lgamma(static_cast<double>(group.size()) + 1.0);
    block_start = block_end;
  }

  // Round t (t >= 2) holds exactly the dyads joining the t-th entrant to earlier ones.
  const auto sequence = order.entry_sequence();
  std::size_t pos = 0;
  for (std::size_t t = 1; t < sequence.size(); ++t) {
    const Vertex v = sequence[t];
    const std::size_t width = layout.directed() ? 2 * t : t;
    for (std::size_t k = 0; k < width; ++k, ++pos) {
      const Dyad& d = order.sequence[pos];
      const Vertex other = d.tail == v ? d.head : (d.head == v ? d.tail : -1);
      if (other < 0 || order.entry_times[static_cast<std::size_t>(other)] > static_cast<int>(t)) {
        return impossible;
      }
    }
    logp -= std::lgamma(static_cast<double>(width) + 1.0);
  }
  // Swapping the first two entrants leaves the dyad sequence unchanged.
  if (sequence.size() >= 2 && spec.entry_groups.front().size() >= 2) logp += std::log(2.0);
  return logp;
}

}  // namespace lolog
