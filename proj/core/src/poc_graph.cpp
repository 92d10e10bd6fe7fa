#include <snapmem/errors.hpp>
#include <snapmem/poc_graph.hpp>

#include <algorithm>

namespace snapmem {

PocGraph::PocGraph(const Sensorium& sensorium) : PocGraph(sensorium.size()) {}

PocGraph::PocGraph(std::size_t sensors) : sensors_(sensors), children_(2 * sensors + 2, LiteralSet(2 * sensors + 2)) {}

void PocGraph::add_edge(Literal a, Literal b) {
  if (a >= 2 * sensors_ || b >= 2 * sensors_) throw InputError("poc graph edges join proper literals only");
  children_[a].set(b);
  children_[star(b)].set(star(a));
}

std::size_t PocGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& c : children_) e += c.count();
  return e;
}

void PocGraph::clear() {
  for (auto& c : children_) c.clear();
}

std::optional<std::vector<Literal>> PocGraph::find_cycle() const {
  const std::size_t n = children_.size();
  std::vector<std::uint8_t> color(n, 0); // 0 new, 1 on stack, 2 done
  struct Frame {
    Literal v;
    std::vector<std::size_t> next;
    std::size_t pos;
  };
  for (Literal root = 0; root < n; ++root) {
    if (color[root]) continue;
    std::vector<Frame> stack;
    stack.push_back({root, children_[root].to_vector(), 0});
    color[root] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.pos == f.next.size()) {
        color[f.v] = 2;
        stack.pop_back();
        continue;
      }
      const auto w = static_cast<Literal>(f.next[f.pos++]);
      if (color[w] == 1) {
        std::vector<Literal> cycle{w};
        for (auto it = stack.rbegin(); it != stack.rend() && it->v != w; ++it) cycle.push_back(it->v);
        cycle.push_back(w);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (color[w] == 0) {
        color[w] = 1;
        stack.push_back({w, children_[w].to_vector(), 0});
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> PocGraph::poc_violation(bool allow_equivalences) const {
  const auto m = static_cast<Literal>(2 * sensors_);
  for (Literal a = 0; a < m; ++a) {
    std::optional<std::string> bad;
    children_[a].for_each([&](std::size_t bi) {
      if (bad) return;
      const auto b = static_cast<Literal>(bi);
      const std::string e = std::to_string(a) + "->" + std::to_string(b);
      if (sensor_of(a) == sensor_of(b)) bad = "edge within one sensor pair: " + e;
      else if (!has_edge(star(b), star(a))) bad = "missing contrapositive of " + e;
      else if (has_edge(star(a), b) || has_edge(a, star(b))) bad = "conflicting edge in the square of " + e;
      else if (has_edge(b, a) && !allow_equivalences) bad = "opposite edges " + e;
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

WeakPocSet derived_poc_set(const PocGraph& g, const Sensorium& sensorium, bool allow_cycles) {
  if (g.sensor_count() != sensorium.size()) throw InputError("derived_poc_set: graph and sensorium sizes differ");
  if (!allow_cycles) {
    if (auto cycle = g.find_cycle()) {
      std::string text;
      for (Literal a : *cycle) text += (text.empty() ? "" : " -> ") + sensorium.name(a);
      throw ContractError("derived_poc_set: directed cycle " + text);
    }
  }
  return WeakPocSet::from_successors(sensorium, g.successors());
}

} // namespace snapmem
