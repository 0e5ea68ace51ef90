#include "opaq/ais.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace opaq {

Ais::Ais(Observer obs, int intruder, std::vector<AisNode> nodes,
         std::vector<AisEdge> edges)
    : obs_(std::move(obs)), intruder_(intruder), nodes_(std::move(nodes)),
      edges_(std::move(edges)), out_(nodes_.size()) {
  for (std::uint32_t i = 0; i < edges_.size(); ++i)
    out_[edges_[i].from].push_back(i);
}

const std::vector<std::uint32_t>& Ais::out_edges(std::uint32_t node) const {
  return out_.at(node);
}

std::size_t Ais::system_count() const {
  return std::count_if(nodes_.begin(), nodes_.end(), [](const AisNode& n) {
    return n.kind == AisNode::System;
  });
}

std::size_t Ais::insertion_count() const {
  return nodes_.size() - system_count();
}

std::vector<Estimate> revealing_states(const Model& m, const Observer& o) {
  std::vector<Estimate> revealing;
  for (ObsIndex i = 0; i < o.size(); ++i)
    if (m.reveals(o.state(i))) revealing.push_back(o.state(i));
  return revealing;
}

Ais build_ais_unpruned(const Model& m, const Mask& mask, int intruder_label) {
  Observer obs = build_observer(m, mask);

  std::vector<AisNode> nodes;
  std::vector<AisEdge> edges;
  std::map<AisNode, std::uint32_t> index;

  if (m.reveals(obs.state(obs.initial())))
    return Ais(std::move(obs), intruder_label, {}, {});

  auto intern = [&](const AisNode& node) {
    auto [it, fresh] = index.try_emplace(node, static_cast<std::uint32_t>(nodes.size()));
    if (fresh) nodes.push_back(node);
    return it->second;
  };

  intern({AisNode::System, obs.initial(), obs.initial(), std::nullopt});

  // Node vector doubles as the worklist: appended nodes get expanded too.
  for (std::uint32_t current = 0; current < nodes.size(); ++current) {
    const AisNode node = nodes[current];
    if (node.kind == AisNode::System) {
      for (const auto& [e, next_sys] : obs.moves(node.system_est)) {
        std::uint32_t to =
            intern({AisNode::Insertion, node.intruder_est, next_sys, e});
        edges.push_back({current, to, e, AisEdge::SystemMove});
      }
    } else {
      for (const auto& [e, next_int] : obs.moves(node.intruder_est)) {
        if (m.reveals(obs.state(next_int)) || next_int == node.intruder_est)
          continue;
        std::uint32_t to =
            intern({AisNode::Insertion, next_int, node.system_est, node.pending});
        edges.push_back({current, to, e, AisEdge::Insert});
      }
      if (auto emitted = obs.step(node.intruder_est, *node.pending);
          emitted && !m.reveals(obs.state(*emitted))) {
        std::uint32_t to =
            intern({AisNode::System, *emitted, node.system_est, std::nullopt});
        edges.push_back({current, to, *node.pending, AisEdge::Emit});
      }
    }
  }
  return Ais(std::move(obs), intruder_label, std::move(nodes), std::move(edges));
}

Ais prune_ais(const Model& m, const Ais& a) {
  if (a.empty()) return Ais(a.observer(), a.intruder(), {}, {});
  const auto& nodes = a.nodes();
  const auto& edges = a.edges();
  const Observer& obs = a.observer();

  std::vector<bool> present(nodes.size(), true);

  bool changed = true;
  while (changed) {
    changed = false;

    // An insertion node survives only if a burst through surviving nodes
    // can still end in an emit (least fixpoint; a cycle of insertion
    // nodes with no emit is dead).
    std::vector<bool> live(nodes.size(), false);
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::uint32_t n = 0; n < nodes.size(); ++n) {
        if (!present[n] || live[n] || nodes[n].kind != AisNode::Insertion)
          continue;
        for (std::uint32_t ei : a.out_edges(n)) {
          const AisEdge& edge = edges[ei];
          if (!present[edge.to]) continue;
          if (edge.kind == AisEdge::Emit ||
              (edge.kind == AisEdge::Insert && live[edge.to])) {
            live[n] = true;
            grew = true;
            break;
          }
        }
      }
    }
    for (std::uint32_t n = 0; n < nodes.size(); ++n) {
      if (present[n] && nodes[n].kind == AisNode::Insertion && !live[n]) {
        present[n] = false;
        changed = true;
      }
    }

    // A system node must keep a response to every genuine event enabled
    // at its true estimate.
    for (std::uint32_t n = 0; n < nodes.size(); ++n) {
      if (!present[n] || nodes[n].kind != AisNode::System) continue;
      for (EventId e : obs.enabled(nodes[n].system_est)) {
        bool answered = false;
        for (std::uint32_t ei : a.out_edges(n)) {
          const AisEdge& edge = edges[ei];
          if (edge.kind == AisEdge::SystemMove && edge.label == e &&
              present[edge.to]) {
            answered = true;
            break;
          }
        }
        if (!answered) {
          present[n] = false;
          changed = true;
          break;
        }
      }
    }
  }

  if (!present[0]) return Ais(obs, a.intruder(), {}, {});

  // Restrict to the part reachable from the initial node.
  std::vector<bool> reachable(nodes.size(), false);
  std::deque<std::uint32_t> queue{0};
  reachable[0] = true;
  while (!queue.empty()) {
    std::uint32_t n = queue.front();
    queue.pop_front();
    for (std::uint32_t ei : a.out_edges(n)) {
      const AisEdge& edge = edges[ei];
      if (present[edge.to] && !reachable[edge.to]) {
        reachable[edge.to] = true;
        queue.push_back(edge.to);
      }
    }
  }

  std::vector<std::uint32_t> renumber(nodes.size(), 0);
  std::vector<AisNode> kept_nodes;
  for (std::uint32_t n = 0; n < nodes.size(); ++n) {
    if (reachable[n]) {
      renumber[n] = static_cast<std::uint32_t>(kept_nodes.size());
      kept_nodes.push_back(nodes[n]);
    }
  }
  std::vector<AisEdge> kept_edges;
  for (const AisEdge& edge : edges) {
    if (reachable[edge.from] && reachable[edge.to])
      kept_edges.push_back(
          {renumber[edge.from], renumber[edge.to], edge.label, edge.kind});
  }
  return Ais(obs, a.intruder(), std::move(kept_nodes), std::move(kept_edges));
}

Ais build_ais(const Model& m, const Mask& mask, int intruder_label) {
  return prune_ais(m, build_ais_unpruned(m, mask, intruder_label));
}

Ais build_ais(const Model& m, int intruder) {
  return build_ais(m, m.mask(intruder), intruder);
}

bool check_private_enforceability(const Ais& a) { return !a.empty(); }

namespace {

std::string node_label(const Model& m, const Observer& obs, const AisNode& n) {
  std::string label = "(" + m.format_state_set(obs.state(n.intruder_est)) +
                      "," + m.format_state_set(obs.state(n.system_est)) + ")";
  if (n.pending) label += "," + m.event_name(*n.pending);
  return label;
}

struct Burst {
  Word inserted;
  std::uint32_t next_system;
};

// Lexicographically smallest admissible burst of the preferred length.
// Level-wise search with per-node string dominance; every chosen string
// is realized by a shortest (hence simple, *-free) insertion path.
Burst choose_burst_min(const Ais& a, std::uint32_t start) {
  std::map<std::uint32_t, Word> level{{start, {}}};
  // The nearest emit lies within one simple path, so #nodes levels suffice.
  for (std::size_t depth = 0; depth <= a.nodes().size() && !level.empty();
       ++depth) {
    const Word* best = nullptr;
    std::uint32_t best_node = 0;
    for (const auto& [node, word] : level) {
      bool can_emit = false;
      for (std::uint32_t ei : a.out_edges(node))
        if (a.edges()[ei].kind == AisEdge::Emit) can_emit = true;
      if (can_emit && (!best || word < *best)) {
        best = &word;
        best_node = node;
      }
    }
    if (best) {
      for (std::uint32_t ei : a.out_edges(best_node)) {
        const AisEdge& edge = a.edges()[ei];
        if (edge.kind == AisEdge::Emit) return {*best, edge.to};
      }
    }
    std::map<std::uint32_t, Word> next;
    for (const auto& [node, word] : level) {
      for (std::uint32_t ei : a.out_edges(node)) {
        const AisEdge& edge = a.edges()[ei];
        if (edge.kind != AisEdge::Insert) continue;
        Word extended = word;
        extended.push_back(edge.label);
        auto it = next.find(edge.to);
        if (it == next.end() || extended < it->second)
          next[edge.to] = std::move(extended);
      }
    }
    level = std::move(next);
  }
  throw std::logic_error("pruned AIS lost burst liveness");
}

// Longest simple burst, smallest string among ties. Exhaustive walk over
// simple insertion paths.
void walk_max(const Ais& a, std::uint32_t node, Word& prefix,
              std::vector<bool>& on_path, std::optional<Burst>& best) {
  for (std::uint32_t ei : a.out_edges(node)) {
    const AisEdge& edge = a.edges()[ei];
    if (edge.kind == AisEdge::Emit) {
      bool better = !best || prefix.size() > best->inserted.size() ||
                    (prefix.size() == best->inserted.size() &&
                     prefix < best->inserted);
      if (better) best = Burst{prefix, edge.to};
    }
  }
  for (std::uint32_t ei : a.out_edges(node)) {
    const AisEdge& edge = a.edges()[ei];
    if (edge.kind != AisEdge::Insert || on_path[edge.to]) continue;
    on_path[edge.to] = true;
    prefix.push_back(edge.label);
    walk_max(a, edge.to, prefix, on_path, best);
    prefix.pop_back();
    on_path[edge.to] = false;
  }
}

Burst choose_burst(const Ais& a, std::uint32_t start, ChoicePolicy policy) {
  if (policy == ChoicePolicy::MinInsert) return choose_burst_min(a, start);
  std::optional<Burst> best;
  Word prefix;
  std::vector<bool> on_path(a.nodes().size(), false);
  on_path[start] = true;
  walk_max(a, start, prefix, on_path, best);
  if (!best) throw std::logic_error("pruned AIS lost burst liveness");
  return *best;
}

}  // namespace

InsertionStrategy extract_local_insertion(const Model& m, const Ais& a,
                                          ChoicePolicy policy) {
  if (a.empty())
    throw std::invalid_argument("cannot extract a strategy from an empty AIS");
  const Observer& obs = a.observer();

  // Deterministic choice per (system node, enabled event), then keep the
  // part reachable under those choices.
  std::map<std::pair<std::uint32_t, EventId>, std::pair<std::uint32_t, Word>>
      chosen;
  std::vector<bool> reached(a.nodes().size(), false);
  std::deque<std::uint32_t> queue{0};
  reached[0] = true;
  std::vector<std::uint32_t> order{0};
  while (!queue.empty()) {
    std::uint32_t q = queue.front();
    queue.pop_front();
    for (std::uint32_t ei : a.out_edges(q)) {
      const AisEdge& edge = a.edges()[ei];
      if (edge.kind != AisEdge::SystemMove) continue;
      Burst burst = choose_burst(a, edge.to, policy);
      chosen[{q, edge.label}] = {burst.next_system, burst.inserted};
      if (!reached[burst.next_system]) {
        reached[burst.next_system] = true;
        order.push_back(burst.next_system);
        queue.push_back(burst.next_system);
      }
    }
  }

  std::vector<std::uint32_t> renumber(a.nodes().size(), 0);
  InsertionStrategy f;
  f.intruder = a.intruder();
  f.event_names = m.event_names();
  f.policy = policy_name(policy);
  f.inputs.insert(obs.mask().observable.begin(), obs.mask().observable.end());
  for (std::uint32_t n : order) {
    renumber[n] = static_cast<std::uint32_t>(f.state_labels.size());
    f.state_labels.push_back(node_label(m, obs, a.nodes()[n]));
  }
  f.initial = 0;
  for (const auto& [key, value] : chosen) {
    const auto& [node, event] = key;
    if (!reached[node]) continue;
    ModifiedWord segment;
    for (EventId e : value.second) segment.push_back({e, true});
    segment.push_back({event, false});
    f.steps[{renumber[node], event}] = {renumber[value.first],
                                        std::move(segment)};
  }
  return f;
}

}  // namespace opaq
