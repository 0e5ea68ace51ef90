// Shared fixtures, random-model generation, and the independent oracles
// the property suites compare against. The oracles deliberately work on
// raw transition lists and explicit state sets; they never call the
// observer/AIS/product machinery they are checking.

#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "opaq/ais.hpp"
#include "opaq/model.hpp"

namespace support {

using opaq::EventId;
using opaq::Mask;
using opaq::Model;
using opaq::StateId;
using opaq::Word;

inline std::string model_dir() { return OPAQ_MODEL_DIR; }

inline Model load_figure3() {
  std::ifstream in(model_dir() + "/figure3.des");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return opaq::parse_model(buffer.str());
}

inline opaq::Word word_of(const Model& m, const std::string& tokens) {
  std::istringstream in(tokens);
  opaq::Word w;
  std::string t;
  while (in >> t) w.push_back(*m.find_event(t));
  return w;
}

inline opaq::StateSet states_of(const Model& m, const std::string& tokens) {
  std::istringstream in(tokens);
  opaq::StateSet s;
  std::string t;
  while (in >> t) s.push_back(*m.find_state(t));
  std::sort(s.begin(), s.end());
  return s;
}

// ---------------------------------------------------------------------
// Exact estimation from the raw transition relation.

using Ests = std::set<StateId>;

inline Ests closure(const Model& m, const std::vector<EventId>& observable,
                    Ests s) {
  auto visible = [&observable](EventId e) {
    return std::binary_search(observable.begin(), observable.end(), e);
  };
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& t : m.transitions())
      if (!visible(t.event) && s.count(t.from) && !s.count(t.to)) {
        s.insert(t.to);
        grew = true;
      }
  }
  return s;
}

inline Ests image(const Model& m, const Ests& s, EventId e) {
  Ests out;
  for (const auto& t : m.transitions())
    if (t.event == e && s.count(t.from)) out.insert(t.to);
  return out;
}

/// Exact estimate of an observed word: set of states reachable by some
/// genuine word with this projection. Empty = not realizable.
inline Ests exact_estimate(const Model& m, const Mask& mask,
                           const Word& observed) {
  Ests current(m.initial().begin(), m.initial().end());
  current = closure(m, mask.observable, current);
  for (EventId e : observed) {
    current = image(m, current, e);
    if (current.empty()) return current;
    current = closure(m, mask.observable, current);
  }
  return current;
}

inline bool reveals(const Model& m, const Ests& est) {
  if (est.empty()) return false;
  const auto& secret = m.secret();
  for (StateId s : est)
    if (!std::binary_search(secret.begin(), secret.end(), s)) return false;
  return true;
}

inline opaq::StateSet to_state_set(const Ests& est) {
  return opaq::StateSet(est.begin(), est.end());
}

// ---------------------------------------------------------------------
// Bounded string-enumeration opacity oracles.

inline bool oracle_cso_violated(const Model& m, const Mask& mask,
                                const std::vector<Word>& language) {
  for (const Word& w : language) {
    Word observed = opaq::project(m, mask, w);
    if (reveals(m, exact_estimate(m, mask, observed))) return true;
  }
  return false;
}

inline bool oracle_jcso_violated(const Model& m,
                                 const std::vector<Word>& language) {
  for (std::size_t i = 0; i < m.intruder_count(); ++i)
    if (oracle_cso_violated(m, m.masks()[i], language)) return true;
  for (const Word& w : language) {
    std::optional<Ests> joint;
    for (std::size_t i = 0; i < m.intruder_count(); ++i) {
      const Mask& mask = m.masks()[i];
      Ests est = exact_estimate(m, mask, opaq::project(m, mask, w));
      if (!joint) {
        joint = est;
      } else {
        Ests merged;
        for (StateId s : *joint)
          if (est.count(s)) merged.insert(s);
        joint = merged;
      }
    }
    if (joint && reveals(m, *joint)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------
// Safety-game oracle for private enforceability (one intruder).
//
// Positions are pairs (intruder estimate, true estimate); the insertion
// player responds to each enabled event with a *-free burst, enumerated
// explicitly as simple paths over estimate space.

struct LocalMove {
  Ests intruder_after;  // estimate after burst + genuine event
  Ests system_after;
};

inline void simple_bursts(const Model& m, const Mask& mask, const Ests& from,
                          std::set<Ests>& on_path, EventId genuine,
                          const Ests& system_after,
                          std::vector<LocalMove>& moves) {
  Ests emitted = image(m, from, genuine);
  if (!emitted.empty()) {
    emitted = closure(m, mask.observable, emitted);
    if (!reveals(m, emitted)) moves.push_back({emitted, system_after});
  }
  for (EventId e : mask.observable) {
    Ests next = image(m, from, e);
    if (next.empty()) continue;
    next = closure(m, mask.observable, next);
    if (reveals(m, next) || on_path.count(next)) continue;
    on_path.insert(next);
    simple_bursts(m, mask, next, on_path, genuine, system_after, moves);
    on_path.erase(next);
  }
}

using LocalPosition = std::pair<Ests, Ests>;  // (intruder est, true est)

inline std::vector<LocalMove> local_moves(const Model& m, const Mask& mask,
                                          const LocalPosition& at, EventId e) {
  Ests system_after = image(m, at.second, e);
  if (system_after.empty()) return {};
  system_after = closure(m, mask.observable, system_after);
  std::vector<LocalMove> moves;
  std::set<Ests> on_path{at.first};
  simple_bursts(m, mask, at.first, on_path, e, system_after, moves);
  return moves;
}

inline std::vector<EventId> oracle_enabled(const Model& m, const Mask& mask,
                                           const Ests& system_est) {
  std::vector<EventId> events;
  for (EventId e : mask.observable)
    if (!image(m, system_est, e).empty()) events.push_back(e);
  return events;
}

/// Winning set of the local insertion game, keyed by position.
inline std::set<LocalPosition> oracle_local_win_set(const Model& m,
                                                    const Mask& mask) {
  Ests init = closure(m, mask.observable,
                      Ests(m.initial().begin(), m.initial().end()));
  if (reveals(m, init)) return {};

  // Reachable positions under unrestricted moves.
  std::set<LocalPosition> positions;
  std::vector<LocalPosition> queue{{init, init}};
  positions.insert(queue[0]);
  while (!queue.empty()) {
    LocalPosition at = queue.back();
    queue.pop_back();
    for (EventId e : oracle_enabled(m, mask, at.second))
      for (const LocalMove& move : local_moves(m, mask, at, e)) {
        LocalPosition next{move.intruder_after, move.system_after};
        if (positions.insert(next).second) queue.push_back(next);
      }
  }

  // Greatest fixpoint: drop positions that cannot answer some event.
  std::set<LocalPosition> winning = positions;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = winning.begin(); it != winning.end();) {
      bool lost = false;
      for (EventId e : oracle_enabled(m, mask, it->second)) {
        bool answered = false;
        for (const LocalMove& move : local_moves(m, mask, *it, e))
          if (winning.count({move.intruder_after, move.system_after})) {
            answered = true;
            break;
          }
        if (!answered) {
          lost = true;
          break;
        }
      }
      if (lost) {
        it = winning.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return winning;
}

inline bool oracle_privately_enforceable(const Model& m, const Mask& mask) {
  Ests init = closure(m, mask.observable,
                      Ests(m.initial().begin(), m.initial().end()));
  if (reveals(m, init)) return false;
  auto winning = oracle_local_win_set(m, mask);
  return winning.count({init, init}) > 0;
}

// ---------------------------------------------------------------------
// Safety-game oracle for joint enforceability.
// Joint positions combine every intruder's local position with the
// exact union-mask estimate; each intruder is restricted to locally
// winning bursts and every aligned intermediate must keep the
// coordinated estimate safe.

struct JointPosition {
  std::vector<LocalPosition> locals;
  Ests obs;

  auto operator<=>(const JointPosition&) const = default;
};

struct JointMove {
  JointPosition next;
};

inline bool aligned_safe(const Model& m, const std::vector<Ests>& starts,
                         const std::vector<Word>& outputs, const Ests& obs_after,
                         const std::vector<const Mask*>& masks) {
  std::size_t rounds = 1;
  for (const Word& o : outputs) rounds = std::max(rounds, o.size());
  std::vector<Ests> at = starts;
  for (std::size_t k = 0; k < rounds; ++k) {
    Ests joint = obs_after;
    for (std::size_t i = 0; i < at.size(); ++i) {
      if (k < outputs[i].size()) {
        at[i] = closure(m, masks[i]->observable,
                        image(m, at[i], outputs[i][k]));
      }
      Ests merged;
      for (StateId s : joint)
        if (at[i].count(s)) merged.insert(s);
      joint = merged;
    }
    if (reveals(m, joint)) return false;
  }
  return true;
}

// Enumerates one intruder's locally winning bursts as explicit output
// words (inserted prefix + genuine event).
inline void winning_bursts(const Model& m, const Mask& mask,
                           const std::set<LocalPosition>& winning,
                           const Ests& from, std::set<Ests>& on_path,
                           Word& prefix, EventId genuine,
                           const Ests& system_after,
                           std::vector<std::pair<Word, LocalPosition>>& out) {
  Ests emitted = image(m, from, genuine);
  if (!emitted.empty()) {
    emitted = closure(m, mask.observable, emitted);
    if (!reveals(m, emitted) && winning.count({emitted, system_after})) {
      Word output = prefix;
      output.push_back(genuine);
      out.emplace_back(std::move(output), LocalPosition{emitted, system_after});
    }
  }
  for (EventId e : mask.observable) {
    Ests next = image(m, from, e);
    if (next.empty()) continue;
    next = closure(m, mask.observable, next);
    if (reveals(m, next) || on_path.count(next)) continue;
    on_path.insert(next);
    prefix.push_back(e);
    winning_bursts(m, mask, winning, next, on_path, prefix, genuine,
                   system_after, out);
    prefix.pop_back();
    on_path.erase(next);
  }
}

inline bool oracle_jointly_enforceable(const Model& m) {
  const std::size_t n = m.intruder_count();
  std::vector<std::set<LocalPosition>> winning;
  std::vector<const Mask*> masks;
  for (std::size_t i = 0; i < n; ++i) {
    masks.push_back(&m.masks()[i]);
    winning.push_back(oracle_local_win_set(m, *masks[i]));
    Ests init = closure(m, masks[i]->observable,
                        Ests(m.initial().begin(), m.initial().end()));
    if (reveals(m, init) || !winning[i].count({init, init})) return false;
  }
  Mask union_mask = m.union_mask();

  JointPosition init;
  for (std::size_t i = 0; i < n; ++i) {
    Ests e = closure(m, masks[i]->observable,
                     Ests(m.initial().begin(), m.initial().end()));
    init.locals.push_back({e, e});
  }
  init.obs = closure(m, union_mask.observable,
                     Ests(m.initial().begin(), m.initial().end()));
  {
    Ests joint = init.obs;
    for (const auto& lp : init.locals) {
      Ests merged;
      for (StateId s : joint)
        if (lp.first.count(s)) merged.insert(s);
      joint = merged;
    }
    if (reveals(m, joint)) return false;
  }

  // Valid combined moves out of a joint position on one event.
  auto joint_moves = [&](const JointPosition& at, EventId e) {
    std::vector<JointPosition> results;
    Ests obs_after = closure(m, union_mask.observable, image(m, at.obs, e));

    std::vector<std::vector<std::pair<Word, LocalPosition>>> options(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!masks[i]->observes(e)) {
        options[i] = {{Word{}, at.locals[i]}};
        continue;
      }
      Ests system_after = closure(m, masks[i]->observable,
                                  image(m, at.locals[i].second, e));
      std::set<Ests> on_path{at.locals[i].first};
      Word prefix;
      winning_bursts(m, *masks[i], winning[i], at.locals[i].first, on_path,
                     prefix, e, system_after, options[i]);
      if (options[i].empty()) return results;  // this intruder blocks
    }

    std::vector<std::size_t> pick(n, 0);
    while (true) {
      std::vector<Word> outputs;
      std::vector<Ests> starts;
      JointPosition next;
      for (std::size_t i = 0; i < n; ++i) {
        outputs.push_back(options[i][pick[i]].first);
        starts.push_back(at.locals[i].first);
        next.locals.push_back(options[i][pick[i]].second);
      }
      next.obs = obs_after;
      if (aligned_safe(m, starts, outputs, obs_after, masks))
        results.push_back(std::move(next));
      std::size_t k = 0;
      while (k < n && ++pick[k] == options[k].size()) pick[k++] = 0;
      if (k == n) break;
    }
    return results;
  };

  std::set<JointPosition> positions{init};
  std::vector<JointPosition> queue{init};
  while (!queue.empty()) {
    JointPosition at = queue.back();
    queue.pop_back();
    for (EventId e : union_mask.observable) {
      if (image(m, at.obs, e).empty()) continue;
      for (const JointPosition& next : joint_moves(at, e))
        if (positions.insert(next).second) queue.push_back(next);
    }
  }

  std::set<JointPosition> alive = positions;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = alive.begin(); it != alive.end();) {
      bool lost = false;
      for (EventId e : union_mask.observable) {
        if (image(m, it->obs, e).empty()) continue;
        bool answered = false;
        for (const JointPosition& next : joint_moves(*it, e))
          if (alive.count(next)) {
            answered = true;
            break;
          }
        if (!answered) {
          lost = true;
          break;
        }
      }
      if (lost) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return alive.count(init) > 0;
}

// ---------------------------------------------------------------------
// Expected insertion-game structure of the bundled example, shared by
// the unit and acceptance suites.

// (kind: 0 system / 1 insertion, intruder estimate, true estimate,
//  pending event or -1)
using NodeSig = std::tuple<int, opaq::StateSet, opaq::StateSet, int>;
using EdgeSig = std::tuple<NodeSig, int, EventId, NodeSig>;

inline NodeSig ais_node_sig(const opaq::Ais& a, std::uint32_t i) {
  const opaq::AisNode& n = a.nodes()[i];
  return {n.kind == opaq::AisNode::System ? 0 : 1,
          a.observer().state(n.intruder_est), a.observer().state(n.system_est),
          n.pending ? static_cast<int>(*n.pending) : -1};
}

inline std::set<NodeSig> ais_node_set(const opaq::Ais& a) {
  std::set<NodeSig> nodes;
  for (std::uint32_t i = 0; i < a.nodes().size(); ++i)
    nodes.insert(ais_node_sig(a, i));
  return nodes;
}

inline std::set<EdgeSig> ais_edge_set(const opaq::Ais& a) {
  std::set<EdgeSig> edges;
  for (const opaq::AisEdge& e : a.edges())
    edges.insert({ais_node_sig(a, e.from), static_cast<int>(e.kind), e.label,
                  ais_node_sig(a, e.to)});
  return edges;
}

struct GameExpectation {
  std::set<NodeSig> nodes;
  std::set<EdgeSig> edges;
};

inline const std::vector<const char*> kFigure3Est1 = {"0 1", "2",   "3 4",
                                                      "5 6", "7",   "8 9",
                                                      "10"};
inline const std::vector<const char*> kFigure3Est2 = {"0 2", "1",    "3 5",
                                                      "4 6", "7",    "8 10",
                                                      "9"};

// Intruder 1 and intruder 2 share one game shape over estimates
// m0..m6 / c0..c6, with the roles of a and b swapped.
inline GameExpectation figure3_expected_game(
    const Model& m, const std::vector<const char*>& est,
    const char* genuine_token) {
  auto E = [&](int i) { return states_of(m, est[static_cast<std::size_t>(i)]); };
  EventId g = *m.find_event(genuine_token);
  EventId c = *m.find_event("c");
  EventId d = *m.find_event("d");

  auto sys = [&](int i, int j) { return NodeSig{0, E(i), E(j), -1}; };
  auto ins = [&](int i, int j, EventId p) {
    return NodeSig{1, E(i), E(j), static_cast<int>(p)};
  };

  GameExpectation x;
  x.nodes = {sys(0, 0), sys(3, 1), sys(6, 1), sys(2, 2), sys(5, 2),
             sys(4, 4), sys(3, 3), sys(6, 3), sys(5, 5), sys(6, 6),
             ins(0, 1, g), ins(0, 2, c), ins(0, 4, d), ins(2, 1, g),
             ins(4, 1, g), ins(5, 1, g), ins(4, 2, c), ins(2, 3, g),
             ins(5, 3, g), ins(4, 5, c), ins(5, 6, g)};

  const int kMove = opaq::AisEdge::SystemMove;
  const int kIns = opaq::AisEdge::Insert;
  const int kEmit = opaq::AisEdge::Emit;
  x.edges = {
      {sys(0, 0), kMove, g, ins(0, 1, g)},
      {sys(0, 0), kMove, c, ins(0, 2, c)},
      {sys(0, 0), kMove, d, ins(0, 4, d)},
      {ins(0, 1, g), kIns, c, ins(2, 1, g)},
      {ins(0, 1, g), kIns, d, ins(4, 1, g)},
      {ins(2, 1, g), kEmit, g, sys(3, 1)},
      {ins(4, 1, g), kIns, c, ins(5, 1, g)},
      {ins(5, 1, g), kEmit, g, sys(6, 1)},
      {ins(0, 2, c), kEmit, c, sys(2, 2)},
      {ins(0, 2, c), kIns, d, ins(4, 2, c)},
      {ins(4, 2, c), kEmit, c, sys(5, 2)},
      {sys(2, 2), kMove, g, ins(2, 3, g)},
      {ins(2, 3, g), kEmit, g, sys(3, 3)},
      {sys(5, 2), kMove, g, ins(5, 3, g)},
      {ins(5, 3, g), kEmit, g, sys(6, 3)},
      {ins(0, 4, d), kEmit, d, sys(4, 4)},
      {sys(4, 4), kMove, c, ins(4, 5, c)},
      {ins(4, 5, c), kEmit, c, sys(5, 5)},
      {sys(5, 5), kMove, g, ins(5, 6, g)},
      {ins(5, 6, g), kEmit, g, sys(6, 6)},
  };
  return x;
}

// ---------------------------------------------------------------------
// Random models.

struct RandomModelOptions {
  int max_states = 6;
  int max_events = 3;
  int max_transitions = 10;
  int intruders = 2;
};

inline Model random_model(std::mt19937& rng,
                          const RandomModelOptions& options = {}) {
  std::uniform_int_distribution<int> state_count(2, options.max_states);
  std::uniform_int_distribution<int> event_count(1, options.max_events);
  const int ns = state_count(rng);
  const int ne = event_count(rng);

  opaq::ModelParts parts;
  for (int s = 0; s < ns; ++s) parts.states.push_back(std::to_string(s));
  const std::string alphabet = "abcdefgh";
  for (int e = 0; e < ne; ++e)
    parts.events.push_back(std::string(1, alphabet[static_cast<std::size_t>(e)]));

  std::uniform_int_distribution<int> transition_count(1, options.max_transitions);
  std::uniform_int_distribution<int> state_pick(0, ns - 1);
  std::uniform_int_distribution<int> event_pick(0, ne - 1);
  const int nt = transition_count(rng);
  for (int t = 0; t < nt; ++t)
    parts.transitions.push_back({parts.states[state_pick(rng)],
                                 parts.events[event_pick(rng)],
                                 parts.states[state_pick(rng)]});

  std::bernoulli_distribution extra_initial(0.15);
  std::bernoulli_distribution secret_pick(0.3);
  std::bernoulli_distribution observable_pick(0.6);
  parts.initial.push_back(parts.states[0]);
  for (int s = 1; s < ns; ++s)
    if (extra_initial(rng)) parts.initial.push_back(parts.states[s]);
  for (int s = 0; s < ns; ++s)
    if (secret_pick(rng)) parts.secret.push_back(parts.states[s]);
  for (int i = 0; i < options.intruders; ++i) {
    std::vector<std::string> mask;
    for (int e = 0; e < ne; ++e)
      if (observable_pick(rng)) mask.push_back(parts.events[e]);
    parts.masks.push_back(mask);
  }
  return Model::from_parts(parts);
}

}  // namespace support
