#include "opaq/nfm.hpp"

#include <algorithm>
#include <deque>

namespace opaq {

Nfm::Nfm(Observer obs, int intruder, std::vector<State> states,
         std::map<std::pair<std::uint32_t, EventId>, std::vector<Choice>> trans)
    : obs_(std::move(obs)), intruder_(intruder), states_(std::move(states)),
      trans_(std::move(trans)) {}

const std::vector<Nfm::Choice>& Nfm::choices(std::uint32_t from,
                                             EventId e) const {
  static const std::vector<Choice> kNone;
  auto it = trans_.find({from, e});
  return it == trans_.end() ? kNone : it->second;
}

std::vector<EventId> Nfm::inputs_at(std::uint32_t from) const {
  std::vector<EventId> inputs;
  for (auto it = trans_.lower_bound({from, 0});
       it != trans_.end() && it->first.first == from; ++it)
    inputs.push_back(it->first.second);
  return inputs;
}

std::size_t Nfm::transition_count() const {
  std::size_t count = 0;
  for (const auto& [_, choices] : trans_) count += choices.size();
  return count;
}

namespace {

// All insertion strings realizable from `node` by simple paths, paired
// with the system node each burst emits into.
void collect_bursts(const Ais& a, std::uint32_t node, Word& prefix,
                    std::vector<bool>& on_path,
                    std::vector<std::pair<Word, std::uint32_t>>& bursts) {
  for (std::uint32_t ei : a.out_edges(node)) {
    const AisEdge& edge = a.edges()[ei];
    if (edge.kind == AisEdge::Emit) bursts.emplace_back(prefix, edge.to);
  }
  for (std::uint32_t ei : a.out_edges(node)) {
    const AisEdge& edge = a.edges()[ei];
    if (edge.kind != AisEdge::Insert || on_path[edge.to]) continue;
    on_path[edge.to] = true;
    prefix.push_back(edge.label);
    collect_bursts(a, edge.to, prefix, on_path, bursts);
    prefix.pop_back();
    on_path[edge.to] = false;
  }
}

}  // namespace

Nfm ais_to_nfm(const Ais& a) {
  if (a.empty())
    throw std::invalid_argument("cannot encode an empty AIS as an NFM");

  std::vector<Nfm::State> states;
  std::vector<std::uint32_t> system_index(a.nodes().size(), 0);
  for (std::uint32_t n = 0; n < a.nodes().size(); ++n) {
    const AisNode& node = a.nodes()[n];
    if (node.kind == AisNode::System) {
      system_index[n] = static_cast<std::uint32_t>(states.size());
      states.push_back({node.intruder_est, node.system_est});
    }
  }

  std::map<std::pair<std::uint32_t, EventId>, std::vector<Nfm::Choice>> trans;
  for (std::uint32_t n = 0; n < a.nodes().size(); ++n) {
    if (a.nodes()[n].kind != AisNode::System) continue;
    for (std::uint32_t ei : a.out_edges(n)) {
      const AisEdge& move = a.edges()[ei];
      if (move.kind != AisEdge::SystemMove) continue;
      std::vector<std::pair<Word, std::uint32_t>> bursts;
      Word prefix;
      std::vector<bool> on_path(a.nodes().size(), false);
      on_path[move.to] = true;
      collect_bursts(a, move.to, prefix, on_path, bursts);
      auto& choices = trans[{system_index[n], move.label}];
      for (auto& [inserted, emit_target] : bursts) {
        Word output = inserted;
        output.push_back(move.label);
        choices.push_back({system_index[emit_target], std::move(output)});
      }
      std::sort(choices.begin(), choices.end(),
                [](const Nfm::Choice& x, const Nfm::Choice& y) {
                  if (x.output.size() != y.output.size())
                    return x.output.size() < y.output.size();
                  if (x.output != y.output) return x.output < y.output;
                  return x.to < y.to;
                });
    }
  }
  return Nfm(a.observer(), a.intruder(), std::move(states), std::move(trans));
}

Nfm build_global_observer(const Model& m) {
  if (m.intruder_count() == 0)
    throw std::invalid_argument("model declares no intruders");
  Observer obs = build_observer(m, m.union_mask());
  std::vector<Nfm::State> states;
  std::map<std::pair<std::uint32_t, EventId>, std::vector<Nfm::Choice>> trans;
  for (ObsIndex i = 0; i < obs.size(); ++i) {
    states.push_back({i, i});
    for (const auto& [e, next] : obs.moves(i)) trans[{i, e}] = {{next, {}}};
  }
  return Nfm(std::move(obs), 0, std::move(states), std::move(trans));
}

ProductNfm::ProductNfm(std::vector<Nfm> machines, Nfm global,
                       std::vector<ProductState> states,
                       std::vector<ProductTransition> transitions)
    : machines_(std::move(machines)), global_(std::move(global)),
      states_(std::move(states)), transitions_(std::move(transitions)),
      out_(states_.size()), in_(states_.size()) {
  for (std::uint32_t t = 0; t < transitions_.size(); ++t) {
    out_[transitions_[t].from].push_back(t);
    in_[transitions_[t].to].push_back(t);
  }
}

const std::vector<std::uint32_t>& ProductNfm::out_transitions(
    std::uint32_t state) const {
  return out_.at(state);
}

const std::vector<std::uint32_t>& ProductNfm::in_transitions(
    std::uint32_t state) const {
  return in_.at(state);
}

const Estimate& ProductNfm::intruder_estimate(std::uint32_t state,
                                              std::size_t i) const {
  const Nfm& machine = machines_.at(i);
  return machine.observer().state(
      machine.state(states_.at(state).comps.at(i)).intruder_est);
}

const Estimate& ProductNfm::obs_estimate(std::uint32_t state) const {
  return global_.observer().state(global_.state(states_.at(state).obs).intruder_est);
}

std::string ProductNfm::label(const Model& m, std::uint32_t state) const {
  std::string out = "(";
  for (std::size_t i = 0; i < machines_.size(); ++i)
    out += m.format_state_set(intruder_estimate(state, i)) + ",";
  return out + m.format_state_set(obs_estimate(state)) + ")";
}

ProductNfm ProductNfm::subgraph(const std::vector<bool>& keep_state,
                                const std::vector<bool>& keep_transition) const {
  if (states_.empty() || !keep_state[0])
    return ProductNfm(machines_, global_, {}, {});
  std::vector<std::uint32_t> renumber(states_.size(), 0);
  std::vector<ProductState> new_states;
  for (std::uint32_t s = 0; s < states_.size(); ++s) {
    if (keep_state[s]) {
      renumber[s] = static_cast<std::uint32_t>(new_states.size());
      new_states.push_back(states_[s]);
    }
  }
  std::vector<ProductTransition> new_transitions;
  for (std::uint32_t t = 0; t < transitions_.size(); ++t) {
    const ProductTransition& tr = transitions_[t];
    if (keep_transition[t] && keep_state[tr.from] && keep_state[tr.to])
      new_transitions.push_back(
          {renumber[tr.from], tr.input, renumber[tr.to], tr.outputs});
  }
  return ProductNfm(machines_, global_, std::move(new_states),
                    std::move(new_transitions));
}

ProductNfm compose_product(const std::vector<Nfm>& machines,
                           const Nfm& global) {
  if (machines.empty())
    throw std::invalid_argument("product needs at least one intruder machine");
  for (const Nfm& machine : machines)
    if (machine.size() == 0)
      throw std::invalid_argument("product of an empty machine");

  const std::size_t n = machines.size();
  std::vector<ProductState> states;
  std::vector<ProductTransition> transitions;
  std::map<ProductState, std::uint32_t> index;

  ProductState init{std::vector<std::uint32_t>(n, 0), global.initial()};
  states.push_back(init);
  index[init] = 0;

  static const std::vector<Nfm::Choice> kIdle{{0, {}}};
  for (std::uint32_t current = 0; current < states.size(); ++current) {
    const ProductState at = states[current];
    for (EventId e : global.inputs_at(at.obs)) {
      std::uint32_t obs_next = global.choices(at.obs, e).front().to;

      // Cartesian product of the visible components' choices, walked
      // odometer-style with the last intruder fastest so the layout is
      // canonical. Invisible components idle with empty output.
      std::vector<const std::vector<Nfm::Choice>*> options(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (machines[i].observer().mask().observes(e)) {
          options[i] = &machines[i].choices(at.comps[i], e);
          if (options[i]->empty())
            throw std::logic_error(
                "intruder machine blocks an event enabled at the true estimate");
        } else {
          options[i] = &kIdle;
        }
      }

      std::vector<std::size_t> pick(n, 0);
      while (true) {
        ProductState next{std::vector<std::uint32_t>(n), obs_next};
        std::vector<Word> outputs(n);
        for (std::size_t i = 0; i < n; ++i) {
          const Nfm::Choice& choice = (*options[i])[pick[i]];
          bool idles = options[i] == &kIdle;
          next.comps[i] = idles ? at.comps[i] : choice.to;
          outputs[i] = choice.output;
        }
        auto [it, fresh] =
            index.try_emplace(next, static_cast<std::uint32_t>(states.size()));
        if (fresh) states.push_back(next);
        transitions.push_back({current, e, it->second, std::move(outputs)});

        std::size_t k = n;
        while (k > 0 && ++pick[k - 1] == options[k - 1]->size()) pick[--k] = 0;
        if (k == 0) break;
      }
    }
  }
  return ProductNfm(machines, global, std::move(states),
                    std::move(transitions));
}

}  // namespace opaq
