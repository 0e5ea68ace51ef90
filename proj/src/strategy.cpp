#include "opaq/strategy.hpp"

#include <algorithm>
#include <deque>

#include "opaq/opacity.hpp"
#include "opaq/prune.hpp"

#include "json.hpp"

namespace opaq {

std::string policy_name(ChoicePolicy policy) {
  return policy == ChoicePolicy::MinInsert ? "min-insert" : "max-insert";
}

std::optional<ChoicePolicy> policy_from_name(const std::string& name) {
  if (name == "min-insert") return ChoicePolicy::MinInsert;
  if (name == "max-insert") return ChoicePolicy::MaxInsert;
  return std::nullopt;
}

const InsertionStrategy::Step& InsertionStrategy::step(std::size_t state,
                                                       EventId e) const {
  auto it = steps.find({state, e});
  if (it == steps.end())
    throw std::invalid_argument("unmodeled observation '" +
                                event_names.at(e) + "'");
  return it->second;
}

InsertionStrategy identity_strategy(const Model& m, int intruder) {
  const Mask& mask = m.mask(intruder);
  InsertionStrategy f;
  f.intruder = intruder;
  f.event_names = m.event_names();
  f.state_labels = {"id"};
  f.initial = 0;
  f.policy = "identity";
  f.inputs.insert(mask.observable.begin(), mask.observable.end());
  for (EventId e : mask.observable) f.steps[{0, e}] = {0, {{e, false}}};
  return f;
}

ModifiedWord apply_insertion(const InsertionStrategy& f, const Word& w) {
  ModifiedWord out;
  std::size_t state = f.initial;
  for (EventId e : w) {
    const auto& step = f.step(state, e);
    out.insert(out.end(), step.output.begin(), step.output.end());
    state = step.next;
  }
  return out;
}

bool Trace::any_local_reveal() const {
  if (initial_reveal) return true;
  for (const TraceStep& s : steps)
    for (bool flag : s.local_reveal)
      if (flag) return true;
  return false;
}

bool Trace::any_joint_reveal() const {
  if (initial_reveal) return true;
  for (const TraceStep& s : steps)
    if (s.joint_reveal) return true;
  return false;
}

Trace simulate_run(const Model& m,
                   const std::vector<InsertionStrategy>& strategies,
                   const Word& s) {
  const std::size_t n = m.intruder_count();
  if (n == 0) throw std::invalid_argument("model declares no intruders");
  if (strategies.size() != n)
    throw std::invalid_argument("need one strategy per intruder");
  if (!m.generates(s))
    throw std::invalid_argument("word is not generable by the model");
  for (const InsertionStrategy& f : strategies)
    if (f.event_names != m.event_names())
      throw std::invalid_argument("strategy alphabet does not match the model");

  std::vector<Observer> observers;
  for (std::size_t i = 0; i < n; ++i)
    observers.push_back(build_observer(m, m.masks()[i]));
  Mask union_mask = m.union_mask();
  Observer global = build_observer(m, union_mask);

  std::vector<std::size_t> memory(n);
  std::vector<ObsIndex> est(n, 0);
  ObsIndex obs_at = global.initial();
  for (std::size_t i = 0; i < n; ++i) memory[i] = strategies[i].initial;

  Trace trace;
  for (std::size_t i = 0; i < n; ++i)
    trace.initial_intruder_estimates.push_back(observers[i].state(0));
  trace.initial_obs_estimate = global.state(obs_at);
  trace.initial_joint_estimate = trace.initial_obs_estimate;
  for (std::size_t i = 0; i < n; ++i)
    trace.initial_joint_estimate =
        intersect(trace.initial_joint_estimate, observers[i].state(est[i]));
  trace.initial_reveal = m.reveals(trace.initial_joint_estimate);
  for (std::size_t i = 0; i < n; ++i)
    trace.initial_reveal =
        trace.initial_reveal || m.reveals(observers[i].state(est[i]));

  for (EventId e : s) {
    TraceStep step;
    step.genuine = e;
    step.outputs.resize(n);
    step.local_reveal.assign(n, false);

    for (std::size_t i = 0; i < n; ++i) {
      bool sees = m.masks()[i].observes(e);
      bool drives = strategies[i].inputs.count(e) > 0;
      if (sees && !drives)
        throw std::invalid_argument("strategy does not cover event '" +
                                    m.event_name(e) + "'");
      if (drives) {
        const auto& rule = strategies[i].step(memory[i], e);
        step.outputs[i] = rule.output;
        memory[i] = rule.next;
      }
    }

    if (union_mask.observes(e)) {
      auto next = global.step(obs_at, e);
      if (!next) throw std::logic_error("global observer rejected a plant event");
      obs_at = *next;
    }
    const Estimate& obs_est = global.state(obs_at);

    // Synchronized event-by-event evolution of the intruder views:
    // left-aligned outputs, trailing empty steps, true estimate already
    // switched to its post-event value.
    std::size_t rounds = 1;
    for (const ModifiedWord& o : step.outputs)
      rounds = std::max(rounds, o.size());
    for (std::size_t k = 0; k < rounds; ++k) {
      StateSet joint = obs_est;
      for (std::size_t i = 0; i < n; ++i) {
        if (k < step.outputs[i].size()) {
          auto next = observers[i].step(est[i], step.outputs[i][k].event);
          if (!next)
            throw std::logic_error("insertion output leaves the observer");
          est[i] = *next;
        }
        if (m.reveals(observers[i].state(est[i]))) step.local_reveal[i] = true;
        joint = intersect(joint, observers[i].state(est[i]));
      }
      if (m.reveals(joint)) step.joint_reveal = true;
      if (k + 1 == rounds) step.joint_estimate = joint;
    }

    for (std::size_t i = 0; i < n; ++i)
      step.intruder_estimates.push_back(observers[i].state(est[i]));
    step.obs_estimate = obs_est;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::vector<InsertionStrategy> extract_joint_strategy(const Model& m,
                                                      const PrunedProduct& pruned,
                                                      ChoicePolicy policy) {
  const ProductNfm& p = pruned.product;
  if (p.empty())
    throw std::invalid_argument("cannot extract strategies from an empty product");
  const std::size_t n = p.intruders();

  auto insert_cost = [](const std::vector<Word>& outputs) {
    std::size_t cost = 0;
    for (const Word& o : outputs)
      if (!o.empty()) cost += o.size() - 1;
    return cost;
  };

  // One transition per (state, event); reachable closure of the choices.
  std::map<std::pair<std::uint32_t, EventId>, std::uint32_t> chosen;
  std::vector<bool> reached(p.size(), false);
  std::vector<std::uint32_t> order{p.initial()};
  reached[p.initial()] = true;
  std::deque<std::uint32_t> queue{p.initial()};
  while (!queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();
    std::map<EventId, std::uint32_t> best;
    for (std::uint32_t t : p.out_transitions(s)) {
      const ProductTransition& tr = p.transitions()[t];
      auto it = best.find(tr.input);
      if (it == best.end()) {
        best[tr.input] = t;
        continue;
      }
      const ProductTransition& cur = p.transitions()[it->second];
      std::size_t tc = insert_cost(tr.outputs);
      std::size_t cc = insert_cost(cur.outputs);
      bool better;
      if (policy == ChoicePolicy::MinInsert)
        better = tc < cc || (tc == cc && tr.outputs < cur.outputs);
      else
        better = tc > cc || (tc == cc && tr.outputs < cur.outputs);
      if (better) it->second = t;
    }
    for (const auto& [e, t] : best) {
      chosen[{s, e}] = t;
      std::uint32_t to = p.transitions()[t].to;
      if (!reached[to]) {
        reached[to] = true;
        order.push_back(to);
        queue.push_back(to);
      }
    }
  }

  std::vector<std::uint32_t> renumber(p.size(), 0);
  std::vector<std::string> labels;
  for (std::uint32_t s : order) {
    renumber[s] = static_cast<std::uint32_t>(labels.size());
    labels.push_back(p.label(m, s));
  }

  Mask union_mask = m.union_mask();
  std::vector<InsertionStrategy> strategies(n);
  for (std::size_t i = 0; i < n; ++i) {
    InsertionStrategy& f = strategies[i];
    f.intruder = static_cast<int>(i + 1);
    f.event_names = m.event_names();
    f.state_labels = labels;
    f.initial = 0;
    f.policy = policy_name(policy);
    f.inputs.insert(union_mask.observable.begin(), union_mask.observable.end());
  }
  for (const auto& [key, t] : chosen) {
    if (!reached[key.first]) continue;
    const ProductTransition& tr = p.transitions()[t];
    for (std::size_t i = 0; i < n; ++i) {
      ModifiedWord segment;
      const Word& out = tr.outputs[i];
      for (std::size_t k = 0; k + 1 < out.size(); ++k)
        segment.push_back({out[k], true});
      if (!out.empty()) segment.push_back({out.back(), false});
      strategies[i].steps[{renumber[key.first], key.second}] = {
          renumber[tr.to], std::move(segment)};
    }
  }
  return strategies;
}

namespace {

using nlohmann::json;

json modified_word_to_json(const InsertionStrategy& f, const ModifiedWord& w) {
  json out = json::array();
  for (const ModifiedSymbol& s : w)
    out.push_back({{"event", f.event_names.at(s.event)},
                   {"inserted", s.inserted}});
  return out;
}

}  // namespace

std::string strategies_to_json(const std::vector<InsertionStrategy>& fs) {
  json root;
  root["strategies"] = json::array();
  for (const InsertionStrategy& f : fs) {
    json j;
    j["intruder"] = f.intruder;
    j["policy"] = f.policy;
    j["events"] = f.event_names;
    json inputs = json::array();
    for (EventId e : f.inputs) inputs.push_back(f.event_names.at(e));
    j["inputs"] = inputs;
    j["initial"] = f.initial;
    j["states"] = f.state_labels;
    json steps = json::array();
    for (const auto& [key, step] : f.steps) {
      steps.push_back({{"state", key.first},
                       {"event", f.event_names.at(key.second)},
                       {"next", step.next},
                       {"output", modified_word_to_json(f, step.output)}});
    }
    j["steps"] = steps;
    root["strategies"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

std::vector<InsertionStrategy> strategies_from_json(const std::string& text) {
  json root = json::parse(text);
  std::vector<InsertionStrategy> fs;
  for (const json& j : root.at("strategies")) {
    InsertionStrategy f;
    f.intruder = j.at("intruder").get<int>();
    f.policy = j.at("policy").get<std::string>();
    f.event_names = j.at("events").get<std::vector<std::string>>();
    auto event_of = [&f](const std::string& token) {
      auto it = std::find(f.event_names.begin(), f.event_names.end(), token);
      if (it == f.event_names.end())
        throw std::invalid_argument("strategy references unknown event '" +
                                    token + "'");
      return static_cast<EventId>(it - f.event_names.begin());
    };
    for (const json& t : j.at("inputs"))
      f.inputs.insert(event_of(t.get<std::string>()));
    f.initial = j.at("initial").get<std::size_t>();
    f.state_labels = j.at("states").get<std::vector<std::string>>();
    for (const json& s : j.at("steps")) {
      InsertionStrategy::Step step;
      step.next = s.at("next").get<std::size_t>();
      for (const json& w : s.at("output"))
        step.output.push_back({event_of(w.at("event").get<std::string>()),
                               w.at("inserted").get<bool>()});
      f.steps[{s.at("state").get<std::size_t>(),
               event_of(s.at("event").get<std::string>())}] = std::move(step);
    }
    fs.push_back(std::move(f));
  }
  return fs;
}

}  // namespace opaq
