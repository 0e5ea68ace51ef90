#include "opaq/dot.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace opaq {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string output_label(const Model& m, const Word& output) {
  if (output.empty()) return "eps";
  std::string out;
  for (EventId e : output) out += m.event_name(e);
  return out;
}

}  // namespace

std::string observer_dot(const Model& m, const Observer& o) {
  std::ostringstream out;
  out << "digraph observer {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (ObsIndex i = 0; i < o.size(); ++i) {
    out << "  n" << i << " [label=" << quote(m.format_state_set(o.state(i)));
    if (m.reveals(o.state(i))) out << ", style=filled, fillcolor=gray";
    out << "];\n";
  }
  out << "  init [shape=point];\n  init -> n" << o.initial() << ";\n";
  for (ObsIndex i = 0; i < o.size(); ++i)
    for (const auto& [e, next] : o.moves(i))
      out << "  n" << i << " -> n" << next
          << " [label=" << quote(m.event_name(e)) << "];\n";
  out << "}\n";
  return out.str();
}

std::string ais_dot(const Model& m, const Ais& a) {
  std::ostringstream out;
  out << "digraph ais {\n  rankdir=TB;\n";
  const Observer& obs = a.observer();
  for (std::uint32_t i = 0; i < a.nodes().size(); ++i) {
    const AisNode& n = a.nodes()[i];
    std::string label = "(" + m.format_state_set(obs.state(n.intruder_est)) +
                        "," + m.format_state_set(obs.state(n.system_est)) + ")";
    if (n.pending) label += "," + m.event_name(*n.pending);
    out << "  n" << i << " [label=" << quote(label) << ", shape="
        << (n.kind == AisNode::System ? "box" : "ellipse") << "];\n";
  }
  if (!a.empty()) out << "  init [shape=point];\n  init -> n0;\n";
  for (const AisEdge& e : a.edges())
    out << "  n" << e.from << " -> n" << e.to
        << " [label=" << quote(m.event_name(e.label)) << "];\n";
  out << "}\n";
  return out.str();
}

std::string nfm_dot(const Model& m, const Nfm& machine) {
  std::ostringstream out;
  out << "digraph nfm {\n  rankdir=TB;\n  node [shape=box];\n";
  const Observer& obs = machine.observer();
  for (std::uint32_t i = 0; i < machine.size(); ++i) {
    const Nfm::State& s = machine.state(i);
    std::string label = machine.intruder() == 0
                            ? m.format_state_set(obs.state(s.intruder_est))
                            : "(" + m.format_state_set(obs.state(s.intruder_est)) +
                                  "," + m.format_state_set(obs.state(s.system_est)) +
                                  ")";
    out << "  n" << i << " [label=" << quote(label) << "];\n";
  }
  out << "  init [shape=point];\n  init -> n" << machine.initial() << ";\n";
  for (const auto& [key, choices] : machine.transitions())
    for (const auto& choice : choices)
      out << "  n" << key.first << " -> n" << choice.to << " [label="
          << quote(m.event_name(key.second) + "/" + output_label(m, choice.output))
          << "];\n";
  out << "}\n";
  return out.str();
}

std::string product_dot(const Model& m, const ProductNfm& p,
                        const PruneReport* pruned) {
  std::set<std::string> deleted;
  if (pruned)
    for (const PruneRecord& r : pruned->deleted) deleted.insert(r.label);

  std::ostringstream out;
  out << "digraph product {\n  rankdir=TB;\n  node [shape=box];\n";
  std::vector<std::uint32_t> pruned_nodes;
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (deleted.count(p.label(m, i))) {
      pruned_nodes.push_back(i);
      continue;
    }
    out << "  n" << i << " [label=" << quote(p.label(m, i)) << "];\n";
  }
  if (!pruned_nodes.empty()) {
    out << "  subgraph cluster_pruned {\n    style=dashed;\n    label=\"pruned\";\n";
    for (std::uint32_t i : pruned_nodes)
      out << "    n" << i << " [label=" << quote(p.label(m, i)) << "];\n";
    out << "  }\n";
  }
  if (!p.empty()) out << "  init [shape=point];\n  init -> n" << p.initial() << ";\n";
  for (const ProductTransition& t : p.transitions()) {
    std::string label = m.event_name(t.input) + "/(";
    for (std::size_t i = 0; i < t.outputs.size(); ++i) {
      if (i) label += ",";
      label += output_label(m, t.outputs[i]);
    }
    label += ")";
    out << "  n" << t.from << " -> n" << t.to << " [label=" << quote(label)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace opaq
