// Command-line front end: opacity checks, insertion-function synthesis,
// run simulation, and Graphviz export over .des models.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "opaq/ais.hpp"
#include "opaq/dot.hpp"
#include "opaq/nfm.hpp"
#include "opaq/opacity.hpp"
#include "opaq/prune.hpp"
#include "opaq/strategy.hpp"

namespace {

using nlohmann::json;

constexpr int kExitHolds = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::optional<std::string>& path,
                  const std::string& content) {
  if (!path) {
    std::cout << content;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw std::runtime_error("cannot write '" + *path + "'");
  out << content;
}

opaq::Word parse_word(const opaq::Model& m, std::string text) {
  std::replace(text.begin(), text.end(), '.', ' ');
  std::istringstream in(text);
  opaq::Word word;
  std::string token;
  while (in >> token) {
    auto e = m.find_event(token);
    if (!e) throw std::runtime_error("unknown event '" + token + "'");
    word.push_back(*e);
  }
  return word;
}

json witness_json(const opaq::Model& m, const opaq::Witness& w) {
  json j;
  j["intruder"] = w.intruder ? json(*w.intruder) : json("joint");
  json word = json::array();
  for (opaq::EventId e : w.word) word.push_back(m.event_name(e));
  j["word"] = word;
  json estimate = json::array();
  for (opaq::StateId s : w.estimate) estimate.push_back(m.state_name(s));
  j["estimate"] = estimate;
  return j;
}

int report_verdict(const opaq::Model& m, const std::string& property,
                   const opaq::Verdict& verdict, bool as_json) {
  if (as_json) {
    json j;
    j["property"] = property;
    j["holds"] = verdict.holds;
    j["witnesses"] = json::array();
    for (const auto& w : verdict.witnesses)
      j["witnesses"].push_back(witness_json(m, w));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << property << ": " << (verdict.holds ? "HOLDS" : "VIOLATED")
              << "\n";
    for (const auto& w : verdict.witnesses) {
      std::cout << "  witness";
      if (w.intruder)
        std::cout << " (intruder " << *w.intruder << ")";
      else
        std::cout << " (joint)";
      std::cout << ": word " << m.format_word(w.word) << " -> estimate "
                << m.format_state_set(w.estimate) << "\n";
    }
  }
  return verdict.holds ? kExitHolds : kExitViolated;
}

json prune_report_json(const opaq::Model& m, const opaq::PruneReport& report) {
  json j;
  j["deleted"] = json::array();
  for (const auto& r : report.deleted) {
    json d;
    d["state"] = r.label;
    d["reason"] = opaq::prune_reason_name(r.reason);
    json ests = json::array();
    for (const auto& est : r.intruder_ests) {
      json e = json::array();
      for (opaq::StateId s : est) e.push_back(m.state_name(s));
      ests.push_back(e);
    }
    d["intruder_estimates"] = ests;
    json oe = json::array();
    for (opaq::StateId s : r.obs_est) oe.push_back(m.state_name(s));
    d["obs_estimate"] = oe;
    j["deleted"].push_back(d);
  }
  j["surviving_states"] = report.surviving_states;
  j["surviving_transitions"] = report.surviving_transitions;
  return j;
}

struct CommonArgs {
  std::string input;
  bool as_json = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Current-state opacity verification and insertion-function "
               "synthesis for finite-automaton models with multiple "
               "partially-observing intruders"};
  app.require_subcommand(1);

  CommonArgs args;
  int intruder = 0;
  std::optional<std::string> out_path;
  std::string policy_arg = "min-insert";
  std::string word_arg;
  std::string what = "observer";
  std::string strategies_path;
  bool identity = false;

  auto add_common = [&args](CLI::App* cmd) {
    cmd->add_option("input", args.input, ".des model file")->required();
    cmd->add_flag("--json", args.as_json, "machine-readable output");
  };

  CLI::App* check_cso = app.add_subcommand(
      "check-cso", "verify current-state opacity against one intruder");
  add_common(check_cso);
  check_cso->add_option("--intruder", intruder, "1-based intruder index")
      ->required();

  CLI::App* check_dcso = app.add_subcommand(
      "check-dcso", "verify opacity against every intruder separately");
  add_common(check_dcso);

  CLI::App* check_jcso = app.add_subcommand(
      "check-jcso",
      "verify joint opacity under intersection-based coordination");
  add_common(check_jcso);

  CLI::App* build_ais_cmd = app.add_subcommand(
      "build-ais", "build one intruder's insertion game and report its size");
  add_common(build_ais_cmd);
  build_ais_cmd->add_option("--intruder", intruder, "1-based intruder index")
      ->required();
  build_ais_cmd->add_option("-o,--output", out_path, "write DOT here");

  CLI::App* synthesize = app.add_subcommand(
      "synthesize", "extract per-intruder local insertion functions");
  add_common(synthesize);
  synthesize->add_option("--intruder", intruder,
                         "only this intruder (default: all)");
  synthesize->add_option("-o,--output", out_path, "strategies JSON path");
  synthesize->add_option("--policy", policy_arg, "min-insert | max-insert");

  CLI::App* synthesize_joint = app.add_subcommand(
      "synthesize-joint",
      "coordinate insertion functions so joint opacity holds");
  add_common(synthesize_joint);
  synthesize_joint->add_option("-o,--output", out_path, "strategies JSON path");
  synthesize_joint->add_option("--policy", policy_arg,
                               "min-insert | max-insert");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "replay a genuine word under insertion strategies");
  add_common(simulate);
  simulate->add_option("--word", word_arg, "genuine word, e.g. \"c a b\"")
      ->required();
  simulate->add_option("--strategies", strategies_path,
                       "strategies JSON (from synthesize/synthesize-joint)");
  simulate->add_flag("--identity", identity,
                     "use the no-insertion strategies instead");

  CLI::App* export_dot = app.add_subcommand("export-dot",
                                            "write a Graphviz rendering");
  add_common(export_dot);
  export_dot
      ->add_option("--what", what,
                   "observer | global-observer | ais | ais-raw | nfm | "
                   "product | product-pruned")
      ->required();
  export_dot->add_option("--intruder", intruder,
                         "intruder for observer/ais/nfm exports");
  export_dot->add_option("-o,--output", out_path, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const opaq::Model model = opaq::parse_model(read_file(args.input));

    if (check_cso->parsed()) {
      opaq::Verdict v = opaq::verify_cso(model, model.mask(intruder));
      for (auto& w : v.witnesses) w.intruder = intruder;
      return report_verdict(model, "current-state opacity", v, args.as_json);
    }

    if (check_dcso->parsed())
      return report_verdict(model, "decentralized current-state opacity",
                            opaq::verify_dcso(model), args.as_json);

    if (check_jcso->parsed())
      return report_verdict(model, "joint current-state opacity",
                            opaq::verify_jcso_plain(model), args.as_json);

    if (build_ais_cmd->parsed()) {
      opaq::Ais ais = opaq::build_ais(model, intruder);
      if (out_path) write_output(out_path, opaq::ais_dot(model, ais));
      bool enforceable = opaq::check_private_enforceability(ais);
      if (args.as_json) {
        json j;
        j["intruder"] = intruder;
        j["privately_enforceable"] = enforceable;
        j["nodes"] = ais.nodes().size();
        j["system_nodes"] = ais.system_count();
        j["insertion_nodes"] = ais.insertion_count();
        j["edges"] = ais.edges().size();
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "AIS intruder " << intruder << ": "
                  << (enforceable ? "nonempty" : "empty") << ", "
                  << ais.system_count() << " system + " << ais.insertion_count()
                  << " insertion nodes, " << ais.edges().size() << " edges\n";
      }
      return enforceable ? kExitHolds : kExitViolated;
    }

    auto policy = opaq::policy_from_name(policy_arg);
    if (!policy) throw std::runtime_error("unknown policy '" + policy_arg + "'");

    if (synthesize->parsed()) {
      std::vector<int> targets;
      if (intruder > 0)
        targets.push_back(intruder);
      else
        for (std::size_t i = 1; i <= model.intruder_count(); ++i)
          targets.push_back(static_cast<int>(i));
      if (targets.empty()) throw std::runtime_error("model declares no intruders");

      std::vector<opaq::InsertionStrategy> strategies;
      for (int i : targets) {
        opaq::Ais ais = opaq::build_ais(model, i);
        if (ais.empty()) {
          std::cout << "not privately enforceable: AIS of intruder " << i
                    << " is empty\n";
          return kExitViolated;
        }
        strategies.push_back(opaq::extract_local_insertion(model, ais, *policy));
      }
      write_output(out_path, opaq::strategies_to_json(strategies));
      if (out_path)
        std::cout << strategies.size() << " strategies written to " << *out_path
                  << "\n";
      return kExitHolds;
    }

    if (synthesize_joint->parsed()) {
      if (model.intruder_count() == 0)
        throw std::runtime_error("model declares no intruders");
      std::vector<opaq::Nfm> machines;
      for (std::size_t i = 1; i <= model.intruder_count(); ++i) {
        opaq::Ais ais = opaq::build_ais(model, static_cast<int>(i));
        if (ais.empty()) {
          std::cout << "not jointly enforceable: AIS of intruder " << i
                    << " is empty\n";
          return kExitViolated;
        }
        machines.push_back(opaq::ais_to_nfm(ais));
      }
      opaq::ProductNfm product =
          opaq::compose_product(machines, opaq::build_global_observer(model));
      opaq::PrunedProduct pruned = opaq::prune_product(model, product);

      if (args.as_json) {
        json j = prune_report_json(model, pruned.report);
        j["jointly_enforceable"] = opaq::check_joint_enforceability(pruned);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "product: " << product.size() << " states, pruned "
                  << pruned.report.deleted.size() << ":\n";
        for (const auto& r : pruned.report.deleted)
          std::cout << "  " << r.label << " ["
                    << opaq::prune_reason_name(r.reason) << "]\n";
        std::cout << "surviving: " << pruned.report.surviving_states
                  << " states\n";
      }
      if (!opaq::check_joint_enforceability(pruned)) {
        std::cout << "not jointly enforceable: product is empty after pruning\n";
        return kExitViolated;
      }
      auto strategies = opaq::extract_joint_strategy(model, pruned, *policy);
      write_output(out_path, opaq::strategies_to_json(strategies));
      if (out_path)
        std::cout << strategies.size() << " strategies written to " << *out_path
                  << "\n";
      return kExitHolds;
    }

    if (simulate->parsed()) {
      opaq::Word word = parse_word(model, word_arg);
      std::vector<opaq::InsertionStrategy> strategies;
      if (identity) {
        for (std::size_t i = 1; i <= model.intruder_count(); ++i)
          strategies.push_back(
              opaq::identity_strategy(model, static_cast<int>(i)));
      } else if (!strategies_path.empty()) {
        strategies = opaq::strategies_from_json(read_file(strategies_path));
      } else {
        throw std::runtime_error("need --strategies FILE or --identity");
      }
      opaq::Trace trace = opaq::simulate_run(model, strategies, word);

      if (args.as_json) {
        json j;
        j["word"] = json::array();
        for (opaq::EventId e : word) j["word"].push_back(model.event_name(e));
        j["steps"] = json::array();
        for (const auto& s : trace.steps) {
          json step;
          step["event"] = model.event_name(s.genuine);
          step["outputs"] = json::array();
          for (const auto& o : s.outputs) {
            json seg = json::array();
            for (const auto& sym : o)
              seg.push_back({{"event", model.event_name(sym.event)},
                             {"inserted", sym.inserted}});
            step["outputs"].push_back(seg);
          }
          step["joint_estimate"] = json::array();
          for (opaq::StateId st : s.joint_estimate)
            step["joint_estimate"].push_back(model.state_name(st));
          step["joint_reveal"] = s.joint_reveal;
          step["local_reveal"] = s.local_reveal;
          j["steps"].push_back(step);
        }
        bool reveal = trace.any_local_reveal() || trace.any_joint_reveal();
        j["reveals"] = reveal;
        std::cout << j.dump(2) << "\n";
        return reveal ? kExitViolated : kExitHolds;
      }

      for (const auto& s : trace.steps) {
        std::cout << model.event_name(s.genuine) << ":";
        for (std::size_t i = 0; i < s.outputs.size(); ++i) {
          std::cout << " I" << (i + 1) << "=";
          if (s.outputs[i].empty()) std::cout << "eps";
          for (const auto& sym : s.outputs[i])
            std::cout << model.event_name(sym.event)
                      << (sym.inserted ? "*" : "");
          std::cout << "->" << model.format_state_set(s.intruder_estimates[i]);
          if (s.local_reveal[i]) std::cout << "!REVEAL";
        }
        std::cout << " obs=" << model.format_state_set(s.obs_estimate)
                  << " joint=" << model.format_state_set(s.joint_estimate);
        if (s.joint_reveal) std::cout << " !JOINT-REVEAL";
        std::cout << "\n";
      }
      bool reveal = trace.any_local_reveal() || trace.any_joint_reveal();
      std::cout << (reveal ? "reveals secret" : "no reveal") << "\n";
      return reveal ? kExitViolated : kExitHolds;
    }

    if (export_dot->parsed()) {
      auto need_intruder = [&intruder]() {
        if (intruder < 1)
          throw std::runtime_error("--intruder is required for this export");
      };
      std::string dot;
      if (what == "observer") {
        need_intruder();
        dot = opaq::observer_dot(model,
                                 opaq::build_observer(model, model.mask(intruder)));
      } else if (what == "global-observer") {
        dot = opaq::observer_dot(model,
                                 opaq::build_observer(model, model.union_mask()));
      } else if (what == "ais") {
        need_intruder();
        dot = opaq::ais_dot(model, opaq::build_ais(model, intruder));
      } else if (what == "ais-raw") {
        need_intruder();
        dot = opaq::ais_dot(
            model, opaq::build_ais_unpruned(model, model.mask(intruder), intruder));
      } else if (what == "nfm") {
        need_intruder();
        dot = opaq::nfm_dot(model, opaq::ais_to_nfm(opaq::build_ais(model, intruder)));
      } else if (what == "product" || what == "product-pruned") {
        std::vector<opaq::Nfm> machines;
        for (std::size_t i = 1; i <= model.intruder_count(); ++i) {
          opaq::Ais ais = opaq::build_ais(model, static_cast<int>(i));
          if (ais.empty())
            throw std::runtime_error("AIS of intruder " + std::to_string(i) +
                                     " is empty");
          machines.push_back(opaq::ais_to_nfm(ais));
        }
        opaq::ProductNfm product =
            opaq::compose_product(machines, opaq::build_global_observer(model));
        if (what == "product") {
          dot = opaq::product_dot(model, product);
        } else {
          opaq::PrunedProduct pruned = opaq::prune_product(model, product);
          dot = opaq::product_dot(model, product, &pruned.report);
        }
      } else {
        throw std::runtime_error("unknown export '" + what + "'");
      }
      write_output(out_path, dot);
      return kExitHolds;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
