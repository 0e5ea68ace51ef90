#include "opaq/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

namespace opaq {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

bool valid_token(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

StateSet sorted_unique(StateSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

bool token_less(const std::string& a, const std::string& b) {
  const bool na = all_digits(a);
  const bool nb = all_digits(b);
  if (na != nb) return na;
  if (na && nb && a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool Mask::observes(EventId e) const {
  return std::binary_search(observable.begin(), observable.end(), e);
}

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      line_(line) {}

Model Model::from_parts(const ModelParts& parts) {
  Model m;

  m.state_names_ = parts.states;
  std::sort(m.state_names_.begin(), m.state_names_.end(), token_less);
  m.state_names_.erase(
      std::unique(m.state_names_.begin(), m.state_names_.end()),
      m.state_names_.end());
  m.event_names_ = parts.events;
  std::sort(m.event_names_.begin(), m.event_names_.end(), token_less);
  m.event_names_.erase(
      std::unique(m.event_names_.begin(), m.event_names_.end()),
      m.event_names_.end());

  for (const auto& t : m.state_names_)
    if (!valid_token(t))
      throw ParseError(0, "invalid state token '" + t + "'");
  for (const auto& t : m.event_names_)
    if (!valid_token(t))
      throw ParseError(0, "invalid event token '" + t + "'");

  auto state_of = [&m](const std::string& token) {
    auto s = m.find_state(token);
    if (!s) throw ParseError(0, "unknown state '" + token + "'");
    return *s;
  };
  auto event_of = [&m](const std::string& token) {
    auto e = m.find_event(token);
    if (!e) throw ParseError(0, "unknown event '" + token + "'");
    return *e;
  };

  for (const auto& [from, ev, to] : parts.transitions)
    m.transitions_.push_back({state_of(from), event_of(ev), state_of(to)});
  std::sort(m.transitions_.begin(), m.transitions_.end());
  m.transitions_.erase(
      std::unique(m.transitions_.begin(), m.transitions_.end()),
      m.transitions_.end());

  for (const auto& t : parts.initial) m.initial_.push_back(state_of(t));
  m.initial_ = sorted_unique(std::move(m.initial_));
  if (m.initial_.empty()) throw ParseError(0, "empty initial set");

  for (const auto& t : parts.secret) m.secret_.push_back(state_of(t));
  m.secret_ = sorted_unique(std::move(m.secret_));

  for (const auto& mask_tokens : parts.masks) {
    Mask mask;
    for (const auto& t : mask_tokens) mask.observable.push_back(event_of(t));
    std::sort(mask.observable.begin(), mask.observable.end());
    mask.observable.erase(
        std::unique(mask.observable.begin(), mask.observable.end()),
        mask.observable.end());
    m.masks_.push_back(std::move(mask));
  }

  for (const auto& t : m.transitions_)
    m.adjacency_[{t.from, t.event}].push_back(t.to);

  return m;
}

std::optional<StateId> Model::find_state(const std::string& token) const {
  auto it = std::lower_bound(state_names_.begin(), state_names_.end(), token,
                             token_less);
  if (it == state_names_.end() || *it != token) return std::nullopt;
  return static_cast<StateId>(it - state_names_.begin());
}

std::optional<EventId> Model::find_event(const std::string& token) const {
  auto it = std::lower_bound(event_names_.begin(), event_names_.end(), token,
                             token_less);
  if (it == event_names_.end() || *it != token) return std::nullopt;
  return static_cast<EventId>(it - event_names_.begin());
}

StateSet Model::non_secret() const {
  StateSet ns;
  for (StateId s = 0; s < state_count(); ++s)
    if (!std::binary_search(secret_.begin(), secret_.end(), s))
      ns.push_back(s);
  return ns;
}

const Mask& Model::mask(int intruder) const {
  if (intruder < 1 || static_cast<std::size_t>(intruder) > masks_.size())
    throw std::out_of_range("no intruder " + std::to_string(intruder));
  return masks_[static_cast<std::size_t>(intruder - 1)];
}

Mask Model::union_mask() const {
  Mask u;
  for (const auto& m : masks_)
    u.observable.insert(u.observable.end(), m.observable.begin(),
                        m.observable.end());
  std::sort(u.observable.begin(), u.observable.end());
  u.observable.erase(std::unique(u.observable.begin(), u.observable.end()),
                     u.observable.end());
  return u;
}

const StateSet& Model::successors(StateId s, EventId e) const {
  static const StateSet kEmpty;
  auto it = adjacency_.find({s, e});
  return it == adjacency_.end() ? kEmpty : it->second;
}

StateSet Model::step(const StateSet& from, EventId e) const {
  StateSet image;
  for (StateId s : from) {
    const StateSet& next = successors(s, e);
    image.insert(image.end(), next.begin(), next.end());
  }
  return sorted_unique(std::move(image));
}

std::vector<EventId> Model::enabled(const StateSet& from) const {
  std::vector<EventId> events;
  for (EventId e = 0; e < event_count(); ++e)
    if (!step(from, e).empty()) events.push_back(e);
  return events;
}

bool Model::generates(const Word& w) const {
  StateSet current = initial_;
  for (EventId e : w) {
    current = step(current, e);
    if (current.empty()) return false;
  }
  return true;
}

bool Model::reveals(const StateSet& estimate) const {
  if (estimate.empty()) return false;
  return std::includes(secret_.begin(), secret_.end(), estimate.begin(),
                       estimate.end());
}

std::string Model::format_state_set(const StateSet& set) const {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ",";
    out += state_name(set[i]);
  }
  return out + "}";
}

std::string Model::format_word(const Word& w) const {
  if (w.empty()) return "<empty>";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ".";
    out += event_name(w[i]);
  }
  return out;
}

namespace {

struct RawSection {
  std::string name;   // events / states / initial / secret / observable / transitions
  int index = 0;      // intruder index for observable sections
};

// Parses a "[name]" or "[name 3]" header; returns nullopt for plain lines.
std::optional<RawSection> parse_header(const std::string& line, int line_no,
                                       std::string& rest) {
  std::size_t i = line.find_first_not_of(" \t");
  if (i == std::string::npos || line[i] != '[') return std::nullopt;
  std::size_t close = line.find(']', i);
  if (close == std::string::npos)
    throw ParseError(line_no, "unterminated section header");
  std::istringstream head(line.substr(i + 1, close - i - 1));
  RawSection section;
  head >> section.name;
  std::string arg;
  if (head >> arg) {
    if (!all_digits(arg))
      throw ParseError(line_no, "bad section argument '" + arg + "'");
    section.index = std::stoi(arg);
    std::string extra;
    if (head >> extra) throw ParseError(line_no, "trailing tokens in header");
  }
  rest = line.substr(close + 1);
  return section;
}

std::vector<std::string> tokenize(const std::string& text, int line_no) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (!valid_token(tok))
      throw ParseError(line_no, "invalid token '" + tok + "'");
    tokens.push_back(tok);
  }
  return tokens;
}

}  // namespace

Model parse_model(const std::string& text) {
  ModelParts parts;
  std::map<int, std::vector<std::string>> observable_sections;

  std::istringstream in(text);
  std::string line;
  std::string current = "";
  int current_index = 0;
  int line_no = 0;

  auto consume = [&](const std::vector<std::string>& tokens) {
    if (tokens.empty()) return;
    if (current == "events")
      parts.events.insert(parts.events.end(), tokens.begin(), tokens.end());
    else if (current == "states")
      parts.states.insert(parts.states.end(), tokens.begin(), tokens.end());
    else if (current == "initial")
      parts.initial.insert(parts.initial.end(), tokens.begin(), tokens.end());
    else if (current == "secret")
      parts.secret.insert(parts.secret.end(), tokens.begin(), tokens.end());
    else if (current == "observable") {
      auto& dest = observable_sections[current_index];
      dest.insert(dest.end(), tokens.begin(), tokens.end());
    } else if (current == "transitions") {
      if (tokens.size() != 3)
        throw ParseError(line_no, "expected 'from event to'");
      parts.transitions.push_back({tokens[0], tokens[1], tokens[2]});
    } else {
      throw ParseError(line_no, "content outside any section");
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);

    std::string rest;
    if (auto section = parse_header(line, line_no, rest)) {
      static const std::set<std::string> known = {
          "events", "states", "initial", "secret", "observable", "transitions"};
      if (!known.count(section->name))
        throw ParseError(line_no, "unknown section '" + section->name + "'");
      if (section->name == "observable") {
        if (section->index < 1)
          throw ParseError(line_no, "observable sections need an intruder index");
        if (observable_sections.count(section->index))
          throw ParseError(line_no, "duplicate observable section " +
                                        std::to_string(section->index));
        observable_sections[section->index] = {};
      } else if (section->index != 0) {
        throw ParseError(line_no,
                         "section '" + section->name + "' takes no argument");
      }
      current = section->name;
      current_index = section->index;
      consume(tokenize(rest, line_no));
    } else {
      consume(tokenize(line, line_no));
    }
  }

  int expected = 1;
  for (const auto& [index, tokens] : observable_sections) {
    if (index != expected)
      throw ParseError(0, "observable sections must be numbered 1..N; missing " +
                              std::to_string(expected));
    ++expected;
    parts.masks.push_back(tokens);
  }

  return Model::from_parts(parts);
}

std::string serialize_model(const Model& m) {
  std::ostringstream out;
  auto write_list = [&out](const std::string& header,
                           const std::vector<std::string>& tokens) {
    out << header;
    for (const auto& t : tokens) out << ' ' << t;
    out << '\n';
  };
  auto names_of = [&m](const StateSet& set) {
    std::vector<std::string> names;
    for (StateId s : set) names.push_back(m.state_name(s));
    return names;
  };

  write_list("[events]", m.event_names());
  write_list("[states]", m.state_names());
  write_list("[initial]", names_of(m.initial()));
  write_list("[secret]", names_of(m.secret()));
  for (std::size_t i = 0; i < m.intruder_count(); ++i) {
    std::vector<std::string> names;
    for (EventId e : m.masks()[i].observable) names.push_back(m.event_name(e));
    write_list("[observable " + std::to_string(i + 1) + "]", names);
  }
  out << "[transitions]\n";
  for (const auto& t : m.transitions())
    out << m.state_name(t.from) << ' ' << m.event_name(t.event) << ' '
        << m.state_name(t.to) << '\n';
  return out.str();
}

Word project(const Model& m, const Mask& mask, const Word& w) {
  Word out;
  for (EventId e : w) {
    if (e >= m.event_count())
      throw std::invalid_argument("event id outside model alphabet");
    if (mask.observes(e)) out.push_back(e);
  }
  return out;
}

namespace {

void enumerate_from(const Model& m, const StateSet& current, Word& prefix,
                    std::size_t max_len, std::vector<Word>& out) {
  out.push_back(prefix);
  if (prefix.size() == max_len) return;
  for (EventId e : m.enabled(current)) {
    StateSet next = m.step(current, e);
    prefix.push_back(e);
    enumerate_from(m, next, prefix, max_len, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Word> enumerate_language(const Model& m, std::size_t max_len) {
  std::vector<Word> words;
  Word prefix;
  enumerate_from(m, m.initial(), prefix, max_len, words);
  std::sort(words.begin(), words.end(), shortlex_less);
  return words;
}

}  // namespace opaq
