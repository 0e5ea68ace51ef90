#include "doctest.h"

#include <random>
#include <set>

#include "opaq/observer.hpp"
#include "support.hpp"

using namespace opaq;

namespace {

// Sorted (source estimate, event, target estimate) triples.
std::set<std::tuple<Estimate, EventId, Estimate>> edge_set(const Observer& o) {
  std::set<std::tuple<Estimate, EventId, Estimate>> edges;
  for (ObsIndex i = 0; i < o.size(); ++i)
    for (const auto& [e, next] : o.moves(i))
      edges.insert({o.state(i), e, o.state(next)});
  return edges;
}

}  // namespace

TEST_CASE("unobservable reach closes under hidden events") {
  Model m = support::load_figure3();
  CHECK(unobservable_reach(m, m.mask(1), support::states_of(m, "0")) ==
        support::states_of(m, "0 1"));
  CHECK(unobservable_reach(m, m.mask(2), support::states_of(m, "0")) ==
        support::states_of(m, "0 2"));

  Mask full{support::word_of(m, "a b c d")};
  CHECK(unobservable_reach(m, full, support::states_of(m, "0")) ==
        support::states_of(m, "0"));

  CHECK_THROWS_AS(unobservable_reach(m, m.mask(1), {}), std::invalid_argument);
}

TEST_CASE("observer of intruder 1 matches the expected seven estimates") {
  Model m = support::load_figure3();
  Observer o = build_observer(m, m.mask(1));
  REQUIRE(o.size() == 7);
  CHECK(o.state(o.initial()) == support::states_of(m, "0 1"));

  std::set<Estimate> expected;
  for (const char* s : {"0 1", "2", "3 4", "5 6", "7", "8 9", "10"})
    expected.insert(support::states_of(m, s));
  std::set<Estimate> actual(o.states().begin(), o.states().end());
  CHECK(actual == expected);

  auto ev = [&m](const char* t) { return *m.find_event(t); };
  std::set<std::tuple<Estimate, EventId, Estimate>> edges = {
      {support::states_of(m, "0 1"), ev("b"), support::states_of(m, "2")},
      {support::states_of(m, "0 1"), ev("c"), support::states_of(m, "3 4")},
      {support::states_of(m, "0 1"), ev("d"), support::states_of(m, "7")},
      {support::states_of(m, "3 4"), ev("b"), support::states_of(m, "5 6")},
      {support::states_of(m, "7"), ev("c"), support::states_of(m, "8 9")},
      {support::states_of(m, "8 9"), ev("b"), support::states_of(m, "10")},
  };
  CHECK(edge_set(o) == edges);
}

TEST_CASE("observer of intruder 2 matches the expected seven estimates") {
  Model m = support::load_figure3();
  Observer o = build_observer(m, m.mask(2));
  REQUIRE(o.size() == 7);
  CHECK(o.state(o.initial()) == support::states_of(m, "0 2"));

  std::set<Estimate> expected;
  for (const char* s : {"0 2", "1", "3 5", "7", "4 6", "8 10", "9"})
    expected.insert(support::states_of(m, s));
  std::set<Estimate> actual(o.states().begin(), o.states().end());
  CHECK(actual == expected);
  CHECK(edge_set(o).size() == 6);
}

TEST_CASE("full observation of a deterministic model reproduces it") {
  Model m = support::load_figure3();
  Mask full{support::word_of(m, "a b c d")};
  Observer o = build_observer(m, full);
  CHECK(o.size() == m.state_count());  // all reachable, all singletons
  for (ObsIndex i = 0; i < o.size(); ++i) CHECK(o.state(i).size() == 1);
  CHECK(edge_set(o).size() == m.transitions().size());
}

TEST_CASE("estimate walks the observer") {
  Model m = support::load_figure3();
  Observer o1 = build_observer(m, m.mask(1));
  Observer o2 = build_observer(m, m.mask(2));
  CHECK(estimate(o1, support::word_of(m, "c b")) ==
        support::states_of(m, "5 6"));
  CHECK(estimate(o1, {}) == support::states_of(m, "0 1"));
  CHECK(estimate(o2, support::word_of(m, "c a")) ==
        support::states_of(m, "4 6"));
  CHECK_THROWS_AS(estimate(o1, support::word_of(m, "b b")),
                  std::invalid_argument);
}

TEST_CASE("observer estimates agree with exact estimation on all short words") {
  std::mt19937 rng(23);
  for (int round = 0; round < 40; ++round) {
    Model m = round == 0 ? support::load_figure3() : support::random_model(rng);
    if (m.intruder_count() == 0) continue;
    for (std::size_t i = 0; i < m.intruder_count(); ++i) {
      const Mask& mask = m.masks()[i];
      Observer o = build_observer(m, mask);
      CHECK(o.size() <= (std::size_t{1} << m.state_count()));
      for (const Estimate& est : o.states()) CHECK_FALSE(est.empty());

      for (const Word& w : enumerate_language(m, 6)) {
        Word observed = project(m, mask, w);
        support::Ests expected = support::exact_estimate(m, mask, observed);
        CHECK(estimate(o, observed) == support::to_state_set(expected));
      }
    }
  }
}
