// Fixture comparison shared by protocol_test and the acceptance runner.
#ifndef GUANDAN_TESTS_GOLDEN_H_
#define GUANDAN_TESTS_GOLDEN_H_

#include <map>
#include <string>
#include <vector>

#include "guandan/protocol.h"

namespace guandan::golden {

// Loads fixtures/appendix_b/<name>.json; throws std::runtime_error.
json Fixture(const std::string& name);

// Structural comparison: same keys, same value kinds, same constants for
// 'type'/'stage'. Homogeneous arrays compare every element against the
// fixture's first; action triples must parse as actions. "" when equal.
std::string ShapeDiff(const json& want, const json& got, const std::string& path = "$");

struct Result {
  int compared = 0;
  std::vector<std::string> diffs;
};

// Builds every fixture's message from hand-set state and compares it for
// exact equality.
Result ExactFixtures();

// A scripted room: four socket-less connections.
struct Table {
  explicit Table(ServerOptions options = {});
  std::vector<Outgoing> Send(ConnectionId from, const json& m);

  Server server;
  std::vector<Outgoing> log;
};

struct Session {
  std::map<std::string, json> first_notify;
  std::map<std::string, json> first_act;
  std::map<std::string, json> first_answer;
  std::vector<std::string> failures;
  int matches_finished = 0;
};

// Plays a room to completion, answering every act request with a random
// agent and shadow-checking each actionList against the generator.
void PlayRoom(std::uint64_t seed, int rounds, Session& s);

// Plays scripted rooms until every notify, act and answer kind has been
// seen, then compares the first of each against its fixture's shape.
Result ScriptedFixtures();

}  // namespace guandan::golden

#endif  // GUANDAN_TESTS_GOLDEN_H_
