#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coarsevote/belief.hpp"
#include "coarsevote/rules.hpp"
#include "coarsevote/types.hpp"

namespace coarsevote {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Ballot and observation files share one shape:
/// {"m": 3, "ballots": ["2>0>1", "0>1>2", ...]}
struct BallotFile {
    int m = 0;
    std::vector<PreferenceOrdering> ballots;
};

BallotFile parse_ballot_file(const nlohmann::json& j);
nlohmann::json ballot_file_to_json(const BallotFile& f);

/// Belief files: {"m": 3, "mass": {"0>1>2": "1/2", ...}}; exact rational
/// strings, zero-mass orderings may be omitted.
Belief parse_belief(const nlohmann::json& j);
nlohmann::json belief_to_json(const Belief& phi);

/// Distributions serialize as {"0": "1/2", "1": "1/2", "2": "0/1"} with one
/// key per candidate.
nlohmann::json distribution_to_json(const CandidateDistribution& d);
CandidateDistribution parse_distribution(const nlohmann::json& j);

/// Rule spec JSON mirrors the tagged union; see README for the schema.
nlohmann::json rule_to_json(const VotingRuleSpec& rule);
VotingRuleSpec parse_rule(const nlohmann::json& j);

/// Comma-separated rationals indexed by candidate, e.g. "0,1/2,1".
UtilityFunction parse_utility(const std::string& csv);

nlohmann::json load_json_file(const std::string& path);

}  // namespace coarsevote
