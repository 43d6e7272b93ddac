#include "coarsevote/json_io.hpp"

#include <fstream>

namespace coarsevote {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

Rational rational_field(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (!j.is_string()) throw ParseError("rational fields must be \"p/q\" strings");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

PreferenceOrdering ordering_field(const std::string& s) {
    try {
        return PreferenceOrdering::from_string(s);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

}  // namespace

BallotFile parse_ballot_file(const nlohmann::json& j) {
    BallotFile f;
    f.m = field(j, "m").get<int>();
    if (f.m < 1) throw ParseError("m must be >= 1");
    const CandidateSet full = full_candidate_set(f.m);
    for (const auto& entry : field(j, "ballots")) {
        if (!entry.is_string()) throw ParseError("ballots must be ordering strings");
        PreferenceOrdering p = ordering_field(entry.get<std::string>());
        if (p.candidate_set() != full)
            throw ParseError("ballot '" + entry.get<std::string>() +
                             "' does not rank exactly candidates 0.." + std::to_string(f.m - 1));
        f.ballots.push_back(std::move(p));
    }
    if (f.ballots.empty()) throw ParseError("ballot file has no ballots");
    return f;
}

nlohmann::json ballot_file_to_json(const BallotFile& f) {
    nlohmann::json ballots = nlohmann::json::array();
    for (const auto& p : f.ballots) ballots.push_back(p.to_string());
    return nlohmann::json{{"m", f.m}, {"ballots", ballots}};
}

Belief parse_belief(const nlohmann::json& j) {
    const int m = field(j, "m").get<int>();
    if (m < 1) throw ParseError("m must be >= 1");
    const CandidateSet full = full_candidate_set(m);
    std::map<PreferenceOrdering, Rational> mass;
    for (const auto& [key, value] : field(j, "mass").items()) {
        PreferenceOrdering p = ordering_field(key);
        if (p.candidate_set() != full)
            throw ParseError("belief ordering '" + key + "' does not cover candidates 0.." +
                             std::to_string(m - 1));
        mass[p] = rational_field(value);
    }
    try {
        return Belief(full, std::move(mass));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

nlohmann::json belief_to_json(const Belief& phi) {
    nlohmann::json mass = nlohmann::json::object();
    for (const auto& [p, q] : phi.support()) mass[p.to_string()] = rational_to_string(q);
    return nlohmann::json{{"m", phi.num_candidates()}, {"mass", mass}};
}

nlohmann::json distribution_to_json(const CandidateDistribution& d) {
    nlohmann::json j = nlohmann::json::object();
    for (Candidate c = 0; c < d.m(); ++c) j[std::to_string(c)] = rational_to_string(d.mass_of(c));
    return j;
}

CandidateDistribution parse_distribution(const nlohmann::json& j) {
    if (!j.is_object() || j.empty()) throw ParseError("distribution must be a non-empty object");
    const int m = static_cast<int>(j.size());
    std::vector<Rational> mass(m);
    for (const auto& [key, value] : j.items()) {
        int c;
        try {
            c = std::stoi(key);
        } catch (const std::exception&) {
            throw ParseError("distribution keys must be candidate indices");
        }
        if (c < 0 || c >= m) throw ParseError("distribution keys must be dense 0..m-1");
        mass[c] = rational_field(value);
    }
    try {
        return CandidateDistribution(std::move(mass));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

namespace {

nlohmann::json margin_to_json(const MarginPolicy& margin) {
    if (margin.is_asymptotic())
        return nlohmann::json{{"type", "asymptotic"}, {"delta", rational_to_string(margin.delta())}};
    return nlohmann::json{{"type", "explicit"}, {"t", rational_to_string(margin.threshold())}};
}

MarginPolicy parse_margin(const nlohmann::json& j) {
    const std::string type = field(j, "type").get<std::string>();
    if (type == "asymptotic") return MarginPolicy::asymptotic(rational_field(field(j, "delta")));
    if (type == "explicit") return MarginPolicy::explicit_threshold(rational_field(field(j, "t")));
    throw InvalidSpec("unknown margin type '" + type + "'");
}

nlohmann::json elimination_to_json(const EliminationRuleSpec& spec) {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RepeatedPluralityElimSpec>)
                return {{"type", "repeated-plurality"}, {"margin", margin_to_json(s.margin)}};
            else if constexpr (std::is_same_v<T, ApproxIrvElimSpec>)
                return {{"type", "approx-irv"}, {"margin", margin_to_json(s.margin)}};
            else
                return {{"type", "score"},
                        {"points", s.points},
                        {"margin", margin_to_json(s.margin)}};
        },
        spec);
}

EliminationRuleSpec parse_elimination(const nlohmann::json& j) {
    const std::string type = field(j, "type").get<std::string>();
    if (type == "repeated-plurality")
        return RepeatedPluralityElimSpec{parse_margin(field(j, "margin"))};
    if (type == "approx-irv") return ApproxIrvElimSpec{parse_margin(field(j, "margin"))};
    if (type == "score")
        return ScoreMarginElimSpec{field(j, "points").get<std::vector<long long>>(),
                                   parse_margin(field(j, "margin"))};
    throw InvalidSpec("unknown elimination type '" + type + "'");
}

nlohmann::json selection_to_json(const SelectionRuleSpec& spec) {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PluralitySelectSpec>) {
                return {{"type", "plurality"}};
            } else {
                nlohmann::json j{{"type", "fixed"}};
                j["dist"] = s.dist ? distribution_to_json(*s.dist) : nlohmann::json("uniform");
                return j;
            }
        },
        spec);
}

SelectionRuleSpec parse_selection(const nlohmann::json& j) {
    const std::string type = field(j, "type").get<std::string>();
    if (type == "plurality") return PluralitySelectSpec{};
    if (type == "fixed") {
        const auto& dist = field(j, "dist");
        if (dist.is_string() && dist.get<std::string>() == "uniform")
            return FixedDistributionSelectSpec{std::nullopt};
        return FixedDistributionSelectSpec{parse_distribution(dist)};
    }
    throw InvalidSpec("unknown selection type '" + type + "'");
}

nlohmann::json mix_weight_to_json(const MixWeightPolicy& policy) {
    if (const auto* fixed = std::get_if<FixedMixWeight>(&policy))
        return nlohmann::json(rational_to_string(fixed->q));
    const auto& decay = std::get<DecayMixWeight>(policy);
    return nlohmann::json{
        {"type", "exp-decay"}, {"c", decay.c}, {"delta", rational_to_string(decay.delta)}};
}

MixWeightPolicy parse_mix_weight(const nlohmann::json& j) {
    if (j.is_string() || j.is_number_integer()) return FixedMixWeight{rational_field(j)};
    const std::string type = field(j, "type").get<std::string>();
    if (type == "exp-decay")
        return DecayMixWeight{field(j, "c").get<double>(), rational_field(field(j, "delta"))};
    throw InvalidSpec("unknown mixing weight type '" + type + "'");
}

struct RuleToJson {
    nlohmann::json operator()(const PluralityRule&) const { return {{"type", "plurality"}}; }
    nlohmann::json operator()(const ScoringRule& r) const {
        return {{"type", "scoring"}, {"points", r.points}};
    }
    nlohmann::json operator()(const BordaRule&) const { return {{"type", "borda"}}; }
    nlohmann::json operator()(const RandomDictatorshipRule&) const {
        return {{"type", "random-dictatorship"}};
    }
    nlohmann::json operator()(const PunishingRule&) const { return {{"type", "punishing"}}; }
    nlohmann::json operator()(const RepeatedPluralityElimRule& r) const {
        return {{"type", "repeated-plurality-elim"}, {"margin", margin_to_json(r.margin)}};
    }
    nlohmann::json operator()(const ApproxIrvRule& r) const {
        return {{"type", "approx-irv"}, {"margin", margin_to_json(r.margin)}};
    }
    nlohmann::json operator()(const ScoreElimRule& r) const {
        nlohmann::json j{{"type", "score-elim"},
                         {"points", r.points},
                         {"margin", margin_to_json(r.margin)},
                         {"plurality_when_two", r.plurality_when_two}};
        j["dist"] = r.selection_dist ? distribution_to_json(*r.selection_dist)
                                     : nlohmann::json("uniform");
        return j;
    }
    nlohmann::json operator()(const FrameworkRule& r) const {
        return {{"type", "framework"},
                {"elimination", elimination_to_json(r.elimination)},
                {"selection", selection_to_json(r.selection)}};
    }
    nlohmann::json operator()(const MixedRule& r) const {
        return {{"type", "mixed"},
                {"base", rule_to_json(*r.base)},
                {"q", mix_weight_to_json(r.weight)}};
    }
};

}  // namespace

nlohmann::json rule_to_json(const VotingRuleSpec& rule) {
    return std::visit(RuleToJson{}, rule.rule);
}

VotingRuleSpec parse_rule(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("rule spec must be a JSON object");
    const std::string type = field(j, "type").get<std::string>();
    if (type == "plurality") return VotingRuleSpec{PluralityRule{}};
    if (type == "scoring")
        return VotingRuleSpec{ScoringRule{field(j, "points").get<std::vector<long long>>()}};
    if (type == "borda") return VotingRuleSpec{BordaRule{}};
    if (type == "random-dictatorship") return VotingRuleSpec{RandomDictatorshipRule{}};
    if (type == "punishing") return VotingRuleSpec{PunishingRule{}};
    if (type == "repeated-plurality-elim")
        return VotingRuleSpec{RepeatedPluralityElimRule{parse_margin(field(j, "margin"))}};
    if (type == "approx-irv")
        return VotingRuleSpec{ApproxIrvRule{parse_margin(field(j, "margin"))}};
    if (type == "score-elim") {
        ScoreElimRule r;
        r.points = field(j, "points").get<std::vector<long long>>();
        r.margin = parse_margin(field(j, "margin"));
        if (j.contains("plurality_when_two")) r.plurality_when_two = j["plurality_when_two"];
        if (j.contains("dist") && !(j["dist"].is_string() && j["dist"] == "uniform"))
            r.selection_dist = parse_distribution(j["dist"]);
        return VotingRuleSpec{std::move(r)};
    }
    if (type == "framework")
        return VotingRuleSpec{FrameworkRule{parse_elimination(field(j, "elimination")),
                                            parse_selection(field(j, "selection"))}};
    if (type == "mixed") {
        auto base = std::make_shared<const VotingRuleSpec>(parse_rule(field(j, "base")));
        return VotingRuleSpec{MixedRule{std::move(base), parse_mix_weight(field(j, "q"))}};
    }
    throw InvalidSpec("unknown rule type '" + type + "'");
}

UtilityFunction parse_utility(const std::string& csv) {
    std::vector<Rational> values;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t next = csv.find(',', pos);
        const std::string tok =
            csv.substr(pos, next == std::string::npos ? next : next - pos);
        try {
            values.push_back(parse_rational(tok));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    try {
        return UtilityFunction(std::move(values));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace coarsevote
