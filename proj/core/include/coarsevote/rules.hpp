#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coarsevote/types.hpp"

namespace coarsevote {

struct InvalidSpec : std::runtime_error {
    explicit InvalidSpec(const std::string& what) : std::runtime_error(what) {}
};

/// n^(1/2+delta), the count-margin threshold for n voters.
double margin_threshold(long long n, const Rational& delta);

/// Asymptotic(delta): integer count gaps are compared (inclusively) against
/// the real threshold n^(1/2+delta), without rounding. Explicit(t) compares
/// exactly against a rational threshold; used to pin margins in tests.
class MarginPolicy {
public:
    /// Defaults to Explicit(0): only exact ties survive the margin.
    MarginPolicy() = default;

    static MarginPolicy asymptotic(const Rational& delta);
    static MarginPolicy explicit_threshold(const Rational& t);

    /// gap <= threshold ("within" is inclusive).
    bool within(long long gap, long long n) const;

    bool is_asymptotic() const { return asymptotic_; }
    const Rational& delta() const { return delta_; }
    const Rational& threshold() const { return threshold_; }

private:
    bool asymptotic_ = false;
    Rational delta_;      // asymptotic policy
    Rational threshold_;  // explicit policy
};

// --- Stage-1 elimination rules and Stage-2 selection rules ------------------

struct RepeatedPluralityElimSpec {
    MarginPolicy margin;
};
struct ApproxIrvElimSpec {
    MarginPolicy margin;
};
struct ScoreMarginElimSpec {
    std::vector<long long> points;  // length m, nonnegative
    MarginPolicy margin;
};
using EliminationRuleSpec =
    std::variant<RepeatedPluralityElimSpec, ApproxIrvElimSpec, ScoreMarginElimSpec>;

struct PluralitySelectSpec {};
struct FixedDistributionSelectSpec {
    /// Input-independent selection: `dist` conditioned on the survivor set
    /// (uniform over survivors when absent or when survivors carry zero mass).
    std::optional<CandidateDistribution> dist;
};
using SelectionRuleSpec = std::variant<PluralitySelectSpec, FixedDistributionSelectSpec>;

// --- Mixing weight ----------------------------------------------------------

struct FixedMixWeight {
    Rational q;  // in [0,1]
};
/// q(n) = e^(-c * n^(2*delta)), realized as the exact rational value of the
/// IEEE double, so mixed distributions stay exact w.r.t. the resolved q.
struct DecayMixWeight {
    double c = 1.0;
    Rational delta;
};
using MixWeightPolicy = std::variant<FixedMixWeight, DecayMixWeight>;

Rational resolve_mix_weight(const MixWeightPolicy& policy, long long n);

// --- Voting rule specs ------------------------------------------------------

struct VotingRuleSpec;

struct PluralityRule {};
struct ScoringRule {
    std::vector<long long> points;
};
struct BordaRule {};
struct RandomDictatorshipRule {};
struct PunishingRule {};
/// Repeated plurality elimination + plurality selection, as one direct pass.
struct RepeatedPluralityElimRule {
    MarginPolicy margin;
};
/// Approximate instant-runoff: repeatedly eliminate everyone close to the
/// least top count (stopping short of emptying the field), then plurality.
struct ApproxIrvRule {
    MarginPolicy margin;
};
/// Single-pass score-margin elimination, then an input-independent selection;
/// optionally runs plurality instead when exactly two candidates remain.
struct ScoreElimRule {
    std::vector<long long> points;
    MarginPolicy margin;
    std::optional<CandidateDistribution> selection_dist;  // absent = uniform
    bool plurality_when_two = false;
};
/// Generic elimination+selection composition.
struct FrameworkRule {
    EliminationRuleSpec elimination;
    SelectionRuleSpec selection;
};
/// Runs `base` with probability 1-q and the punishing rule with probability q.
struct MixedRule {
    std::shared_ptr<const VotingRuleSpec> base;
    MixWeightPolicy weight;
};

struct VotingRuleSpec {
    std::variant<PluralityRule, ScoringRule, BordaRule, RandomDictatorshipRule, PunishingRule,
                 RepeatedPluralityElimRule, ApproxIrvRule, ScoreElimRule, FrameworkRule, MixedRule>
        rule;
};

/// Throws InvalidSpec if the spec is malformed for m candidates
/// (wrong points length, delta outside (0,1/2), q outside [0,1], ...).
void validate_spec(const VotingRuleSpec& rule, int m);

// --- Operations -------------------------------------------------------------

/// Repeatedly keep the candidates whose top count is within the margin of the
/// maximum, restricting and recounting, until no elimination happens.
CandidateSet eliminate_repeated_plurality(const CountedProfile& prof, const MarginPolicy& margin);
CandidateSet eliminate_repeated_plurality(const Profile& prof, const MarginPolicy& margin);

/// Repeatedly eliminate the candidates whose top count is within the margin
/// of the minimum, unless that would eliminate everyone, in which case stop.
CandidateSet eliminate_approx_irv(const CountedProfile& prof, const MarginPolicy& margin);
CandidateSet eliminate_approx_irv(const Profile& prof, const MarginPolicy& margin);

/// Single pass: keep the candidates whose positional score is within the
/// margin of the maximum score.
CandidateSet eliminate_by_score(const CountedProfile& prof, const std::vector<long long>& points,
                                const MarginPolicy& margin);
CandidateSet eliminate_by_score(const Profile& prof, const std::vector<long long>& points,
                                const MarginPolicy& margin);

/// Dispatch over an EliminationRuleSpec.
CandidateSet eliminate(const EliminationRuleSpec& spec, const CountedProfile& prof);

/// Positional scores: score(c) = sum over voters of points[rank(c)-1].
std::map<Candidate, long long> positional_scores(const CountedProfile& prof,
                                                 const std::vector<long long>& points);

/// Point mass on the top-count argmax; ties broken by lowest candidate index.
/// `m` is the ambient candidate count (the profile may be restricted).
CandidateDistribution plurality_select(const CountedProfile& prof, int m);
CandidateDistribution plurality_select(const Profile& prof, int m);

/// Picks a voter uniformly, then her j-th ranked candidate with probability
/// (m-j) / sum_l (m-l). A single candidate degenerates to a point mass.
CandidateDistribution punishing_distribution(const CountedProfile& prof);
CandidateDistribution punishing_distribution(const Profile& prof);

/// mass(x) = (number of voters whose top choice is x) / n.
CandidateDistribution random_dictatorship_distribution(const CountedProfile& prof);
CandidateDistribution random_dictatorship_distribution(const Profile& prof);

VotingRuleSpec compose_framework(EliminationRuleSpec elimination, SelectionRuleSpec selection);

VotingRuleSpec mix(VotingRuleSpec base, const Rational& q);

/// Exact output distribution of a rule on a full-set profile. Pure and
/// anonymous for every shipped rule; safe to call concurrently.
CandidateDistribution evaluate(const VotingRuleSpec& rule, const CountedProfile& prof);
CandidateDistribution evaluate(const VotingRuleSpec& rule, const Profile& prof);

// --- Presets ----------------------------------------------------------------

struct PresetParams {
    Rational delta = Rational(1, 10);  // margin exponent for vpl/virv/vscore
    double mix_c = 1.0;                // decay constant for vpl-prime/virv-prime
};

std::vector<long long> plurality_points(int m);
std::vector<long long> borda_points(int m);

/// Named presets: plurality, borda, vdict, vpunish, vpl, virv, vscore,
/// vpl-prime, virv-prime, uniform-const. Throws InvalidSpec on unknown names.
VotingRuleSpec make_preset(const std::string& name, int m, const PresetParams& params = {});

/// Advisory helper: the smallest n the proofs' concrete rate polynomial
/// p(x) = (3x+1)^ceil(1/(1/2-delta)) asks for at coarseness alpha. The
/// constants are not known to be tight; treat as a rough lower bound.
double advisory_min_voters(const Rational& alpha, const Rational& delta);

}  // namespace coarsevote
