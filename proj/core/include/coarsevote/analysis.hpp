#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coarsevote/belief.hpp"
#include "coarsevote/rules.hpp"
#include "coarsevote/types.hpp"

namespace coarsevote {

inline constexpr long long kDefaultEnumerationBudget = 10'000'000;

enum class Verdict { pass, fail, inconclusive };

std::string verdict_name(Verdict v);

/// Structured verdict from a property checker. A failing report always
/// carries a re-checkable witness.
struct PropertyReport {
    std::string property;
    Verdict verdict = Verdict::inconclusive;
    Rational measured_eps;   // worst value observed for the property's epsilon
    nlohmann::json witness;  // null unless verdict == fail
    std::string notes;

    bool pass() const { return verdict == Verdict::pass; }
};

enum class EvalMode { exact, monte_carlo };

struct MonteCarloEstimate {
    double estimate = 0;
    double ci_halfwidth = 0;  // 99% normal-approximation half-width
    long long trials = 0;
    std::uint64_t seed = 0;
};

/// Best-misreport search result for one (rule, belief, truth, utility, n)
/// instance. Exact mode carries exact rationals; Monte Carlo mode carries
/// estimates with a CI on the paired gain difference.
struct ManipulationReport {
    EvalMode mode = EvalMode::exact;
    PreferenceOrdering true_ordering;
    PreferenceOrdering best_lie;
    // exact mode
    Rational truthful_eu;
    Rational best_gain;  // best lie EU minus truthful EU; negative means SP here
    // monte carlo mode
    MonteCarloEstimate truthful_estimate;
    MonteCarloEstimate gain_estimate;
};

/// E[u(v(P_-i, report))] with P_-i ~ phi^(n-1), computed exactly by
/// enumerating top-count compositions of the belief support (valid because
/// every shipped rule is anonymous). Throws BudgetExceeded when the number of
/// compositions C(n-1+k-1, k-1) exceeds the budget.
Rational expected_utility_exact(const VotingRuleSpec& rule, const Belief& phi,
                                const PreferenceOrdering& report, const UtilityFunction& u, int n,
                                long long budget = kDefaultEnumerationBudget);

/// Monte Carlo estimator of the same expectation; deterministic given seed.
MonteCarloEstimate expected_utility_mc(const VotingRuleSpec& rule, const Belief& phi,
                                       const PreferenceOrdering& report, const UtilityFunction& u,
                                       int n, long long trials, std::uint64_t seed);

/// Maximizes lie EU over all misreports (the true ordering is not a lie).
/// Requires u consistent with true_p.
ManipulationReport manipulation_gain_exact(const VotingRuleSpec& rule, const Belief& phi,
                                           const PreferenceOrdering& true_p,
                                           const UtilityFunction& u, int n,
                                           long long budget = kDefaultEnumerationBudget);

/// Monte Carlo variant; all reports share each trial's sampled profile, so
/// the gain CI is computed on paired differences.
ManipulationReport manipulation_gain_mc(const VotingRuleSpec& rule, const Belief& phi,
                                        const PreferenceOrdering& true_p, const UtilityFunction& u,
                                        int n, long long trials, std::uint64_t seed);

/// All utility functions consistent with true_p whose values lie on the grid
/// {0, step, 2*step, ..., <=1} and that are alpha-coarse. Gains are affine in
/// u, so grid vertices witness the extremes over the grid family.
std::vector<UtilityFunction> consistent_grid_utilities(const PreferenceOrdering& true_p,
                                                       const Rational& step,
                                                       const Rational& alpha);

struct SpCheckOptions {
    Rational eps = 0;
    Rational utility_grid_step = 0;  // 0 = use alpha as the step
    EvalMode mode = EvalMode::exact;
    long long trials = 100'000;  // monte carlo mode
    std::uint64_t seed = 1;
    long long budget = kDefaultEnumerationBudget;
};

/// Checks eps-strategy-proofness over every enumerated alpha-coarse grid
/// belief, every true ordering, and every alpha-coarse grid utility. The
/// belief family is the uniform-grid family with denominator <= floor(1/alpha)
/// (noted in the report; the definitional space of beliefs is infinite).
PropertyReport check_eps_sp_coarse(const VotingRuleSpec& rule, const Rational& alpha, int n, int m,
                                   const SpCheckOptions& opts = {});

struct ParetoCheckOptions {
    Rational eps = 0;
    long long budget = kDefaultEnumerationBudget;
    /// When the profile space exceeds the budget, sample this many profiles
    /// instead; a sampled run can only fail (witness) or be inconclusive.
    long long sample_trials = 100'000;
    std::uint64_t seed = 1;
};

/// eps-Pareto efficiency: unanimously dominated candidates get mass <= eps.
PropertyReport check_pareto(const VotingRuleSpec& rule, int n, int m,
                            const ParetoCheckOptions& opts = {});

enum class UnanimityKind { strong, weak, super_weak };

/// strong: every all-tops-x profile elects x with mass >= 1-eps.
/// weak: every identical-ballot profile elects its top with mass >= 1-eps.
/// super_weak: for every x some all-tops-x profile elects x with mass >= 1-eps.
PropertyReport check_unanimity(const VotingRuleSpec& rule, int n, int m, const Rational& eps,
                               UnanimityKind kind, long long budget = kDefaultEnumerationBudget);

/// An adjacent swap in one ballot may change only the swapped pair's masses.
PropertyReport check_pairwise_responsive(const VotingRuleSpec& rule, int n, int m,
                                         long long budget = kDefaultEnumerationBudget);

/// The mass shift caused by an adjacent swap depends only on the swapping
/// voter's ballot and the pair's relative order in the other ballots.
PropertyReport check_pairwise_isolated(const VotingRuleSpec& rule, int n, int m,
                                       long long budget = kDefaultEnumerationBudget);

/// v'(x, j): selection probability of x on the canonical profile where j
/// voters rank x first (rest in index order) and n-j voters rank x last.
struct VPrimeTable {
    int n = 0;
    int m = 0;
    std::vector<std::vector<Rational>> entries;  // entries[x][j], j in 0..n

    const Rational& at(Candidate x, int j) const { return entries.at(x).at(j); }
};

VPrimeTable build_vprime(const VotingRuleSpec& rule, int n, int m);

/// max over all profiles and candidates of |v1(x,P) - v2(x,P)|.
Rational closeness(const VotingRuleSpec& rule1, const VotingRuleSpec& rule2, int n, int m,
                   long long budget = kDefaultEnumerationBudget);

/// Estimated probability that some report by one voter changes the surviving
/// set, over P_-i ~ phi^(n-1). Deterministic given seed.
MonteCarloEstimate elimination_pivotality_mc(const EliminationRuleSpec& elim, const Belief& phi,
                                             int n, long long trials, std::uint64_t seed);

/// Number of candidate pairs ordered differently by the two orderings.
int inversions_between(const PreferenceOrdering& a, const PreferenceOrdering& b);

/// Verifies the punishing rule's strict truthfulness margin: over every
/// profile (up to anonymity), misreport, and alpha-coarse grid utility,
/// truthful EU - lie EU >= inversions * 2*alpha / (n*m*(m-1)), exactly.
PropertyReport strict_sp_margin_punishing(int n, int m, const Rational& alpha,
                                          long long budget = kDefaultEnumerationBudget);

// --- JSON serialization of reports ------------------------------------------

nlohmann::json to_json(const PropertyReport& report);
nlohmann::json to_json(const ManipulationReport& report);
nlohmann::json to_json(const VPrimeTable& table);

/// CSV with header "x,j,vprime"; exact "p/q" values.
std::string vprime_to_csv(const VPrimeTable& table);

}  // namespace coarsevote
