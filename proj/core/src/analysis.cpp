#include "coarsevote/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace coarsevote {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile

BigInt factorial(long long k) {
    BigInt f = 1;
    for (long long i = 2; i <= k; ++i) f *= i;
    return f;
}

BigInt binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    BigInt num = 1, den = 1;
    for (long long i = 1; i <= k; ++i) {
        num *= n - k + i;
        den *= i;
    }
    return num / den;
}

/// Number of weak compositions of total into parts summands.
BigInt compositions_count(long long total, int parts) {
    return binomial(total + parts - 1, parts - 1);
}

/// Enumerates all count vectors c (length parts, sum = total).
void for_each_composition(long long total, int parts, std::vector<long long>& current,
                          const std::function<void(const std::vector<long long>&)>& fn) {
    if (parts == 1) {
        current.push_back(total);
        fn(current);
        current.pop_back();
        return;
    }
    for (long long head = 0; head <= total; ++head) {
        current.push_back(head);
        for_each_composition(total - head, parts - 1, current, fn);
        current.pop_back();
    }
}

/// Enumerates all profiles in orderings^n; returns false from fn to stop.
bool for_each_profile(int n, const std::vector<PreferenceOrdering>& orderings,
                      const std::function<bool(const Profile&)>& fn) {
    std::vector<std::size_t> idx(n, 0);
    const std::size_t k = orderings.size();
    while (true) {
        std::vector<PreferenceOrdering> voters;
        voters.reserve(n);
        for (int i = 0; i < n; ++i) voters.push_back(orderings[idx[i]]);
        if (!fn(Profile(std::move(voters)))) return false;
        int pos = n - 1;
        while (pos >= 0) {
            if (++idx[pos] < k) break;
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) return true;
    }
}

void check_profile_budget(int n, int m, long long budget, const char* what) {
    const BigInt orderings = factorial(m);
    BigInt total = 1;
    for (int i = 0; i < n; ++i) {
        total *= orderings;
        if (total > budget)
            throw BudgetExceeded(std::string(what) + ": profile space exceeds budget of " +
                                 std::to_string(budget));
    }
}

nlohmann::json profile_json(const Profile& prof) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : prof.voters()) arr.push_back(p.to_string());
    return arr;
}

nlohmann::json belief_json(const Belief& phi) {
    nlohmann::json mass = nlohmann::json::object();
    for (const auto& [p, q] : phi.support()) mass[p.to_string()] = rational_to_string(q);
    return nlohmann::json{{"m", phi.num_candidates()}, {"mass", mass}};
}

/// The belief-grid caveat attached to SP reports.
const char* kGridFamilyNote =
    "beliefs searched: uniform grids with denominator <= floor(1/alpha); "
    "utilities searched: consistent grid assignments";

}  // namespace

Rational expected_utility_exact(const VotingRuleSpec& rule, const Belief& phi,
                                const PreferenceOrdering& report, const UtilityFunction& u, int n,
                                long long budget) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const auto& support = phi.support();
    const int k = static_cast<int>(support.size());
    const long long others = n - 1;
    if (compositions_count(others, k) > budget)
        throw BudgetExceeded("expected_utility_exact: composition count exceeds budget of " +
                             std::to_string(budget));

    const BigInt fact_others = factorial(others);
    Rational eu = 0;
    std::vector<long long> current;
    for_each_composition(others, k, current, [&](const std::vector<long long>& counts) {
        // multinomial(n-1; counts) * prod_j mass_j^counts_j
        BigInt coeff = fact_others;
        Rational prob(1);
        for (int j = 0; j < k; ++j) {
            if (counts[j] == 0) continue;
            coeff /= factorial(counts[j]);
            Rational power(1);
            for (long long t = 0; t < counts[j]; ++t) power *= support[j].second;
            prob *= power;
        }
        prob *= Rational(coeff);
        if (prob == 0) return;

        std::vector<PreferenceOrdering> types;
        std::vector<long long> type_counts;
        for (int j = 0; j < k; ++j) {
            if (counts[j] == 0) continue;
            types.push_back(support[j].first);
            type_counts.push_back(counts[j]);
        }
        types.push_back(report);
        type_counts.push_back(1);
        const CandidateDistribution dist =
            evaluate(rule, CountedProfile(std::move(types), std::move(type_counts)));
        eu += prob * expected_utility(u, dist);
    });
    return eu;
}

MonteCarloEstimate expected_utility_mc(const VotingRuleSpec& rule, const Belief& phi,
                                       const PreferenceOrdering& report, const UtilityFunction& u,
                                       int n, long long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    double sum = 0, sumsq = 0;
    for (long long t = 0; t < trials; ++t) {
        CountedProfile prof = (n > 1)
                                  ? sample_counted_profile(phi, n - 1, seed, t).with_ballot(report)
                                  : CountedProfile({report}, {1});
        const double v = to_double(expected_utility(u, evaluate(rule, prof)));
        sum += v;
        sumsq += v * v;
    }
    MonteCarloEstimate est;
    est.estimate = sum / static_cast<double>(trials);
    est.trials = trials;
    est.seed = seed;
    if (trials > 1) {
        const double var =
            std::max(0.0, (sumsq - sum * sum / static_cast<double>(trials)) /
                              static_cast<double>(trials - 1));
        est.ci_halfwidth = kZ99 * std::sqrt(var / static_cast<double>(trials));
    }
    return est;
}

ManipulationReport manipulation_gain_exact(const VotingRuleSpec& rule, const Belief& phi,
                                           const PreferenceOrdering& true_p,
                                           const UtilityFunction& u, int n, long long budget) {
    if (!is_consistent(u, true_p))
        throw std::invalid_argument("utility is not consistent with the true ordering");
    ManipulationReport report;
    report.mode = EvalMode::exact;
    report.true_ordering = true_p;
    report.truthful_eu = expected_utility_exact(rule, phi, true_p, u, n, budget);
    bool first = true;
    for (const auto& lie : all_orderings(true_p.candidate_set())) {
        if (lie == true_p) continue;
        const Rational eu = expected_utility_exact(rule, phi, lie, u, n, budget);
        const Rational gain = eu - report.truthful_eu;
        if (first || gain > report.best_gain) {
            report.best_gain = gain;
            report.best_lie = lie;
            first = false;
        }
    }
    return report;
}

ManipulationReport manipulation_gain_mc(const VotingRuleSpec& rule, const Belief& phi,
                                        const PreferenceOrdering& true_p, const UtilityFunction& u,
                                        int n, long long trials, std::uint64_t seed) {
    if (!is_consistent(u, true_p))
        throw std::invalid_argument("utility is not consistent with the true ordering");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const auto orderings = all_orderings(true_p.candidate_set());
    const int R = static_cast<int>(orderings.size());
    int truth_idx = -1;
    for (int r = 0; r < R; ++r)
        if (orderings[r] == true_p) truth_idx = r;

    // Common random numbers: every report sees the same sampled opponents.
    std::vector<std::vector<double>> values(R, std::vector<double>(trials));
    for (long long t = 0; t < trials; ++t) {
        std::optional<CountedProfile> others;
        if (n > 1) others = sample_counted_profile(phi, n - 1, seed, t);
        for (int r = 0; r < R; ++r) {
            CountedProfile prof = others ? others->with_ballot(orderings[r])
                                         : CountedProfile({orderings[r]}, {1});
            values[r][t] = to_double(expected_utility(u, evaluate(rule, prof)));
        }
    }

    auto mean_of = [&](int r) {
        double s = 0;
        for (double v : values[r]) s += v;
        return s / static_cast<double>(trials);
    };

    ManipulationReport report;
    report.mode = EvalMode::monte_carlo;
    report.true_ordering = true_p;
    const double truth_mean = mean_of(truth_idx);
    int best = -1;
    double best_mean = 0;
    for (int r = 0; r < R; ++r) {
        if (r == truth_idx) continue;
        const double mu = mean_of(r);
        if (best < 0 || mu > best_mean) {
            best = r;
            best_mean = mu;
        }
    }
    report.best_lie = orderings[best];

    double tsum = 0, tsumsq = 0, dsum = 0, dsumsq = 0;
    for (long long t = 0; t < trials; ++t) {
        tsum += values[truth_idx][t];
        tsumsq += values[truth_idx][t] * values[truth_idx][t];
        const double d = values[best][t] - values[truth_idx][t];
        dsum += d;
        dsumsq += d * d;
    }
    auto ci = [&](double sum, double sumsq) {
        if (trials < 2) return 0.0;
        const double var = std::max(
            0.0, (sumsq - sum * sum / static_cast<double>(trials)) / static_cast<double>(trials - 1));
        return kZ99 * std::sqrt(var / static_cast<double>(trials));
    };
    report.truthful_estimate = {truth_mean, ci(tsum, tsumsq), trials, seed};
    report.gain_estimate = {best_mean - truth_mean, ci(dsum, dsumsq), trials, seed};
    return report;
}

std::vector<UtilityFunction> consistent_grid_utilities(const PreferenceOrdering& true_p,
                                                       const Rational& step,
                                                       const Rational& alpha) {
    if (step <= 0) throw std::invalid_argument("grid step must be positive");
    std::vector<Rational> grid;
    for (Rational v = 0; v <= 1; v += step) grid.push_back(v);
    const int m = true_p.size();
    std::vector<UtilityFunction> out;
    if (static_cast<int>(grid.size()) < m) return out;

    std::vector<int> pick(m);
    std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == m) {
            // grid ascending; assign largest picked value to the top choice
            std::vector<Rational> values(m);
            for (int r = 0; r < m; ++r) values[true_p.ranking()[r]] = grid[pick[m - 1 - r]];
            UtilityFunction u(std::move(values));
            if (alpha <= 0 || is_alpha_coarse_utility(u, alpha)) out.push_back(std::move(u));
            return;
        }
        for (int i = start; i <= static_cast<int>(grid.size()) - (m - depth); ++i) {
            pick[depth] = i;
            choose(i + 1, depth + 1);
        }
    };
    choose(0, 0);
    return out;
}

PropertyReport check_eps_sp_coarse(const VotingRuleSpec& rule, const Rational& alpha, int n, int m,
                                   const SpCheckOptions& opts) {
    PropertyReport report;
    report.property = "eps-sp-coarse";
    report.notes = kGridFamilyNote;
    report.measured_eps = 0;
    const Rational step = opts.utility_grid_step > 0 ? opts.utility_grid_step : alpha;

    bool any_inconclusive = false;
    bool any_gain = false;
    double worst_float = 0;
    const auto beliefs = enumerate_coarse_beliefs(alpha, m, opts.budget);
    for (const auto& phi : beliefs) {
        for (const auto& true_p : all_orderings(m)) {
            for (const auto& u : consistent_grid_utilities(true_p, step, alpha)) {
                if (opts.mode == EvalMode::exact) {
                    const auto gain =
                        manipulation_gain_exact(rule, phi, true_p, u, n, opts.budget);
                    if (!any_gain || gain.best_gain > report.measured_eps)
                        report.measured_eps = gain.best_gain;
                    any_gain = true;
                    if (gain.best_gain > opts.eps) {
                        report.verdict = Verdict::fail;
                        report.witness = {{"belief", belief_json(phi)},
                                          {"true_ordering", true_p.to_string()},
                                          {"utility", u.to_string()},
                                          {"best_lie", gain.best_lie.to_string()},
                                          {"best_gain", rational_to_string(gain.best_gain)}};
                        return report;
                    }
                } else {
                    const auto gain =
                        manipulation_gain_mc(rule, phi, true_p, u, n, opts.trials, opts.seed);
                    const double est = gain.gain_estimate.estimate;
                    const double ci = gain.gain_estimate.ci_halfwidth;
                    worst_float = std::max(worst_float, est);
                    const double eps = to_double(opts.eps);
                    if (est - ci > eps) {
                        report.verdict = Verdict::fail;
                        report.measured_eps = rational_from_double(worst_float);
                        report.witness = {{"belief", belief_json(phi)},
                                          {"true_ordering", true_p.to_string()},
                                          {"utility", u.to_string()},
                                          {"best_lie", gain.best_lie.to_string()},
                                          {"gain_estimate", est},
                                          {"ci_halfwidth", ci}};
                        return report;
                    }
                    if (!(est + ci <= eps)) any_inconclusive = true;
                }
            }
        }
    }
    if (opts.mode == EvalMode::monte_carlo) {
        report.measured_eps = rational_from_double(worst_float);
        report.verdict = any_inconclusive ? Verdict::inconclusive : Verdict::pass;
    } else {
        report.verdict = Verdict::pass;
    }
    return report;
}

PropertyReport check_pareto(const VotingRuleSpec& rule, int n, int m,
                            const ParetoCheckOptions& opts) {
    PropertyReport report;
    report.property = "pareto";
    report.measured_eps = 0;

    const auto orderings = all_orderings(m);
    const auto inspect = [&](const Profile& prof) -> bool {
        const CandidateDistribution dist = evaluate(rule, prof);
        for (Candidate x = 0; x < m; ++x) {
            for (Candidate y = 0; y < m; ++y) {
                if (x == y) continue;
                bool dominated = true;
                for (const auto& p : prof.voters())
                    if (!p.prefers(x, y)) {
                        dominated = false;
                        break;
                    }
                if (!dominated) continue;
                report.measured_eps = std::max(report.measured_eps, dist.mass_of(y));
                if (dist.mass_of(y) > opts.eps) {
                    report.verdict = Verdict::fail;
                    report.witness = {{"profile", profile_json(prof)},
                                      {"dominating", x},
                                      {"dominated", y},
                                      {"mass", rational_to_string(dist.mass_of(y))}};
                    return false;
                }
            }
        }
        return true;
    };

    BigInt space = 1;
    for (int i = 0; i < n; ++i) space *= orderings.size();
    if (space <= opts.budget) {
        if (for_each_profile(n, orderings, inspect)) report.verdict = Verdict::pass;
        return report;
    }

    // Sampled mode: can find a witness but can never prove the property.
    SplitRng rng(opts.seed, 0);
    std::uint64_t counter = 0;
    for (long long t = 0; t < opts.sample_trials; ++t) {
        std::vector<PreferenceOrdering> voters;
        voters.reserve(n);
        for (int i = 0; i < n; ++i)
            voters.push_back(
                orderings[static_cast<std::size_t>(rng.at(counter++) % orderings.size())]);
        if (!inspect(Profile(std::move(voters)))) return report;
    }
    report.verdict = Verdict::inconclusive;
    report.notes = "profile space exceeds budget; sampled " +
                   std::to_string(opts.sample_trials) + " profiles without a violation";
    return report;
}

namespace {

/// Orderings over 0..m-1 whose top choice is x.
std::vector<PreferenceOrdering> orderings_topped_by(int m, Candidate x) {
    std::vector<PreferenceOrdering> out;
    for (const auto& p : all_orderings(m))
        if (p.top() == x) out.push_back(p);
    return out;
}

}  // namespace

PropertyReport check_unanimity(const VotingRuleSpec& rule, int n, int m, const Rational& eps,
                               UnanimityKind kind, long long budget) {
    PropertyReport report;
    report.measured_eps = 0;

    if (kind == UnanimityKind::weak) {
        report.property = "weak-unanimity";
        for (const auto& p : all_orderings(m)) {
            const Profile prof(std::vector<PreferenceOrdering>(n, p));
            const Rational mass = evaluate(rule, prof).mass_of(p.top());
            report.measured_eps = std::max(report.measured_eps, Rational(1) - mass);
            if (Rational(1) - mass > eps) {
                report.verdict = Verdict::fail;
                report.witness = {{"profile", profile_json(prof)},
                                  {"candidate", p.top()},
                                  {"mass", rational_to_string(mass)}};
                return report;
            }
        }
        report.verdict = Verdict::pass;
        return report;
    }

    for (Candidate x = 0; x < m; ++x) {
        const auto topped = orderings_topped_by(m, x);
        BigInt space = 1;
        for (int i = 0; i < n; ++i) space *= topped.size();
        if (space > budget)
            throw BudgetExceeded("check_unanimity: profile space exceeds budget");

        if (kind == UnanimityKind::strong) {
            report.property = "strong-unanimity";
            const bool ok = for_each_profile(n, topped, [&](const Profile& prof) {
                const Rational mass = evaluate(rule, prof).mass_of(x);
                report.measured_eps = std::max(report.measured_eps, Rational(1) - mass);
                if (Rational(1) - mass > eps) {
                    report.verdict = Verdict::fail;
                    report.witness = {{"profile", profile_json(prof)},
                                      {"candidate", x},
                                      {"mass", rational_to_string(mass)}};
                    return false;
                }
                return true;
            });
            if (!ok) return report;
        } else {
            report.property = "super-weak-unanimity";
            bool found = false;
            Rational best_deficit = 1;
            for_each_profile(n, topped, [&](const Profile& prof) {
                const Rational mass = evaluate(rule, prof).mass_of(x);
                best_deficit = std::min(best_deficit, Rational(1) - mass);
                if (Rational(1) - mass <= eps) {
                    found = true;
                    return false;  // one witness profile per candidate suffices
                }
                return true;
            });
            report.measured_eps = std::max(report.measured_eps, best_deficit);
            if (!found) {
                report.verdict = Verdict::fail;
                report.witness = {{"candidate", x},
                                  {"note", "no all-tops profile elects it within eps"}};
                return report;
            }
        }
    }
    report.verdict = Verdict::pass;
    return report;
}

PropertyReport check_pairwise_responsive(const VotingRuleSpec& rule, int n, int m,
                                         long long budget) {
    PropertyReport report;
    report.property = "pairwise-responsive";
    report.measured_eps = 0;
    check_profile_budget(n, m, budget, "check_pairwise_responsive");

    const auto orderings = all_orderings(m);
    const bool ok = for_each_profile(n, orderings, [&](const Profile& prof) {
        const CandidateDistribution base = evaluate(rule, prof);
        for (int i = 0; i < n; ++i) {
            const auto& ranking = prof.voter(i).ranking();
            for (int pos = 0; pos + 1 < m; ++pos) {
                std::vector<Candidate> swapped = ranking;
                std::swap(swapped[pos], swapped[pos + 1]);
                const Candidate x = ranking[pos], y = ranking[pos + 1];
                const CandidateDistribution after =
                    evaluate(rule, prof.with_voter(i, PreferenceOrdering(swapped)));
                for (Candidate z = 0; z < m; ++z) {
                    if (z == x || z == y) continue;
                    const Rational diff = after.mass_of(z) > base.mass_of(z)
                                              ? after.mass_of(z) - base.mass_of(z)
                                              : base.mass_of(z) - after.mass_of(z);
                    report.measured_eps = std::max(report.measured_eps, diff);
                    if (diff != 0) {
                        report.verdict = Verdict::fail;
                        report.witness = {{"profile", profile_json(prof)},
                                          {"voter", i},
                                          {"swapped", {x, y}},
                                          {"bystander", z},
                                          {"mass_change", rational_to_string(diff)}};
                        return false;
                    }
                }
            }
        }
        return true;
    });
    if (ok) report.verdict = Verdict::pass;
    return report;
}

PropertyReport check_pairwise_isolated(const VotingRuleSpec& rule, int n, int m,
                                       long long budget) {
    PropertyReport report;
    report.property = "pairwise-isolated";
    report.measured_eps = 0;
    check_profile_budget(n, m, budget, "check_pairwise_isolated");

    if (n == 1) {
        // A single voter admits only one profile per ballot; the condition
        // compares pairs and is vacuous.
        report.verdict = Verdict::pass;
        return report;
    }

    const auto orderings = all_orderings(m);
    for (int i = 0; i < n; ++i) {
        for (const auto& pi : orderings) {
            const auto& ranking = pi.ranking();
            for (int pos = 0; pos + 1 < m; ++pos) {
                const Candidate x = ranking[pos], y = ranking[pos + 1];
                std::vector<Candidate> swapped = ranking;
                std::swap(swapped[pos], swapped[pos + 1]);
                const PreferenceOrdering pi_swapped(swapped);

                // orientation key -> (delta, witness profile)
                std::map<std::vector<bool>, std::pair<Rational, Profile>> reference;
                bool failed = false;
                for_each_profile(n - 1, orderings, [&](const Profile& others) {
                    std::vector<PreferenceOrdering> voters = others.voters();
                    voters.insert(voters.begin() + i, pi);
                    const Profile prof((voters));
                    std::vector<bool> orientation;
                    for (int j = 0; j < n; ++j) {
                        if (j == i) continue;
                        orientation.push_back(prof.voter(j).prefers(x, y));
                    }
                    const Rational delta =
                        evaluate(rule, prof.with_voter(i, pi_swapped)).mass_of(y) -
                        evaluate(rule, prof).mass_of(y);
                    auto [it, inserted] = reference.try_emplace(orientation, delta, prof);
                    if (!inserted && it->second.first != delta) {
                        const Rational gap = delta > it->second.first ? delta - it->second.first
                                                                      : it->second.first - delta;
                        report.measured_eps = std::max(report.measured_eps, gap);
                        report.verdict = Verdict::fail;
                        report.witness = {{"voter", i},
                                          {"ballot", pi.to_string()},
                                          {"swapped", {x, y}},
                                          {"profile_a", profile_json(it->second.second)},
                                          {"profile_b", profile_json(prof)},
                                          {"delta_a", rational_to_string(it->second.first)},
                                          {"delta_b", rational_to_string(delta)}};
                        failed = true;
                        return false;
                    }
                    return true;
                });
                if (failed) return report;
            }
        }
    }
    report.verdict = Verdict::pass;
    return report;
}

namespace {

/// Canonical profile for v': j voters rank x first (others in index order),
/// n-j voters use index order with x moved to the bottom.
Profile vprime_profile(int n, int m, Candidate x, int j) {
    std::vector<Candidate> top_ranking{x};
    for (Candidate c = 0; c < m; ++c)
        if (c != x) top_ranking.push_back(c);
    std::vector<Candidate> bottom_ranking;
    for (Candidate c = 0; c < m; ++c)
        if (c != x) bottom_ranking.push_back(c);
    bottom_ranking.push_back(x);

    std::vector<PreferenceOrdering> voters;
    voters.reserve(n);
    for (int i = 0; i < j; ++i) voters.emplace_back(top_ranking);
    for (int i = j; i < n; ++i) voters.emplace_back(bottom_ranking);
    return Profile(std::move(voters));
}

}  // namespace

VPrimeTable build_vprime(const VotingRuleSpec& rule, int n, int m) {
    VPrimeTable table;
    table.n = n;
    table.m = m;
    table.entries.assign(m, std::vector<Rational>(n + 1));
    for (Candidate x = 0; x < m; ++x)
        for (int j = 0; j <= n; ++j)
            table.entries[x][j] = evaluate(rule, vprime_profile(n, m, x, j)).mass_of(x);
    return table;
}

Rational closeness(const VotingRuleSpec& rule1, const VotingRuleSpec& rule2, int n, int m,
                   long long budget) {
    check_profile_budget(n, m, budget, "closeness");
    Rational worst = 0;
    for_each_profile(n, all_orderings(m), [&](const Profile& prof) {
        const CandidateDistribution d1 = evaluate(rule1, prof);
        const CandidateDistribution d2 = evaluate(rule2, prof);
        for (Candidate x = 0; x < m; ++x) {
            const Rational diff = d1.mass_of(x) > d2.mass_of(x) ? d1.mass_of(x) - d2.mass_of(x)
                                                                : d2.mass_of(x) - d1.mass_of(x);
            worst = std::max(worst, diff);
        }
        return true;
    });
    return worst;
}

MonteCarloEstimate elimination_pivotality_mc(const EliminationRuleSpec& elim, const Belief& phi,
                                             int n, long long trials, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const auto reports = all_orderings(phi.candidates());
    long long pivotal = 0;
    for (long long t = 0; t < trials; ++t) {
        std::optional<CountedProfile> others;
        if (n > 1) others = sample_counted_profile(phi, n - 1, seed, t);
        std::optional<CandidateSet> first;
        for (const auto& r : reports) {
            const CountedProfile prof =
                others ? others->with_ballot(r) : CountedProfile({r}, {1});
            CandidateSet survivors = eliminate(elim, prof);
            if (!first) {
                first = std::move(survivors);
            } else if (survivors != *first) {
                ++pivotal;
                break;
            }
        }
    }
    MonteCarloEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.estimate = static_cast<double>(pivotal) / static_cast<double>(trials);
    const double p = est.estimate;
    est.ci_halfwidth = kZ99 * std::sqrt(std::max(0.0, p * (1 - p) / static_cast<double>(trials)));
    return est;
}

int inversions_between(const PreferenceOrdering& a, const PreferenceOrdering& b) {
    const auto cset = a.candidate_set();
    if (cset != b.candidate_set())
        throw std::invalid_argument("orderings over different candidate sets");
    int count = 0;
    for (std::size_t i = 0; i < cset.size(); ++i)
        for (std::size_t j = i + 1; j < cset.size(); ++j)
            if (a.prefers(cset[i], cset[j]) != b.prefers(cset[i], cset[j])) ++count;
    return count;
}

PropertyReport strict_sp_margin_punishing(int n, int m, const Rational& alpha, long long budget) {
    PropertyReport report;
    report.property = "strict-punishing-margin";
    if (n < 1 || m < 2) throw std::invalid_argument("need n >= 1 and m >= 2");

    const auto orderings = all_orderings(m);
    const int K = static_cast<int>(orderings.size());
    if (compositions_count(n - 1, K) > budget)
        throw BudgetExceeded("strict_sp_margin_punishing: profile space exceeds budget");

    const VotingRuleSpec punishing{PunishingRule{}};
    const Rational per_inversion = Rational(2) * alpha / (Rational(n) * m * (m - 1));

    // utilities grouped by the ordering they are consistent with
    std::vector<std::vector<UtilityFunction>> utilities(K);
    long long utility_count = 0;
    for (int r = 0; r < K; ++r) {
        utilities[r] = consistent_grid_utilities(orderings[r], alpha, alpha);
        utility_count += static_cast<long long>(utilities[r].size());
    }
    std::vector<std::vector<int>> inversions(K, std::vector<int>(K));
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b) inversions[a][b] = inversions_between(orderings[a], orderings[b]);

    bool first_slack = true;
    Rational min_slack = 0;
    bool failed = false;
    std::vector<long long> current;
    for_each_composition(n - 1, K, current, [&](const std::vector<long long>& counts) {
        if (failed) return;
        // distribution when the reporting voter appends each possible ballot
        std::vector<CandidateDistribution> dist_for(K);
        for (int r = 0; r < K; ++r) {
            std::vector<PreferenceOrdering> types;
            std::vector<long long> type_counts;
            for (int j = 0; j < K; ++j) {
                if (counts[j] == 0) continue;
                types.push_back(orderings[j]);
                type_counts.push_back(counts[j]);
            }
            types.push_back(orderings[r]);
            type_counts.push_back(1);
            dist_for[r] = evaluate(punishing, CountedProfile(std::move(types), std::move(type_counts)));
        }
        for (int truth = 0; truth < K && !failed; ++truth) {
            for (const auto& u : utilities[truth]) {
                const Rational truthful = expected_utility(u, dist_for[truth]);
                for (int lie = 0; lie < K; ++lie) {
                    if (lie == truth) continue;
                    const Rational bound = Rational(inversions[truth][lie]) * per_inversion;
                    const Rational slack = truthful - expected_utility(u, dist_for[lie]) - bound;
                    if (first_slack || slack < min_slack) {
                        min_slack = slack;
                        first_slack = false;
                    }
                    if (slack < 0) {
                        report.verdict = Verdict::fail;
                        nlohmann::json others = nlohmann::json::object();
                        for (int j = 0; j < K; ++j)
                            if (counts[j] > 0) others[orderings[j].to_string()] = counts[j];
                        report.witness = {{"other_ballots", others},
                                          {"true_ordering", orderings[truth].to_string()},
                                          {"lie", orderings[lie].to_string()},
                                          {"utility", u.to_string()},
                                          {"shortfall", rational_to_string(-slack)}};
                        failed = true;
                        break;
                    }
                }
                if (failed) break;
            }
        }
    });
    if (failed) {
        report.measured_eps = -min_slack;
        return report;
    }
    report.verdict = Verdict::pass;
    report.measured_eps = 0;
    report.notes = "minimum slack over all instances: " +
                   (first_slack ? std::string("n/a (no utilities on grid)")
                                : rational_to_string(min_slack)) +
                   "; utilities checked per ordering: " +
                   std::to_string(utility_count / K);
    return report;
}

nlohmann::json to_json(const PropertyReport& report) {
    return nlohmann::json{{"property", report.property},
                          {"verdict", verdict_name(report.verdict)},
                          {"pass", report.pass()},
                          {"measured_eps", rational_to_string(report.measured_eps)},
                          {"witness", report.witness},
                          {"notes", report.notes}};
}

nlohmann::json to_json(const ManipulationReport& report) {
    nlohmann::json j{{"true_ordering", report.true_ordering.to_string()},
                     {"best_lie", report.best_lie.to_string()}};
    if (report.mode == EvalMode::exact) {
        j["mode"] = "exact";
        j["truthful_eu"] = rational_to_string(report.truthful_eu);
        j["best_gain"] = rational_to_string(report.best_gain);
    } else {
        j["mode"] = "monte-carlo";
        j["trials"] = report.gain_estimate.trials;
        j["seed"] = report.gain_estimate.seed;
        j["truthful_eu_estimate"] = report.truthful_estimate.estimate;
        j["truthful_eu_ci"] = report.truthful_estimate.ci_halfwidth;
        j["best_gain_estimate"] = report.gain_estimate.estimate;
        j["best_gain_ci"] = report.gain_estimate.ci_halfwidth;
    }
    return j;
}

nlohmann::json to_json(const VPrimeTable& table) {
    nlohmann::json entries = nlohmann::json::array();
    for (Candidate x = 0; x < table.m; ++x) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j <= table.n; ++j) row.push_back(rational_to_string(table.at(x, j)));
        entries.push_back(row);
    }
    return nlohmann::json{{"n", table.n}, {"m", table.m}, {"vprime", entries}};
}

std::string vprime_to_csv(const VPrimeTable& table) {
    std::string out = "x,j,vprime\n";
    for (Candidate x = 0; x < table.m; ++x)
        for (int j = 0; j <= table.n; ++j)
            out += std::to_string(x) + "," + std::to_string(j) + "," +
                   rational_to_string(table.at(x, j)) + "\n";
    return out;
}

}  // namespace coarsevote
