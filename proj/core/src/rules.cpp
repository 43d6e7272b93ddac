#include "coarsevote/rules.hpp"

#include <algorithm>
#include <cmath>

namespace coarsevote {

double margin_threshold(long long n, const Rational& delta) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(delta > 0 && delta < Rational(1, 2)))
        throw InvalidSpec("delta must lie in (0, 1/2)");
    return std::pow(static_cast<double>(n), 0.5 + to_double(delta));
}

MarginPolicy MarginPolicy::asymptotic(const Rational& delta) {
    if (!(delta > 0 && delta < Rational(1, 2)))
        throw InvalidSpec("delta must lie in (0, 1/2)");
    MarginPolicy p;
    p.asymptotic_ = true;
    p.delta_ = delta;
    return p;
}

MarginPolicy MarginPolicy::explicit_threshold(const Rational& t) {
    if (t < 0) throw InvalidSpec("explicit margin must be >= 0");
    MarginPolicy p;
    p.asymptotic_ = false;
    p.threshold_ = t;
    return p;
}

bool MarginPolicy::within(long long gap, long long n) const {
    if (asymptotic_)
        return static_cast<double>(gap) <= margin_threshold(n, delta_);
    return Rational(gap) <= threshold_;
}

Rational resolve_mix_weight(const MixWeightPolicy& policy, long long n) {
    if (const auto* fixed = std::get_if<FixedMixWeight>(&policy)) {
        if (fixed->q < 0 || fixed->q > 1) throw InvalidSpec("mixing weight outside [0,1]");
        return fixed->q;
    }
    const auto& decay = std::get<DecayMixWeight>(policy);
    if (decay.c <= 0) throw InvalidSpec("decay constant must be positive");
    if (!(decay.delta > 0 && decay.delta < Rational(1, 2)))
        throw InvalidSpec("delta must lie in (0, 1/2)");
    double q = std::exp(-decay.c * std::pow(static_cast<double>(n), 2.0 * to_double(decay.delta)));
    return rational_from_double(q);
}

namespace {

void check_points(const std::vector<long long>& points, int m) {
    if (static_cast<int>(points.size()) != m)
        throw InvalidSpec("points vector length must equal the number of candidates");
    for (long long p : points)
        if (p < 0) throw InvalidSpec("points must be nonnegative");
}

void check_margin(const MarginPolicy&) {
    // construction already validated; placeholder for symmetry
}

struct SpecValidator {
    int m;

    void operator()(const PluralityRule&) const {}
    void operator()(const ScoringRule& r) const { check_points(r.points, m); }
    void operator()(const BordaRule&) const {}
    void operator()(const RandomDictatorshipRule&) const {}
    void operator()(const PunishingRule&) const {}
    void operator()(const RepeatedPluralityElimRule& r) const { check_margin(r.margin); }
    void operator()(const ApproxIrvRule& r) const { check_margin(r.margin); }
    void operator()(const ScoreElimRule& r) const {
        check_points(r.points, m);
        if (r.selection_dist && r.selection_dist->m() != m)
            throw InvalidSpec("selection distribution has wrong candidate count");
    }
    void operator()(const FrameworkRule& r) const {
        if (const auto* score = std::get_if<ScoreMarginElimSpec>(&r.elimination))
            check_points(score->points, m);
        if (const auto* fixed = std::get_if<FixedDistributionSelectSpec>(&r.selection))
            if (fixed->dist && fixed->dist->m() != m)
                throw InvalidSpec("selection distribution has wrong candidate count");
    }
    void operator()(const MixedRule& r) const {
        if (!r.base) throw InvalidSpec("mixed rule has no base");
        validate_spec(*r.base, m);
        if (const auto* fixed = std::get_if<FixedMixWeight>(&r.weight))
            if (fixed->q < 0 || fixed->q > 1) throw InvalidSpec("mixing weight outside [0,1]");
    }
};

}  // namespace

void validate_spec(const VotingRuleSpec& rule, int m) {
    if (m < 1) throw InvalidSpec("need at least one candidate");
    std::visit(SpecValidator{m}, rule.rule);
}

namespace {

long long max_count(const std::map<Candidate, long long>& counts) {
    long long best = counts.begin()->second;
    for (const auto& [c, k] : counts) best = std::max(best, k);
    return best;
}

long long min_count(const std::map<Candidate, long long>& counts) {
    long long best = counts.begin()->second;
    for (const auto& [c, k] : counts) best = std::min(best, k);
    return best;
}

/// Lowest-index candidate among those attaining the maximum.
Candidate argmax_candidate(const std::map<Candidate, long long>& counts) {
    Candidate winner = -1;
    long long best = -1;
    for (const auto& [c, k] : counts) {
        if (k > best) {
            best = k;
            winner = c;
        }
    }
    return winner;
}

}  // namespace

CandidateSet eliminate_repeated_plurality(const CountedProfile& prof, const MarginPolicy& margin) {
    const long long n = prof.n();
    CountedProfile current = prof;
    CandidateSet alive = prof.candidate_set();
    while (alive.size() > 1) {
        const auto counts = top_counts(current);
        const long long maxc = max_count(counts);
        CandidateSet survivors;
        for (const auto& [c, k] : counts)
            if (margin.within(maxc - k, n)) survivors.push_back(c);
        if (survivors.size() == alive.size()) break;
        alive = survivors;
        current = current.restricted_to(alive);
    }
    return alive;
}

CandidateSet eliminate_repeated_plurality(const Profile& prof, const MarginPolicy& margin) {
    return eliminate_repeated_plurality(CountedProfile(prof), margin);
}

CandidateSet eliminate_approx_irv(const CountedProfile& prof, const MarginPolicy& margin) {
    const long long n = prof.n();
    CountedProfile current = prof;
    CandidateSet alive = prof.candidate_set();
    while (true) {
        const auto counts = top_counts(current);
        const long long minc = min_count(counts);
        CandidateSet survivors;
        for (const auto& [c, k] : counts)
            if (!margin.within(k - minc, n)) survivors.push_back(c);
        if (survivors.empty()) return alive;  // eliminating everyone: stop instead
        alive = survivors;
        current = current.restricted_to(alive);
    }
}

CandidateSet eliminate_approx_irv(const Profile& prof, const MarginPolicy& margin) {
    return eliminate_approx_irv(CountedProfile(prof), margin);
}

std::map<Candidate, long long> positional_scores(const CountedProfile& prof,
                                                 const std::vector<long long>& points) {
    std::map<Candidate, long long> scores;
    for (Candidate c : prof.candidate_set()) scores[c] = 0;
    for (std::size_t i = 0; i < prof.types().size(); ++i) {
        const auto& ranking = prof.types()[i].ranking();
        for (std::size_t pos = 0; pos < ranking.size(); ++pos)
            scores[ranking[pos]] += prof.counts()[i] * points.at(pos);
    }
    return scores;
}

CandidateSet eliminate_by_score(const CountedProfile& prof, const std::vector<long long>& points,
                                const MarginPolicy& margin) {
    check_points(points, static_cast<int>(prof.candidate_set().size()));
    const auto scores = positional_scores(prof, points);
    const long long maxs = max_count(scores);
    CandidateSet survivors;
    for (const auto& [c, s] : scores)
        if (margin.within(maxs - s, prof.n())) survivors.push_back(c);
    return survivors;
}

CandidateSet eliminate_by_score(const Profile& prof, const std::vector<long long>& points,
                                const MarginPolicy& margin) {
    return eliminate_by_score(CountedProfile(prof), points, margin);
}

CandidateSet eliminate(const EliminationRuleSpec& spec, const CountedProfile& prof) {
    return std::visit(
        [&](const auto& s) -> CandidateSet {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RepeatedPluralityElimSpec>)
                return eliminate_repeated_plurality(prof, s.margin);
            else if constexpr (std::is_same_v<T, ApproxIrvElimSpec>)
                return eliminate_approx_irv(prof, s.margin);
            else
                return eliminate_by_score(prof, s.points, s.margin);
        },
        spec);
}

CandidateDistribution plurality_select(const CountedProfile& prof, int m) {
    return CandidateDistribution::point_mass(m, argmax_candidate(top_counts(prof)));
}

CandidateDistribution plurality_select(const Profile& prof, int m) {
    return plurality_select(CountedProfile(prof), m);
}

CandidateDistribution punishing_distribution(const CountedProfile& prof) {
    const CandidateSet cset = prof.candidate_set();
    const int m = static_cast<int>(cset.size());
    if (cset != full_candidate_set(m))
        throw std::invalid_argument("punishing rule expects a full-set profile");
    if (m == 1) return CandidateDistribution::point_mass(1, 0);
    const Rational denom = Rational(static_cast<long long>(m) * (m - 1), 2);  // sum of (m - j)
    std::vector<Rational> mass(m, Rational(0));
    for (std::size_t i = 0; i < prof.types().size(); ++i) {
        const auto& ranking = prof.types()[i].ranking();
        for (int pos = 0; pos < m; ++pos)
            mass[ranking[pos]] += Rational(prof.counts()[i]) * Rational(m - (pos + 1)) / denom;
    }
    for (auto& p : mass) p /= prof.n();
    return CandidateDistribution(std::move(mass));
}

CandidateDistribution punishing_distribution(const Profile& prof) {
    return punishing_distribution(CountedProfile(prof));
}

CandidateDistribution random_dictatorship_distribution(const CountedProfile& prof) {
    const CandidateSet cset = prof.candidate_set();
    const int m = static_cast<int>(cset.size());
    if (cset != full_candidate_set(m))
        throw std::invalid_argument("random dictatorship expects a full-set profile");
    const auto counts = top_counts(prof);
    std::vector<Rational> mass(m, Rational(0));
    for (const auto& [c, k] : counts) mass[c] = Rational(k, prof.n());
    return CandidateDistribution(std::move(mass));
}

CandidateDistribution random_dictatorship_distribution(const Profile& prof) {
    return random_dictatorship_distribution(CountedProfile(prof));
}

VotingRuleSpec compose_framework(EliminationRuleSpec elimination, SelectionRuleSpec selection) {
    return VotingRuleSpec{FrameworkRule{std::move(elimination), std::move(selection)}};
}

VotingRuleSpec mix(VotingRuleSpec base, const Rational& q) {
    if (q < 0 || q > 1) throw InvalidSpec("mixing weight outside [0,1]");
    return VotingRuleSpec{
        MixedRule{std::make_shared<const VotingRuleSpec>(std::move(base)), FixedMixWeight{q}}};
}

namespace {

struct Evaluator {
    const CountedProfile& prof;
    int m;

    CandidateDistribution scoring(const std::vector<long long>& points) const {
        return CandidateDistribution::point_mass(m,
                                                 argmax_candidate(positional_scores(prof, points)));
    }

    CandidateDistribution operator()(const PluralityRule&) const {
        return scoring(plurality_points(m));
    }
    CandidateDistribution operator()(const ScoringRule& r) const { return scoring(r.points); }
    CandidateDistribution operator()(const BordaRule&) const { return scoring(borda_points(m)); }
    CandidateDistribution operator()(const RandomDictatorshipRule&) const {
        return random_dictatorship_distribution(prof);
    }
    CandidateDistribution operator()(const PunishingRule&) const {
        return punishing_distribution(prof);
    }

    // Direct implementation: margin loop, restriction, and final plurality in
    // one pass. The framework composition below is the independent route the
    // equivalence tests compare against.
    CandidateDistribution operator()(const RepeatedPluralityElimRule& r) const {
        const long long n = prof.n();
        CountedProfile current = prof;
        CandidateSet alive = prof.candidate_set();
        while (alive.size() > 1) {
            const auto counts = top_counts(current);
            const long long maxc = max_count(counts);
            CandidateSet survivors;
            for (const auto& [c, k] : counts)
                if (r.margin.within(maxc - k, n)) survivors.push_back(c);
            if (survivors.size() == alive.size()) break;
            alive = survivors;
            current = current.restricted_to(alive);
        }
        return CandidateDistribution::point_mass(m, argmax_candidate(top_counts(current)));
    }

    CandidateDistribution operator()(const ApproxIrvRule& r) const {
        const long long n = prof.n();
        CountedProfile current = prof;
        while (true) {
            const auto counts = top_counts(current);
            const long long minc = min_count(counts);
            CandidateSet survivors;
            for (const auto& [c, k] : counts)
                if (!r.margin.within(k - minc, n)) survivors.push_back(c);
            if (survivors.empty()) break;
            current = current.restricted_to(survivors);
        }
        return CandidateDistribution::point_mass(m, argmax_candidate(top_counts(current)));
    }

    CandidateDistribution operator()(const ScoreElimRule& r) const {
        const CandidateSet survivors = eliminate_by_score(prof, r.points, r.margin);
        if (r.plurality_when_two && survivors.size() == 2)
            return plurality_select(prof.restricted_to(survivors), m);
        const CandidateDistribution base =
            r.selection_dist ? *r.selection_dist : CandidateDistribution::uniform(m);
        return base.conditioned_on(survivors);
    }

    CandidateDistribution operator()(const FrameworkRule& r) const {
        const CandidateSet survivors = eliminate(r.elimination, prof);
        const CountedProfile restricted = prof.restricted_to(survivors);
        return std::visit(
            [&](const auto& sel) -> CandidateDistribution {
                using T = std::decay_t<decltype(sel)>;
                if constexpr (std::is_same_v<T, PluralitySelectSpec>) {
                    return plurality_select(restricted, m);
                } else {
                    const CandidateDistribution base =
                        sel.dist ? *sel.dist : CandidateDistribution::uniform(m);
                    return base.conditioned_on(survivors);
                }
            },
            r.selection);
    }

    CandidateDistribution operator()(const MixedRule& r) const {
        const Rational q = resolve_mix_weight(r.weight, prof.n());
        const CandidateDistribution base = evaluate(*r.base, prof);
        return mix_distributions(base, punishing_distribution(prof), q);
    }
};

}  // namespace

CandidateDistribution evaluate(const VotingRuleSpec& rule, const CountedProfile& prof) {
    const CandidateSet cset = prof.candidate_set();
    const int m = static_cast<int>(cset.size());
    if (cset != full_candidate_set(m))
        throw std::invalid_argument("evaluate expects a profile over the full candidate set");
    validate_spec(rule, m);
    return std::visit(Evaluator{prof, m}, rule.rule);
}

CandidateDistribution evaluate(const VotingRuleSpec& rule, const Profile& prof) {
    return evaluate(rule, CountedProfile(prof));
}

std::vector<long long> plurality_points(int m) {
    std::vector<long long> points(m, 0);
    points[0] = 1;
    return points;
}

std::vector<long long> borda_points(int m) {
    std::vector<long long> points(m);
    for (int i = 0; i < m; ++i) points[i] = m - i;
    return points;
}

VotingRuleSpec make_preset(const std::string& name, int m, const PresetParams& params) {
    if (m < 1) throw InvalidSpec("need at least one candidate");
    if (name == "plurality") return VotingRuleSpec{PluralityRule{}};
    if (name == "borda") return VotingRuleSpec{BordaRule{}};
    if (name == "vdict") return VotingRuleSpec{RandomDictatorshipRule{}};
    if (name == "vpunish") return VotingRuleSpec{PunishingRule{}};
    if (name == "vpl")
        return VotingRuleSpec{RepeatedPluralityElimRule{MarginPolicy::asymptotic(params.delta)}};
    if (name == "virv")
        return VotingRuleSpec{ApproxIrvRule{MarginPolicy::asymptotic(params.delta)}};
    if (name == "vscore")
        return VotingRuleSpec{ScoreElimRule{borda_points(m), MarginPolicy::asymptotic(params.delta),
                                            std::nullopt, false}};
    if (name == "vpl-prime") {
        auto base = std::make_shared<const VotingRuleSpec>(
            VotingRuleSpec{RepeatedPluralityElimRule{MarginPolicy::asymptotic(params.delta)}});
        return VotingRuleSpec{MixedRule{base, DecayMixWeight{params.mix_c, params.delta}}};
    }
    if (name == "virv-prime") {
        auto base = std::make_shared<const VotingRuleSpec>(
            VotingRuleSpec{ApproxIrvRule{MarginPolicy::asymptotic(params.delta)}});
        return VotingRuleSpec{MixedRule{base, DecayMixWeight{params.mix_c, params.delta}}};
    }
    if (name == "uniform-const") {
        // keep-all elimination, then a fixed uniform selection
        const Rational huge("1000000000000000000");
        return compose_framework(
            ScoreMarginElimSpec{plurality_points(m), MarginPolicy::explicit_threshold(huge)},
            FixedDistributionSelectSpec{std::nullopt});
    }
    throw InvalidSpec("unknown preset: '" + name + "'");
}

double advisory_min_voters(const Rational& alpha, const Rational& delta) {
    if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
    if (!(delta > 0 && delta < Rational(1, 2)))
        throw InvalidSpec("delta must lie in (0, 1/2)");
    const double exponent = std::ceil(1.0 / (0.5 - to_double(delta)));
    return std::pow(3.0 / to_double(alpha) + 1.0, exponent);
}

}  // namespace coarsevote
