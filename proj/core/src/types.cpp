#include "coarsevote/types.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace coarsevote {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

PreferenceOrdering::PreferenceOrdering(std::vector<Candidate> ranking)
    : ranking_(std::move(ranking)) {
    require(!ranking_.empty(), "ordering must rank at least one candidate");
    std::set<Candidate> seen;
    for (Candidate c : ranking_) {
        require(c >= 0, "negative candidate index");
        require(seen.insert(c).second, "duplicate candidate in ordering");
    }
}

Candidate PreferenceOrdering::top() const {
    if (ranking_.empty()) throw std::logic_error("top() of empty ordering");
    return ranking_.front();
}

int PreferenceOrdering::rank_of(Candidate c) const {
    for (std::size_t i = 0; i < ranking_.size(); ++i)
        if (ranking_[i] == c) return static_cast<int>(i) + 1;
    throw std::invalid_argument("candidate not in ordering");
}

bool PreferenceOrdering::contains(Candidate c) const {
    return std::find(ranking_.begin(), ranking_.end(), c) != ranking_.end();
}

bool PreferenceOrdering::prefers(Candidate x, Candidate y) const {
    return rank_of(x) < rank_of(y);
}

CandidateSet PreferenceOrdering::candidate_set() const {
    CandidateSet s = ranking_;
    std::sort(s.begin(), s.end());
    return s;
}

PreferenceOrdering PreferenceOrdering::restricted_to(const CandidateSet& keep) const {
    if (keep.empty()) throw EmptyRestriction();
    require(is_subset(keep, candidate_set()), "restriction set is not a subset of the ordering");
    std::vector<Candidate> kept;
    kept.reserve(keep.size());
    for (Candidate c : ranking_)
        if (std::binary_search(keep.begin(), keep.end(), c)) kept.push_back(c);
    return PreferenceOrdering(std::move(kept));
}

std::string PreferenceOrdering::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < ranking_.size(); ++i) {
        if (i) out << '>';
        out << ranking_[i];
    }
    return out.str();
}

PreferenceOrdering PreferenceOrdering::from_string(const std::string& s) {
    std::vector<Candidate> ranking;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find('>', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad ordering string: '" + s + "'");
        ranking.push_back(std::stoi(tok));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return PreferenceOrdering(std::move(ranking));
}

Candidate top(const PreferenceOrdering& p) { return p.top(); }

PreferenceOrdering restrict_ordering(const PreferenceOrdering& p, const CandidateSet& keep) {
    return p.restricted_to(keep);
}

std::vector<PreferenceOrdering> all_orderings(const CandidateSet& candidates) {
    std::vector<Candidate> seq = candidates;
    std::sort(seq.begin(), seq.end());
    std::vector<PreferenceOrdering> out;
    do {
        out.emplace_back(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

std::vector<PreferenceOrdering> all_orderings(int m) {
    return all_orderings(full_candidate_set(m));
}

Profile::Profile(std::vector<PreferenceOrdering> voters) : voters_(std::move(voters)) {
    require(!voters_.empty(), "profile needs at least one voter");
    const CandidateSet ref = voters_.front().candidate_set();
    for (const auto& p : voters_)
        require(p.candidate_set() == ref, "voters must share one candidate set");
}

CandidateSet Profile::candidate_set() const { return voters_.front().candidate_set(); }

Profile Profile::restricted_to(const CandidateSet& keep) const {
    std::vector<PreferenceOrdering> out;
    out.reserve(voters_.size());
    for (const auto& p : voters_) out.push_back(p.restricted_to(keep));
    return Profile(std::move(out));
}

Profile Profile::with_voter(int i, PreferenceOrdering p) const {
    std::vector<PreferenceOrdering> out = voters_;
    out.at(i) = std::move(p);
    return Profile(std::move(out));
}

Profile restrict_profile(const Profile& prof, const CandidateSet& keep) {
    return prof.restricted_to(keep);
}

CountedProfile::CountedProfile(const Profile& prof) {
    std::map<PreferenceOrdering, long long> tally;
    for (const auto& p : prof.voters()) ++tally[p];
    for (auto& [p, c] : tally) {
        types_.push_back(p);
        counts_.push_back(c);
    }
    n_ = prof.n();
}

CountedProfile::CountedProfile(std::vector<PreferenceOrdering> types, std::vector<long long> counts)
    : types_(std::move(types)), counts_(std::move(counts)) {
    require(types_.size() == counts_.size(), "types/counts size mismatch");
    normalize();
}

void CountedProfile::normalize() {
    std::map<PreferenceOrdering, long long> tally;
    for (std::size_t i = 0; i < types_.size(); ++i) {
        require(counts_[i] >= 0, "negative ballot count");
        if (counts_[i] > 0) tally[types_[i]] += counts_[i];
    }
    require(!tally.empty(), "profile needs at least one voter");
    const CandidateSet ref = tally.begin()->first.candidate_set();
    types_.clear();
    counts_.clear();
    n_ = 0;
    for (auto& [p, c] : tally) {
        require(p.candidate_set() == ref, "voters must share one candidate set");
        types_.push_back(p);
        counts_.push_back(c);
        n_ += c;
    }
}

CandidateSet CountedProfile::candidate_set() const { return types_.front().candidate_set(); }

CountedProfile CountedProfile::restricted_to(const CandidateSet& keep) const {
    std::vector<PreferenceOrdering> types;
    types.reserve(types_.size());
    for (const auto& p : types_) types.push_back(p.restricted_to(keep));
    return CountedProfile(std::move(types), counts_);
}

CountedProfile CountedProfile::with_ballot(const PreferenceOrdering& p, long long count) const {
    std::vector<PreferenceOrdering> types = types_;
    std::vector<long long> counts = counts_;
    types.push_back(p);
    counts.push_back(count);
    return CountedProfile(std::move(types), std::move(counts));
}

Profile CountedProfile::expand() const {
    std::vector<PreferenceOrdering> voters;
    voters.reserve(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < types_.size(); ++i)
        for (long long k = 0; k < counts_[i]; ++k) voters.push_back(types_[i]);
    return Profile(std::move(voters));
}

std::map<Candidate, long long> top_counts(const CountedProfile& prof) {
    std::map<Candidate, long long> counts;
    for (Candidate c : prof.candidate_set()) counts[c] = 0;
    for (std::size_t i = 0; i < prof.types().size(); ++i)
        counts[prof.types()[i].top()] += prof.counts()[i];
    return counts;
}

std::map<Candidate, long long> top_counts(const Profile& prof) {
    return top_counts(CountedProfile(prof));
}

UtilityFunction::UtilityFunction(std::vector<Rational> values) : values_(std::move(values)) {
    require(!values_.empty(), "utility over an empty candidate set");
    for (const auto& v : values_)
        require(v >= 0 && v <= 1, "utility value outside [0,1]");
}

Rational UtilityFunction::min_gap() const {
    Rational best = 0;
    bool found = false;
    for (std::size_t i = 0; i < values_.size(); ++i)
        for (std::size_t j = i + 1; j < values_.size(); ++j) {
            Rational gap = values_[i] > values_[j] ? values_[i] - values_[j]
                                                   : values_[j] - values_[i];
            if (gap > 0 && (!found || gap < best)) {
                best = gap;
                found = true;
            }
        }
    return best;
}

std::string UtilityFunction::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ",";
        out += rational_to_string(values_[i]);
    }
    return out;
}

bool is_consistent(const UtilityFunction& u, const PreferenceOrdering& p) {
    const auto& ranking = p.ranking();
    if (static_cast<int>(ranking.size()) != u.m()) return false;
    for (std::size_t i = 0; i + 1 < ranking.size(); ++i)
        if (!(u.value(ranking[i]) > u.value(ranking[i + 1]))) return false;
    return true;
}

bool is_alpha_coarse_utility(const UtilityFunction& u, const Rational& alpha) {
    require(alpha > 0, "alpha must be positive");
    for (int i = 0; i < u.m(); ++i)
        for (int j = i + 1; j < u.m(); ++j) {
            Rational gap = u.value(i) > u.value(j) ? u.value(i) - u.value(j)
                                                   : u.value(j) - u.value(i);
            if (gap != 0 && gap < alpha) return false;
        }
    return true;
}

CandidateDistribution::CandidateDistribution(std::vector<Rational> mass) : mass_(std::move(mass)) {
    require(!mass_.empty(), "distribution over an empty candidate set");
    Rational total = 0;
    for (const auto& p : mass_) {
        require(p >= 0 && p <= 1, "mass outside [0,1]");
        total += p;
    }
    require(total == 1, "masses must sum to exactly 1");
}

CandidateDistribution CandidateDistribution::point_mass(int m, Candidate c) {
    std::vector<Rational> mass(m, Rational(0));
    mass.at(c) = 1;
    return CandidateDistribution(std::move(mass));
}

CandidateDistribution CandidateDistribution::uniform(int m) {
    return CandidateDistribution(std::vector<Rational>(m, Rational(1, m)));
}

CandidateDistribution CandidateDistribution::uniform_over(int m, const CandidateSet& support) {
    if (support.empty()) throw EmptyRestriction();
    std::vector<Rational> mass(m, Rational(0));
    for (Candidate c : support) mass.at(c) = Rational(1, static_cast<int>(support.size()));
    return CandidateDistribution(std::move(mass));
}

CandidateDistribution CandidateDistribution::conditioned_on(const CandidateSet& keep) const {
    if (keep.empty()) throw EmptyRestriction();
    Rational kept = 0;
    for (Candidate c : keep) kept += mass_.at(c);
    if (kept == 0) return uniform_over(m(), keep);
    std::vector<Rational> mass(mass_.size(), Rational(0));
    for (Candidate c : keep) mass[c] = mass_[c] / kept;
    return CandidateDistribution(std::move(mass));
}

CandidateDistribution mix_distributions(const CandidateDistribution& a,
                                        const CandidateDistribution& b, const Rational& q) {
    if (a.m() != b.m()) throw std::invalid_argument("mixing distributions of different sizes");
    if (q < 0 || q > 1) throw std::invalid_argument("mixing weight outside [0,1]");
    std::vector<Rational> mass(a.m());
    for (int c = 0; c < a.m(); ++c)
        mass[c] = (Rational(1) - q) * a.mass_of(c) + q * b.mass_of(c);
    return CandidateDistribution(std::move(mass));
}

Rational expected_utility(const UtilityFunction& u, const CandidateDistribution& d) {
    if (u.m() != d.m()) throw std::invalid_argument("utility/distribution size mismatch");
    Rational eu = 0;
    for (int c = 0; c < d.m(); ++c) eu += u.value(c) * d.mass_of(c);
    return eu;
}

CandidateSet full_candidate_set(int m) {
    if (m < 1) throw std::invalid_argument("need at least one candidate");
    CandidateSet s(m);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

bool is_subset(const CandidateSet& a, const CandidateSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace coarsevote
