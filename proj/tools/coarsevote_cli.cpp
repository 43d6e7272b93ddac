// coarsevote: evaluate voting rules on ballot files, form beliefs from
// observations, and run the verification checkers.
//
// Exit codes: 0 ok/pass, 1 check failed, 2 parse error, 3 invalid rule spec,
// 4 inconclusive (Monte Carlo could not separate the estimate from the
// threshold).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <coarsevote/analysis.hpp>
#include <coarsevote/json_io.hpp>

using namespace coarsevote;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitSpec = 3;
constexpr int kExitInconclusive = 4;

long long default_budget() {
    if (const char* env = std::getenv("COARSEVOTE_BUDGET")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring unparsable COARSEVOTE_BUDGET\n";
    }
    return kDefaultEnumerationBudget;
}

bool is_preset_name(const std::string& name) {
    static const char* names[] = {"plurality", "borda",     "vdict",     "vpunish",
                                  "vpl",       "virv",      "vscore",    "vpl-prime",
                                  "virv-prime", "uniform-const"};
    for (const char* n : names)
        if (name == n) return true;
    return false;
}

VotingRuleSpec resolve_rule(const std::string& spec, int m, const Rational& delta, double mix_c) {
    if (is_preset_name(spec)) {
        PresetParams params;
        params.delta = delta;
        params.mix_c = mix_c;
        return make_preset(spec, m, params);
    }
    return parse_rule(load_json_file(spec));
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot write to " + out_path);
    out << text << "\n";
}

std::string format_double(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

int report_exit(const PropertyReport& report, const std::string& out_path) {
    write_output(to_json(report).dump(2), out_path);
    switch (report.verdict) {
        case Verdict::pass: return kExitPass;
        case Verdict::fail: return kExitFail;
        case Verdict::inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

struct RangeSpec {
    long long lo = 0, hi = 0, step = 1;
};

RangeSpec parse_range(const std::string& s) {
    RangeSpec r;
    const auto a = s.find(':');
    if (a == std::string::npos) {
        r.lo = r.hi = std::stoll(s);
        return r;
    }
    const auto b = s.find(':', a + 1);
    r.lo = std::stoll(s.substr(0, a));
    if (b == std::string::npos) {
        r.hi = std::stoll(s.substr(a + 1));
    } else {
        r.hi = std::stoll(s.substr(a + 1, b - a - 1));
        r.step = std::stoll(s.substr(b + 1));
    }
    if (r.step <= 0 || r.lo < 1 || r.hi < r.lo) throw ParseError("bad n range: " + s);
    return r;
}

EliminationRuleSpec elimination_part(const VotingRuleSpec& rule) {
    if (const auto* vpl = std::get_if<RepeatedPluralityElimRule>(&rule.rule))
        return RepeatedPluralityElimSpec{vpl->margin};
    if (const auto* virv = std::get_if<ApproxIrvRule>(&rule.rule))
        return ApproxIrvElimSpec{virv->margin};
    if (const auto* score = std::get_if<ScoreElimRule>(&rule.rule))
        return ScoreMarginElimSpec{score->points, score->margin};
    if (const auto* fw = std::get_if<FrameworkRule>(&rule.rule)) return fw->elimination;
    if (const auto* mixed = std::get_if<MixedRule>(&rule.rule))
        return elimination_part(*mixed->base);
    throw InvalidSpec("rule has no elimination stage");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coarse-belief voting rules and strategy-proofness checkers"};
    app.require_subcommand(1);

    std::string rule_spec, rule_spec2, ballots_path, belief_path, observations_path, out_path;
    std::string delta_str = "1/10", eps_str = "0", alpha_str, grid_step_str, utility_str, true_str;
    std::string kind_str = "strong", mode_str = "exact", format_str = "json", range_str;
    double mix_c = 1.0;
    int n = 0, m = 0;
    long long trials = 10'000;
    long long sample_trials = 100'000;
    std::uint64_t seed = 1;
    long long budget = default_budget();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a rule on a ballot file");
    eval_cmd->add_option("--rule", rule_spec, "preset name or rule spec JSON file")->required();
    eval_cmd->add_option("--ballots", ballots_path, "ballot file")->required();
    eval_cmd->add_option("--delta", delta_str, "margin exponent for presets");
    eval_cmd->add_option("--mix-c", mix_c, "decay constant for *-prime presets");
    eval_cmd->add_option("--out", out_path, "write output here instead of stdout");

    // belief form
    auto* belief_cmd = app.add_subcommand("belief", "belief operations");
    auto* form_cmd = belief_cmd->add_subcommand("form", "form a belief from observations");
    std::string method;
    form_cmd->add_option("method", method, "empirical or dirichlet")->required();
    form_cmd->add_option("--observations", observations_path, "observation file")->required();
    form_cmd->add_option("--out", out_path, "write output here instead of stdout");

    // check
    auto* check_cmd = app.add_subcommand("check", "run a property checker");
    check_cmd->require_subcommand(1);
    auto add_common = [&](CLI::App* cmd, bool needs_rule) {
        if (needs_rule)
            cmd->add_option("--rule", rule_spec, "preset name or rule spec JSON file")->required();
        cmd->add_option("--n", n, "number of voters")->required();
        cmd->add_option("--m", m, "number of candidates")->required();
        cmd->add_option("--delta", delta_str, "margin exponent for presets");
        cmd->add_option("--mix-c", mix_c, "decay constant for *-prime presets");
        cmd->add_option("--eps", eps_str, "tolerance (exact rational)");
        cmd->add_option("--budget", budget, "enumeration budget");
        cmd->add_option("--out", out_path, "write the report here instead of stdout");
    };
    auto* sp_cmd = check_cmd->add_subcommand("sp", "eps-SP over coarse grid beliefs");
    add_common(sp_cmd, true);
    sp_cmd->add_option("--alpha", alpha_str, "coarseness parameter")->required();
    sp_cmd->add_option("--grid-step", grid_step_str, "utility grid step (default alpha)");
    sp_cmd->add_option("--mode", mode_str, "exact or mc");
    sp_cmd->add_option("--trials", trials, "Monte Carlo trials (mc mode)");
    sp_cmd->add_option("--seed", seed, "Monte Carlo seed (mc mode)");
    auto* pareto_cmd = check_cmd->add_subcommand("pareto", "eps-Pareto efficiency");
    add_common(pareto_cmd, true);
    pareto_cmd->add_option("--sample-trials", sample_trials,
                           "profiles to sample when the space exceeds the budget");
    pareto_cmd->add_option("--seed", seed, "sampling seed");
    auto* unanimity_cmd = check_cmd->add_subcommand("unanimity", "unanimity properties");
    add_common(unanimity_cmd, true);
    unanimity_cmd->add_option("--kind", kind_str, "strong, weak, or super-weak");
    auto* responsive_cmd = check_cmd->add_subcommand("responsive", "pairwise responsiveness");
    add_common(responsive_cmd, true);
    auto* isolated_cmd = check_cmd->add_subcommand("isolated", "pairwise isolation");
    add_common(isolated_cmd, true);
    auto* punish_cmd =
        check_cmd->add_subcommand("strict-punish", "punishing rule strictness margin");
    add_common(punish_cmd, false);
    punish_cmd->add_option("--alpha", alpha_str, "utility coarseness")->required();

    // vprime
    auto* vprime_cmd = app.add_subcommand("vprime", "canonical-profile selection table");
    vprime_cmd->add_option("--rule", rule_spec, "preset name or rule spec JSON file")->required();
    vprime_cmd->add_option("--n", n, "number of voters")->required();
    vprime_cmd->add_option("--m", m, "number of candidates")->required();
    vprime_cmd->add_option("--delta", delta_str, "margin exponent for presets");
    vprime_cmd->add_option("--format", format_str, "json or csv");
    vprime_cmd->add_option("--out", out_path, "write output here instead of stdout");

    // closeness
    auto* closeness_cmd = app.add_subcommand("closeness", "max selection-probability gap");
    closeness_cmd->add_option("--rule", rule_spec, "first rule")->required();
    closeness_cmd->add_option("--rule2", rule_spec2, "second rule")->required();
    closeness_cmd->add_option("--n", n, "number of voters")->required();
    closeness_cmd->add_option("--m", m, "number of candidates")->required();
    closeness_cmd->add_option("--delta", delta_str, "margin exponent for presets");
    closeness_cmd->add_option("--budget", budget, "enumeration budget");
    closeness_cmd->add_option("--out", out_path, "write output here instead of stdout");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "estimate-vs-n CSV sweeps");
    sweep_cmd->require_subcommand(1);
    auto add_sweep_common = [&](CLI::App* cmd) {
        cmd->add_option("--rule", rule_spec, "preset name or rule spec JSON file")->required();
        cmd->add_option("--belief", belief_path, "belief JSON file")->required();
        cmd->add_option("--n-range", range_str, "lo:hi:step (or a single n)")->required();
        cmd->add_option("--delta", delta_str, "margin exponent for presets");
        cmd->add_option("--mix-c", mix_c, "decay constant for *-prime presets");
        cmd->add_option("--trials", trials, "Monte Carlo trials per point");
        cmd->add_option("--seed", seed, "Monte Carlo seed");
        cmd->add_option("--out", out_path, "write CSV here instead of stdout");
    };
    auto* pivot_cmd = sweep_cmd->add_subcommand("pivotality", "elimination pivotality decay");
    add_sweep_common(pivot_cmd);
    auto* gain_cmd = sweep_cmd->add_subcommand("gain", "manipulation gain decay");
    add_sweep_common(gain_cmd);
    gain_cmd->add_option("--true", true_str, "true preference ordering")->required();
    gain_cmd->add_option("--utility", utility_str, "utility values by candidate, e.g. 0,1/2,1")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const Rational delta = parse_rational(delta_str);

        if (eval_cmd->parsed()) {
            const BallotFile ballots = parse_ballot_file(load_json_file(ballots_path));
            const auto rule = resolve_rule(rule_spec, ballots.m, delta, mix_c);
            const auto dist = evaluate(rule, Profile(ballots.ballots));
            write_output(distribution_to_json(dist).dump(2), out_path);
            return kExitPass;
        }

        if (form_cmd->parsed()) {
            const BallotFile obs = parse_ballot_file(load_json_file(observations_path));
            Belief phi;
            if (method == "empirical")
                phi = form_belief_empirical(obs.ballots);
            else if (method == "dirichlet")
                phi = form_belief_dirichlet(obs.m, obs.ballots);
            else
                throw ParseError("unknown belief formation method '" + method + "'");
            nlohmann::json out = belief_to_json(phi);
            out["coarseness"] = rational_to_string(coarseness(phi).beta);
            write_output(out.dump(2), out_path);
            return kExitPass;
        }

        if (sp_cmd->parsed()) {
            const auto rule = resolve_rule(rule_spec, m, delta, mix_c);
            SpCheckOptions opts;
            opts.eps = parse_rational(eps_str);
            if (!grid_step_str.empty()) opts.utility_grid_step = parse_rational(grid_step_str);
            if (mode_str == "mc")
                opts.mode = EvalMode::monte_carlo;
            else if (mode_str != "exact")
                throw ParseError("unknown mode '" + mode_str + "'");
            opts.trials = trials;
            opts.seed = seed;
            opts.budget = budget;
            return report_exit(check_eps_sp_coarse(rule, parse_rational(alpha_str), n, m, opts),
                               out_path);
        }
        if (pareto_cmd->parsed()) {
            const auto rule = resolve_rule(rule_spec, m, delta, mix_c);
            ParetoCheckOptions opts;
            opts.eps = parse_rational(eps_str);
            opts.budget = budget;
            opts.sample_trials = sample_trials;
            opts.seed = seed;
            return report_exit(check_pareto(rule, n, m, opts), out_path);
        }
        if (unanimity_cmd->parsed()) {
            const auto rule = resolve_rule(rule_spec, m, delta, mix_c);
            UnanimityKind kind;
            if (kind_str == "strong")
                kind = UnanimityKind::strong;
            else if (kind_str == "weak")
                kind = UnanimityKind::weak;
            else if (kind_str == "super-weak")
                kind = UnanimityKind::super_weak;
            else
                throw ParseError("unknown unanimity kind '" + kind_str + "'");
            return report_exit(
                check_unanimity(rule, n, m, parse_rational(eps_str), kind, budget), out_path);
        }
        if (responsive_cmd->parsed()) {
            const auto rule = resolve_rule(rule_spec, m, delta, mix_c);
            return report_exit(check_pairwise_responsive(rule, n, m, budget), out_path);
        }
        if (isolated_cmd->parsed()) {
            const auto rule = resolve_rule(rule_spec, m, delta, mix_c);
            return report_exit(check_pairwise_isolated(rule, n, m, budget), out_path);
        }
        if (punish_cmd->parsed()) {
            return report_exit(
                strict_sp_margin_punishing(n, m, parse_rational(alpha_str), budget), out_path);
        }

        if (vprime_cmd->parsed()) {
            const auto rule = resolve_rule(rule_spec, m, delta, mix_c);
            const auto table = build_vprime(rule, n, m);
            if (format_str == "csv")
                write_output(vprime_to_csv(table), out_path);
            else if (format_str == "json")
                write_output(to_json(table).dump(2), out_path);
            else
                throw ParseError("unknown format '" + format_str + "'");
            return kExitPass;
        }

        if (closeness_cmd->parsed()) {
            const auto rule1 = resolve_rule(rule_spec, m, delta, mix_c);
            const auto rule2 = resolve_rule(rule_spec2, m, delta, mix_c);
            const Rational worst = closeness(rule1, rule2, n, m, budget);
            write_output(nlohmann::json{{"closeness", rational_to_string(worst)}}.dump(2),
                         out_path);
            return kExitPass;
        }

        if (pivot_cmd->parsed() || gain_cmd->parsed()) {
            const Belief phi = parse_belief(load_json_file(belief_path));
            const int belief_m = phi.num_candidates();
            const auto rule = resolve_rule(rule_spec, belief_m, delta, mix_c);
            const RangeSpec range = parse_range(range_str);
            std::string csv = "n,estimate,ci_halfwidth\n";
            for (long long nn = range.lo; nn <= range.hi; nn += range.step) {
                MonteCarloEstimate est;
                if (pivot_cmd->parsed()) {
                    est = elimination_pivotality_mc(elimination_part(rule), phi,
                                                    static_cast<int>(nn), trials, seed);
                } else {
                    const auto truth = PreferenceOrdering::from_string(true_str);
                    const auto u = parse_utility(utility_str);
                    const auto report = manipulation_gain_mc(rule, phi, truth, u,
                                                             static_cast<int>(nn), trials, seed);
                    est = report.gain_estimate;
                }
                csv += std::to_string(nn) + "," + format_double(est.estimate) + "," +
                       format_double(est.ci_halfwidth) + "\n";
            }
            if (!csv.empty() && csv.back() == '\n') csv.pop_back();
            write_output(csv, out_path);
            return kExitPass;
        }

        std::cerr << "no subcommand executed\n";
        return kExitParse;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InvalidSpec& e) {
        std::cerr << "invalid spec: " << e.what() << "\n";
        return kExitSpec;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}
