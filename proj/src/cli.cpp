#include "optistop/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "optistop/errors.hpp"
#include "optistop/http_server.hpp"
#include "optistop/json_io.hpp"
#include "optistop/session_store.hpp"

namespace optistop {

namespace {

struct ModelArgs {
    double mu = 0.0;
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
};

void add_model_options(CLI::App& cmd, ModelArgs& m, bool with_cost) {
    cmd.add_option("--mu", m.mu, "worth mean");
    cmd.add_option("--a", m.a, "worth spread (standard deviation)");
    cmd.add_option("--b", m.b, "measurement error spread (standard deviation)");
    if (with_cost) cmd.add_option("--c", m.c, "per-item sampling cost")->required();
}

struct SimArgs {
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

void add_sim_options(CLI::App& cmd, SimArgs& s) {
    cmd.add_option("--trials", s.trials, "number of Monte-Carlo trials")->check(CLI::Range(kMinTrials, std::int64_t{1'000'000'000}));
    cmd.add_option("--seed", s.seed, "64-bit seed");
    cmd.add_option("--workers", s.workers, "worker threads (0 = all cores)");
}

void print_json(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

int advise_loop(const NoisyModel& model, const CostModel& cost, std::istream& in, std::ostream& out,
                std::ostream& err) {
    SessionState session(model, cost, now_ms());
    std::string line;
    for (;;) {
        err << "measured worth> " << std::flush;
        if (!std::getline(in, line)) break;
        const std::string text = trim(line);
        if (text.empty()) continue;
        if (text == "q" || text == "quit" || text == "exit") break;
        char* end = nullptr;
        const double value = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0' || !std::isfinite(value)) {
            err << "optistop: not a number: '" << text << "'\n";
            continue;
        }
        session = record_observation(session, value, now_ms());
        const Advice advice = advise(session);
        print_json(out, to_json(advice));
        if (advice.recommendation == Recommendation::Stop) break;
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"optistop: how many to sample, and whether to sample one more"};
    app.name("optistop");
    app.require_subcommand(1);

    // rankits
    auto* rankits_cmd = app.add_subcommand("rankits", "expected maxima K_n and marginals k_n");
    std::string dist_text = "std_normal";
    int max_n = 0;
    bool csv = false;
    rankits_cmd->add_option("--dist", dist_text, "distribution JSON or preset (std_normal, uniform01, uniform_pm1)");
    rankits_cmd->add_option("--max-n", max_n, "largest n")->required()->check(CLI::Range(1, 1'000'000));
    rankits_cmd->add_flag("--csv", csv, "emit CSV `n,K_n,k_n` instead of JSON");

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "optimal sample size n*");
    ModelArgs plan_args;
    add_model_options(*plan_cmd, plan_args, true);
    int n_max = kDefaultMaxSampleSize;
    std::string plan_dist;
    plan_cmd->add_option("--n-max", n_max, "largest n considered")->check(CLI::Range(2, 1'000'000));
    auto* plan_dist_opt =
        plan_cmd->add_option("--dist", plan_dist, "plan for a worth distribution measured without error");
    plan_dist_opt->excludes(plan_cmd->get_option("--a"))->excludes(plan_cmd->get_option("--b"))->excludes(
        plan_cmd->get_option("--mu"));

    // advise
    auto* advise_cmd = app.add_subcommand("advise", "interactive one-more-sample advisor (reads measurements on stdin)");
    ModelArgs advise_args;
    add_model_options(*advise_cmd, advise_args, true);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimates");
    sim_cmd->require_subcommand(1);
    SimArgs sim;

    auto* sim_max = sim_cmd->add_subcommand("max", "expected maximum of n draws");
    std::string sim_dist = "std_normal";
    int sim_n = 1;
    sim_max->add_option("--dist", sim_dist, "distribution JSON or preset");
    sim_max->add_option("--n", sim_n, "sample size")->required()->check(CLI::Range(1, 1'000'000));
    add_sim_options(*sim_max, sim);

    auto* sim_sel = sim_cmd->add_subcommand("selection", "true return of the item measured largest");
    ModelArgs sel_args;
    add_model_options(*sim_sel, sel_args, false);
    sim_sel->add_option("--n", sim_n, "sample size")->required()->check(CLI::Range(1, 1'000'000));
    add_sim_options(*sim_sel, sim);

    auto* sim_one = sim_cmd->add_subcommand("one-more", "expected gain of one more sample");
    ModelArgs one_args;
    double w0 = 0.0;
    add_model_options(*sim_one, one_args, false);
    sim_one->add_option("--w0", w0, "best measured return so far (measurement minus mu)")->required();
    add_sim_options(*sim_one, sim);

    auto* sim_pol = sim_cmd->add_subcommand("policy", "net gain of a sampling policy");
    ModelArgs pol_args;
    add_model_options(*sim_pol, pol_args, true);
    int planned_n = 0;
    int lookahead_n = 0;
    auto* planned_opt = sim_pol->add_option("--planned-n", planned_n, "sample exactly n items")->check(CLI::Range(1, 1'000'000));
    auto* lookahead_opt = sim_pol->add_option("--lookahead", lookahead_n, "one-more rule, at most N items")->check(CLI::Range(1, 1'000'000));
    planned_opt->excludes(lookahead_opt);
    add_sim_options(*sim_pol, sim);
    sim_pol->callback([planned_opt, lookahead_opt] {
        if (!*planned_opt && !*lookahead_opt) throw CLI::RequiredError("--planned-n or --lookahead");
    });

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "JSON/HTTP session service");
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string snapshot;
    serve_cmd->add_option("--port", port, "TCP port (0 = any free port)")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--snapshot", snapshot, "JSON-lines session log (env OPTISTOP_SNAPSHOT overrides)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        // Subcommand help surfaces as CallForHelp from the subcommand.
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "optistop: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*rankits_cmd) {
            const auto table = RankitTable::build(parse_distribution(dist_text), max_n);
            if (csv) {
                table.write_csv(out);
            } else {
                print_json(out, to_json(table));
            }
            return kExitOk;
        }
        if (*plan_cmd) {
            const CostModel cost(plan_args.c);
            PlanResult result = plan_dist.empty()
                                    ? optimal_sample_size(NoisyModel(plan_args.mu, plan_args.a, plan_args.b), cost, n_max)
                                    : optimal_sample_size(parse_distribution(plan_dist), cost, n_max);
            if (result.diverges && !std::isfinite(result.expected_gain)) {
                err << "optistop: divergent_gain: expected gain grows without bound in n\n";
                return kExitDivergence;
            }
            print_json(out, to_json(result));
            return kExitOk;
        }
        if (*advise_cmd) {
            return advise_loop(NoisyModel(advise_args.mu, advise_args.a, advise_args.b), CostModel(advise_args.c), in,
                               out, err);
        }
        if (*sim_cmd) {
            McEstimate est;
            if (*sim_max) {
                est = simulate_expected_max(parse_distribution(sim_dist), sim_n, sim.trials, sim.seed, sim.workers);
            } else if (*sim_sel) {
                est = simulate_selection(NoisyModel(sel_args.mu, sel_args.a, sel_args.b), sim_n, sim.trials, sim.seed,
                                         sim.workers);
            } else if (*sim_one) {
                est = simulate_one_more(NoisyModel(one_args.mu, one_args.a, one_args.b), w0, sim.trials, sim.seed,
                                        sim.workers);
            } else {
                const Policy policy =
                    *planned_opt ? Policy{PlannedN{planned_n}} : Policy{OneMoreLookahead{lookahead_n}};
                est = simulate_policy(NoisyModel(pol_args.mu, pol_args.a, pol_args.b), CostModel(pol_args.c), policy,
                                      sim.trials, sim.seed, sim.workers);
            }
            print_json(out, to_json(est));
            return kExitOk;
        }
        if (*serve_cmd) {
            if (const char* env = std::getenv("OPTISTOP_SNAPSHOT"); env != nullptr && *env != '\0') snapshot = env;
            std::optional<std::filesystem::path> path;
            if (!snapshot.empty()) path = snapshot;
            SessionStore store(path);
            ServiceApi api(store);
            HttpServer server(api);
            const int bound = server.bind(host, port);
            if (bound < 0) {
                err << "optistop: cannot bind " << host << ":" << port << '\n';
                return kExitUsage;
            }
            err << "optistop: listening on http://" << host << ":" << bound << "/v1\n";
            server.listen_after_bind();
            return kExitOk;
        }
    } catch (const DivergenceError& e) {
        err << "optistop: divergent_gain: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const ValidationError& e) {
        err << "optistop: invalid " << e.field() << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "optistop: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DegenerateModelError& e) {
        err << "optistop: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitUsage;
}

}  // namespace optistop
