// digitdyn command-line frontend.
//
// Groups:
//   persistence  orbit | value | map | scan | bound3
//   ma           run | stats | render | transitions | balanced | verify-phi |
//                repunits | head-search
//   dynamics     orbit | rotation | digit | measure | zero-prefix | density |
//                density-k | tail-period | primitive-root | independence |
//                commute | matrix | stationary | imc | probe | hypotheses
//
// Every subcommand accepts --dry-run (print the resolved run configuration
// as JSON and do nothing) and --format where it makes sense. Identical
// configurations produce identical output bytes; worker counts never change
// the output. Exit codes: 0 success, 1 budget/precision/runtime failure,
// 2 bad arguments.

#include "digitdyn/digitdyn.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace digitdyn;

namespace {

struct OutputTarget {
    std::string path;  // empty: stdout

    void write(const std::string& data) const {
        if (path.empty()) {
            std::cout << data;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << data;
    }
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected an integer or num/den rational: " + s);
    }
}

std::vector<std::uint8_t> parse_digit_string(const std::string& s, std::uint32_t base) {
    std::vector<std::uint8_t> digits;
    if (base <= 36) {
        for (char c : s) {
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'z') v = 10 + (c - 'a');
            else throw CLI::ValidationError(std::string("bad digit character: ") + c);
            if (v >= int(base)) throw CLI::ValidationError("digit exceeds base");
            digits.push_back(static_cast<std::uint8_t>(v));
        }
    } else {
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, '.')) {
            int v = std::stoi(cell);
            if (v < 0 || v >= int(base)) throw CLI::ValidationError("digit exceeds base");
            digits.push_back(static_cast<std::uint8_t>(v));
        }
    }
    if (digits.empty()) throw CLI::ValidationError("empty digit string");
    return digits;
}

unsigned default_workers() {
    if (const char* env = std::getenv("DIGITDYN_WORKERS")) {
        int v = std::atoi(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

json matrix_json(const StochasticMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dimension(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dimension(); ++j)
            row.push_back(rational_to_string(m(i, j)));
        rows.push_back(row);
    }
    return json{{"dim", m.dimension()}, {"rows", rows}};
}

json vector_json(const PopulationVector& v) {
    json out = json::array();
    for (std::size_t i = 0; i < v.dimension(); ++i) out.push_back(rational_to_string(v[i]));
    return out;
}

// Shared emit path: --dry-run prints the config alone; JSON wraps
// {config, result}; text/csv print the payload directly.
struct Reporter {
    json config;
    std::string format = "text";
    bool dry_run = false;
    OutputTarget target;

    bool handle_dry_run() const {
        if (!dry_run) return false;
        OutputTarget t = target;
        t.write(config.dump(2) + "\n");
        return true;
    }

    void emit(const json& result, const std::string& text_or_csv) const {
        if (format == "json") {
            json body{{"config", config}, {"result", result}};
            target.write(body.dump(2) + "\n");
        } else {
            target.write(text_or_csv);
        }
    }
};

void add_common(CLI::App* cmd, Reporter& rep, std::vector<std::string> formats = {"text", "json",
                                                                                  "csv"}) {
    cmd->add_flag("--dry-run", rep.dry_run, "print the resolved run configuration and exit");
    cmd->add_option("--format", rep.format, "output format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    cmd->add_option("--out", rep.target.path, "write output to a file instead of stdout");
}

AutomatonConfig build_ma_config(std::uint32_t base, const std::vector<std::uint32_t>& primes,
                                std::uint64_t seed, const std::string& policy,
                                const std::vector<std::uint32_t>& sequence,
                                std::uint64_t rng_seed,
                                const std::vector<std::uint32_t>& carries) {
    AutomatonConfig c;
    c.base = base;
    c.primes = primes;
    c.seed_value = seed;
    c.rng_seed = rng_seed;
    c.sequence = sequence;
    c.initial_carries = carries;
    if (policy == "cyclic") c.policy = MultiplierPolicy::cyclic;
    else if (policy == "random") c.policy = MultiplierPolicy::seeded_random;
    else if (policy == "fixed") c.policy = MultiplierPolicy::fixed_sequence;
    else throw CLI::ValidationError("unknown policy: " + policy);
    c.validate();
    return c;
}

json ma_config_json(std::uint32_t base, const std::vector<std::uint32_t>& primes,
                    std::uint64_t seed, std::uint64_t steps, const std::string& policy,
                    std::uint64_t rng_seed) {
    return json{{"base", base}, {"primes", primes}, {"seed", seed},
                {"steps", steps}, {"policy", policy}, {"rng_seed", rng_seed}};
}

// ---- persistence group -----------------------------------------------------

void register_persistence(CLI::App& app, int& rc) {
    auto* group = app.add_subcommand("persistence", "Sloane map orbits, values and record sweeps");
    group->require_subcommand(1);

    // orbit
    {
        auto* cmd = group->add_subcommand("orbit", "iterate the digit product to a single digit");
        auto rep = std::make_shared<Reporter>();
        auto n = std::make_shared<std::uint64_t>(0);
        auto base = std::make_shared<std::uint32_t>(10);
        cmd->add_option("n", *n, "starting number")->required();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "persistence orbit"}, {"n", *n}, {"base", *base},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            auto chain = orbit(*n, *base);
            json result{{"orbit", chain}, {"persistence", chain.size() - 1}};
            std::ostringstream text;
            if (rep->format == "csv") {
                text << "step,value\n";
                for (std::size_t i = 0; i < chain.size(); ++i)
                    text << i << ',' << chain[i] << '\n';
            } else {
                for (std::size_t i = 0; i < chain.size(); ++i)
                    text << (i ? " -> " : "") << chain[i];
                text << "\npersistence " << chain.size() - 1 << "\n";
            }
            rep->emit(result, text.str());
            rc = 0;
        });
    }

    // value
    {
        auto* cmd = group->add_subcommand("value", "persistence of a number");
        auto rep = std::make_shared<Reporter>();
        auto n = std::make_shared<std::uint64_t>(0);
        auto base = std::make_shared<std::uint32_t>(10);
        cmd->add_option("n", *n, "number")->required();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "persistence value"}, {"n", *n}, {"base", *base},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            std::uint32_t v = persistence(*n, *base);
            rep->emit(json{{"persistence", v}}, std::to_string(v) + "\n");
            rc = 0;
        });
    }

    // map
    {
        auto* cmd = group->add_subcommand("map", "one application of the digit product");
        auto rep = std::make_shared<Reporter>();
        auto n = std::make_shared<std::uint64_t>(0);
        auto base = std::make_shared<std::uint32_t>(10);
        auto erdos = std::make_shared<bool>(false);
        cmd->add_option("n", *n, "number")->required();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_flag("--nonzero-only", *erdos, "product over nonzero digits only");
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "persistence map"}, {"n", *n}, {"base", *base},
                               {"nonzero_only", *erdos}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            std::uint64_t v = *erdos ? erdos_sloane_map(*n, *base) : sloane_map(*n, *base);
            rep->emit(json{{"value", v}}, std::to_string(v) + "\n");
            rc = 0;
        });
    }

    // scan
    {
        auto* cmd = group->add_subcommand("scan", "smallest witness per persistence value");
        auto rep = std::make_shared<Reporter>();
        auto base = std::make_shared<std::uint32_t>(10);
        auto limit = std::make_shared<std::uint64_t>(100000);
        auto workers = std::make_shared<unsigned>(default_workers());
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--limit", *limit, "scan 1..limit")->capture_default_str();
        cmd->add_option("--workers", *workers, "worker threads (output-invariant)");
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "persistence scan"}, {"base", *base},
                               {"limit", *limit}, {"workers", *workers},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            auto records = scan_records(*base, *limit, *workers);
            json jr = json::array();
            std::ostringstream text;
            text << "persistence,witness\n";
            for (const auto& r : records) {
                jr.push_back(json{{"persistence", r.persistence}, {"witness", r.witness}});
                text << r.persistence << ',' << r.witness << '\n';
            }
            rep->emit(json{{"records", jr}}, text.str());
            rc = 0;
        });
    }

    // bound3
    {
        auto* cmd = group->add_subcommand("bound3", "base-3 persistence upper bound");
        auto rep = std::make_shared<Reporter>();
        auto n = std::make_shared<std::uint64_t>(0);
        cmd->add_option("n", *n, "number (>= 3)")->required();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "persistence bound3"}, {"n", *n},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            double b = persistence_bound_base3(*n);
            rep->emit(json{{"bound", b}, {"persistence", persistence(*n, 3)}},
                      fmt_double(b) + "\n");
            rc = 0;
        });
    }
}

// ---- ma group ----------------------------------------------------------------

void register_ma(CLI::App& app, int& rc) {
    auto* group = app.add_subcommand("ma", "multiplication automata");
    group->require_subcommand(1);

    struct MaOpts {
        std::uint32_t base = 3;
        std::vector<std::uint32_t> primes{2};
        std::uint64_t seed = 1;
        std::uint64_t steps = 10;
        std::string policy = "cyclic";
        std::vector<std::uint32_t> sequence;
        std::uint64_t rng_seed = 0;
        std::vector<std::uint32_t> carries;
    };
    auto add_ma_options = [](CLI::App* cmd, const std::shared_ptr<MaOpts>& o) {
        cmd->add_option("--base", o->base, "digit base")->capture_default_str();
        cmd->add_option("--primes", o->primes, "multiplier set")->capture_default_str();
        cmd->add_option("--seed", o->seed, "seed value a >= 1")->capture_default_str();
        cmd->add_option("--steps", o->steps, "number of steps")->capture_default_str();
        cmd->add_option("--policy", o->policy, "cyclic | random | fixed")->capture_default_str();
        cmd->add_option("--sequence", o->sequence, "explicit multipliers for --policy fixed");
        cmd->add_option("--rng-seed", o->rng_seed, "seed for --policy random");
        cmd->add_option("--carries", o->carries, "initial carry column");
    };

    // run
    {
        auto* cmd = group->add_subcommand("run", "emit rows");
        auto rep = std::make_shared<Reporter>();
        auto o = std::make_shared<MaOpts>();
        add_ma_options(cmd, o);
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = ma_config_json(o->base, o->primes, o->seed, o->steps, o->policy,
                                         o->rng_seed);
            rep->config["command"] = "ma run";
            rep->config["format"] = rep->format;
            if (rep->handle_dry_run()) return;
            AutomatonConfig cfg = build_ma_config(o->base, o->primes, o->seed, o->policy,
                                                  o->sequence, o->rng_seed, o->carries);
            std::ostringstream text;
            json rows = json::array();
            bool want_json = rep->format == "json";
            if (rep->format == "csv") text << "row,digit_count,digits\n";
            run(cfg, o->steps, [&](const AutomatonState& s) {
                if (want_json)
                    rows.push_back(json{{"row", s.row_index},
                                        {"digit_count", s.digit_count()},
                                        {"digits", s.row.to_string()}});
                else if (rep->format == "csv")
                    text << s.row_index << ',' << s.digit_count() << ',' << s.row.to_string()
                         << '\n';
                else
                    text << s.row_index << ' ' << s.row.to_string() << '\n';
            });
            rep->emit(json{{"rows", rows}}, text.str());
            rc = 0;
        });
    }

    // stats
    {
        auto* cmd = group->add_subcommand("stats", "per-row block statistics");
        auto rep = std::make_shared<Reporter>();
        auto o = std::make_shared<MaOpts>();
        auto block = std::make_shared<std::uint32_t>(1);
        add_ma_options(cmd, o);
        cmd->add_option("--block", *block, "block length")->capture_default_str();
        add_common(cmd, *rep, {"text", "json", "csv"});
        cmd->callback([=, &rc]() {
            rep->config = ma_config_json(o->base, o->primes, o->seed, o->steps, o->policy,
                                         o->rng_seed);
            rep->config["command"] = "ma stats";
            rep->config["block"] = *block;
            rep->config["format"] = rep->format;
            if (rep->handle_dry_run()) return;
            AutomatonConfig cfg = build_ma_config(o->base, o->primes, o->seed, o->policy,
                                                  o->sequence, o->rng_seed, o->carries);
            std::uint64_t cells = 1;
            for (std::uint32_t i = 0; i < *block; ++i) cells *= o->base;
            const bool per_block = cells <= 32;
            std::ostringstream text;
            json rows = json::array();
            text << "row,digit_count,windows,tv_uniform";
            if (per_block)
                for (std::uint64_t b = 0; b < cells; ++b) text << ",freq_" << b;
            text << '\n';
            run(cfg, o->steps, [&](const AutomatonState& s) {
                if (s.row.size() < *block) return;
                BlockHistogram h = block_histogram(s.row, *block);
                text << s.row_index << ',' << s.digit_count() << ',' << h.windows << ','
                     << fmt_double(h.tv_distance_uniform());
                json freqs = json::array();
                for (std::uint64_t b = 0; per_block && b < cells; ++b) {
                    double f = h.frequency(b);
                    text << ',' << fmt_double(f);
                    freqs.push_back(f);
                }
                text << '\n';
                if (rep->format == "json") {
                    json row{{"row", s.row_index},
                             {"digit_count", s.digit_count()},
                             {"windows", h.windows},
                             {"tv_uniform", h.tv_distance_uniform()}};
                    if (per_block) row["frequencies"] = freqs;
                    rows.push_back(row);
                }
            });
            rep->emit(json{{"rows", rows}}, text.str());
            rc = 0;
        });
    }

    // render
    {
        auto* cmd = group->add_subcommand("render", "digit grid as text or grid-image");
        auto rep = std::make_shared<Reporter>();
        rep->format = "text";
        auto o = std::make_shared<MaOpts>();
        add_ma_options(cmd, o);
        add_common(cmd, *rep, {"text", "grid-image"});
        cmd->callback([=, &rc]() {
            rep->config = ma_config_json(o->base, o->primes, o->seed, o->steps, o->policy,
                                         o->rng_seed);
            rep->config["command"] = "ma render";
            rep->config["format"] = rep->format;
            if (rep->handle_dry_run()) return;
            AutomatonConfig cfg = build_ma_config(o->base, o->primes, o->seed, o->policy,
                                                  o->sequence, o->rng_seed, o->carries);
            auto states = run_collect(cfg, o->steps);
            if (rep->format == "grid-image") {
                std::ostringstream out;
                write_grid(out, render_grid(states));
                rep->target.write(out.str());
            } else {
                rep->target.write(render_text(states));
            }
            rc = 0;
        });
    }

    // transitions
    {
        auto* cmd = group->add_subcommand("transitions",
                                          "empirical block transitions between two rows");
        auto rep = std::make_shared<Reporter>();
        auto o = std::make_shared<MaOpts>();
        auto block = std::make_shared<std::uint32_t>(1);
        add_ma_options(cmd, o);
        cmd->add_option("--block", *block, "block length")->capture_default_str();
        add_common(cmd, *rep, {"text", "json", "csv"});
        cmd->callback([=, &rc]() {
            rep->config = ma_config_json(o->base, o->primes, o->seed, o->steps, o->policy,
                                         o->rng_seed);
            rep->config["command"] = "ma transitions";
            rep->config["block"] = *block;
            rep->config["format"] = rep->format;
            if (rep->handle_dry_run()) return;
            AutomatonConfig cfg = build_ma_config(o->base, o->primes, o->seed, o->policy,
                                                  o->sequence, o->rng_seed, o->carries);
            Automaton a(cfg);
            for (std::uint64_t i = 0; i < o->steps; ++i) a.step();
            DigitVector from = a.state().row;
            a.step();
            auto m = empirical_transition_matrix(from, a.state().row, *block);
            json jrows = json::array();
            std::ostringstream text;
            text << "from,to,count,probability\n";
            for (const auto& [x, row] : m.counts)
                for (const auto& [y, count] : row) {
                    Rational p = m.probability(x, y);
                    jrows.push_back(json{{"from", x}, {"to", y}, {"count", count},
                                         {"probability", rational_to_string(p)}});
                    text << x << ',' << y << ',' << count << ',' << rational_to_string(p)
                         << '\n';
                }
            rep->emit(json{{"transitions", jrows}}, text.str());
            rc = 0;
        });
    }

    // balanced
    {
        auto* cmd = group->add_subcommand("balanced", "synthetic exactly-balanced row");
        auto rep = std::make_shared<Reporter>();
        auto base = std::make_shared<std::uint32_t>(3);
        auto k = std::make_shared<std::uint32_t>(3);
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--k", *k, "block order")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "ma balanced"}, {"base", *base}, {"k", *k},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            DigitVector row = balanced_row(*base, *k);
            rep->emit(json{{"digits", row.to_string()},
                           {"length", row.size()},
                           {"deviation", k_balance_deviation(row, *k)}},
                      row.to_string() + "\n");
            rc = 0;
        });
    }

    // verify-phi
    {
        auto* cmd = group->add_subcommand("verify-phi",
                                          "audit the window map counting properties");
        auto rep = std::make_shared<Reporter>();
        auto kmax = std::make_shared<std::uint32_t>(7);
        cmd->add_option("--k-max", *kmax, "audit orders 1..k-max")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "ma verify-phi"}, {"k_max", *kmax},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            json checks = json::array();
            std::ostringstream text;
            bool all = true;
            for (std::uint32_t k = 1; k <= *kmax; ++k) {
                auto audit = verify_digit_below(k);
                all = all && audit.passed;
                checks.push_back(json{{"k", k}, {"passed", audit.passed},
                                      {"count_per_pair", audit.expected_count}});
                text << "k=" << k << " " << (audit.passed ? "ok" : "FAIL")
                     << " count=" << audit.expected_count << '\n';
            }
            rep->emit(json{{"checks", checks}, {"all_passed", all}}, text.str());
            rc = all ? 0 : 1;
        });
    }

    // repunits
    {
        auto* cmd = group->add_subcommand("repunits", "repunit counterexample report");
        auto rep = std::make_shared<Reporter>();
        auto nmax = std::make_shared<std::uint32_t>(5);
        cmd->add_option("--n-max", *nmax, "largest index")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "ma repunits"}, {"n_max", *nmax},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            auto report = repunit_demo(*nmax);
            json steps = json::array();
            std::ostringstream text;
            text << "n,digits,divisible_by_previous,split_coprime,ones_fraction\n";
            for (const auto& s : report.steps) {
                steps.push_back(json{{"n", s.n}, {"digits", s.digit_count},
                                     {"divisible_by_previous", s.divisible_by_previous},
                                     {"split_coprime", s.split_coprime},
                                     {"ones_fraction", s.ones_fraction}});
                text << s.n << ',' << s.digit_count << ',' << s.divisible_by_previous << ','
                     << s.split_coprime << ',' << fmt_double(s.ones_fraction) << '\n';
            }
            rep->emit(json{{"steps", steps}, {"all_checks_passed", report.all_checks_passed}},
                      text.str());
            rc = report.all_checks_passed ? 0 : 1;
        });
    }

    // head-search
    {
        auto* cmd = group->add_subcommand("head-search", "first power starting with a prefix");
        auto rep = std::make_shared<Reporter>();
        auto p = std::make_shared<std::uint64_t>(2);
        auto base = std::make_shared<std::uint32_t>(3);
        auto prefix = std::make_shared<std::string>();
        auto nmax = std::make_shared<std::uint64_t>(10000);
        auto bits = std::make_shared<unsigned>(256);
        cmd->add_option("--p", *p, "multiplier")->capture_default_str();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--prefix", *prefix, "target digit prefix")->required();
        cmd->add_option("--n-max", *nmax, "search bound")->capture_default_str();
        cmd->add_option("--bits", *bits, "working precision")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "ma head-search"}, {"p", *p}, {"base", *base},
                               {"prefix", *prefix}, {"n_max", *nmax},
                               {"precision_bits", *bits}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            auto digits = parse_digit_string(*prefix, *base);
            auto found = head_search(*p, *base, digits, *nmax, PrecisionPolicy::with_bits(*bits));
            if (found) {
                rep->emit(json{{"found", true}, {"n", *found}}, std::to_string(*found) + "\n");
                rc = 0;
            } else {
                rep->emit(json{{"found", false}}, "not-found\n");
                rc = 1;
            }
        });
    }
}

// ---- dynamics group ----------------------------------------------------------

StochasticMatrix select_matrix(const std::string& kind, std::uint32_t base,
                               std::uint32_t multiplier, const std::string& eps,
                               std::uint32_t block) {
    if (kind == "transition") return base_transition_matrix(base, multiplier);
    if (kind == "perturbed-q") return perturbed_matrices(parse_rational(eps)).first;
    if (kind == "perturbed-r") return perturbed_matrices(parse_rational(eps)).second;
    if (kind == "block") return block_transition_matrix(block, base, multiplier);
    throw CLI::ValidationError("unknown matrix kind: " + kind);
}

void register_dynamics(CLI::App& app, int& rc) {
    auto* group = app.add_subcommand(
        "dynamics", "circle maps, densities, tail arithmetic and the Markov model");
    group->require_subcommand(1);

    // orbit
    {
        auto* cmd = group->add_subcommand("orbit", "exact circle-map orbit point p^n / q^{k_n}");
        auto rep = std::make_shared<Reporter>();
        auto p = std::make_shared<std::uint64_t>(2);
        auto base = std::make_shared<std::uint32_t>(3);
        auto n = std::make_shared<std::uint64_t>(0);
        cmd->add_option("--p", *p, "multiplier")->capture_default_str();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--n", *n, "iterate")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics orbit"}, {"p", *p}, {"base", *base},
                               {"n", *n}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            CirclePoint x = orbit_point(*p, *base, *n);
            rep->emit(json{{"value", rational_to_string(x.value())},
                           {"approx", static_cast<double>(x.value())}},
                      rational_to_string(x.value()) + "\n");
            rc = 0;
        });
    }

    // rotation
    {
        auto* cmd = group->add_subcommand("rotation", "rotation number log_q p (mod 1)");
        auto rep = std::make_shared<Reporter>();
        auto p = std::make_shared<std::uint64_t>(2);
        auto base = std::make_shared<std::uint32_t>(3);
        auto bits = std::make_shared<unsigned>(128);
        cmd->add_option("--p", *p, "multiplier")->capture_default_str();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--bits", *bits, "working precision")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics rotation"}, {"p", *p}, {"base", *base},
                               {"precision_bits", *bits}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            auto r = rotation_number(*p, *base, PrecisionPolicy::with_bits(*bits));
            json result{{"rational", r.rational},
                        {"approx", r.enclosure.midpoint_double()}};
            std::ostringstream text;
            if (r.rational) {
                result["exact"] = rational_to_string(r.exact_value);
                text << rational_to_string(r.exact_value) << " (rational)\n";
            } else {
                text << fmt_double(r.enclosure.midpoint_double()) << " (irrational)\n";
            }
            rep->emit(result, text.str());
            rc = 0;
        });
    }

    // digit
    {
        auto* cmd = group->add_subcommand("digit", "closed-form digit of p^n in base q");
        auto rep = std::make_shared<Reporter>();
        auto p = std::make_shared<std::uint64_t>(2);
        auto base = std::make_shared<std::uint32_t>(3);
        auto j = std::make_shared<std::uint64_t>(1);
        auto n = std::make_shared<std::uint64_t>(1);
        auto bits = std::make_shared<unsigned>(0);
        cmd->add_option("--p", *p, "multiplier")->capture_default_str();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--j", *j, "digit index from the left, 1-based")->capture_default_str();
        cmd->add_option("--n", *n, "exponent")->capture_default_str();
        cmd->add_option("--bits", *bits, "working precision (0: recommended)");
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics digit"}, {"p", *p}, {"base", *base},
                               {"j", *j}, {"n", *n}, {"precision_bits", *bits},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            PrecisionPolicy pol = *bits ? PrecisionPolicy::with_bits(*bits)
                                        : PrecisionPolicy::for_digit_formula(*base, *j, *n);
            std::uint32_t d = digit_formula(*p, *base, *j, *n, pol);
            rep->emit(json{{"digit", d}}, std::to_string(d) + "\n");
            rc = 0;
        });
    }

    // measure
    {
        auto* cmd = group->add_subcommand("measure", "invariant measure of [a, b]");
        auto rep = std::make_shared<Reporter>();
        auto base = std::make_shared<std::uint32_t>(3);
        auto a = std::make_shared<std::string>("1/3");
        auto b = std::make_shared<std::string>("1");
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--a", *a, "lower endpoint (rational)")->capture_default_str();
        cmd->add_option("--b", *b, "upper endpoint (rational)")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics measure"}, {"base", *base}, {"a", *a},
                               {"b", *b}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            double m = invariant_measure(parse_rational(*a), parse_rational(*b), *base);
            rep->emit(json{{"measure", m}}, fmt_double(m) + "\n");
            rc = 0;
        });
    }

    // zero-prefix
    {
        auto* cmd = group->add_subcommand("zero-prefix",
                                          "measures of the zero-in-first-j-digits set");
        auto rep = std::make_shared<Reporter>();
        auto base = std::make_shared<std::uint32_t>(3);
        auto depth = std::make_shared<std::uint32_t>(4);
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--j", *depth, "prefix depth")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics zero-prefix"}, {"base", *base},
                               {"j", *depth}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            auto m = measure_zero_prefix(*base, *depth);
            rep->emit(json{{"lebesgue", m.lebesgue},
                           {"lebesgue_exact", rational_to_string(m.lebesgue_exact)},
                           {"invariant", m.invariant}},
                      "lebesgue " + fmt_double(m.lebesgue) + " invariant " +
                          fmt_double(m.invariant) + "\n");
            rc = 0;
        });
    }

    // density
    {
        auto* cmd = group->add_subcommand("density", "zero-digit density of p^n, n <= limit");
        auto rep = std::make_shared<Reporter>();
        auto base = std::make_shared<std::uint32_t>(3);
        auto primes = std::make_shared<std::vector<std::uint32_t>>(std::vector<std::uint32_t>{2});
        auto limit = std::make_shared<std::uint64_t>(1000);
        auto workers = std::make_shared<unsigned>(default_workers());
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--primes", *primes, "single prime")->capture_default_str();
        cmd->add_option("--limit", *limit, "exponent bound")->capture_default_str();
        cmd->add_option("--workers", *workers, "worker threads (output-invariant)");
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics density"}, {"base", *base},
                               {"primes", *primes}, {"limit", *limit}, {"workers", *workers},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            if (primes->size() != 1)
                throw CLI::ValidationError("density takes exactly one prime; see density-k");
            auto r = zero_density_rank1((*primes)[0], *base, *limit, *workers);
            std::ostringstream text;
            if (rep->format == "csv")
                text << "N,hits,total,fraction\n"
                     << r.side << ',' << r.hits << ',' << r.total << ','
                     << fmt_double(r.fraction) << '\n';
            else
                text << r.hits << "/" << r.total << " = " << fmt_double(r.fraction) << "\n";
            rep->emit(json{{"N", r.side}, {"hits", r.hits}, {"total", r.total},
                           {"fraction", r.fraction}},
                      text.str());
            rc = 0;
        });
    }

    // density-k
    {
        auto* cmd = group->add_subcommand("density-k", "zero-digit density over prime tuples");
        auto rep = std::make_shared<Reporter>();
        auto base = std::make_shared<std::uint32_t>(7);
        auto primes = std::make_shared<std::vector<std::uint32_t>>(
            std::vector<std::uint32_t>{2, 3, 5});
        auto divisor = std::make_shared<std::uint32_t>(1);
        auto side = std::make_shared<std::uint64_t>(10);
        auto workers = std::make_shared<unsigned>(default_workers());
        auto budget = std::make_shared<std::uint64_t>(kDefaultTupleBudget);
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--primes", *primes, "prime list")->capture_default_str();
        cmd->add_option("--divisor", *divisor, "divisor d of the base")->capture_default_str();
        cmd->add_option("--side", *side, "cube side N")->capture_default_str();
        cmd->add_option("--workers", *workers, "worker threads (output-invariant)");
        cmd->add_option("--budget", *budget, "tuple budget")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics density-k"}, {"base", *base},
                               {"primes", *primes}, {"divisor", *divisor}, {"side", *side},
                               {"workers", *workers}, {"budget", *budget},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            ActionSpec spec{*base, *primes, *divisor};
            auto r = zero_density_rank_k(spec, *side, *workers, *budget);
            std::ostringstream text;
            if (rep->format == "csv")
                text << "N,hits,total,fraction\n"
                     << r.side << ',' << r.hits << ',' << r.total << ','
                     << fmt_double(r.fraction) << '\n';
            else
                text << r.hits << "/" << r.total << " = " << fmt_double(r.fraction) << "\n";
            rep->emit(json{{"N", r.side}, {"hits", r.hits}, {"total", r.total},
                           {"fraction", r.fraction}, {"allowable", spec.allowable()}},
                      text.str());
            rc = 0;
        });
    }

    // tail-period
    {
        auto* cmd = group->add_subcommand("tail-period", "minimal period of p^n mod q^k");
        auto rep = std::make_shared<Reporter>();
        auto p = std::make_shared<std::uint64_t>(2);
        auto base = std::make_shared<std::uint64_t>(3);
        auto k = std::make_shared<std::uint32_t>(1);
        cmd->add_option("--p", *p, "multiplier")->capture_default_str();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--k", *k, "tail length")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics tail-period"}, {"p", *p}, {"base", *base},
                               {"k", *k}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            std::uint64_t t = tail_period(*p, *base, *k);
            rep->emit(json{{"period", t}}, std::to_string(t) + "\n");
            rc = 0;
        });
    }

    // primitive-root
    {
        auto* cmd = group->add_subcommand("primitive-root", "is p a primitive root mod m");
        auto rep = std::make_shared<Reporter>();
        auto p = std::make_shared<std::uint64_t>(2);
        auto modulus = std::make_shared<std::uint64_t>(9);
        cmd->add_option("--p", *p, "residue")->capture_default_str();
        cmd->add_option("--modulus", *modulus, "modulus")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics primitive-root"}, {"p", *p},
                               {"modulus", *modulus}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            bool b = is_primitive_root(*p, *modulus);
            rep->emit(json{{"primitive_root", b}}, std::string(b ? "true" : "false") + "\n");
            rc = 0;
        });
    }

    // independence
    {
        auto* cmd = group->add_subcommand("independence",
                                          "rational independence of {1, log_q p_i}");
        auto rep = std::make_shared<Reporter>();
        auto base = std::make_shared<std::uint64_t>(10);
        auto primes = std::make_shared<std::vector<std::uint64_t>>(
            std::vector<std::uint64_t>{2, 5});
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--primes", *primes, "prime list")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics independence"}, {"base", *base},
                               {"primes", *primes}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            auto v = rational_independence(*base, *primes);
            if (v.independent) {
                rep->emit(json{{"independent", true}}, "independent\n");
            } else {
                std::ostringstream text;
                text << "dependent:";
                json exps = json::array();
                for (std::size_t i = 0; i < primes->size(); ++i) {
                    exps.push_back(v.exponents[i]);
                    if (v.exponents[i])
                        text << ' ' << (*primes)[i] << '^' << v.exponents[i];
                }
                text << " = " << *base << '^' << v.q_exponent << '\n';
                rep->emit(json{{"independent", false}, {"exponents", exps},
                               {"base_exponent", v.q_exponent}},
                          text.str());
            }
            rc = 0;
        });
    }

    // commute
    {
        auto* cmd = group->add_subcommand("commute", "exact commutation check of two maps");
        auto rep = std::make_shared<Reporter>();
        auto p1 = std::make_shared<std::uint64_t>(2);
        auto p2 = std::make_shared<std::uint64_t>(5);
        auto base = std::make_shared<std::uint32_t>(3);
        auto samples = std::make_shared<std::uint64_t>(1000);
        auto seed = std::make_shared<std::uint64_t>(12345);
        cmd->add_option("--p1", *p1, "first multiplier")->capture_default_str();
        cmd->add_option("--p2", *p2, "second multiplier")->capture_default_str();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--samples", *samples, "sample count")->capture_default_str();
        cmd->add_option("--seed", *seed, "sampling seed")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics commute"}, {"p1", *p1}, {"p2", *p2},
                               {"base", *base}, {"samples", *samples}, {"seed", *seed},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            auto r = commutation_check(*p1, *p2, *base, *samples, *seed);
            json result{{"commutes", r.commutes}};
            if (r.counterexample)
                result["counterexample"] = rational_to_string(*r.counterexample);
            rep->emit(result, std::string(r.commutes ? "commutes" : "violation") + "\n");
            rc = r.commutes ? 0 : 1;
        });
    }

    // matrix
    {
        auto* cmd = group->add_subcommand("matrix", "emit a model matrix exactly");
        auto rep = std::make_shared<Reporter>();
        auto kind = std::make_shared<std::string>("transition");
        auto base = std::make_shared<std::uint32_t>(3);
        auto multiplier = std::make_shared<std::uint32_t>(2);
        auto eps = std::make_shared<std::string>("1/10");
        auto block = std::make_shared<std::uint32_t>(2);
        cmd->add_option("--kind", *kind, "incidence | transition | perturbed-q | perturbed-r | block")
            ->capture_default_str();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--multiplier", *multiplier, "multiplier")->capture_default_str();
        cmd->add_option("--eps", *eps, "perturbation (rational)")->capture_default_str();
        cmd->add_option("--block", *block, "block length for --kind block")->capture_default_str();
        add_common(cmd, *rep, {"text", "json"});
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics matrix"}, {"kind", *kind}, {"base", *base},
                               {"multiplier", *multiplier}, {"eps", *eps}, {"block", *block},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            if (*kind == "incidence") {
                auto a = incidence_matrix(*base, *multiplier);
                json rows = json::array();
                std::ostringstream text;
                for (const auto& row : a) {
                    rows.push_back(row);
                    for (std::size_t j = 0; j < row.size(); ++j)
                        text << row[j] << (j + 1 < row.size() ? ' ' : '\n');
                }
                rep->emit(json{{"dim", a.size()}, {"rows", rows}}, text.str());
            } else {
                StochasticMatrix m = select_matrix(*kind, *base, *multiplier, *eps, *block);
                std::ostringstream text;
                for (std::size_t i = 0; i < m.dimension(); ++i)
                    for (std::size_t j = 0; j < m.dimension(); ++j)
                        text << rational_to_string(m(i, j))
                             << (j + 1 < m.dimension() ? ' ' : '\n');
                rep->emit(matrix_json(m), text.str());
            }
            rc = 0;
        });
    }

    // stationary
    {
        auto* cmd = group->add_subcommand("stationary", "exact stationary distribution");
        auto rep = std::make_shared<Reporter>();
        auto kind = std::make_shared<std::string>("transition");
        auto base = std::make_shared<std::uint32_t>(3);
        auto multiplier = std::make_shared<std::uint32_t>(2);
        auto eps = std::make_shared<std::string>("1/10");
        auto block = std::make_shared<std::uint32_t>(2);
        cmd->add_option("--kind", *kind, "transition | perturbed-q | perturbed-r | block")
            ->capture_default_str();
        cmd->add_option("--base", *base, "digit base")->capture_default_str();
        cmd->add_option("--multiplier", *multiplier, "multiplier")->capture_default_str();
        cmd->add_option("--eps", *eps, "perturbation (rational)")->capture_default_str();
        cmd->add_option("--block", *block, "block length")->capture_default_str();
        add_common(cmd, *rep, {"text", "json"});
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics stationary"}, {"kind", *kind},
                               {"base", *base}, {"multiplier", *multiplier}, {"eps", *eps},
                               {"block", *block}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            StochasticMatrix m = select_matrix(*kind, *base, *multiplier, *eps, *block);
            auto st = stationary_distribution(m);
            std::ostringstream text;
            for (std::size_t i = 0; i < st.distribution.dimension(); ++i)
                text << rational_to_string(st.distribution[i])
                     << (i + 1 < st.distribution.dimension() ? ' ' : '\n');
            if (!st.unique) text << "(not unique)\n";
            rep->emit(json{{"stationary", vector_json(st.distribution)}, {"unique", st.unique}},
                      text.str());
            rc = 0;
        });
    }

    // imc
    {
        auto* cmd = group->add_subcommand("imc", "inhomogeneous chain trajectory");
        auto rep = std::make_shared<Reporter>();
        auto steps = std::make_shared<std::uint64_t>(100);
        auto schedule = std::make_shared<std::string>("harmonic");
        auto eps = std::make_shared<std::string>("1/10");
        auto pattern = std::make_shared<std::string>("alternate");
        auto start = std::make_shared<std::string>("unit:0");
        auto use_float = std::make_shared<bool>(false);
        cmd->add_option("--steps", *steps, "trajectory length")->capture_default_str();
        cmd->add_option("--eps-schedule", *schedule, "harmonic | constant")->capture_default_str();
        cmd->add_option("--eps", *eps, "epsilon for --eps-schedule constant")
            ->capture_default_str();
        cmd->add_option("--pattern", *pattern, "alternate | q | r | p")->capture_default_str();
        cmd->add_option("--start", *start, "uniform | unit:i")->capture_default_str();
        cmd->add_flag("--float", *use_float, "floating arithmetic for long runs");
        add_common(cmd, *rep, {"text", "json", "csv"});
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics imc"}, {"steps", *steps},
                               {"eps_schedule", *schedule}, {"eps", *eps},
                               {"pattern", *pattern}, {"start", *start},
                               {"float", *use_float}, {"format", rep->format}};
            if (rep->handle_dry_run()) return;

            auto eps_at = [&](std::uint64_t n) -> Rational {
                if (*schedule == "harmonic") return Rational(1, n + 2);
                if (*schedule == "constant") return parse_rational(*eps);
                throw CLI::ValidationError("unknown schedule: " + *schedule);
            };
            auto matrix_at = [&](std::uint64_t n) -> StochasticMatrix {
                if (*pattern == "p") return base_transition_matrix(3, 2);
                auto [qm, rm] = perturbed_matrices(eps_at(n));
                if (*pattern == "q") return qm;
                if (*pattern == "r") return rm;
                if (*pattern == "alternate") return n % 2 == 0 ? qm : rm;
                throw CLI::ValidationError("unknown pattern: " + *pattern);
            };
            PopulationVector p0 = PopulationVector::uniform(3);
            if (start->rfind("unit:", 0) == 0)
                p0 = PopulationVector::unit(3, std::stoul(start->substr(5)));
            else if (*start != "uniform")
                throw CLI::ValidationError("unknown start: " + *start);

            std::ostringstream text;
            text << "step,dv_uniform\n";
            json jtraj = json::array();
            if (*use_float) {
                std::vector<double> p(3);
                for (std::size_t i = 0; i < 3; ++i) p[i] = static_cast<double>(p0[i]);
                auto dv = imc_evolve_double(
                    p,
                    [&](std::uint64_t n) {
                        StochasticMatrix m = matrix_at(n);
                        std::vector<std::vector<double>> md(3, std::vector<double>(3));
                        for (std::size_t i = 0; i < 3; ++i)
                            for (std::size_t j = 0; j < 3; ++j)
                                md[i][j] = static_cast<double>(m(i, j));
                        return md;
                    },
                    *steps);
                for (std::size_t i = 0; i < dv.size(); ++i) {
                    text << i << ',' << fmt_double(dv[i]) << '\n';
                    jtraj.push_back(json{{"step", i}, {"dv_uniform", dv[i]}});
                }
            } else {
                std::vector<StochasticMatrix> seq;
                seq.reserve(*steps);
                for (std::uint64_t n = 0; n < *steps; ++n) seq.push_back(matrix_at(n));
                auto traj = imc_evolve(p0, seq);
                for (std::size_t i = 0; i < traj.size(); ++i) {
                    double dv = static_cast<double>(traj[i].dv_to_uniform);
                    text << i << ',' << fmt_double(dv) << '\n';
                    jtraj.push_back(json{{"step", i},
                                         {"dv_uniform", dv},
                                         {"dv_exact", rational_to_string(traj[i].dv_to_uniform)}});
                }
            }
            rep->emit(json{{"trajectory", jtraj}}, text.str());
            rc = 0;
        });
    }

    // probe
    {
        auto* cmd = group->add_subcommand("probe", "strong ergodicity window supremum");
        auto rep = std::make_shared<Reporter>();
        auto steps = std::make_shared<std::uint64_t>(50);
        auto from = std::make_shared<std::uint64_t>(0);
        auto pattern = std::make_shared<std::string>("alternate");
        cmd->add_option("--steps", *steps, "window end n")->capture_default_str();
        cmd->add_option("--from", *from, "window start m")->capture_default_str();
        cmd->add_option("--pattern", *pattern, "alternate | p")->capture_default_str();
        add_common(cmd, *rep);
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics probe"}, {"steps", *steps},
                               {"from", *from}, {"pattern", *pattern},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            std::vector<StochasticMatrix> seq;
            for (std::uint64_t n = 0; n < *steps; ++n) {
                if (*pattern == "p") {
                    seq.push_back(base_transition_matrix(3, 2));
                } else {
                    auto [qm, rm] = perturbed_matrices(Rational(1, n + 2));
                    seq.push_back(n % 2 == 0 ? qm : rm);
                }
            }
            Rational sup = strong_ergodicity_probe(seq, *from, *steps,
                                                   PopulationVector::uniform(3));
            rep->emit(json{{"sup_dv", rational_to_string(sup)},
                           {"approx", static_cast<double>(sup)}},
                      rational_to_string(sup) + "\n");
            rc = 0;
        });
    }

    // hypotheses
    {
        auto* cmd = group->add_subcommand("hypotheses",
                                          "stationary vectors and limit-norm decay");
        auto rep = std::make_shared<Reporter>();
        auto steps = std::make_shared<std::uint64_t>(20);
        cmd->add_option("--steps", *steps, "sequence length")->capture_default_str();
        add_common(cmd, *rep, {"text", "json", "csv"});
        cmd->callback([=, &rc]() {
            rep->config = json{{"command", "dynamics hypotheses"}, {"steps", *steps},
                               {"format", rep->format}};
            if (rep->handle_dry_run()) return;
            std::vector<StochasticMatrix> seq;
            for (std::uint64_t n = 0; n < *steps; ++n) {
                auto [qm, rm] = perturbed_matrices(Rational(1, n + 2));
                seq.push_back(n % 2 == 0 ? qm : rm);
            }
            auto report = check_strong_ergodicity_hypotheses(seq, base_transition_matrix(3, 2));
            std::ostringstream text;
            text << "n,norm_to_limit,stationary\n";
            json entries = json::array();
            for (std::size_t n = 0; n < report.entries.size(); ++n) {
                const auto& e = report.entries[n];
                std::string stat;
                for (std::size_t i = 0; i < e.stationary.distribution.dimension(); ++i)
                    stat += (i ? " " : "") + rational_to_string(e.stationary.distribution[i]);
                text << n << ',' << rational_to_string(e.distance_to_limit) << ",\"" << stat
                     << "\"\n";
                entries.push_back(json{{"n", n},
                                       {"norm_to_limit", rational_to_string(e.distance_to_limit)},
                                       {"stationary", vector_json(e.stationary.distribution)},
                                       {"unique", e.stationary.unique}});
            }
            rep->emit(json{{"entries", entries},
                           {"nonincreasing", report.distances_nonincreasing}},
                      text.str());
            rc = 0;
        });
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"digit dynamics toolkit: persistence, multiplication automata, circle maps"};
    app.require_subcommand(1);
    int rc = 0;
    register_persistence(app, rc);
    register_ma(app, rc);
    register_dynamics(app, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::overflow_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 1;
    } catch (const precision_error& e) {
        std::cerr << "precision failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
