#include "misolab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "misolab/bounds.hpp"
#include "misolab/error.hpp"
#include "misolab/montecarlo.hpp"

namespace misolab::cli {

using nlohmann::json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace {

constexpr const char* kDegenerate = "degenerate";

/// JSON number carrying exactly the digits of format_number; null when not finite.
json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v));
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t parse_seed(const std::string& text) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used, 0);
        if (used != text.size()) throw UsageError("bad seed: " + text);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("bad seed: " + text);
    }
}

struct Options {
    int m = 0;
    int tc = 0;
    double p = 0.0;
    double kappa = 1.0;
    double alpha = 0.0;
    std::vector<int> m_list;
    std::size_t trials = 10'000;
    std::string seed_text = "0xC0FFEE";
    std::string out_path;
    std::string format = "csv";
};

// ---------------------------------------------------------------------------

std::string csv_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\r\n") == std::string::npos) {
            line += c;
        } else {
            line += '"';
            for (char ch : c) line += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            line += '"';
        }
    }
    return line + "\r\n";
}

void emit_bounds(const Options& o, std::ostream& os) {
    const BoundReport r = make_bound_report(o.m, o.tc, o.p, o.kappa);
    if (o.format == "json") {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "bounds";
        j["m"] = r.m;
        j["tc"] = r.tc;
        j["p"] = number(r.p);
        j["kappa"] = number(r.kappa);
        j["alpha"] = number(r.alpha);
        j["degenerate"] = !r.t_train.has_value();
        j["t_tau"] = r.t_train ? json(*r.t_train) : json(nullptr);
        j["ideal_waterfill_bits"] = number(r.ideal_waterfill_bits);
        j["ideal_asymptote_bits"] = number(r.ideal_asymptote_bits);
        j["upper_second_bits"] = number(r.upper_second_bits);
        j["upper_fourth_bits"] = number(r.upper_fourth_bits);
        j["lower_second_bits"] = r.lower_second ? number(r.lower_second->bits) : json(nullptr);
        j["lower_fourth_bits"] = r.lower_fourth ? number(r.lower_fourth->bits) : json(nullptr);
        j["lower_second_vacuous"] = r.lower_second ? json(r.lower_second->vacuous) : json(nullptr);
        j["lower_fourth_vacuous"] = r.lower_fourth ? json(r.lower_fourth->vacuous) : json(nullptr);
        os << j.dump() << '\n';
        return;
    }
    os << csv_row({"m", "tc", "p", "kappa", "alpha", "t_tau", "ideal_waterfill_bits", "ideal_asymptote_bits",
                   "upper_second_bits", "upper_fourth_bits", "lower_second_bits", "lower_fourth_bits",
                   "lower_second_vacuous", "lower_fourth_vacuous"});
    auto lower = [](const std::optional<LowerBound>& b) { return b ? format_number(b->bits) : kDegenerate; };
    auto vacuous = [](const std::optional<LowerBound>& b) {
        return b ? std::string(b->vacuous ? "true" : "false") : kDegenerate;
    };
    os << csv_row({std::to_string(r.m), std::to_string(r.tc), format_number(r.p), format_number(r.kappa),
                   format_number(r.alpha), r.t_train ? std::to_string(*r.t_train) : kDegenerate,
                   format_number(r.ideal_waterfill_bits), format_number(r.ideal_asymptote_bits),
                   format_number(r.upper_second_bits), format_number(r.upper_fourth_bits), lower(r.lower_second),
                   lower(r.lower_fourth), vacuous(r.lower_second), vacuous(r.lower_fourth)});
}

void emit_simulate(const Options& o, std::uint64_t seed, std::ostream& os) {
    struct Row {
        Constraint constraint;
        int t_train;
        McEstimate rate;
        double lower;
        double upper;
    };
    std::vector<Row> rows;
    for (Constraint c : {Constraint::SecondMoment, Constraint::FourthMoment}) {
        const ChannelConfig channel{o.m, o.tc, o.p, c, o.kappa};
        const SchemeConfig cfg = make_scheme_config(channel);
        const bool second = c == Constraint::SecondMoment;
        rows.push_back({c, cfg.t_train, estimate_scheme_rate(cfg, o.trials, seed),
                        second ? lower_second(o.m, o.tc, o.p).bits : lower_fourth(o.m, o.tc, o.p, o.kappa).bits,
                        second ? upper_second(o.m, o.tc, o.p) : upper_fourth(o.m, o.tc, o.p, o.kappa)});
    }

    if (o.format == "json") {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "simulate";
        j["rows"] = json::array();
        for (const Row& r : rows) {
            j["rows"].push_back({{"constraint", to_string(r.constraint)},
                                 {"m", o.m},
                                 {"tc", o.tc},
                                 {"p", number(o.p)},
                                 {"kappa", number(o.kappa)},
                                 {"t_tau", r.t_train},
                                 {"rate_bits", number(r.rate.mean)},
                                 {"stderr", number(r.rate.standard_error)},
                                 {"lower_bits", number(r.lower)},
                                 {"upper_bits", number(r.upper)},
                                 {"trials", r.rate.trials},
                                 {"seed", r.rate.master_seed}});
        }
        os << j.dump() << '\n';
        return;
    }
    os << csv_row({"constraint", "m", "tc", "p", "kappa", "t_tau", "rate_bits", "stderr", "lower_bits", "upper_bits",
                   "trials", "seed"});
    for (const Row& r : rows) {
        os << csv_row({to_string(r.constraint), std::to_string(o.m), std::to_string(o.tc), format_number(o.p),
                       format_number(o.kappa), std::to_string(r.t_train), format_number(r.rate.mean),
                       format_number(r.rate.standard_error), format_number(r.lower), format_number(r.upper),
                       std::to_string(r.rate.trials), std::to_string(r.rate.master_seed)});
    }
}

void emit_sweep(const Options& o, std::uint64_t seed, std::ostream& os, std::ostream& err) {
    if (o.m_list.empty()) throw UsageError("--m-list must name at least one antenna count");
    const GainSweep sweep = sweep_gain(o.alpha, o.p, o.m_list, o.trials, seed);
    for (const auto& w : sweep.warnings) err << "warning: " << w << '\n';
    if (sweep.rows.empty()) throw UsageError("every configuration in --m-list is degenerate");

    if (o.format == "json") {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "sweep-alpha";
        j["alpha"] = number(o.alpha);
        j["p"] = number(o.p);
        j["trials"] = o.trials;
        j["seed"] = seed;
        j["rows"] = json::array();
        for (const GainRow& r : sweep.rows) {
            j["rows"].push_back({{"M", r.m},
                                 {"T_c", r.tc},
                                 {"T_tau", r.t_train},
                                 {"rate_bits", number(r.rate.mean)},
                                 {"rate_over_log2M", number(r.rate_over_log2m)},
                                 {"stderr", number(r.rate.standard_error)}});
        }
        os << j.dump() << '\n';
        return;
    }
    os << csv_row({"M", "T_c", "T_tau", "rate_bits", "rate_over_log2M", "stderr"});
    for (const GainRow& r : sweep.rows) {
        os << csv_row({std::to_string(r.m), std::to_string(r.tc), std::to_string(r.t_train),
                       format_number(r.rate.mean), format_number(r.rate_over_log2m),
                       format_number(r.rate.standard_error)});
    }
}

int emit_verify(const Options& o, std::uint64_t seed, std::ostream& os, std::ostream& err) {
    if (o.trials < 10'000) throw UsageError("verify-lemmas needs --trials >= 10000");
    if (o.format != "json") throw UsageError("verify-lemmas writes JSON lines only; use --format json");
    SuiteOptions suite;
    suite.trials = o.trials;
    suite.seed = seed;
    int failures = 0;
    for (const LemmaCheckResult& r : run_lemma_suite(suite)) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["check"] = r.lemma_id;
        j["context"] = r.context;
        j["observed"] = number(r.observed);
        j["bound"] = number(r.bound);
        j["stderr"] = number(r.standard_error);
        j["slack_sigmas"] = number(r.slack_sigmas);
        j["two_sided"] = r.two_sided;
        j["pass"] = r.pass;
        j["trials"] = r.trials;
        j["seed"] = r.seed;
        os << j.dump() << '\n';
        if (!r.pass) {
            ++failures;
            err << "FAILED " << r.lemma_id << " [" << r.context << "] observed " << format_number(r.observed)
                << " vs bound " << format_number(r.bound) << '\n';
        }
    }
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

void apply_thread_limit() {
    if (const char* env = std::getenv("MISO_LAB_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) set_worker_limit(static_cast<int>(n));
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"miso_lab: MISO feedback-channel bounds, simulation and checks"};
    app.require_subcommand(1);
    Options o;

    const auto formats = CLI::IsMember({"csv", "json"});
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out_path, "write results to this file instead of stdout");
        sub->add_option("--format", o.format, "csv or json")->check(formats);
    };
    auto add_seeded = [&](CLI::App* sub) {
        sub->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed_text, "master seed (decimal or 0x-hex)");
    };

    CLI::App* bounds = app.add_subcommand("bounds", "closed-form bounds at one operating point");
    bounds->add_option("--m", o.m, "transmit antennas")->required();
    bounds->add_option("--tc", o.tc, "coherence time")->required();
    bounds->add_option("--p", o.p, "power")->required();
    bounds->add_option("--kappa", o.kappa, "fourth-moment scale");
    add_common(bounds);

    CLI::App* simulate = app.add_subcommand("simulate", "training/beamforming scheme rate under both constraints");
    simulate->add_option("--m", o.m, "transmit antennas")->required();
    simulate->add_option("--tc", o.tc, "coherence time")->required();
    simulate->add_option("--p", o.p, "power")->required();
    simulate->add_option("--kappa", o.kappa, "fourth-moment scale");
    add_seeded(simulate);
    add_common(simulate);

    CLI::App* sweep = app.add_subcommand("sweep-alpha", "scheme rate over M with T_c = M^alpha");
    sweep->add_option("--alpha", o.alpha, "coherence exponent")->required();
    sweep->add_option("--p", o.p, "power")->required();
    sweep->add_option("--m-list", o.m_list, "comma-separated antenna counts")->required()->delimiter(',');
    add_seeded(sweep);
    add_common(sweep);

    CLI::App* verify = app.add_subcommand("verify-lemmas", "Monte Carlo inequality suite, JSON lines");
    add_seeded(verify);
    add_common(verify);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }
    // verify-lemmas only speaks JSON lines unless told otherwise.
    if (verify->parsed() && verify->count("--format") == 0) o.format = "json";

    apply_thread_limit();

    std::ostringstream buffer;
    int code = kExitOk;
    try {
        const std::uint64_t seed = parse_seed(o.seed_text);
        if (bounds->parsed()) {
            emit_bounds(o, buffer);
        } else if (simulate->parsed()) {
            emit_simulate(o, seed, buffer);
        } else if (sweep->parsed()) {
            emit_sweep(o, seed, buffer, err);
        } else {
            code = emit_verify(o, seed, buffer, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (o.out_path.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!file) {
            err << "usage error: cannot open " << o.out_path << '\n';
            return kExitUsage;
        }
        file << buffer.str();
    }
    return code;
}

}  // namespace misolab::cli
