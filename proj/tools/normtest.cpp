// Command-line front end: tests on data files, critical-value tables, power studies,
// confidence intervals for Delta_a and neighbourhood-of-normality validation.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "normtest/competitors.hpp"
#include "normtest/inference.hpp"
#include "normtest/io.hpp"
#include "normtest/nulldist.hpp"
#include "normtest/parallel.hpp"
#include "normtest/samplers.hpp"
#include "normtest/simulation.hpp"
#include "normtest/standardize.hpp"
#include "normtest/statistic.hpp"

using json = nlohmann::ordered_json;
using namespace normtest;

namespace {

constexpr std::size_t kCheckpointChunk = 10000;
constexpr int kExitError = 1;
constexpr int kExitReject = 2;

struct Common {
    std::uint64_t seed = 1;
    int workers = 0;
    std::string format = "table";
    std::string output;
    bool quiet = false;
};

struct DataOptions {
    std::string input;
    bool header = false;
    bool no_header = false;
    std::string delimiter = ",";
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    app->add_option("--workers", c.workers, "Worker threads (0 = runtime default); NORMTEST_THREADS overrides")
        ->capture_default_str();
    app->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    app->add_option("--output", c.output, "Write machine output to this file instead of stdout");
    app->add_flag("--quiet", c.quiet, "Suppress progress messages");
}

void add_data(CLI::App* app, DataOptions& o) {
    app->add_option("--input", o.input, "CSV file, one observation per row")->required()->check(CLI::ExistingFile);
    app->add_flag("--header", o.header, "First row is a header");
    app->add_flag("--no-header", o.no_header, "First row is data");
    app->add_option("--delimiter", o.delimiter, "Field delimiter")->capture_default_str();
}

DataMatrix load(const DataOptions& o) {
    CsvOptions csv;
    if (o.delimiter.size() != 1) {
        throw InvalidArgument("delimiter must be a single character");
    }
    csv.delimiter = o.delimiter == "\\t" ? '\t' : o.delimiter[0];
    if (o.header && o.no_header) {
        throw InvalidArgument("--header and --no-header are mutually exclusive");
    }
    if (o.header) {
        csv.header = true;
    } else if (o.no_header) {
        csv.header = false;
    }
    return read_csv(o.input, csv);
}

void apply_workers(const Common& c) {
    int workers = c.workers;
    if (const char* env = std::getenv("NORMTEST_THREADS"); env != nullptr && *env != '\0') {
        workers = std::stoi(env);
    }
    set_worker_count(workers);
}

void progress(const Common& c, const std::string& msg) {
    if (!c.quiet) {
        std::cerr << msg << '\n';
    }
}

// Plain table with columns padded to their widest cell.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : rows) {
            width[c] = std::max(width[c], r[c].size());
        }
    }
    std::ostringstream os;
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            os << (c == 0 ? "" : "  ") << std::setw(static_cast<int>(width[c])) << cells[c];
        }
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        line(r);
    }
    return os.str();
}

std::string render_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            os << (c == 0 ? "" : ",") << cells[c];
        }
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        line(r);
    }
    return os.str();
}

void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + c.output + "'");
    }
    out << text;
}

// Emits rows as table/csv, or the given JSON document.
void emit_rows(const Common& c, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows, const json& doc) {
    if (c.format == "json") {
        emit(c, doc.dump(2) + "\n");
    } else if (c.format == "csv") {
        emit(c, render_csv(header, rows));
    } else {
        emit(c, render_table(header, rows));
    }
}

std::string fmt(double v) {
    return format_double(v);
}

// Runs replications in chunks, persisting finished chunks so an interrupted run resumes.
std::vector<double> checkpointed(const Common& c, const std::string& checkpoint, const std::string& key,
                                 std::size_t total, const std::string& label,
                                 const std::function<std::vector<double>(std::uint64_t, std::size_t)>& run) {
    std::vector<double> values;
    if (!checkpoint.empty() && std::filesystem::exists(checkpoint)) {
        std::ifstream in(checkpoint);
        json saved = json::parse(in, nullptr, false);
        if (!saved.is_discarded() && saved.contains(key)) {
            values = saved[key].get<std::vector<double>>();
            if (values.size() > total) {
                values.resize(total);
            }
            progress(c, label + ": resumed " + std::to_string(values.size()) + " replications");
        }
    }
    while (values.size() < total) {
        const std::size_t count = std::min(kCheckpointChunk, total - values.size());
        const auto chunk = run(values.size(), count);
        values.insert(values.end(), chunk.begin(), chunk.end());
        progress(c, label + ": " + std::to_string(values.size()) + "/" + std::to_string(total));
        if (!checkpoint.empty()) {
            json saved = json::object();
            if (std::filesystem::exists(checkpoint)) {
                std::ifstream in(checkpoint);
                saved = json::parse(in, nullptr, false);
                if (saved.is_discarded() || !saved.is_object()) {
                    saved = json::object();
                }
            }
            saved[key] = values;
            const std::string tmp = checkpoint + ".tmp";
            {
                std::ofstream out(tmp);
                out << saved.dump();
            }
            std::filesystem::rename(tmp, checkpoint);
        }
    }
    return values;
}

// ---------------------------------------------------------------- test

struct TestArgs {
    Common common;
    DataOptions data;
    std::vector<double> a{1.0};
    double alpha = 0.05;
    std::size_t reps = 10000;
    std::string checkpoint;
};

int cmd_test(const TestArgs& args) {
    const DataMatrix data = load(args.data);
    const StandardizedSample sample = scaled_residuals(data);
    std::vector<std::vector<std::string>> rows;
    json results = json::array();
    for (double a : args.a) {
        const StatisticValue obs = t_statistic(sample, TuningParameter(a));
        const std::string key = "test:d=" + std::to_string(obs.d) + ",n=" + std::to_string(obs.n) + ",a=" + fmt(a) +
                                ",seed=" + std::to_string(args.common.seed);
        const auto null = checkpointed(args.common, args.checkpoint, key, args.reps, "test a=" + fmt(a),
                                       [&](std::uint64_t first, std::size_t count) {
                                           return null_replicates(obs.d, obs.n, first, count, args.common.seed,
                                                                  scaled_t_statistic(obs.d, a));
                                       });
        const double p = pvalue_mc(obs.scaled, null);
        const bool reject = p <= args.alpha;
        rows.push_back({std::to_string(obs.n), std::to_string(obs.d), fmt(a), fmt(obs.value), fmt(obs.scaled), fmt(p),
                        reject ? "reject" : "retain"});
        json r;
        r["a"] = a;
        r["statistic"] = obs.value;
        r["scaled"] = obs.scaled;
        r["p_value"] = p;
        r["alpha"] = args.alpha;
        r["reject"] = reject;
        r["replications"] = args.reps;
        r["seed"] = args.common.seed;
        results.push_back(r);
    }
    json doc;
    doc["n"] = data.rows();
    doc["d"] = data.cols();
    doc["results"] = results;
    emit_rows(args.common, {"n", "d", "a", "statistic", "scaled", "p_value", "decision"}, rows, doc);
    return 0;
}

// ---------------------------------------------------------------- crit-table

struct CritArgs {
    Common common;
    std::vector<std::size_t> d{1};
    std::vector<std::string> n{"20"};
    std::vector<double> a{1.0};
    double alpha = 0.05;
    std::size_t reps = 100000;
    std::size_t m = 1000;
    std::size_t ell = 100000;
    std::string checkpoint;
};

std::optional<std::size_t> parse_n(const std::string& s) {
    if (s == "inf" || s == "infinity") {
        return std::nullopt;
    }
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw InvalidArgument("sample size must be a positive integer or 'inf', got '" + s + "'");
    }
    return static_cast<std::size_t>(v);
}

int cmd_crit_table(const CritArgs& args) {
    CriticalValueTable table;
    for (std::size_t d : args.d) {
        for (const auto& ns : args.n) {
            const auto n = parse_n(ns);
            for (double a : args.a) {
                CriticalValueEntry e;
                e.d = d;
                e.n = n;
                e.a = a;
                e.alpha = args.alpha;
                e.seed = args.common.seed;
                if (n) {
                    if (*n < d + 1) {
                        throw InvalidArgument("n must be at least d + 1");
                    }
                    const std::string key = "null:d=" + std::to_string(d) + ",n=" + std::to_string(*n) +
                                            ",a=" + fmt(a) + ",seed=" + std::to_string(args.common.seed);
                    auto values = checkpointed(args.common, args.checkpoint, key, args.reps,
                                               "crit-table d=" + std::to_string(d) + " n=" + ns + " a=" + fmt(a),
                                               [&](std::uint64_t first, std::size_t count) {
                                                   return null_replicates(d, *n, first, count, args.common.seed,
                                                                          scaled_t_statistic(d, a));
                                               });
                    std::sort(values.begin(), values.end());
                    e.quantile = critical_value(values, args.alpha);
                    e.replications = args.reps;
                } else {
                    LimitSamplerConfig cfg;
                    cfg.m = args.m;
                    cfg.ell = args.ell;
                    cfg.seed = args.common.seed;
                    progress(args.common, "crit-table d=" + std::to_string(d) + " n=inf a=" + fmt(a));
                    e.quantile = limit_quantile(d, a, args.alpha, cfg);
                    e.replications = args.ell;
                }
                table.entries.push_back(e);
            }
        }
    }
    if (args.common.format == "json") {
        emit(args.common, to_json(table).dump(2) + "\n");
    } else if (args.common.format == "csv") {
        std::ostringstream os;
        write_csv(os, table);
        emit(args.common, os.str());
    } else {
        std::vector<std::vector<std::string>> rows;
        for (const auto& e : table.entries) {
            rows.push_back({std::to_string(e.d), e.n ? std::to_string(*e.n) : "inf", fmt(e.a), fmt(e.alpha),
                            fmt(e.quantile), std::to_string(e.replications), std::to_string(e.seed)});
        }
        emit(args.common, render_table({"d", "n", "a", "alpha", "quantile", "replications", "seed"}, rows));
    }
    return 0;
}

// ---------------------------------------------------------------- power

struct PowerArgs {
    Common common;
    std::vector<std::string> alt{"normal"};
    std::size_t d = 1;
    std::size_t n = 20;
    std::vector<double> a;
    std::vector<std::string> competitors;
    double alpha = 0.05;
    std::size_t reps = 10000;
    std::size_t crit_reps = 100000;
    std::string checkpoint;
};

int cmd_power(const PowerArgs& args) {
    std::vector<CompetitorSpec> stats;
    for (double a : args.a) {
        stats.push_back({CompetitorKind::T, a});
    }
    for (const auto& s : args.competitors) {
        stats.push_back(parse_competitor(s));
    }
    if (stats.empty()) {
        stats.push_back({CompetitorKind::T, 1.0});
    }
    std::vector<AlternativeSpec> alts;
    for (const auto& s : args.alt) {
        alts.push_back(parse_alternative(s, args.d));
    }
    std::vector<double> crit;
    for (const auto& st : stats) {
        st.check(args.d);
        const std::string key = "null:" + st.label() + ",d=" + std::to_string(args.d) + ",n=" +
                                std::to_string(args.n) + ",seed=" + std::to_string(args.common.seed);
        auto values = checkpointed(args.common, args.checkpoint, key, args.crit_reps, "critical value " + st.label(),
                                   [&](std::uint64_t first, std::size_t count) {
                                       return null_replicates(args.d, args.n, first, count, args.common.seed,
                                                              [&st](const Matrix& raw) { return evaluate(st, raw); });
                                   });
        std::sort(values.begin(), values.end());
        crit.push_back(critical_value(values, args.alpha));
    }
    std::vector<std::vector<std::string>> rows;
    json results = json::array();
    for (const auto& alt : alts) {
        for (std::size_t i = 0; i < stats.size(); ++i) {
            const std::string key = "alt:" + alt.label + "," + stats[i].label() + ",d=" + std::to_string(args.d) +
                                    ",n=" + std::to_string(args.n) + ",seed=" + std::to_string(args.common.seed);
            const auto values = checkpointed(args.common, args.checkpoint, key, args.reps,
                                             alt.label + " " + stats[i].label(),
                                             [&](std::uint64_t first, std::size_t count) {
                                                 return alternative_replicates(alt, args.n, stats[i], first, count,
                                                                               args.common.seed);
                                             });
            const double power = rejection_rate(values, crit[i]);
            rows.push_back({alt.label, stats[i].label(), fmt(crit[i]), fmt(100.0 * power)});
            json r;
            r["alternative"] = alt.label;
            r["statistic"] = stats[i].label();
            r["d"] = args.d;
            r["n"] = args.n;
            r["alpha"] = args.alpha;
            r["critical_value"] = crit[i];
            r["power"] = power;
            r["replications"] = args.reps;
            r["critical_replications"] = args.crit_reps;
            r["seed"] = args.common.seed;
            results.push_back(r);
        }
    }
    emit_rows(args.common, {"alternative", "statistic", "critical_value", "power_pct"}, rows, results);
    return 0;
}

// ---------------------------------------------------------------- delta-ci / validate

struct DeltaArgs {
    Common common;
    DataOptions data;
    double a = 0.1;
    double alpha = 0.05;
    double delta0 = 0.0;
};

json estimate_json(const DeltaEstimate& est) {
    json j;
    j["n"] = est.n;
    j["d"] = est.d;
    j["a"] = est.a;
    j["delta_hat"] = est.delta_hat;
    j["sigma_hat"] = est.sigma_hat;
    j["sigma_clipped"] = est.sigma_clipped;
    return j;
}

int cmd_delta_ci(const DeltaArgs& args) {
    const StandardizedSample sample = scaled_residuals(load(args.data));
    const DeltaEstimate est = estimate_delta(sample, TuningParameter(args.a));
    const ConfidenceInterval ci = confidence_interval(est, args.alpha);
    json doc;
    doc["estimate"] = estimate_json(est);
    doc["interval"] = {{"lower", ci.lower}, {"upper", ci.upper}, {"alpha", ci.alpha}};
    emit_rows(args.common, {"n", "d", "a", "delta_hat", "sigma_hat", "lower", "upper", "alpha"},
              {{std::to_string(est.n), std::to_string(est.d), fmt(est.a), fmt(est.delta_hat), fmt(est.sigma_hat),
                fmt(ci.lower), fmt(ci.upper), fmt(ci.alpha)}},
              doc);
    if (est.sigma_clipped) {
        progress(args.common, "warning: negative variance estimate clipped to zero");
    }
    return 0;
}

int cmd_validate(const DeltaArgs& args) {
    const StandardizedSample sample = scaled_residuals(load(args.data));
    const DeltaEstimate est = estimate_delta(sample, TuningParameter(args.a));
    const ValidationDecision v = validation_test(est, args.delta0, args.alpha);
    json doc;
    doc["estimate"] = estimate_json(est);
    doc["delta0"] = args.delta0;
    doc["alpha"] = args.alpha;
    doc["threshold"] = v.threshold;
    doc["decision"] = v.reject ? "reject" : "retain";
    emit_rows(args.common, {"n", "d", "a", "delta_hat", "sigma_hat", "delta0", "threshold", "decision"},
              {{std::to_string(est.n), std::to_string(est.d), fmt(est.a), fmt(est.delta_hat), fmt(est.sigma_hat),
                fmt(args.delta0), fmt(v.threshold), v.reject ? "reject" : "retain"}},
              doc);
    return v.reject ? kExitReject : 0;
}

// ---------------------------------------------------------------- limit-quantile

struct LimitArgs {
    Common common;
    std::vector<std::size_t> d{1};
    std::vector<double> a{1.0};
    double alpha = 0.05;
    std::size_t m = 1000;
    std::size_t ell = 100000;
};

int cmd_limit_quantile(const LimitArgs& args) {
    std::vector<std::vector<std::string>> rows;
    json results = json::array();
    for (std::size_t d : args.d) {
        for (double a : args.a) {
            LimitSamplerConfig cfg;
            cfg.m = args.m;
            cfg.ell = args.ell;
            cfg.seed = args.common.seed;
            progress(args.common, "limit-quantile d=" + std::to_string(d) + " a=" + fmt(a));
            const double q = limit_quantile(d, a, args.alpha, cfg);
            const double mean = expected_limit(d, a) * scale_factor(d, a);
            rows.push_back({std::to_string(d), fmt(a), fmt(args.alpha), fmt(q), fmt(mean), std::to_string(args.m),
                            std::to_string(args.ell), std::to_string(args.common.seed)});
            json r;
            r["d"] = d;
            r["a"] = a;
            r["alpha"] = args.alpha;
            r["quantile"] = q;
            r["scaled_mean"] = mean;
            r["m"] = args.m;
            r["ell"] = args.ell;
            r["seed"] = args.common.seed;
            results.push_back(r);
        }
    }
    emit_rows(args.common, {"d", "a", "alpha", "quantile", "scaled_mean", "m", "ell", "seed"}, rows, results);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Harmonic-oscillator test for multivariate normality"};
    app.require_subcommand(1);

    TestArgs test;
    auto* t = app.add_subcommand("test", "Test a data set for normality with Monte Carlo p-values");
    add_common(t, test.common);
    add_data(t, test.data);
    t->add_option("--a", test.a, "Tuning parameter(s)")->capture_default_str();
    t->add_option("--alpha", test.alpha, "Level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    t->add_option("--reps", test.reps, "Null replications")->check(CLI::PositiveNumber)->capture_default_str();
    t->add_option("--checkpoint", test.checkpoint, "Checkpoint file for resumable runs");

    CritArgs crit;
    auto* c = app.add_subcommand("crit-table", "Simulate critical values of the scaled statistic");
    add_common(c, crit.common);
    c->add_option("--d", crit.d, "Dimension(s)")->capture_default_str();
    c->add_option("--n", crit.n, "Sample size(s); 'inf' for the limit distribution")->capture_default_str();
    c->add_option("--a", crit.a, "Tuning parameter(s)")->capture_default_str();
    c->add_option("--alpha", crit.alpha, "Level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    c->add_option("--reps", crit.reps, "Replications per finite-n cell")->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--m", crit.m, "Support points for n = inf")->capture_default_str();
    c->add_option("--ell", crit.ell, "Replicates for n = inf")->capture_default_str();
    c->add_option("--checkpoint", crit.checkpoint, "Checkpoint file for resumable runs");

    PowerArgs power;
    auto* p = app.add_subcommand("power", "Empirical power against alternatives");
    add_common(p, power.common);
    p->add_option("--alt", power.alt, "Alternative distribution(s), e.g. nmix:p=0.1,mu=3,sigma=I")
        ->capture_default_str();
    p->add_option("--d", power.d, "Dimension")->capture_default_str();
    p->add_option("--n", power.n, "Sample size")->capture_default_str();
    p->add_option("--a", power.a, "Tuning parameter(s) of T");
    p->add_option("--competitor", power.competitors, "Competitor statistic(s): bhep:a hjg:beta hv:gamma hvinf bcmr be:a");
    p->add_option("--alpha", power.alpha, "Level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    p->add_option("--reps", power.reps, "Replications per alternative")->check(CLI::PositiveNumber)
        ->capture_default_str();
    p->add_option("--crit-reps", power.crit_reps, "Null replications for critical values")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    p->add_option("--checkpoint", power.checkpoint, "Checkpoint file for resumable runs");

    DeltaArgs delta;
    auto* dc = app.add_subcommand("delta-ci", "Estimate Delta_a with an asymptotic confidence interval");
    add_common(dc, delta.common);
    add_data(dc, delta.data);
    dc->add_option("--a", delta.a, "Tuning parameter")->capture_default_str();
    dc->add_option("--alpha", delta.alpha, "Level")->check(CLI::Range(0.0, 1.0))->capture_default_str();

    DeltaArgs valid;
    auto* v = app.add_subcommand("validate", "Test Delta_a >= delta0 against Delta_a < delta0 (exit 2 = reject)");
    add_common(v, valid.common);
    add_data(v, valid.data);
    v->add_option("--a", valid.a, "Tuning parameter")->capture_default_str();
    v->add_option("--alpha", valid.alpha, "Level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    v->add_option("--delta0", valid.delta0, "Essential distance")->required();

    LimitArgs limit;
    auto* l = app.add_subcommand("limit-quantile", "Quantiles of the limit null distribution");
    add_common(l, limit.common);
    l->add_option("--d", limit.d, "Dimension(s)")->capture_default_str();
    l->add_option("--a", limit.a, "Tuning parameter(s)")->capture_default_str();
    l->add_option("--alpha", limit.alpha, "Level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    l->add_option("--m", limit.m, "Support points")->capture_default_str();
    l->add_option("--ell", limit.ell, "Replicates")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*t) {
            apply_workers(test.common);
            return cmd_test(test);
        }
        if (*c) {
            apply_workers(crit.common);
            return cmd_crit_table(crit);
        }
        if (*p) {
            apply_workers(power.common);
            return cmd_power(power);
        }
        if (*dc) {
            apply_workers(delta.common);
            return cmd_delta_ci(delta);
        }
        if (*v) {
            apply_workers(valid.common);
            return cmd_validate(valid);
        }
        if (*l) {
            apply_workers(limit.common);
            return cmd_limit_quantile(limit);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
