#ifndef WKGRAM_BENCH_HPP
#define WKGRAM_BENCH_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "corpus.hpp"
#include "cyk.hpp"
#include "search.hpp"

namespace wkgram::bench {

enum class Engine { search, cyk };

inline std::string_view to_string(Engine e) { return e == Engine::search ? "search" : "cyk"; }

struct RunRecord {
    std::string experiment;
    int grammar = 0;
    corpus::Form form = corpus::Form::basic;
    bool positive = true;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    Engine engine = Engine::search;
    std::string precedence;  ///< empty for cyk
    std::string prune_set;   ///< empty for cyk
    std::string decision;    ///< accepted | rejected | exhausted
    bool timed_out = false;
    double elapsed_ms = 0.0;
    /// Search: expanded nodes. CYK: compute_set calls.
    std::uint64_t nodes_expanded = 0;
    std::array<std::uint64_t, 5> nodes_pruned{};

    /// Test identity: the same input under different configurations.
    std::string test_key() const
    {
        std::ostringstream o;
        o << grammar << '/' << corpus::to_string(form) << '/' << (positive ? "pos" : "neg") << '/' << length << '/'
          << seed;
        return o.str();
    }
    std::string config_key() const
    {
        if (engine == Engine::cyk) return "cyk";
        return precedence + " " + prune_set;
    }
};

inline constexpr std::string_view csv_header =
    "experiment,grammar,form,polarity,length,seed,engine,precedence,prune_set,decision,timed_out,elapsed_ms,"
    "nodes_expanded,nodes_pruned_sl,nodes_pruned_tl,nodes_pruned_ws,nodes_pruned_rl,nodes_pruned_re";

namespace detail {

inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace detail

inline std::string to_csv_row(const RunRecord& r)
{
    std::ostringstream o;
    o << detail::csv_field(r.experiment) << ',' << r.grammar << ',' << corpus::to_string(r.form) << ','
      << (r.positive ? "positive" : "negative") << ',' << r.length << ',' << r.seed << ',' << to_string(r.engine) << ','
      << detail::csv_field(r.precedence) << ',' << detail::csv_field(r.prune_set) << ',' << r.decision << ','
      << (r.timed_out ? "true" : "false") << ',' << std::fixed << std::setprecision(3) << r.elapsed_ms << ','
      << r.nodes_expanded;
    for (auto p : r.nodes_pruned) o << ',' << p;
    return o.str();
}

inline void write_csv(std::ostream& out, const std::vector<RunRecord>& records)
{
    out << csv_header << '\n';
    for (const auto& r : records) out << to_csv_row(r) << '\n';
}

inline std::vector<RunRecord> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != csv_header) throw std::runtime_error("read_csv: unexpected header");
    std::vector<RunRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 18) throw std::runtime_error("read_csv: expected 18 fields, got " + std::to_string(f.size()));
        RunRecord r;
        r.experiment = f[0];
        r.grammar = std::stoi(f[1]);
        r.form = f[2] == "cnf" ? corpus::Form::cnf : corpus::Form::basic;
        r.positive = f[3] == "positive";
        r.length = std::stoull(f[4]);
        r.seed = std::stoull(f[5]);
        r.engine = f[6] == "cyk" ? Engine::cyk : Engine::search;
        r.precedence = f[7];
        r.prune_set = f[8];
        r.decision = f[9];
        r.timed_out = f[10] == "true";
        r.elapsed_ms = std::stod(f[11]);
        r.nodes_expanded = std::stoull(f[12]);
        for (std::size_t k = 0; k < 5; ++k) r.nodes_pruned[k] = std::stoull(f[13 + k]);
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Aggregates

struct AggregateMetrics {
    std::string configuration;
    std::size_t runs = 0;
    std::size_t timeout_count = 0;
    double penalized_total_ms = 0.0;  ///< incomplete runs count as twice the limit
    double normalized_total = 0.0;    ///< sum over tests of elapsed / fastest elapsed
};

/// False when the run hit its time or memory budget.
inline bool completed(const RunRecord& r) { return !r.timed_out && r.decision != "exhausted"; }

/// Time charged to a run: twice the limit when it did not complete.
inline double penalized_ms(const RunRecord& r, double limit_ms)
{
    return completed(r) ? r.elapsed_ms : 2.0 * limit_ms;
}

/// Aggregates per configuration, in order of first appearance. Times below
/// `floor_ms` are raised to it before normalizing so sub-resolution runs do
/// not divide by zero.
inline std::vector<AggregateMetrics> aggregate(const std::vector<RunRecord>& records, double limit_ms,
                                               double floor_ms = 1e-3)
{
    std::map<std::string, double> fastest;
    for (const auto& r : records) {
        double t = std::max(penalized_ms(r, limit_ms), floor_ms);
        auto [it, fresh] = fastest.emplace(r.test_key(), t);
        if (!fresh) it->second = std::min(it->second, t);
    }
    std::vector<AggregateMetrics> out;
    std::map<std::string, std::size_t> slot;
    for (const auto& r : records) {
        auto key = r.config_key();
        auto [it, fresh] = slot.emplace(key, out.size());
        if (fresh) out.push_back({key});
        auto& m = out[it->second];
        ++m.runs;
        if (r.timed_out) ++m.timeout_count;
        double t = penalized_ms(r, limit_ms);
        m.penalized_total_ms += t;
        m.normalized_total += std::max(t, floor_ms) / fastest.at(r.test_key());
    }
    return out;
}

inline void write_summary(std::ostream& out, const std::vector<AggregateMetrics>& metrics)
{
    out << "configuration,runs,timeouts,penalized_total_ms,normalized_total\n";
    for (const auto& m : metrics)
        out << detail::csv_field(m.configuration) << ',' << m.runs << ',' << m.timeout_count << ',' << std::fixed
            << std::setprecision(3) << m.penalized_total_ms << ',' << std::setprecision(4) << m.normalized_total
            << '\n';
}

// ---------------------------------------------------------------------------
// Single runs

struct RunSpec {
    int grammar = 1;
    corpus::Form form = corpus::Form::basic;
    bool positive = true;
    std::size_t length = 1;
    std::uint64_t seed = 1;
};

inline RunRecord blank_record(std::string_view experiment, const RunSpec& spec)
{
    RunRecord r;
    r.experiment = std::string(experiment);
    r.grammar = spec.grammar;
    r.form = spec.form;
    r.positive = spec.positive;
    r.length = spec.length;
    r.seed = spec.seed;
    return r;
}

/// Visited-set and queue cap for benchmark searches.
inline constexpr std::size_t default_memory_limit = std::size_t{1} << 30;

/// Times one search call; grammar load and input generation are excluded.
/// A run that exceeds `memory_limit` is recorded as exhausted, not timed out.
inline RunRecord run_search(std::string_view experiment, const RunSpec& spec, std::string_view input,
                            PrecedenceKind precedence, const PruneConfig& prune, double limit_s,
                            std::size_t memory_limit = default_memory_limit)
{
    const auto& g = corpus::load(spec.grammar, spec.form);
    auto r = blank_record(experiment, spec);
    r.engine = Engine::search;
    r.precedence = std::string(to_string(precedence));
    r.prune_set = to_string(prune);
    const auto t0 = std::chrono::steady_clock::now();
    auto outcome = search(g, input, prune, precedence, SearchBudget::seconds(limit_s).with_memory_limit(memory_limit));
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.decision = std::string(to_string(outcome.decision));
    r.timed_out = outcome.stats.timed_out;
    if (r.timed_out) r.elapsed_ms = std::max(r.elapsed_ms, limit_s * 1000.0);
    r.nodes_expanded = outcome.stats.expanded;
    r.nodes_pruned = outcome.stats.pruned;
    return r;
}

inline RunRecord run_cyk(std::string_view experiment, const RunSpec& spec, std::string_view input, double limit_s)
{
    const auto& g = corpus::load(spec.grammar, corpus::Form::cnf);
    auto r = blank_record(experiment, spec);
    r.form = corpus::Form::cnf;
    r.engine = Engine::cyk;
    const auto t0 = std::chrono::steady_clock::now();
    auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(limit_s));
    auto res = decide_cyk(g, input, BetaBounds::corrected, deadline);
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.timed_out = res.timed_out;
    r.decision = res.timed_out ? "exhausted" : (res.accepted ? "accepted" : "rejected");
    if (r.timed_out) r.elapsed_ms = std::max(r.elapsed_ms, limit_s * 1000.0);
    r.nodes_expanded = res.stats.compute_set_calls;
    return r;
}

/// A completed run whose decision disagrees with the oracle.
inline bool contradicts_oracle(const RunRecord& r)
{
    if (r.decision == "exhausted") return false;
    return (r.decision == "accepted") != r.positive;
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
    double time_limit_s = 10.0;
    std::uint64_t seed = 1;
    std::vector<int> grammars = {1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
                                 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
    std::vector<corpus::Form> forms = {corpus::Form::basic, corpus::Form::cnf};
    /// Calibration band as fractions of the time limit.
    double calibrate_low = 0.1;
    double calibrate_high = 0.5;
    std::size_t min_length = 1;
    std::size_t max_length = 4096;
    /// Scaling: run count cap and multiplicative length growth per step.
    std::size_t max_steps = 30;
    double growth = 1.3;
    /// Oracle sweep: longest exhaustive length, and cap on strings per length.
    std::size_t sweep_max_length = 8;
    std::size_t sweep_max_strings = 4096;
    /// Receives one line per completed run; may be empty.
    std::function<void(const RunRecord&)> progress;
};

struct Report {
    std::vector<RunRecord> records;
    std::vector<AggregateMetrics> metrics;
    std::size_t oracle_mismatches = 0;
};

namespace detail {

inline void record(Report& rep, const ExperimentConfig& cfg, RunRecord r)
{
    if (contradicts_oracle(r)) ++rep.oracle_mismatches;
    if (cfg.progress) cfg.progress(r);
    rep.records.push_back(std::move(r));
}

inline std::optional<std::size_t> feasible_at_least(int id, std::size_t length, bool positive, std::size_t cap)
{
    auto ok = [&](std::size_t l) { return positive ? corpus::has_positive(id, l) : corpus::has_negative(id, l); };
    for (std::size_t l = length; l <= cap && l <= length + 64; ++l)
        if (ok(l)) return l;
    return std::nullopt;
}

}  // namespace detail

/// Grows the input length until the all-on / NTA+TM1 search takes between
/// the calibration band fractions of the limit, bisecting once overshot.
/// Returns the longest length found that stays below the band's top.
inline std::size_t calibrate_length(int id, corpus::Form form, bool positive, const ExperimentConfig& cfg)
{
    const double low = cfg.calibrate_low * cfg.time_limit_s;
    const double high = cfg.calibrate_high * cfg.time_limit_s;
    auto first = detail::feasible_at_least(id, cfg.min_length, positive, cfg.max_length);
    if (!first) throw std::invalid_argument("calibrate_length: no feasible length for grammar " + std::to_string(id));

    auto time_at = [&](std::size_t len) {
        auto input = corpus::gen_input(id, len, positive, cfg.seed);
        const auto t0 = std::chrono::steady_clock::now();
        auto out = search(corpus::load(id, form), input, PruneConfig::all(), PrecedenceKind::nta_tm1,
                          SearchBudget::seconds(high).with_memory_limit(default_memory_limit));
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out.decision == Decision::exhausted_budget ? 2.0 * high : s;
    };

    std::size_t fast = *first;  // longest length known to finish below `high`
    double t = time_at(fast);
    if (t > high || t >= low) return fast;
    std::optional<std::size_t> slow;
    while (!slow) {
        auto grown = static_cast<std::size_t>(std::ceil(static_cast<double>(fast) * 2.0));
        auto next = detail::feasible_at_least(id, std::max(grown, fast + 1), positive, cfg.max_length);
        if (!next) return fast;
        t = time_at(*next);
        if (t > high) slow = *next;
        else {
            fast = *next;
            if (t >= low) return fast;
        }
    }
    while (*slow > fast + 1) {
        auto mid = detail::feasible_at_least(id, fast + (*slow - fast) / 2, positive, *slow - 1);
        if (!mid || *mid <= fast) break;
        t = time_at(*mid);
        if (t > high) slow = *mid;
        else {
            fast = *mid;
            if (t >= low) return fast;
        }
    }
    return fast;
}

/// Each corpus grammar and form with one positive input; one run per
/// precedence kind with all pruning active.
inline Report run_precedence_experiment(const ExperimentConfig& cfg)
{
    Report rep;
    for (int id : cfg.grammars)
        for (auto form : cfg.forms) {
            RunSpec spec{id, form, true, calibrate_length(id, form, true, cfg), cfg.seed};
            auto input = corpus::gen_input(id, spec.length, true, cfg.seed);
            for (auto kind : all_precedence_kinds)
                detail::record(rep, cfg,
                               run_search("precedence", spec, input, kind, PruneConfig::all(), cfg.time_limit_s));
        }
    rep.metrics = aggregate(rep.records, cfg.time_limit_s * 1000.0);
    return rep;
}

/// The seven pruning configurations: all, none and each leave-one-out.
inline std::vector<PruneConfig> pruning_configurations()
{
    std::vector<PruneConfig> out{PruneConfig::all(), PruneConfig::none()};
    for (auto k : all_prune_kinds) out.push_back(PruneConfig::all().without(k));
    return out;
}

/// Each corpus grammar and form with one positive and one negative input;
/// seven pruning configurations with NTA+TM1.
inline Report run_pruning_experiment(const ExperimentConfig& cfg)
{
    Report rep;
    for (int id : cfg.grammars)
        for (auto form : cfg.forms)
            for (bool positive : {true, false}) {
                RunSpec spec{id, form, positive, calibrate_length(id, form, positive, cfg), cfg.seed};
                auto input = corpus::gen_input(id, spec.length, positive, cfg.seed);
                for (const auto& prune : pruning_configurations())
                    detail::record(rep, cfg,
                                   run_search("pruning", spec, input, PrecedenceKind::nta_tm1, prune, cfg.time_limit_s));
            }
    rep.metrics = aggregate(rep.records, cfg.time_limit_s * 1000.0);
    return rep;
}

/// Grammars the CYK engine accepts: identity relation in CNF form.
inline bool cyk_applicable(int id)
{
    const auto& g = corpus::load(id, corpus::Form::cnf);
    return g.relation().is_identity_on(g.terminals());
}

/// Increasing input lengths per grammar, form and polarity until a run
/// times out or `max_steps` runs complete. The CYK engine only uses the CNF
/// forms of identity-relation grammars.
inline Report run_scaling_experiment(Engine engine, const ExperimentConfig& cfg)
{
    Report rep;
    for (int id : cfg.grammars) {
        if (engine == Engine::cyk && !cyk_applicable(id)) continue;
        for (auto form : cfg.forms) {
            if (engine == Engine::cyk && form != corpus::Form::cnf) continue;
            for (bool positive : {true, false}) {
                auto len = detail::feasible_at_least(id, cfg.min_length, positive, cfg.max_length);
                for (std::size_t step = 0; len && step < cfg.max_steps; ++step) {
                    RunSpec spec{id, form, positive, *len, cfg.seed};
                    auto input = corpus::gen_input(id, *len, positive, cfg.seed);
                    auto r = engine == Engine::search
                                 ? run_search("scaling", spec, input, PrecedenceKind::nta_tm1, PruneConfig::all(),
                                              cfg.time_limit_s)
                                 : run_cyk("scaling", spec, input, cfg.time_limit_s);
                    bool stop = !completed(r);
                    detail::record(rep, cfg, std::move(r));
                    if (stop) break;
                    auto grown = static_cast<std::size_t>(std::ceil(static_cast<double>(*len) * cfg.growth));
                    len = detail::feasible_at_least(id, std::max(grown, *len + 1), positive, cfg.max_length);
                }
            }
        }
    }
    rep.metrics = aggregate(rep.records, cfg.time_limit_s * 1000.0);
    return rep;
}

/// Longest length L <= cfg.sweep_max_length with |alphabet|^L within
/// cfg.sweep_max_strings.
inline std::size_t sweep_length(int id, const ExperimentConfig& cfg)
{
    const auto k = corpus::alphabet(id).size();
    std::size_t len = 0, count = 1;
    while (len < cfg.sweep_max_length && count * k <= cfg.sweep_max_strings) {
        count *= k;
        ++len;
    }
    return len;
}

/// Correctness-only sweep: every string over each grammar's alphabet up to
/// sweep_length, decided by the all-on NTA+TM1 search. A record's seed is the
/// string's lexicographic rank among strings of its length. Timings are not
/// comparable across records when `jobs` > 1.
inline Report run_oracle_sweep(const ExperimentConfig& cfg, unsigned jobs = 1)
{
    struct Task {
        RunSpec spec;
        std::string input;
    };
    std::vector<Task> tasks;
    for (int id : cfg.grammars) {
        const auto alpha = corpus::alphabet(id);
        for (auto form : cfg.forms) {
            corpus::load(id, form);
            std::vector<std::string> layer{""};
            for (std::size_t len = 0; len <= sweep_length(id, cfg); ++len) {
                for (std::size_t rank = 0; rank < layer.size(); ++rank)
                    tasks.push_back({{id, form, corpus::oracle(id, layer[rank]), len, rank}, layer[rank]});
                std::vector<std::string> next;
                for (const auto& s : layer)
                    for (char c : alpha) next.push_back(s + c);
                layer = std::move(next);
            }
        }
    }
    std::vector<RunRecord> out(tasks.size());
    std::atomic<std::size_t> cursor{0};
    std::mutex progress_mu;
    auto worker = [&] {
        for (std::size_t i = cursor++; i < tasks.size(); i = cursor++) {
            out[i] = run_search("sweep", tasks[i].spec, tasks[i].input, PrecedenceKind::nta_tm1, PruneConfig::all(),
                                cfg.time_limit_s);
            if (cfg.progress) {
                std::lock_guard lock(progress_mu);
                cfg.progress(out[i]);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::max(jobs, 1u); ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    Report rep;
    rep.records = std::move(out);
    for (const auto& r : rep.records)
        if (contradicts_oracle(r)) ++rep.oracle_mismatches;
    rep.metrics = aggregate(rep.records, cfg.time_limit_s * 1000.0);
    return rep;
}

struct ScalingPoint {
    double length;
    double time_ms;
};

/// Least-squares slope of log(time) against log(length), over points whose
/// time is at least `noise_floor_ms`. Needs four such points.
inline double fit_loglog_slope(const std::vector<ScalingPoint>& rows, double noise_floor_ms = 10.0)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
        if (r.time_ms >= noise_floor_ms && r.length > 0) pts.emplace_back(std::log(r.length), std::log(r.time_ms));
    if (pts.size() < 4)
        throw std::invalid_argument("fit_loglog_slope: need at least 4 rows above the noise floor, got " +
                                    std::to_string(pts.size()));
    double mx = 0, my = 0;
    for (auto [x, y] : pts) mx += x, my += y;
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0) throw std::invalid_argument("fit_loglog_slope: all lengths equal");
    return sxy / sxx;
}

/// Minimal SVG line chart: one polyline per grammar/form/polarity series,
/// time (ms) against length on linear axes.
inline void write_scaling_svg(std::ostream& out, const std::vector<RunRecord>& records)
{
    std::map<std::string, std::vector<ScalingPoint>> series;
    double max_len = 1, max_t = 1;
    for (const auto& r : records) {
        auto key = "g" + std::to_string(r.grammar) + " " + std::string(corpus::to_string(r.form)) + " " +
                   (r.positive ? "pos" : "neg") + " " + std::string(to_string(r.engine));
        series[key].push_back({static_cast<double>(r.length), r.elapsed_ms});
        max_len = std::max(max_len, static_cast<double>(r.length));
        max_t = std::max(max_t, r.elapsed_ms);
    }
    const double w = 800, h = 500, pad = 50;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << pad << "\" y=\"" << h - 10 << "\" font-size=\"12\">length (max " << max_len
        << ")</text>\n";
    out << "<text x=\"5\" y=\"20\" font-size=\"12\">time ms (max " << std::fixed << std::setprecision(1) << max_t
        << ")</text>\n";
    std::size_t hue = 0;
    for (const auto& [name, pts] : series) {
        out << "<polyline fill=\"none\" stroke=\"hsl(" << (hue * 47) % 360 << ",70%,40%)\" points=\"";
        for (const auto& p : pts)
            out << std::setprecision(1) << pad + p.length / max_len * (w - 2 * pad) << ','
                << h - pad - p.time_ms / max_t * (h - 2 * pad) << ' ';
        out << "\"><title>" << name << "</title></polyline>\n";
        ++hue;
    }
    out << "</svg>\n";
}

}  // namespace wkgram::bench

#endif  // WKGRAM_BENCH_HPP
