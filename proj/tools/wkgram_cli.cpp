#include <CLI11.hpp>
#include <json.hpp>

#include <wkgram/wkgram.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace wkgram;
using json = nlohmann::ordered_json;

enum Exit : int {
    accepted = 0,
    rejected = 1,
    exhausted = 2,
    usage = 64,
    invalid_grammar = 65,
    precondition = 66,
    internal = 70,
};

/// Failure carrying its exit code; the message goes to stderr.
struct CliFailure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw CliFailure{code, std::move(message)}; }

void print(const json& doc) { std::cout << doc.dump(2) << '\n'; }

Grammar load_valid_grammar(const std::string& path)
{
    Grammar g = [&] {
        try {
            return read_grammar_file(path);
        } catch (const grammar_error& e) {
            fail(invalid_grammar, path + ": " + e.what());
        } catch (const std::runtime_error& e) {
            fail(usage, e.what());
        }
    }();
    auto diags = validate(g);
    for (const auto& d : diags.items)
        if (d.severity == Severity::error) fail(invalid_grammar, path + ": " + d.message);
    return g;
}

std::string read_input_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(usage, "cannot open input file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto s = ss.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

template <class F>
auto parse_token(F parse, const std::string& text) -> decltype(parse(text))
{
    try {
        return parse(text);
    } catch (const std::invalid_argument& e) {
        fail(usage, e.what());
    }
}

// ---------------------------------------------------------------------------
// decide

struct DecideArgs {
    std::string grammar;
    std::optional<std::string> input;
    std::optional<std::string> input_file;
    std::string algo = "search";
    std::string precedence = "nta+tm1";
    std::string prune = "all";
    double timeout = 10.0;
    std::optional<std::uint64_t> node_limit;
    std::size_t memory_limit_mb = 0;
    std::string beta = "corrected";
};

int run_decide(const DecideArgs& a)
{
    const auto precedence = parse_token(parse_precedence, a.precedence);
    const auto prune = parse_token(parse_prune_config, a.prune);
    if (a.timeout < 0) fail(usage, "--timeout must be non-negative");
    const std::string input = a.input ? *a.input : read_input_file(*a.input_file);
    const Grammar g = load_valid_grammar(a.grammar);

    json doc;
    doc["command"] = "decide";
    doc["grammar"] = a.grammar;
    doc["engine"] = a.algo;
    doc["input_length"] = input.size();

    if (a.algo == "cyk") {
        std::optional<std::chrono::steady_clock::time_point> deadline;
        const auto t0 = std::chrono::steady_clock::now();
        if (a.timeout > 0)
            deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(a.timeout));
        CykResult res;
        try {
            res = decide_cyk(g, input, a.beta == "naive" ? BetaBounds::naive : BetaBounds::corrected, deadline);
        } catch (const precondition_error& e) {
            fail(precondition, e.what());
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        const char* decision = res.timed_out ? "exhausted" : res.accepted ? "accepted" : "rejected";
        doc["decision"] = decision;
        doc["timed_out"] = res.timed_out;
        doc["elapsed_ms"] = ms;
        doc["beta_bounds"] = a.beta;
        doc["compute_set_calls"] = res.stats.compute_set_calls;
        doc["beta_iterations"] = res.stats.beta_iterations;
        doc["table_entries"] = res.stats.table_entries;
        print(doc);
        return res.timed_out ? exhausted : res.accepted ? accepted : rejected;
    }

    SearchBudget budget;
    if (a.timeout > 0) budget.time_limit = std::chrono::duration<double>(a.timeout);
    budget.node_limit = a.node_limit;
    if (a.memory_limit_mb > 0) budget.memory_limit = a.memory_limit_mb << 20;
    if (!budget.bounded() && (g.has_lambda_rules() || !prune.tl))
        fail(precondition, "an unbounded search needs a lambda-free grammar with tl pruning active");
    const auto out = search(g, input, prune, precedence, budget);
    doc["decision"] = to_string(out.decision);
    doc["timed_out"] = out.stats.timed_out;
    doc["memory_exhausted"] = out.stats.memory_exhausted;
    doc["elapsed_ms"] = out.stats.elapsed_seconds * 1000.0;
    doc["precedence"] = to_string(precedence);
    doc["prune_set"] = to_string(prune);
    doc["expanded"] = out.stats.expanded;
    doc["generated"] = out.stats.generated;
    doc["duplicates"] = out.stats.duplicates;
    doc["enqueued"] = out.stats.enqueued;
    doc["peak_queue"] = out.stats.peak_queue;
    for (auto k : all_prune_kinds) doc["pruned_" + std::string(to_string(k))] = out.stats.pruned_by(k);
    print(doc);
    switch (out.decision) {
    case Decision::accepted: return accepted;
    case Decision::rejected: return rejected;
    case Decision::exhausted_budget: return exhausted;
    }
    return internal;
}

// ---------------------------------------------------------------------------
// transform / validate

int run_transform(const std::string& in, const std::string& out_path)
{
    const Grammar g = load_valid_grammar(in);
    auto [cnf, report] = to_wk_cnf(g);
    try {
        write_grammar_file(out_path, cnf, "WK-CNF of " + std::filesystem::path(in).filename().string());
    } catch (const std::runtime_error& e) {
        fail(usage, e.what());
    }
    std::string nullable;
    for (const auto& n : report.nullable_nonterminals) nullable += (nullable.empty() ? "" : ",") + n;
    json doc;
    doc["command"] = "transform";
    doc["grammar"] = in;
    doc["out"] = out_path;
    doc["rules_before"] = report.rules_before;
    doc["rules_after"] = report.rules_after;
    doc["fresh_symbols"] = report.fresh_symbol_count;
    doc["nullable"] = nullable;
    doc["unit_pairs"] = report.unit_pairs.size();
    doc["wk_cnf"] = is_wk_cnf(cnf);
    print(doc);
    return 0;
}

int run_validate(const std::string& path, bool require_cnf)
{
    Grammar g = [&] {
        try {
            return read_grammar_file(path);
        } catch (const grammar_error& e) {
            fail(invalid_grammar, path + ": " + e.what());
        } catch (const std::runtime_error& e) {
            fail(usage, e.what());
        }
    }();
    auto diags = validate(g);
    std::size_t errors = 0, warnings = 0;
    for (const auto& d : diags.items) {
        bool err = d.severity == Severity::error;
        (err ? errors : warnings)++;
        std::cerr << (err ? "error: " : "warning: ") << d.message << '\n';
    }
    const bool cnf = is_wk_cnf(g);
    if (require_cnf && !cnf) {
        ++errors;
        std::cerr << "error: grammar is not in WK-CNF\n";
    }
    json doc;
    doc["command"] = "validate";
    doc["grammar"] = path;
    doc["errors"] = errors;
    doc["warnings"] = warnings;
    doc["wk_cnf"] = cnf;
    doc["identity_relation"] = g.relation().is_identity_on(g.terminals());
    doc["lambda_free"] = !g.has_lambda_rules();
    doc["nonterminals"] = g.nonterminal_count();
    doc["rules"] = g.rules().size();
    print(doc);
    return errors == 0 ? 0 : invalid_grammar;
}

// ---------------------------------------------------------------------------
// gen

int run_gen(int id, std::size_t length, bool negative, std::uint64_t seed, std::size_t count)
{
    if (id < corpus::first_id || id > corpus::last_id) fail(usage, "--corpus must be in 1..20");
    const bool positive = !negative;
    for (std::size_t i = 0; i < count; ++i) {
        std::string s;
        try {
            s = corpus::gen_input(id, length, positive, seed + i);
        } catch (const std::invalid_argument& e) {
            fail(precondition, e.what());
        }
        if (corpus::oracle(id, s) != positive) fail(internal, "generated string has the wrong polarity: " + s);
        std::cout << s << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::string experiment;
    double timeout = 10.0;
    std::string out;
    std::optional<std::string> summary;
    std::optional<std::string> svg;
    std::vector<int> grammars;
    std::string forms = "basic,cnf";
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::size_t max_steps = 30;
    std::size_t sweep_length = 8;
    bool quiet = false;
};

int run_bench(const BenchArgs& a)
{
    const bool timing = a.experiment != "sweep";
    if (timing && a.jobs > 1) fail(usage, "--jobs > 1 is only allowed for the sweep experiment");
    if (a.timeout <= 0) fail(usage, "--timeout must be positive for bench");

    bench::ExperimentConfig cfg;
    cfg.time_limit_s = a.timeout;
    cfg.seed = a.seed;
    cfg.max_steps = a.max_steps;
    cfg.sweep_max_length = a.sweep_length;
    if (!a.grammars.empty()) {
        for (int id : a.grammars)
            if (id < corpus::first_id || id > corpus::last_id) fail(usage, "--grammars entries must be in 1..20");
        cfg.grammars = a.grammars;
    }
    cfg.forms.clear();
    for (std::string_view rest = a.forms; !rest.empty();) {
        auto comma = rest.find(',');
        auto tok = rest.substr(0, comma);
        if (tok == "basic") cfg.forms.push_back(corpus::Form::basic);
        else if (tok == "cnf") cfg.forms.push_back(corpus::Form::cnf);
        else fail(usage, "--forms entries must be basic or cnf");
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (cfg.forms.empty()) fail(usage, "--forms is empty");
    if (!a.quiet)
        cfg.progress = [](const bench::RunRecord& r) { std::cerr << bench::to_csv_row(r) << '\n'; };

    bench::Report rep;
    if (a.experiment == "precedence") rep = bench::run_precedence_experiment(cfg);
    else if (a.experiment == "pruning") rep = bench::run_pruning_experiment(cfg);
    else if (a.experiment == "scaling-search") rep = bench::run_scaling_experiment(bench::Engine::search, cfg);
    else if (a.experiment == "scaling-cyk") rep = bench::run_scaling_experiment(bench::Engine::cyk, cfg);
    else rep = bench::run_oracle_sweep(cfg, a.jobs);

    auto write = [](const std::string& path, auto&& body) {
        std::ofstream f(path, std::ios::binary);
        if (!f) fail(usage, "cannot write " + path);
        body(f);
    };
    write(a.out, [&](std::ostream& f) { bench::write_csv(f, rep.records); });
    const auto summary = a.summary ? *a.summary
                                   : (std::filesystem::path(a.out).replace_extension().string() + ".summary.csv");
    write(summary, [&](std::ostream& f) { bench::write_summary(f, rep.metrics); });
    if (a.svg) write(*a.svg, [&](std::ostream& f) { bench::write_scaling_svg(f, rep.records); });

    json doc;
    doc["command"] = "bench";
    doc["experiment"] = a.experiment;
    doc["rows"] = rep.records.size();
    doc["configurations"] = rep.metrics.size();
    doc["oracle_mismatches"] = rep.oracle_mismatches;
    doc["csv"] = a.out;
    doc["summary"] = summary;
    print(doc);
    return rep.oracle_mismatches == 0 ? 0 : rejected;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Watson-Crick grammar membership, normal form and benchmark tool"};
    app.require_subcommand(1);
    int code = 0;

    DecideArgs d;
    auto* decide = app.add_subcommand("decide", "decide membership of an input string");
    decide->add_option("--grammar", d.grammar, "grammar file")->required();
    auto* in = decide->add_option("--input", d.input, "input string");
    auto* in_file = decide->add_option("--input-file", d.input_file, "file holding the input string");
    in->excludes(in_file);
    decide->add_option("--algo", d.algo, "engine")->check(CLI::IsMember({"search", "cyk"}))->capture_default_str();
    decide->add_option("--precedence", d.precedence, "node precedence heuristic")->capture_default_str();
    decide->add_option("--prune", d.prune, "all, none, or a comma list over sl,tl,ws,rl,re")->capture_default_str();
    decide->add_option("--timeout", d.timeout, "seconds; 0 disables the time bound")->capture_default_str();
    decide->add_option("--node-limit", d.node_limit, "maximum search expansions");
    decide->add_option("--memory-limit", d.memory_limit_mb, "MiB for the search's visited set and queue; 0 disables")
        ->capture_default_str();
    decide->add_option("--beta", d.beta, "CYK beta bounds")
        ->check(CLI::IsMember({"corrected", "naive"}))
        ->capture_default_str();

    std::string t_grammar, t_out;
    auto* transform = app.add_subcommand("transform", "convert a grammar to WK-CNF");
    transform->add_option("--grammar", t_grammar, "grammar file")->required();
    transform->add_option("--out", t_out, "output grammar file")->required();

    std::string v_grammar;
    bool v_cnf = false;
    auto* validate_cmd = app.add_subcommand("validate", "check a grammar file");
    validate_cmd->add_option("--grammar", v_grammar, "grammar file")->required();
    validate_cmd->add_flag("--require-cnf", v_cnf, "also fail when the grammar is not in WK-CNF");

    int g_id = 0;
    std::size_t g_len = 0, g_count = 1;
    bool g_pos = false, g_neg = false;
    std::uint64_t g_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate corpus inputs of a given polarity");
    gen->add_option("--corpus", g_id, "corpus grammar id")->required();
    gen->add_option("--length", g_len, "input length")->required();
    auto* pos = gen->add_flag("--positive", g_pos, "members of the language (default)");
    auto* neg = gen->add_flag("--negative", g_neg, "non-members over the same alphabet");
    pos->excludes(neg);
    gen->add_option("--seed", g_seed, "generator seed")->capture_default_str();
    gen->add_option("--count", g_count, "strings to print, seeds seed..seed+count-1")->capture_default_str();

    BenchArgs b;
    auto* benchmark = app.add_subcommand("bench", "run a benchmark experiment over the corpus");
    benchmark->add_option("--experiment", b.experiment, "experiment")
        ->required()
        ->check(CLI::IsMember({"precedence", "pruning", "scaling-search", "scaling-cyk", "sweep"}));
    benchmark->add_option("--timeout", b.timeout, "per-run limit in seconds")->capture_default_str();
    benchmark->add_option("--out", b.out, "CSV output path")->required();
    benchmark->add_option("--summary", b.summary, "aggregate output path");
    benchmark->add_option("--svg", b.svg, "SVG chart output path");
    benchmark->add_option("--grammars", b.grammars, "corpus ids (default all)")->delimiter(',');
    benchmark->add_option("--forms", b.forms, "basic,cnf subset")->capture_default_str();
    benchmark->add_option("--seed", b.seed, "input generator seed")->capture_default_str();
    benchmark->add_option("--jobs", b.jobs, "worker threads; sweep only")->capture_default_str();
    benchmark->add_option("--max-steps", b.max_steps, "scaling run cap")->capture_default_str();
    benchmark->add_option("--sweep-length", b.sweep_length, "sweep length cap")->capture_default_str();
    benchmark->add_flag("--quiet", b.quiet, "no per-run progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*decide) {
            if (!d.input && !d.input_file) fail(usage, "decide needs --input or --input-file");
            code = run_decide(d);
        } else if (*transform) {
            code = run_transform(t_grammar, t_out);
        } else if (*validate_cmd) {
            code = run_validate(v_grammar, v_cnf);
        } else if (*gen) {
            code = run_gen(g_id, g_len, g_neg, g_seed, g_count);
        } else if (*benchmark) {
            code = run_bench(b);
        }
    } catch (const CliFailure& f) {
        std::cerr << "wkgram-cli: " << f.message << '\n';
        return f.code;
    } catch (const grammar_error& e) {
        std::cerr << "wkgram-cli: " << e.what() << '\n';
        return invalid_grammar;
    } catch (const std::exception& e) {
        std::cerr << "wkgram-cli: internal error: " << e.what() << '\n';
        return internal;
    }
    return code;
}
