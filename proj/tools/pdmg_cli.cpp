// Command-line front end. Exit codes: 0 ok, 1 unexpected failure, 2 bad
// input, 3 model or coverage error, 4 resource cap exceeded.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdmg/chart.hpp"
#include "pdmg/corpus.hpp"
#include "pdmg/errors.hpp"
#include "pdmg/lexicon.hpp"
#include "pdmg/model.hpp"
#include "pdmg/serialization.hpp"
#include "pdmg/special.hpp"
#include "pdmg/structure.hpp"
#include "pdmg/vb.hpp"
#include "pdmg/wellformed.hpp"

namespace {

using namespace pdmg;

struct Options
{
    std::string lexicon;
    std::string input; // empty or "-" reads stdin
    std::string theta_file;
    std::string start = "c";
    bool trace = false;
    bool tree = false;
    bool sentences = false;
    std::size_t max_derivations = ParseConfig{}.max_derivations;
    std::size_t max_steps = ParseConfig{}.max_eval_steps;
    std::size_t max_covert = ParseConfig{}.max_covert;
    unsigned threads = 1;

    std::size_t n = 1;
    std::uint64_t seed = 0;
    std::size_t max_depth = SamplerConfig{}.max_depth;
    std::size_t max_rejections = SamplerConfig{}.max_rejections;

    std::string corpus;
    double alpha = 1.0;
    std::string alpha_file;
    double tol = TrainConfig{}.tol;
    std::size_t max_iters = TrainConfig{}.max_iters;
    bool skip_unparsed = false;
    std::string out;
    bool quiet = false;
};

std::vector<std::string> read_lines(const std::string& path)
{
    std::vector<std::string> lines;
    auto slurp = [&](std::istream& in) {
        for (std::string line; std::getline(in, line);) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            lines.push_back(line);
        }
    };
    if (path.empty() || path == "-") {
        slurp(std::cin);
    } else {
        std::ifstream in(path);
        if (!in) throw InputError("cannot read " + path);
        slurp(in);
    }
    return lines;
}

ParseConfig parse_config(const Options& o)
{
    ParseConfig cfg;
    cfg.start_category = o.start;
    cfg.max_derivations = o.max_derivations;
    cfg.max_eval_steps = o.max_steps;
    cfg.max_covert = o.max_covert;
    return cfg;
}

Theta theta_for(const Lexicon& lex, const Options& o)
{
    return o.theta_file.empty() ? uniform_theta(lex) : load_theta(lex, o.theta_file);
}

std::string format_double(double v)
{
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_validate(const Options& o)
{
    const auto lex = Lexicon::load(o.lexicon);
    std::cout << "items: " << lex.size() << "\n";
    std::cout << "categories: " << lex.num_categories() << "\n";
    const auto sizes = lex.category_sizes();
    for (std::size_t k = 0; k < sizes.size(); ++k)
        std::cout << "  " << lex.categories()[k] << "  M=" << sizes[k] << "\n";

    // Two items carrying the same leading licensee can become movers in one
    // expression, which the shortest-move constraint forbids.
    std::map<std::string, std::vector<ItemId>> by_licensee;
    for (auto id : lex.file_order()) {
        for (const auto& f : lex.item(id).features) {
            if (f.kind != FeatureKind::Licensee) continue;
            by_licensee[f.name].push_back(id);
            break;
        }
    }
    for (const auto& [name, ids] : by_licensee) {
        if (ids.size() < 2) continue;
        std::cout << "warning: SMC risk: " << ids.size() << " items lead with -" << name << ":";
        for (auto id : ids) std::cout << ' ' << lex.reference(id);
        std::cout << "\n";
    }
    return 0;
}

int cmd_check_seq(const Options& o)
{
    const auto lex = Lexicon::load(o.lexicon);
    for (const auto& line : read_lines(o.input)) {
        const auto seq = lex.resolve_sequence(line);
        if (o.trace) {
            std::cout << format_trace(trace_wellformed(lex, seq));
        } else {
            std::cout << (is_wellformed(lex, seq) ? "true" : "false") << "\n";
        }
    }
    return 0;
}

int cmd_derive(const Options& o)
{
    const auto lex = Lexicon::load(o.lexicon);
    for (const auto& line : read_lines(o.input)) {
        const auto seq = lex.resolve_sequence(line);
        const auto tree = seq_to_tree(lex, seq);
        std::cout << eval_sequence(lex, seq) << "\n";
        if (o.tree) std::cout << render_tree(lex, tree) << "\n";
    }
    return 0;
}

Json references_json(const Lexicon& lex, const ItemSequence& seq)
{
    Json out = Json::array();
    for (auto id : seq) out.push_back(lex.reference(id));
    return out;
}

int cmd_parse(const Options& o)
{
    const auto lex = Lexicon::load(o.lexicon);
    std::vector<std::vector<std::string>> sentences;
    for (const auto& line : read_lines(o.input)) sentences.push_back(tokenize(line));
    const auto forests = parse_all(sentences, lex, parse_config(o), o.threads);
    for (std::size_t n = 0; n < forests.size(); ++n) {
        Json rec = Json::object();
        rec["sentence"] = detokenize(sentences[n]);
        rec["derivations"] = Json::array();
        for (const auto& seq : forests[n].sequences) rec["derivations"].push_back(references_json(lex, seq));
        rec["count"] = forests[n].count();
        std::cout << rec.dump() << "\n";
    }
    return 0;
}

int cmd_score(const Options& o)
{
    const auto lex = Lexicon::load(o.lexicon);
    const Pdmg g(lex, theta_for(lex, o));
    for (const auto& line : read_lines(o.input)) {
        if (!o.sentences) {
            std::cout << format_double(log_prob_of_derivation(g, lex.resolve_sequence(line))) << "\n";
            continue;
        }
        const auto tokens = tokenize(line);
        const auto forest = parse(tokens, lex, parse_config(o));
        std::vector<double> logs;
        for (const auto& seq : forest.sequences) logs.push_back(log_prob_of_derivation(g, seq));
        std::cout << format_double(log_sum_exp(logs)) << "\n";
    }
    return 0;
}

int cmd_sample(const Options& o)
{
    const auto lex = Lexicon::load(o.lexicon);
    const Pdmg g(lex, theta_for(lex, o));
    SamplerConfig cfg;
    cfg.max_depth = o.max_depth;
    cfg.max_rejections = o.max_rejections;
    Rng rng(o.seed);
    for (std::size_t i = 0; i < o.n; ++i) {
        const auto seq = sample_derivation(g, o.start, cfg, rng);
        std::cout << format_references(lex, seq) << "\n";
    }
    return 0;
}

int cmd_train(const Options& o)
{
    const auto lex = Lexicon::load(o.lexicon);
    const auto corpus = Corpus::load(o.corpus);
    const auto alpha = o.alpha_file.empty() ? symmetric_alpha(lex, o.alpha) : load_alpha(lex, o.alpha_file);

    TrainConfig cfg;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.parse = parse_config(o);
    cfg.skip_unparsed = o.skip_unparsed;
    cfg.threads = o.threads;
    const auto state = train(corpus, lex, alpha, cfg);

    const auto text = dump(train_result_json(lex, state));
    if (o.out.empty() || o.out == "-") {
        std::cout << text;
    } else {
        std::ofstream out(o.out, std::ios::binary);
        if (!out) throw InputError("cannot write " + o.out);
        out << text;
    }

    if (!o.quiet && !(o.out.empty() || o.out == "-")) {
        std::cout << "iter  elbo_surrogate\n";
        for (std::size_t i = 0; i < state.elbo_trace.size(); ++i)
            std::cout << std::setw(4) << i << "  " << format_double(state.elbo_trace[i]) << "\n";
        std::cout << (state.converged ? "converged" : "not converged") << " at iteration " << state.iterations
                  << "\n";
        for (auto n : state.unparsed)
            std::cout << "skipped sentence " << n << ": " << detokenize(corpus.sentences[n]) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Probabilistic directional minimalist grammars"};
    app.require_subcommand(1);
    Options o;

    auto lexicon_opt = [&](CLI::App* sub) {
        sub->add_option("--lexicon,-l", o.lexicon, "lexicon file")->required();
    };
    auto parse_opts = [&](CLI::App* sub) {
        sub->add_option("--start", o.start, "start category")->capture_default_str();
        sub->add_option("--max-derivations", o.max_derivations)->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--max-steps", o.max_steps, "deduction step cap")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--max-covert", o.max_covert, "covert items per derivation")->capture_default_str();
        sub->add_option("--threads", o.threads)->check(CLI::PositiveNumber)->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "load a lexicon and report its categories");
    lexicon_opt(validate);

    auto* check = app.add_subcommand("check-seq", "decide well-formedness of item sequences");
    lexicon_opt(check);
    check->add_option("input", o.input, "sequence file (default stdin)");
    check->add_flag("--trace", o.trace, "print the cursor walk");

    auto* derive = app.add_subcommand("derive", "evaluate item sequences to their surface strings");
    lexicon_opt(derive);
    derive->add_option("input", o.input, "sequence file (default stdin)");
    derive->add_flag("--tree", o.tree, "print the derivation tree");

    auto* parse_cmd = app.add_subcommand("parse", "enumerate derivations of sentences");
    lexicon_opt(parse_cmd);
    parse_cmd->add_option("input", o.input, "sentence file (default stdin)");
    parse_opts(parse_cmd);

    auto* score = app.add_subcommand("score", "log probability of sequences or sentences");
    lexicon_opt(score);
    score->add_option("input", o.input, "input file (default stdin)");
    score->add_option("--theta", o.theta_file, "theta JSON (default uniform)");
    score->add_flag("--sentences", o.sentences, "lines are sentences: sum over their derivations");
    parse_opts(score);

    auto* sample = app.add_subcommand("sample", "draw derivations");
    lexicon_opt(sample);
    sample->add_option("--theta", o.theta_file, "theta JSON (default uniform)");
    sample->add_option("--n", o.n, "number of samples")->capture_default_str();
    sample->add_option("--seed", o.seed)->capture_default_str();
    sample->add_option("--start", o.start, "start category")->capture_default_str();
    sample->add_option("--max-depth", o.max_depth)->capture_default_str();
    sample->add_option("--max-rejections", o.max_rejections)->capture_default_str();

    auto* train_cmd = app.add_subcommand("train", "variational Bayes estimation of item probabilities");
    lexicon_opt(train_cmd);
    train_cmd->add_option("--corpus", o.corpus, "one sentence per line")->required();
    auto* alpha_opt = train_cmd->add_option("--alpha", o.alpha, "symmetric prior pseudo-count")
                          ->check(CLI::PositiveNumber)
                          ->capture_default_str();
    train_cmd->add_option("--alpha-file", o.alpha_file, "per-item prior JSON")->excludes(alpha_opt);
    train_cmd->add_option("--tol", o.tol)->check(CLI::PositiveNumber)->capture_default_str();
    train_cmd->add_option("--max-iters", o.max_iters)->capture_default_str();
    train_cmd->add_option("--seed", o.seed, "recorded for reproducibility; training draws no random numbers");
    train_cmd->add_option("--out,-o", o.out, "result JSON (default stdout)");
    train_cmd->add_flag("--skip-unparsed", o.skip_unparsed, "drop sentences without derivations");
    train_cmd->add_flag("--quiet,-q", o.quiet, "no iteration table");
    parse_opts(train_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*check) return cmd_check_seq(o);
        if (*derive) return cmd_derive(o);
        if (*parse_cmd) return cmd_parse(o);
        if (*score) return cmd_score(o);
        if (*sample) return cmd_sample(o);
        if (*train_cmd) return cmd_train(o);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
