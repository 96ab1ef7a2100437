#include "idnguard/cli.hpp"

#include "idnguard/confusables.hpp"
#include "idnguard/csv.hpp"
#include "idnguard/domain.hpp"
#include "idnguard/enrichment.hpp"
#include "idnguard/error.hpp"
#include "idnguard/evaluation.hpp"
#include "idnguard/features.hpp"
#include "idnguard/forest.hpp"
#include "idnguard/ingestion.hpp"
#include "idnguard/utf8.hpp"
#include "idnguard/whois.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

namespace idnguard::cli {

namespace {

using nlohmann::json;

constexpr const char* default_reference_date = "2020-01-01";

struct RunConfig {
    std::string command;
    std::vector<std::string> blocklists;
    std::vector<std::string> phishtank;
    std::string whitelist;
    std::size_t top_n = 1000000;
    std::string ratings;
    std::string whois_fixtures;
    bool whois_live = false;
    std::string reference_date = default_reference_date;
    std::string tld_risk;
    std::string tokens;
    std::string confusables;
    std::uint64_t seed = 42;
    std::size_t trees = 100;
    std::size_t max_depth = 0;
    std::size_t min_leaf = 1;
    std::size_t k = 10;
    std::string model;
    std::string out;
    std::string format = "csv";
    std::vector<std::string> inputs; // positional: feature CSV or domains

    json to_json() const {
        auto or_builtin = [](const std::string& s) { return s.empty() ? std::string("builtin") : s; };
        return {
            {"command", command},
            {"blocklist", blocklists},
            {"phishtank", phishtank},
            {"whitelist", whitelist},
            {"top_n", top_n},
            {"ratings", ratings},
            {"whois_fixtures", whois_fixtures},
            {"whois_live", whois_live},
            {"reference_date", reference_date},
            {"tld_risk", or_builtin(tld_risk)},
            {"tokens", or_builtin(tokens)},
            {"confusables", or_builtin(confusables)},
            {"seed", seed},
            {"trees", trees},
            {"max_depth", max_depth},
            {"min_leaf", min_leaf},
            {"k", k},
            {"model", model},
            {"out", out},
            {"format", format},
            {"inputs", inputs},
        };
    }

    ForestParams forest_params() const {
        ForestParams p;
        p.n_trees = trees;
        p.max_depth = max_depth;
        p.min_leaf = min_leaf;
        return p;
    }
};

int exit_code_for(Errc code) {
    switch (code) {
    case Errc::EmptyClass:
    case Errc::EmptyListError:
    case Errc::SingleClassDataset:
    case Errc::SingleClassInput:
    case Errc::TooFewRecords:
    case Errc::MalformedRow:
    case Errc::EmptyInput:
    case Errc::EmptyLabel:
    case Errc::LabelTooLong:
    case Errc::NameTooLong:
    case Errc::InvalidCharacter:
        return exit_data;
    default:
        return exit_usage;
    }
}

/// Everything needed to turn a DomainName into a FeatureVector.
struct Extractor {
    FeatureConfig config;
    ConfusableTable table;
    std::vector<LabeledRecord> whitelist_records;
    std::unique_ptr<WhoisProvider> whois;
    std::optional<RatingsTable> ratings;
    Date reference{};

    bool has_enrichment() const { return whois || ratings; }

    FeatureVector features(const DomainName& d) const {
        std::optional<EnrichmentResult> enrichment;
        if (has_enrichment()) {
            EnrichmentSources sources;
            sources.whois = whois.get();
            sources.ratings = ratings ? &*ratings : nullptr;
            sources.reference_date = reference;
            enrichment = enrich(d, sources);
        }
        return assemble_feature_vector(d, enrichment, config, table);
    }
};

Extractor make_extractor(const RunConfig& rc, std::ostream& err) {
    Extractor ex;
    const auto ref = parse_iso_date(rc.reference_date);
    if (!ref) {
        throw Error(Errc::InvalidParams, "--reference-date must be YYYY-MM-DD, got '" + rc.reference_date + "'");
    }
    ex.reference = *ref;

    auto as_set = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()); };
    ex.config.tld_risk_set = rc.tld_risk.empty() ? default_tld_risk_set() : as_set(csv::read_list_file(rc.tld_risk));
    ex.config.unethical_tokens =
        rc.tokens.empty() ? default_unethical_tokens() : as_set(csv::read_list_file(rc.tokens));
    ex.config.validate();
    ex.table = rc.confusables.empty() ? default_confusable_table() : load_confusable_file(rc.confusables);

    if (!rc.whitelist.empty()) {
        auto loaded = load_ranked_whitelist(rc.whitelist, rc.top_n);
        for (const auto& w : loaded.warnings) {
            err << "warning: " << w << "\n";
        }
        for (const auto& rec : loaded.records) {
            ex.config.whitelist.add(rec.domain);
        }
        ex.whitelist_records = std::move(loaded.records);
    }

    if (rc.whois_live) {
        ex.whois = std::make_unique<LiveWhoisProvider>();
    } else if (!rc.whois_fixtures.empty()) {
        if (!std::filesystem::is_directory(rc.whois_fixtures)) {
            throw Error(Errc::FileNotFound, rc.whois_fixtures + " is not a directory");
        }
        ex.whois = std::make_unique<FixtureWhoisProvider>(rc.whois_fixtures);
    }
    if (!rc.ratings.empty()) {
        ex.ratings = load_ratings_csv(rc.ratings);
    }
    return ex;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8u));
    if (workers == 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < n; i = next++) {
                        fn(i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = n;
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void write_output(const RunConfig& rc, const std::string& text, std::ostream& out) {
    if (rc.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(rc.out, std::ios::binary);
    if (!file) {
        throw Error(Errc::FileNotFound, "cannot write " + rc.out);
    }
    file << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::FileNotFound, path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_score(double score) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", score);
    return buf;
}

int cmd_extract(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    Extractor ex = make_extractor(rc, err);

    std::vector<std::vector<LabeledRecord>> black;
    std::size_t skipped = 0;
    auto absorb = [&](LoadResult loaded) {
        for (const auto& w : loaded.warnings) {
            err << "warning: " << w << "\n";
        }
        skipped += loaded.skipped;
        black.push_back(std::move(loaded.records));
    };
    for (const auto& path : rc.blocklists) {
        absorb(load_hosts_blocklist(path));
    }
    for (const auto& path : rc.phishtank) {
        absorb(load_phishtank_csv(path));
    }

    LabeledDataset ds = build_dataset(black, {ex.whitelist_records});
    for (const auto& c : ds.conflicts) {
        err << "warning: " << c << " appears in both malicious and benign lists; dropped\n";
    }

    ds.vectors.resize(ds.records.size());
    parallel_for(ds.records.size(), [&](std::size_t i) { ds.vectors[i] = ex.features(ds.records[i].domain); });

    std::size_t undecodable = 0;
    for (const auto& rec : ds.records) {
        undecodable += rec.domain.undecodable_count();
    }

    std::string text;
    if (rc.format == "json") {
        json records = json::array();
        for (std::size_t i = 0; i < ds.records.size(); ++i) {
            json features = json::object();
            const auto values = ds.vectors[i].to_array();
            for (std::size_t f = 0; f < values.size(); ++f) {
                features[std::string(feature_names[f])] = values[f];
            }
            records.push_back({{"domain", ds.records[i].domain.ascii()},
                               {"unicode", ds.records[i].domain.unicode()},
                               {"label", static_cast<int>(ds.records[i].label)},
                               {"source", ds.records[i].source},
                               {"features", features}});
        }
        json doc = {{"format", "idnguard-features"}, {"version", 1}, {"run_config", rc.to_json()},
                    {"feature_order", feature_order()}, {"records", records}};
        text = doc.dump(1) + "\n";
    } else {
        std::ostringstream csv_text;
        csv_text << "# idnguard-run: " << rc.to_json().dump() << "\n";
        write_feature_csv(csv_text, ds);
        text = csv_text.str();
    }
    write_output(rc, text, out);

    err << "records " << ds.size() << " (malicious " << ds.class_counts[1] << ", benign " << ds.class_counts[0]
        << "), conflicts " << ds.conflicts.size() << ", skipped " << skipped << ", undecodable labels "
        << undecodable << "\n";
    return exit_ok;
}

int cmd_train(const RunConfig& rc, std::ostream& out) {
    if (rc.inputs.size() != 1) {
        throw Error(Errc::InvalidParams, "train takes exactly one feature CSV");
    }
    if (rc.model.empty()) {
        throw Error(Errc::InvalidParams, "--model is required");
    }
    const FeatureTable table = read_feature_csv(rc.inputs.front());
    RandomForestModel model = train_forest(table.data, rc.forest_params(), rc.seed, feature_order());
    model.run_config = rc.to_json();

    std::ofstream file(rc.model, std::ios::binary);
    if (!file) {
        throw Error(Errc::FileNotFound, "cannot write " + rc.model);
    }
    file << serialize_model(model);

    const auto mal = std::count(table.data.labels.begin(), table.data.labels.end(), 1);
    out << "trained " << model.params.n_trees << " trees (max_depth "
        << (model.params.max_depth ? std::to_string(model.params.max_depth) : std::string("unlimited"))
        << ", min_leaf " << model.params.min_leaf << ", features_per_split " << model.params.features_per_split
        << ", bootstrap " << (model.params.bootstrap ? "on" : "off") << ")\n"
        << "seed " << rc.seed << "\n"
        << "records " << table.data.size() << " (malicious " << mal << ", benign "
        << static_cast<long>(table.data.size()) - mal << ")\n"
        << "model written to " << rc.model << "\n";
    return exit_ok;
}

int cmd_evaluate(const RunConfig& rc, std::ostream& out) {
    if (rc.inputs.size() != 1) {
        throw Error(Errc::InvalidParams, "evaluate takes exactly one feature CSV");
    }
    const FeatureTable table = read_feature_csv(rc.inputs.front());
    EvaluationReport report = cross_validate(table.data, rc.forest_params(), rc.k, rc.seed, feature_order());
    report.config_echo["run"] = rc.to_json();

    const std::string doc = report.to_json().dump(1) + "\n";
    if (!rc.out.empty()) {
        std::ofstream file(rc.out, std::ios::binary);
        if (!file) {
            throw Error(Errc::FileNotFound, "cannot write " + rc.out);
        }
        file << doc;
    }
    if (rc.format == "json") {
        out << doc;
    } else {
        out << "# idnguard-run: " << rc.to_json().dump() << "\n" << report.to_table();
    }
    return exit_ok;
}

int cmd_predict(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    if (rc.model.empty()) {
        throw Error(Errc::InvalidParams, "--model is required");
    }
    const RandomForestModel model = parse_model(read_text(rc.model), feature_order());
    const Extractor ex = make_extractor(rc, err);

    out << "# idnguard-run: " << rc.to_json().dump() << "\n";
    for (const auto& input : rc.inputs) {
        try {
            const DomainName d = parse_domain(input);
            const auto values = ex.features(d).to_array();
            const double score = predict_proba(model, values);
            out << d.ascii() << "\t" << format_score(score) << "\t" << predict(model, values) << "\n";
        } catch (const Error& e) {
            out << input << "\terror\t" << e.what() << "\n";
        }
    }
    return exit_ok;
}

int cmd_inspect(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    if (rc.inputs.size() != 1) {
        throw Error(Errc::InvalidParams, "inspect takes exactly one domain");
    }
    DomainName d;
    try {
        d = parse_domain(rc.inputs.front());
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    const Extractor ex = make_extractor(rc, err);
    const FeatureVector v = ex.features(d);
    const auto hits = find_confusables(d, ex.table);

    out << "# idnguard-run: " << rc.to_json().dump() << "\n";
    out << "domain     " << d.ascii() << "\n";
    out << "unicode    " << d.unicode() << "\n";
    out << "tld        " << extract_tld(d) << "\n";
    for (std::size_t i = 0; i < d.ascii_labels.size(); ++i) {
        out << "label " << i << "    " << d.ascii_labels[i];
        if (d.undecodable[i]) {
            out << "  (undecodable punycode)";
        } else if (d.ascii_labels[i] != d.unicode_labels[i]) {
            out << "  -> " << d.unicode_labels[i];
        }
        out << "\n";
    }
    out << "confusables " << hits.size() << "\n";
    for (const auto& h : hits) {
        std::string glyph;
        utf8::append(glyph, h.codepoint);
        out << "  label " << h.label_index << " char " << h.char_index << "  " << utf8::codepoint_label(h.codepoint)
            << " '" << glyph << "' looks like '" << h.latin_equivalent << "'\n";
    }
    out << "skeleton   " << skeleton(d, ex.table) << "\n";
    out << "features\n";
    const auto values = v.to_array();
    for (std::size_t f = 0; f < values.size(); ++f) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-22s %8g  %s", std::string(feature_names[f]).c_str(), values[f],
                      std::string(feature_descriptions[f]).c_str());
        out << line;
        if (feature_names[f] == "dot_count" && v.dot_count > dot_alert_level) {
            out << "  [ALERT: more than " << dot_alert_level << " dots]";
        }
        out << "\n";
    }
    return exit_ok;
}

void add_feature_flags(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--whitelist", rc.whitelist, "Ranked whitelist CSV (rank,domain)");
    cmd->add_option("--top-n", rc.top_n, "Use the first N whitelist domains")->check(CLI::PositiveNumber);
    cmd->add_option("--ratings", rc.ratings, "Scanner ratings CSV (domain,scanner_id,verdict)");
    cmd->add_option("--whois-fixtures", rc.whois_fixtures, "Directory of <domain>.txt WHOIS responses");
    cmd->add_flag("--whois-live", rc.whois_live, "Query WHOIS servers over TCP port 43");
    cmd->add_option("--reference-date", rc.reference_date, "Date ages are measured against (YYYY-MM-DD)")
        ->capture_default_str();
    cmd->add_option("--tld-risk", rc.tld_risk, "Risky TLD list file");
    cmd->add_option("--tokens", rc.tokens, "Unethical token list file");
    cmd->add_option("--confusables", rc.confusables, "Extra confusable rows (JSON)");
}

void add_forest_flags(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--seed", rc.seed, "Random seed")->capture_default_str();
    cmd->add_option("--trees", rc.trees, "Number of trees")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", rc.max_depth, "Maximum tree depth (0 = unlimited)")->capture_default_str();
    cmd->add_option("--min-leaf", rc.min_leaf, "Minimum rows per leaf")->capture_default_str()->check(CLI::PositiveNumber);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    CLI::App app{"Malicious and homoglyph domain detection"};
    app.name("idnguard");
    app.require_subcommand(1);

    auto* extract = app.add_subcommand("extract", "Build a labeled feature file from domain lists");
    extract->add_option("--blocklist", rc.blocklists, "Hosts-format blocklist (repeatable)");
    extract->add_option("--phishtank", rc.phishtank, "Phishing URL CSV with a url column (repeatable)");
    add_feature_flags(extract, rc);
    extract->add_option("--out", rc.out, "Output file (default stdout)");
    extract->add_option("--format", rc.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    extract->add_option("--seed", rc.seed, "Recorded for reproducibility")->capture_default_str();

    auto* train = app.add_subcommand("train", "Train a random forest on a feature CSV");
    train->add_option("features", rc.inputs, "Feature CSV")->required();
    add_forest_flags(train, rc);
    train->add_option("--model", rc.model, "Model output path")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold cross-validation");
    evaluate->add_option("features", rc.inputs, "Feature CSV")->required();
    add_forest_flags(evaluate, rc);
    evaluate->add_option("--k", rc.k, "Number of folds")->capture_default_str();
    evaluate->add_option("--out", rc.out, "Write the JSON report here");
    evaluate->add_option("--format", rc.format, "csv (table) or json")->check(CLI::IsMember({"csv", "json"}));

    auto* predict = app.add_subcommand("predict", "Score domains with a trained model");
    predict->add_option("domains", rc.inputs, "Domains or URLs")->required();
    predict->add_option("--model", rc.model, "Model file")->required();
    add_feature_flags(predict, rc);

    auto* inspect = app.add_subcommand("inspect", "Explain the features of one domain");
    inspect->add_option("domain", rc.inputs, "Domain or URL")->required()->expected(1);
    add_feature_flags(inspect, rc);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    for (auto* sub : app.get_subcommands()) {
        rc.command = sub->get_name();
        if (sub->count("--help")) {
            out << sub->help();
            return exit_ok;
        }
    }

    try {
        if (rc.command == "extract") {
            return cmd_extract(rc, out, err);
        }
        if (rc.command == "train") {
            return cmd_train(rc, out);
        }
        if (rc.command == "evaluate") {
            return cmd_evaluate(rc, out);
        }
        if (rc.command == "predict") {
            return cmd_predict(rc, out, err);
        }
        if (rc.command == "inspect") {
            return cmd_inspect(rc, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_usage;
}

} // namespace idnguard::cli
