#include "idnguard/ingestion.hpp"

#include "idnguard/csv.hpp"
#include "idnguard/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace idnguard {

namespace {

const std::set<std::string, std::less<>> loopback_aliases = {
    "localhost", "localhost.localdomain", "local", "broadcasthost", "ip6-localhost", "ip6-loopback",
    "ip6-localnet", "ip6-mcastprefix", "ip6-allnodes", "ip6-allrouters", "ip6-allhosts", "0.0.0.0",
};

bool looks_like_ipv4(std::string_view s) {
    int dots = 0;
    for (char c : s) {
        if (c == '.') {
            ++dots;
        } else if (c < '0' || c > '9') {
            return false;
        }
    }
    return dots == 3;
}

bool looks_like_address(std::string_view s) {
    return looks_like_ipv4(s) || s.find(':') != std::string_view::npos;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

std::string source_of(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

bool parse_size(std::string_view s, std::size_t& out) {
    while (!s.empty() && s.front() == ' ') {
        s.remove_prefix(1);
    }
    while (!s.empty() && s.back() == ' ') {
        s.remove_suffix(1);
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

void append_number(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

} // namespace

LoadResult load_hosts_blocklist(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::FileNotFound, path.string());
    }
    LoadResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto tokens = split_ws(line);
        if (tokens.empty()) {
            continue;
        }
        std::vector<std::string_view> names;
        if (looks_like_address(tokens.front())) {
            names.assign(tokens.begin() + 1, tokens.end());
            if (names.empty()) {
                ++result.skipped;
                result.warnings.push_back(source_of(path, line_no) + ": address without host name");
                continue;
            }
        } else {
            names.push_back(tokens.front());
        }
        for (const auto name : names) {
            if (loopback_aliases.contains(name)) {
                continue;
            }
            try {
                result.records.push_back({parse_domain(name), Label::Malicious, source_of(path, line_no)});
            } catch (const Error& e) {
                ++result.skipped;
                result.warnings.push_back(source_of(path, line_no) + ": " + e.what());
            }
        }
    }
    if (result.records.empty()) {
        throw Error(Errc::EmptyListError, path.string() + ": no valid domains");
    }
    return result;
}

LoadResult load_phishtank_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) {
        throw Error(Errc::MissingColumn, path.string() + ": no header");
    }
    const auto c_url = csv::find_column(rows.front().fields, "url");
    if (c_url == csv::npos) {
        throw Error(Errc::MissingColumn, path.string() + ": no \"url\" column");
    }
    LoadResult result;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() <= c_url) {
            ++result.skipped;
            result.warnings.push_back(source_of(path, row.line) + ": missing url field");
            continue;
        }
        try {
            DomainName d = parse_domain(row.fields[c_url]);
            if (seen.insert(d.ascii()).second) {
                result.records.push_back({std::move(d), Label::Malicious, source_of(path, row.line)});
            }
        } catch (const Error& e) {
            ++result.skipped;
            result.warnings.push_back(source_of(path, row.line) + ": " + e.what());
        }
    }
    return result;
}

LoadResult load_ranked_whitelist(const std::filesystem::path& path, std::size_t top_n) {
    if (top_n == 0) {
        throw Error(Errc::InvalidParams, "top_n must be at least 1");
    }
    const auto rows = csv::read_file(path);

    struct Ranked {
        std::size_t rank;
        std::size_t row;
    };
    std::vector<Ranked> ranked;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::size_t rank = 0;
        if (row.fields.size() != 2 || !parse_size(row.fields[0], rank)) {
            if (r == 0) {
                continue; // header
            }
            throw Error(Errc::MalformedRow, source_of(path, row.line) + ": expected \"rank,domain\"");
        }
        ranked.push_back({rank, r});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) { return a.rank < b.rank; });

    LoadResult result;
    for (const auto& entry : ranked) {
        if (result.records.size() >= top_n) {
            break;
        }
        const auto& row = rows[entry.row];
        try {
            result.records.push_back({parse_domain(row.fields[1]), Label::Benign, source_of(path, row.line)});
        } catch (const Error& e) {
            ++result.skipped;
            result.warnings.push_back(source_of(path, row.line) + ": " + e.what());
        }
    }
    return result;
}

TrainingSet LabeledDataset::training_set() const {
    TrainingSet out;
    out.arity = FeatureVector::arity;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto row = vectors[i].to_array();
        out.push_back(row, static_cast<std::uint8_t>(records[i].label));
    }
    return out;
}

LabeledDataset build_dataset(const std::vector<std::vector<LabeledRecord>>& blacklists,
                             const std::vector<std::vector<LabeledRecord>>& whitelists) {
    struct Entry {
        const LabeledRecord* record = nullptr;
        bool malicious = false;
        bool benign = false;
    };
    std::map<std::string, Entry> merged;
    auto absorb = [&merged](const std::vector<std::vector<LabeledRecord>>& lists) {
        for (const auto& list : lists) {
            for (const auto& rec : list) {
                auto& e = merged[rec.domain.ascii()];
                if (!e.record || rec.source < e.record->source) {
                    e.record = &rec;
                }
                (rec.label == Label::Malicious ? e.malicious : e.benign) = true;
            }
        }
    };
    absorb(blacklists);
    absorb(whitelists);

    LabeledDataset ds;
    for (const auto& [name, e] : merged) {
        if (e.malicious && e.benign) {
            ds.conflicts.push_back(name);
            continue;
        }
        LabeledRecord rec = *e.record;
        rec.label = e.malicious ? Label::Malicious : Label::Benign;
        ++ds.class_counts[static_cast<std::size_t>(rec.label)];
        ds.records.push_back(std::move(rec));
    }
    if (ds.class_counts[0] == 0 || ds.class_counts[1] == 0) {
        throw Error(Errc::EmptyClass, ds.class_counts[0] == 0 ? "no benign records" : "no malicious records");
    }
    return ds;
}

void write_feature_csv(std::ostream& out, const LabeledDataset& dataset) {
    std::string text = "domain";
    for (const auto name : feature_names) {
        text += ',';
        text += name;
    }
    text += ",label,source\n";
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const auto& rec = dataset.records[i];
        text += csv::escape(rec.domain.ascii());
        for (double v : dataset.vectors.at(i).to_array()) {
            text += ',';
            append_number(text, v);
        }
        text += ',';
        text += std::to_string(static_cast<int>(rec.label));
        text += ',';
        text += csv::escape(rec.source);
        text += '\n';
    }
    out << text;
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) {
        throw Error(Errc::MissingColumn, path.string() + ": no header");
    }
    const auto& header = rows.front().fields;
    const auto c_label = csv::find_column(header, "label");
    if (c_label == csv::npos) {
        throw Error(Errc::MissingColumn, path.string() + ": no \"label\" column");
    }
    std::vector<std::size_t> columns;
    for (const auto name : feature_names) {
        const auto c = csv::find_column(header, name);
        if (c == csv::npos) {
            throw Error(Errc::MissingColumn, path.string() + ": no \"" + std::string(name) + "\" column");
        }
        columns.push_back(c);
    }
    const auto c_domain = csv::find_column(header, "domain");

    FeatureTable table;
    table.data.arity = FeatureVector::arity;
    std::vector<double> row_values(FeatureVector::arity);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size()) {
            throw Error(Errc::MalformedRow, source_of(path, row.line) + ": field count differs from header");
        }
        for (std::size_t f = 0; f < columns.size(); ++f) {
            const auto& text = row.fields[columns[f]];
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), row_values[f]);
            if (ec != std::errc{} || ptr != text.data() + text.size()) {
                throw Error(Errc::MalformedRow, source_of(path, row.line) + ": bad number '" + text + "'");
            }
        }
        const auto& label = row.fields[c_label];
        if (label != "0" && label != "1") {
            throw Error(Errc::MalformedRow, source_of(path, row.line) + ": label must be 0 or 1");
        }
        table.data.push_back(row_values, static_cast<std::uint8_t>(label == "1"));
        table.domains.push_back(c_domain == csv::npos ? std::string() : row.fields[c_domain]);
    }
    return table;
}

} // namespace idnguard
