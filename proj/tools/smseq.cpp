// Command-line surface for generating concatenation sequences (consecutive,
// reversed, mirror, symmetric) over natural/triangular bases, querying term
// digit counts, and running / verifying / pretty-printing prime and
// triangularity scans.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "smseq/classify.hpp"
#include "smseq/concat.hpp"
#include "smseq/scan.hpp"
#include "smseq/sequence.hpp"

namespace {

constexpr std::uint64_t kDefaultGenBudgetBytes = 64ull * 1024 * 1024;

struct GenArgs {
    std::string kind;
    std::string base = "triangular";
    std::uint64_t count = 1;
    std::string format = "plain";
    bool force = false;
};

struct DigitsArgs {
    std::string kind;
    std::string base = "triangular";
    std::uint64_t index = 1;
};

struct ScanArgs {
    std::string kind;
    std::string base = "triangular";
    std::uint64_t from = 1;
    std::uint64_t to = 1;
    std::vector<std::string> checks;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 0;
    std::uint32_t mr_rounds = 16;
    std::uint64_t trial_bound = 10000;
    bool full_values = false;
    bool timings = false;
    std::string out;
    std::string checkpoint;
};

// Projected byte size of `gen` output, via digit accounting only (no terms
// are built). per_term_overhead covers separators / record framing.
std::uint64_t projected_gen_bytes(smseq::SequenceKind kind, smseq::BaseSpec base,
                                  std::uint64_t count, std::uint64_t per_term_overhead) {
    std::uint64_t total = 0;
    std::uint64_t consumed = 0;
    std::uint64_t digit_sum = 0;
    std::uint64_t first_len = 0;
    for (std::uint64_t index = 1; index <= count; ++index) {
        const bool odd = (index % 2) == 1;
        const std::uint64_t want =
            kind == smseq::SequenceKind::symmetric ? (odd ? (index + 1) / 2 : index / 2) : index;
        while (consumed < want) {
            const std::uint64_t len = smseq::digit_length(smseq::base_term(base, consumed + 1));
            if (consumed == 0) first_len = len;
            ++consumed;
            digit_sum += len;
        }
        total += smseq::detail::term_digits_from_sum(kind, digit_sum, first_len, odd);
        total += per_term_overhead;
    }
    return total;
}

// Full value if stored or reconstructible from head+tail, else "head...tail".
std::string displayed_value(const smseq::ScanRecord& rec) {
    if (rec.full_value) return *rec.full_value;
    if (rec.digits <= 16) return rec.value_head;
    if (rec.digits <= 32)
        return rec.value_head + rec.value_tail.substr(32 - rec.digits);
    return rec.value_head + "..." + rec.value_tail;
}

int run_gen(const GenArgs& args) {
    const auto kind = smseq::parse_sequence_kind(args.kind);
    const auto base = smseq::parse_base_spec(args.base);
    const std::uint64_t overhead = args.format == "records" ? 128 : 2;
    const std::uint64_t projected = projected_gen_bytes(kind, base, args.count, overhead);
    if (projected > kDefaultGenBudgetBytes && !args.force) {
        std::cerr << "refusing to print ~" << projected << " bytes (budget "
                  << kDefaultGenBudgetBytes << "); pass --force to override\n";
        return 1;
    }

    smseq::Generator gen(kind, base);
    for (std::uint64_t i = 1; i <= args.count; ++i) {
        const smseq::Term term = gen.next();
        if (args.format == "plain") {
            if (i > 1) std::cout << ", ";
            std::cout << term.value.to_string();
        } else if (args.format == "lines") {
            std::cout << term.value.to_string() << '\n';
        } else {  // records
            nlohmann::ordered_json j;
            j["schema_version"] = smseq::kReportSchemaVersion;
            j["kind"] = smseq::to_string(kind);
            j["base"] = smseq::to_string(base);
            j["index"] = term.index;
            j["digits"] = term.digits;
            j["value"] = term.value.to_string();
            std::cout << j.dump() << '\n';
        }
    }
    if (args.format == "plain") std::cout << '\n';
    return 0;
}

int run_digits(const DigitsArgs& args) {
    const auto kind = smseq::parse_sequence_kind(args.kind);
    const auto base = smseq::parse_base_spec(args.base);
    std::cout << smseq::digits_at(kind, base, args.index) << '\n';
    return 0;
}

void print_hits(const char* label, const std::vector<smseq::ScanRecord>& hits) {
    std::cout << label << " hits: " << hits.size() << '\n';
    for (const auto& rec : hits) {
        std::cout << "  index " << rec.index << "  digits " << rec.digits << "  value "
                  << displayed_value(rec);
        if (rec.prime_status) std::cout << "  [" << smseq::to_string(rec.prime_status->status) << "]";
        if (rec.triangular_k) std::cout << "  [k=" << rec.triangular_k->to_string() << "]";
        std::cout << '\n';
    }
}

int run_scan_cmd(const ScanArgs& args) {
    smseq::ScanConfig config;
    config.kind = smseq::parse_sequence_kind(args.kind);
    config.base = smseq::parse_base_spec(args.base);
    config.from_index = args.from;
    config.to_index = args.to;
    for (const std::string& c : args.checks) {
        if (c == "prime")
            config.checks.prime = true;
        else if (c == "triangular")
            config.checks.triangular = true;
        else
            throw std::invalid_argument("unknown check: \"" + c + "\"");
    }
    config.policy.seed = args.seed;
    config.policy.extra_mr_rounds = args.mr_rounds;
    config.policy.trial_division_bound = args.trial_bound;
    config.workers = args.workers;
    config.store_full_values = args.full_values;
    config.include_timings = args.timings;
    config.output_path = args.out;
    if (!args.checkpoint.empty()) config.checkpoint_path = args.checkpoint;

    const smseq::ScanSummary summary = smseq::run_scan(config);

    std::cout << "scanned " << summary.scanned << " terms (" << smseq::to_string(config.kind) << "/"
              << smseq::to_string(config.base) << ", " << config.from_index << ".."
              << config.to_index << ")";
    if (summary.resumed_from) std::cout << "  [resumed at " << summary.resumed_from << "]";
    std::cout << '\n';
    if (config.checks.prime) print_hits("prime", summary.prime_hits);
    if (config.checks.triangular) print_hits("triangular", summary.triangular_hits);
    std::cout << "report: " << summary.output_path << '\n';
    if (summary.checkpoint_path) std::cout << "checkpoint: " << *summary.checkpoint_path << '\n';
    return 0;
}

int run_verify(const std::string& path) {
    const smseq::VerifySummary summary = smseq::verify_report(path);
    for (const auto& issue : summary.issues) {
        std::cout << "mismatch";
        if (issue.index) std::cout << " at index " << issue.index;
        std::cout << ": " << issue.what << '\n';
    }
    std::cout << "verified " << summary.records << " records: "
              << (summary.clean() ? "clean" : std::to_string(summary.issues.size()) + " issues")
              << '\n';
    return summary.clean() ? 0 : 1;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    std::string out = s.substr(begin, end - begin + 1);
    if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front())
        out = out.substr(1, out.size() - 2);
    return out;
}

// Loads a flat key=value file and appends each entry as --key=value, unless
// the flag is already present: explicit command-line flags win.
void apply_flat_config(const std::string& path, std::vector<std::string>& args) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    const auto already_given = [&args](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&flag](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": empty key");
        if (!already_given("--" + key)) args.push_back("--" + key + "=" + value);
    }
}

int run_report(const std::string& path) {
    const smseq::ReportData data = smseq::read_report(path);
    const smseq::ScanConfig& cfg = data.header.config;
    std::cout << "report: " << smseq::to_string(cfg.kind) << "/" << smseq::to_string(cfg.base)
              << " [" << cfg.from_index << ".." << cfg.to_index << "]  records: "
              << data.records.size() << '\n';

    if (cfg.checks.prime) {
        std::cout << "\nPRIME HITS\n";
        std::cout << std::left << std::setw(8) << "index" << std::setw(8) << "digits"
                  << std::setw(16) << "status" << "value\n";
        for (const auto& rec : data.records) {
            if (!rec.prime_status || rec.prime_status->status == smseq::PrimalityStatus::composite)
                continue;
            std::cout << std::left << std::setw(8) << rec.index << std::setw(8) << rec.digits
                      << std::setw(16) << smseq::to_string(rec.prime_status->status)
                      << displayed_value(rec) << '\n';
        }
    }
    if (cfg.checks.triangular) {
        std::cout << "\nTRIANGULAR HITS\n";
        std::cout << std::left << std::setw(8) << "index" << std::setw(8) << "digits"
                  << std::setw(12) << "k" << "value\n";
        for (const auto& rec : data.records) {
            if (!rec.triangular_k) continue;
            std::cout << std::left << std::setw(8) << rec.index << std::setw(8) << rec.digits
                      << std::setw(12) << rec.triangular_k->to_string() << displayed_value(rec)
                      << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concatenation-sequence generator and prime/triangular scan harness"};
    app.require_subcommand(1);
    std::string config_doc;  // --config is handled before CLI parsing; kept here for --help

    // Pull out --config and fold the file's key=value pairs into the argument
    // list (only for flags not already given, so the command line wins).
    std::vector<std::string> args(argv + 1, argv + argc);
    {
        std::string config_path;
        for (auto it = args.begin(); it != args.end();) {
            if (*it == "--config") {
                if (it + 1 == args.end()) {
                    std::cerr << "--config requires a file path\n";
                    return 2;
                }
                config_path = *(it + 1);
                it = args.erase(it, it + 2);
            } else if (it->rfind("--config=", 0) == 0) {
                config_path = it->substr(9);
                it = args.erase(it);
            } else {
                ++it;
            }
        }
        if (!config_path.empty()) {
            try {
                apply_flat_config(config_path, args);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 2;
            }
        }
    }

    const std::vector<std::string> kind_names = {"scs", "rss", "sms", "sss", "consecutive",
                                                 "reversed", "mirror", "symmetric"};
    const std::vector<std::string> base_names = {"natural", "triangular"};

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "print the first terms of a sequence");
    gen->add_option("--kind", gen_args.kind, "sequence kind")
        ->required()
        ->check(CLI::IsMember(kind_names));
    gen->add_option("--base", gen_args.base, "base sequence")->check(CLI::IsMember(base_names));
    gen->add_option("--count", gen_args.count, "how many terms")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--format", gen_args.format, "plain | lines | records")
        ->check(CLI::IsMember({"plain", "lines", "records"}));
    gen->add_flag("--force", gen_args.force, "ignore the output size budget");
    gen->add_option("--config", config_doc, "flat key=value file supplying any flag");

    DigitsArgs digits_args;
    auto* digits = app.add_subcommand("digits", "digit count of one term, without building it");
    digits->add_option("--kind", digits_args.kind, "sequence kind")
        ->required()
        ->check(CLI::IsMember(kind_names));
    digits->add_option("--base", digits_args.base, "base sequence")
        ->check(CLI::IsMember(base_names));
    digits->add_option("--index", digits_args.index, "term index")
        ->required()
        ->check(CLI::PositiveNumber);
    digits->add_option("--config", config_doc, "flat key=value file supplying any flag");

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan", "classify a range of terms and write a report");
    scan->add_option("--kind", scan_args.kind, "sequence kind")
        ->required()
        ->check(CLI::IsMember(kind_names));
    scan->add_option("--base", scan_args.base, "base sequence")->check(CLI::IsMember(base_names));
    scan->add_option("--from", scan_args.from, "first index")->check(CLI::PositiveNumber);
    scan->add_option("--to", scan_args.to, "last index")->required()->check(CLI::PositiveNumber);
    scan->add_option("--check", scan_args.checks, "prime and/or triangular")
        ->required()
        ->delimiter(',')
        ->check(CLI::IsMember({"prime", "triangular"}));
    scan->add_option("--workers", scan_args.workers, "classifier threads")
        ->check(CLI::PositiveNumber);
    scan->add_option("--seed", scan_args.seed, "witness-derivation seed");
    scan->add_option("--mr-rounds", scan_args.mr_rounds, "extra Miller-Rabin rounds");
    scan->add_option("--trial-bound", scan_args.trial_bound, "trial division bound")
        ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100000000}));
    scan->add_flag("--full-values", scan_args.full_values, "store full decimal values");
    scan->add_flag("--timings", scan_args.timings,
                   "record per-check wall-clock ms (report no longer byte-reproducible)");
    scan->add_option("--out", scan_args.out, "report path")->required();
    scan->add_option("--checkpoint", scan_args.checkpoint, "checkpoint path for resume");
    scan->add_option("--config", config_doc, "flat key=value file supplying any flag");

    std::string verify_path;
    auto* verify = app.add_subcommand("verify", "recompute and cross-check a report");
    verify->add_option("report", verify_path, "report path")->required();

    std::string report_path;
    auto* report = app.add_subcommand("report", "print hit tables from a report");
    report->add_option("report", report_path, "report path")->required();

    try {
        std::reverse(args.begin(), args.end());  // CLI11's vector overload pops from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits cleanly; everything else is usage
    }

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (digits->parsed()) return run_digits(digits_args);
        if (scan->parsed()) return run_scan_cmd(scan_args);
        if (verify->parsed()) return run_verify(verify_path);
        if (report->parsed()) return run_report(report_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
