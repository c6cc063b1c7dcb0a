#pragma once

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "smseq/classify.hpp"
#include "smseq/concat.hpp"
#include "smseq/digest.hpp"
#include "smseq/nat.hpp"
#include "smseq/sequence.hpp"

namespace smseq {

inline constexpr int kReportSchemaVersion = 1;

struct ScanChecks {
    bool prime = false;
    bool triangular = false;
    bool any() const { return prime || triangular; }
};

/// Full description of a scan job. Everything that affects the computed
/// records participates in the config hash; worker count, paths, and the
/// timing switch do not.
struct ScanConfig {
    SequenceKind kind = SequenceKind::consecutive;
    BaseSpec base = BaseSpec::triangular;
    std::uint64_t from_index = 1;
    std::uint64_t to_index = 1;
    ScanChecks checks;
    PrimalityPolicy policy;
    unsigned workers = 1;
    bool store_full_values = false;
    /// Adds wall-clock fields to each persisted record. Diagnostic only:
    /// timed reports are not byte-reproducible across runs.
    bool include_timings = false;
    std::string output_path;
    std::optional<std::string> checkpoint_path;
};

inline std::string config_hash(const ScanConfig& c) {
    std::string canonical = "smseq.scan.v1";
    canonical += "|kind=";
    canonical += to_string(c.kind);
    canonical += "|base=";
    canonical += to_string(c.base);
    canonical += "|from=" + std::to_string(c.from_index);
    canonical += "|to=" + std::to_string(c.to_index);
    canonical += "|checks=";
    if (c.checks.prime) canonical += "prime";
    if (c.checks.prime && c.checks.triangular) canonical += ",";
    if (c.checks.triangular) canonical += "triangular";
    canonical += "|trial_bound=" + std::to_string(c.policy.trial_division_bound);
    canonical += "|mr_rounds=" + std::to_string(c.policy.extra_mr_rounds);
    canonical += "|seed=" + std::to_string(c.policy.seed);
    canonical += "|full_values=" + std::to_string(c.store_full_values ? 1 : 0);
    return sha256_hex(canonical);
}

struct CheckTimings {
    std::uint64_t prime_ms = 0;
    std::uint64_t triangular_ms = 0;
};

/// One classified index, as persisted (one line per record).
struct ScanRecord {
    int schema_version = kReportSchemaVersion;
    SequenceKind kind = SequenceKind::consecutive;
    BaseSpec base = BaseSpec::triangular;
    std::uint64_t index = 0;
    std::uint64_t digits = 0;
    std::string value_digest;  // SHA-256 of the decimal rendering
    std::string value_head;    // first up-to-16 decimal characters
    std::string value_tail;    // last up-to-16 decimal characters
    std::optional<std::string> full_value;
    std::optional<PrimalityVerdict> prime_status;
    std::optional<Nat> triangular_k;  // present only when the value is triangular
    std::optional<CheckTimings> elapsed_ms;
};

inline nlohmann::ordered_json record_to_json(const ScanRecord& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = r.schema_version;
    j["kind"] = to_string(r.kind);
    j["base"] = to_string(r.base);
    j["index"] = r.index;
    j["digits"] = r.digits;
    j["value_digest"] = r.value_digest;
    j["value_head"] = r.value_head;
    j["value_tail"] = r.value_tail;
    if (r.full_value) j["full_value"] = *r.full_value;
    if (r.prime_status) {
        nlohmann::ordered_json verdict;
        verdict["status"] = to_string(r.prime_status->status);
        verdict["evidence"] = r.prime_status->evidence;
        j["prime_status"] = std::move(verdict);
    }
    if (r.triangular_k) {
        if (r.triangular_k->fits_u64())
            j["triangular_k"] = r.triangular_k->to_u64();
        else
            j["triangular_k"] = r.triangular_k->to_string();
    }
    if (r.elapsed_ms) {
        nlohmann::ordered_json t;
        t["prime"] = r.elapsed_ms->prime_ms;
        t["triangular"] = r.elapsed_ms->triangular_ms;
        j["elapsed_ms"] = std::move(t);
    }
    return j;
}

inline ScanRecord record_from_json(const nlohmann::json& j) {
    ScanRecord r;
    r.schema_version = j.at("schema_version").get<int>();
    r.kind = parse_sequence_kind(j.at("kind").get<std::string>());
    r.base = parse_base_spec(j.at("base").get<std::string>());
    r.index = j.at("index").get<std::uint64_t>();
    r.digits = j.at("digits").get<std::uint64_t>();
    r.value_digest = j.at("value_digest").get<std::string>();
    r.value_head = j.at("value_head").get<std::string>();
    r.value_tail = j.at("value_tail").get<std::string>();
    if (j.contains("full_value")) r.full_value = j.at("full_value").get<std::string>();
    if (j.contains("prime_status")) {
        const auto& v = j.at("prime_status");
        r.prime_status = PrimalityVerdict{
            parse_primality_status(v.at("status").get<std::string>()),
            v.at("evidence").get<std::string>()};
    }
    if (j.contains("triangular_k")) {
        const auto& k = j.at("triangular_k");
        r.triangular_k = k.is_string() ? Nat(k.get<std::string>()) : Nat(k.get<std::uint64_t>());
    }
    if (j.contains("elapsed_ms")) {
        const auto& t = j.at("elapsed_ms");
        r.elapsed_ms = CheckTimings{t.value("prime", std::uint64_t{0}),
                                    t.value("triangular", std::uint64_t{0})};
    }
    return r;
}

struct ReportHeader {
    int schema_version = kReportSchemaVersion;
    ScanConfig config;  // hashed fields only; workers/paths are not persisted
    std::string config_hash;
};

inline nlohmann::ordered_json header_to_json(const ScanConfig& c, const std::string& hash) {
    nlohmann::ordered_json cfg;
    cfg["kind"] = to_string(c.kind);
    cfg["base"] = to_string(c.base);
    cfg["from_index"] = c.from_index;
    cfg["to_index"] = c.to_index;
    std::vector<std::string> checks;
    if (c.checks.prime) checks.emplace_back("prime");
    if (c.checks.triangular) checks.emplace_back("triangular");
    cfg["checks"] = checks;
    cfg["trial_division_bound"] = c.policy.trial_division_bound;
    cfg["extra_mr_rounds"] = c.policy.extra_mr_rounds;
    cfg["seed"] = c.policy.seed;
    cfg["store_full_values"] = c.store_full_values;

    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["type"] = "scan_header";
    j["config"] = std::move(cfg);
    j["config_hash"] = hash;
    return j;
}

inline ReportHeader header_from_json(const nlohmann::json& j) {
    if (j.value("type", "") != "scan_header")
        throw std::invalid_argument("first line is not a scan_header record");
    ReportHeader h;
    h.schema_version = j.at("schema_version").get<int>();
    const auto& cfg = j.at("config");
    h.config.kind = parse_sequence_kind(cfg.at("kind").get<std::string>());
    h.config.base = parse_base_spec(cfg.at("base").get<std::string>());
    h.config.from_index = cfg.at("from_index").get<std::uint64_t>();
    h.config.to_index = cfg.at("to_index").get<std::uint64_t>();
    for (const auto& chk : cfg.at("checks")) {
        const std::string name = chk.get<std::string>();
        if (name == "prime")
            h.config.checks.prime = true;
        else if (name == "triangular")
            h.config.checks.triangular = true;
        else
            throw std::invalid_argument("unknown check in header: \"" + name + "\"");
    }
    h.config.policy.trial_division_bound = cfg.at("trial_division_bound").get<std::uint64_t>();
    h.config.policy.extra_mr_rounds = cfg.at("extra_mr_rounds").get<std::uint32_t>();
    h.config.policy.seed = cfg.at("seed").get<std::uint64_t>();
    h.config.store_full_values = cfg.at("store_full_values").get<bool>();
    h.config_hash = j.at("config_hash").get<std::string>();
    return h;
}

struct Checkpoint {
    int schema_version = kReportSchemaVersion;
    std::string config_hash;
    std::uint64_t last_completed_index = 0;
};

namespace detail {

inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline void checkpoint_save(const std::string& path, const std::string& hash,
                            std::uint64_t last_completed_index) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config_hash"] = hash;
    j["last_completed_index"] = last_completed_index;
    detail::write_file_atomic(path, j.dump() + "\n");
}

inline Checkpoint checkpoint_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j;
    try {
        in >> j;
        Checkpoint c;
        c.schema_version = j.at("schema_version").get<int>();
        c.config_hash = j.at("config_hash").get<std::string>();
        c.last_completed_index = j.at("last_completed_index").get<std::uint64_t>();
        return c;
    } catch (const std::exception& e) {
        throw std::runtime_error("corrupt checkpoint " + path + ": " + e.what());
    }
}

struct ReportData {
    ReportHeader header;
    std::vector<ScanRecord> records;
    std::vector<std::string> record_lines;  // original bytes, one per record
};

inline ReportData read_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open report: " + path);
    ReportData data;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const nlohmann::json j = nlohmann::json::parse(line);
            if (line_no == 1)
                data.header = header_from_json(j);
            else {
                data.records.push_back(record_from_json(j));
                data.record_lines.push_back(line);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (line_no == 0) throw std::runtime_error(path + ": line 1: empty report");
    return data;
}

namespace detail {

template <typename T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

    /// False once the queue is closed; the item is dropped in that case.
    bool push(T item) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
        if (closed_) return false;
        items_.push_back(std::move(item));
        not_empty_.notify_one();
        return true;
    }

    /// Blocks until an item arrives; nullopt once closed and drained.
    std::optional<T> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
        if (items_.empty()) return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return item;
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

private:
    std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::deque<T> items_;
    std::size_t capacity_;
    bool closed_ = false;
};

/// Classification of one term under the configured checks. Pure given
/// (config, term), so worker scheduling cannot affect record content.
inline ScanRecord classify_term(const ScanConfig& config, const Term& term) {
    ScanRecord rec;
    rec.kind = config.kind;
    rec.base = config.base;
    rec.index = term.index;
    rec.digits = term.digits;
    const std::string decimal = term.value.to_string();
    rec.value_digest = sha256_hex(decimal);
    const std::size_t head = std::min<std::size_t>(16, decimal.size());
    rec.value_head = decimal.substr(0, head);
    rec.value_tail = decimal.substr(decimal.size() - std::min<std::size_t>(16, decimal.size()));
    if (config.store_full_values) rec.full_value = decimal;

    CheckTimings timings;
    if (config.checks.prime) {
        const auto t0 = std::chrono::steady_clock::now();
        rec.prime_status = is_probable_prime(term.value, config.policy);
        timings.prime_ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                  t0)
                .count());
    }
    if (config.checks.triangular) {
        const auto t0 = std::chrono::steady_clock::now();
        rec.triangular_k = is_triangular(term.value);
        timings.triangular_ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                  t0)
                .count());
    }
    if (config.include_timings) rec.elapsed_ms = timings;
    return rec;
}

}  // namespace detail

struct ScanSummary {
    std::uint64_t scanned = 0;
    std::uint64_t resumed_from = 0;  // 0 for a fresh run
    std::vector<ScanRecord> prime_hits;
    std::vector<ScanRecord> triangular_hits;
    std::string output_path;
    std::optional<std::string> checkpoint_path;
};

namespace detail {

inline void accumulate_hits(ScanSummary& summary, const ScanRecord& rec) {
    if (rec.prime_status && rec.prime_status->status != PrimalityStatus::composite)
        summary.prime_hits.push_back(rec);
    if (rec.triangular_k) summary.triangular_hits.push_back(rec);
}

}  // namespace detail

/// Scans [from_index, to_index]: one producer replays the recurrence, N
/// workers classify, and an ordered merger persists one record per index.
/// Output is byte-identical for identical configs regardless of worker count.
inline ScanSummary run_scan(const ScanConfig& config) {
    if (config.from_index < 1 || config.from_index > config.to_index)
        throw std::invalid_argument("run_scan: need 1 <= from_index <= to_index");
    if (!config.checks.any()) throw std::invalid_argument("run_scan: no checks selected");
    if (config.workers < 1) throw std::invalid_argument("run_scan: need at least one worker");
    if (config.output_path.empty()) throw std::invalid_argument("run_scan: output path not set");

    const std::string hash = config_hash(config);
    const std::string header_line = header_to_json(config, hash).dump();

    ScanSummary summary;
    summary.output_path = config.output_path;
    summary.checkpoint_path = config.checkpoint_path;

    // Resume position and the already-complete report prefix.
    std::uint64_t start = config.from_index;
    std::vector<std::string> kept_lines;
    if (config.checkpoint_path && std::filesystem::exists(*config.checkpoint_path)) {
        const Checkpoint ck = checkpoint_load(*config.checkpoint_path);
        if (ck.config_hash != hash)
            throw std::runtime_error("checkpoint/config mismatch: checkpoint has config_hash " +
                                     ck.config_hash + ", current config hashes to " + hash);
        if (ck.last_completed_index < config.from_index ||
            ck.last_completed_index > config.to_index)
            throw std::runtime_error("checkpoint index " + std::to_string(ck.last_completed_index) +
                                     " lies outside the scan range");
        ReportData existing = read_report(config.output_path);
        if (existing.header.config_hash != hash)
            throw std::runtime_error("existing report belongs to a different config (hash " +
                                     existing.header.config_hash + ", expected " + hash + ")");
        // Keep the contiguous prefix the checkpoint vouches for; anything past
        // it (a write the checkpoint never saw) is discarded and recomputed.
        std::uint64_t expect = config.from_index;
        for (std::size_t i = 0; i < existing.records.size(); ++i) {
            const ScanRecord& rec = existing.records[i];
            if (rec.index > ck.last_completed_index) break;
            if (rec.index != expect)
                throw std::runtime_error("report records are not contiguous at index " +
                                         std::to_string(rec.index) + " (expected " +
                                         std::to_string(expect) + ")");
            detail::accumulate_hits(summary, rec);
            kept_lines.push_back(existing.record_lines[i]);
            ++expect;
        }
        if (expect != ck.last_completed_index + 1)
            throw std::runtime_error("report ends at index " + std::to_string(expect - 1) +
                                     " but checkpoint claims " +
                                     std::to_string(ck.last_completed_index));
        start = ck.last_completed_index + 1;
        summary.resumed_from = start;
        summary.scanned = kept_lines.size();
    }

    {
        std::string prefix = header_line + "\n";
        for (const std::string& line : kept_lines) prefix += line + "\n";
        detail::write_file_atomic(config.output_path, prefix);
    }

    if (start > config.to_index) {
        if (config.checkpoint_path)
            checkpoint_save(*config.checkpoint_path, hash, config.to_index);
        return summary;
    }

    std::ofstream out(config.output_path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot open report for writing: " + config.output_path);

    struct ResultEntry {
        ScanRecord record;
        std::string line;
    };

    detail::BoundedQueue<Term> jobs(config.workers * 2 + 2);
    detail::BoundedQueue<ResultEntry> results(config.workers * 2 + 2);
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const auto note_error = [&](std::exception_ptr e) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = e;
    };

    std::thread producer([&] {
        try {
            Generator gen(config.kind, config.base);
            for (std::uint64_t i = 1; i <= config.to_index; ++i) {
                Term term = gen.next();
                if (term.index < start) continue;  // replayed prefix
                if (!jobs.push(std::move(term))) return;
            }
        } catch (...) {
            note_error(std::current_exception());
        }
        jobs.close();
    });

    std::atomic<unsigned> active_workers{config.workers};
    std::vector<std::thread> workers;
    workers.reserve(config.workers);
    for (unsigned w = 0; w < config.workers; ++w) {
        workers.emplace_back([&] {
            try {
                while (auto term = jobs.pop()) {
                    ScanRecord rec = detail::classify_term(config, *term);
                    std::string line = record_to_json(rec).dump();
                    if (!results.push({std::move(rec), std::move(line)})) break;
                }
            } catch (...) {
                note_error(std::current_exception());
                jobs.close();  // unblocks the producer
            }
            if (active_workers.fetch_sub(1) == 1) results.close();
        });
    }

    // Ordered merge in this thread; records may finish out of order.
    std::uint64_t next_index = start;
    std::map<std::uint64_t, ResultEntry> pending;
    try {
        while (auto entry = results.pop()) {
            pending.emplace(entry->record.index, std::move(*entry));
            while (!pending.empty() && pending.begin()->first == next_index) {
                const auto it = pending.begin();
                out << it->second.line << '\n';
                if (!out) throw std::runtime_error("report write failed: " + config.output_path);
                detail::accumulate_hits(summary, it->second.record);
                ++summary.scanned;
                if (config.checkpoint_path &&
                    (next_index - config.from_index + 1) % 10 == 0) {
                    out.flush();
                    checkpoint_save(*config.checkpoint_path, hash, next_index);
                }
                ++next_index;
                pending.erase(it);
            }
        }
    } catch (...) {
        note_error(std::current_exception());
        jobs.close();
        results.close();
    }

    producer.join();
    for (std::thread& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
    if (next_index != config.to_index + 1)
        throw std::runtime_error("scan pipeline stopped early at index " +
                                 std::to_string(next_index));

    out.flush();
    if (!out) throw std::runtime_error("report flush failed: " + config.output_path);
    if (config.checkpoint_path) checkpoint_save(*config.checkpoint_path, hash, config.to_index);
    return summary;
}

struct VerifyIssue {
    std::uint64_t index = 0;  // 0 for report-level problems
    std::string what;
};

struct VerifySummary {
    std::uint64_t records = 0;
    std::vector<VerifyIssue> issues;
    bool clean() const { return issues.empty(); }
};

/// Recomputes every record from scratch: digits via the closed form, digest
/// and head/tail by regenerating the term, triangularity exactly, and the
/// primality verdict under an independent witness seed (prime vs
/// probable_prime is equivalent; composite vs either is a mismatch).
inline VerifySummary verify_report(const std::string& path) {
    const ReportData data = read_report(path);
    const ScanConfig& cfg = data.header.config;
    VerifySummary summary;
    const auto issue = [&](std::uint64_t index, std::string what) {
        summary.issues.push_back({index, std::move(what)});
    };

    if (config_hash(cfg) != data.header.config_hash)
        issue(0, "header config_hash does not match the echoed config");

    PrimalityPolicy reseeded = cfg.policy;
    reseeded.seed = cfg.policy.seed ^ 0x9e3779b97f4a7c15ULL;

    Generator gen(cfg.kind, cfg.base);
    std::uint64_t generated = 0;
    Term term{0, Nat(0), 0};
    std::uint64_t expect = cfg.from_index;
    for (const ScanRecord& rec : data.records) {
        ++summary.records;
        if (rec.index != expect) {
            issue(rec.index, "expected index " + std::to_string(expect) + " at this position");
            expect = rec.index;  // verify content anyway
        }
        ++expect;
        if (rec.index < 1 || rec.index > cfg.to_index) {
            issue(rec.index, "index outside the configured range");
            continue;
        }

        while (generated < rec.index) {
            term = gen.next();
            ++generated;
        }
        const std::string decimal = term.value.to_string();

        if (rec.digits != digits_at(cfg.kind, cfg.base, rec.index))
            issue(rec.index, "digits field disagrees with the digit-count formula");
        if (rec.value_digest != sha256_hex(decimal))
            issue(rec.index, "value_digest does not match the regenerated term");
        if (rec.full_value && sha256_hex(*rec.full_value) != rec.value_digest)
            issue(rec.index, "value_digest does not match the stored full_value");
        const std::size_t head = std::min<std::size_t>(16, decimal.size());
        if (rec.value_head != decimal.substr(0, head))
            issue(rec.index, "value_head does not match the regenerated term");
        if (rec.value_tail != decimal.substr(decimal.size() - head))
            issue(rec.index, "value_tail does not match the regenerated term");
        if (rec.full_value && *rec.full_value != decimal)
            issue(rec.index, "full_value does not match the regenerated term");

        if (cfg.checks.prime) {
            if (!rec.prime_status) {
                issue(rec.index, "prime check configured but no verdict recorded");
            } else {
                const PrimalityVerdict fresh = is_probable_prime(term.value, reseeded);
                const bool was_composite = rec.prime_status->status == PrimalityStatus::composite;
                const bool is_composite = fresh.status == PrimalityStatus::composite;
                if (was_composite != is_composite)
                    issue(rec.index, "primality disagreement under independent seed: recorded " +
                                         std::string(to_string(rec.prime_status->status)) +
                                         ", recomputed " + std::string(to_string(fresh.status)));
            }
        } else if (rec.prime_status) {
            issue(rec.index, "prime verdict present but the prime check was not configured");
        }

        if (cfg.checks.triangular) {
            const auto k = is_triangular(term.value);
            if (k.has_value() != rec.triangular_k.has_value())
                issue(rec.index, "triangularity disagreement on recomputation");
            else if (k && !(*k == *rec.triangular_k))
                issue(rec.index, "triangular index k disagrees on recomputation");
        } else if (rec.triangular_k) {
            issue(rec.index, "triangular_k present but the triangular check was not configured");
        }
    }
    return summary;
}

}  // namespace smseq
