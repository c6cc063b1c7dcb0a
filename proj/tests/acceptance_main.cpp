// Acceptance sweep. Each criterion prints exactly one [PASS]/[FAIL] line;
// the exit code is the number of failures. Run a subset with --only N.
//
//   1  first-terms listings, all eight (kind, base) pairs, exact strings
//   2  digit counts of deep terms, cross-checked against materialized terms
//   3  prime-scan hit sets over the triangular base (the slow one)
//   4  triangular-scan hit sets
//   5  property suites (concat laws, string oracle, classifier oracles,
//      palindromes)
//   6  scan determinism across worker counts + report verification

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracle.hpp"
#include "smseq/classify.hpp"
#include "smseq/concat.hpp"
#include "smseq/scan.hpp"
#include "smseq/sequence.hpp"

namespace {

namespace fs = std::filesystem;
using smseq::BaseSpec;
using smseq::Nat;
using smseq::SequenceKind;

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure(what);
}

std::string run_cli_capture(const std::string& args, int& exit_code) {
    const std::string cmd = std::string(SMSEQ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw CheckFailure("failed to launch CLI");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = ::pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

unsigned scan_workers() {
    if (const char* env = std::getenv("SMSEQ_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- expected values -------------------------------------------------------

struct Listing {
    const char* kind;
    const char* base;
    const char* line;
};

const Listing kListings[] = {
    {"scs", "natural",
     "1, 12, 123, 1234, 12345, 123456, 1234567, 12345678, 123456789, 12345678910"},
    {"scs", "triangular",
     "1, 13, 136, 13610, 1361015, 136101521, 13610152128, 1361015212836, 136101521283645, "
     "13610152128364555"},
    {"rss", "natural",
     "1, 21, 321, 4321, 54321, 654321, 7654321, 87654321, 987654321, 10987654321"},
    {"rss", "triangular",
     "1, 31, 631, 10631, 1510631, 211510631, 28211510631, 3628211510631, 453628211510631, "
     "55453628211510631"},
    {"sms", "natural",
     "1, 212, 32123, 4321234, 543212345, 65432123456, 7654321234567, 876543212345678, "
     "98765432123456789, 109876543212345678910"},
    {"sms", "triangular",
     "1, 313, 63136, 106313610, 1510631361015, 21151063136101521, 282115106313610152128, "
     "3628211510631361015212836, 45362821151063136101521283645, "
     "554536282115106313610152128364555"},
    {"sss", "natural",
     "1, 11, 121, 1221, 12321, 123321, 1234321, 12344321, 123454321, 1234554321"},
    {"sss", "triangular",
     "1, 11, 131, 1331, 13631, 136631, 136110631, 1361010631, 1361011510631, 13610151510631"},
};

// the 58-digit and 336-digit symmetric probable primes, line breaks stripped
const std::string kSymmetricPrime58 =
    "1361015212836455566789110512012010591786655453628211510631";
const std::string kSymmetricPrime336 =
    "1361015212836455566789110512013615317119021023125327630032535137840643546549652856159"
    "5630666703741780820861903946990103510811128117612251275132613781431148515401596165316"
    "5315961540148514311378132612751225117611281081103599094690386182078074170366663059556"
    "152849646543540637835132530027625323121019017115313612010591786655453628211510631";

struct ExpectedScan {
    SequenceKind kind;
    std::uint64_t to;
    std::vector<std::string> hits;
};

const ExpectedScan kPrimeScans[] = {
    {SequenceKind::consecutive, 1000, {"13", "136101521"}},
    {SequenceKind::reversed,
     1000,
     {"31", "631", "10631", "55453628211510631", "786655453628211510631",
      "10591786655453628211510631"}},
    {SequenceKind::mirror, 600, {"313"}},
    {SequenceKind::symmetric,
     1000,
     {"11", "131", "136110631", kSymmetricPrime58, kSymmetricPrime336}},
};

const ExpectedScan kTriangularScans[] = {
    {SequenceKind::consecutive, 1000, {"1", "136"}},
    {SequenceKind::reversed, 1000, {"1"}},
    {SequenceKind::mirror, 1000, {"1"}},
    {SequenceKind::symmetric, 1000, {"1"}},
};

// ---- criteria --------------------------------------------------------------

void criterion_1_listings() {
    for (const Listing& listing : kListings) {
        int code = 0;
        const std::string cmd = std::string("gen --kind ") + listing.kind + " --base " +
                                listing.base + " --count 10 --format plain";
        const std::string out = run_cli_capture(cmd, code);
        expect(code == 0, std::string("gen exited nonzero for ") + listing.kind + "/" +
                              listing.base);
        expect(out == std::string(listing.line) + "\n",
               std::string("listing mismatch for ") + listing.kind + "/" + listing.base +
                   ": got \"" + out + "\"");
    }
}

void criterion_2_digit_counts() {
    const struct {
        SequenceKind kind;
        std::uint64_t index;
        std::uint64_t expect_digits;
    } cases[] = {
        {SequenceKind::consecutive, 1000, 5354}, {SequenceKind::reversed, 1000, 5354},
        {SequenceKind::mirror, 1000, 10707},     {SequenceKind::symmetric, 1000, 4708},
        {SequenceKind::mirror, 600, 5907},
    };
    for (const auto& c : cases) {
        const std::uint64_t fast = smseq::digits_at(c.kind, BaseSpec::triangular, c.index);
        expect(fast == c.expect_digits,
               "digits_at(" + std::string(smseq::to_string(c.kind)) + ", triangular, " +
                   std::to_string(c.index) + ") = " + std::to_string(fast) + ", expected " +
                   std::to_string(c.expect_digits));
        const smseq::Term term = smseq::term_at(c.kind, BaseSpec::triangular, c.index);
        expect(smseq::digit_length(term.value) == c.expect_digits,
               "materialized digit count disagrees at " + std::to_string(c.index));
    }
}

std::vector<std::string> scan_hit_values(SequenceKind kind, std::uint64_t to, bool prime,
                                         const fs::path& dir) {
    smseq::ScanConfig config;
    config.kind = kind;
    config.base = BaseSpec::triangular;
    config.from_index = 1;
    config.to_index = to;
    config.checks.prime = prime;
    config.checks.triangular = !prime;
    config.workers = scan_workers();
    config.store_full_values = true;
    config.output_path =
        (dir / (std::string(smseq::to_string(kind)) + (prime ? "_prime" : "_tri") + ".jsonl"))
            .string();
    const smseq::ScanSummary summary = smseq::run_scan(config);
    std::vector<std::string> values;
    for (const auto& rec : prime ? summary.prime_hits : summary.triangular_hits)
        values.push_back(*rec.full_value);
    return values;
}

void criterion_3_prime_scans(const fs::path& dir) {
    for (const ExpectedScan& scan : kPrimeScans) {
        const auto got = scan_hit_values(scan.kind, scan.to, true, dir);
        expect(got == scan.hits,
               std::string(smseq::to_string(scan.kind)) + " prime hits differ: got " +
                   std::to_string(got.size()) + " hits, expected " +
                   std::to_string(scan.hits.size()));
    }
    // the fifth symmetric hit really is the printed 336-digit block
    expect(kSymmetricPrime336.size() == 336, "embedded 336-digit value has the wrong length");
}

void criterion_4_triangular_scans(const fs::path& dir) {
    for (const ExpectedScan& scan : kTriangularScans) {
        const auto got = scan_hit_values(scan.kind, scan.to, false, dir);
        expect(got == scan.hits, std::string(smseq::to_string(scan.kind)) +
                                     " triangular hits differ: got " + std::to_string(got.size()) +
                                     " hits");
    }
}

void criterion_5_property_suites() {
    // concat algebra laws on 10^4 random pairs
    std::mt19937_64 rng(0xacce97);
    const auto random_nat = [&rng](int max_digits, bool allow_zero) {
        if (allow_zero && rng() % 16 == 0) return Nat(0);
        const int len = 1 + static_cast<int>(rng() % max_digits);
        std::string s;
        s += static_cast<char>('1' + rng() % 9);
        for (int i = 1; i < len; ++i) s += static_cast<char>('0' + rng() % 10);
        return Nat(s);
    };
    for (int iter = 0; iter < 10000; ++iter) {
        const Nat a = random_nat(40, true);
        const Nat b = random_nat(40, true);
        expect(smseq::conc(Nat(0), b) == b, "conc(0, b) != b");
        if (!a.is_zero()) {
            const Nat joined = smseq::conc(a, b);
            expect(smseq::digit_length(joined) ==
                       smseq::digit_length(a) + smseq::digit_length(b),
                   "digit length not additive");
            expect(joined.to_string() == a.to_string() + b.to_string(),
                   "conc is not string concatenation");
            expect(smseq::conc(smseq::bld(a), Nat(a % std::uint64_t{10})) == a,
                   "conc(bld(n), n mod 10) != n");
        }
    }

    // string-oracle equivalence to index 200, all kinds and bases
    for (SequenceKind kind : {SequenceKind::consecutive, SequenceKind::reversed,
                              SequenceKind::mirror, SequenceKind::symmetric}) {
        for (BaseSpec base : {BaseSpec::natural, BaseSpec::triangular}) {
            smseq::Generator gen(kind, base);
            for (std::uint64_t n = 1; n <= 200; ++n) {
                const smseq::Term term = gen.next();
                const std::string want = oracle::term_str(kind, base, n);
                expect(term.value.to_string() == want && term.digits == want.size() &&
                           smseq::digits_at(kind, base, n) == want.size(),
                       "string oracle mismatch at " + std::string(smseq::to_string(kind)) + "/" +
                           std::string(smseq::to_string(base)) + " index " + std::to_string(n));
            }
        }
    }

    // is_triangular against brute-force enumeration to 10^6
    std::uint64_t k = 1, t = 1;
    for (std::uint64_t x = 1; x <= 1000000; ++x) {
        while (t < x) {
            ++k;
            t = k * (k + 1) / 2;
        }
        const auto got = smseq::is_triangular(Nat(x));
        expect(got.has_value() == (t == x), "is_triangular disagrees at " + std::to_string(x));
        if (got) expect(*got == Nat(k), "is_triangular k wrong at " + std::to_string(x));
    }

    // is_probable_prime against a sieve to 10^6
    constexpr std::uint64_t kLimit = 1000000;
    std::vector<bool> composite(kLimit + 1, false);
    composite[0] = composite[1] = true;
    for (std::uint64_t p = 2; p * p <= kLimit; ++p)
        if (!composite[p])
            for (std::uint64_t m = p * p; m <= kLimit; m += p) composite[m] = true;
    const smseq::PrimalityPolicy policy;
    for (std::uint64_t x = 0; x <= kLimit; ++x) {
        const auto verdict = smseq::is_probable_prime(Nat(x), policy);
        expect((verdict.status == smseq::PrimalityStatus::prime) == !composite[x] &&
                   verdict.status != smseq::PrimalityStatus::probable_prime,
               "sieve disagreement at " + std::to_string(x));
    }

    // palindromes while base terms are single digits (natural base)
    for (std::uint64_t n = 1; n <= 9; ++n)
        expect(oracle::is_palindrome(
                   smseq::term_at(SequenceKind::mirror, BaseSpec::natural, n).value.to_string()),
               "mirror term " + std::to_string(n) + " is not a palindrome");
    for (std::uint64_t n = 1; n <= 18; ++n)
        expect(oracle::is_palindrome(
                   smseq::term_at(SequenceKind::symmetric, BaseSpec::natural, n).value.to_string()),
               "symmetric term " + std::to_string(n) + " is not a palindrome");
}

void criterion_6_determinism(const fs::path& dir) {
    smseq::ScanConfig config;
    config.kind = SequenceKind::reversed;
    config.base = BaseSpec::triangular;
    config.from_index = 1;
    config.to_index = 120;
    config.checks.prime = true;
    config.checks.triangular = true;
    config.store_full_values = false;

    config.workers = 1;
    config.output_path = (dir / "det_w1.jsonl").string();
    smseq::run_scan(config);
    config.workers = 8;
    config.output_path = (dir / "det_w8.jsonl").string();
    smseq::run_scan(config);

    expect(slurp((dir / "det_w1.jsonl").string()) == slurp((dir / "det_w8.jsonl").string()),
           "reports differ between workers=1 and workers=8");
    expect(smseq::verify_report((dir / "det_w1.jsonl").string()).clean(),
           "verify found issues in the workers=1 report");
    expect(smseq::verify_report((dir / "det_w8.jsonl").string()).clean(),
           "verify found issues in the workers=8 report");
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

    const fs::path dir =
        fs::temp_directory_path() / ("smseq_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    struct Criterion {
        int id;
        const char* name;
        std::function<void()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "first-terms listings (8 pairs, exact)", [] { criterion_1_listings(); }},
        {2, "deep digit counts (5354/5354/10707/4708/5907)", [] { criterion_2_digit_counts(); }},
        {3, "prime-scan hit sets (triangular base)", [&] { criterion_3_prime_scans(dir); }},
        {4, "triangular-scan hit sets", [&] { criterion_4_triangular_scans(dir); }},
        {5, "property suites", [] { criterion_5_property_suites(); }},
        {6, "scan determinism + verification", [&] { criterion_6_determinism(dir); }},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        try {
            criterion.run();
            std::cout << "[PASS] criterion " << criterion.id << ": " << criterion.name << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "[FAIL] criterion " << criterion.id << ": " << criterion.name << " - "
                      << e.what() << "\n";
        }
        std::cout.flush();
    }

    fs::remove_all(dir);
    return failures;
}
