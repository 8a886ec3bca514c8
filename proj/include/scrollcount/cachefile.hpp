#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

#include "scrollcount/engine.hpp"
#include "scrollcount/oracle.hpp"

namespace scrollcount {

inline constexpr const char* kToolVersion = "scrollcount 1.0.0";

// On-disk result cache shared by the engine and the oracle. The format is a
// versioned, line-oriented, human-readable text document so that caches can
// be diffed and reviewed:
//
//   scrollcount-cache v1
//   # tool: scrollcount 1.0.0
//   # written-at: 2026-01-01T00:00:00Z
//   engine S(1,2)P4|d=-|J=0|c=[0SF,...]|f=[] = 2
//   oracle G1.4|d3|3,3,3.3 = 5 derived
//
// Records are merge-only: loading, absorbing and saving never changes an
// existing value. Any disagreement — between two lines of a file, between a
// file and a live store, or between two files — is a fatal
// CacheIntegrityError, because a changed count means one of the runs was
// wrong.
class CacheFile {
public:
    static constexpr const char* kMagic = "scrollcount-cache v1";

    struct OracleRecord {
        mpz_class value;
        std::string provenance;
        bool operator==(const OracleRecord& o) const { return value == o.value; }
    };

    CacheFile() = default;

    // Loads a cache document. A missing file yields an empty cache; a file
    // that exists but lacks the magic header, or contains conflicting or
    // unparsable records, throws CacheIntegrityError.
    static CacheFile load(const std::string& path);

    // Writes the merged document back. A cache with no additions since load
    // is left untouched (replays do not mutate the file).
    void save(const std::string& path) const;

    // Engine <-> cache.
    void seed_engine(DegenerationEngine& engine) const;
    void absorb_engine(const DegenerationEngine& engine);

    // Oracle <-> cache.
    void seed_oracle(GwOracle& oracle) const;
    void absorb_oracle(const GwOracle& oracle);

    // Raw record access (merge-only; conflicting values throw).
    void add_engine_record(const std::string& key, const mpz_class& value);
    void add_oracle_record(const std::string& key, const mpz_class& value,
                           const std::string& provenance);

    const std::map<std::string, mpz_class>& engine_records() const { return engine_; }
    const std::map<std::string, OracleRecord>& oracle_records() const { return oracle_; }

    bool dirty() const { return dirty_; }
    std::size_t size() const { return engine_.size() + oracle_.size(); }

private:
    std::map<std::string, mpz_class> engine_;
    std::map<std::string, OracleRecord> oracle_;
    bool dirty_ = false;
};

// Stable, whitespace-free encoding of an invariant key used in cache records:
// "G<k>.<n>|d<degree>|<classes>" with each class's parts joined by '.' and
// classes joined by ','.
std::string encode_invariant_key(const InvariantKey& key);
InvariantKey decode_invariant_key(const std::string& text);

} // namespace scrollcount
