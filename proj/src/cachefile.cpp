#include "scrollcount/cachefile.hpp"

#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace scrollcount {

namespace {

bool parse_int(const std::string& s, size_t& pos, int& out) {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) return false;
    out = std::stoi(s.substr(start, pos - start));
    return true;
}

[[noreturn]] void bad_record(const std::string& line, const std::string& why) {
    throw CacheIntegrityError("unreadable cache record (" + why + "): " + line);
}

std::string timestamp_utc() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string encode_invariant_key(const InvariantKey& key) {
    std::ostringstream os;
    os << "G" << key.space.k << "." << key.space.n << "|d" << key.degree << "|";
    for (size_t i = 0; i < key.classes.size(); ++i) {
        if (i) os << ",";
        const auto& parts = key.classes[i].parts();
        for (size_t j = 0; j < parts.size(); ++j) {
            if (j) os << ".";
            os << parts[j];
        }
    }
    return os.str();
}

InvariantKey decode_invariant_key(const std::string& text) {
    size_t pos = 0;
    auto fail = [&]() -> InvariantKey {
        throw CacheIntegrityError("unreadable invariant key: " + text);
    };
    if (pos >= text.size() || text[pos] != 'G') return fail();
    ++pos;
    int k = 0, n = 0, degree = 0;
    if (!parse_int(text, pos, k)) return fail();
    if (pos >= text.size() || text[pos] != '.') return fail();
    ++pos;
    if (!parse_int(text, pos, n)) return fail();
    if (pos + 1 >= text.size() || text[pos] != '|' || text[pos + 1] != 'd') return fail();
    pos += 2;
    if (!parse_int(text, pos, degree)) return fail();
    if (pos >= text.size() || text[pos] != '|') return fail();
    ++pos;
    std::vector<Partition> classes;
    if (pos < text.size()) {
        std::vector<int> parts;
        while (pos <= text.size()) {
            if (pos == text.size() || text[pos] == ',') {
                if (parts.empty()) return fail();
                classes.push_back(Partition(parts));
                parts.clear();
                if (pos == text.size()) break;
                ++pos;
                continue;
            }
            if (text[pos] == '.') {
                ++pos;
                continue;
            }
            int part = 0;
            if (!parse_int(text, pos, part)) return fail();
            parts.push_back(part);
        }
    }
    return InvariantKey::make(GrassmannianId(k, n), degree, std::move(classes));
}

CacheFile CacheFile::load(const std::string& path) {
    CacheFile cache;
    std::ifstream in(path);
    if (!in) return cache; // a missing cache is an empty cache
    std::string line;
    if (!std::getline(in, line) || line != kMagic) {
        throw CacheIntegrityError("cache file " + path +
                                  " lacks the expected header \"" + kMagic + "\"");
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag, key, eq, value;
        if (!(ls >> tag >> key >> eq >> value) || eq != "=") bad_record(line, "layout");
        try {
            if (tag == "engine") {
                cache.add_engine_record(key, mpz_class(value));
            } else if (tag == "oracle") {
                std::string provenance;
                if (!(ls >> provenance)) bad_record(line, "missing provenance");
                decode_invariant_key(key); // validate eagerly
                cache.add_oracle_record(key, mpz_class(value), provenance);
            } else {
                bad_record(line, "unknown record type \"" + tag + "\"");
            }
        } catch (const CacheIntegrityError&) {
            throw;
        } catch (const std::exception& e) {
            bad_record(line, e.what());
        }
    }
    cache.dirty_ = false; // loading is not an addition
    return cache;
}

void CacheFile::save(const std::string& path) const {
    if (!dirty_) return;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw CacheIntegrityError("cannot write cache file " + path);
    out << kMagic << "\n";
    out << "# tool: " << kToolVersion << "\n";
    out << "# written-at: " << timestamp_utc() << "\n";
    out << "# " << engine_.size() << " engine record(s), " << oracle_.size()
        << " oracle record(s)\n";
    for (const auto& [key, value] : engine_) {
        out << "engine " << key << " = " << value.get_str() << "\n";
    }
    for (const auto& [key, rec] : oracle_) {
        out << "oracle " << key << " = " << rec.value.get_str() << " "
            << rec.provenance << "\n";
    }
}

void CacheFile::add_engine_record(const std::string& key, const mpz_class& value) {
    auto it = engine_.find(key);
    if (it != engine_.end()) {
        if (it->second != value) {
            throw CacheIntegrityError("engine cache conflict for " + key + ": " +
                                      it->second.get_str() + " vs " + value.get_str());
        }
        return;
    }
    engine_.emplace(key, value);
    dirty_ = true;
}

void CacheFile::add_oracle_record(const std::string& key, const mpz_class& value,
                                  const std::string& provenance) {
    auto it = oracle_.find(key);
    if (it != oracle_.end()) {
        if (!(it->second.value == value)) {
            throw CacheIntegrityError("oracle cache conflict for " + key + ": " +
                                      it->second.value.get_str() + " vs " +
                                      value.get_str());
        }
        return;
    }
    oracle_.emplace(key, OracleRecord{value, provenance});
    dirty_ = true;
}

void CacheFile::seed_engine(DegenerationEngine& engine) const {
    for (const auto& [key, value] : engine_) engine.import_memo(key, value);
}

void CacheFile::absorb_engine(const DegenerationEngine& engine) {
    for (const auto& [key, value] : engine.memo_entries()) add_engine_record(key, value);
}

void CacheFile::seed_oracle(GwOracle& oracle) const {
    for (const auto& [key, rec] : oracle_)
        oracle.import_entry(decode_invariant_key(key), rec.value);
}

void CacheFile::absorb_oracle(const GwOracle& oracle) {
    for (const auto& [key, stored] : oracle.entries())
        add_oracle_record(encode_invariant_key(key), stored.value,
                          to_string(stored.provenance));
}

} // namespace scrollcount
