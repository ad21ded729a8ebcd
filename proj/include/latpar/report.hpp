#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "latpar/int128.hpp"

namespace latpar {

inline constexpr const char* kVersion = "1.0.0";

enum class Provenance { Paper, Derived, Trivial };
enum class Status { Pass, Fail, DiscrepancyDocumented };

const char* to_string(Provenance p);
const char* to_string(Status s);

struct ExpectedValue {
    std::string value;
    Provenance provenance = Provenance::Derived;
};

// One theorem or identity check: the computed values, the expected values
// with their provenance, and the verdict. Every value is carried as a
// decimal string so arbitrarily large exact integers survive serialization.
struct VerificationReport {
    std::string task;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> computed;
    std::vector<std::pair<std::string, ExpectedValue>> expected;
    Status status = Status::Pass;
    std::string note;
    nlohmann::json details;  // optional per-item audit rows
    double elapsed_ms = 0.0;
    int threads = 1;
    std::string version = kVersion;

    void add_param(const std::string& name, const std::string& value);
    void add_param(const std::string& name, long long value);
    void add_computed(const std::string& name, const std::string& value);
    void add_computed(const std::string& name, int128 value);
    void add_computed(const std::string& name, bool value);
    void add_expected(const std::string& name, const std::string& value, Provenance prov);
    void add_expected(const std::string& name, int128 value, Provenance prov);
    void add_expected(const std::string& name, bool value, Provenance prov);

    const std::string* find_computed(const std::string& name) const;

    // Pass iff every expected entry has an equal computed entry of the same
    // name. Reports with special verdict rules set status directly instead.
    void finalize_status();
    bool failed() const { return status == Status::Fail; }

    nlohmann::json to_json() const;
    std::string to_text() const;

    // One CSV row per expected or computed-only entry.
    static void csv_header(std::ostream& os);
    void append_csv(std::ostream& os) const;
};

}  // namespace latpar
