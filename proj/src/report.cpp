#include "latpar/report.hpp"

#include <sstream>

namespace latpar {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::Paper: return "paper";
        case Provenance::Derived: return "derived";
        case Provenance::Trivial: return "trivial";
    }
    return "derived";
}

const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::DiscrepancyDocumented: return "discrepancy-documented";
    }
    return "fail";
}

void VerificationReport::add_param(const std::string& name, const std::string& value) {
    params.emplace_back(name, value);
}

void VerificationReport::add_param(const std::string& name, long long value) {
    params.emplace_back(name, std::to_string(value));
}

void VerificationReport::add_computed(const std::string& name, const std::string& value) {
    computed.emplace_back(name, value);
}

void VerificationReport::add_computed(const std::string& name, int128 value) {
    computed.emplace_back(name, to_decimal(value));
}

void VerificationReport::add_computed(const std::string& name, bool value) {
    computed.emplace_back(name, value ? "true" : "false");
}

void VerificationReport::add_expected(const std::string& name, const std::string& value,
                                      Provenance prov) {
    expected.emplace_back(name, ExpectedValue{value, prov});
}

void VerificationReport::add_expected(const std::string& name, int128 value, Provenance prov) {
    expected.emplace_back(name, ExpectedValue{to_decimal(value), prov});
}

void VerificationReport::add_expected(const std::string& name, bool value, Provenance prov) {
    expected.emplace_back(name, ExpectedValue{value ? "true" : "false", prov});
}

const std::string* VerificationReport::find_computed(const std::string& name) const {
    for (const auto& [k, v] : computed) {
        if (k == name) return &v;
    }
    return nullptr;
}

void VerificationReport::finalize_status() {
    for (const auto& [name, exp] : expected) {
        const std::string* got = find_computed(name);
        if (got == nullptr || *got != exp.value) {
            status = Status::Fail;
            return;
        }
    }
    status = Status::Pass;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json jparams = nlohmann::json::object();
    for (const auto& [k, v] : params) jparams[k] = v;
    nlohmann::json jcomputed = nlohmann::json::object();
    for (const auto& [k, v] : computed) jcomputed[k] = v;
    nlohmann::json jexpected = nlohmann::json::object();
    for (const auto& [k, v] : expected) {
        jexpected[k] = {{"value", v.value}, {"provenance", to_string(v.provenance)}};
    }
    nlohmann::json j = {{"task", task},           {"params", jparams},
                        {"computed", jcomputed},  {"expected", jexpected},
                        {"status", to_string(status)}, {"elapsed_ms", elapsed_ms},
                        {"threads", threads},     {"version", version}};
    if (!note.empty()) j["note"] = note;
    if (!details.is_null()) j["details"] = details;
    return j;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << "[" << to_string(status) << "] " << task;
    for (const auto& [k, v] : params) os << " " << k << "=" << v;
    os << "\n";
    for (const auto& [k, v] : computed) {
        os << "    " << k << " = " << v;
        for (const auto& [ek, ev] : expected) {
            if (ek == k) {
                os << "   (expected " << ev.value << ", " << to_string(ev.provenance) << ")";
                break;
            }
        }
        os << "\n";
    }
    for (const auto& [ek, ev] : expected) {
        if (find_computed(ek) == nullptr) {
            os << "    " << ek << " = " << ev.value << "   (" << to_string(ev.provenance)
               << " reference)\n";
        }
    }
    if (!note.empty()) os << "    note: " << note << "\n";
    return os.str();
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

void VerificationReport::csv_header(std::ostream& os) {
    os << "task,params,name,computed,expected,provenance,status,elapsed_ms,threads,version\n";
}

void VerificationReport::append_csv(std::ostream& os) const {
    std::string flat_params;
    for (const auto& [k, v] : params) {
        if (!flat_params.empty()) flat_params += ";";
        flat_params += k + "=" + v;
    }
    auto row = [&](const std::string& name, const std::string& got, const std::string& want,
                   const std::string& prov) {
        os << csv_escape(task) << "," << csv_escape(flat_params) << "," << csv_escape(name) << ","
           << csv_escape(got) << "," << csv_escape(want) << "," << prov << "," << to_string(status)
           << "," << elapsed_ms << "," << threads << "," << version << "\n";
    };
    for (const auto& [k, v] : computed) {
        const ExpectedValue* exp = nullptr;
        for (const auto& [ek, ev] : expected) {
            if (ek == k) {
                exp = &ev;
                break;
            }
        }
        if (exp != nullptr) {
            row(k, v, exp->value, to_string(exp->provenance));
        } else {
            row(k, v, "", "");
        }
    }
    for (const auto& [ek, ev] : expected) {
        if (find_computed(ek) == nullptr) row(ek, "", ev.value, to_string(ev.provenance));
    }
}

}  // namespace latpar
