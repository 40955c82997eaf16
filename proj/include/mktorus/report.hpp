#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace mktorus {

using json = nlohmann::json;

// Reports are JSON lines, one record per measurement, schema-versioned.
// A record always carries "schema" and "table"; the renderer pivots the
// records into markdown tables laid out like the published comparisons.
inline constexpr int kReportSchema = 1;

inline json report_record(const std::string& table) {
    json j;
    j["schema"] = kReportSchema;
    j["table"] = table;
    return j;
}

inline void append_report(const std::string& path, const json& record) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + path);
    out << record.dump() << "\n";
}

inline std::vector<json> load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<json> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = json::parse(line);
        if (j.value("schema", 0) != kReportSchema) continue;
        records.push_back(std::move(j));
    }
    return records;
}

namespace detail {

inline std::string pct(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << 100.0 * v << "%";
    return os.str();
}

inline std::string act_label(const std::string& act) {
    if (act == "taylor7") return "7-order Taylor polynomial";
    if (act == "taylor3") return "3-order Taylor polynomial";
    if (act == "g") return "Our function";
    if (act == "sigmoid") return "Sigmoid";
    return act;
}

}  // namespace detail

// Markdown rendering in the published row/column layouts.
inline std::string render_table(const std::string& table, const std::vector<json>& records) {
    std::ostringstream md;
    auto rows_of = [&](const std::string& t) {
        std::vector<json> out;
        for (const auto& r : records)
            if (r.value("table", "") == t) out.push_back(r);
        return out;
    };

    if (table == "t1") {
        md << "### Distributed decryption\n\n";
        md << "| Participants k | Naive decryption/s | Our protocol/s | Accuracy |\n";
        md << "|---|---|---|---|\n";
        for (const auto& r : rows_of("t1"))
            md << "| " << r.value("k", 0) << " | " << r.value("naive_s", 0.0) << " | "
               << r.value("protocol_s", 0.0) << " | " << detail::pct(r.value("accuracy", 0.0))
               << " |\n";
    } else if (table == "t2" || table == "t5") {
        md << (table == "t2" ? "### Logistic regression accuracy in plaintext\n\n"
                             : "### Neural networks accuracy in plaintext\n\n");
        md << "| Data type | 7-order Taylor polynomial | 3-order Taylor polynomial | Our "
              "function |\n|---|---|---|---|\n";
        for (const std::string dt : {"float", "int"}) {
            std::map<std::string, double> acc;
            for (const auto& r : rows_of(table))
                if (r.value("data_type", "") == dt) acc[r.value("act", "")] = r.value("accuracy", 0.0);
            if (acc.empty()) continue;
            auto cell = [&](const std::string& a) {
                return acc.count(a) ? detail::pct(acc[a]) : std::string("-");
            };
            md << "| " << (dt == "float" ? "Floating data" : "Integer data") << " | "
               << cell("taylor7") << " | " << cell("taylor3") << " | " << cell("g") << " |\n";
        }
    } else if (table == "t3" || table == "t6") {
        md << (table == "t3" ? "### Logistic regression accuracy in ciphertext\n\n"
                             : "### Neural networks accuracy in ciphertext\n\n");
        md << "| Activation function | Accuracy | Training time/iter/s | Bootstrapped gates "
              "|\n|---|---|---|---|\n";
        for (const auto& r : rows_of(table))
            md << "| " << detail::act_label(r.value("act", "")) << " | "
               << detail::pct(r.value("accuracy", 0.0)) << " | " << r.value("iter_time_s", 0.0)
               << " | " << r.value("bootstrapped_gates", uint64_t(0)) << " |\n";
    } else if (table == "t4") {
        md << "### Computing the activation function in ciphertext\n\n";
        std::map<std::string, json> by_act;
        for (const auto& r : rows_of("t4")) by_act[r.value("act", "")] = r;
        md << "| | 7-order Taylor polynomial | 3-order Taylor polynomial | Our function "
              "|\n|---|---|---|---|\n";
        md << "| Time/s |";
        for (const std::string a : {"taylor7", "taylor3", "g"})
            md << " " << (by_act.count(a) ? by_act[a].value("wall_s", 0.0) : 0.0) << " |";
        md << "\n| Bootstrapped gates |";
        for (const std::string a : {"taylor7", "taylor3", "g"})
            md << " " << (by_act.count(a) ? by_act[a].value("bootstrapped_gates", uint64_t(0)) : 0)
               << " |";
        md << "\n";
    } else {
        md << "(unknown table " << table << ")\n";
    }
    md << "\n";
    return md.str();
}

inline std::string render_all(const std::vector<json>& records) {
    std::string out;
    for (const std::string t : {"t1", "t2", "t3", "t4", "t5", "t6"}) {
        bool present = false;
        for (const auto& r : records)
            if (r.value("table", "") == t) present = true;
        if (present) out += render_table(t, records);
    }
    return out;
}

}  // namespace mktorus
