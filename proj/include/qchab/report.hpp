#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qchab {

/** One result record: ordered key=value fields, one record per line,
 * fields separated by tabs.  Values may contain spaces but not tabs. */
struct Record {
    std::vector<std::pair<std::string, std::string>> fields;
    void add(std::string k, std::string v) { fields.emplace_back(std::move(k), std::move(v)); }
    std::string line() const;
};

std::string print_records(const std::vector<Record>& rs);
std::vector<Record> parse_records(const std::string& text);

}  // namespace qchab
