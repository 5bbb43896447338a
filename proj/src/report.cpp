#include "qchab/report.hpp"

#include <sstream>

#include "qchab/padic.hpp"

namespace qchab {

std::string Record::line() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : fields) {
        if (!first) os << '\t';
        first = false;
        os << k << '=' << v;
    }
    return os.str();
}

std::string print_records(const std::vector<Record>& rs) {
    std::ostringstream os;
    for (const auto& r : rs) os << r.line() << '\n';
    return os.str();
}

std::vector<Record> parse_records(const std::string& text) {
    std::vector<Record> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Record r;
        size_t pos = 0;
        while (pos <= line.size()) {
            size_t tab = line.find('\t', pos);
            std::string field = line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos);
            size_t eq = field.find('=');
            if (eq == std::string::npos) throw DomainError("parse_records: field without '='");
            r.add(field.substr(0, eq), field.substr(eq + 1));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace qchab
