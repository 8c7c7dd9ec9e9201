#include "dynreg/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dynreg {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

const char* kHeader = "t,w,g,regret_cum,wealth,V,beta,dual_norm";

std::string join_vector(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += format_double(v[i]);
    }
    return out;
}

std::vector<double> split_vector(const std::string& s) {
    std::vector<double> out;
    if (s.empty()) return out;
    std::size_t b = 0;
    while (true) {
        const auto e = s.find(';', b);
        const std::string tok = s.substr(b, e == std::string::npos ? e : e - b);
        out.push_back(std::strtod(tok.c_str(), nullptr));
        if (e == std::string::npos) break;
        b = e + 1;
    }
    return out;
}

}  // namespace

void emit_records_csv(std::ostream& os, const std::vector<RegretRecord>& records) {
    os << kHeader << '\n';
    for (const auto& rec : records) {
        const double regret_cum = rec.cum_regret.empty() ? -rec.wealth : rec.cum_regret.front();
        os << rec.t << ',' << join_vector(rec.play) << ',' << join_vector(rec.loss) << ','
           << format_double(regret_cum) << ',' << format_double(rec.wealth) << ','
           << format_double(rec.scale_sum) << ',' << format_double(rec.bet) << ','
           << format_double(rec.dual_norm) << '\n';
    }
}

void emit_records_csv(const std::string& path, const std::vector<RegretRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_records_csv: cannot open " + path);
    emit_records_csv(out, records);
    out.flush();
    if (!out) throw std::runtime_error("emit_records_csv: write failure: " + path);
}

std::vector<RegretRecord> parse_records_csv(std::istream& is) {
    std::vector<RegretRecord> records;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("parse_records_csv: missing header");
    if (line != kHeader) throw std::runtime_error("parse_records_csv: unexpected header: " + line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t b = 0;
        while (true) {
            const auto e = line.find(',', b);
            fields.push_back(line.substr(b, e == std::string::npos ? e : e - b));
            if (e == std::string::npos) break;
            b = e + 1;
        }
        if (fields.size() != 8)
            throw std::runtime_error("parse_records_csv: bad field count in row: " + line);
        RegretRecord rec;
        rec.t = static_cast<std::size_t>(std::strtoull(fields[0].c_str(), nullptr, 10));
        rec.play = split_vector(fields[1]);
        rec.loss = split_vector(fields[2]);
        rec.cum_regret = {std::strtod(fields[3].c_str(), nullptr)};
        rec.wealth = std::strtod(fields[4].c_str(), nullptr);
        rec.scale_sum = std::strtod(fields[5].c_str(), nullptr);
        rec.bet = std::strtod(fields[6].c_str(), nullptr);
        rec.dual_norm = std::strtod(fields[7].c_str(), nullptr);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RegretRecord> parse_records_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_records_csv: cannot open " + path);
    return parse_records_csv(in);
}

}  // namespace dynreg
