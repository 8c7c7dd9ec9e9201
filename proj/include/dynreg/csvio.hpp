#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dynreg/reduction.hpp"

namespace dynreg {

/// Doubles print with 17 significant digits so parse(emit(x)) round-trips
/// bit for bit.
std::string format_double(double x);

/// Columns: t,w,g,regret_cum,wealth,V,beta,dual_norm. Vector-valued fields
/// are semicolon-joined. regret_cum is the first registered comparator's
/// cumulative regret, or the zero-comparator regret (-wealth) when none was
/// registered.
void emit_records_csv(std::ostream& os, const std::vector<RegretRecord>& records);

/// File variant; I/O failures raise std::runtime_error carrying the path.
void emit_records_csv(const std::string& path, const std::vector<RegretRecord>& records);

std::vector<RegretRecord> parse_records_csv(std::istream& is);
std::vector<RegretRecord> parse_records_csv_file(const std::string& path);

}  // namespace dynreg
