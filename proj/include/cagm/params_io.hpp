#pragma once

// Text serialization of fitted parameters and budget ledgers.
//
// The params file is line oriented: a key followed by whitespace-separated
// values. The first line is "cagm-params <version>". Doubles are written
// with 17 significant digits, so a write/read round trip is exact and
// repeated writes of the same parameters are byte-identical.

#include <filesystem>
#include <iosfwd>

#include "cagm/params.hpp"

namespace cagm {

inline constexpr int kParamsFormatVersion = 1;

void write_params(std::ostream& out, const CagmParams& params);
/// Throws InputError on malformed or inconsistent content.
CagmParams read_params(std::istream& in);

void save_params(const CagmParams& params, const std::filesystem::path& path);
CagmParams load_params(const std::filesystem::path& path);

/// One line per charge, then the total and the check against eps_total.
void write_ledger(std::ostream& out, const BudgetLedger& ledger);

}  // namespace cagm
