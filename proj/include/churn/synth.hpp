#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "churn/table.hpp"

namespace churn {

// Seeded synthetic telco-style dataset for offline runs: ~14.5% churn,
// correlated with Day Mins, CustServ Calls and Intl Plan. Boolean cells
// use the yes/no and True./False. spellings of the public file.
RawTable synth_dataset(std::size_t n_rows, std::uint64_t seed);

void write_csv(const RawTable& table, const std::string& path);

}  // namespace churn
