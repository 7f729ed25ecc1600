#include "churn/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "churn/errors.hpp"
#include "churn/rng.hpp"
#include "churn/types.hpp"

namespace churn {

namespace {

const char* kStates[] = {"AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DC", "DE", "FL", "GA",
                         "HI", "IA", "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD", "ME",
                         "MI", "MN", "MO", "MS", "MT", "NC", "ND", "NE", "NH", "NJ", "NM",
                         "NV", "NY", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX",
                         "UT", "VA", "VT", "WA", "WI", "WV", "WY"};

double normal(SplitMix64& rng, double mean, double stddev) {
    double u1 = rng.uniform();
    double u2 = rng.uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
}

std::string fixed(double v, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

RawTable synth_dataset(std::size_t n_rows, std::uint64_t seed) {
    SplitMix64 rng(seed);
    RawTable table;
    table.columns = telco_schema();
    table.rows.reserve(n_rows);

    for (std::size_t i = 0; i < n_rows; ++i) {
        int account_length = 1 + static_cast<int>(rng.below(242));
        const char* area_codes[] = {"408", "415", "510"};
        const char* area = area_codes[rng.below(3)];
        char phone[16];
        std::snprintf(phone, sizeof(phone), "%03d-%04d",
                      100 + static_cast<int>(i / 10000) % 900, static_cast<int>(i % 10000));

        bool intl_plan = rng.uniform() < 0.097;
        bool vmail_plan = rng.uniform() < 0.277;
        int vmail_msgs = vmail_plan ? 10 + static_cast<int>(rng.below(41)) : 0;

        double day_mins = std::max(0.0, normal(rng, 180.0, 54.0));
        int day_calls = std::max(0, static_cast<int>(std::lround(normal(rng, 100.0, 20.0))));
        double eve_mins = std::max(0.0, normal(rng, 201.0, 50.0));
        int eve_calls = std::max(0, static_cast<int>(std::lround(normal(rng, 100.0, 20.0))));
        double night_mins = std::max(0.0, normal(rng, 200.0, 50.0));
        int night_calls = std::max(0, static_cast<int>(std::lround(normal(rng, 100.0, 20.0))));
        double intl_mins = std::max(0.0, normal(rng, 10.2, 2.8));
        int intl_calls = std::max(0, static_cast<int>(std::lround(normal(rng, 4.5, 2.5))));
        int custserv = 0;
        while (custserv < 9 && rng.uniform() < 0.55) ++custserv;

        double logit = -2.60 + 0.016 * (day_mins - 180.0) + 0.62 * (custserv - 1.2) +
                       2.1 * (intl_plan ? 1.0 : 0.0) - 0.65 * (vmail_plan ? 1.0 : 0.0);
        bool churn = rng.uniform() < sigmoid(logit);

        std::vector<std::string> row = {
            kStates[rng.below(std::size(kStates))],
            std::to_string(account_length),
            area,
            phone,
            intl_plan ? "yes" : "no",
            vmail_plan ? "yes" : "no",
            std::to_string(vmail_msgs),
            fixed(day_mins, 1),
            std::to_string(day_calls),
            fixed(day_mins * 0.17, 2),
            fixed(eve_mins, 1),
            std::to_string(eve_calls),
            fixed(eve_mins * 0.085, 2),
            fixed(night_mins, 1),
            std::to_string(night_calls),
            fixed(night_mins * 0.045, 2),
            fixed(intl_mins, 1),
            std::to_string(intl_calls),
            fixed(intl_mins * 0.27, 2),
            std::to_string(custserv),
            churn ? "True." : "False.",
        };
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_csv(const RawTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (std::size_t j = 0; j < table.n_cols(); ++j)
        out << (j ? "," : "") << table.columns[j].name;
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
        out << "\n";
    }
}

}  // namespace churn
