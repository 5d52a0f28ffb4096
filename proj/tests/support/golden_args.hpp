#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dtc::test {

// Small settings behind the committed fixtures in tests/golden.
inline const std::vector<std::string> kGoldenSingleUser{"single-user", "--p-range", "0.1:1000",
                                                        "--points",    "9",         "--grid", "21"};
inline const std::vector<std::string> kGoldenMacDtc{"mac-dtc", "--ps", "50", "--grid", "21", "--r1-points", "41"};
inline const std::vector<std::string> kGoldenJdpt{"jdpt", "--ps", "50", "--grid", "21", "--alpha-points", "31",
                                                  "--r1-points", "41"};

inline const std::vector<std::pair<const std::vector<std::string>*, const char*>> kGoldenCases{
    {&kGoldenSingleUser, "single_user.csv"}, {&kGoldenMacDtc, "mac_dtc.csv"}, {&kGoldenJdpt, "jdpt.csv"}};

} // namespace dtc::test
