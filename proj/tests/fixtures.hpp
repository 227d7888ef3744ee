#pragma once

#include <vector>

// Weighted ordinal CDF values F(1..4) for self-reported general health
// (poor, fair, good, very good; excellent == 1 implicitly), NHIS adults,
// tabulated from published weighted estimates.
namespace fixtures {

inline const std::vector<double> kPoverty2006{0.0439, 0.1560, 0.4558, 0.7062};
inline const std::vector<double> kPoverty2008{0.0485, 0.1656, 0.4490, 0.6710};
inline const std::vector<double> kEduLow2006{0.0287, 0.1205, 0.3905, 0.6731};
inline const std::vector<double> kEduHigh2006{0.0161, 0.0734, 0.2957, 0.6427};
inline const std::vector<double> kWhite2006{0.0212, 0.0917, 0.3303, 0.6459};
inline const std::vector<double> kBlack2006{0.0277, 0.1263, 0.4150, 0.6861};

// Raw NHIS sample sizes behind the men-in-poverty comparison.
inline constexpr int kPovertyN2006 = 1082;
inline constexpr int kPovertyN2008 = 1095;

} // namespace fixtures
