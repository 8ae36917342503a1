#pragma once

// Values computed outside this code base (double precision, natural logs)
// and frozen here. Each line shows the expression that was evaluated.
namespace ref {

// (10 ln 1000 + ln 20) / 0.01
inline constexpr double kSarlWorked = 7207.328506337536;
// 4 (10 ln 500 + ln 40) / 0.01
inline constexpr double kDependentWorked = 26333.98417533433;
// (5 ln 500 + ln 20) / 0.01
inline constexpr double kIndependentWorked = 3406.8772765664944;
// (5 ln(100 / 0.06) + ln 20) / 0.0036
inline constexpr double kMisalignedWorked = 11135.732440915173;
// 10 ln 500 / (10 ln 1000)
inline constexpr double kFactorA = 0.8996566681120062;
// (1 + ln 40 / (10 ln 500)) / (1 + ln 20 / (10 ln 1000))
inline constexpr double kFactorC = 1.0153258848091187;
// 26333.98... / 7207.33...
inline constexpr double kDependentRatio = 3.653778810300984;
// ln 500 / ln 1000, the limit of A when every dimension grows together
inline constexpr double kFactorALimit = 0.8996566681120064;
// ln(100 / 0.06) / ln 1000
inline constexpr double kKappaL = 1.0739495832054522;
// 1/2 + (1/2) ln 20 / (10 ln 1000 + ln 20)
inline constexpr double kCapWorked = 0.5207825428722985;
inline constexpr double kEntropy1000 = 69.07755278982137;  // 10 ln 1000
inline constexpr double kEntropy2000 = 76.00902459542083;  // 10 ln 2000
inline constexpr double kEntropy500 = 62.14608098422191;   // 10 ln 500

}  // namespace ref
