#pragma once

#include <string>
#include <vector>

#include "catassoc/catassoc.hpp"

namespace fixtures {

using Matrix = std::vector<std::vector<double>>;

// ---------------------------------------------------------------------------
// Loan records (650 borrowers): two-way frequency tables with printed
// association summaries to four decimals. Rows of `counts` are X levels,
// columns Y levels.

struct LoanCase {
  std::string response;
  std::string given;
  Matrix counts;
  double tau;
  std::vector<double> theta;  // empty when not printed
  Matrix gamma;               // empty when not printed
};

inline Matrix transpose(const Matrix& m) {
  Matrix t(m.front().size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

// Risk = (low, med, hi); Credit = (red, yellow, green); OnTime = (No, Yes).
inline const Matrix kOnTimeRisk{{11, 2, 52}, {306, 24, 255}};
inline const Matrix kAgeRisk{{13, 9, 246}, {291, 17, 61}, {13, 0, 0}};
inline const Matrix kIncomeRisk{{19, 8, 45}, {211, 17, 209}, {87, 1, 53}};
inline const Matrix kCreditRisk{{35, 2, 40}, {98, 9, 93}, {184, 15, 174}};
inline const Matrix kOnTimeCredit{{19, 30, 16}, {58, 170, 357}};
inline const Matrix kAgeCredit{{40, 80, 148}, {34, 118, 217}, {3, 2, 8}};
inline const Matrix kIncomeCredit{{7, 20, 45}, {54, 137, 246}, {16, 43, 82}};
inline const Matrix kRiskCredit{{35, 98, 184}, {2, 9, 15}, {40, 93, 174}};

inline std::vector<LoanCase> loan_cases() {
  return {
      {"OnTime", "Credit", transpose(kOnTimeCredit), .0577, {}, {}},
      {"OnTime", "Risk", transpose(kOnTimeRisk), .0486, {}, {}},

      {"Risk", "OnTime", kOnTimeRisk, .0432, {.0451, .0002, .0479},
       {{.5108, .0407, .4485}, {.4959, .0402, .4639}, {.4631, .0393, .4976}}},
      {"Risk", "Age", kAgeRisk, .5137, {.5451, .0018, .5611},
       {{.7669, .0437, .1894}, {.5324, .0417, .4258}, {.1956, .0361, .7684}}},
      {"Risk", "Income", kIncomeRisk, .0272, {.0368, .0207, .0185},
       {{.5065, .0345, .459}, {.4206, .0599, .5195}, {.4739, .044, .4821}}},
      {"Risk", "Credit", kCreditRisk, .0009, {.0006, .0008, .0012},
       {{.488, .0401, .4719}, {.4892, .0408, .4700}, {.4872, .0398, .4729}}},

      {"Credit", "OnTime", kOnTimeCredit, .0319, {.0322, .0123, .0488},
       {{.1468, .3328, .5204}, {.1281, .3162, .5556}, {.1074, .2979, .5946}}},
      {"Credit", "Age", kAgeCredit, .0035, {.0099, .0028, .0014},
       {{.1272, .3023, .5705}, {.1164, .3096, .5740}, {.1178, .3078, .5744}}},
      {"Credit", "Income", kIncomeCredit, .001, {.0007, .0006, .0016},
       {{.1191, .3085, .5724}, {.1188, .3081, .5731}, {.1182, .3073, .5745}}},
      {"Credit", "Risk", kRiskCredit, .0005, {.0016, .0003, .0002},
       {{.1199, .3069, .5733}, {.1181, .3079, .5739}, {.1183, .3077, .5739}}},
  };
}

// ---------------------------------------------------------------------------
// Small joint distributions over (Y, X1, X2), one weighted row per scenario.

inline catassoc::CategoricalDataset scenarios(const std::vector<std::vector<std::string>>& rows,
                                              const std::vector<double>& mass) {
  std::vector<catassoc::Scenario> s;
  for (std::size_t i = 0; i < rows.size(); ++i) s.push_back({rows[i], mass[i]});
  return catassoc::from_scenarios({"Y", "X1", "X2"}, s);
}

// Both tests determine Y, but they do not determine each other.
inline catassoc::CategoricalDataset determined_not_mutual() {
  return scenarios({{"1", "1", "2"}, {"0", "2", "3"}, {"0", "3", "1"}, {"1", "4", "2"}},
                   {2.0 / 7, 2.0 / 7, 2.0 / 7, 1.0 / 7});
}

// Equal association vectors with different association matrices. Y first
// appears in the order 1, 2, 4, 3.
inline catassoc::CategoricalDataset equal_vectors_unequal_matrices() {
  const double m = 1.0 / 6;
  return scenarios({{"1", "1", "1"}, {"2", "1", "3"}, {"2", "2", "2"}, {"4", "2", "3"}, {"3", "3", "1"}, {"4", "3", "2"}},
                   {m, m, m, m, m, m});
}

// Equal tau under any weights, association vectors differ by swapping the
// first two components.
inline catassoc::CategoricalDataset equal_tau_unequal_vectors() {
  return scenarios({{"1", "1", "2"},
                    {"1", "1", "1"},
                    {"2", "2", "1"},
                    {"3", "3", "1"},
                    {"1", "4", "4"},
                    {"2", "1", "1"},
                    {"3", "1", "3"},
                    {"2", "4", "4"}},
                   {.1, .2, .1, .1, .1, .2, .1, .1});
}

// X2 is a bijective relabeling of X1; Y depends on X1 only partially.
inline catassoc::CategoricalDataset relabeled_pair() {
  return scenarios({{"a", "1", "z"}, {"b", "1", "z"}, {"a", "2", "x"}, {"c", "2", "x"}, {"b", "3", "y"}, {"c", "3", "y"}},
                   {.20, .10, .15, .15, .05, .35});
}

// ---------------------------------------------------------------------------
// 24,000-record frequency table: X with 7 levels, Y with 6.

inline const Matrix kFrequency7x6{{16, 1, 0, 0, 0, 0},
                            {1199, 1274, 346, 66, 33, 1},
                            {640, 2363, 1363, 343, 103, 7},
                            {381, 2203, 2646, 949, 402, 18},
                            {182, 1131, 2038, 1369, 762, 55},
                            {79, 407, 937, 1047, 1286, 206},
                            {2, 5, 14, 20, 51, 55}};

inline const Matrix kFrequencyPrintedTraining{{.26, .47, .15, .06, .04, .01}, {.05, .48, .28, .11, .07, .01},
                                          {.02, .36, .34, .15, .11, .02}, {.02, .32, .35, .17, .12, .02},
                                          {.02, .30, .35, .18, .14, .03}, {.03, .29, .33, .18, .15, .03}};

inline const Matrix kFrequencyPrintedTesting{{.27, .47, .16, .05, .03, .01}, {.05, .49, .28, .10, .06, .01},
                                         {.02, .36, .35, .15, .10, .02}, {.02, .31, .36, .17, .12, .03},
                                         {.02, .28, .35, .17, .14, .04}, {.03, .27, .33, .18, .15, .04}};

// Weighted dataset with columns X, Y (labels "1".."7" and "1".."6").
inline catassoc::CategoricalDataset frequency_dataset() {
  catassoc::DatasetBuilder b({"X", "Y"});
  std::vector<std::string> xl, yl;
  for (int i = 1; i <= 7; ++i) xl.push_back(std::to_string(i));
  for (int i = 1; i <= 6; ++i) yl.push_back(std::to_string(i));
  b.declare_levels(0, xl);
  b.declare_levels(1, yl);
  for (std::size_t i = 0; i < kFrequency7x6.size(); ++i)
    for (std::size_t s = 0; s < kFrequency7x6[i].size(); ++s)
      if (kFrequency7x6[i][s] > 0) b.add_row(std::vector<std::string>{xl[i], yl[s]}, kFrequency7x6[i][s]);
  return std::move(b).build();
}

}  // namespace fixtures
