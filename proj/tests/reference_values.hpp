#pragma once

// Printed reference values for the standard chain (k0=1, k1=k2=2, a0=1).

#include <array>
#include <vector>

namespace qcfk::testing {

struct AdaptRow {
  int M;
  int iteration;
  int K;
  double tau_at;
  double eta1;
};

inline const std::vector<AdaptRow>& adapt_rows() {
  static const std::vector<AdaptRow> rows{
      {100, 1, 0, 1e-10, 3.899207e-02},     {100, 2, 28, 1e-11, 5.915080e-10},
      {100, 3, 32, 1e-12, 4.878532e-11},    {1000, 1, 0, 1e-10, 3.899208e-02},
      {1000, 2, 28, 1e-11, 5.915100e-10},   {1000, 3, 32, 1e-12, 4.878548e-11},
      {10000, 1, 0, 1e-10, 3.899208e-02},   {10000, 2, 28, 1e-11, 5.915100e-10},
      {10000, 3, 32, 1e-12, 4.878548e-11},  {100000, 1, 0, 1e-10, 3.899208e-02},
      {100000, 2, 28, 1e-11, 5.915099e-10}, {100000, 3, 32, 1e-12, 4.878540e-11},
      {1000000, 1, 0, 1e-10, 3.899208e-02}, {1000000, 2, 28, 1e-11, 5.914422e-10},
      {1000000, 3, 32, 1e-12, 4.871775e-11}};
  return rows;
}

struct SweepRow {
  int K;
  double abs_error;
  double eta1;
  double eta1_eff;
  double eta2;
  double eta2_eff;
};

inline const std::vector<SweepRow>& sweep_rows() {
  static const std::vector<SweepRow> rows{
      {0, 3.627633e-02, 3.899208e-02, 1.074863, 3.999783e-02, 1.102588},
      {2, 3.375762e-02, 3.872272e-02, 1.147081, 5.101700e-02, 1.511274},
      {4, 3.468605e-03, 4.343595e-03, 1.252260, 5.422007e-03, 1.563166},
      {6, 5.418585e-04, 7.156249e-04, 1.320686, 9.187940e-04, 1.695635},
      {8, 1.227067e-04, 1.675383e-04, 1.365356, 2.193196e-04, 1.787348},
      {10, 3.287188e-05, 4.540984e-05, 1.381419, 5.984186e-05, 1.820457},
      {15, 1.416914e-06, 1.966114e-06, 1.387603, 2.597488e-06, 1.833201},
      {20, 6.267636e-08, 8.695824e-08, 1.387417, 1.148736e-07, 1.832805},
      {25, 2.770161e-09, 3.843388e-09, 1.387424, 5.077204e-09, 1.832819},
      {30, 1.224369e-10, 1.698739e-10, 1.387440, 2.244073e-10, 1.832840},
      {35, 5.410783e-12, 7.508365e-12, 1.387667, 9.918687e-12, 1.833133},
      {40, 2.379208e-13, 3.318024e-13, 1.394592, 4.383361e-13, 1.842362}};
  return rows;
}

struct OptimalKRow {
  double tau;
  int k_opt;
  int k_eta1;
  int k_eta2;
};

inline const std::vector<OptimalKRow>& optimal_k_rows() {
  static const std::vector<OptimalKRow> rows{
      {1e-2, 3, 3, 3},     {1e-3, 5, 5, 5},     {1e-4, 9, 9, 10},    {1e-5, 12, 13, 13},  {1e-6, 16, 17, 17},
      {1e-7, 20, 20, 21},  {1e-8, 23, 24, 24},  {1e-9, 27, 28, 28},  {1e-10, 31, 31, 32}, {1e-11, 35, 35, 35},
      {1e-12, 38, 39, 39}, {1e-13, 42, 42, 43}, {1e-14, 45, 46, 47}};
  return rows;
}

}  // namespace qcfk::testing
