// Published reference values for the asymmetric-cross family: the sweep
// tables (energy ratio and decay lengths per width ratio), the grid
// extrapolation limit, and the critical ratios. Frozen here for comparison.
#pragma once

#include <array>

namespace refdata {

struct SweepRow {
  double beta;
  const char* set;
  double e_ratio;
  double ell_x;
  double ell_y;
};

// Even-even sweep (sets I/II/III by beta).
inline constexpr std::array<SweepRow, 21> kEvenEven{{
    {1.0, "I", 0.662960, 1.098, 1.098},   {1.1, "I", 0.723925, 1.335, 1.006},
    {1.2, "I", 0.774665, 1.613, 0.938},   {1.3, "I", 0.816242, 1.936, 0.887},
    {1.4, "I", 0.849968, 2.309, 0.847},   {1.5, "II", 0.879058, 2.770, 0.818},
    {1.6, "II", 0.900702, 3.267, 0.793},  {1.7, "II", 0.918059, 3.830, 0.773},
    {1.8, "II", 0.931999, 4.463, 0.757},  {1.9, "II", 0.943228, 5.172, 0.744},
    {2.0, "II", 0.952308, 5.960, 0.733},  {2.1, "II", 0.959682, 6.832, 0.723},
    {2.2, "III", 0.965821, 7.959, 0.717}, {2.3, "III", 0.970627, 9.053, 0.711},
    {2.4, "III", 0.974578, 10.252, 0.705},{2.5, "III", 0.977844, 11.564, 0.700},
    {2.6, "III", 0.980557, 12.992, 0.696},{2.7, "III", 0.982821, 14.542, 0.695},
    {2.8, "III", 0.984719, 16.219, 0.690},{2.9, "III", 0.986319, 18.026, 0.689},
    {3.0, "III", 0.987674, 19.965, 0.685},
}};

// Odd-odd sweep (set III throughout).
inline constexpr std::array<SweepRow, 18> kOddOdd{{
    {1.00, "III", 3.72042, 1.332, 1.332},  {1.01, "III", 3.75611, 1.465, 1.232},
    {1.02, "III", 3.78877, 1.623, 1.148},  {1.03, "III", 3.81839, 1.816, 1.076},
    {1.04, "III", 3.84499, 2.055, 1.014},  {1.05, "III", 3.86855, 2.359, 0.960},
    {1.06, "III", 3.88909, 2.760, 0.912},  {1.07, "III", 3.90659, 3.313, 0.870},
    {1.08, "III", 3.92107, 4.125, 0.832},  {1.09, "III", 3.93252, 5.429, 0.797},
    {1.10, "III", 3.94095, 7.875, 0.766},  {1.11, "III", 3.94635, 14.119, 0.739},
    {1.111, "III", 3.94673, 15.322, 0.735},{1.112, "III", 3.94707, 16.745, 0.733},
    {1.113, "III", 3.94739, 18.456, 0.730},{1.114, "III", 3.94767, 20.549, 0.728},
    {1.115, "III", 3.94792, 23.167, 0.726},{1.116, "III", 3.94815, 26.528, 0.722},
}};

// Even-odd sweep (set III throughout).
inline constexpr std::array<SweepRow, 33> kEvenOdd{{
    {1.530, "III", 2.33233, 0.767, 29.993}, {1.531, "III", 2.33526, 0.768, 28.322},
    {1.532, "III", 2.33817, 0.769, 26.830}, {1.533, "III", 2.34108, 0.771, 25.490},
    {1.534, "III", 2.34399, 0.772, 24.279}, {1.535, "III", 2.34689, 0.773, 23.179},
    {1.536, "III", 2.34978, 0.774, 22.176}, {1.537, "III", 2.35267, 0.775, 21.258},
    {1.538, "III", 2.35555, 0.777, 20.415}, {1.539, "III", 2.35843, 0.778, 19.637},
    {1.54, "III", 2.36130, 0.779, 18.917},  {1.55, "III", 2.38974, 0.791, 13.879},
    {1.56, "III", 2.41764, 0.803, 10.999},  {1.57, "III", 2.44502, 0.816, 9.136},
    {1.58, "III", 2.47190, 0.828, 7.832},   {1.59, "III", 2.49827, 0.841, 6.869},
    {1.6, "III", 2.52415, 0.854, 6.127},    {1.7, "III", 2.75775, 0.992, 3.087},
    {1.8, "III", 2.95102, 1.148, 2.172},    {1.9, "III", 3.11087, 1.322, 1.734},
    {2.0, "III", 3.24315, 1.516, 1.478},    {2.1, "III", 3.35274, 1.732, 1.311},
    {2.2, "III", 3.44367, 1.971, 1.195},    {2.3, "III", 3.51929, 2.235, 1.109},
    {2.4, "III", 3.58233, 2.525, 1.043},    {2.5, "III", 3.63503, 2.842, 0.992},
    {2.6, "III", 3.67922, 3.189, 0.951},    {2.7, "III", 3.71638, 3.567, 0.917},
    {2.8, "III", 3.74774, 3.977, 0.890},    {2.9, "III", 3.77430, 4.421, 0.866},
    {3.0, "III", 3.79685, 4.902, 0.847},    {4.0, "III", 3.90424, 12.077, 0.747},
    {5.0, "III", 3.93252, 24.947, 0.717},
}};

// Symmetric-cross references.
inline constexpr double kGroundRatioConformal = 0.659611;  // fine nonuniform-grid value
inline constexpr double kGroundRatioExtrapolated = 0.65955;
inline constexpr double kSecondRatioReference = 3.71648;

// Critical width ratios (as published) and the energy-fit maximum.
inline constexpr double kCriticalOddOdd = 1.2279;
inline constexpr double kCriticalEvenOdd = 1.513;
inline constexpr double kOddOddEnergyMax = 1.12288;

}  // namespace refdata
