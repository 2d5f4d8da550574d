#pragma once

#include <cstdint>
#include <string>

namespace testsupport {

// Planted structure of the synthetic country-year panel fixture. The noise
// level sits well below the thresholding window of the fitted pipeline
// (whose cutoff scale is a few times the selected penalty) so the planted
// regime shifts are the only ones that survive.
struct PanelPlant {
  double tau = 0.0;             // threshold, the 60th centile of panel debt
  double delta_sav = 15.0;      // regime shift on the savings ratio
  double delta_open = -5.0;     // regime shift on the openness ratio
  double sigma = 0.01;          // growth noise, percent units
};

// 18 synthetic countries observed 1980-2009. The per-capita level series is
// built so that the 5-year-forward average growth (in percent) equals a
// linear function of the controls plus a regime shift on two of them when
// debt is below the planted threshold. The layout (columns, spans, country
// count) is fixed; `noise_seed` redraws only the growth noise. When a plant
// is passed in, its shift sizes and noise level are used and the realized
// threshold is written back.
std::string make_panel_csv(std::uint64_t noise_seed, PanelPlant* plant = nullptr);

}  // namespace testsupport
