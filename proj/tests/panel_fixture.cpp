#include "panel_fixture.hpp"

#include "tlasso/model.hpp"
#include "tlasso/rng.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace testsupport {

namespace {

constexpr int kCountries = 18;
constexpr int kYear0 = 1980;
constexpr int kYears = 30;
constexpr int kHorizon = 5;
constexpr int kUsableYears = kYears - kHorizon;  // target exists 1980..2004
constexpr std::uint64_t kStructureSeed = 0x9A11E7F1C70125ull;

}  // namespace

std::string make_panel_csv(std::uint64_t noise_seed, PanelPlant* plant_out) {
  tlasso::CounterRng structure(kStructureSeed);

  std::vector<std::vector<double>> sav(kCountries), open(kCountries),
      infl(kCountries), debt(kCountries), lgdp(kCountries);
  for (int c = 0; c < kCountries; ++c) {
    sav[c].resize(kYears);
    open[c].resize(kYears);
    infl[c].resize(kYears);
    debt[c].resize(kYears);
    lgdp[c].assign(kYears, 0.0);
    // Controls enter as centered deviations; debt is the raw ratio since it
    // doubles as the threshold variable. Centering keeps the regime block
    // from coupling through column means.
    for (int t = 0; t < kYears; ++t) {
      sav[c][t] = structure.uniform(-0.10, 0.10);
      open[c][t] = structure.uniform(-0.5, 0.5);
      infl[c][t] = 2.0 * structure.normal();
      debt[c][t] = structure.uniform(0.2, 1.6);
    }
    for (int t = 0; t < kHorizon; ++t)
      lgdp[c][t] = 10.0 + 0.02 * structure.normal();
  }

  // The planted threshold is the 60th centile of debt over exactly the rows
  // the pipeline will keep, so it lands on the estimator's candidate grid.
  tlasso::Vector pool(kCountries * kUsableYears);
  int k = 0;
  for (int c = 0; c < kCountries; ++c)
    for (int t = 0; t < kUsableYears; ++t) pool[k++] = debt[c][t];
  PanelPlant plant;
  if (plant_out) plant = *plant_out;
  plant.tau = tlasso::quantile(pool, 0.60);

  tlasso::CounterRng noise(noise_seed ^ 0x6E015Eull);
  for (int c = 0; c < kCountries; ++c)
    for (int t = 0; t < kUsableYears; ++t) {
      // Debt itself carries no true coefficient; it only drives the regime.
      double growth_pct = 5.0 - 0.3 * (lgdp[c][t] - 10.0) + 5.0 * sav[c][t] +
                          1.0 * open[c][t] - 0.08 * infl[c][t];
      if (debt[c][t] < plant.tau)
        growth_pct += plant.delta_sav * sav[c][t] + plant.delta_open * open[c][t];
      growth_pct += plant.sigma * noise.normal();
      lgdp[c][t + kHorizon] = lgdp[c][t] + kHorizon * growth_pct / 100.0;
    }

  std::string csv = "country,year,gdp,lgdp,sav,open,infl,debt\n";
  char buf[256];
  for (int c = 0; c < kCountries; ++c)
    for (int t = 0; t < kYears; ++t) {
      std::snprintf(buf, sizeof(buf),
                    "c%02d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", c + 1,
                    kYear0 + t, std::exp(lgdp[c][t]), lgdp[c][t] - 10.0,
                    sav[c][t], open[c][t], infl[c][t], debt[c][t]);
      csv += buf;
    }
  if (plant_out) *plant_out = plant;
  return csv;
}

}  // namespace testsupport
