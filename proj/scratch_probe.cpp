#include <cstdio>

#include "qplab/generators.hpp"
#include "qplab/metrics.hpp"

using namespace qplab;

int main() {
  // Cook-Levin no-instance margins across sizes.
  for (int n = 1; n <= 2; ++n)
    for (int m = 1; m <= 3; ++m) {
      ClockLayout lay{n, 1, 1, 1, m};
      double worst = 1e9;
      for (int s = 0; s < 8; ++s) {
        try {
          CookLevinNo no = gen_cooklevin_no(lay, 10000, 1000 + s);
          const double margin = no.lambda_min - no.reduction.instance.a -
                                2.0 / static_cast<double>(no.reduction.instance.p);
          if (margin < worst) worst = margin;
        } catch (const std::exception& e) {
          std::printf("n=%d m=%d seed=%d FAILED: %s\n", n, m, s, e.what());
          worst = -1;
          break;
        }
      }
      ClockLayout lay2{n, 1, 1, 1, m};
      CookLevinYes yes = gen_cooklevin_yes(lay2, 10000, 77);
      std::printf("n=%d m=%d: worst no-margin=%.6f a=%.6f yes_hist_energy=%.3e yes_lmin=%.3e\n",
                  n, m, worst, yes.reduction.instance.a, yes.history_energy, yes.lambda_min);
    }

  // QOR bounds on a few instances.
  for (int s = 0; s < 5; ++s) {
    QorCase ycase = gen_qor_yes(2, 2, 2.0 / 3.0, 42 + s);
    VerdictReport gr = qor_run(ycase.rho, ycase.instance, 2.0 / 3.0, 0.0);
    QorCase ncase = gen_qor_no(2, 2, 1.0 / (64.0 * 4.0), 4242 + s);
    VerdictReport br = qor_run(ncase.rho, ncase.instance, 2.0 / 3.0, 1.0 / (64.0 * 4.0));
    std::printf("qor yes p=%.6f (floor %.6f best=%.4f) | no p=%.3e (ceil %.6f)\n", *gr.p_exact,
                4.0 / 63.0, ycase.best_sigma_value, *br.p_exact, 1.0 / 16.0);
  }

  // Mixed cook-levin.
  ClockLayout mlay{1, 1, 1, 1, 2};
  CookLevinMixedYes my = gen_cooklevin_mixed_yes(mlay, 2, 10000, 7);
  std::printf("mixed yes: expected_energy=%.3e a=%.6f alpha=%.4f\n", my.expected_energy,
              my.reduction.instance.a, my.alpha);
  return 0;
}
