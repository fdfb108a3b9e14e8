# Sampled realisations: the witness covering exponent at R_q against the
# almost-sure spectrum, for growing depth q.
from fractions import Fraction

from randcarpet.model import generic_example
from randcarpet.montecarlo import chernoff_decay, product_window, spectrum_estimate

e = generic_example()

for theta in (Fraction(3, 10), Fraction(9, 10)):
    for q in (60, 120, 240):
        rep = spectrum_estimate(e, theta, q, 100, seed=1)
        s = rep.summary
        print(f"theta={theta} q={q:3d}: mean {s['mean']:.4f} target {s['target']:.4f} "
              f"std {s['std']:.4f} within 0.1: {s['fraction_within_trial_tol']:.2f}")

# large deviations of the n-product decay geometrically
rep = chernoff_decay(e, "N", 0.05, list(range(10, 201, 10)), 20000, seed=3)
print("upper tail", [round(p, 4) for p in rep.summary["p_upper"][::4]],
      "slope", round(rep.summary["slope_upper"], 4))

win = product_window(e, 0.02, 500, 5000, seed=4)
print("fraction still leaving the 2% window beyond q:",
      dict(zip(win.params["grid"][::10], win.summary["violation_fraction_at_or_beyond"][::10])))
