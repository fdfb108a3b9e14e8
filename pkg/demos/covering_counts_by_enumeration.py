# How many small approximate squares does it take to cover one big one?
# The count is read off products of N, B and C along the realisation; here it
# is also obtained by walking the tree, for a pattern small enough to enumerate.
import math
from fractions import Fraction

from randcarpet.covering import (
    brute_force_count, cover_report, empirical_theta_exponent, lower_constant,
)
from randcarpet.formulas import assouad_spectrum
from randcarpet.model import Ensemble, small_test_pattern

e = Ensemble([small_test_pattern()])
w = [1] * 100
R, theta = Fraction(1, 16), Fraction(1, 4)

rep = cover_report(w, e, R, theta, exact=True)
t = rep.times
print(f"stopping times k2(R)={t.k2R} k1(R)={t.k1R} k2(r)={t.k2r} k1(r)={t.k1r}, case {rep.case_tag}")
print("level ranges", rep.ranges)
print(f"product bound 4 * {math.exp(rep.log_upper):.0f}, enumerated {rep.exact_count} in {rep.nodes} nodes")
print(f"lower constant K = {lower_constant(e)}")

# a case (ii) configuration: theta beyond the phase transition at 1/2
print(cover_report(w, e, Fraction(1, 2 ** 6), Fraction(3, 4), exact=True).to_dict())

# the exponent approaches the spectrum as R shrinks
target = assouad_spectrum(e, 0.25)
for k in (4, 10, 40, 160):
    v = empirical_theta_exponent([1] * (16 * k + 4), e, Fraction(1, 2 ** k), theta)
    print(f"R = 2^-{k:<4d} exponent {v:.5f}  (spectrum {target:.5f})")

count, _ = brute_force_count(w, e, Fraction(1, 64), Fraction(1, 2))
print("theta = 1/2, R = 1/64:", count)
