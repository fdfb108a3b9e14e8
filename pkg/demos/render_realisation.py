# Draw the first five levels of one realisation, omega = (2, 1, 1, 2, 1, ...).
import warnings

from randcarpet.model import generic_example
from randcarpet.render import render_carpet
from randcarpet.sampler import explicit_omega, sample_omega

e = generic_example()
omega = explicit_omega([2, 1, 1, 2, 1], e)

# level-5 columns are 1/27436 wide, far below a pixel; rounding is outward
# so nothing disappears
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    img = render_carpet(omega, e, 5, 1024)
img.save_pgm("realisation.pgm", comment="omega = 2 1 1 2 1, depth 5")
print(f"realisation.pgm: {img.occupied()} of {img.width * img.height} pixels inked")

# shallower depths contain deeper ones
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    for d in range(1, 6):
        print(d, render_carpet(omega, e, d, 1024).occupied())

# a sampled realisation for comparison
om = sample_omega(e, 42, 5)
print("seed 42 draws", om.prefix)
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    render_carpet(om, e, 5, 1024).save_pgm("seed42.pgm")
