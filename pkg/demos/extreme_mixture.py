# Mixing a horizontal segment with a vertical one: each piece is a line with
# every dimension equal to 1, yet the random carpet has Assouad dimension 2
# while its quasi-Assouad dimension can be made as small as we like.
from randcarpet.formulas import build_extreme_ensemble, summarize

for eps in (0.9, 0.4, 0.1):
    e = build_extreme_ensemble(eps)
    s = summarize(e)
    row, col = e[1], e[2]
    print(f"eps={eps}: row pattern 2x{row.n}, column pattern {col.m}x{col.m + 1}")
    print(f"   qA = {s.quasi_assouad:.6f}  A = {s.assouad}  box = {s.box:.6f}")
    for i in (1, 2):
        c = summarize(e.single(i))
        print(f"   piece {i}: box {c.box:.3f} qA {c.quasi_assouad:.3f} A {c.assouad:.3f}")
