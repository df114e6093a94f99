"""Coefficient decay in the half-period cosine basis, and what breaks it.

For a twice-differentiable f the coefficients obey |fhat(k)| <~ k^-2, so
the weighted table |fhat(k)| * k^2 stays bounded. Periodizing by reflection
never introduces a jump, which is the whole point: the classical Fourier
periodization of the same functions keeps O(1/k) sine coefficients (the
Gibbs phenomenon), visible in the first column below.
"""

from halfcos import GridFunction, UNIT, coefficient_decay_report, get_member, gibbs_demo

for name in ("exp1", "kink1", "bspline4_1"):
    tf = get_member(name)
    g = GridFunction.from_callable(tf, tf.d, 9, UNIT)
    rows = coefficient_decay_report(g, 64)
    top = max(w for _, w in rows)
    print(f"{name:12s} sup_k |fhat(k)| k^2 over k <= 64: {top:.6f}")
print()

print("gibbs member (f(0) != f(1) after periodic wrap):")
print("  k   |sine coef|*k   |cosine coef|*k^2")
for k, jump, smooth in gibbs_demo(get_member("gibbs"), 10):
    print(f"  {k:2d}   {jump:12.6f}   {smooth:12.6f}")
print()
print("The sine column refuses to decay (k^-1 Gibbs tail); the cosine")
print("column is already k^-2 because reflection removed the jump.")
