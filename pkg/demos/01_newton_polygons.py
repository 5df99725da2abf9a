"""Newton polygons of p-adic series: hulls, root counts, iterate shapes.

Run:  python demos/01_newton_polygons.py
"""

from lubinlab import (
    PSeries,
    count_roots_open_disk,
    is_eisenstein,
    iterate,
    newton_polygon,
    verify_iterate_shape,
    weierstrass_factor,
)

# ----------------------------------------------------------------------
# The second iterate of f = (1+x)^2 - 1 at p = 2.
# ----------------------------------------------------------------------
p, M, N = 2, 32, 24
f = PSeries.from_univariate_coeffs(p, [2, 1], M, N)  # 2x + x^2
f2 = iterate(f, 2)

poly = newton_polygon(f2)
print("f∘f =", sorted((e[0], int(c.as_fraction())) for e, c in f2.coeffs.items()))
print("vertices:", poly.vertices)
print("segments:", [(str(s.slope), s.width) for s in poly.segments])
print()
print(poly.ascii())
print()

# Widths of the negative slopes count open-disk roots with multiplicity.
print("roots in the open unit disk:", count_roots_open_disk(f2), "(= p^2)")
print()

# ----------------------------------------------------------------------
# The iterates of a suitable f keep a pinned polygon shape: the negative
# vertices of the n-th iterate sit at (p^k, n-k).
# ----------------------------------------------------------------------
for n in (1, 2, 3):
    print(f"iterate {n}: shape as predicted ->", verify_iterate_shape(f, n))
print()

# ----------------------------------------------------------------------
# Each negative slope carries a monic factor; here they are all Eisenstein,
# so the corresponding roots are simple and totally ramified.
# ----------------------------------------------------------------------
f3 = iterate(f, 3)
for seg in newton_polygon(f3).negative_segments():
    factor, cofactor = weierstrass_factor(f3, seg.slope, target_prec=12)
    entries = sorted((e[0], str(c.as_fraction())) for e, c in factor.coeffs.items())
    print(
        f"slope {seg.slope}: width {seg.width}, factor {entries}, "
        f"eisenstein = {is_eisenstein(factor)}"
    )
