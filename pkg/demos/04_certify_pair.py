"""End-to-end certification of commuting pairs, including a twisted one
with no visible formal group, and a pair that must be rejected.

Run:  python demos/04_certify_pair.py
"""

from lubinlab import Config, PSeries, analyze, make_twist_fixture

cfg = Config(N=12, M=32)

# ----------------------------------------------------------------------
# Conjugate the multiplicative-group pair by w = x + 3x^2 + x^3.  The twist
# scrambles every coefficient; the analyzer still finds the group.
# ----------------------------------------------------------------------
p = 3
Nw = cfg.resolve(p).working_prec()
w = PSeries.from_univariate_coeffs(p, [1, p, 1], cfg.M, Nw)
f, u = make_twist_fixture("gm", w)

print("twisted f starts with:",
      sorted((e[0], int(c.as_fraction())) for e, c in f.coeffs.items())[:5])
report = analyze(f, u, cfg, name="gm_twisted_p3")
print("verdict:", report.verdict)
print("pi:", report.data["frobenius"]["pi_residue"],
      "| F min valuation:", report.data["formal_group"]["min_coeff_valuation"],
      "| lift agrees:", report.data["frobenius"]["lift_agrees"])
print()

# ----------------------------------------------------------------------
# A pair that commutes but violates the root-count hypothesis: f = px has
# no unit coefficient at all, so no height-one group can be behind it.
# ----------------------------------------------------------------------
f_add = PSeries.from_univariate_coeffs(p, [p], cfg.M, Nw)
u_add = PSeries.from_univariate_coeffs(p, [1 + p], cfg.M, Nw)
report = analyze(f_add, u_add, cfg, name="additive_p3")
print("additive pair:", report.verdict, "-", report.reason)
print()

# Full reports serialize deterministically.
print("report JSON starts with:")
print("\n".join(analyze(f, u, cfg, name="gm_twisted_p3").to_json().splitlines()[:12]))
