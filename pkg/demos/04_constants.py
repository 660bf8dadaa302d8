"""
Exact constants: decorated lattices and the adsorption transition
==================================================================

"""
from parafermion import sawlattice

xc = sawlattice.honeycomb_xc()
print("honeycomb x_c =", xc, " mu =", 1 / xc)

# the 3-12 and martini lattices inherit their growth rate from the honeycomb
print("mu(3-12)   =", sawlattice.mu_three_twelve())
print("mu(martini)=", sawlattice.mu_martini())
# using x_c instead of x_c^2 on the right gives a visibly different number
print("martini with x_c on the right:", sawlattice.mu_martini(literal_rhs=True))

# short series as a sanity check of the decorated values
for kind, mu in (("three_twelve", sawlattice.mu_three_twelve()),
                 ("martini", sawlattice.mu_martini())):
    est = sawlattice.connective_constant_estimate(sawlattice.enumerate_saws(kind, 30))
    print(f"{kind:12s} estimate from 30 steps {est:.4f} vs {mu:.4f}")

# walks attached to a boundary, weighted by y per surface contact
for o in ("a", "b"):
    s = sawlattice.surface_saw_series(o, 10)
    print(f"orientation {o}: y_c = {sawlattice.critical_fugacity(o):.12f}")
    for N in (1, 2, 3):
        print("   length", N, "polynomial in y:", s.surface_polynomial(N))
