"""
The loop observable on a small square domain
=============================================

Enumerate every loop configuration on a 3x3 block with an open path from a
boundary mid-edge, then check the discrete contour sum around the central
vertex.
"""
import math

from parafermion import loopdomain, params, weights

theta = 0.45 * math.pi
lam = math.pi / 8
sigma = params.spin(lam)
n = params.fugacity_from_lambda(lam)
u = params.spectral_from_angle(sigma, theta)

dom = loopdomain.build_domain(3, 3, theta)
source = (0, 1, loopdomain.W)

table = loopdomain.config_table(dom, source)
print("configurations with a path from", source, ":", len(table))

w = weights.boltzmann_weights(lam, u)
F = loopdomain.observable(dom, w, n, sigma, source)
for me in sorted(F.values):
    print(me, dom.mid_edge_coords(me), f"{F.values[me]:.5f}")

print("relative residual at the centre:", loopdomain.max_relative_residual(F))

# detune the spectral parameter: the identity breaks
F_off = loopdomain.observable(dom, weights.boltzmann_weights(lam, u + 0.2), n, sigma, source)
print("with u + 0.2:", loopdomain.max_relative_residual(F_off))

# the partition function of closed loops only
print("Z(3x3) =", loopdomain.partition_function(dom, w, n))
