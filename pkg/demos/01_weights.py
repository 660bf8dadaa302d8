"""
Critical loop weights and the relations they satisfy
=====================================================

"""
import math

import numpy as np

from parafermion import params, weights

# pick the dilute branch at n = 0 (the self-avoiding walk point)
lam = params.lambda_from_fugacity(0.0)
p = params.LoopParams.from_lambda(lam, theta=math.pi / 2)
print("lambda =", lam, " sigma =", p.sigma, " u =", p.u)

w = weights.compute_weights(p)
for k, r in enumerate(w.rho, start=1):
    print(f"rho_{k} = {r: .6f}")

# the four relations vanish on these weights ...
r = weights.holo_residuals(w, p.n, p.theta, p.sigma)
print("max |residual| at the isotropic point:", np.abs(r).max())

# ... for every embedding angle, as long as u follows theta
for theta in np.linspace(0.3, 2.8, 6):
    u = params.spectral_from_angle(p.sigma, theta)
    r = weights.holo_residuals(weights.boltzmann_weights(lam, u), p.n, theta, p.sigma)
    print(f"theta = {theta:.3f}  u = {u: .3f}  max |residual| = {np.abs(r).max():.1e}")

# going the other way: the weights are the null vector of the relations
w2 = weights.solve_holo_system(p.n, p.theta, p.sigma)
cos = w2.rho @ w.rho / np.linalg.norm(w.rho)
print("recovered direction, cosine with closed form:", cos)

# a spin that does not match n leaves no solution
try:
    weights.solve_holo_system(0.0, math.pi / 2, 0.33)
except weights.NoSolutionError as exc:
    print("sigma = 0.33:", exc)
