"""The function chi(t) in the Hermitian counterpart h(t).

chi obeys a nonlinear second-order constraint.  Its closed form a / D(t) is
checked against direct RK4 integration, and the substitution
chi = 2a / (Phi sigma^2) turns it into the Ermakov-Pinney equation
sigma'' + Phi^2 sigma / 4 = sigma^-3.
"""
import numpy as np

from dysonspin.ermakov import (EPConstantsABC, EPSolution, chi_closed_form, chi_derivatives,
                               chi_from_sigma, constraint_residual, ep_numeric_solve,
                               ep_residual, ep_sigma)
from dysonspin.spin import ModelParams

p = ModelParams("1", gamma=0.4)
sol = EPSolution.for_model(p, c2=1.2, c3=-0.4)
print(f"Phi = {sol.freq:.6f}, a = {sol.scale:.6f}, lambda = {sol.cubic}")

grid = np.linspace(0, 10, 10001)
x0, v0, _ = chi_derivatives(sol, 0.0)
numeric = ep_numeric_solve(x0, v0, sol.freq, sol.cubic, grid)
closed = chi_closed_form(sol, grid)
print(f"max |closed - RK4| on [0, 10]: {np.abs(closed - numeric).max():.2e}")
print(f"constraint residual:           {constraint_residual(sol, grid).max():.2e}")
print(f"with the wrong cubic term:     {constraint_residual(sol, grid, cubic=0.5).max():.2e}")

abc = EPConstantsABC.from_solution(sol)
print(f"A B - C^2 = {abc.invariant():.12f}  (4/Phi^2 = {4 / sol.freq ** 2:.12f})")
sigma = ep_sigma(abc, sol.freq, grid)
print(f"Ermakov-Pinney residual: {ep_residual(abc, sol.freq, grid).max():.2e}")
print(f"chi from sigma vs closed form: {np.abs(chi_from_sigma(sigma, sol) - closed).max():.2e}")

for t in (0, 2.5, 5, 7.5, 10):
    print(f"  t={t:<4} chi={chi_closed_form(sol, t):.6f}")
