"""States in the two pictures.

A superposition of eigenstates of the non-Hermitian H is mapped with
eta(t) into the Hermitian picture.  The metric norm <Psi|rho Psi> and the
ordinary norm <phi|phi> stay constant, and the energy expectation values
agree: <phi|h phi> = <Psi|rho H~ Psi>.  Finally both Schroedinger equations
are integrated with RK4 and compared at T = 10.
"""
import numpy as np

from dysonspin.dyson import DysonSpec, dyson_map, energy_operator_conjugated, metric, target_hamiltonian
from dysonspin.evolution import (closed_form_state, eigenstate, energy_expectation_check,
                                 map_state, metric_inner_product, overlap_closed_form,
                                 rk4_propagate)
from dysonspin.linalg import phase_align
from dysonspin.spin import ModelParams, hamiltonian

p = ModelParams("1/2", gamma=0.6, omega=1.0)
spec = DysonSpec.build(p, c1=1.0, c2=1.0, c3=0.0)

coeffs = {1: 1.0, -1: 0.5j}
psi0 = closed_form_state(p, coeffs, 0.0)
norm0 = metric_inner_product(psi0, psi0, metric(spec, 0.0)).real
print(" t     <Psi|rho Psi>   <phi|phi>      <phi|h phi>     <Psi|rho H~ Psi>")
for t in np.linspace(0, 10, 6):
    psi = closed_form_state(p, coeffs, t) / np.sqrt(norm0)
    phi = dyson_map(spec, t) @ psi
    rho = metric(spec, t)
    e_h = np.vdot(phi, target_hamiltonian(spec, t) @ phi).real
    e_H = metric_inner_product(psi, energy_operator_conjugated(spec, t) @ psi, rho).real
    print(f"{t:4.1f}  {metric_inner_product(psi, psi, rho).real:.12f}  "
          f"{np.vdot(phi, phi).real:.12f}  {e_h:+.12f}  {e_H:+.12f}")

# the two normalised Hermitian eigenstates are not orthogonal for gamma != 0
t = 2.0
up = map_state(spec, eigenstate(spec, 1, t), t, normalize=True, k=1)
dn = map_state(spec, eigenstate(spec, -1, t), t, normalize=True, k=-1)
print(f"<phi+|phi-> = {np.vdot(up, dn):.6f}, closed form {overlap_closed_form(spec, 1):.6f}")
chk = energy_expectation_check(spec, 1, t)
print(f"energy of phi+: {chk.lhs:.10f} {chk.rhs:.10f} {chk.closed:.10f}")

grid = np.linspace(0, 10, 10001)
psi0 = psi0 / np.sqrt(norm0)
psi_T = rk4_propagate(hamiltonian(p), psi0, grid).final
phi_T = rk4_propagate(lambda u: target_hamiltonian(spec, u), dyson_map(spec, 0.0) @ psi0, grid).final
mapped = dyson_map(spec, 10.0) @ psi_T
print(f"RK4 in both pictures, difference at T=10: {np.abs(phase_align(phi_T, mapped) - mapped).max():.2e}")
