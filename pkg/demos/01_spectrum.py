"""Spectrum of the one-site non-Hermitian spin models.

For |gamma| < 1 the spectrum is real even though H is not Hermitian; at
|gamma| = 1 the levels coalesce and beyond it they pair up into complex
conjugates.  The closed-form energies are compared with numpy's eigvals.
"""
import numpy as np

from dysonspin.spin import SPINS, ModelParams, closed_form_spectrum, hamiltonian, verify_spectrum

for s in SPINS:
    print(f"spin {s}")
    for g in (0.0, 0.5, 0.95, 1.5):
        p = ModelParams(s, g, omega=1.0)
        vals = np.sort_complex(np.linalg.eigvals(hamiltonian(p)))
        line = "  ".join(f"{v.real:+.4f}{v.imag:+.4f}i" for v in vals)
        print(f"  gamma={g:<5} {line}")
        if g < 1:
            # closed form and eigenvector check
            closed = np.sort(closed_form_spectrum(p).energies)
            assert np.allclose(closed, vals.real, atol=1e-12)
            assert verify_spectrum(p).passed

# the transition shows up as a jump in max |Im E|
gammas = np.linspace(0.9, 1.1, 9)
im = [np.abs(np.linalg.eigvals(hamiltonian(ModelParams("1/2", g))).imag).max() for g in gammas]
for g, v in zip(gammas, im):
    print(f"gamma={g:.3f}  max|Im E|={v:.4f}")
