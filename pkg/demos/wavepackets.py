"""
The Gaussian wavepacket model
=============================

On the line, the algebra acts on finite combinations of shifted
Gaussians exp(gamma t - t^2): the shift multiplies by a plane wave, the
difference operator translates into the complex plane, and every inner
product has a closed form. All three generator actions move only the
packet labels, so relations can be checked to near machine precision.
"""

import numpy as np

from qheis import (
    GaussianElement,
    SchrodingerParams,
    act_schrodinger,
    apply_word,
    consolidate,
    h_function,
    inner_gaussian,
    inner_quadrature,
    norm_residual,
    verify_schrodinger,
)

params = SchrodingerParams.from_q(0.5)
print("q = 0.5 means alpha =", params.alpha)

# One packet; U multiplies by exp(it), which shifts gamma by i.
f = GaussianElement.packet(0.3 + 0.1j)
uf = act_schrodinger("U", f, params)
print("gamma after U:", [g for g, _ in uf.items()])

# P translates t by -i*alpha, which shifts gamma by 2i*alpha and
# rescales the coefficient.
pf = act_schrodinger("P", f, params)
print("gamma after P:", [g for g, _ in pf.items()])

# The product relation: applying P then X equals the two-shift
# combination i s U* - i s^-1 U, exactly in the Gaussian norm.
lhs = apply_word(["P", "X"], f, params)
s = params.s
rhs = (act_schrodinger("U*", f, params).scale(1j * s)
       + act_schrodinger("U", f, params).scale(-1j / s))
print("PX vs the shift combination:", norm_residual(lhs, rhs))

# Closed-form inner products agree with numerical quadrature.
g = GaussianElement.packet(-0.2 + 0.4j, 1.5j)
print("closed form:", inner_gaussian(f, g))
print("quadrature: ", inner_quadrature(f, g))

# The deformation function h vanishes at i*alpha/2, the obstruction to
# essential self-adjointness of the position action in this model.
z0 = 0.5j * params.alpha
print("h at its zero:", abs(h_function(z0, params)),
      " h elsewhere:", abs(h_function(0.3, params)))

# Operator orders that should agree can leave packet labels differing
# in the last float bits; consolidation merges such twins before norms
# are taken.
noisy = lhs + rhs.scale(-1.0)
print("terms before/after consolidation:",
      noisy.n_terms, "/", consolidate(noisy).n_terms)

# The full check battery at two deformation values.
for q in (0.3, 0.8):
    report = verify_schrodinger(SchrodingerParams.from_q(q), n_samples=20, seed=3)
    worst = max(check.value for check in report.checks)
    print(f"q = {q}: all checks pass = {report.passed}, worst value {worst:.2e}")
