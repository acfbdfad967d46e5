"""
Boundary tails and the adjoint defect
=====================================

The difference operator on the lattice is symmetric but not
self-adjoint: vectors whose point values approach a 2-periodic pattern
deep into the small-point region still lie in the adjoint's domain.
The defect <X*f, g> - <f, X*g> only sees those tail amplitudes, and a
short closed formula computes it without ever materializing the tails.
"""

import random

import numpy as np

from qheis import (
    Atom,
    AtomFamily,
    LatticeVector,
    TailVector,
    Window,
    apply_U,
    apply_X_star,
    boundary_form,
    boundary_form_direct,
)

family = AtomFamily(0.5, plus=[Atom(0.7)], minus=[Atom(0.6, 2.0)])
window = Window(-4, 6)

# A pure tail vector: even and odd amplitudes on each ladder.
f = TailVector.pure_tail(family, window,
                         even={+1: [1.0], -1: [0.5j]},
                         odd={+1: [0.25], -1: [-1.0]})
g = TailVector.pure_tail(family, window,
                         even={+1: [2.0j], -1: [1.0]},
                         odd={+1: [1.0], -1: [0.5]})

print("pairing (closed formula):", boundary_form(f, g))
print("pairing (direct defect):  ", boundary_form_direct(f, g))

# For one atom with weight w at position a the pairing is
# -i (w/a) (beta1 * conj(alpha2) + alpha1 * conj(beta2)) in the even
# and odd amplitudes.
one_atom = AtomFamily(0.5, [Atom(0.7)], [])
fa = TailVector.pure_tail(one_atom, window, even={+1: [1 + 2j]}, odd={+1: [-0.5j]})
ga = TailVector.pure_tail(one_atom, window, even={+1: [0.25 - 1j]}, odd={+1: [3.0]})
closed = -1j / 0.7 * ((-0.5j) * np.conj(0.25 - 1j) + (1 + 2j) * np.conj(3.0))
print("one atom, closed form:", closed)
print("one atom, computed:   ", boundary_form(fa, ga))

# The pairing scales by q under the shift, which is what makes
# shift-covariant restriction domains possible at all.
rng = random.Random(7)


def random_tail():
    entries = {}
    for sign in (+1, -1):
        for n in range(window.n_min + 2, window.n_max - 1):
            if rng.random() < 0.4:
                entries[(sign, 0, n)] = complex(rng.gauss(0, 1), rng.gauss(0, 1))
    def amps():
        return {s: np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1))])
                for s in (+1, -1)}
    return TailVector(LatticeVector(family, window, entries), amps(), amps())


a, b = random_tail(), random_tail()
print("T(Uf, Ug) / T(f, g) =",
      (boundary_form(apply_U(a), apply_U(b)) / boundary_form(a, b)).real,
      " (the deformation parameter)")

# Mixed finite-plus-tail vectors work the same way; the finite part
# never contributes to the pairing.
xa = apply_X_star(a)
print("defect vs formula on random vectors:",
      abs((xa.inner(b) - a.inner(apply_X_star(b))) - boundary_form(a, b)))
