"""Adjoint domain of the lattice difference operator and its boundary form.

The difference operator X is symmetric on finitely supported vectors but not
self-adjoint: its adjoint X* acts by the same pointwise formula

    (X* f)(t_n) = (i / t_n) (f(t_{n-1}) - f(t_{n+1}))

on a strictly larger domain.  The excess is carried by vectors whose point
values become 2-periodic toward the accumulation end of the lattice (large
n, points near zero): constant value xi on even layers n >= 0 and constant
value zeta on odd layers n >= 1, per half-axis atom.  Such a tail is square
summable because the masses decay geometrically, and the difference formula
telescopes on it, so X* maps it back to a finitely supported vector.

``TailVector`` represents an adjoint-domain vector exactly as a finitely
supported correction plus one even and one odd tail amplitude per atom.  The
boundary form

    T(f, g) = <X* f, g> - <f, X* g>

measures the failure of symmetry; it depends only on the tail amplitudes and
has a closed form in the atom-weighted boundary metric.  Both the direct and
the closed-form evaluation are provided so each can check the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import (
    AtomFamily,
    LatticeVector,
    Window,
    apply_generator,
    inner as lattice_inner,
    sign_from_label,
    sign_label,
)

# the adjoint action deposits tail contributions at layers -1 and 0, so any
# window carrying a TailVector must contain both
MIN_TAIL_WINDOW = Window(-1, 0)


@dataclass(frozen=True)
class BoundarySpaceView:
    """Per-sign boundary data: atom positions and weights at layer zero.

    Two metrics matter.  The plain one (gram_K) weighs coordinate j by the
    atom weight w_j; the form metric (gram_H) weighs it by w_j / a_j, where
    a_j is the unsigned atom position.  The boundary form is an H-metric
    pairing, while natural parametrizations of boundary maps tend to be
    K-metric isometries; the conversion between the two is diagonal.
    """

    sign: int
    positions: tuple[float, ...]
    weights: tuple[float, ...]

    @classmethod
    def from_family(cls, family: AtomFamily, sign: int) -> "BoundarySpaceView":
        atoms = family.atoms(sign)
        return cls(sign, tuple(a.position for a in atoms),
                   tuple(a.weight for a in atoms))

    @property
    def dim(self) -> int:
        return len(self.positions)

    def gram_K(self) -> np.ndarray:
        return np.diag(np.asarray(self.weights, dtype=float))

    def gram_H(self) -> np.ndarray:
        w = np.asarray(self.weights, dtype=float)
        a = np.asarray(self.positions, dtype=float)
        return np.diag(w / a)

    def metric_H(self, h, k) -> complex:
        """Sum of h_j conj(k_j) w_j / a_j, linear in the first slot."""
        h = np.asarray(h, dtype=complex)
        k = np.asarray(k, dtype=complex)
        w = np.asarray(self.weights, dtype=float)
        a = np.asarray(self.positions, dtype=float)
        return complex(np.sum(h * np.conj(k) * w / a))


def _tail_arrays(family: AtomFamily, source) -> dict[int, np.ndarray]:
    out = {}
    for sign in (+1, -1):
        dim = len(family.atoms(sign))
        arr = np.zeros(dim, dtype=complex)
        if source is not None:
            given = source.get(sign)
            if given is not None:
                given = np.asarray(given, dtype=complex)
                if given.shape != (dim,):
                    raise ValueError(
                        f"tail amplitudes for sign {sign_label(sign)} must have "
                        f"length {dim}, got shape {given.shape}")
                arr = given.copy()
        out[sign] = arr
    return out


class TailVector:
    """Finite correction plus 2-periodic point-value tails at large n.

    ``even[sign][j]`` is the point value on even layers n >= 0 of atom
    (sign, j); ``odd[sign][j]`` the value on odd layers n >= 1.  The finite
    part may overlap the tail region; point values add.
    """

    __slots__ = ("finite", "even", "odd")

    def __init__(self, finite: LatticeVector, even=None, odd=None):
        window = finite.window
        if window.n_min > MIN_TAIL_WINDOW.n_min or window.n_max < MIN_TAIL_WINDOW.n_max:
            raise ValueError(
                f"tail vectors need a window containing [{MIN_TAIL_WINDOW.n_min}, "
                f"{MIN_TAIL_WINDOW.n_max}], got {window}")
        self.finite = finite
        self.even = _tail_arrays(finite.family, even)
        self.odd = _tail_arrays(finite.family, odd)

    @property
    def family(self) -> AtomFamily:
        return self.finite.family

    @property
    def window(self) -> Window:
        return self.finite.window

    @classmethod
    def zero(cls, family: AtomFamily, window: Window) -> "TailVector":
        return cls(LatticeVector.zero(family, window))

    @classmethod
    def from_finite(cls, finite: LatticeVector) -> "TailVector":
        return cls(finite)

    @classmethod
    def pure_tail(cls, family: AtomFamily, window: Window, even=None,
                  odd=None) -> "TailVector":
        return cls(LatticeVector.zero(family, window), even, odd)

    def tails(self, sign: int) -> tuple[np.ndarray, np.ndarray]:
        """(even, odd) amplitude arrays for one sign, as copies."""
        return self.even[sign].copy(), self.odd[sign].copy()

    def tail_point_value(self, sign: int, j: int, n: int) -> complex:
        if n >= 0 and n % 2 == 0:
            return complex(self.even[sign][j])
        if n >= 1:
            return complex(self.odd[sign][j])
        return 0j

    def point_value(self, sign: int, j: int, n: int) -> complex:
        return (self.finite.point_value(sign, j, n)
                + self.tail_point_value(sign, j, n))

    def is_tail_free(self, tol: float = 0.0) -> bool:
        return all(
            np.all(np.abs(part[sign]) <= tol)
            for part in (self.even, self.odd) for sign in (+1, -1))

    def tail_norm_sq(self) -> float:
        """Squared norm of the tail part alone."""
        total = 0.0
        q = self.family.q
        for sign in (+1, -1):
            for j, atom in enumerate(self.family.atoms(sign)):
                total += atom.weight / (1.0 - q * q) * (
                    abs(self.even[sign][j]) ** 2
                    + q * abs(self.odd[sign][j]) ** 2)
        return total

    def add(self, other: "TailVector") -> "TailVector":
        self._check_compatible(other)
        return TailVector(
            self.finite + other.finite,
            {s: self.even[s] + other.even[s] for s in (+1, -1)},
            {s: self.odd[s] + other.odd[s] for s in (+1, -1)})

    def sub(self, other: "TailVector") -> "TailVector":
        return self.add(other.scale(-1.0))

    def scale(self, c: complex) -> "TailVector":
        return TailVector(
            self.finite.scale(c),
            {s: c * self.even[s] for s in (+1, -1)},
            {s: c * self.odd[s] for s in (+1, -1)})

    def inner(self, other: "TailVector") -> complex:
        """Hilbert space inner product, linear in self."""
        self._check_compatible(other)
        total = lattice_inner(self.finite, other.finite)
        total += _finite_vs_tail(self.finite, other)
        total += _finite_vs_tail(other.finite, self).conjugate()
        q = self.family.q
        for sign in (+1, -1):
            for j, atom in enumerate(self.family.atoms(sign)):
                total += atom.weight / (1.0 - q * q) * (
                    self.even[sign][j] * np.conj(other.even[sign][j])
                    + q * self.odd[sign][j] * np.conj(other.odd[sign][j]))
        return complex(total)

    def norm(self) -> float:
        return math.sqrt(max(0.0, self.inner(self).real))

    def _check_compatible(self, other: "TailVector") -> None:
        self.finite._check_compatible(other.finite)

    def to_json(self) -> dict:
        finite = []
        for (sign, j, n) in self.finite.support():
            v = self.finite.entries[(sign, j, n)]
            finite.append({"sign": sign_label(sign), "j": j, "n": n,
                           "re": v.real, "im": v.imag})
        def tail_rows(part):
            rows = []
            for sign in (+1, -1):
                for j, v in enumerate(part[sign]):
                    if v != 0:
                        rows.append({"sign": sign_label(sign), "j": j,
                                     "re": v.real, "im": v.imag})
            return rows
        return {"finite": finite, "even_tail": tail_rows(self.even),
                "odd_tail": tail_rows(self.odd)}

    @classmethod
    def from_json(cls, data, family: AtomFamily, window: Window) -> "TailVector":
        entries = {}
        for row in data.get("finite", ()):
            idx = (sign_from_label(row["sign"]), int(row["j"]), int(row["n"]))
            entries[idx] = complex(float(row.get("re", 0.0)),
                                   float(row.get("im", 0.0)))
        def tail_part(rows):
            part = {s: np.zeros(len(family.atoms(s)), dtype=complex)
                    for s in (+1, -1)}
            for row in rows:
                sign = sign_from_label(row["sign"])
                part[sign][int(row["j"])] = complex(
                    float(row.get("re", 0.0)), float(row.get("im", 0.0)))
            return part
        return cls(LatticeVector(family, window, entries),
                   tail_part(data.get("even_tail", ())),
                   tail_part(data.get("odd_tail", ())))

    def __repr__(self) -> str:
        ntail = sum(int(np.count_nonzero(part[s]))
                    for part in (self.even, self.odd) for s in (+1, -1))
        return (f"TailVector({len(self.finite.entries)} finite entries, "
                f"{ntail} tail amplitudes)")


def _finite_vs_tail(v: LatticeVector, t: TailVector) -> complex:
    """<v, tail part of t>: finite sum since v has finite support."""
    total = 0j
    family = v.family
    for (sign, j, n), c in v.entries.items():
        pv = t.tail_point_value(sign, j, n)
        if pv != 0:
            total += c * pv.conjugate() * math.sqrt(family.weight(sign, j, n))
    return total


def materialize(f: TailVector, window: Window | None = None) -> LatticeVector:
    """Write the tail pattern out as plain entries on a window.

    The result truncates the tails at the window top, so it only approximates
    f; the dropped mass is of order q^{n_max}.  Useful as an oracle against
    the exact tail arithmetic.
    """
    target = window if window is not None else f.window
    if target.n_min > f.window.n_min or target.n_max < f.window.n_max:
        raise ValueError("materializing window must contain the source window")
    family = f.family
    entries = dict(f.finite.entries)
    for sign in (+1, -1):
        for j in range(len(family.atoms(sign))):
            for n in range(max(0, target.n_min), target.n_max + 1):
                pv = f.tail_point_value(sign, j, n)
                if pv != 0:
                    idx = (sign, j, n)
                    entries[idx] = entries.get(idx, 0j) + pv * math.sqrt(
                        family.weight(sign, j, n))
    return LatticeVector(family, target, entries, f.finite.lost)


def extract_tails(raw: LatticeVector, rel_tol: float = 1e-12) -> TailVector:
    """Recognize a tail pattern in a plain vector and split it off.

    The four deepest window layers must carry point values constant on each
    parity class (relative tolerance ``rel_tol``); those constants become
    the tail amplitudes and the remaining finite correction keeps the vector
    exactly equal to ``raw`` on its window.  Raises ValueError when the top
    layers are not tail patterned.
    """
    family, window = raw.family, raw.window
    top = [window.n_max - k for k in range(4)]
    if min(top) < 0 or window.n_min > MIN_TAIL_WINDOW.n_min:
        raise ValueError(
            "tail recognition needs four window layers at nonnegative n")
    even = {}
    odd = {}
    for sign in (+1, -1):
        dim = len(family.atoms(sign))
        even[sign] = np.zeros(dim, dtype=complex)
        odd[sign] = np.zeros(dim, dtype=complex)
        for j in range(dim):
            values = {n: raw.point_value(sign, j, n) for n in top}
            scale = max(1.0, *(abs(v) for v in values.values()))
            evens = [values[n] for n in top if n % 2 == 0]
            odds = [values[n] for n in top if n % 2 == 1]
            if (abs(evens[0] - evens[1]) > rel_tol * scale
                    or abs(odds[0] - odds[1]) > rel_tol * scale):
                raise ValueError(
                    f"vector is not tail patterned at atom "
                    f"({sign_label(sign)}, {j})")
            even[sign][j] = evens[0]
            odd[sign][j] = odds[0]

    entries = dict(raw.entries)
    for sign in (+1, -1):
        for j in range(len(family.atoms(sign))):
            for n in range(max(0, window.n_min), window.n_max + 1):
                pv = even[sign][j] if n % 2 == 0 else (odd[sign][j] if n >= 1 else 0j)
                if pv != 0:
                    idx = (sign, j, n)
                    c = entries.get(idx, 0j) - pv * math.sqrt(family.weight(sign, j, n))
                    if c == 0:
                        entries.pop(idx, None)
                    else:
                        entries[idx] = c
    finite = LatticeVector(family, window, entries, raw.lost)
    return TailVector(finite, even, odd)


def apply_X_star(f: TailVector) -> TailVector:
    """Adjoint difference operator.  The pointwise formula telescopes on the
    periodic tails, leaving two boundary contributions per atom:

        even amplitude xi   ->  point value -i sign q xi / a   at layer -1
        odd amplitude zeta  ->  point value -i sign zeta / a   at layer  0

    so the result is always tail free.  Edge loss of the finite part is
    flagged on the result, as with the plain generator action.
    """
    family = f.family
    image = apply_generator("X", f.finite)
    entries = dict(image.entries)
    for sign in (+1, -1):
        for j, atom in enumerate(family.atoms(sign)):
            xi = complex(f.even[sign][j])
            zeta = complex(f.odd[sign][j])
            if xi != 0:
                pv = -1j * sign * family.q * xi / atom.position
                idx = (sign, j, -1)
                entries[idx] = entries.get(idx, 0j) + pv * math.sqrt(
                    family.weight(sign, j, -1))
            if zeta != 0:
                pv = -1j * sign * zeta / atom.position
                idx = (sign, j, 0)
                entries[idx] = entries.get(idx, 0j) + pv * math.sqrt(
                    family.weight(sign, j, 0))
    return TailVector(LatticeVector(family, f.window, entries, image.lost))


def apply_U(f: TailVector) -> TailVector:
    """Unitary shift on adjoint-domain vectors.

    Pointwise, U sends value v_{n+1} to sqrt(q) v_{n+1} at layer n, so the
    tails swap parity and scale: (xi, zeta) -> (sqrt(q) zeta, sqrt(q) xi).
    The shifted even tail also covers layer -1, which the new odd tail does
    not, so that single point joins the finite part.
    """
    family = f.family
    sq = family.sqrt_q
    image = apply_generator("U", f.finite)
    entries = dict(image.entries)
    even = {}
    odd = {}
    for sign in (+1, -1):
        even[sign] = sq * f.odd[sign]
        odd[sign] = sq * f.even[sign]
        for j in range(len(family.atoms(sign))):
            xi = complex(f.even[sign][j])
            if xi != 0:
                idx = (sign, j, -1)
                entries[idx] = entries.get(idx, 0j) + sq * xi * math.sqrt(
                    family.weight(sign, j, -1))
    return TailVector(LatticeVector(family, f.window, entries, image.lost),
                      even, odd)


def apply_U_star(f: TailVector) -> TailVector:
    """Inverse shift; tails swap parity and scale by 1/sqrt(q).  The new even
    tail claims layer 0, which the shifted odd tail does not reach, so a
    compensating point is subtracted from the finite part."""
    family = f.family
    sq = family.sqrt_q
    image = apply_generator("U*", f.finite)
    entries = dict(image.entries)
    even = {}
    odd = {}
    for sign in (+1, -1):
        even[sign] = f.odd[sign] / sq
        odd[sign] = f.even[sign] / sq
        for j in range(len(family.atoms(sign))):
            zeta = complex(f.odd[sign][j])
            if zeta != 0:
                idx = (sign, j, 0)
                entries[idx] = entries.get(idx, 0j) - zeta / sq * math.sqrt(
                    family.weight(sign, j, 0))
    return TailVector(LatticeVector(family, f.window, entries, image.lost),
                      even, odd)


def boundary_form(f: TailVector, g: TailVector) -> complex:
    """Closed form of T(f, g) = <X* f, g> - <f, X* g>.

    Only the tail amplitudes enter: with (xi, zeta) for f and (eta, theta)
    for g,

        T = -i sum_plus  (w_j / a_j) (xi_j conj(theta_j) + zeta_j conj(eta_j))
            +i sum_minus (w_j / a_j) (xi_j conj(theta_j) + zeta_j conj(eta_j)).
    """
    f._check_compatible(g)
    total = 0j
    for sign in (+1, -1):
        block = 0j
        for j, atom in enumerate(f.family.atoms(sign)):
            block += atom.weight / atom.position * (
                f.even[sign][j] * np.conj(g.odd[sign][j])
                + f.odd[sign][j] * np.conj(g.even[sign][j]))
        total += -1j * sign * block
    return complex(total)


def boundary_form_direct(f: TailVector, g: TailVector) -> complex:
    """T(f, g) straight from the definition; the oracle for boundary_form.

    Raises when either adjoint image loses support at the window edge, since
    the sesquilinear pairing would then be computed from a mutilated vector.
    """
    xf = apply_X_star(f)
    xg = apply_X_star(g)
    if xf.finite.lost or xg.finite.lost:
        raise ValueError("adjoint image lost support at the window edge")
    return xf.inner(g) - f.inner(xg)
