"""Representation of algebra elements on the lattice and classification of
the self-adjoint restrictions.

The lattice operators p -> P, x -> X, u -> U, u^-1 -> U* turn every
normal-form element into an operator on window vectors; ``apply_element``
evaluates it and ``verify_representation`` spot checks that products and the
involution are represented faithfully.

Classification works on the boundary data alone.  A restriction is recorded
as a ``CommutantProblem`` (atom positions and weights per sign plus the
primitive boundary matrices), and everything reduces to linear algebra:

* the commutant of a problem is the null space of an intertwining system;
  the restriction is irreducible exactly when that space is the scalars;
* two problems are unitarily equivalent exactly when a metric-preserving
  intertwiner exists; for irreducible problems a one-dimensional null space
  plus a trace normalization produces the witness, which is then verified
  entry by entry before the verdict is issued.

A small catalog of worked examples covers the qualitatively different
cases: single atoms, transform-coupled distinct positions, a repeated
position (reducible), and two position blocks coupled by a contraction.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .algebra import (
    AlgebraElement,
    GENERATOR_LETTERS,
    random_element,
    star,
)
from .extensions import (
    BoundaryMap,
    ExtensionTriple,
    VerificationCheck,
    make_boundary_map,
    z_block_unitary,
)
from .lattice import (
    Atom,
    AtomFamily,
    LatticeVector,
    Window,
    apply_generator,
    basis_indices,
    check_relations_lattice,
    inner,
    matrix_of,
)

_LETTER_OP = {"p": "P", "x": "X", "u": "U", "u^-1": "U*"}


def apply_element(element: AlgebraElement, v: LatticeVector) -> LatticeVector:
    """Act with a normal-form element on a window vector.

    Each monomial acts right to left: the shift part first, then the power
    of P or X.  Raises when any step pushes support over the window edge,
    since a silently truncated image would fake the algebraic identities.
    """
    out = LatticeVector.zero(v.family, v.window)
    s_value = math.sqrt(v.family.q)
    for mono, coeff in element.items():
        vec = v
        shift = "U" if mono.uexp > 0 else "U*"
        for _ in range(abs(mono.uexp)):
            vec = apply_generator(shift, vec)
        op = _LETTER_OP[mono.kind]
        for _ in range(mono.power):
            vec = apply_generator(op, vec)
        if vec.lost:
            raise ValueError(
                f"monomial {mono} pushed support over the window edge")
        out = out + vec.scale(complex(coeff.evaluate(s_value)))
    return out


def element_margin(element: AlgebraElement) -> int:
    """How many layers an element can move support in either direction."""
    return max((m.power + abs(m.uexp) for m, _ in element.items()), default=0)


def _vec_residual(lhs: LatticeVector, rhs: LatticeVector) -> float:
    return (lhs - rhs).norm() / max(1.0, lhs.norm(), rhs.norm())


@dataclass
class RepresentationReport:
    checks: list[VerificationCheck]
    degree: int
    n_samples: int
    seed: int | None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"passed": self.passed, "degree": self.degree,
                "n_samples": self.n_samples, "seed": self.seed,
                "checks": [c.to_json() for c in self.checks]}


def verify_representation(family: AtomFamily, window: Window | None = None,
                          degree: int = 3, n_samples: int = 25,
                          seed: int | None = None,
                          tol: float = 1e-10) -> RepresentationReport:
    """Spot check that the lattice operators represent the algebra.

    Random elements of word length up to ``degree`` are applied to random
    vectors supported far enough from the window edges that nothing is
    lost.  Three families of identities are measured: compositions of
    generator pairs against their normal forms, products of elements
    against composition of their actions, and the involution against the
    operator adjoint.
    """
    rng = random.Random(seed)
    if window is None:
        window = Window(-2 * degree - 2, 2 * degree + 3)
    margin = 2 * degree
    support = basis_indices(family, window, margin=margin)
    if not support:
        raise ValueError("window too small for the requested degree")

    def sample_vector() -> LatticeVector:
        entries = {}
        for idx in support:
            if rng.random() < 0.5:
                entries[idx] = complex(rng.gauss(0, 1), rng.gauss(0, 1))
        if not entries:
            entries[support[0]] = 1.0 + 0j
        return LatticeVector(family, window, entries)

    worst_pairs = 0.0
    for g1 in GENERATOR_LETTERS:
        for g2 in GENERATOR_LETTERS:
            product = (AlgebraElement.generator(g1)
                       * AlgebraElement.generator(g2))
            for _ in range(3):
                v = sample_vector()
                direct = apply_generator(
                    _LETTER_OP[g1], apply_generator(_LETTER_OP[g2], v))
                via_normal_form = apply_element(product, v)
                worst_pairs = max(worst_pairs,
                                  _vec_residual(direct, via_normal_form))

    worst_product = 0.0
    worst_star = 0.0
    for _ in range(n_samples):
        a = random_element(rng, max_terms=3, max_len=degree)
        b = random_element(rng, max_terms=3, max_len=degree)
        v = sample_vector()
        lhs = apply_element(a * b, v)
        rhs = apply_element(a, apply_element(b, v))
        worst_product = max(worst_product, _vec_residual(lhs, rhs))

        f, g = sample_vector(), sample_vector()
        left = inner(apply_element(a, f), g)
        right = inner(f, apply_element(star(a), g))
        worst_star = max(worst_star, abs(left - right)
                         / max(1.0, abs(left), abs(right)))

    checks = [
        VerificationCheck("generator products follow the defining relations",
                          worst_pairs, tol),
        VerificationCheck("element products compose operatorially",
                          worst_product, tol),
        VerificationCheck("the involution matches the operator adjoint",
                          worst_star, tol),
    ]
    return RepresentationReport(checks, degree, n_samples, seed)


@dataclass
class CommutantProblem:
    """Boundary data of one restriction, in primitive (weight-metric)
    coordinates: diagonal position matrices per sign and the two boundary
    matrices."""

    plus_positions: np.ndarray
    plus_weights: np.ndarray
    minus_positions: np.ndarray
    minus_weights: np.ndarray
    vprime: np.ndarray
    wprime: np.ndarray

    def __post_init__(self):
        self.plus_positions = np.asarray(self.plus_positions, dtype=float)
        self.plus_weights = np.asarray(self.plus_weights, dtype=float)
        self.minus_positions = np.asarray(self.minus_positions, dtype=float)
        self.minus_weights = np.asarray(self.minus_weights, dtype=float)
        self.vprime = np.asarray(self.vprime, dtype=complex)
        self.wprime = np.asarray(self.wprime, dtype=complex)
        if len(self.plus_positions) != len(self.minus_positions):
            raise ValueError("problems need equally many atoms on both signs")

    @property
    def dim(self) -> int:
        return len(self.plus_positions)

    @classmethod
    def from_triple(cls, triple: ExtensionTriple) -> "CommutantProblem":
        bmap = triple.bmap
        return cls(bmap.plus.positions, bmap.plus.weights,
                   bmap.minus.positions, bmap.minus.weights,
                   bmap.vprime, bmap.wprime)

    def data_equal(self, other: "CommutantProblem") -> bool:
        return (np.array_equal(self.plus_positions, other.plus_positions)
                and np.array_equal(self.plus_weights, other.plus_weights)
                and np.array_equal(self.minus_positions, other.minus_positions)
                and np.array_equal(self.minus_weights, other.minus_weights)
                and np.array_equal(self.vprime, other.vprime)
                and np.array_equal(self.wprime, other.wprime))


def _intertwiner_system(p1: CommutantProblem,
                        p2: CommutantProblem) -> np.ndarray:
    """Linear system whose null vectors are pairs (A+, A-) with

        A+ P1+ = P2+ A+      A- P1- = P2- A-
        A+ V1' = V2' A-      A+ W1' = W2' A-

    stacked as [vec(A+); vec(A-)] in row-major vec convention."""
    d = p1.dim
    eye = np.eye(d)
    zero = np.zeros((d * d, d * d))
    def right(m):   # vec(A m) = (I kron m^T) vec(A)
        return np.kron(eye, np.asarray(m, dtype=complex).T)
    def left(m):    # vec(m A) = (m kron I) vec(A)
        return np.kron(np.asarray(m, dtype=complex), eye)
    rows = [
        np.hstack([right(np.diag(p1.plus_positions))
                   - left(np.diag(p2.plus_positions)), zero]),
        np.hstack([zero, right(np.diag(p1.minus_positions))
                   - left(np.diag(p2.minus_positions))]),
        np.hstack([right(p1.vprime), -left(p2.vprime)]),
        np.hstack([right(p1.wprime), -left(p2.wprime)]),
    ]
    return np.vstack(rows)


def _null_space(mat: np.ndarray, rcond: float = 1e-10):
    """(basis, kept, dropped): orthonormal null basis and the smallest kept /
    largest dropped singular values, for diagnostics."""
    svals = np.linalg.svd(mat, compute_uv=False)
    cutoff = rcond * max(1.0, svals[0] if svals.size else 0.0)
    rank = int(np.sum(svals > cutoff))
    _, _, vh = np.linalg.svd(mat, full_matrices=True)
    basis = vh[rank:].conj().T
    kept = float(svals[rank - 1]) if rank > 0 else math.inf
    dropped = float(svals[rank]) if rank < svals.size else 0.0
    return basis, kept, dropped


def commutant_dim(problem: CommutantProblem, rcond: float = 1e-10) -> int:
    basis, _, _ = _null_space(_intertwiner_system(problem, problem), rcond)
    return basis.shape[1]


@dataclass
class IrreducibilityReport:
    dim: int
    commutant_dim: int
    smallest_kept_sv: float
    largest_dropped_sv: float

    @property
    def irreducible(self) -> bool:
        return self.commutant_dim == 1

    def to_json(self) -> dict:
        return {"dim": self.dim, "commutant_dim": self.commutant_dim,
                "irreducible": self.irreducible,
                "smallest_kept_sv": self.smallest_kept_sv,
                "largest_dropped_sv": self.largest_dropped_sv}


def irreducibility_report(problem: CommutantProblem,
                          rcond: float = 1e-10) -> IrreducibilityReport:
    """Dimension of the commutant of the boundary data.  The identity pair
    always commutes, so the dimension is at least one; exactly one means
    the restriction is irreducible."""
    basis, kept, dropped = _null_space(
        _intertwiner_system(problem, problem), rcond)
    return IrreducibilityReport(problem.dim, basis.shape[1], kept, dropped)


def _matrix_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.linalg.norm(lhs - rhs)
                 / max(1.0, np.linalg.norm(lhs), np.linalg.norm(rhs)))


def _witness_residuals(p1, p2, a_plus, a_minus) -> dict[str, float]:
    g1p, g2p = np.diag(p1.plus_weights), np.diag(p2.plus_weights)
    g1m, g2m = np.diag(p1.minus_weights), np.diag(p2.minus_weights)
    return {
        "plus positions intertwine": _matrix_residual(
            a_plus @ np.diag(p1.plus_positions),
            np.diag(p2.plus_positions) @ a_plus),
        "minus positions intertwine": _matrix_residual(
            a_minus @ np.diag(p1.minus_positions),
            np.diag(p2.minus_positions) @ a_minus),
        "first boundary matrix intertwines": _matrix_residual(
            a_plus @ p1.vprime, p2.vprime @ a_minus),
        "second boundary matrix intertwines": _matrix_residual(
            a_plus @ p1.wprime, p2.wprime @ a_minus),
        "plus metric preserved": _matrix_residual(
            a_plus.conj().T @ g2p @ a_plus, g1p),
        "minus metric preserved": _matrix_residual(
            a_minus.conj().T @ g2m @ a_minus, g1m),
    }


@dataclass
class EquivalenceReport:
    verdict: str
    reason: str
    intertwiner_dim: int
    witness_plus: np.ndarray | None = None
    witness_minus: np.ndarray | None = None
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else math.inf

    def to_json(self) -> dict:
        def rows(m):
            if m is None:
                return None
            return [[{"re": z.real, "im": z.imag} for z in row] for row in m]
        return {"verdict": self.verdict, "reason": self.reason,
                "intertwiner_dim": self.intertwiner_dim,
                "residuals": dict(self.residuals),
                "witness_plus": rows(self.witness_plus),
                "witness_minus": rows(self.witness_minus)}


def unitary_equivalent(p1: CommutantProblem, p2: CommutantProblem,
                       tol: float = 1e-10,
                       rcond: float = 1e-10) -> EquivalenceReport:
    """Decide unitary equivalence of two boundary problems.

    The verdict is "equivalent" only when a concrete metric-preserving
    intertwiner has been found and verified, "inequivalent" when no nonzero
    intertwiner exists at all (or the dimensions differ), and "undecided"
    when intertwiners exist but none could be certified, which is where
    reducible problems land.
    """
    if p1.dim != p2.dim:
        return EquivalenceReport(
            "inequivalent", "different numbers of boundary atoms", 0)
    if p1.dim == 0:
        return EquivalenceReport("equivalent", "both problems are empty", 0,
                                 np.zeros((0, 0)), np.zeros((0, 0)))

    basis, _, _ = _null_space(_intertwiner_system(p1, p2), rcond)
    n_dim = basis.shape[1]
    if n_dim == 0:
        return EquivalenceReport(
            "inequivalent", "no nonzero intertwiner exists", 0)

    d = p1.dim
    candidates = []
    if p1.data_equal(p2):
        candidates.append((np.eye(d, dtype=complex), np.eye(d, dtype=complex)))
    for col in range(n_dim):
        z = basis[:, col]
        candidates.append((z[:d * d].reshape(d, d), z[d * d:].reshape(d, d)))

    g1p, g2p = np.diag(p1.plus_weights), np.diag(p2.plus_weights)
    for a_plus, a_minus in candidates:
        scale = float(np.trace(a_plus.conj().T @ g2p @ a_plus).real
                      / np.trace(g1p).real)
        if scale <= 0:
            continue
        a_plus = a_plus / math.sqrt(scale)
        a_minus = a_minus / math.sqrt(scale)
        residuals = _witness_residuals(p1, p2, a_plus, a_minus)
        if max(residuals.values()) <= tol:
            return EquivalenceReport(
                "equivalent", "verified metric-preserving intertwiner",
                n_dim, a_plus, a_minus, residuals)

    if commutant_dim(p1, rcond) == 1 and commutant_dim(p2, rcond) == 1:
        reason = ("an intertwiner exists between irreducible problems but "
                  "failed unitary certification")
    else:
        reason = ("intertwiners exist but none certified; at least one "
                  "problem is reducible")
    return EquivalenceReport("undecided", reason, n_dim)


def dft_matrix(dim: int) -> np.ndarray:
    j = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(j, j) / dim) / math.sqrt(dim)


def _default_window() -> Window:
    return Window(-6, 8)


def single_atom_triple(q: float = 0.5, plus_position: float = 0.7,
                       minus_position: float = 0.7, plus_weight: float = 1.0,
                       minus_weight: float = 1.0, phases=(0.0, 0.0),
                       window: Window | None = None) -> ExtensionTriple:
    """One atom per sign; the whole family of restrictions is swept out by
    the two phases, and the phase difference is the equivalence invariant."""
    family = AtomFamily(q, [Atom(plus_position, plus_weight)],
                        [Atom(minus_position, minus_weight)])
    bmap = make_boundary_map(family, phases=tuple(phases))
    return ExtensionTriple(family, window or _default_window(), bmap)


def distinct_position_triple(q: float = 0.5, positions=(0.55, 0.7, 0.85),
                             block: np.ndarray | None = None,
                             window: Window | None = None) -> ExtensionTriple:
    """Distinct positions, unit weights, W' = 1 and V' a unitary block that
    mixes the atoms (discrete Fourier transform by default).

    Distinct positions force any commuting pair diagonal, and the block is
    validated to admit no nonscalar diagonal intertwiner, so the triple is
    irreducible.
    """
    positions = tuple(float(a) for a in positions)
    if len(set(positions)) != len(positions):
        raise ValueError("positions must be pairwise distinct")
    dim = len(positions)
    vprime = dft_matrix(dim) if block is None else np.asarray(block, complex)
    family = AtomFamily(q, [Atom(a) for a in positions],
                        [Atom(a) for a in positions])
    bmap = BoundaryMap(family, vprime, np.eye(dim))
    triple = ExtensionTriple(family, window or _default_window(), bmap)
    report = irreducibility_report(CommutantProblem.from_triple(triple))
    if not report.irreducible:
        raise ValueError(
            "the chosen block leaves a nonscalar diagonal commutant; "
            "pick one that mixes all positions")
    return triple


def repeated_position_triple(q: float = 0.5, position: float = 0.7,
                             multiplicity: int = 2, weight: float = 1.0,
                             window: Window | None = None) -> ExtensionTriple:
    """A position carried by several atoms at once.  The multiplicity block
    commutes with everything, so the triple is deliberately reducible."""
    if multiplicity < 2:
        raise ValueError("repetition needs multiplicity >= 2")
    atoms = [Atom(position, weight) for _ in range(multiplicity)]
    family = AtomFamily(q, atoms, list(atoms))
    eye = np.eye(multiplicity)
    bmap = BoundaryMap(family, eye, eye)
    return ExtensionTriple(family, window or _default_window(), bmap)


def _default_contraction(dim: int = 2) -> np.ndarray:
    return 0.7 * np.eye(dim) + 0.05 * np.eye(dim, k=1)


def two_block_triple(q: float = 0.5, block_positions=(0.6, 0.8),
                     t_block: np.ndarray | None = None,
                     window: Window | None = None) -> ExtensionTriple:
    """Two distinct positions, each carried by a block of atoms, coupled
    through a strict contraction T via the block unitary

        V' = [[T, (1-TT*)^{1/2}], [-(1-T*T)^{1/2}, T*]],   W' = 1.

    Despite both positions being repeated, the triple is irreducible
    whenever nothing but scalars commutes with T and T* together; the
    default T is a Jordan-type contraction with that property, and its
    singular values squared are validated to stay inside [1/3, 2/3].
    """
    t = np.atleast_2d(np.asarray(
        _default_contraction() if t_block is None else t_block, dtype=complex))
    n = t.shape[0]
    if t.shape != (n, n):
        raise ValueError("the contraction block must be square")
    gram_eigs = np.linalg.eigvalsh(t.conj().T @ t)
    if gram_eigs.min() < 1.0 / 3.0 - 1e-12 or gram_eigs.max() > 2.0 / 3.0 + 1e-12:
        raise ValueError(
            f"T*T eigenvalues must lie in [1/3, 2/3], got "
            f"[{gram_eigs.min():.4f}, {gram_eigs.max():.4f}]")
    eye = np.eye(n)
    joint = np.vstack([
        np.hstack([np.kron(eye, t.T) - np.kron(t, eye)]),
        np.hstack([np.kron(eye, t.conj()) - np.kron(t.conj().T, eye)]),
    ])
    basis, _, _ = _null_space(joint)
    if basis.shape[1] != 1:
        raise ValueError("T and T* must have only scalar joint commutants")

    alpha, beta = (float(a) for a in block_positions)
    if alpha == beta:
        raise ValueError("the two block positions must differ")
    atoms = [Atom(alpha) for _ in range(n)] + [Atom(beta) for _ in range(n)]
    family = AtomFamily(q, atoms, list(atoms))
    bmap = BoundaryMap(family, z_block_unitary(t), np.eye(2 * n))
    return ExtensionTriple(family, window or _default_window(), bmap)


CATALOG_KINDS = {
    1: ("balanced single atom", "one atom per sign, aligned phases"),
    2: ("skew single atom", "one atom per sign, unequal data and phases"),
    3: ("transform-coupled distinct positions",
        "distinct positions mixed by a Fourier block; irreducible"),
    4: ("repeated position", "one position with multiplicity two; reducible"),
    5: ("two contraction-coupled blocks",
        "two repeated positions coupled by a Jordan-type contraction; "
        "irreducible"),
}


def build_catalog_triple(kind: int,
                         params: Mapping | None = None) -> ExtensionTriple:
    """Construct catalog example ``kind`` (1 through 5), with optional
    keyword overrides passed through to the underlying constructor."""
    kwargs = dict(params or {})
    if "window" in kwargs and not isinstance(kwargs["window"], Window):
        kwargs["window"] = Window.from_json(kwargs["window"])
    if kind == 1:
        return single_atom_triple(**kwargs)
    if kind == 2:
        defaults = dict(minus_position=0.6, minus_weight=2.0,
                        phases=(0.9, -0.4))
        defaults.update(kwargs)
        return single_atom_triple(**defaults)
    if kind == 3:
        return distinct_position_triple(**kwargs)
    if kind == 4:
        return repeated_position_triple(**kwargs)
    if kind == 5:
        return two_block_triple(**kwargs)
    raise ValueError(f"unknown catalog kind {kind}; choose 1..5")


@dataclass
class CharacterizationReport:
    checks: list[VerificationCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


def characterization_report(triple: ExtensionTriple,
                            tol: float = 1e-12) -> CharacterizationReport:
    """Structural health check of a triple: the lattice data really carries
    the defining relations, the position operator is hermitian with trivial
    kernel, masses decay geometrically, the shift is isometric and the
    difference operator symmetric away from the edges, and the boundary
    matrices are weight isometries."""
    family, window = triple.family, triple.window
    checks: list[VerificationCheck] = []

    min_pos = min((abs(a.position)
                   for s in (+1, -1) for a in family.atoms(s)),
                  default=math.inf)
    checks.append(VerificationCheck(
        "position operator has trivial kernel", min_pos, 1e-15, kind="min",
        detail="smallest unsigned atom position"))

    if min_pos > 1e-15 and window.length >= 4:
        lattice_report = check_relations_lattice(family, window, tol=tol)
        checks.append(VerificationCheck(
            "defining relations hold on the lattice",
            lattice_report.max_residual, tol))

        pmat = matrix_of("P", family, window)
        checks.append(VerificationCheck(
            "position matrix is hermitian",
            _matrix_residual(pmat, pmat.conj().T), tol))

        worst_mass = 0.0
        for sign in (+1, -1):
            for j in range(len(family.atoms(sign))):
                for n in range(window.n_min, window.n_max):
                    ratio = family.weight(sign, j, n + 1) / family.weight(sign, j, n)
                    worst_mass = max(worst_mass, abs(ratio - family.q) / family.q)
        checks.append(VerificationCheck(
            "point masses scale by q per layer", worst_mass, tol))

        order = basis_indices(family, window)
        umat = matrix_of("U", family, window)
        away = [k for k, (sign, j, n) in enumerate(order) if n > window.n_min]
        gram = (umat.conj().T @ umat)[np.ix_(away, away)]
        checks.append(VerificationCheck(
            "shift is isometric away from the window edge",
            float(np.linalg.norm(gram - np.eye(len(away)))), tol))

        xmat = matrix_of("X", family, window)
        interior = [k for k, (sign, j, n) in enumerate(order)
                    if window.is_interior(n)]
        sub = xmat[np.ix_(interior, interior)]
        checks.append(VerificationCheck(
            "difference operator is symmetric on the interior",
            _matrix_residual(sub, sub.conj().T), tol))
    else:
        checks.append(VerificationCheck(
            "defining relations hold on the lattice", math.inf, tol,
            detail="skipped: degenerate positions or window"))

    checks.append(VerificationCheck(
        "boundary matrices are weight isometries",
        triple.bmap.k_isometry_residual(), max(tol, 1e-10)))
    return CharacterizationReport(checks)
