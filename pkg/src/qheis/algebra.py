"""Exact normal forms in the q-deformed Heisenberg algebra.

The algebra is generated by p, x, u, u^-1 over scalars that are Laurent
polynomials in s (s^2 = q) with Gaussian-rational coefficients, subject to

    u p = s^2 p u          u x = s^-2 x u          u u^-1 = u^-1 u = 1
    p x = i s u^-1 - i s^-1 u
    x p = i s^-1 u^-1 - i s u

Every element has a unique normal form: a scalar combination of monomials
p^r u^n (r >= 0) and x^k u^n (k >= 1), n any integer.  All arithmetic here is
exact; nothing in this module touches floating point except ScalarQ.evaluate.

Objects are immutable by convention: operations return new values.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

GENERATOR_LETTERS = ("p", "x", "u", "u^-1")


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class GaussianRational:
    """A complex number re + im*i with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"


_GR_ZERO = GaussianRational()
_GR_ONE = GaussianRational(1)
_GR_I = GaussianRational(0, 1)


def _fmt_fraction(f: Fraction) -> str:
    return str(f)


def _fmt_gaussian(c: GaussianRational) -> str:
    """Render a Gaussian rational; compound values are parenthesized."""
    if not c.im:
        return _fmt_fraction(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        if c.im.denominator == 1:
            return f"{c.im}*i"
        return f"({c.im})*i"
    im_abs = -c.im if c.im < 0 else c.im
    im_part = "i" if im_abs == 1 else (
        f"{im_abs}*i" if im_abs.denominator == 1 else f"({im_abs})*i")
    sign = "-" if c.im < 0 else "+"
    return f"({c.re} {sign} {im_part})"


class ScalarQ:
    """A Laurent polynomial in s with GaussianRational coefficients.

    Stored as a map from the exponent of s to the coefficient.  s stands for
    the square root of the deformation parameter, so q itself is s^2.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, GaussianRational] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                if not isinstance(c, GaussianRational):
                    c = GaussianRational(c)
                if c:
                    clean[int(k)] = c
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarQ is immutable")

    # constructors

    @classmethod
    def zero(cls) -> "ScalarQ":
        return cls()

    @classmethod
    def one(cls) -> "ScalarQ":
        return cls({0: _GR_ONE})

    @classmethod
    def i(cls) -> "ScalarQ":
        return cls({0: _GR_I})

    @classmethod
    def s_power(cls, k: int) -> "ScalarQ":
        return cls({k: _GR_ONE})

    @classmethod
    def rational(cls, num, den=1) -> "ScalarQ":
        return cls({0: GaussianRational(Fraction(num, den))})

    @classmethod
    def gauss(cls, re, im, s_exp: int = 0) -> "ScalarQ":
        return cls({s_exp: GaussianRational(re, im)})

    # queries

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> Iterator[tuple[int, GaussianRational]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, k: int) -> GaussianRational:
        return self._terms.get(k, _GR_ZERO)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarQ):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # arithmetic

    def __add__(self, other: "ScalarQ") -> "ScalarQ":
        terms = dict(self._terms)
        for k, c in other._terms.items():
            acc = terms.get(k)
            terms[k] = c if acc is None else acc + c
        return ScalarQ(terms)

    def __sub__(self, other: "ScalarQ") -> "ScalarQ":
        return self + (-other)

    def __neg__(self) -> "ScalarQ":
        return ScalarQ({k: -c for k, c in self._terms.items()})

    def __mul__(self, other: "ScalarQ") -> "ScalarQ":
        terms: dict[int, GaussianRational] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                prod = c1 * c2
                acc = terms.get(k)
                terms[k] = prod if acc is None else acc + prod
        return ScalarQ(terms)

    def conjugate(self) -> "ScalarQ":
        """Complex conjugation; s is real and stays fixed."""
        return ScalarQ({k: c.conjugate() for k, c in self._terms.items()})

    def substitute_s_inverse(self) -> "ScalarQ":
        """The image under s -> s^-1 (passage to the inverse parameter)."""
        return ScalarQ({-k: c for k, c in self._terms.items()})

    def inverse(self) -> "ScalarQ":
        """Invert a single-term scalar c*s^k.  Multi-term Laurent polynomials
        are not units of the coefficient ring and raise ValueError."""
        if len(self._terms) != 1:
            raise ValueError("only monomial scalars c*s^k are invertible")
        (k, c), = self._terms.items()
        return ScalarQ({-k: c.inverse()})

    def evaluate(self, s_value: complex) -> complex:
        """Numeric value at a concrete s (s = sqrt(q))."""
        total = 0j
        for k, c in self._terms.items():
            total += complex(c) * (s_value ** k)
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items()):
            cs = _fmt_gaussian(c)
            if k == 0:
                parts.append(cs)
            else:
                sk = "s" if k == 1 else f"s^{k}"
                if cs == "1":
                    parts.append(sk)
                elif cs == "-1":
                    parts.append(f"-{sk}")
                else:
                    parts.append(f"{cs}*{sk}")
        return _join_signed(parts)

    def __repr__(self) -> str:
        return f"ScalarQ({self})"


def _join_signed(parts: Sequence[str]) -> str:
    out = parts[0]
    for piece in parts[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


_S = ScalarQ.s_power
_I = ScalarQ.i()
_ONE = ScalarQ.one()


class NormalMonomial:
    """A basis monomial: p^power u^uexp (kind 'p') or x^power u^uexp (kind 'x').

    kind 'p' with power 0 covers the pure u^n monomials; kind 'x' requires
    power >= 1 so each basis element has exactly one spelling.
    """

    __slots__ = ("kind", "power", "uexp")

    def __init__(self, kind: str, power: int, uexp: int):
        if kind not in ("p", "x"):
            raise ValueError(f"kind must be 'p' or 'x', got {kind!r}")
        if power < 0:
            raise ValueError("power must be nonnegative")
        if kind == "x" and power == 0:
            raise ValueError("x-kind monomials need power >= 1; use kind 'p'")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "power", int(power))
        object.__setattr__(self, "uexp", int(uexp))

    def __setattr__(self, name, value):
        raise AttributeError("NormalMonomial is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalMonomial):
            return NotImplemented
        return (self.kind, self.power, self.uexp) == (other.kind, other.power, other.uexp)

    def __hash__(self) -> int:
        return hash((self.kind, self.power, self.uexp))

    def sort_key(self) -> tuple:
        return (0 if self.kind == "p" else 1, self.power, self.uexp)

    def word(self) -> tuple[str, ...]:
        """A free word whose reduction is exactly this monomial."""
        letters: list[str] = [self.kind] * self.power
        if self.uexp >= 0:
            letters += ["u"] * self.uexp
        else:
            letters += ["u^-1"] * (-self.uexp)
        return tuple(letters)

    @property
    def degree(self) -> int:
        return self.power + abs(self.uexp)

    def __str__(self) -> str:
        pieces = []
        if self.power:
            pieces.append(self.kind if self.power == 1 else f"{self.kind}^{self.power}")
        if self.uexp:
            pieces.append("u" if self.uexp == 1 else f"u^{self.uexp}")
        return "*".join(pieces) if pieces else "1"

    def __repr__(self) -> str:
        return f"NormalMonomial({self})"


_UNIT_MONO = NormalMonomial("p", 0, 0)


class AlgebraElement:
    """A finite scalar combination of NormalMonomials."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[NormalMonomial, ScalarQ] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = c
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    # constructors

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls()

    @classmethod
    def one(cls) -> "AlgebraElement":
        return cls({_UNIT_MONO: _ONE})

    @classmethod
    def from_scalar(cls, c: ScalarQ) -> "AlgebraElement":
        return cls({_UNIT_MONO: c})

    @classmethod
    def generator(cls, letter: str) -> "AlgebraElement":
        if letter == "p":
            return cls({NormalMonomial("p", 1, 0): _ONE})
        if letter == "x":
            return cls({NormalMonomial("x", 1, 0): _ONE})
        if letter == "u":
            return cls({NormalMonomial("p", 0, 1): _ONE})
        if letter == "u^-1":
            return cls({NormalMonomial("p", 0, -1): _ONE})
        raise ValueError(f"unknown generator {letter!r}")

    @classmethod
    def monomial(cls, m: NormalMonomial, c: ScalarQ | None = None) -> "AlgebraElement":
        return cls({m: c if c is not None else _ONE})

    # queries

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> Iterator[tuple[NormalMonomial, ScalarQ]]:
        return iter(sorted(self._terms.items(), key=lambda mc: mc[0].sort_key()))

    def coefficient(self, m: NormalMonomial) -> ScalarQ:
        return self._terms.get(m, ScalarQ.zero())

    @property
    def degree(self) -> int:
        """Max generator-word length over the support; 0 for scalars."""
        return max((m.degree for m in self._terms), default=0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # arithmetic

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        terms = dict(self._terms)
        for m, c in other._terms.items():
            acc = terms.get(m)
            terms[m] = c if acc is None else acc + c
        return AlgebraElement(terms)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement({m: -c for m, c in self._terms.items()})

    def scale(self, c: ScalarQ) -> "AlgebraElement":
        return AlgebraElement({m: c * cm for m, cm in self._terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def __pow__(self, n: int) -> "AlgebraElement":
        if n < 0:
            raise ValueError("negative powers are not defined on elements")
        out = AlgebraElement.one()
        for _ in range(n):
            out = multiply(out, self)
        return out

    def star(self) -> "AlgebraElement":
        return star(self)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            mono = str(m)
            if mono == "1":
                cs = str(c)
                parts.append(f"({cs})" if len(c._terms) > 1 else cs)
                continue
            if len(c._terms) > 1:
                parts.append(f"({c})*{mono}")
                continue
            cs = str(c)
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return _join_signed(parts)

    def __repr__(self) -> str:
        return f"AlgebraElement({self})"


# The rewrite system.  Each adjacent pair maps to a list of (scalar, letters)
# replacements; the two mixed pairs split into a sum of two u-monomials.
_PAIR_RULES: dict[tuple[str, str], list[tuple[ScalarQ, tuple[str, ...]]]] = {
    ("u", "p"): [(_S(2), ("p", "u"))],
    ("u^-1", "p"): [(_S(-2), ("p", "u^-1"))],
    ("u", "x"): [(_S(-2), ("x", "u"))],
    ("u^-1", "x"): [(_S(2), ("x", "u^-1"))],
    ("u", "u^-1"): [(_ONE, ())],
    ("u^-1", "u"): [(_ONE, ())],
    ("p", "x"): [(_I * _S(1), ("u^-1",)), (-(_I * _S(-1)), ("u",))],
    ("x", "p"): [(_I * _S(-1), ("u^-1",)), (-(_I * _S(1)), ("u",))],
}


def _applicable_positions(word: tuple[str, ...]) -> list[int]:
    return [k for k in range(len(word) - 1) if (word[k], word[k + 1]) in _PAIR_RULES]


def _classify_normal(word: tuple[str, ...]) -> NormalMonomial:
    r = sum(1 for w in word if w == "p")
    k = sum(1 for w in word if w == "x")
    n = sum(1 for w in word if w == "u") - sum(1 for w in word if w == "u^-1")
    if r and k:
        raise AssertionError(f"word not normal: {word}")
    if k:
        return NormalMonomial("x", k, n)
    return NormalMonomial("p", r, n)


def reduce(word: Sequence[str], coeff: ScalarQ | None = None,
           rng: random.Random | None = None) -> AlgebraElement:
    """Rewrite a free word to its normal form.

    By default rules are applied at the leftmost admissible position.  Passing
    an rng picks a random admissible position at every step instead; the basis
    property of the normal form means the result must not depend on the order,
    which the tests exercise directly.
    """
    for letter in word:
        if letter not in GENERATOR_LETTERS:
            raise ValueError(f"unknown letter {letter!r}")
    if coeff is None:
        coeff = _ONE
    acc: dict[NormalMonomial, ScalarQ] = {}
    stack: list[tuple[tuple[str, ...], ScalarQ]] = [(tuple(word), coeff)]
    while stack:
        w, c = stack.pop()
        if not c:
            continue
        positions = _applicable_positions(w)
        if not positions:
            m = _classify_normal(w)
            old = acc.get(m)
            acc[m] = c if old is None else old + c
            continue
        pos = rng.choice(positions) if rng is not None else positions[0]
        for factor, repl in _PAIR_RULES[(w[pos], w[pos + 1])]:
            stack.append((w[:pos] + repl + w[pos + 2:], c * factor))
    return AlgebraElement(acc)


def reduce_all_orders(word: Sequence[str], coeff: ScalarQ | None = None,
                      limit: int = 200000) -> set[AlgebraElement]:
    """Exhaust every admissible rewrite order of a (short) word.

    Returns the set of distinct final elements; confluence means the set has
    size one.  Exponential in word length, meant for words of length <= 5.
    """
    if coeff is None:
        coeff = _ONE
    results: set[AlgebraElement] = set()

    def walk(pending: list[tuple[tuple[str, ...], ScalarQ]],
             acc: AlgebraElement, budget: list[int]) -> None:
        if budget[0] <= 0:
            raise RuntimeError("reduce_all_orders budget exhausted")
        budget[0] -= 1
        if not pending:
            results.add(acc)
            return
        w, c = pending[0]
        rest = pending[1:]
        positions = _applicable_positions(w)
        if not positions:
            walk(rest, acc + AlgebraElement({_classify_normal(w): c}), budget)
            return
        for pos in positions:
            branches = [(w[:pos] + repl + w[pos + 2:], c * factor)
                        for factor, repl in _PAIR_RULES[(w[pos], w[pos + 1])]]
            walk(branches + rest, acc, budget)

    walk([(tuple(word), coeff)], AlgebraElement.zero(), [limit])
    return results


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product in the algebra: concatenate representing words and reduce."""
    acc: dict[NormalMonomial, ScalarQ] = {}
    for ma, ca in a._terms.items():
        wa = ma.word()
        for mb, cb in b._terms.items():
            piece = reduce(wa + mb.word(), ca * cb)
            for m, c in piece._terms.items():
                old = acc.get(m)
                acc[m] = c if old is None else old + c
    return AlgebraElement(acc)


_STAR_LETTER = {"p": "p", "x": "x", "u": "u^-1", "u^-1": "u"}


def star(a: AlgebraElement) -> AlgebraElement:
    """The involution: antilinear, reverses products, fixes p and x, and
    sends u to u^-1.  Coefficients are conjugated; s itself is real."""
    out = AlgebraElement.zero()
    for m, c in a._terms.items():
        rev = tuple(_STAR_LETTER[letter] for letter in reversed(m.word()))
        out = out + reduce(rev, c.conjugate())
    return out


def inverse_q_iso(a: AlgebraElement, which: int) -> AlgebraElement:
    """Map an element to the algebra at the inverse parameter.

    Two standard *-isomorphisms are supported.  Variant 1 swaps p and x and
    fixes u; variant 2 fixes p and x and sends u to -u^-1 (hence u^-1 to -u).
    In both, coefficients undergo s -> s^-1, re-expressing them in terms of
    the target algebra's own deformation root.
    """
    if which == 1:
        images = {
            "p": AlgebraElement.generator("x"),
            "x": AlgebraElement.generator("p"),
            "u": AlgebraElement.generator("u"),
            "u^-1": AlgebraElement.generator("u^-1"),
        }
    elif which == 2:
        images = {
            "p": AlgebraElement.generator("p"),
            "x": AlgebraElement.generator("x"),
            "u": -AlgebraElement.generator("u^-1"),
            "u^-1": -AlgebraElement.generator("u"),
        }
    else:
        raise ValueError("which must be 1 or 2")
    out = AlgebraElement.zero()
    for m, c in a._terms.items():
        piece = AlgebraElement.from_scalar(c.substitute_s_inverse())
        for letter in m.word():
            piece = multiply(piece, images[letter])
        out = out + piece
    return out


def random_word(rng: random.Random, max_len: int = 8) -> tuple[str, ...]:
    n = rng.randint(0, max_len)
    return tuple(rng.choice(GENERATOR_LETTERS) for _ in range(n))


def random_element(rng: random.Random, max_terms: int = 3,
                   max_len: int = 5) -> AlgebraElement:
    """A small random element, for property tests."""
    out = AlgebraElement.zero()
    for _ in range(rng.randint(1, max_terms)):
        c = ScalarQ.gauss(rng.randint(-3, 3), rng.randint(-3, 3),
                          rng.randint(-2, 2))
        out = out + reduce(random_word(rng, max_len), c)
    return out
