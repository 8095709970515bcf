"""Exact arithmetic in the cohomology ring of a twistor space over #n(-CP^2).

The ring is generated in degree 2 by ``w`` (omega) and ``e1 .. en`` (eta_i).
Every class is kept in a normal form over the basis

    degree 0: 1
    degree 2: w, e1, ..., en
    degree 4: w^2, w*e1, ..., w*en
    degree 6: pt

Raw monomials are reduced by the rules

    e_i * e_j  -> 0                      (i != j)
    e_i^2      -> -w^2 - sum_j w*e_j
    degree > 6 -> 0
    w^3        -> (1 - n) pt
    w^2 * e_i  -> pt

Basis elements are addressed by ``(degree, index)`` keys, where the degree is
counted in units of 2 (so ``pt`` is ``(3, 0)``) and index 0 is the pure power
of ``w`` while index ``i >= 1`` refers to ``e_i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]
Key = tuple[int, int]

TOP_DEGREE = 3  # complex dimension; real degree 6
ONE: Key = (0, 0)
PT: Key = (3, 0)


class PresentationMismatch(ValueError):
    """Raised when classes from rings with different presentations meet."""


def _clean(c: Scalar) -> Scalar:
    if type(c) is not int and c.denominator == 1:
        return int(c.numerator)
    return c


@dataclass(frozen=True)
class RingPresentation:
    """The generator count ``n`` plus the fixed rewrite rules.

    ``omega_sq_eta`` is the value of ``w^2 * e_i`` against the fundamental
    class.  Anything other than 1 breaks the presentation on purpose and only
    exists so verification code can be checked against a known-bad ring.
    """

    n: int
    omega_sq_eta: int = 1

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"number of eta generators must be >= 0, got {self.n}")

    @property
    def omega_cubed(self) -> int:
        return 1 - self.n

    @property
    def corrupted(self) -> bool:
        return self.omega_sq_eta != 1

    def basis(self, degree: int) -> list[Key]:
        if degree in (0, 3):
            return [(degree, 0)]
        if degree in (1, 2):
            return [(degree, i) for i in range(self.n + 1)]
        return []


@dataclass(frozen=True)
class Monomial:
    """A raw product ``w^omega_power * prod e_i^eta_powers[i-1]``."""

    omega_power: int
    eta_powers: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta_powers", tuple(self.eta_powers))
        if self.omega_power < 0 or any(p < 0 for p in self.eta_powers):
            raise ValueError("monomial exponents must be nonnegative")

    @property
    def degree(self) -> int:
        """Real degree."""
        return 2 * (self.omega_power + sum(self.eta_powers))

    @classmethod
    def of(cls, n: int, omega: int = 0, **etas: int) -> "Monomial":
        """``Monomial.of(3, omega=1, e2=2)`` is ``w * e2^2`` in a ring with n=3."""
        powers = [0] * n
        for name, p in etas.items():
            i = int(name[1:])
            if not 1 <= i <= n:
                raise ValueError(f"no generator {name} when n={n}")
            powers[i - 1] = p
        return cls(omega, tuple(powers))


def _key_to_monomial(key: Key, n: int) -> Monomial:
    deg, idx = key
    powers = [0] * n
    if idx:
        powers[idx - 1] = 1
    return Monomial(deg - (1 if idx else 0), tuple(powers))


@lru_cache(maxsize=None)
def _reduce(omega: int, eta: int, eta_power: int, ring: RingPresentation) -> tuple[tuple[Key, Scalar], ...]:
    """Normal form of ``w^omega * e_eta^eta_power`` (eta == 0 means no eta factor)."""
    if omega + eta_power > TOP_DEGREE:
        return ()
    if eta == 0 or eta_power == 0:
        if omega == 3:
            return ((PT, ring.omega_cubed),) if ring.omega_cubed else ()
        return (((omega, 0), 1),)
    if eta_power == 1:
        if omega == 2:
            return ((PT, ring.omega_sq_eta),) if ring.omega_sq_eta else ()
        return (((omega + 1, eta), 1),)
    # e_i^2 -> -w^2 - sum_j w*e_j, which strictly lowers the eta degree
    acc: dict[Key, Scalar] = {}
    rest = eta_power - 2
    for key, c in _reduce(omega + 2, eta, rest, ring):
        acc[key] = acc.get(key, 0) - c
    for j in range(1, ring.n + 1):
        if j == eta:
            terms = _reduce(omega + 1, eta, rest + 1, ring)
        elif rest == 0:
            terms = _reduce(omega + 1, j, 1, ring)
        else:
            terms = ()  # e_j * e_eta = 0
        for key, c in terms:
            acc[key] = acc.get(key, 0) - c
    return tuple((k, c) for k, c in sorted(acc.items()) if c)


def reduce_monomial(m: Monomial, ring: RingPresentation) -> dict[Key, Scalar]:
    if len(m.eta_powers) != ring.n:
        raise PresentationMismatch(
            f"monomial has {len(m.eta_powers)} eta exponents, ring has n={ring.n}"
        )
    if m.degree > 2 * TOP_DEGREE:
        return {}
    nonzero = [(i + 1, p) for i, p in enumerate(m.eta_powers) if p]
    if len(nonzero) > 1:
        return {}
    eta, power = nonzero[0] if nonzero else (0, 0)
    return dict(_reduce(m.omega_power, eta, power, ring))


class CohomologyClass:
    """An immutable element of the cohomology ring in normal form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingPresentation, terms: Mapping[Key, Scalar] | None = None):
        self.ring = ring
        # unordered; render() and iteration helpers sort by key
        self.terms: dict[Key, Scalar] = {k: _clean(c) for k, c in (terms or {}).items() if c}
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, ring: RingPresentation) -> "CohomologyClass":
        return cls(ring)

    @classmethod
    def scalar(cls, ring: RingPresentation, c: Scalar) -> "CohomologyClass":
        return cls(ring, {ONE: c})

    @classmethod
    def omega(cls, ring: RingPresentation) -> "CohomologyClass":
        return cls(ring, {(1, 0): 1})

    @classmethod
    def eta(cls, ring: RingPresentation, i: int) -> "CohomologyClass":
        if not 1 <= i <= ring.n:
            raise PresentationMismatch(f"generator e{i} does not exist when n={ring.n}")
        return cls(ring, {(1, i): 1})

    @classmethod
    def point(cls, ring: RingPresentation) -> "CohomologyClass":
        return cls(ring, {PT: 1})

    # queries
    def component(self, degree: int) -> "CohomologyClass":
        return CohomologyClass(self.ring, {k: c for k, c in self.terms.items() if k[0] == degree})

    def degrees(self) -> set[int]:
        return {k[0] for k in self.terms}

    def is_homogeneous(self, degree: int) -> bool:
        return self.degrees() <= {degree}

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def coefficient(self, key: Key) -> Scalar:
        return self.terms.get(key, 0)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohomologyClass):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = CohomologyClass.scalar(self.ring, other)
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"CohomologyClass(n={self.ring.n}, {render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    # arithmetic
    def _coerce(self, other) -> "CohomologyClass":
        if isinstance(other, CohomologyClass):
            return other
        if isinstance(other, (int, Fraction)):
            return CohomologyClass.scalar(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return scalar_mul(-1, self)

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, scalar_mul(-1, other))

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(other, scalar_mul(-1, self))

    def __mul__(self, other):
        if isinstance(other, CohomologyClass):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return scalar_mul(other, self)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return scalar_mul(Fraction(1) / other, self)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = CohomologyClass.scalar(self.ring, 1)
        for _ in range(e):
            result = mul(result, self)
        return result


def _check(a: CohomologyClass, b: CohomologyClass) -> None:
    if a.ring is not b.ring and a.ring != b.ring:
        raise PresentationMismatch(f"classes live in different rings: {a.ring} vs {b.ring}")


def normalize(raw: Mapping[Monomial, Scalar] | Iterable[tuple[Monomial, Scalar]],
              ring: RingPresentation) -> CohomologyClass:
    """Reduce a formal combination of raw monomials to normal form."""
    items = raw.items() if isinstance(raw, Mapping) else raw
    acc: dict[Key, Scalar] = {}
    for mono, c in items:
        if not c:
            continue
        for key, v in reduce_monomial(mono, ring).items():
            acc[key] = acc.get(key, 0) + c * v
    return CohomologyClass(ring, acc)


def as_raw(a: CohomologyClass) -> dict[Monomial, Scalar]:
    """The class as a combination of raw monomials (``pt`` becomes ``w^2*e1``
    when n >= 1, and ``w^3`` otherwise)."""
    n = a.ring.n
    out: dict[Monomial, Scalar] = {}
    for key, c in a.terms.items():
        if key == PT:
            if n >= 1 and a.ring.omega_sq_eta == 1:
                mono = Monomial.of(n, omega=2, e1=1)
            elif n == 0:
                mono = Monomial(3, ())
            else:
                raise ValueError("pt has no raw representative in a corrupted ring")
        else:
            mono = _key_to_monomial(key, n)
        out[mono] = out.get(mono, 0) + c
    return out


@lru_cache(maxsize=None)
def _basis_product(k1: Key, k2: Key, ring: RingPresentation) -> tuple[tuple[Key, Scalar], ...]:
    if k1[0] + k2[0] > TOP_DEGREE:
        return ()
    if k1 == ONE:
        return ((k2, 1),)
    if k2 == ONE:
        return ((k1, 1),)
    m1, m2 = _key_to_monomial(k1, ring.n), _key_to_monomial(k2, ring.n)
    prod = Monomial(m1.omega_power + m2.omega_power,
                    tuple(x + y for x, y in zip(m1.eta_powers, m2.eta_powers)))
    return tuple(reduce_monomial(prod, ring).items())


@lru_cache(maxsize=None)
def multiplication_table(ring: RingPresentation) -> dict[tuple[Key, Key], tuple[tuple[Key, Scalar], ...]]:
    """Normal forms of all products of two basis elements."""
    keys = [k for d in range(TOP_DEGREE + 1) for k in ring.basis(d)]
    return {(k1, k2): _basis_product(k1, k2, ring) for k1 in keys for k2 in keys}


def mul(a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    _check(a, b)
    table = multiplication_table(a.ring)
    acc: dict[Key, Scalar] = {}
    get = acc.get
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            c = c1 * c2
            for key, v in table[k1, k2]:
                acc[key] = get(key, 0) + c * v
    return CohomologyClass(a.ring, acc)


def add(a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    _check(a, b)
    acc = dict(a.terms)
    for key, c in b.terms.items():
        acc[key] = acc.get(key, 0) + c
    return CohomologyClass(a.ring, acc)


def scalar_mul(c: Scalar, a: CohomologyClass) -> CohomologyClass:
    return CohomologyClass(a.ring, {k: c * v for k, v in a.terms.items()})


def integrate(a: CohomologyClass) -> Fraction:
    """Evaluate against the fundamental class (the ``pt`` coefficient)."""
    return Fraction(a.coefficient(PT))


def pairing(a: CohomologyClass, b: CohomologyClass) -> Fraction:
    """``integrate(mul(a, b))`` without forming the lower-degree parts."""
    _check(a, b)
    table = multiplication_table(a.ring)
    total: Scalar = 0
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            if k1[0] + k2[0] == TOP_DEGREE:
                for _, v in table[k1, k2]:
                    total += c1 * c2 * v
    return Fraction(total)


# -- rendering ---------------------------------------------------------------

def basis_name(key: Key) -> str:
    deg, idx = key
    if key == PT:
        return "pt"
    if deg == 0:
        return "1"
    w = "w" if deg - (1 if idx else 0) == 1 else ("w^2" if deg - (1 if idx else 0) == 2 else "")
    e = f"e{idx}" if idx else ""
    return "*".join(p for p in (w, e) if p)


def _render_coeff(c: Scalar) -> str:
    return str(abs(c)) if isinstance(c, int) else f"{abs(c.numerator)}/{c.denominator}"


def render(a: CohomologyClass) -> str:
    """Canonical text, e.g. ``3*w^2 + 2*w*e1 - 1*pt``."""
    if not a.terms:
        return "0"
    parts = []
    for i, (key, c) in enumerate(sorted(a.terms.items())):
        body = _render_coeff(c) if key == ONE else f"{_render_coeff(c)}*{basis_name(key)}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


_TERM = re.compile(
    r"\s*([+-])?\s*(\d+)(?:/(\d+))?(?:\*(pt|w\^2\*e\d+|w\*e\d+|w\^2|w|e\d+))?\s*"
)


def parse_class(text: str, ring: RingPresentation) -> CohomologyClass:
    """Inverse of :func:`render`."""
    text = text.strip()
    if text == "0":
        return CohomologyClass.zero(ring)
    names = {basis_name(k): k for d in range(TOP_DEGREE + 1) for k in ring.basis(d)}
    acc: dict[Key, Scalar] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(1) is None and not first):
            raise ValueError(f"cannot parse class text at offset {pos}: {text!r}")
        sign, num, den, name = m.groups()
        c: Scalar = Fraction(int(num), int(den)) if den else int(num)
        if sign == "-":
            c = -c
        if name is None:
            key = ONE
        elif name in names:
            key = names[name]
        else:
            raise ValueError(f"unknown basis element {name!r} for n={ring.n}")
        acc[key] = acc.get(key, 0) + c
        pos = m.end()
        first = False
    return CohomologyClass(ring, acc)
