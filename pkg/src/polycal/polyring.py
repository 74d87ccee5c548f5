"""Exact sparse multivariate polynomial arithmetic over the integers and rationals.

Values are built from three immutable layers:

  VarId       a variable, either x<k> (problem variables) or y<k>
              (definition variables introduced by extension axioms)
  Monomial    a finite product of variables with positive integer exponents
  Polynomial  a finite sum of monomials with nonzero coefficients

Coefficients are plain Python ints whenever they are integral and
``fractions.Fraction`` (always in lowest terms) otherwise, so structural
equality of polynomials coincides with mathematical equality.  The zero
polynomial is the empty term map; its degree is the sentinel -1.

Term order is graded lexicographic: higher total degree first, ties broken
at the earliest variable with differing exponent (variables are ordered
x1 < x2 < ... < y1 < y2 < ...; a larger exponent there wins).  The order
fixes serialization and display, and makes reduction deterministic.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

Scalar = Union[int, Fraction]

_VAR_NAME_RE = re.compile(r"^([xy])([1-9][0-9]*)$")
_SCALAR_RE = re.compile(r"^(-?[0-9]+)(?:/([0-9]+))?$")


class FormatError(ValueError):
    """Raised when serialized input is malformed or not in canonical form."""


class UnboundVariable(KeyError):
    """Raised when evaluation hits a variable missing from the assignment."""


def as_scalar(value: Scalar) -> Scalar:
    """Normalize a coefficient: Fractions with denominator 1 become ints."""
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    if isinstance(value, int):
        return value
    raise TypeError(f"not an exact scalar: {value!r}")


def scalar_to_str(value: Scalar) -> str:
    """Canonical decimal form: ``p`` for integers, ``p/q`` in lowest terms."""
    value = as_scalar(value)
    if isinstance(value, int):
        return str(value)
    return f"{value.numerator}/{value.denominator}"


def scalar_from_str(text: str) -> Scalar:
    """Parse a canonical scalar string, rejecting unreduced or padded forms."""
    if not isinstance(text, str):
        raise FormatError(f"scalar must be a string, got {text!r}")
    m = _SCALAR_RE.match(text)
    if m is None:
        raise FormatError(f"malformed scalar {text!r}")
    num_text, den_text = m.group(1), m.group(2)
    if num_text != str(int(num_text)):  # rejects -0 and leading zeros
        raise FormatError(f"non-canonical integer {text!r}")
    num = int(num_text)
    if den_text is None:
        return num
    den = int(den_text)
    if den_text != str(den) or den == 0:
        raise FormatError(f"non-canonical denominator in {text!r}")
    if den == 1:
        raise FormatError(f"denominator 1 must be written as an integer: {text!r}")
    frac = Fraction(num, den)
    if frac.denominator != den:
        raise FormatError(f"fraction not in lowest terms: {text!r}")
    return frac


def ceil_log2(n: int) -> int:
    """Smallest k with 2**k >= n, for n >= 1.  ceil_log2(1) == 0."""
    if n < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {n}")
    return (n - 1).bit_length()


def scalar_bits(value: Scalar) -> int:
    """Bit cost of a coefficient: ceil_log2|num| + ceil_log2 den; 0 for 0."""
    value = as_scalar(value)
    if value == 0:
        return 0
    if isinstance(value, int):
        return ceil_log2(abs(value))
    return ceil_log2(abs(value.numerator)) + ceil_log2(value.denominator)


class VarId(NamedTuple):
    """A variable name.  kind is "x" or "y"; index starts at 1.

    Tuple ordering gives the global variable order: all x's before all
    y's, each family by index.
    """

    kind: str
    index: int

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"

    def __repr__(self) -> str:  # keep reprs short in test output
        return self.name


def xvar(index: int) -> VarId:
    if index < 1:
        raise ValueError(f"variable index must be >= 1, got {index}")
    return VarId("x", index)


def yvar(index: int) -> VarId:
    if index < 1:
        raise ValueError(f"variable index must be >= 1, got {index}")
    return VarId("y", index)


def parse_var(name: str) -> VarId:
    m = _VAR_NAME_RE.match(name) if isinstance(name, str) else None
    if m is None:
        raise FormatError(f"malformed variable name {name!r}")
    return VarId(m.group(1), int(m.group(2)))


class Monomial:
    """A product of variables with positive exponents; immutable and hashable."""

    __slots__ = ("_pairs", "_degree", "_hash")

    def __init__(self, pairs: Iterable[tuple[VarId, int]] = ()):
        merged: dict[VarId, int] = {}
        for var, exp in pairs:
            if exp < 0:
                raise ValueError(f"negative exponent for {var.name}")
            if exp:
                merged[var] = merged.get(var, 0) + exp
        items = tuple(sorted(merged.items()))
        object.__setattr__(self, "_pairs", items)
        object.__setattr__(self, "_degree", sum(e for _, e in items))
        object.__setattr__(self, "_hash", hash(items))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Monomial is immutable")

    @staticmethod
    def one() -> Monomial:
        return _MONO_ONE

    @staticmethod
    def of(var: VarId, exp: int = 1) -> Monomial:
        return Monomial(((var, exp),))

    @property
    def pairs(self) -> tuple[tuple[VarId, int], ...]:
        return self._pairs

    @property
    def degree(self) -> int:
        return self._degree

    def is_one(self) -> bool:
        return not self._pairs

    def exponent(self, var: VarId) -> int:
        for v, e in self._pairs:
            if v == var:
                return e
        return 0

    def variables(self) -> tuple[VarId, ...]:
        return tuple(v for v, _ in self._pairs)

    def times(self, other: Monomial) -> Monomial:
        if not other._pairs:
            return self
        if not self._pairs:
            return other
        return Monomial(self._pairs + other._pairs)

    def times_var(self, var: VarId, exp: int = 1) -> Monomial:
        return Monomial(self._pairs + ((var, exp),))

    def without(self, var: VarId, exp: int = 1) -> Monomial:
        """Divide by var**exp; raises if the exponent would go negative."""
        current = self.exponent(var)
        if current < exp:
            raise ValueError(f"{self} is not divisible by {var.name}^{exp}")
        return Monomial(
            tuple((v, e - exp if v == var else e) for v, e in self._pairs)
        )

    def factor_sequence(self) -> Iterator[VarId]:
        """Variables with multiplicity, in canonical order (x1, x1, x2, ...)."""
        for var, exp in self._pairs:
            for _ in range(exp):
                yield var

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and self._pairs == other._pairs

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Monomial) -> bool:
        # graded lex: degree first, then earliest differing variable.
        if self._degree != other._degree:
            return self._degree < other._degree
        a, b = self._pairs, other._pairs
        i = j = 0
        while i < len(a) and j < len(b):
            (va, ea), (vb, eb) = a[i], b[j]
            if va == vb:
                if ea != eb:
                    return ea < eb
                i += 1
                j += 1
            elif va < vb:
                return False  # self owns the earlier variable
            else:
                return True
        return i == len(a) and j < len(b)

    def __repr__(self) -> str:
        if not self._pairs:
            return "1"
        return "*".join(
            v.name if e == 1 else f"{v.name}^{e}" for v, e in self._pairs
        )


_MONO_ONE = Monomial()


class Polynomial:
    """An immutable sparse polynomial: a map from Monomial to nonzero Scalar."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Iterable[tuple[Monomial, Scalar]] = ()):
        acc: dict[Monomial, Scalar] = {}
        for mono, coef in terms:
            coef = as_scalar(coef)
            if coef == 0:
                continue
            new = acc.get(mono, 0) + coef
            if new == 0:
                acc.pop(mono, None)
            else:
                acc[mono] = as_scalar(new)
        object.__setattr__(self, "_terms", acc)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Polynomial is immutable")

    @staticmethod
    def _wrap(terms: dict[Monomial, Scalar]) -> Polynomial:
        """Adopt an already-normalized term dict without copying."""
        poly = Polynomial.__new__(Polynomial)
        object.__setattr__(poly, "_terms", terms)
        object.__setattr__(poly, "_hash", None)
        return poly

    @staticmethod
    def zero() -> Polynomial:
        return _POLY_ZERO

    @staticmethod
    def constant(value: Scalar) -> Polynomial:
        value = as_scalar(value)
        if value == 0:
            return _POLY_ZERO
        return Polynomial._wrap({_MONO_ONE: value})

    @staticmethod
    def variable(var: VarId) -> Polynomial:
        return Polynomial._wrap({Monomial.of(var): 1})

    @staticmethod
    def from_terms(terms: Iterable[tuple[Monomial, Scalar]]) -> Polynomial:
        return Polynomial(terms)

    # -- structure ---------------------------------------------------------

    @property
    def term_map(self) -> Mapping[Monomial, Scalar]:
        return self._terms

    def terms(self) -> list[tuple[Monomial, Scalar]]:
        """Terms in canonical (descending graded-lex) order."""
        return [(m, self._terms[m]) for m in sorted(self._terms, reverse=True)]

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m.is_one() for m in self._terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self._terms.get(_MONO_ONE, 0)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(m.degree for m in self._terms)

    def coefficient(self, mono: Monomial) -> Scalar:
        return self._terms.get(mono, 0)

    def variables(self) -> tuple[VarId, ...]:
        seen: set[VarId] = set()
        for mono in self._terms:
            seen.update(mono.variables())
        return tuple(sorted(seen))

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    # -- arithmetic --------------------------------------------------------

    def add(self, other: Polynomial) -> Polynomial:
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for mono, coef in other._terms.items():
            new = acc.get(mono, 0) + coef
            if new == 0:
                acc.pop(mono, None)
            else:
                acc[mono] = as_scalar(new)
        return Polynomial._wrap(acc)

    def neg(self) -> Polynomial:
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def sub(self, other: Polynomial) -> Polynomial:
        return self.add(other.neg())

    def scale(self, factor: Scalar) -> Polynomial:
        factor = as_scalar(factor)
        if factor == 0:
            return _POLY_ZERO
        if factor == 1:
            return self
        return Polynomial._wrap(
            {m: as_scalar(c * factor) for m, c in self._terms.items()}
        )

    def mul_term(self, mono: Monomial, coef: Scalar = 1) -> Polynomial:
        coef = as_scalar(coef)
        if coef == 0:
            return _POLY_ZERO
        if mono.is_one():
            return self.scale(coef)
        return Polynomial._wrap(
            {m.times(mono): as_scalar(c * coef) for m, c in self._terms.items()}
        )

    def mul_var(self, var: VarId) -> Polynomial:
        return self.mul_term(Monomial.of(var))

    def mul(self, other: Polynomial) -> Polynomial:
        if not self._terms or not other._terms:
            return _POLY_ZERO
        if len(self._terms) > len(other._terms):
            self, other = other, self
        acc: dict[Monomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = m1.times(m2)
                new = acc.get(mono, 0) + c1 * c2
                if new == 0:
                    acc.pop(mono, None)
                else:
                    acc[mono] = as_scalar(new)
        return Polynomial._wrap(acc)

    def square(self) -> Polynomial:
        return self.mul(self)

    def substitute(self, bindings: Mapping[VarId, Polynomial]) -> Polynomial:
        """Simultaneously replace variables by polynomials."""
        if not bindings:
            return self
        power_cache: dict[tuple[VarId, int], Polynomial] = {}

        def power(var: VarId, exp: int) -> Polynomial:
            key = (var, exp)
            got = power_cache.get(key)
            if got is None:
                got = bindings[var]
                for _ in range(exp - 1):
                    got = got.mul(bindings[var])
                power_cache[key] = got
            return got

        result = _POLY_ZERO
        for mono, coef in self._terms.items():
            residual: list[tuple[VarId, int]] = []
            piece = Polynomial.constant(coef)
            for var, exp in mono.pairs:
                if var in bindings:
                    piece = piece.mul(power(var, exp))
                else:
                    residual.append((var, exp))
            if residual:
                piece = piece.mul_term(Monomial(residual))
            result = result.add(piece)
        return result

    def evaluate(self, assignment: Mapping[VarId, Scalar]) -> Scalar:
        """Exact value at a point; every variable of self must be bound."""
        total: Scalar = 0
        for mono, coef in self._terms.items():
            value = coef
            for var, exp in mono.pairs:
                if var not in assignment:
                    raise UnboundVariable(var.name)
                value *= assignment[var] ** exp
            total += value
        return as_scalar(total)

    # -- measures ----------------------------------------------------------

    def bit_size(self) -> int:
        """Sum of coefficient bit costs; the zero polynomial has size 0."""
        return sum(scalar_bits(c) for c in self._terms.values())

    def denominator_product(self) -> int:
        """Product of all coefficient denominators (1 for integral polys)."""
        product = 1
        for coef in self._terms.values():
            if isinstance(coef, Fraction):
                product *= coef.denominator
        return product

    def denominator_lcm(self) -> int:
        """Least positive integer clearing all coefficient denominators."""
        out = 1
        for coef in self._terms.values():
            if isinstance(coef, Fraction):
                out = out * coef.denominator // _gcd(out, coef.denominator)
        return out

    # -- dunder sugar ------------------------------------------------------

    def __add__(self, other: Polynomial) -> Polynomial:
        return self.add(other)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self.sub(other)

    def __neg__(self) -> Polynomial:
        return self.neg()

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, Polynomial):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other: Scalar) -> Polynomial:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polynomial) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash(frozenset(self._terms.items()))
            )
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        chunks: list[str] = []
        for mono, coef in self.terms():
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if mono.is_one():
                body = scalar_to_str(mag)
            elif mag == 1:
                body = repr(mono)
            else:
                body = f"{scalar_to_str(mag)}*{mono!r}"
            chunks.append(f"{sign} {body}" if chunks else
                          (f"-{body}" if sign == "-" else body))
        return " ".join(chunks)


_POLY_ZERO = Polynomial()


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def boolean_axiom(var: VarId) -> Polynomial:
    """The polynomial var**2 - var, zero exactly on 0/1 values."""
    return Polynomial(((Monomial.of(var, 2), 1), (Monomial.of(var), -1)))


class ReductionStep(NamedTuple):
    """One replayable rewrite: coefficient * monomial * (variable^2 - variable)."""

    monomial: Monomial
    coefficient: Scalar
    variable: VarId


class _MaxOrder:
    """heapq adapter: pops the graded-lex largest monomial first."""

    __slots__ = ("mono",)

    def __init__(self, mono: Monomial):
        self.mono = mono

    def __lt__(self, other: "_MaxOrder") -> bool:
        return other.mono < self.mono


def multilinear_reduce(
    poly: Polynomial, boolean_vars: frozenset[VarId] | set[VarId]
) -> tuple[Polynomial, list[ReductionStep]]:
    """Reduce exponents of the given variables to at most 1.

    Returns (reduced, steps) with the exact identity

        poly == reduced + sum(c * m * (v**2 - v) for (m, c, v) in steps)

    so the steps replay as a proof that poly follows from the boolean
    axioms plus the reduced remainder.  Deterministic: always rewrites the
    currently largest offending monomial, at its earliest offending variable.
    """
    work: dict[Monomial, Scalar] = dict(poly.term_map)
    steps: list[ReductionStep] = []

    def offender(mono: Monomial) -> VarId | None:
        for var, exp in mono.pairs:
            if exp >= 2 and var in boolean_vars:
                return var
        return None

    heap = [_MaxOrder(m) for m in work if offender(m) is not None]
    heapq.heapify(heap)
    while heap:
        mono = heapq.heappop(heap).mono
        coef = work.pop(mono, 0)
        if coef == 0:
            continue
        var = offender(mono)
        if var is None:
            work[mono] = coef  # stale heap entry for a now-clean monomial
            continue
        lowered = mono.without(var)
        steps.append(ReductionStep(mono.without(var, 2), coef, var))
        new = work.get(lowered, 0) + coef
        if new == 0:
            work.pop(lowered, None)
        else:
            fresh = lowered not in work
            work[lowered] = as_scalar(new)
            if fresh and offender(lowered) is not None:
                heapq.heappush(heap, _MaxOrder(lowered))
    return Polynomial._wrap(work), steps


# -- serialization ----------------------------------------------------------


def mono_to_obj(mono: Monomial) -> dict[str, int]:
    return {var.name: exp for var, exp in mono.pairs}


def mono_from_obj(obj: object) -> Monomial:
    if not isinstance(obj, dict):
        raise FormatError(f"monomial must be an object, got {obj!r}")
    pairs: list[tuple[VarId, int]] = []
    for name, exp in obj.items():
        var = parse_var(name)
        if not isinstance(exp, int) or isinstance(exp, bool) or exp < 1:
            raise FormatError(f"exponent of {name} must be a positive integer")
        pairs.append((var, exp))
    if len({v for v, _ in pairs}) != len(pairs):
        raise FormatError("duplicate variable in monomial")
    return Monomial(pairs)


def poly_to_obj(poly: Polynomial) -> dict[str, object]:
    return {
        "terms": [
            {"coef": scalar_to_str(coef), "mono": mono_to_obj(mono)}
            for mono, coef in poly.terms()
        ]
    }


def poly_from_obj(obj: object) -> Polynomial:
    if not isinstance(obj, dict) or set(obj) != {"terms"}:
        raise FormatError(f"polynomial must be an object with a 'terms' key")
    terms = obj["terms"]
    if not isinstance(terms, list):
        raise FormatError("'terms' must be an array")
    seen: set[Monomial] = set()
    pairs: list[tuple[Monomial, Scalar]] = []
    for entry in terms:
        if not isinstance(entry, dict) or set(entry) != {"coef", "mono"}:
            raise FormatError(f"malformed term {entry!r}")
        coef = scalar_from_str(entry["coef"])
        if coef == 0:
            raise FormatError("zero coefficient is not canonical")
        mono = mono_from_obj(entry["mono"])
        if mono in seen:
            raise FormatError(f"duplicate monomial {mono!r}")
        seen.add(mono)
        pairs.append((mono, coef))
    return Polynomial(pairs)


_TERM_SPLIT_RE = re.compile(r"(?=[+-])")


def poly_parse(text: str) -> Polynomial:
    """Small convenience parser: ``"2*x1^2*y3 - x1 + 1/2"``.

    Accepts sums of products of rationals and powered variables; no
    parentheses.  Intended for tests and demos, not a wire format.
    """
    stripped = text.replace(" ", "")
    if not stripped:
        raise FormatError("empty polynomial text")
    pairs: list[tuple[Monomial, Scalar]] = []
    for chunk in _TERM_SPLIT_RE.split(stripped):
        if not chunk or chunk in "+-":
            if chunk:
                raise FormatError(f"dangling sign in {text!r}")
            continue
        sign = 1
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = -1
            chunk = chunk[1:]
        coef: Scalar = sign
        factors: list[tuple[VarId, int]] = []
        for factor in chunk.split("*"):
            if not factor:
                raise FormatError(f"empty factor in {text!r}")
            if factor[0] in "xy":
                name, _, exp_text = factor.partition("^")
                exp = 1
                if exp_text:
                    if not exp_text.isdigit() or int(exp_text) < 1:
                        raise FormatError(f"bad exponent in {factor!r}")
                    exp = int(exp_text)
                factors.append((parse_var(name), exp))
            else:
                num, _, den = factor.partition("/")
                try:
                    value = Fraction(int(num), int(den)) if den else int(num)
                except ValueError as exc:
                    raise FormatError(f"bad factor {factor!r} in {text!r}") from exc
                coef *= value
        pairs.append((Monomial(factors), coef))
    return Polynomial(pairs)
