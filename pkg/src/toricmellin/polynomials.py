"""Sparse multivariate polynomials with exact rational coefficients.

Also home of the Hardy products ``(s+m)...(s+1)``, the ``g_k`` family that
drives the twisted Mellin expansion, and an independent power-series oracle
for ``g_k`` built from ``exp(-s x) (1 - x)^(-1-s)``.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponent = tuple[int, ...]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"exact rational required, got {type(value).__name__}")


class RationalPolynomial:
    """Polynomial in ``nvars`` variables with :class:`~fractions.Fraction` coefficients.

    Terms are stored sparsely as ``{exponent tuple: coefficient}``; zero
    coefficients are never stored.  Instances are treated as immutable.

    Examples
    --------
    >>> s = RationalPolynomial.variable(0, 1)
    >>> (s + 1) * (s + 2)
    RationalPolynomial(1, {(0,): 2, (1,): 3, (2,): 1})
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = _as_fraction(coef)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value, nvars: int = 1) -> "RationalPolynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "RationalPolynomial":
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> "RationalPolynomial":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def degree(self) -> int:
        """Maximal total degree; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficients_univariate(self) -> list[Fraction]:
        """Dense ascending coefficient list of a univariate polynomial."""
        if self.nvars != 1:
            raise ValueError("not univariate")
        out = [Fraction(0)] * (self.degree() + 1)
        for (e,), c in self._terms.items():
            out[e] = c
        return out

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "RationalPolynomial":
        if isinstance(other, RationalPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return RationalPolynomial.constant(_as_fraction(other), self.nvars)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for exp, c in other._terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return RationalPolynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalPolynomial):
            try:
                return self.scale(_as_fraction(other))
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                out[exp] = out.get(exp, 0) + c1 * c2
        return RationalPolynomial._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if not isinstance(power, int) or power < 0:
            raise ValueError("nonnegative integer power required")
        result = RationalPolynomial.constant(1, self.nvars)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def scale(self, factor) -> "RationalPolynomial":
        factor = _as_fraction(factor)
        if not factor:
            return RationalPolynomial(self.nvars)
        return RationalPolynomial._raw(self.nvars, {e: c * factor for e, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        try:
            return self == RationalPolynomial.constant(_as_fraction(other), self.nvars)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------
    def derivative(self, orders: Sequence[int]) -> "RationalPolynomial":
        """Partial derivative ``d^orders`` (one order per variable)."""
        orders = tuple(orders)
        if len(orders) != self.nvars:
            raise ValueError("one derivative order per variable expected")
        out = {}
        for exp, c in self._terms.items():
            if any(e < o for e, o in zip(exp, orders)):
                continue
            factor = 1
            for e, o in zip(exp, orders):
                factor *= math.perm(e, o)
            out[tuple(e - o for e, o in zip(exp, orders))] = c * factor
        return RationalPolynomial._raw(self.nvars, out)

    def substitute(self, images: Sequence["RationalPolynomial"]) -> "RationalPolynomial":
        """Compose: replace variable ``i`` by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("one image per variable expected")
        target = images[0].nvars if images else 0
        powers: list[dict[int, RationalPolynomial]] = [{0: RationalPolynomial.constant(1, target)} for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        result = RationalPolynomial(target)
        for exp, c in self._terms.items():
            term = RationalPolynomial.constant(c, target)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def embed(self, nvars: int, positions: Sequence[int]) -> "RationalPolynomial":
        """Re-home variable ``i`` as variable ``positions[i]`` of an ``nvars``-ring."""
        out = {}
        for exp, c in self._terms.items():
            new = [0] * nvars
            for i, e in enumerate(exp):
                new[positions[i]] += e
            out[tuple(new)] = c
        return RationalPolynomial._raw(nvars, out)

    # -- evaluation -------------------------------------------------------
    def __call__(self, *point):
        """Evaluate at a point; exact if every coordinate is rational."""
        if len(point) == 1 and isinstance(point[0], (tuple, list)) and self.nvars != 1:
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        exact = all(isinstance(p, (int, Fraction)) for p in point)
        if exact:
            total = Fraction(0)
            for exp, c in self._terms.items():
                term = c
                for p, e in zip(point, exp):
                    term *= Fraction(p) ** e
                total += term
            return total
        terms = []
        for exp, c in self._terms.items():
            term = float(c)
            for p, e in zip(point, exp):
                term *= p ** e
            terms.append(term)
        return math.fsum(terms)

    def evaluate_array(self, points: np.ndarray) -> np.ndarray:
        """Vectorised float evaluation; ``points`` has shape ``(..., nvars)``."""
        points = np.asarray(points, dtype=float)
        out = np.zeros(points.shape[:-1])
        for exp, c in self._terms.items():
            term = np.full(points.shape[:-1], float(c))
            for i, e in enumerate(exp):
                if e:
                    term = term * points[..., i] ** e
            out = out + term
        return out

    # -- presentation / serialisation ------------------------------------
    def __repr__(self):
        body = ", ".join(f"{e}: {c}" for e, c in sorted(self._terms.items()))
        return f"RationalPolynomial({self.nvars}, {{{body}}})"

    def __str__(self):
        if not self._terms:
            return "0"
        names = ["s"] if self.nvars == 1 else [f"s{i + 1}" for i in range(self.nvars)]
        parts = []
        for exp, c in sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exp) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def to_dict(self) -> dict:
        terms = [
            {"exp": list(exp), "num": str(c.numerator), "den": str(c.denominator)}
            for exp, c in sorted(self._terms.items())
        ]
        return {"vars": self.nvars, "terms": terms}

    @classmethod
    def from_dict(cls, data: Mapping) -> "RationalPolynomial":
        terms = {}
        for t in data["terms"]:
            terms[tuple(t["exp"])] = Fraction(int(t["num"]), int(t.get("den", "1")))
        return cls(int(data["vars"]), terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "RationalPolynomial":
        return cls.from_dict(json.loads(text))


def hardy_polynomial(m: int) -> RationalPolynomial:
    """The rising product ``(s+m)(s+m-1)...(s+1)``; the empty product for ``m = 0``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return _hardy(m)


@lru_cache(maxsize=None)
def _hardy(m: int) -> RationalPolynomial:
    s = RationalPolynomial.variable(0, 1)
    result = RationalPolynomial.constant(1)
    for j in range(1, m + 1):
        result = result * (s + j)
    return result


def g_polynomial(k: int) -> RationalPolynomial:
    r"""Coefficient polynomial ``g_k`` of the twisted Mellin expansion.

    .. math:: g_k(s) = \frac{1}{k!}\sum_{l=0}^{k} (-1)^l \binom{k}{l} s^l\, s^{(k-l)}

    The leading terms cancel, leaving a polynomial of degree ``k // 2``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _g(k)


@lru_cache(maxsize=None)
def _g(k: int) -> RationalPolynomial:
    s = RationalPolynomial.variable(0, 1)
    total = RationalPolynomial(1)
    for ell in range(k + 1):
        term = (s ** ell) * hardy_polynomial(k - ell)
        total = total + term.scale((-1) ** ell * math.comb(k, ell))
    return total.scale(Fraction(1, math.factorial(k)))


def g_from_generating_function(k_max: int) -> list[RationalPolynomial]:
    """Taylor coefficients of ``exp(-s x) / (1 - x)^(1 + s)`` in ``x`` up to ``x^k_max``.

    Built without reference to :func:`g_polynomial`: the two factor series
    ``sum (-s)^n x^n / n!`` and ``sum (1+s)(2+s)...(n+s)/n! x^n`` are
    truncated at ``k_max`` and multiplied as power series in ``x`` with
    polynomial-in-``s`` coefficients.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    s = RationalPolynomial.variable(0, 1)
    one = RationalPolynomial.constant(1)
    exp_series = [one]
    binom_series = [one]
    for n in range(1, k_max + 1):
        exp_series.append((exp_series[-1] * (-s)).scale(Fraction(1, n)))
        binom_series.append((binom_series[-1] * (s + n)).scale(Fraction(1, n)))
    out = []
    for k in range(k_max + 1):
        coef = RationalPolynomial(1)
        for j in range(k + 1):
            coef = coef + exp_series[j] * binom_series[k - j]
        out.append(coef)
    return out


def g_multiindex(beta: Sequence[int]) -> RationalPolynomial:
    """Product ``g_{beta_1}(s_1) ... g_{beta_d}(s_d)`` as a ``d``-variable polynomial."""
    beta = tuple(int(b) for b in beta)
    if any(b < 0 for b in beta):
        raise ValueError("multi-index components must be nonnegative")
    return _g_multi(beta)


@lru_cache(maxsize=None)
def _g_multi(beta: Exponent) -> RationalPolynomial:
    d = len(beta)
    result = RationalPolynomial.constant(1, d)
    for i, b in enumerate(beta):
        if b:
            result = result * g_polynomial(b).embed(d, [i])
    return result


def multi_indices(d: int, max_order: int) -> Iterable[Exponent]:
    """All ``d``-component multi-indices with total order ``<= max_order``, graded."""
    for total in range(max_order + 1):
        yield from _compositions(total, d)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
