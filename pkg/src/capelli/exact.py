"""Exact arithmetic substrate: rationals, sparse polynomials, factored rational
functions and a pivoting Gaussian solver.

Polynomials live in the Sigma-coordinates of the lattice: variable ``i`` is the
basis form ``omega_i``, so evaluating at a weight with Sigma-dual coordinates
``c`` just substitutes ``x_i = c_i``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint
import gmpy2
from gmpy2 import mpq

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


class SingularSystem(ArithmeticError):
    """Raised when exact elimination meets a column without a pivot."""


class UndefinedValue(ZeroDivisionError):
    """A denominator factor vanishes at the evaluation point."""


def rat(x) -> Rational:
    """Coerce ints, strings like ``"-3/4"``, Fractions and mpq to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("refusing to coerce bool to a rational")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip().replace(" ", "")
        if not s:
            raise ValueError("empty rational literal")
        if "/" in s:
            num, den = s.split("/", 1)
            if int(den) == 0:
                raise ValueError(f"zero denominator in {x!r}")
            return mpq(int(num), int(den))
        return mpq(int(s))
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact literal")
    return mpq(x)


def fmt_rat(q) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_integer(q) -> bool:
    return rat(q).denominator == 1


def falling(z, d: int):
    """Falling factorial ``z (z-1) ... (z-d+1)``; for ``d < 0`` the customary
    extension ``1 / ((z+1)(z+2)...(z-d))``."""
    if d >= 0:
        out = ONE
        for i in range(d):
            out = out * (z - i)
        return out
    den = ONE
    for i in range(1, -d + 1):
        den = den * (z + i)
    if den == 0:
        raise UndefinedValue(f"extended falling factorial [{z} v {d}] has a zero factor")
    return ONE / den


def binomial(x, k: int):
    return falling(x, k) / math.factorial(k)


# ----------------------------------------------------------------------------
# points and linear forms
# ----------------------------------------------------------------------------

def _coords(values: Iterable) -> tuple:
    return tuple(rat(v) for v in values)


@dataclass(frozen=True, slots=True)
class Weight:
    """A point of V in Sigma-dual coordinates (``coords[i] = omega_i(point)``)."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", _coords(self.coords))

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((0,) * rank)

    @classmethod
    def unit(cls, i: int, rank: int) -> "Weight":
        return cls(tuple(1 if j == i else 0 for j in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, c) -> "Weight":
        c = rat(c)
        return Weight(tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coords)

    def is_dominant_lattice(self) -> bool:
        """Membership in the monoid spanned by the Sigma-dual basis."""
        return all(a.denominator == 1 and a >= 0 for a in self.coords)

    def ints(self) -> tuple:
        return tuple(int(a) for a in self.coords)

    def to_json(self):
        if self.is_integral():
            return [int(a) for a in self.coords]
        return [fmt_rat(a) for a in self.coords]

    def __repr__(self) -> str:
        return "Weight(" + ",".join(fmt_rat(a) for a in self.coords) + ")"


@dataclass(frozen=True, slots=True)
class LinearForm:
    """An element of the lattice tensored with Q, in the Sigma basis."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", _coords(self.coords))

    @classmethod
    def basis(cls, i: int, rank: int) -> "LinearForm":
        return cls(tuple(1 if j == i else 0 for j in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __call__(self, w: Weight):
        return sum((a * b for a, b in zip(self.coords, w.coords)), ZERO)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple(-a for a in self.coords))

    def __mul__(self, c) -> "LinearForm":
        c = rat(c)
        return LinearForm(tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coords)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def nonnegative(self) -> bool:
        return all(a >= 0 for a in self.coords)

    def ints(self) -> tuple:
        return tuple(int(a) for a in self.coords)

    def to_polynomial(self, shift=0) -> "Polynomial":
        """The affine function ``z -> self(z) - shift``."""
        terms = {}
        r = self.rank
        for i, a in enumerate(self.coords):
            if a:
                terms[tuple(1 if j == i else 0 for j in range(r))] = a
        if shift:
            terms[(0,) * r] = -rat(shift)
        return Polynomial(r, terms)

    def to_json(self):
        if self.is_integral():
            return [int(a) for a in self.coords]
        return [fmt_rat(a) for a in self.coords]

    def __repr__(self) -> str:
        return "LinearForm(" + ",".join(fmt_rat(a) for a in self.coords) + ")"


# ----------------------------------------------------------------------------
# sparse polynomials
# ----------------------------------------------------------------------------

def _grlex_key(e: tuple):
    return (sum(e), e)


_CTX: dict = {}


def _ctx(nvars: int):
    ctx = _CTX.get(nvars)
    if ctx is None:
        ctx = flint.fmpq_mpoly_ctx.get(("x", nvars), "deglex") if nvars else \
            flint.fmpq_mpoly_ctx.get((), "deglex")
        _CTX[nvars] = ctx
    return ctx


def _to_fmpq(c) -> "flint.fmpq":
    c = rat(c)
    return flint.fmpq(int(c.numerator), int(c.denominator))


def _from_fmpq(c) -> Rational:
    return mpq(int(c.p), int(c.q))


class Polynomial:
    """Multivariate polynomial over Q, backed by a FLINT ``fmpq_mpoly``.

    ``terms`` exposes an exponent-tuple -> mpq dictionary view. Instances are
    treated as immutable.
    """

    __slots__ = ("nvars", "_p", "_terms", "_hash")

    def __init__(self, nvars: int, terms=None, *, _clean: bool = False):
        self.nvars = nvars
        ctx = _ctx(nvars)
        if terms is None:
            self._p = ctx.from_dict({})
        elif isinstance(terms, flint.fmpq_mpoly):
            self._p = terms
        else:
            data = {}
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                c = rat(c)
                if c:
                    data[e] = _to_fmpq(c)
            self._p = ctx.from_dict(data)
        self._terms = None
        self._hash = None

    @classmethod
    def _wrap(cls, nvars: int, p) -> "Polynomial":
        out = cls.__new__(cls)
        out.nvars = nvars
        out._p = p
        out._terms = None
        out._hash = None
        return out

    @property
    def terms(self) -> dict:
        if self._terms is None:
            self._terms = {tuple(int(x) for x in e): _from_fmpq(c) for e, c in self._p.to_dict().items()}
        return self._terms

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        return cls._wrap(nvars, _ctx(nvars).constant(_to_fmpq(c)))

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        return cls._wrap(nvars, _ctx(nvars).gens()[i])

    @classmethod
    def monomial(cls, exp: Sequence[int], coef=1) -> "Polynomial":
        return cls(len(exp), {tuple(exp): coef})

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._wrap(nvars, _ctx(nvars).from_dict({}))

    # basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._p.is_zero():
            return -1
        return int(self._p.total_degree())

    def __len__(self) -> int:
        return len(self._p)

    def homogeneous_component(self, k: int) -> "Polynomial":
        return Polynomial(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == k})

    def leading(self):
        """(exponent, coefficient) of the grlex-largest term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items())

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        if isinstance(other, FactoredRationalFunction):
            return NotImplemented
        return Polynomial._wrap(self.nvars, self._p + self._coerce(other)._p)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap(self.nvars, -self._p)

    def __sub__(self, other):
        if isinstance(other, FactoredRationalFunction):
            return NotImplemented
        return Polynomial._wrap(self.nvars, self._p - self._coerce(other)._p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        return Polynomial._wrap(self.nvars, self._p * _to_fmpq(c))

    def __mul__(self, other):
        if isinstance(other, FactoredRationalFunction):
            return NotImplemented
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")
        return Polynomial._wrap(self.nvars, self._p * other._p)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(ONE / rat(c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        return Polynomial._wrap(self.nvars, self._p ** k)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._p == other._p
        if isinstance(other, FactoredRationalFunction):
            return NotImplemented
        try:
            return self._p == Polynomial.constant(other, self.nvars)._p
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # evaluation and substitution ---------------------------------------
    def evaluate(self, point):
        coords = point.coords if isinstance(point, Weight) else tuple(rat(v) for v in point)
        if len(coords) != self.nvars:
            raise ValueError("point has the wrong number of coordinates")
        if self.nvars == 0:
            return self.constant_term()
        return _from_fmpq(self._p(*[_to_fmpq(c) for c in coords]))

    __call__ = evaluate

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        nv = images[0].nvars if images else 0
        if self.nvars == 0:
            return Polynomial.constant(self.constant_term(), nv)
        return Polynomial._wrap(nv, self._p.compose(*[q._p for q in images], ctx=_ctx(nv)))

    def linear_substitute(self, matrix: Sequence[Sequence]) -> "Polynomial":
        """Substitute ``x_i -> sum_k matrix[k][i] x_k`` (column i gives the image
        of variable i)."""
        n = self.nvars
        gens = _ctx(n).gens()
        images = []
        for i in range(n):
            img = _ctx(n).from_dict({})
            for k in range(n):
                if matrix[k][i]:
                    img = img + gens[k] * _to_fmpq(matrix[k][i])
            images.append(img)
        return Polynomial._wrap(n, self._p.compose(*images)) if n else self

    def shift(self, eta) -> "Polynomial":
        """``q(z) = p(z - eta)``."""
        cs = eta.coords if isinstance(eta, Weight) else tuple(rat(v) for v in eta)
        if not any(cs):
            return self
        gens = _ctx(self.nvars).gens()
        images = [g - _to_fmpq(c) if c else g for g, c in zip(gens, cs)]
        return Polynomial._wrap(self.nvars, self._p.compose(*images))

    def divide_linear(self, form: Sequence, shift) -> "Polynomial | None":
        """Exact quotient by ``form(z) - shift`` or None when it does not divide."""
        if not any(rat(a) for a in form):
            raise ValueError("cannot divide by a constant factor")
        if self._p.is_zero():
            return self
        q, r = divmod(self._p, _factor_poly((tuple(rat(a) for a in form), rat(shift)))._p)
        if not r.is_zero():
            return None
        return Polynomial._wrap(self.nvars, q)

    def divide_exact(self, other: "Polynomial") -> "Polynomial | None":
        q, r = divmod(self._p, other._p)
        if not r.is_zero():
            return None
        return Polynomial._wrap(self.nvars, q)

    # formatting ---------------------------------------------------------
    def to_json(self):
        return [{"exp": list(e), "coef": fmt_rat(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, nvars: int | None = None) -> "Polynomial":
        if not data:
            if nvars is None:
                raise ValueError("cannot infer the rank of an empty polynomial")
            return cls.zero(nvars)
        n = len(data[0]["exp"])
        return cls(n, {tuple(t["exp"]): rat(t["coef"]) for t in data})

    def __repr__(self) -> str:
        return f"Polynomial({self.pretty()})"

    def pretty(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"w{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(fmt_rat(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{fmt_rat(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def evaluate(p: Polynomial, w: Weight):
    return p.evaluate(w)


def shift_argument(p: Polynomial, eta: Weight) -> Polynomial:
    return p.shift(eta)


def binomial_poly(x: Polynomial, k: int) -> Polynomial:
    """``C(x, k) = x (x-1) ... (x-k+1) / k!`` for a polynomial ``x``."""
    out = Polynomial.constant(1, x.nvars)
    for i in range(k):
        out = out * (x - i)
    return out.scale(mpq(1, math.factorial(k)))


# ----------------------------------------------------------------------------
# factored rational functions
# ----------------------------------------------------------------------------

def canonical_factor(form: Sequence, shift) -> tuple[tuple, int, int]:
    """Normalize ``form(z) - shift`` so the first nonzero coordinate is positive.

    Returns ``(form, shift, sign)`` with ``original = sign * normalized``.
    """
    form = tuple(rat(a) for a in form)
    shift = rat(shift)
    if shift.denominator != 1:
        raise ValueError("denominator shifts must be integers")
    for a in form:
        if a:
            if a < 0:
                return tuple(-x for x in form), int(-shift), -1
            return form, int(shift), 1
    raise ValueError("zero linear form in a denominator")


_FACTOR_POLY: dict = {}


def _factor_poly(key: tuple) -> Polynomial:
    p = _FACTOR_POLY.get(key)
    if p is None:
        form, shift = key
        p = LinearForm(form).to_polynomial(shift)
        _FACTOR_POLY[key] = p
    return p


class FactoredRationalFunction:
    """``numerator / prod (form_j(z) - shift_j)^m_j`` with linear factors kept apart.

    ``denominator`` maps canonical ``(form, shift)`` keys to multiplicities.
    """

    __slots__ = ("numerator", "denominator")
    __hash__ = None

    def __init__(self, numerator: Polynomial, denominator: Mapping | None = None):
        self.numerator = numerator
        self.denominator = {k: m for k, m in (denominator or {}).items() if m}
        if numerator.is_zero():
            self.denominator = {}

    @classmethod
    def from_factors(cls, numerator: Polynomial, factors: Iterable[tuple]) -> "FactoredRationalFunction":
        """Build from raw ``(form, shift)`` pairs, canonicalizing signs."""
        den: dict = {}
        sign = 1
        for form, shift in factors:
            f, s, sg = canonical_factor(form, shift)
            sign *= sg
            den[(f, s)] = den.get((f, s), 0) + 1
        num = numerator if sign == 1 else -numerator
        return cls(num, den)

    @classmethod
    def constant(cls, c, nvars: int) -> "FactoredRationalFunction":
        return cls(Polynomial.constant(c, nvars))

    @property
    def nvars(self) -> int:
        return self.numerator.nvars

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return not self.denominator

    def denominator_degree(self) -> int:
        return sum(self.denominator.values())

    def degree(self) -> int:
        """deg numerator - number of denominator factors (with multiplicity)."""
        if self.is_zero():
            return -1
        return self.numerator.degree() - self.denominator_degree()

    def factors(self):
        """Sorted ``(form, shift, multiplicity)`` triples."""
        return sorted((f, s, m) for (f, s), m in self.denominator.items())

    def denominator_polynomial(self) -> Polynomial:
        out = Polynomial.constant(1, self.nvars)
        for key, m in self.denominator.items():
            out = out * _factor_poly(key) ** m
        return out

    def _times_factors(self, extra: Mapping) -> Polynomial:
        # one linear factor at a time keeps every product sparse-times-tiny
        out = self.numerator
        for key, m in extra.items():
            for _ in range(m):
                out = out * _factor_poly(key)
        return out

    def __neg__(self):
        return FactoredRationalFunction(-self.numerator, self.denominator)

    def __add__(self, other):
        return frf_sum([self, _as_frf(other, self.nvars)], self.nvars, reduce=False)

    __radd__ = __add__

    def __sub__(self, other):
        return frf_sum([self, -_as_frf(other, self.nvars)], self.nvars, reduce=False)

    def __rsub__(self, other):
        return frf_sum([_as_frf(other, self.nvars), -self], self.nvars, reduce=False)

    def __mul__(self, other):
        if isinstance(other, FactoredRationalFunction):
            den = dict(self.denominator)
            for k, m in other.denominator.items():
                den[k] = den.get(k, 0) + m
            return FactoredRationalFunction(self.numerator * other.numerator, den)
        if isinstance(other, Polynomial):
            return FactoredRationalFunction(self.numerator * other, self.denominator)
        return FactoredRationalFunction(self.numerator.scale(other), self.denominator)

    __rmul__ = __mul__

    def scale(self, c) -> "FactoredRationalFunction":
        return FactoredRationalFunction(self.numerator.scale(c), self.denominator)

    def __eq__(self, other):
        if not isinstance(other, (FactoredRationalFunction, Polynomial, int, Rational, Fraction)):
            return NotImplemented
        return (self - other).reduce().is_zero()

    def shift(self, eta: Weight) -> "FactoredRationalFunction":
        """``c(z - eta)``; a factor ``form(z) - s`` becomes ``form(z) - (s + form(eta))``."""
        if not any(eta.coords):
            return self
        den = {}
        for (form, s), m in self.denominator.items():
            moved = sum((a * b for a, b in zip(form, eta.coords)), ZERO)
            if moved.denominator != 1:
                raise ValueError("shift leaves the integer lattice of denominators")
            den[(form, s + int(moved))] = m
        return FactoredRationalFunction(self.numerator.shift(eta), den)

    def evaluate(self, point):
        coords = point.coords if isinstance(point, Weight) else tuple(rat(v) for v in point)
        den = ONE
        for (form, s), m in self.denominator.items():
            v = sum((a * b for a, b in zip(form, coords)), ZERO) - s
            if not v:
                raise UndefinedValue(f"denominator factor {form} - {s} vanishes at {coords}")
            den = den * v ** m
        return self.numerator.evaluate(coords) / den

    __call__ = evaluate

    def reduce(self, only: Iterable | None = None) -> "FactoredRationalFunction":
        """Cancel every denominator factor that divides the numerator exactly.

        ``only`` restricts the trial divisions to the given factor keys."""
        if self.numerator.is_zero():
            return FactoredRationalFunction(self.numerator, {})
        num = self.numerator
        den = dict(self.denominator)
        keys = sorted(self.denominator) if only is None else sorted(k for k in only if k in den)
        for key in keys:
            m = den[key]
            form, s = key
            while m:
                q = num.divide_linear(form, s)
                if q is None:
                    break
                num = q
                m -= 1
            den[key] = m
        return FactoredRationalFunction(num, den)

    def to_json(self):
        return {
            "num": self.numerator.to_json(),
            "den": [[LinearForm(f).to_json(), s, m] for f, s, m in self.factors()],
        }

    def pretty(self, names: Sequence[str] | None = None) -> str:
        num = self.numerator.pretty(names)
        if not self.denominator:
            return num
        names = names or [f"w{i + 1}" for i in range(self.nvars)]
        parts = []
        for f, s, m in self.factors():
            lin = Polynomial.constant(-s, self.nvars)
            for i, a in enumerate(f):
                if a:
                    lin = lin + Polynomial.variable(i, self.nvars).scale(a)
            parts.append(f"({lin.pretty(names)})" + (f"^{m}" if m > 1 else ""))
        return f"({num}) / ({' * '.join(parts)})"

    def __repr__(self) -> str:
        return f"FRF({self.pretty()})"


def _as_frf(x, nvars: int) -> FactoredRationalFunction:
    if isinstance(x, FactoredRationalFunction):
        return x
    if isinstance(x, Polynomial):
        return FactoredRationalFunction(x)
    return FactoredRationalFunction.constant(x, nvars)


def frf_sum(items: Sequence[FactoredRationalFunction], nvars: int | None = None,
            reduce: bool = True, assume_reduced: bool = False) -> FactoredRationalFunction:
    """Sum over a common denominator (factor-wise lcm), then optionally reduce.

    With ``assume_reduced`` the summands are taken to be in lowest terms. A
    factor can then only cancel if its top multiplicity is shared by two or
    more summands, so only those factors are trial-divided.
    """
    items = [f for f in items if not f.is_zero()]
    if not items:
        if nvars is None:
            raise ValueError("need nvars for an empty sum")
        return FactoredRationalFunction(Polynomial.zero(nvars))
    lcm: dict = {}
    hits: dict = {}
    for f in items:
        for k, m in f.denominator.items():
            cur = lcm.get(k, 0)
            if m > cur:
                lcm[k] = m
                hits[k] = 1
            elif m == cur:
                hits[k] += 1
    total = Polynomial.zero(items[0].nvars)
    for f in items:
        extra = {k: m - f.denominator.get(k, 0) for k, m in lcm.items() if m > f.denominator.get(k, 0)}
        total = total + f._times_factors(extra)
    out = FactoredRationalFunction(total, lcm)
    if not reduce:
        return out
    if assume_reduced:
        return out.reduce(only=[k for k, c in hits.items() if c > 1])
    return out.reduce()


def mul_reduced(a: FactoredRationalFunction, b: FactoredRationalFunction) -> FactoredRationalFunction:
    """Product of two reduced factored functions, returned in lowest terms.

    Only cross cancellations are possible: a factor of one denominator
    against the other numerator."""
    na, nb = a.numerator, b.numerator
    da, db = dict(a.denominator), dict(b.denominator)
    for dmine, nother in ((da, "b"), (db, "a")):
        for key in sorted(dmine):
            form, s = key
            while dmine[key]:
                target = nb if nother == "b" else na
                q = target.divide_linear(form, s)
                if q is None:
                    break
                if nother == "b":
                    nb = q
                else:
                    na = q
                dmine[key] -= 1
    den = dict(da)
    for k, m in db.items():
        den[k] = den.get(k, 0) + m
    return FactoredRationalFunction(na * nb, den)


def reduce(f: FactoredRationalFunction) -> FactoredRationalFunction:
    return f.reduce()


def divides_by_linear_factors(factors: Iterable[tuple], n: Polynomial) -> bool:
    """True iff ``prod (form(z) - shift)`` over ``factors`` divides ``n``."""
    cur = n
    for form, shift in factors:
        if cur.is_zero():
            return True
        q = cur.divide_linear(form, shift)
        if q is None:
            return False
        cur = q
    return True


# ----------------------------------------------------------------------------
# exact linear algebra
# ----------------------------------------------------------------------------

def solve_exact(matrix: Sequence[Sequence], rhs: Sequence) -> tuple:
    """Solve a square system by Gaussian elimination over Q.

    The pivot in each column is the first nonzero entry at or below the
    diagonal, so results are reproducible.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("solve_exact needs a square matrix")
    if len(rhs) != n:
        raise ValueError("right-hand side has the wrong length")
    m = [[rat(x) for x in row] + [rat(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularSystem(f"no pivot in column {col}")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        prow = m[col]
        inv = ONE / prow[col]
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                f = f * inv
                row = m[r]
                for c in range(col, n + 1):
                    if prow[c]:
                        row[c] -= f * prow[c]
    x = [ZERO] * n
    for i in range(n - 1, -1, -1):
        s = m[i][n]
        row = m[i]
        for j in range(i + 1, n):
            if row[j]:
                s -= row[j] * x[j]
        x[i] = s / row[i]
    return tuple(x)


def row_reduce(rows: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form over Q; returns ``(rref_rows, pivot_columns)``."""
    m = [[rat(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of ``{x : rows . x = 0}`` over Q."""
    if not rows:
        return [tuple(ONE if i == j else ZERO for i in range(ncols)) for j in range(ncols)]
    red, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return tuple(tuple(sum((a[i][t] * b[t][j] for t in range(k)), 0) for j in range(m)) for i in range(n))


def mat_inverse(a: Sequence[Sequence]) -> tuple:
    n = len(a)
    cols = []
    for j in range(n):
        e = [ONE if i == j else ZERO for i in range(n)]
        cols.append(solve_exact(a, e))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(zip(*a)) if a else ()


def primitive_integer_vector(v: Sequence) -> tuple:
    """Scale a nonzero rational vector to a primitive integer vector,
    keeping the direction (sign included)."""
    v = [rat(x) for x in v]
    if not any(v):
        raise ValueError("zero vector has no primitive representative")
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints)


__all__ = [
    "Rational", "rat", "fmt_rat", "is_integer", "falling", "binomial",
    "Weight", "LinearForm", "Polynomial", "FactoredRationalFunction",
    "SingularSystem", "UndefinedValue", "solve_exact", "row_reduce", "rank", "nullspace",
    "evaluate", "shift_argument", "binomial_poly", "frf_sum", "reduce", "canonical_factor",
    "divides_by_linear_factors", "mul_reduced", "mat_mul", "mat_inverse", "transpose", "primitive_integer_vector",
    "gmpy2",
]
