"""Pieri coefficients a_tau^h(mu), virtual dimensions and the duality between them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .diffop import b_coeff_paths, f_tau_value, minus
from .exact import ONE, ZERO, Polynomial, UndefinedValue, Weight, falling, fmt_rat, rat
from .interp import UndefinedNormalizer, expand_in_basis, interpolate_p, p_value_by_paths
from .lattice import enumerate_lambda, enumerate_paths, in_lambda
from .structure import StructureData, classify_rho


@dataclass
class PieriTable:
    """h p_mu = sum_tau coeffs[tau] p_{mu + tau}."""

    h: Polynomial
    mu: Weight
    coeffs: dict = field(default_factory=dict)

    def coefficient(self, tau: Weight):
        return self.coeffs.get(tau, ZERO)

    def support(self) -> list[Weight]:
        return sorted(self.coeffs, key=lambda t: t.coords, reverse=True)

    def to_json(self):
        return {
            "h": self.h.to_json(),
            "mu": self.mu.to_json(),
            "coeffs": [{"tau": t.to_json(), "a": fmt_rat(self.coeffs[t])} for t in self.support()],
        }


def _check_mu(mu: Weight) -> None:
    if not mu.is_dominant_lattice():
        raise ValueError(f"{mu!r} is not in Lambda_+")


def pieri_direct(s: StructureData, h: Polynomial, mu: Weight) -> PieriTable:
    """Expand h p_mu in the p-basis by triangular evaluation."""
    _check_mu(mu)
    deg = int(s.ell(mu)) + max(h.degree(), 0)
    g = h * interpolate_p(s, mu).poly
    coeffs = expand_in_basis(s, g, "p", deg)
    return PieriTable(h, mu, {nu - mu: c for nu, c in coeffs.items()})


def _bracket(h: Polynomial, points: list, d: int):
    total = ZERO
    for i, z in enumerate(points):
        total += rat((-1) ** (d - i)) / (math.factorial(i) * math.factorial(d - i)) * h.evaluate(z.coords)
    return total


def pieri_path_formula(s: StructureData, h: Polynomial, mu: Weight, tau: Weight, positive_only: bool = True):
    """a_tau^h(mu) as a weighted sum over paths mu -> mu + tau.

    Only positive paths are used by default, which is what makes the formula
    valid at every regular dominant rho."""
    lam = mu + tau
    if not in_lambda(s, tau) or not mu.is_dominant_lattice() or not lam.is_dominant_lattice():
        return ZERO
    d = int(s.ell(tau))
    total = ZERO
    for path in enumerate_paths(s, mu, lam, positive_only=positive_only):
        pts = [s.rho + t for t in path.steps]
        br = _bracket(h, pts, d)
        if not br:
            continue
        prod = br
        for i in range(1, d + 1):
            prod *= f_tau_value(s, path.steps[i] - path.steps[i - 1], pts[i])
            if not prod:
                break
        total += prod
    return total


def pieri_alternating(s: StructureData, h: Polynomial, mu: Weight, tau: Weight, values: str = "interp"):
    """a_tau^h(mu) from special values of p-polynomials only.

    ``values="paths"`` takes every special value from the positive-path sum,
    so no interpolation is involved at all."""
    if values == "interp":
        def pv(lam, nu):
            return interpolate_p(s, lam).poly.evaluate((s.rho + nu).coords)
    elif values == "paths":
        def pv(lam, nu):
            return p_value_by_paths(s, lam, nu)
    else:
        raise ValueError(f"unknown value source {values!r}")
    lam = mu + tau
    if not in_lambda(s, tau) or not lam.is_dominant_lattice():
        return ZERO
    total = ZERO
    for eta in enumerate_lambda(s, int(s.ell(tau))):
        nu = mu + eta
        if not nu.is_dominant_lattice() or not in_lambda(s, tau - eta):
            continue
        term = h.evaluate((s.rho + nu).coords)
        if not term:
            continue
        term *= pv(mu, nu) * pv(nu, lam)
        total += -term if int(s.ell(tau - eta)) % 2 else term
    return total


# ----------------------------------------------------------------------------
# virtual dimension
# ----------------------------------------------------------------------------

def virtual_dimension(s: StructureData, lam: Weight):
    """d_lambda = (-1)^ell(lambda) f_lambda(-rho) / f_lambda(rho + lambda)."""
    _check_mu(lam)
    try:
        a = f_tau_value(s, lam, -s.rho)
        b = f_tau_value(s, lam, s.rho + lam)
    except UndefinedValue as exc:
        raise UndefinedNormalizer(str(exc)) from exc
    if not b:
        raise UndefinedNormalizer(f"f_lambda(rho + lambda) vanishes for lambda = {lam.to_json()}")
    sign = -1 if int(s.ell(lam)) % 2 else 1
    return sign * a / b


def weyl_factor(s: StructureData, lam: Weight):
    out = ONE
    for d in s.delta_plus:
        out *= d.root(s.rho + lam) / d.root(s.rho)
    return out


def virtual_dimension_product(s: StructureData, lam: Weight):
    """Product over positive roots and Phi^+ of falling-factorial ratios."""
    _check_mu(lam)
    out = weyl_factor(s, lam)
    for omega in s.phi_plus:
        k = s.k(omega)
        m = int(omega(lam))
        z = omega(s.rho + lam)
        den = falling(z - k, m)
        if not den:
            raise UndefinedNormalizer(f"vanishing factor for omega = {omega.to_json()}")
        out *= falling(z + k - 1, m) / den
    return out


def virtual_dimension_half_integral(s: StructureData, lam: Weight):
    """The polynomial form, available when every k_omega lies in (1/2)Z_{>0}."""
    out = weyl_factor(s, lam)
    for omega in s.phi_plus:
        k = s.k(omega)
        if k <= 0 or (2 * k).denominator != 1:
            raise ValueError(f"k = {fmt_rat(k)} is not a positive half-integer")
        a, b = omega(s.rho + lam), omega(s.rho)
        for j in range(int(2 * k) - 1):
            t = -k + 1 + j
            out *= (a + t) / (b + t)
    return out


def dual_ratio(s: StructureData, lam: Weight, mu: Weight):
    """(-1)^ell(tau) f_tau(-rho-mu) / f_tau(rho+lambda) with tau = lambda - mu."""
    tau = lam - mu
    if not in_lambda(s, tau):
        raise ValueError("lambda - mu is not in Lambda")
    a = f_tau_value(s, tau, -(s.rho + mu))
    b = f_tau_value(s, tau, s.rho + lam)
    sign = -1 if int(s.ell(tau)) % 2 else 1
    return sign * a / b


def dual_identity_sides(s: StructureData, lam: Weight, mu: Weight) -> tuple:
    return virtual_dimension(s, lam) / virtual_dimension(s, mu), dual_ratio(s, lam, mu)


# ----------------------------------------------------------------------------
# b_tau^h at -rho-mu against Pieri coefficients of h^-
# ----------------------------------------------------------------------------

def b_value_positive(s: StructureData, h: Polynomial, mu: Weight, tau: Weight):
    """b_tau^h(-rho-mu) summed over paths tau_* with mu + tau_* positive."""
    d = int(s.ell(tau))
    z = -(s.rho + mu)
    total = ZERO
    for path in enumerate_paths(s, mu, mu + tau, positive_only=True):
        steps = [t - mu for t in path.steps]
        br = _bracket(h, [z - t for t in steps], d)
        if not br:
            continue
        prod = br
        for i in range(1, d + 1):
            prod *= f_tau_value(s, steps[i] - steps[i - 1], z - steps[i - 1])
            if not prod:
                break
        total += prod
    return total


@dataclass(frozen=True)
class PEquationCheck:
    mu: Weight
    tau: Weight
    route: str
    left: object
    right: object

    @property
    def holds(self) -> bool:
        return self.left == self.right


def pequation(s: StructureData, h: Polynomial, mu: Weight, tau: Weight, route: str = "symbolic") -> PEquationCheck:
    """Both sides of b_tau^h(-rho-mu) = (-1)^ell(tau) (d_lambda/d_mu) a_tau^{h^-}(mu).

    ``route="symbolic"`` evaluates the reduced path-sum coefficient, which is
    the statement at strongly dominant non-integral rho; ``route="positive"``
    restricts to positive paths. UndefinedValue propagates when the left side
    has a pole at -rho-mu."""
    lam = mu + tau
    if route == "symbolic":
        left = b_coeff_paths(s, h, tau).evaluate(-(s.rho + mu))
    elif route == "positive":
        left = b_value_positive(s, h, mu, tau)
    else:
        raise ValueError(f"unknown route {route!r}")
    a = pieri_direct(s, minus(h), mu).coefficient(tau)
    sign = -1 if int(s.ell(tau)) % 2 else 1
    right = sign * virtual_dimension(s, lam) / virtual_dimension(s, mu) * a
    return PEquationCheck(mu, tau, route, left, right)


def requires_non_integral(s: StructureData) -> bool:
    c = classify_rho(s)
    return not (c.strongly_dominant and c.non_integral)


__all__ = [
    "PieriTable", "pieri_direct", "pieri_path_formula", "pieri_alternating",
    "virtual_dimension", "virtual_dimension_product", "virtual_dimension_half_integral",
    "weyl_factor", "dual_ratio", "dual_identity_sides", "b_value_positive",
    "PEquationCheck", "pequation", "requires_non_integral",
]
