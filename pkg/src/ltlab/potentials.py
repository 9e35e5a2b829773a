"""Non-negative radial potential families with closed-form L^p integrals.

A potential is ``alpha * profile(x)`` where ``alpha >= 0`` is the coupling.
Families:

``gaussian``  ``amp * exp(-|x|^2 / width^2)``
``bump``      ``amp * (1 - |x|^2 / radius^2)_+^2``
``sech2``     ``amp * sech(x / width)^2`` (d = 1 only)

Potentials are written as ``"family:param=value,..."``, e.g.
``"gaussian:amp=3.0,width=1.0"``; accepted parameters are ``amp``,
``width``, ``radius``, ``alpha`` and ``d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, DomainError
from .specfun import gamma_fn, gauss_legendre, lgamma_fn

__all__ = ["Potential", "parse_potential", "FAMILIES"]

FAMILIES = ("gaussian", "bump", "sech2")
_DEFAULTS = {
    "gaussian": {"amp": 1.0, "width": 1.0},
    "bump": {"amp": 1.0, "radius": 1.0},
    "sech2": {"amp": 1.0, "width": 1.0},
}
_GRADED_PANELS = 40


def _graded(f, a, b, rule):
    """Integrate ``f`` over [a, b] when ``f`` has an algebraic endpoint
    singularity at ``b``: plain rule on the first half, geometric panels
    towards ``b`` on the second."""
    nodes, weights = rule.nodes, rule.weights

    def panel(lo, hi):
        x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes
        return 0.5 * (hi - lo) * float(np.dot(weights, f(x)))

    h = b - a
    total = panel(a, a + 0.5 * h)
    for j in range(1, _GRADED_PANELS + 1):
        total += panel(b - h * 2.0 ** (-j), b - h * 2.0 ** (-j - 1))
    return total


@dataclass(frozen=True)
class Potential:
    """A scaled radial profile ``alpha * v(x)`` on R^d.

    Attributes
    ----------
    family : str
        One of ``gaussian``, ``bump``, ``sech2``.
    d : int
        Dimension, 1 to 3.
    amp : float
        Amplitude (>= 0).
    scale : float
        Width (gaussian, sech2) or radius (bump).
    alpha : float
        Coupling (>= 0).
    """

    family: str
    d: int = 1
    amp: float = 1.0
    scale: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown potential family {self.family!r}")
        if self.d not in (1, 2, 3):
            raise ConfigurationError(f"d must be 1, 2 or 3, got {self.d!r}")
        if self.family == "sech2" and self.d != 1:
            raise ConfigurationError("sech2 is only defined for d = 1")
        for name in ("amp", "scale", "alpha"):
            val = float(getattr(self, name))
            if not math.isfinite(val) or val < 0:
                raise ConfigurationError(f"{name} must be finite and >= 0, got {val!r}")
            object.__setattr__(self, name, val)
        if self.scale == 0:
            raise ConfigurationError("width/radius must be positive")

    # -- construction -----------------------------------------------------
    @classmethod
    def gaussian(cls, amp=1.0, width=1.0, d=1, alpha=1.0):
        return cls("gaussian", d, amp, width, alpha)

    @classmethod
    def bump(cls, amp=1.0, radius=1.0, d=1, alpha=1.0):
        return cls("bump", d, amp, radius, alpha)

    @classmethod
    def sech2(cls, amp=1.0, width=1.0, alpha=1.0):
        return cls("sech2", 1, amp, width, alpha)

    def with_coupling(self, alpha):
        """Same profile at coupling ``alpha``."""
        return replace(self, alpha=float(alpha))

    def scaled(self, c):
        """The potential ``c * v``."""
        return replace(self, alpha=self.alpha * float(c))

    @property
    def peak(self):
        """``max v = alpha * amp``."""
        return self.alpha * self.amp

    @property
    def spec(self):
        """Canonical specification string."""
        key = "radius" if self.family == "bump" else "width"
        parts = [f"amp={self.amp:.17g}", f"{key}={self.scale:.17g}"]
        if self.alpha != 1.0:
            parts.append(f"alpha={self.alpha:.17g}")
        if self.d != 1:
            parts.append(f"d={self.d}")
        return f"{self.family}:" + ",".join(parts)

    def __str__(self):
        return self.spec

    # -- evaluation -------------------------------------------------------
    def radial(self, r):
        """Profile value at radius ``r`` (array-aware), including alpha."""
        r = np.asarray(r, dtype=float)
        c = self.peak
        s = self.scale
        if self.family == "gaussian":
            return c * np.exp(-(r / s) ** 2)
        if self.family == "bump":
            return c * np.clip(1.0 - (r / s) ** 2, 0.0, None) ** 2
        return c / np.cosh(np.clip(r / s, -700, 700)) ** 2

    def __call__(self, *coords):
        """Evaluate at points; pass one array per coordinate axis."""
        if len(coords) != self.d:
            raise DomainError(f"expected {self.d} coordinate arrays, got {len(coords)}")
        r2 = sum(np.asarray(c, dtype=float) ** 2 for c in coords)
        return self.radial(np.sqrt(r2))

    def support_radius(self, rel=1e-14):
        """Radius outside which ``v < rel * max v``."""
        s = self.scale
        if self.family == "gaussian":
            return s * math.sqrt(math.log(1.0 / rel))
        if self.family == "bump":
            return s
        return s * math.acosh(rel ** -0.5)

    # -- closed-form integrals ---------------------------------------------
    def lp_integral(self, p):
        """``int v(x)^p dx`` in closed form, ``p > 0``."""
        p = float(p)
        if p <= 0:
            raise DomainError(f"p must be positive, got {p}")
        c = self.peak
        if c == 0.0:
            return 0.0
        s, d = self.scale, self.d
        if self.family == "gaussian":
            return c ** p * (math.pi * s * s / p) ** (d / 2)
        if self.family == "bump":
            if 2 * p + 1 + d / 2 < 150:
                g = gamma_fn(2 * p + 1) / gamma_fn(2 * p + 1 + d / 2)
            else:
                g = math.exp(lgamma_fn(2 * p + 1) - lgamma_fn(2 * p + 1 + d / 2))
            return c ** p * s ** d * math.pi ** (d / 2) * g
        if p < 100:
            g = gamma_fn(p) / gamma_fn(p + 0.5)
        else:
            g = math.exp(lgamma_fn(p) - lgamma_fn(p + 0.5))
        return c ** p * s * math.sqrt(math.pi) * g

    def level_radius(self, level):
        """Radius where ``v`` drops to ``level`` (0 if ``level >= max v``)."""
        c = self.peak
        if level >= c:
            return 0.0
        if level <= 0:
            return math.inf if self.family != "bump" else self.scale
        q = level / c
        s = self.scale
        if self.family == "gaussian":
            return s * math.sqrt(-math.log(q))
        if self.family == "bump":
            return s * math.sqrt(1.0 - math.sqrt(q))
        return s * math.acosh(1.0 / math.sqrt(q))

    def shifted_integral(self, tau, p, order=20):
        """``int (v(x)^2 - tau)_+^p dx``.

        Closed form at ``tau = 0``; otherwise the integration region
        ``|x| < r_tau`` is known in closed form and the radial integral is
        done by Gauss-Legendre with panels graded towards ``r_tau``, where
        the integrand vanishes like a power.
        """
        tau = float(tau)
        if tau < 0:
            raise DomainError("tau must be >= 0")
        if tau == 0.0:
            return self.lp_integral(2 * p)
        r_tau = self.level_radius(math.sqrt(tau))
        if r_tau == 0.0:
            return 0.0
        rule = gauss_legendre(order)

        # surface area of the unit sphere in R^d
        area = 2 * math.pi ** (self.d / 2) / gamma_fn(self.d / 2)

        def f(r):
            return area * r ** (self.d - 1) * np.clip(self.radial(r) ** 2 - tau, 0.0, None) ** p
        return _graded(f, 0.0, r_tau, rule)


def parse_potential(text):
    """Parse ``"family:param=value,..."`` into a :class:`Potential`.

    Raises
    ------
    ConfigurationError
        On unknown families or parameters, or malformed numbers.
    """
    if not isinstance(text, str) or not text.strip():
        raise ConfigurationError("empty potential specification")
    fam, _, rest = text.strip().partition(":")
    fam = fam.strip().lower()
    if fam not in FAMILIES:
        raise ConfigurationError(f"unknown potential family {fam!r}; choose from {FAMILIES}")
    params = dict(_DEFAULTS[fam])
    params["alpha"] = 1.0
    params["d"] = 1
    scale_key = "radius" if fam == "bump" else "width"
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        key = key.strip().lower()
        if not eq:
            raise ConfigurationError(f"expected param=value, got {item!r}")
        if key not in ("amp", "alpha", "d", scale_key):
            raise ConfigurationError(f"unknown parameter {key!r} for family {fam!r}")
        try:
            params[key] = int(val) if key == "d" else float(val)
        except ValueError:
            raise ConfigurationError(f"bad value for {key}: {val!r}") from None
    return Potential(fam, params["d"], params["amp"], params[scale_key], params["alpha"])
