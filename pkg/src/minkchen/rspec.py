"""Analytic radius functions ``r(u)`` with derivatives up to order three.

Grammar: ``const:R``, ``cosh:a`` (``cosh(a u)``), ``poly:c0,c1,...``
(``c0 + c1 u + ...``) and ``sqrtquad`` / ``sqrtquad:a`` (``sqrt(u^2 + a^2)``).
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P


@dataclass(frozen=True)
class RSpec:
    kind: str
    params: tuple

    def __str__(self):
        if self.kind == "sqrtquad" and self.params == (1.0,):
            return "sqrtquad"
        return f"{self.kind}:" + ",".join(repr(p) for p in self.params)

    def derivs(self, u):
        """Return ``(r, r', r'', r''')`` at ``u``."""
        u = float(u)
        if self.kind == "const":
            return self.params[0], 0.0, 0.0, 0.0
        if self.kind == "cosh":
            a = self.params[0]
            c, s = math.cosh(a * u), math.sinh(a * u)
            return c, a * s, a * a * c, a ** 3 * s
        if self.kind == "poly":
            c = np.array(self.params, dtype=float)
            out = []
            for _ in range(4):
                out.append(float(P.polyval(u, c)) if c.size else 0.0)
                c = P.polyder(c) if c.size > 1 else np.zeros(0)
            return tuple(out)
        if self.kind == "sqrtquad":
            a = self.params[0]
            r = math.sqrt(u * u + a * a)
            return r, u / r, a * a / r ** 3, -3.0 * a * a * u / r ** 5
        raise ValueError(f"unknown r-spec kind {self.kind!r}")

    def __call__(self, u):
        return self.derivs(u)[0]


def parse_rspec(text):
    """Parse an r-spec string such as ``"cosh:2"`` or ``"poly:1,0,0.5"``."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    try:
        params = tuple(float(p) for p in rest.split(",") if p.strip())
    except ValueError as exc:
        raise ValueError(f"bad r-spec parameters in {text!r}") from exc
    if kind == "const":
        if len(params) != 1 or params[0] <= 0:
            raise ValueError("const:R needs a single positive R")
    elif kind == "cosh":
        if len(params) != 1:
            raise ValueError("cosh:a needs a single parameter")
    elif kind == "poly":
        if not params:
            raise ValueError("poly needs at least one coefficient")
    elif kind == "sqrtquad":
        if not params:
            params = (1.0,)
        if len(params) != 1 or params[0] == 0:
            raise ValueError("sqrtquad:a needs a single nonzero a")
    else:
        raise ValueError(f"unknown r-spec kind {kind!r}")
    return RSpec(kind, params)
