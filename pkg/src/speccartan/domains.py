"""Planar domains in which spectra are required to live."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SHAPES = ("disc", "halfplane", "annulus", "complement-of-finite", "whole-plane")


@dataclass(frozen=True)
class DomainSpec:
    """An open planar domain.

    ``params`` by shape:

    * ``disc``: ``center``, ``radius``
    * ``halfplane``: ``normal`` (nonzero complex), ``offset``; the set ``Re(z conj(u)) < offset``
      with ``u = normal / |normal|``
    * ``annulus``: ``center``, ``r_in``, ``r_out``
    * ``complement-of-finite``: ``points``
    * ``whole-plane``: none
    """

    shape: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown domain shape {self.shape!r}; expected one of {SHAPES}")
        p = self.params
        if self.shape == "disc" and not p["radius"] > 0:
            raise ValueError("disc radius must be positive")
        if self.shape == "annulus" and not 0 <= p["r_in"] < p["r_out"]:
            raise ValueError("annulus needs 0 <= r_in < r_out")
        if self.shape == "halfplane" and p["normal"] == 0:
            raise ValueError("halfplane normal must be nonzero")

    # constructors
    @classmethod
    def disc(cls, center=0.0, radius=1.0):
        return cls("disc", {"center": complex(center), "radius": float(radius)})

    @classmethod
    def halfplane(cls, normal=1.0, offset=0.0):
        return cls("halfplane", {"normal": complex(normal), "offset": float(offset)})

    @classmethod
    def annulus(cls, center=0.0, r_in=0.5, r_out=1.0):
        return cls("annulus", {"center": complex(center), "r_in": float(r_in), "r_out": float(r_out)})

    @classmethod
    def complement_of(cls, points):
        return cls("complement-of-finite", {"points": tuple(complex(p) for p in points)})

    @classmethod
    def whole_plane(cls):
        return cls("whole-plane", {})

    # geometry
    def boundary_distance(self, z: complex) -> float:
        """Signed distance to the complement: positive inside, nonpositive outside."""
        z = complex(z)
        p = self.params
        if self.shape == "disc":
            return p["radius"] - abs(z - p["center"])
        if self.shape == "halfplane":
            u = p["normal"] / abs(p["normal"])
            return p["offset"] - (z * u.conjugate()).real
        if self.shape == "annulus":
            d = abs(z - p["center"])
            return min(d - p["r_in"], p["r_out"] - d)
        if self.shape == "complement-of-finite":
            if not p["points"]:
                return math.inf
            return min(abs(z - q) for q in p["points"])
        return math.inf

    def contains(self, z: complex) -> bool:
        return self.boundary_distance(z) > 0

    def contains_all(self, values) -> bool:
        return all(self.contains(v) for v in np.atleast_1d(values))

    # metadata
    @property
    def complement_cardinality_class(self) -> dict:
        if self.shape == "whole-plane":
            return {"class": "empty"}
        if self.shape == "complement-of-finite":
            return {"class": "finite", "k": len(self.params["points"])}
        return {"class": "at_least_2n"}

    def complement_at_least(self, n: int) -> bool:
        """Whether the complement has at least ``2n`` points."""
        cls = self.complement_cardinality_class
        if cls["class"] == "at_least_2n":
            return True
        if cls["class"] == "finite":
            return cls["k"] >= 2 * n
        return False

    def to_json(self) -> dict:
        out = {"shape": self.shape}
        for k, v in self.params.items():
            if isinstance(v, complex):
                out[k] = [v.real, v.imag]
            elif isinstance(v, tuple):
                out[k] = [[q.real, q.imag] for q in v]
            else:
                out[k] = v
        out["complement"] = self.complement_cardinality_class
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DomainSpec":
        shape = obj["shape"]
        c = lambda v: complex(v[0], v[1])  # noqa: E731
        if shape == "disc":
            return cls.disc(c(obj["center"]), obj["radius"])
        if shape == "halfplane":
            return cls.halfplane(c(obj["normal"]), obj["offset"])
        if shape == "annulus":
            return cls.annulus(c(obj["center"]), obj["r_in"], obj["r_out"])
        if shape == "complement-of-finite":
            return cls.complement_of([c(q) for q in obj["points"]])
        if shape == "whole-plane":
            return cls.whole_plane()
        raise ValueError(f"unknown domain shape {shape!r}")
