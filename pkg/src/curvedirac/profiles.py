"""Time profiles of the conformal factor Omega(t) (the FRW scale factor)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .exceptions import DomainError

__all__ = ["ConformalProfile", "profile_from_config"]


@dataclass(frozen=True)
class ConformalProfile:
    """Named conformal-factor profile.

    ``kind`` is one of ``"constant"``, ``"squarehat"``, ``"inverted_gaussian"``
    or ``"custom"``.  Use the classmethod constructors.

    The square hat is defined through Omega^2: it equals 1 for ``t < 0`` and
    ``t > t0`` and ``inner_sq`` for ``0 < t < t0``.  With the default
    ``inner_sq = -1`` Omega is imaginary inside, which only makes sense for
    the scalar mode equation; spinor evolution needs ``inner_sq > 0``.
    """

    kind: str
    c: float = 1.0
    t0: float = 0.0
    inner_sq: float = -1.0
    depth: float = 0.0
    center: float = 0.0
    width: float = 1.0
    sampler: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @classmethod
    def constant(cls, c: float = 1.0) -> "ConformalProfile":
        return cls("constant", c=float(c))

    @classmethod
    def squarehat(cls, t0: float, inner_sq: float = -1.0) -> "ConformalProfile":
        if not t0 >= 0:
            raise ValueError(f"square hat duration t0 must be >= 0, got {t0}")
        return cls("squarehat", t0=float(t0), inner_sq=float(inner_sq))

    @classmethod
    def inverted_gaussian(cls, depth: float, center: float, width: float) -> "ConformalProfile":
        if not 0 < depth < 1:
            raise ValueError(f"inverted Gaussian depth must lie in (0, 1), got {depth}")
        if not width > 0:
            raise ValueError(f"inverted Gaussian width must be positive, got {width}")
        return cls("inverted_gaussian", depth=float(depth), center=float(center), width=float(width))

    @classmethod
    def custom(cls, sampler: Callable[[np.ndarray], np.ndarray]) -> "ConformalProfile":
        return cls("custom", sampler=sampler)

    # ------------------------------------------------------------------
    def omega_sq(self, t) -> np.ndarray:
        """Omega^2(t), real and possibly negative (square hat)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "squarehat":
            inside = (t > 0) & (t < self.t0)
            return np.where(inside, self.inner_sq, 1.0)
        return np.asarray(self.omega(t)) ** 2

    def omega(self, t) -> np.ndarray:
        """Real conformal factor Omega(t)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return np.full(t.shape, self.c)
        if self.kind == "inverted_gaussian":
            return 1.0 - self.depth * np.exp(-((t - self.center) ** 2) / (2 * self.width**2))
        if self.kind == "squarehat":
            if self.inner_sq < 0:
                raise DomainError("square hat with Omega^2 < 0 has no real conformal factor")
            inside = (t > 0) & (t < self.t0)
            return np.where(inside, np.sqrt(self.inner_sq), 1.0)
        if self.kind == "custom":
            return np.asarray(self.sampler(t), dtype=float)
        raise ValueError(f"unknown profile kind {self.kind!r}")

    def omega_dot(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "inverted_gaussian":
            s = (t - self.center) / self.width**2
            return self.depth * s * np.exp(-((t - self.center) ** 2) / (2 * self.width**2))
        if self.kind in ("constant", "squarehat"):
            return np.zeros(t.shape)
        h = 1e-5 * np.maximum(1.0, np.abs(t))
        return (self.omega(t + h) - self.omega(t - h)) / (2 * h)

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        """Times where the profile is discontinuous."""
        if self.kind == "squarehat":
            return (0.0, self.t0)
        return ()

    def flat_window(self, tol: float = 0.0) -> Tuple[float, float]:
        """Interval outside of which |Omega^2 - 1| <= tol (best effort)."""
        if self.kind == "squarehat":
            return (0.0, self.t0)
        if self.kind == "inverted_gaussian":
            # 1 - (1 - d e^{-s^2/2})^2 <= 2 d e^{-s^2/2}
            target = max(tol, 1e-300) / (2 * self.depth)
            s = np.sqrt(max(0.0, -2 * np.log(target))) if target < 1 else 0.0
            return (self.center - s * self.width, self.center + s * self.width)
        if self.kind == "constant":
            return (0.0, 0.0)
        raise ValueError("flat window is unknown for custom profiles")

    def to_config(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "c": self.c}
        if self.kind == "squarehat":
            return {"kind": "squarehat", "t0": self.t0, "inner_sq": self.inner_sq}
        if self.kind == "inverted_gaussian":
            return {
                "kind": "inverted_gaussian",
                "depth": self.depth,
                "center": self.center,
                "width": self.width,
            }
        raise ValueError("custom profiles cannot be serialised")


_PROFILE_KEYS = {
    "constant": {"c"},
    "flat": set(),
    "squarehat": {"t0", "inner_sq"},
    "inverted_gaussian": {"depth", "center", "width"},
    "gaussian": {"depth", "center", "width"},
}


def profile_from_config(cfg: Optional[dict]) -> ConformalProfile:
    """Build a profile from its JSON form, e.g. ``{"kind": "squarehat", "t0": 1}``."""
    if cfg is None:
        return ConformalProfile.constant(1.0)
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    if kind not in _PROFILE_KEYS:
        raise ValueError(f"profile.kind must be one of {sorted(_PROFILE_KEYS)}, got {kind!r}")
    unknown = set(cfg) - _PROFILE_KEYS[kind]
    if unknown:
        raise ValueError(f"unknown profile keys for {kind}: {sorted(unknown)}")
    if kind == "flat":
        return ConformalProfile.constant(1.0)
    if kind == "constant":
        return ConformalProfile.constant(cfg.get("c", 1.0))
    if kind == "squarehat":
        if "t0" not in cfg:
            raise ValueError("profile.t0 is required for the square hat")
        return ConformalProfile.squarehat(cfg["t0"], cfg.get("inner_sq", -1.0))
    missing = {"depth", "center", "width"} - set(cfg)
    if missing:
        raise ValueError(f"missing inverted Gaussian profile keys: {sorted(missing)}")
    return ConformalProfile.inverted_gaussian(cfg["depth"], cfg["center"], cfg["width"])
