"""Euclidean interval domains and admissible ball families.

A ball B is admissible for the open interval domain when its double 2B
still fits inside; every estimate runs over a finite, deterministically
generated family of admissible balls and therefore yields a lower bound
for the true supremum.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Domain:
    """Bounded open interval (a, b) with Lebesgue measure."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.a < self.b):
            raise ValueError(f"empty domain ({self.a}, {self.b})")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def max_admissible_radius(self, center: float) -> float:
        return min(center - self.a, self.b - center) / 2.0


@dataclass(frozen=True)
class Ball:
    center: float
    radius: float

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    @property
    def lo(self) -> float:
        return self.center - self.radius

    @property
    def hi(self) -> float:
        return self.center + self.radius

    @property
    def length(self) -> float:
        return 2.0 * self.radius

    def doubled(self) -> "Ball":
        return Ball(self.center, 2.0 * self.radius)

    def admissible_in(self, domain: Domain) -> bool:
        return (self.center - 2.0 * self.radius >= domain.a
                and self.center + 2.0 * self.radius <= domain.b)

    def __str__(self) -> str:
        return f"B({self.center:g}, {self.radius:g})"


def _radius_ladder(rmax: float, n_radii: int, min_ratio: float) -> list:
    if n_radii < 1:
        raise ValueError("need at least one radius")
    if not (0 < min_ratio <= 1):
        raise ValueError("min_radius_ratio must lie in (0, 1]")
    if n_radii == 1:
        return [rmax]
    return [rmax * min_ratio ** (k / (n_radii - 1)) for k in range(n_radii)]


@dataclass(frozen=True)
class BallFamily:
    """Finite family of admissible balls with its generation recipe."""

    domain: Domain
    balls: tuple
    meta: tuple = field(default=())

    def __post_init__(self) -> None:
        for ball in self.balls:
            if not ball.admissible_in(self.domain):
                raise ValueError(f"{ball} is not admissible (its double leaves the domain)")

    def __len__(self) -> int:
        return len(self.balls)

    def __iter__(self):
        return iter(self.balls)

    def meta_dict(self) -> dict:
        return dict(self.meta)

    @staticmethod
    def centered(domain: Domain, n_radii: int = 20, min_radius_ratio: float = 1e-3,
                 center: float = None) -> "BallFamily":
        """Balls sharing one center (the domain midpoint unless overridden),
        radii on a geometric ladder down from the largest admissible one."""
        c = domain.midpoint if center is None else center
        rmax = domain.max_admissible_radius(c)
        if rmax <= 0:
            raise ValueError(f"center {c} admits no admissible ball")
        balls = tuple(Ball(c, r) for r in _radius_ladder(rmax, n_radii, min_radius_ratio))
        return BallFamily(domain, balls, (
            ("kind", "centered"), ("center", c), ("n_radii", n_radii),
            ("min_radius_ratio", min_radius_ratio)))

    @staticmethod
    def grid(domain: Domain, n_centers: int = 50, n_radii: int = 20,
             min_radius_ratio: float = 1e-3) -> "BallFamily":
        """Uniform grid of centers, geometric radius ladder per center."""
        if n_centers < 1:
            raise ValueError("need at least one center")
        balls = []
        for i in range(n_centers):
            c = domain.a + domain.length * (i + 0.5) / n_centers
            rmax = domain.max_admissible_radius(c)
            balls.extend(Ball(c, r) for r in _radius_ladder(rmax, n_radii, min_radius_ratio))
        return BallFamily(domain, tuple(balls), (
            ("kind", "grid"), ("n_centers", n_centers), ("n_radii", n_radii),
            ("min_radius_ratio", min_radius_ratio)))
