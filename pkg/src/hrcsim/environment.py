"""Spatial world: stores, work zone, walls, brick geometry and straight-line motion."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

Point = tuple[float, float]

# absorbs float noise when a distance lands exactly on the threshold
_EPS = 1e-9


class LayoutError(ValueError):
    pass


def distance(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle; stores are small regions, agents use the centre."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise LayoutError(f"degenerate region {self}")

    @property
    def center(self) -> Point:
        return ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)

    def contains(self, p: Point) -> bool:
        return self.x0 - _EPS <= p[0] <= self.x1 + _EPS and self.y0 - _EPS <= p[1] <= self.y1 + _EPS

    def overlaps(self, other: "Region") -> bool:
        return not (self.x1 <= other.x0 or other.x1 <= self.x0
                    or self.y1 <= other.y0 or other.y1 <= self.y0)


@dataclass(frozen=True)
class Wall:
    start_node: Point
    end_node: Point
    num_layers: int

    def __post_init__(self):
        if self.start_node == self.end_node:
            raise LayoutError("wall start_node and end_node coincide")
        if self.num_layers < 1:
            raise LayoutError("wall needs at least one layer")

    @property
    def length(self) -> float:
        return distance(self.start_node, self.end_node)

    @property
    def axis(self) -> Point:
        L = self.length
        return ((self.end_node[0] - self.start_node[0]) / L,
                (self.end_node[1] - self.start_node[1]) / L)


@dataclass(frozen=True)
class BrickSpec:
    brick_length: float = 0.24

    def __post_init__(self):
        if not self.brick_length > 0:
            raise LayoutError("brick_length must be positive")

    @property
    def safety_distance(self) -> float:
        return 10.0 * self.brick_length


def bricks_per_layer(wall: Wall, spec: BrickSpec) -> int:
    n = math.floor(wall.length / spec.brick_length + _EPS)
    if n < 1:
        raise LayoutError(
            f"wall of length {wall.length:.3f} m is shorter than one brick ({spec.brick_length} m)")
    return n


def brick_position(wall: Wall, layer: int, brick: int, spec: BrickSpec) -> Point:
    """Centre of the ``brick``-th brick laid in ``layer``.

    Layers share the 2D footprint; the layer only sets the laying order.
    Even layers run start -> end, odd layers run back, so the robot never
    travels a full wall length between layers.
    """
    n = bricks_per_layer(wall, spec)
    if not (0 <= layer < wall.num_layers) or not (0 <= brick < n):
        raise IndexError(f"brick ({layer}, {brick}) outside wall capacity ({wall.num_layers}x{n})")
    slot = brick if layer % 2 == 0 else n - 1 - brick
    s = (slot + 0.5) * spec.brick_length
    ax, ay = wall.axis
    return (wall.start_node[0] + ax * s, wall.start_node[1] + ay * s)


def laying_direction(wall: Wall, layer: int) -> Point:
    ax, ay = wall.axis
    return (ax, ay) if layer % 2 == 0 else (-ax, -ay)


def travel_time(a: Point, b: Point, speed: float) -> float:
    if not speed > 0:
        raise ValueError("speed must be positive")
    return distance(a, b) / speed


def within_safety_distance(worker: Point, robot: Point, spec: BrickSpec) -> bool:
    """True when the worker is closer than ten brick lengths (strict)."""
    return distance(worker, robot) < spec.safety_distance - _EPS


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return distance(p, a)
    u = max(0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2))
    return distance(p, (ax + u * dx, ay + u * dy))


@dataclass(frozen=True)
class SiteLayout:
    long_term_store: Region
    temp_store: Region
    robot_store: Region
    work_zone: Region
    walls: tuple[Wall, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "walls", tuple(self.walls))
        if not self.walls:
            raise LayoutError("layout needs at least one wall")
        for i, w in enumerate(self.walls):
            if not (self.work_zone.contains(w.start_node) and self.work_zone.contains(w.end_node)):
                raise LayoutError(f"wall {i} lies outside the work zone")
        stores = {"long_term_store": self.long_term_store, "temp_store": self.temp_store,
                  "robot_store": self.robot_store}
        names = list(stores)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                if stores[a].overlaps(stores[b]):
                    raise LayoutError(f"{a} overlaps {b}")

    def total_bricks(self, spec: BrickSpec) -> int:
        return sum(bricks_per_layer(w, spec) * w.num_layers for w in self.walls)

    def clear_of_walls(self, p: Point, margin: float) -> bool:
        return all(point_segment_distance(p, w.start_node, w.end_node) >= margin for w in self.walls)


def default_layout() -> SiteLayout:
    """60 m x 40 m work zone around a 50 m x 30 m footprint, 38920 bricks in total.

    Four perimeter walls of 56 layers plus a 7 m partition:
    2*(208 + 125)*56 + 29*56 = 38920.  The long-term store is a remote
    material yard 750 m west of the temp store, which sets the cost of a
    long-term supplement trip.
    """
    walls = (
        Wall((5.0, 5.0), (55.0, 5.0), 56),
        Wall((55.0, 5.0), (55.0, 35.0), 56),
        Wall((55.0, 35.0), (5.0, 35.0), 56),
        Wall((5.0, 35.0), (5.0, 5.0), 56),
        Wall((30.0, 5.5), (30.0, 12.5), 56),
    )
    return SiteLayout(
        long_term_store=Region(-753.5, -3.5, -743.5, 6.5),
        temp_store=Region(0.5, 0.5, 2.5, 2.5),
        robot_store=Region(0.5, 7.0, 2.5, 9.0),
        work_zone=Region(0.0, 0.0, 60.0, 40.0),
        walls=walls,
    )
