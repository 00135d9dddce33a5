import logging
import math

import numpy as np
from scipy.spatial import cKDTree

from models import Disk, PointSet, Polygon, SampledSet, Segment, SetUnion, as_complex
from utils.error_handlers import InvalidInputError, SeparationError

logger = logging.getLogger(__name__)

# Interior grids are this many times coarser than the boundary grid
INTERIOR_SPACING_FACTOR = 4.0

# Grids closer than SEPARATION_FACTOR / density cannot certify disjointness
SEPARATION_FACTOR = 10.0

# Absorbs rounding in products such as 2*pi*r*density that are exact integers in real arithmetic
_COUNT_SLACK = 1e-9


def _count(length, density):
    return max(1, math.ceil(length * density - _COUNT_SLACK))


def _circle(center, radius, count):
    angles = 2.0 * np.pi * np.arange(count) / count
    return center + radius * np.exp(1j * angles)


def _polygon_edges(vertices):
    a = np.asarray(vertices, dtype=complex)
    return a, np.roll(a, -1)


def _segment_distance(points, a, b):
    """Distance of every point to the segment [a, b] (vectorized)."""
    d = b - a
    t = np.clip(((points - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(points - (a + t * d))


def _inside_polygon(vertices, points):
    """Even-odd ray casting; points on edges may fall either way."""
    x, y = points.real, points.imag
    inside = np.zeros(points.shape, dtype=bool)
    starts, ends = _polygon_edges(vertices)
    with np.errstate(divide="ignore", invalid="ignore"):
        for a, b in zip(starts, ends):
            crosses = (a.imag > y) != (b.imag > y)
            x_cross = (b.real - a.real) * (y - a.imag) / (b.imag - a.imag) + a.real
            inside ^= crosses & (x < x_cross)
    return inside


class CompactSetService:
    """Deterministic discretization and geometry of compact set specs."""

    @staticmethod
    def sample(spec, density):
        """
        Discretize spec into a deterministic grid.

        Boundaries are sampled at ``density`` points per unit length (disk circles
        start at angle 0, segments and polygon edges include their endpoints).
        Disks and filled polygons also receive an interior grid
        INTERIOR_SPACING_FACTOR times coarser than the boundary one.

        :param spec: SetSpec to discretize.
        :param density: Points per unit length, > 0.
        :return: SampledSet.
        """
        if not (isinstance(density, (int, float)) and math.isfinite(density) and density > 0):
            raise InvalidInputError("density must be a positive number", field="density")
        points = CompactSetService._sample_points(spec, float(density))
        logger.debug("event=sample kind=%s density=%r points=%d", spec.kind, density, len(points))
        return SampledSet(
            spec=spec,
            points=points,
            boundary_density=float(density),
            interior_density=(density / INTERIOR_SPACING_FACTOR) ** 2,
        )

    @staticmethod
    def _sample_points(spec, density):
        if isinstance(spec, Disk):
            boundary = _circle(spec.center, spec.radius, _count(2 * np.pi * spec.radius, density))
            rings = math.floor(spec.radius * density / INTERIOR_SPACING_FACTOR)
            if rings == 0:
                return boundary
            interior = [np.array([spec.center])]
            for j in range(1, rings + 1):
                rho = spec.radius * j / (rings + 1)
                count = _count(2 * np.pi * rho, density / INTERIOR_SPACING_FACTOR)
                interior.append(_circle(spec.center, rho, count))
            return np.concatenate([boundary] + interior)

        if isinstance(spec, Segment):
            steps = _count(abs(spec.endpoint_b - spec.endpoint_a), density)
            t = np.arange(steps + 1) / steps
            return spec.endpoint_a + t * (spec.endpoint_b - spec.endpoint_a)

        if isinstance(spec, Polygon):
            starts, ends = _polygon_edges(spec.vertices)
            pieces = []
            for a, b in zip(starts, ends):
                steps = _count(abs(b - a), density)
                pieces.append(a + (np.arange(steps) / steps) * (b - a))
            boundary = np.concatenate(pieces)
            if not spec.filled:
                return boundary
            h = INTERIOR_SPACING_FACTOR / density
            xs = np.arange(starts.real.min() + h / 2, starts.real.max(), h)
            ys = np.arange(starts.imag.min() + h / 2, starts.imag.max(), h)
            lattice = (xs[np.newaxis, :] + 1j * ys[:, np.newaxis]).reshape(-1)
            return np.concatenate([boundary, lattice[_inside_polygon(spec.vertices, lattice)]])

        if isinstance(spec, SetUnion):
            return np.concatenate(
                [CompactSetService._sample_points(m, density) for m in spec.members]
            )

        if isinstance(spec, PointSet):
            return np.array(spec.points, dtype=complex)

        raise InvalidInputError(f"unknown set type {type(spec).__name__}", field="type")

    @staticmethod
    def translate(spec, delta):
        """Shift every geometric datum of spec by delta."""
        delta = as_complex(delta, "delta")
        if delta == 0:
            return spec
        if isinstance(spec, Disk):
            return Disk(center=spec.center + delta, radius=spec.radius)
        if isinstance(spec, Segment):
            return Segment(endpoint_a=spec.endpoint_a + delta, endpoint_b=spec.endpoint_b + delta)
        if isinstance(spec, Polygon):
            return Polygon(vertices=tuple(v + delta for v in spec.vertices), filled=spec.filled)
        if isinstance(spec, SetUnion):
            return SetUnion(
                members=tuple(CompactSetService.translate(m, delta) for m in spec.members)
            )
        if isinstance(spec, PointSet):
            return PointSet(points=tuple(p + delta for p in spec.points))
        raise InvalidInputError(f"unknown set type {type(spec).__name__}", field="type")

    @staticmethod
    def discrete_sup_norm(values):
        """Max modulus over a non-empty list of values."""
        values = np.asarray(values, dtype=complex).reshape(-1)
        if values.size == 0:
            raise InvalidInputError("sup norm over an empty grid", field="values")
        return float(np.max(np.abs(values)))

    @staticmethod
    def min_pairwise_distance(a, b):
        """Smallest distance between a point of grid a and a point of grid b."""
        if not len(a) or not len(b):
            raise InvalidInputError("distance to an empty grid", field="grid")
        tree = cKDTree(np.column_stack([b.points.real, b.points.imag]))
        distances, _ = tree.query(np.column_stack([a.points.real, a.points.imag]), k=1)
        return float(np.min(distances))

    @staticmethod
    def assert_separated(a, b, density, names=("K", "L")):
        """
        Raise SeparationError when two grids are closer than SEPARATION_FACTOR / density.

        :return: The measured distance.
        """
        distance = CompactSetService.min_pairwise_distance(a, b)
        threshold = SEPARATION_FACTOR / density
        if distance < threshold:
            raise SeparationError(
                f"{names[0]} and {names[1]} grids are {distance:.3g} apart, below the "
                f"separation threshold {threshold:.3g} at density {density:g}",
                field=names[0],
            )
        return distance

    @staticmethod
    def interior_mask(spec, points, margin=0.0):
        """
        Flag points lying in the interior of spec, at least ``margin`` from its boundary.

        Segments and point sets have empty interior.
        """
        points = np.asarray(points, dtype=complex).reshape(-1)
        if isinstance(spec, Disk):
            return np.abs(points - spec.center) < spec.radius - margin
        if isinstance(spec, Polygon):
            if not spec.filled:
                return np.zeros(points.shape, dtype=bool)
            mask = _inside_polygon(spec.vertices, points)
            starts, ends = _polygon_edges(spec.vertices)
            for a, b in zip(starts, ends):
                mask &= _segment_distance(points, a, b) > margin
            return mask
        if isinstance(spec, SetUnion):
            mask = np.zeros(points.shape, dtype=bool)
            for member in spec.members:
                mask |= CompactSetService.interior_mask(member, points, margin)
            return mask
        return np.zeros(points.shape, dtype=bool)

    @staticmethod
    def contains_interior(spec, z, margin=0.0):
        """True when z is an interior point of spec."""
        z = as_complex(z, "z")
        return bool(CompactSetService.interior_mask(spec, [z], margin)[0])
