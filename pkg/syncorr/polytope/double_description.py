import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from syncorr.core.errors import EmptyPolytope, Infeasible, ParseError, Unbounded
from syncorr.core.types import RationalVector
from syncorr.core.utils import as_fraction, format_rational, scale_to_integers
from syncorr.polytope.linalg import affine_parametrization, dot, exact_rank, invert, nullspace, rref

Constraint = Tuple[RationalVector, Fraction]


def _vector(values: Sequence[Any]) -> RationalVector:
    return tuple(as_fraction(v) for v in values)


def _constraints_to_list(constraints: Sequence[Constraint]) -> List[Dict[str, Any]]:
    return [{"a": [format_rational(v) for v in a], "b": format_rational(b)} for a, b in constraints]


def _constraints_from_list(items: Sequence[Dict[str, Any]]) -> List[Constraint]:
    return [(_vector(item["a"]), as_fraction(item["b"])) for item in items]


@dataclass(frozen=True)
class HPolytope:
    """``{x : a.x <= b for (a, b) in inequalities, c.x = e for (c, e) in equations}``."""

    dim: int
    inequalities: Tuple[Constraint, ...]
    equations: Tuple[Constraint, ...] = ()

    def __post_init__(self):
        inequalities = tuple((_vector(a), as_fraction(b)) for a, b in self.inequalities)
        equations = tuple((_vector(c), as_fraction(e)) for c, e in self.equations)
        for a, b in inequalities + equations:
            if len(a) != self.dim:
                raise ValueError(f"Constraint of length {len(a)} in a {self.dim}-dimensional polytope")
        for a, b in inequalities:
            if not any(a) and b < 0:
                raise Infeasible(f"Inequality 0 <= {b} can never hold")
        for c, e in equations:
            if not any(c) and e != 0:
                raise Infeasible(f"Equation 0 = {e} can never hold")
        object.__setattr__(self, "inequalities", inequalities)
        object.__setattr__(self, "equations", equations)

    def contains(self, x: Sequence[Any]) -> bool:
        x = _vector(x)
        return all(dot(a, x) <= b for a, b in self.inequalities) and all(
            dot(c, x) == e for c, e in self.equations
        )

    def violated(self, x: Sequence[Any]) -> List[int]:
        """Indices of the inequalities ``x`` violates."""
        x = _vector(x)
        return [i for i, (a, b) in enumerate(self.inequalities) if dot(a, x) > b]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "inequalities": _constraints_to_list(self.inequalities),
            "equations": _constraints_to_list(self.equations),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HPolytope":
        try:
            return cls(
                int(data["dim"]),
                tuple(_constraints_from_list(data["inequalities"])),
                tuple(_constraints_from_list(data.get("equations", []))),
            )
        except (KeyError, TypeError) as e:
            raise ParseError(f"Malformed H-representation: {e}")


@dataclass(frozen=True)
class VPolytope:
    """Vertex list, deduplicated and sorted lexicographically."""

    dim: int
    vertices: Tuple[RationalVector, ...]

    def __post_init__(self):
        vertices = sorted({_vector(v) for v in self.vertices})
        for v in vertices:
            if len(v) != self.dim:
                raise ValueError(f"Vertex of length {len(v)} in a {self.dim}-dimensional polytope")
        object.__setattr__(self, "vertices", tuple(vertices))

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, point):
        return _vector(point) in self.vertices

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "count": len(self.vertices),
            "vertices": [[format_rational(v) for v in vertex] for vertex in self.vertices],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VPolytope":
        try:
            return cls(int(data["dim"]), tuple(_vector(v) for v in data["vertices"]))
        except (KeyError, TypeError) as e:
            raise ParseError(f"Malformed V-representation: {e}")


class DoubleDescription:
    """Extreme rays of the pointed cone ``{y : g.y >= 0 for g in rows}``.

    Rows are scaled to coprime integers so every ray stays integral. Rows are inserted in
    their given order after an initial simplicial cone built from the first independent
    ones. Zero sets are bitmasks over row indices.
    """

    logger = logging.getLogger("DoubleDescription")

    def __init__(self, rows: Sequence[Sequence[Any]], width: int, verify_adjacency: bool = True):
        self.width = width
        self.verify_adjacency = verify_adjacency
        self.rows: List[Tuple[int, ...]] = []
        for row in rows:
            if len(row) != width:
                raise ValueError(f"Row of length {len(row)} in a cone of width {width}")
            integers, _ = scale_to_integers(row)
            if any(integers):
                self.rows.append(tuple(integers))

    def _initial(self) -> Tuple[List[int], List[Tuple[Tuple[int, ...], int]]]:
        chosen: List[int] = []
        for i, row in enumerate(self.rows):
            if exact_rank([self.rows[j] for j in chosen] + [row]) > len(chosen):
                chosen.append(i)
            if len(chosen) == self.width:
                break
        if len(chosen) < self.width:
            lineality = nullspace(self.rows, self.width)[0]
            raise Unbounded(tuple(scale_to_integers(lineality)[0]))

        inverse = invert([self.rows[i] for i in chosen])
        rays = []
        for j in range(self.width):
            column = [inverse[i][j] for i in range(self.width)]
            ray = tuple(scale_to_integers(column)[0])
            zeros = 0
            for k, i in enumerate(chosen):
                if k != j:
                    zeros |= 1 << i
            rays.append((ray, zeros))
        return chosen, rays

    def _adjacent(self, common: int, p: int, n: int, rays: List[Tuple[Tuple[int, ...], int]]) -> bool:
        for k, (_, zeros) in enumerate(rays):
            if k != p and k != n and common & zeros == common:
                return False
        return True

    def _confirm(self, common: int):
        rows = [row for i, row in enumerate(self.rows) if common >> i & 1]
        if exact_rank(rows) != self.width - 2:
            raise RuntimeError("Combinatorial and algebraic adjacency tests disagree")

    def _insert(self, index: int, rays: List[Tuple[Tuple[int, ...], int]]):
        g = self.rows[index]
        bit = 1 << index
        values = [dot(g, ray) for ray, _ in rays]
        result = []
        for (ray, zeros), value in zip(rays, values):
            if value > 0:
                result.append((ray, zeros))
            elif value == 0:
                result.append((ray, zeros | bit))

        positive = [k for k, value in enumerate(values) if value > 0]
        negative = [k for k, value in enumerate(values) if value < 0]
        threshold = self.width - 2
        created = 0
        for p in positive:
            p_ray, p_zeros = rays[p]
            for n in negative:
                n_ray, n_zeros = rays[n]
                common = p_zeros & n_zeros
                if bin(common).count("1") < threshold:
                    continue
                if not self._adjacent(common, p, n, rays):
                    continue
                if self.verify_adjacency:
                    self._confirm(common)
                combined = [values[p] * b - values[n] * a for a, b in zip(p_ray, n_ray)]
                ray = tuple(scale_to_integers(combined)[0])
                result.append((ray, common | bit))
                created += 1
        self.logger.debug(
            f"row {index}: {len(positive)} positive, {len(negative)} negative, "
            f"{created} created, {len(result)} rays"
        )
        return result

    def run(self) -> List[Tuple[int, ...]]:
        chosen, rays = self._initial()
        for index in range(len(self.rows)):
            if index in chosen:
                continue
            rays = self._insert(index, rays)
            if not rays:
                break
        self.logger.debug(f"cone of width {self.width}: {len(rays)} extreme rays")
        return sorted(ray for ray, _ in rays)


def _combine(origin: Sequence[Fraction], directions: Sequence[Sequence[Fraction]], z: Sequence) -> RationalVector:
    point = list(origin)
    for coefficient, direction in zip(z, directions):
        if coefficient:
            point = [a + coefficient * b for a, b in zip(point, direction)]
    return tuple(point)


def dd_enumerate(h: HPolytope, verify_adjacency: bool = True) -> VPolytope:
    """Vertices of a bounded polytope by double description on its homogenization.

    Equations are eliminated first through an exact affine parametrization.
    """
    origin, directions = affine_parametrization(h.equations, h.dim)
    k = len(directions)
    rows = [[Fraction(1)] + [Fraction(0)] * k]
    for a, b in h.inequalities:
        reduced = [dot(a, d) for d in directions]
        slack = b - dot(a, origin)
        if not any(reduced):
            if slack < 0:
                raise Infeasible(f"Inequality {[format_rational(v) for v in a]} <= {b} fails on the affine hull")
            continue
        rows.append([slack] + [-c for c in reduced])
    if k == 0:
        return VPolytope(h.dim, (tuple(origin),))

    try:
        rays = DoubleDescription(rows, k + 1, verify_adjacency).run()
    except Unbounded as e:
        raise Unbounded(_combine([Fraction(0)] * h.dim, directions, e.ray[1:]))
    vertices = [ray for ray in rays if ray[0] > 0]
    if not vertices:
        raise Infeasible("Polytope has no vertices")
    for ray in rays:
        if ray[0] == 0:
            raise Unbounded(_combine([Fraction(0)] * h.dim, directions, ray[1:]))
    points = [
        _combine(origin, directions, [Fraction(c, ray[0]) for c in ray[1:]]) for ray in vertices
    ]
    return VPolytope(h.dim, tuple(points))


def affine_dimension(v: VPolytope) -> int:
    if not v.vertices:
        raise EmptyPolytope("Affine dimension of an empty polytope")
    base = v.vertices[0]
    differences = [[a - b for a, b in zip(vertex, base)] for vertex in v.vertices[1:]]
    return exact_rank(differences)


def facet_enumerate(v: VPolytope, verify_adjacency: bool = True) -> HPolytope:
    """Affine-hull equations and facet inequalities of ``conv(v.vertices)``.

    The facets are the extreme rays of ``{(b, a) : b - a.u >= 0 for every vertex u}``, with
    ``u`` the vertices projected onto pivot coordinates of their affine hull.
    """
    if not v.vertices:
        raise EmptyPolytope("Facets of an empty polytope")
    base = v.vertices[0]
    differences = [[a - b for a, b in zip(vertex, base)] for vertex in v.vertices[1:]]
    _, pivots = rref(differences, v.dim) if differences else ([], [])

    equations = []
    for c in nullspace(differences, v.dim):
        integers, _ = scale_to_integers(c)
        equations.append((tuple(Fraction(i) for i in integers), dot(integers, base)))

    k = len(pivots)
    inequalities = []
    if k > 0:
        rows = [[Fraction(1)] + [-vertex[c] for c in pivots] for vertex in v.vertices]
        for ray in DoubleDescription(rows, k + 1, verify_adjacency).run():
            if not any(ray[1:]):
                continue
            a = [Fraction(0)] * v.dim
            for c, value in zip(pivots, ray[1:]):
                a[c] = Fraction(value)
            inequalities.append((tuple(a), Fraction(ray[0])))
    return HPolytope(v.dim, tuple(inequalities), tuple(equations))


def contains(v: VPolytope, h: HPolytope) -> bool:
    """Every vertex of ``v`` satisfies ``h``."""
    return all(h.contains(vertex) for vertex in v.vertices)
