"""Fans in N_R: validation, completeness, products, and the built-in examples."""

from __future__ import annotations

import enum
import itertools
import json
import logging
from dataclasses import dataclass
from functools import cmp_to_key
from pathlib import Path
from typing import Iterable, Sequence

from . import _exact
from .errors import FanError
from .lattice import FractionalPoint, Vector, as_vector, dot, primitive

log = logging.getLogger(__name__)


class Completeness(enum.Enum):
    COMPLETE = "verified-complete"
    INCOMPLETE = "verified-incomplete"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class Cone:
    ray_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ray_indices", tuple(sorted(self.ray_indices)))

    def __len__(self):
        return len(self.ray_indices)


@dataclass(frozen=True)
class Fan:
    """A fan given by primitive rays and maximal cones (as ray-index sets).

    Build instances with :func:`build_fan`, which validates the input.
    """

    dim: int
    rays: tuple[Vector, ...]
    max_cones: tuple[Cone, ...]
    completeness: Completeness

    def cone_rays(self, cone: Cone) -> list[Vector]:
        return [self.rays[i] for i in cone.ray_indices]

    @property
    def is_complete(self) -> bool:
        return self.completeness is Completeness.COMPLETE

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "rays": [list(v) for v in self.rays],
            "max_cones": [list(c.ray_indices) for c in self.max_cones],
        }


def _cross(a: Vector, b: Vector) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _half(v: Vector) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(a: Vector, b: Vector) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = _cross(a, b)
    return -1 if c > 0 else (1 if c < 0 else 0)


def is_pointed(rays: Sequence[Vector]) -> bool:
    """A cone is strongly convex iff some u pairs strictly positively with every generator."""
    if not rays:
        return True
    if _exact.rank(rays) == len(rays):
        return True
    system = _exact.make_system((v, 1) for v in rays)
    return _exact.is_feasible(system, len(rays[0]))


def _validate_2d(rays: Sequence[Vector], cones: Sequence[Cone]) -> None:
    for cone in cones:
        if len(cone) > 2:
            raise FanError(f"cone {list(cone.ray_indices)} has more than two generators in dimension 2")
        if len(cone) == 2:
            i, j = cone.ray_indices
            a, b = rays[i], rays[j]
            if _cross(a, b) < 0:
                a, b = b, a
            for k, w in enumerate(rays):
                if k not in (i, j) and _cross(a, w) > 0 and _cross(w, b) > 0:
                    raise FanError(
                        f"ray {list(w)} lies inside cone {list(cone.ray_indices)}; cones do not meet along faces"
                    )


def _completeness(dim: int, rays: Sequence[Vector], cones: Sequence[Cone]) -> Completeness:
    if dim == 1:
        signs = {v[0] > 0 for v in rays}
        return Completeness.COMPLETE if signs == {True, False} else Completeness.INCOMPLETE
    if dim == 2:
        if len(rays) < 3:
            return Completeness.INCOMPLETE
        two_cones = {frozenset(c.ray_indices) for c in cones if len(c) == 2}
        order = sorted(range(len(rays)), key=cmp_to_key(lambda i, j: _angle_cmp(rays[i], rays[j])))
        for i, j in zip(order, order[1:] + order[:1]):
            if _cross(rays[i], rays[j]) <= 0 or frozenset((i, j)) not in two_cones:
                return Completeness.INCOMPLETE
        return Completeness.COMPLETE
    # facet pairing on pure, full-dimensional, simplicial fans
    facet_count: dict[tuple[int, ...], int] = {}
    for cone in cones:
        if len(cone) != dim or _exact.rank([rays[i] for i in cone.ray_indices]) != dim:
            return Completeness.UNVERIFIED
        for facet in itertools.combinations(cone.ray_indices, dim - 1):
            facet_count[facet] = facet_count.get(facet, 0) + 1
    if all(c == 2 for c in facet_count.values()):
        return Completeness.COMPLETE
    return Completeness.UNVERIFIED


def build_fan(dim: int, rays: Iterable, max_cones: Iterable[Iterable[int]]) -> Fan:
    """Validate and build a fan.

    Non-primitive rays are replaced by their primitive generators with a
    warning.  Raises FanError on zero or duplicate rays, unused rays,
    non-pointed cones, and (in dimension 2) cones overlapping in their interiors.
    """
    if dim < 1:
        raise FanError(f"dimension must be >= 1, got {dim}")
    prim = []
    for v in rays:
        v = as_vector(v)
        if len(v) != dim:
            raise FanError(f"ray {list(v)} does not have dimension {dim}")
        if not any(v):
            raise FanError("zero ray: not a ray direction")
        p = primitive(v)
        if p != v:
            log.warning("ray %s is not primitive; using %s", list(v), list(p))
        prim.append(p)
    if len(set(prim)) != len(prim):
        raise FanError("duplicate rays")
    cones = []
    for c in max_cones:
        idx = [int(i) for i in c]
        if not idx:
            raise FanError("empty maximal cone")
        if len(set(idx)) != len(idx) or any(not 0 <= i < len(prim) for i in idx):
            raise FanError(f"bad ray indices in cone {idx}")
        cones.append(Cone(tuple(idx)))
    if len(set(cones)) != len(cones):
        raise FanError("duplicate maximal cones")
    used = {i for c in cones for i in c.ray_indices}
    unused = sorted(set(range(len(prim))) - used)
    if unused:
        raise FanError(f"ray(s) {unused} are not used by any cone")
    for cone in cones:
        if not is_pointed([prim[i] for i in cone.ray_indices]):
            raise FanError(f"cone {list(cone.ray_indices)} is not pointed (contains a line)")
    if dim == 2:
        _validate_2d(prim, cones)
    return Fan(dim, tuple(prim), tuple(cones), _completeness(dim, prim, cones))


def is_complete(fan: Fan) -> Completeness:
    return fan.completeness


def product_fan(f: Fan, g: Fan) -> Fan:
    """The fan of X(f) x X(g) in (N_f + N_g)_R."""
    zf, zg = (0,) * f.dim, (0,) * g.dim
    rays = [v + zg for v in f.rays] + [zf + w for w in g.rays]
    off = len(f.rays)
    cones = [
        a.ray_indices + tuple(off + j for j in b.ray_indices)
        for a in f.max_cones
        for b in g.max_cones
    ]
    return build_fan(f.dim + g.dim, rays, cones)


def power_fan(fan: Fan, n: int) -> Fan:
    """fan x fan x ... x fan (n factors), slots concatenated left to right."""
    if n < 1:
        raise FanError(f"power must be >= 1, got {n}")
    out = fan
    for _ in range(n - 1):
        out = product_fan(out, fan)
    return out


def diagonal_cone(fan: Fan, cone: Cone, n: int) -> Cone:
    """The cone sigma x ... x sigma of ``power_fan(fan, n)``."""
    r = len(fan.rays)
    return Cone(tuple(s * r + i for s in range(n) for i in cone.ray_indices))


def projective_space(n: int) -> Fan:
    if n < 1:
        raise FanError(f"projective space needs n >= 1, got {n}")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append((-1,) * n)
    cones = list(itertools.combinations(range(n + 1), n))
    return build_fan(n, rays, cones)


def hirzebruch(a: int) -> Fan:
    """F_a with rays (1,0), (0,1), (0,-1), (-1,a) in that order."""
    if a < 0:
        raise FanError(f"Hirzebruch parameter must be >= 0, got {a}")
    rays = [(1, 0), (0, 1), (0, -1), (-1, a)]
    return build_fan(2, rays, [(0, 1), (1, 3), (3, 2), (2, 0)])


def builtin(spec: str) -> Fan:
    """Parse ``pn:<n>``, ``hirzebruch:<a>`` or ``product:<spec>x<spec>[x...]``."""
    spec = spec.strip()
    if spec.startswith("product:"):
        parts = spec[len("product:"):].split("x")
        if len(parts) < 2:
            raise FanError(f"product needs at least two factors: {spec!r}")
        out = builtin(parts[0])
        for p in parts[1:]:
            out = product_fan(out, builtin(p))
        return out
    name, _, arg = spec.partition(":")
    try:
        value = int(arg)
    except ValueError:
        raise FanError(f"bad builtin fan selector {spec!r}") from None
    if name == "pn":
        return projective_space(value)
    if name == "hirzebruch":
        return hirzebruch(value)
    raise FanError(f"unknown builtin fan {name!r} (expected pn, hirzebruch or product)")


def fan_from_json(data: dict) -> Fan:
    try:
        return build_fan(int(data["dim"]), data["rays"], data["max_cones"])
    except (KeyError, TypeError) as exc:
        raise FanError(f"malformed fan JSON: {exc}") from None


def load_fan(path: str | Path) -> Fan:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise FanError(f"cannot read fan file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FanError(f"fan file {path} is not valid JSON: {exc}") from None
    return fan_from_json(data)


def dual_cone_contains(fan: Fan, cone: Cone, u: FractionalPoint) -> bool:
    """True iff u lies in the dual cone of ``cone``."""
    return all(dot(u.numerators, fan.rays[i]) >= 0 for i in cone.ray_indices)


def faces(fan: Fan, cone: Cone) -> list[Cone]:
    """All nonzero faces of a cone, as ray-index sets, smallest first.

    Simplicial cones have every subset as a face.  Otherwise a subset S is a
    face iff some u vanishes on S and is positive on the remaining rays.
    """
    idx = cone.ray_indices
    rays = fan.cone_rays(cone)
    simplicial = _exact.rank(rays) == len(rays)
    out = []
    for k in range(1, len(idx) + 1):
        for sub in itertools.combinations(range(len(idx)), k):
            if not simplicial:
                rows = []
                for t, v in enumerate(rays):
                    if t in sub:
                        rows.append((v, 0))
                        rows.append((tuple(-x for x in v), 0))
                    else:
                        rows.append((v, 1))
                if not _exact.is_feasible(_exact.make_system(rows), fan.dim):
                    continue
            out.append(Cone(tuple(idx[t] for t in sub)))
    return out


def all_cones(fan: Fan) -> list[Cone]:
    """Every nonzero cone of the fan, deduplicated, in a deterministic order."""
    seen = {}
    for cone in fan.max_cones:
        for f in faces(fan, cone):
            seen.setdefault(f.ray_indices, f)
    return sorted(seen.values(), key=lambda c: (len(c), c.ray_indices))
