"""Real unit vectors, vector sets and the few transforms the gadget builders need.

Vectors are rays: ``v`` and ``-v`` are the same object.  Every
:class:`UnitVector` is stored normalized and sign-canonicalized (the first
component with magnitude above the tolerance is positive), so equality of
rays reduces to a componentwise comparison.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


class GeometryError(ValueError):
    pass


class ZeroVector(GeometryError):
    pass


class DimMismatch(GeometryError):
    pass


class ParallelInput(GeometryError):
    pass


@dataclass(frozen=True)
class ToleranceBundle:
    ortho_tol: float = DEFAULT_TOL
    norm_tol: float = 1e-12
    root_tol: float = 1e-12

    def __post_init__(self):
        if min(self.ortho_tol, self.norm_tol, self.root_tol) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.ortho_tol < self.norm_tol:
            raise ValueError("ortho_tol must be >= norm_tol")


DEFAULT_TOLERANCES = ToleranceBundle()


def _canonical_sign(comps: np.ndarray, tol: float) -> np.ndarray:
    for c in comps:
        if abs(c) > tol:
            return comps if c > 0 else -comps
    return comps


@dataclass(frozen=True, eq=False)
class UnitVector:
    """A labeled ray in R^d, stored as a canonical unit representative."""

    label: str
    components: tuple[float, ...]
    expr: str | None = None

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.components, dtype=float)

    def relabel(self, label: str) -> "UnitVector":
        return UnitVector(label, self.components, self.expr)

    def same_ray(self, other: "UnitVector", tol: float = DEFAULT_TOL) -> bool:
        a, b = self.array, other.array
        if a.shape != b.shape:
            raise DimMismatch(f"{self.dim} != {other.dim}")
        return min(np.abs(a - b).max(), np.abs(a + b).max()) <= tol

    def __eq__(self, other):
        if not isinstance(other, UnitVector):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        comps = ", ".join(f"{c:.6g}" for c in self.components)
        return f"UnitVector({self.label!r}, ({comps}))"


def normalize(v: Sequence[float] | np.ndarray, label: str = "", *,
              norm_tol: float = DEFAULT_TOLERANCES.norm_tol,
              expr: str | None = None) -> UnitVector:
    """Scale ``v`` to unit length and pick the canonical sign.

    Idempotent: feeding the components of a result back in returns the
    identical tuple.
    """
    if isinstance(v, UnitVector):
        label = label or v.label
        expr = expr or v.expr
        v = v.array
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size < 3:
        raise GeometryError("need a flat vector with at least 3 components")
    n = float(np.linalg.norm(arr))
    if n <= norm_tol:
        raise ZeroVector(f"vector {label!r} has norm {n:.3g}")
    if abs(n - 1.0) > 4e-16:
        arr = arr / n
    arr = _canonical_sign(arr, 1e-12)
    # -0.0 would survive json and break bitwise round trips
    arr = arr + 0.0
    return UnitVector(label, tuple(float(c) for c in arr), expr)


def _check_dims(u: UnitVector, v: UnitVector) -> None:
    if u.dim != v.dim:
        raise DimMismatch(f"dimension {u.dim} vs {v.dim}")


def overlap(u: UnitVector, v: UnitVector) -> float:
    """|<u|v>|, clipped to [0, 1]."""
    _check_dims(u, v)
    return min(1.0, abs(float(np.dot(u.array, v.array))))


def cross(u: UnitVector, v: UnitVector, label: str = "", *,
          tol: ToleranceBundle = DEFAULT_TOLERANCES, expr: str | None = None) -> UnitVector:
    if u.dim != 3 or v.dim != 3:
        raise GeometryError("cross product needs dimension 3")
    if overlap(u, v) >= 1.0 - tol.norm_tol:
        raise ParallelInput(f"{u.label!r} and {v.label!r} are parallel")
    return normalize(np.cross(u.array, v.array), label, expr=expr)


AXES = {"e1": 0, "e2": 1, "e3": 2, "x": 0, "y": 1, "z": 2}


def quarter_turn_matrix(axis: str | int) -> np.ndarray:
    """Rotation by +pi/2 about a coordinate axis (entries in {0, +-1})."""
    k = AXES[axis] if isinstance(axis, str) else int(axis)
    i, j = [m for m in range(3) if m != k]
    if k == 1:
        # keep the right-handed orientation: about y the cyclic pair is (z, x)
        i, j = j, i
    R = np.zeros((3, 3))
    R[k, k] = 1.0
    R[j, i] = 1.0
    R[i, j] = -1.0
    return R


def rotate_about_axis(v: UnitVector, axis: str | int, angle: float = math.pi / 2,
                      label: str | None = None) -> UnitVector:
    if v.dim != 3:
        raise GeometryError("rotations are only defined in dimension 3")
    if not math.isclose(angle, math.pi / 2, abs_tol=1e-15):
        raise GeometryError("only quarter turns about coordinate axes are supported")
    R = quarter_turn_matrix(axis)
    return normalize(R @ v.array, v.label if label is None else label, expr=v.expr)


def orthogonal_map(M: np.ndarray, v: UnitVector, label: str | None = None) -> UnitVector:
    return normalize(np.asarray(M) @ v.array, v.label if label is None else label, expr=v.expr)


def frame_map(src: tuple[np.ndarray, np.ndarray], dst: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Orthogonal matrix sending the frame spanned by ``src`` onto that of ``dst``.

    Both pairs must have the same signed inner product; the first vectors map
    exactly, the second ones map whenever the products agree.
    """
    def frame(a, b):
        a = np.asarray(a, float) / np.linalg.norm(a)
        b = np.asarray(b, float)
        u2 = b - (a @ b) * a
        u2 = u2 / np.linalg.norm(u2)
        return np.array([a, u2, np.cross(a, u2)])

    return frame(*dst).T @ frame(*src)


def rotation_taking(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """A proper rotation with ``R @ src`` parallel to ``dst`` (Rodrigues)."""
    a = np.asarray(src, float) / np.linalg.norm(src)
    b = np.asarray(dst, float) / np.linalg.norm(dst)
    c = float(a @ b)
    if c < 0:
        b, c = -b, -c
    k = np.cross(a, b)
    s = float(np.linalg.norm(k))
    if s < 1e-15:
        return np.eye(3)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + K + K @ K * ((1 - c) / s**2)


@dataclass(frozen=True)
class VectorSet:
    """An ordered, sign-deduplicated collection of rays of one dimension."""

    name: str
    dim: int
    vectors: tuple[UnitVector, ...] = ()
    tol: float = DEFAULT_TOL
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        index = {}
        for v in self.vectors:
            if v.dim != self.dim:
                raise DimMismatch(f"{v.label!r} has dim {v.dim}, set has {self.dim}")
            if v.label in index:
                raise GeometryError(f"duplicate label {v.label!r}")
            index[v.label] = v
        M = self.matrix()
        if len(M) > 1:
            dup = _first_duplicate(M, self.tol)
            if dup is not None:
                i, j = dup
                raise GeometryError(
                    f"{self.vectors[i].label!r} and {self.vectors[j].label!r} are the same ray")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_raw(cls, name: str, items: Iterable[tuple[str, Sequence[float]]], *,
                 tol: float = DEFAULT_TOL, dedupe: bool = False) -> "VectorSet":
        vecs = [normalize(comps, label) for label, comps in items]
        if not vecs:
            raise GeometryError("empty vector set")
        if dedupe:
            return union_sets([cls(name, vecs[0].dim, (v,), tol) for v in vecs], name=name)
        return cls(name, vecs[0].dim, tuple(vecs), tol)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __contains__(self, label):
        return label in self._index

    def __getitem__(self, label: str) -> UnitVector:
        return self._index[label]

    @property
    def labels(self) -> list[str]:
        return [v.label for v in self.vectors]

    def matrix(self) -> np.ndarray:
        if not self.vectors:
            return np.zeros((0, self.dim))
        return np.array([v.components for v in self.vectors], dtype=float)

    def find_ray(self, v: UnitVector | np.ndarray) -> str | None:
        """Label of the member equal to ``v`` as a ray, or None."""
        arr = v.array if isinstance(v, UnitVector) else normalize(v).array
        M = self.matrix()
        if not len(M):
            return None
        d = np.minimum(np.abs(M - arr).max(axis=1), np.abs(M + arr).max(axis=1))
        i = int(np.argmin(d))
        return self.vectors[i].label if d[i] <= self.tol else None

    def subset(self, labels: Iterable[str], name: str | None = None) -> "VectorSet":
        return VectorSet(name or self.name, self.dim, tuple(self[l] for l in labels), self.tol)

    def transformed(self, M: np.ndarray, name: str, prefix: str = "") -> "VectorSet":
        vecs = tuple(orthogonal_map(M, v, prefix + v.label) for v in self.vectors)
        return VectorSet(name, self.dim, vecs, self.tol)

    def rotated(self, axis: str, name: str | None = None, prefix: str = "") -> "VectorSet":
        return self.transformed(quarter_turn_matrix(axis), name or f"R{axis}({self.name})", prefix)

    def to_dict(self) -> dict:
        vecs = []
        for v in self.vectors:
            item = {"label": v.label, "components": list(v.components)}
            if v.expr is not None:
                item["expr"] = v.expr
            vecs.append(item)
        return {"name": self.name, "dim": self.dim, "tol": self.tol, "vectors": vecs}

    def to_json(self, **kw) -> str:
        # repr-based float output is shortest round-trip
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "VectorSet":
        vecs = tuple(UnitVector(item["label"], tuple(float(c) for c in item["components"]),
                                item.get("expr")) for item in data["vectors"])
        return cls(data["name"], int(data["dim"]), vecs, float(data.get("tol", DEFAULT_TOL)))

    @classmethod
    def from_json(cls, text: str) -> "VectorSet":
        return cls.from_dict(json.loads(text))


def _ray_distance_rows(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Sign-insensitive max-norm distance between every row of A and B."""
    plus = np.abs(A[:, None, :] - B[None, :, :]).max(axis=2)
    minus = np.abs(A[:, None, :] + B[None, :, :]).max(axis=2)
    return np.minimum(plus, minus)


def _first_duplicate(M: np.ndarray, tol: float, chunk: int = 512):
    n = len(M)
    for s in range(0, n, chunk):
        block = M[s:s + chunk]
        D = _ray_distance_rows(block, M)
        for r in range(len(block)):
            D[r, : s + r + 1] = np.inf
        hit = np.argwhere(D <= tol)
        if len(hit):
            r, j = hit[0]
            return s + int(r), int(j)
    return None


def union_sets(sets: Sequence[VectorSet], name: str | None = None) -> VectorSet:
    """Ray-deduplicated union; first occurrence wins and keeps its label.

    Later vectors with a label already taken are renamed with a numeric
    suffix so the result stays addressable.
    """
    if not sets:
        raise GeometryError("nothing to unite")
    dim = sets[0].dim
    tol = sets[0].tol
    for s in sets:
        if s.dim != dim:
            raise DimMismatch(f"{s.name} has dim {s.dim}, expected {dim}")
    kept: list[UnitVector] = []
    kept_rows = np.zeros((0, dim))
    taken: set[str] = set()
    for s in sets:
        M = s.matrix()
        if not len(M):
            continue
        if len(kept_rows):
            hit = np.zeros(len(M), dtype=bool)
            for start in range(0, len(kept_rows), 2048):
                D = _ray_distance_rows(M, kept_rows[start:start + 2048])
                hit |= (D <= tol).any(axis=1)
        else:
            hit = np.zeros(len(M), dtype=bool)
        new = []
        for v, h in zip(s.vectors, hit):
            if h:
                continue
            # members of one set are already distinct rays, but check against the new batch
            label = v.label
            if label in taken:
                k = 2
                while f"{label}#{k}" in taken:
                    k += 1
                label = f"{label}#{k}"
            taken.add(label)
            new.append(v if label == v.label else v.relabel(label))
        kept.extend(new)
        if new:
            kept_rows = np.vstack([kept_rows, np.array([v.components for v in new])])
    return VectorSet(name or "+".join(s.name for s in sets), dim, tuple(kept), tol)
