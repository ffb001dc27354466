"""Binary formal contexts over a literal alphabet, with prime/closure operators.

A context is an objects-by-literals incidence matrix. The literal alphabet
normally carries both polarities of every source attribute ("smooth" and
"!smooth", "x<=3" and "x>3") so that else-branches of decision trees are
expressible as attribute sets of the context.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

TASK_CLASSIFICATION = "classification"
TASK_REGRESSION = "regression"


class BitVec:
    """Immutable fixed-width set of indices, stored as a single int mask.

    Width is part of the identity: operations between vectors of different
    widths raise, so object-sets and attribute-sets of different contexts
    cannot be mixed up silently.
    """

    __slots__ = ("mask", "width")

    def __init__(self, mask: int, width: int):
        mask, width = int(mask), int(width)  # numpy ints would overflow <<
        if width < 0:
            raise ValueError(f"width must be >= 0, got {width}")
        if mask < 0 or mask >> width:
            raise ValueError(f"mask {mask:#x} does not fit in width {width}")
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "width", width)

    def __setattr__(self, name, value):
        raise AttributeError("BitVec is immutable")

    @classmethod
    def empty(cls, width: int) -> "BitVec":
        return cls(0, width)

    @classmethod
    def full(cls, width: int) -> "BitVec":
        return cls((1 << width) - 1, width)

    @classmethod
    def from_indices(cls, width: int, indices: Iterable[int]) -> "BitVec":
        mask = 0
        for i in indices:
            i = int(i)
            if not 0 <= i < width:
                raise ValueError(f"index {i} out of range for width {width}")
            mask |= 1 << i
        return cls(mask, width)

    @classmethod
    def from_bools(cls, flags: Sequence) -> "BitVec":
        arr = np.asarray(flags, dtype=bool)
        if arr.ndim != 1:
            raise ValueError("from_bools expects a 1-d sequence")
        return cls(_mask_from_bool(arr), len(arr))

    def _check(self, other: "BitVec") -> None:
        if self.width != other.width:
            raise ValueError(f"width mismatch: {self.width} != {other.width}")

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.width and (self.mask >> index) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def indices(self) -> tuple:
        return tuple(self)

    def __and__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.mask & other.mask, self.width)

    def __or__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.mask | other.mask, self.width)

    def minus(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.mask & ~other.mask, self.width)

    def with_bit(self, index: int) -> "BitVec":
        if not 0 <= index < self.width:
            raise ValueError(f"index {index} out of range for width {self.width}")
        return BitVec(self.mask | (1 << index), self.width)

    def complement(self) -> "BitVec":
        return BitVec(~self.mask & ((1 << self.width) - 1), self.width)

    def issubset(self, other: "BitVec") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __le__(self, other: "BitVec") -> bool:
        return self.issubset(other)

    def __lt__(self, other: "BitVec") -> bool:
        return self.issubset(other) and self.mask != other.mask

    def isdisjoint(self, other: "BitVec") -> bool:
        self._check(other)
        return self.mask & other.mask == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVec)
            and self.mask == other.mask
            and self.width == other.width
        )

    def __hash__(self) -> int:
        return hash((self.mask, self.width))

    def to_bools(self) -> np.ndarray:
        return _bool_from_mask(self.mask, self.width)

    def __repr__(self) -> str:
        return f"BitVec({list(self)}, width={self.width})"


def _mask_from_bool(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    packed = np.packbits(arr, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def _bool_from_mask(mask: int, width: int) -> np.ndarray:
    nbytes = max(1, (width + 7) // 8)
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:width].astype(bool)


class FormalContext:
    """Objects x literals incidence with prime operators.

    `negation[j]` is the index of literal j's complementary literal, or None
    when j has no declared complement. Complementary columns must be exact
    complements of each other.
    """

    def __init__(
        self,
        object_names: Sequence[str],
        attribute_names: Sequence[str],
        incidence: np.ndarray,
        negation: Optional[Sequence[Optional[int]]] = None,
    ):
        object_names = tuple(object_names)
        attribute_names = tuple(attribute_names)
        _check_unique("object", object_names)
        _check_unique("attribute", attribute_names)

        incidence = np.asarray(incidence, dtype=bool)
        if incidence.ndim != 2 or incidence.shape != (len(object_names), len(attribute_names)):
            raise ValueError(
                f"incidence shape {incidence.shape} does not match "
                f"{len(object_names)} objects x {len(attribute_names)} attributes"
            )
        incidence = incidence.copy()
        incidence.setflags(write=False)

        if negation is None:
            negation = (None,) * len(attribute_names)
        negation = tuple(negation)
        if len(negation) != len(attribute_names):
            raise ValueError("negation map length does not match attribute count")

        self.object_names = object_names
        self.attribute_names = attribute_names
        self.incidence = incidence
        self.negation = negation

        self._obj_index = {n: i for i, n in enumerate(object_names)}
        self._attr_index = {n: j for j, n in enumerate(attribute_names)}
        # column masks over objects, row masks over attributes
        self._cols = tuple(_mask_from_bool(incidence[:, j]) for j in range(self.n_attributes))
        self._rows = tuple(_mask_from_bool(incidence[g, :]) for g in range(self.n_objects))

        full = (1 << self.n_objects) - 1
        for j, k in enumerate(negation):
            if k is None:
                continue
            if not 0 <= k < self.n_attributes or negation[k] != j or k == j:
                raise ValueError(f"negation map is not an involution at attribute {j}")
            if self._cols[j] ^ self._cols[k] != full:
                raise ValueError(
                    f"columns {attribute_names[j]!r} and {attribute_names[k]!r} "
                    "declared complementary but are not exact complements"
                )

    @property
    def n_objects(self) -> int:
        return len(self.object_names)

    @property
    def n_attributes(self) -> int:
        return len(self.attribute_names)

    def object_set(self, names: Iterable[str]) -> BitVec:
        return BitVec.from_indices(self.n_objects, (self._obj_index[n] for n in names))

    def attribute_set(self, names: Iterable[str]) -> BitVec:
        return BitVec.from_indices(self.n_attributes, (self._attr_index[n] for n in names))

    def attribute_index(self, name: str) -> int:
        return self._attr_index[name]

    def split_candidates(self) -> tuple:
        """Canonical literal of each complementary pair (the lower index)."""
        return tuple(
            j for j, k in enumerate(self.negation) if k is not None and j < k
        )

    def extent(self, attrs: BitVec) -> BitVec:
        """Objects having every attribute in `attrs`; extent of the empty set is G."""
        if attrs.width != self.n_attributes:
            raise ValueError(
                f"attribute set width {attrs.width} != |M| = {self.n_attributes}"
            )
        mask = (1 << self.n_objects) - 1
        for j in attrs:
            mask &= self._cols[j]
            if not mask:
                break
        return BitVec(mask, self.n_objects)

    def intent(self, objs: BitVec) -> BitVec:
        """Attributes shared by every object in `objs`; intent of the empty set is M."""
        if objs.width != self.n_objects:
            raise ValueError(f"object set width {objs.width} != |G| = {self.n_objects}")
        mask = (1 << self.n_attributes) - 1
        for g in objs:
            mask &= self._rows[g]
            if not mask:
                break
        return BitVec(mask, self.n_attributes)

    def close(self, attrs: BitVec) -> BitVec:
        """Closure intent(extent(attrs)): the largest attribute set with the same extent."""
        return self.intent(self.extent(attrs))

    def row(self, g: int) -> BitVec:
        return BitVec(self._rows[g], self.n_attributes)

    def column(self, j: int) -> BitVec:
        return BitVec(self._cols[j], self.n_objects)

    def __repr__(self) -> str:
        return f"FormalContext({self.n_objects} objects, {self.n_attributes} attributes)"


def _check_unique(kind: str, names: Sequence[str]) -> None:
    seen = set()
    for n in names:
        if n in seen:
            raise ValueError(f"duplicate {kind} name: {n!r}")
        seen.add(n)


def build_context(
    object_names: Sequence[str],
    attribute_names: Sequence[str],
    incidence_rows: Iterable[Iterable],
    negation: Optional[Sequence[Optional[int]]] = None,
) -> FormalContext:
    """Build an immutable context from 0/1 rows, one per object, in input order."""
    rows = [list(r) for r in incidence_rows]
    if len(rows) != len(object_names):
        raise ValueError(f"got {len(rows)} rows for {len(object_names)} objects")
    n_attrs = len(attribute_names)
    for i, r in enumerate(rows):
        if len(r) != n_attrs:
            raise ValueError(f"row {i} has width {len(r)}, expected {n_attrs}")
    arr = np.array(rows, dtype=bool).reshape(len(rows), n_attrs)
    return FormalContext(object_names, attribute_names, arr, negation)


# ---------------------------------------------------------------------------
# Scaling of raw tabular data into a dichotomized literal alphabet
# ---------------------------------------------------------------------------

KIND_BINARY = "binary"
KIND_NUMERIC = "numeric"


@dataclass(frozen=True)
class ColumnScaling:
    """How one source column maps to literals.

    binary: literal pair (name, !name).
    numeric: per threshold t, literal pair (name<=t, name>t); thresholds
    strictly increasing.
    """

    name: str
    kind: str
    thresholds: tuple = ()

    def __post_init__(self):
        if self.kind not in (KIND_BINARY, KIND_NUMERIC):
            raise ValueError(f"unknown column kind {self.kind!r} for {self.name!r}")
        if self.kind == KIND_BINARY and self.thresholds:
            raise ValueError(f"binary column {self.name!r} cannot carry thresholds")
        ts = tuple(float(t) for t in self.thresholds)
        if any(not np.isfinite(t) for t in ts):
            raise ValueError(f"non-finite threshold for column {self.name!r}")
        if any(ts[i] >= ts[i + 1] for i in range(len(ts) - 1)):
            raise ValueError(f"thresholds for {self.name!r} must be strictly increasing")
        object.__setattr__(self, "thresholds", ts)

    def literal_names(self) -> list:
        if self.kind == KIND_BINARY:
            return [self.name, f"!{self.name}"]
        out = []
        for t in self.thresholds:
            out.append(f"{self.name}<={t:g}")
            out.append(f"{self.name}>{t:g}")
        return out


@dataclass(frozen=True)
class ScalingSchema:
    columns: tuple

    def __post_init__(self):
        _check_unique("column", [c.name for c in self.columns])
        object.__setattr__(self, "columns", tuple(self.columns))

    def literal_names(self) -> list:
        out = []
        for col in self.columns:
            out.extend(col.literal_names())
        return out

    def negation_map(self) -> list:
        """Adjacent literals are complementary pairs by construction."""
        neg = []
        for col in self.columns:
            k = len(col.literal_names())
            base = len(neg)
            for i in range(0, k, 2):
                neg.extend([base + i + 1, base + i])
        return neg

    def column_names(self) -> list:
        return [c.name for c in self.columns]


def fit_schema(
    columns: Sequence, max_thresholds: int = 32, kinds: Optional[Mapping[str, str]] = None
) -> ScalingSchema:
    """Infer a scaling schema from training columns.

    `columns` is a sequence of (name, values) pairs. A column whose values
    are all 0/1 is treated as binary unless overridden through `kinds`.
    Numeric thresholds are the midpoints between consecutive distinct sorted
    training values, thinned to at most `max_thresholds` evenly spaced
    quantiles of the midpoint list.
    """
    if max_thresholds < 1:
        raise ValueError("max_thresholds must be >= 1")
    scalings = []
    for name, values in columns:
        arr = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"column {name!r} contains non-finite values")
        kind = kinds.get(name) if kinds else None
        if kind is None:
            kind = KIND_BINARY if _is_binary(arr) else KIND_NUMERIC
        if kind == KIND_BINARY:
            if not _is_binary(arr):
                raise ValueError(f"column {name!r} declared binary but has values outside 0/1")
            scalings.append(ColumnScaling(name, KIND_BINARY))
        elif kind == KIND_NUMERIC:
            scalings.append(ColumnScaling(name, KIND_NUMERIC, _midpoints(arr, max_thresholds)))
        else:
            raise ValueError(f"unknown column kind {kind!r} for {name!r}")
    return ScalingSchema(tuple(scalings))


def _is_binary(arr: np.ndarray) -> bool:
    return bool(np.all((arr == 0.0) | (arr == 1.0)))


def _midpoints(arr: np.ndarray, cap: int) -> tuple:
    distinct = np.unique(arr)
    if distinct.size < 2:
        return ()
    mids = (distinct[:-1] + distinct[1:]) / 2.0
    if mids.size > cap:
        pick = np.unique(np.round(np.linspace(0, mids.size - 1, cap)).astype(int))
        mids = mids[pick]
    return tuple(float(t) for t in mids)


def scale_table(
    columns: Sequence,
    schema: ScalingSchema,
    object_names: Optional[Sequence[str]] = None,
) -> FormalContext:
    """Apply a fitted schema to raw columns, producing a dichotomized context."""
    by_name = {name: np.asarray(values, dtype=float) for name, values in columns}
    missing = [c.name for c in schema.columns if c.name not in by_name]
    if missing:
        raise ValueError(f"schema columns missing from data: {missing}")
    lengths = {len(v) for v in by_name.values()}
    if len(lengths) > 1:
        raise ValueError(f"columns have unequal lengths: {sorted(lengths)}")
    n = lengths.pop() if lengths else 0
    if object_names is None:
        object_names = [f"r{i}" for i in range(n)]

    cols_out = []
    for col in schema.columns:
        arr = by_name[col.name]
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"column {col.name!r} contains non-finite values")
        if col.kind == KIND_BINARY:
            if not _is_binary(arr):
                raise ValueError(f"column {col.name!r} has values outside 0/1")
            hit = arr == 1.0
            cols_out.append(hit)
            cols_out.append(~hit)
        else:
            for t in col.thresholds:
                le = arr <= t
                cols_out.append(le)
                cols_out.append(~le)
    incidence = (
        np.column_stack(cols_out) if cols_out else np.zeros((n, 0), dtype=bool)
    )
    return FormalContext(
        object_names, schema.literal_names(), incidence, schema.negation_map()
    )


def describe_external(
    ctx: FormalContext, schema: ScalingSchema, raw_row: Mapping[str, float]
) -> BitVec:
    """Evaluate every literal predicate of the scaled alphabet on one raw row.

    The boundary convention matches scaling: `name<=t` holds at exactly t.
    """
    if list(ctx.attribute_names) != schema.literal_names():
        raise ValueError("context alphabet does not match schema literals")
    return describe_row(schema, raw_row)


def describe_row(schema: ScalingSchema, raw_row: Mapping[str, float]) -> BitVec:
    """The satisfied-literal set of one raw row, without a backing context."""
    bits = []
    for col in schema.columns:
        if col.name not in raw_row:
            raise ValueError(f"row is missing column {col.name!r}")
        v = float(raw_row[col.name])
        if not np.isfinite(v):
            raise ValueError(f"non-finite value for column {col.name!r}")
        if col.kind == KIND_BINARY:
            if v not in (0.0, 1.0):
                raise ValueError(f"column {col.name!r} expects 0/1, got {v}")
            bits.extend([v == 1.0, v != 1.0])
        else:
            for t in col.thresholds:
                bits.extend([v <= t, v > t])
    return BitVec.from_bools(np.array(bits, dtype=bool))
