"""Rigs (rings without negatives) and the concrete instances used downstream.

Each instance also knows how to hold values in numpy arrays so the
category-algebra convolution can run vectorized.
"""
from __future__ import annotations

import math
import re

import numpy as np

from .errors import BadDimension, NoPositivity, NoRigInvolution, NotSampleable, UnknownRig

REL_TOL = 1e-9
ABS_FLOOR = 1e-12


def close(a: complex, b: complex, rel: float = REL_TOL, floor: float = ABS_FLOOR) -> bool:
    return abs(a - b) <= max(floor, rel * max(abs(a), abs(b)))


class RigSpec:
    name: str
    commutative: bool = True
    exact: bool = True
    involution_variance: str | None = None
    has_positivity: bool = False
    tolerance: float = 0.0
    value_shape: tuple[int, ...] = ()
    dtype = object

    zero = None
    one = None

    def __repr__(self) -> str:
        return f"<rig {self.name}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, RigSpec) and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)

    # scalar operations
    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def involute(self, a):
        raise NoRigInvolution(f"rig {self.name} has no involution")

    def is_positive(self, a) -> bool:
        raise NoPositivity(f"rig {self.name} has no positivity structure")

    def sample(self, rng: np.random.Generator):
        raise NotSampleable(f"rig {self.name} cannot be sampled")

    def coerce(self, value):
        return value

    def encode(self, value):
        return value

    def decode(self, raw):
        return self.coerce(raw)

    def from_int(self, k: int):
        """k-fold sum of the unit."""
        acc = self.zero
        for _ in range(k):
            acc = self.add(acc, self.one)
        return acc

    # vectorized operations over arrays with leading axis = arrow index
    def zeros(self, n: int) -> np.ndarray:
        out = np.empty((n,) + self.value_shape, dtype=self.dtype)
        out[...] = self.zero
        return out

    def pack(self, values) -> np.ndarray:
        out = self.zeros(len(values))
        for i, v in enumerate(values):
            out[i] = v
        return out

    def unpack(self, arr: np.ndarray, i: int):
        return self.coerce(arr[i])

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.array([self.mul(x, y) for x, y in zip(a, b)], dtype=self.dtype)

    def add_at(self, out: np.ndarray, idx: np.ndarray, vals: np.ndarray) -> None:
        for i, v in zip(idx, vals):
            out[i] = self.add(out[i], v)

    def nonzero_mask(self, arr: np.ndarray) -> np.ndarray:
        return np.array([not self.is_zero(v) for v in arr], dtype=bool)


class ComplexRig(RigSpec):
    name = "complex"
    exact = False
    involution_variance = "contravariant"
    has_positivity = True
    tolerance = REL_TOL
    dtype = np.complex128
    zero = 0j
    one = 1 + 0j

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def eq(self, a, b):
        return close(complex(a), complex(b))

    def is_zero(self, a):
        return abs(a) < ABS_FLOOR

    def involute(self, a):
        return complex(a).conjugate()

    def is_positive(self, a):
        a = complex(a)
        return abs(a.imag) <= max(ABS_FLOOR, REL_TOL * abs(a)) and a.real >= -max(ABS_FLOOR, REL_TOL * abs(a))

    def sample(self, rng):
        return complex(rng.normal(), rng.normal())

    def coerce(self, value):
        if isinstance(value, (list, tuple)):
            value = complex(value[0], value[1])
        return complex(value)

    def encode(self, value):
        value = complex(value)
        return [value.real, value.imag]

    def vmul(self, a, b):
        return a * b

    def add_at(self, out, idx, vals):
        out += np.bincount(idx, weights=vals.real, minlength=len(out))
        out += 1j * np.bincount(idx, weights=vals.imag, minlength=len(out))

    def nonzero_mask(self, arr):
        return np.abs(arr) >= ABS_FLOOR


class BooleanRig(RigSpec):
    name = "boolean"
    involution_variance = "contravariant"
    has_positivity = True
    dtype = np.bool_
    zero = False
    one = True

    def add(self, a, b):
        return bool(a or b)

    def mul(self, a, b):
        return bool(a and b)

    def involute(self, a):
        return a

    def is_positive(self, a):
        return True

    def sample(self, rng):
        return bool(rng.integers(2))

    def coerce(self, value):
        return bool(value)

    def vmul(self, a, b):
        return a & b

    def add_at(self, out, idx, vals):
        np.logical_or.at(out, idx, vals)

    def nonzero_mask(self, arr):
        return arr.astype(bool)


class NaturalRig(RigSpec):
    name = "natural"
    involution_variance = "contravariant"
    has_positivity = True
    dtype = np.int64
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def involute(self, a):
        return a

    def is_positive(self, a):
        return a >= 0

    def sample(self, rng):
        return int(rng.integers(0, 6))

    def coerce(self, value):
        value = int(value)
        if value < 0:
            raise ValueError(f"{value} is not a natural number")
        return value

    def vmul(self, a, b):
        return a * b

    def add_at(self, out, idx, vals):
        np.add.at(out, idx, vals)

    def nonzero_mask(self, arr):
        return arr != 0


class TropicalRig(RigSpec):
    """Min-plus rig: addition is min (unit +inf), multiplication is + (unit 0)."""

    name = "tropical"
    dtype = np.float64
    zero = math.inf
    one = 0.0

    def add(self, a, b):
        return min(a, b)

    def mul(self, a, b):
        return a + b

    def sample(self, rng):
        if rng.random() < 0.15:
            return math.inf
        return float(rng.integers(-5, 10))

    def coerce(self, value):
        if value in ("inf", "+inf"):
            return math.inf
        value = float(value)
        if math.isnan(value) or value == -math.inf:
            raise ValueError(f"{value} is not a tropical value")
        return value

    def encode(self, value):
        return "inf" if value == math.inf else value

    def vmul(self, a, b):
        return a + b

    def add_at(self, out, idx, vals):
        np.minimum.at(out, idx, vals)

    def nonzero_mask(self, arr):
        return arr != math.inf


class MatrixRig(RigSpec):
    """Square complex matrices; involution is the conjugate transpose."""

    commutative = False
    exact = False
    involution_variance = "contravariant"
    has_positivity = True
    tolerance = REL_TOL
    dtype = np.complex128

    def __init__(self, n: int):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise BadDimension(f"matrix rig needs n >= 1, got {n!r}")
        self.n = int(n)
        self.name = f"matrix{self.n}"
        self.value_shape = (self.n, self.n)
        self.zero = np.zeros((self.n, self.n), dtype=complex)
        self.one = np.eye(self.n, dtype=complex)
        self.zero.flags.writeable = False
        self.one.flags.writeable = False

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a @ b

    def neg(self, a):
        return -a

    def eq(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        return np.linalg.norm(a - b) <= max(ABS_FLOOR, REL_TOL * max(np.linalg.norm(a), np.linalg.norm(b)))

    def is_zero(self, a):
        return float(np.max(np.abs(a))) < ABS_FLOOR

    def involute(self, a):
        return np.asarray(a).conj().T

    def is_positive(self, a):
        a = np.asarray(a)
        norm = np.linalg.norm(a, 2)
        if np.linalg.norm(a - a.conj().T) > max(ABS_FLOOR, REL_TOL * norm):
            return False
        return float(np.linalg.eigvalsh((a + a.conj().T) / 2).min()) >= -REL_TOL * norm - ABS_FLOOR

    def sample(self, rng):
        return rng.normal(size=(self.n, self.n)) + 1j * rng.normal(size=(self.n, self.n))

    def coerce(self, value):
        arr = np.asarray(value)
        if arr.shape == (self.n, self.n, 2):
            arr = arr[..., 0] + 1j * arr[..., 1]
        arr = np.array(arr, dtype=complex)
        if arr.shape != (self.n, self.n):
            raise BadDimension(f"expected a {self.n}x{self.n} matrix, got shape {arr.shape}")
        return arr

    def encode(self, value):
        return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(value)]

    def unpack(self, arr, i):
        return np.array(arr[i])

    def vmul(self, a, b):
        return a @ b

    def add_at(self, out, idx, vals):
        np.add.at(out, idx, vals)

    def nonzero_mask(self, arr):
        return np.abs(arr).reshape(len(arr), -1).max(axis=1, initial=0.0) >= ABS_FLOOR


COMPLEX = ComplexRig()
BOOLEAN = BooleanRig()
NATURAL = NaturalRig()
TROPICAL = TropicalRig()


def rig_instance(name: str) -> RigSpec:
    """Look up a rig by name: complex, boolean, natural, tropical, matrix N."""
    key = name.strip().lower()
    fixed = {"complex": COMPLEX, "boolean": BOOLEAN, "natural": NATURAL, "tropical": TROPICAL}
    if key in fixed:
        return fixed[key]
    m = re.fullmatch(r"matrix[\s:_-]*(-?\d+)", key)
    if m:
        return MatrixRig(int(m.group(1)))
    raise UnknownRig(f"unknown rig {name!r}")


def center_membership(r, spec: RigSpec, samples: int = 100, rng: np.random.Generator | None = None) -> bool:
    """Whether ``r`` commutes with all sampled (and, for matrices, basis) elements."""
    if spec.commutative:
        return True
    rng = np.random.default_rng(0) if rng is None else rng
    partners = [spec.sample(rng) for _ in range(samples)]
    if isinstance(spec, MatrixRig):
        for i in range(spec.n):
            for j in range(spec.n):
                e = np.zeros((spec.n, spec.n), dtype=complex)
                e[i, j] = 1
                partners.append(e)
    return all(spec.eq(spec.mul(r, s), spec.mul(s, r)) for s in partners)
