"""Filter files and run configuration.

A filter file is JSON with the matrix dimension, an optional label and a
flat list of complex coefficients written as ``[re, im]`` pairs, row-major
within each ``d x d`` tap::

    {
      "dim": 1,
      "label": "f",
      "coeffs": [
        [2.0, 0.0],
        [1.0, 0.0]
      ]
    }

:func:`dumps_filter` writes exactly this layout, so canonical files
survive a parse/serialize round trip byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .polynomial import DEFAULT_GRID_SIZE, MatrixPoly, Poly


class FileFormatError(ValueError):
    """Malformed filter or configuration file."""


@dataclass(frozen=True)
class FilterFile:
    dim: int
    coeffs: tuple  # flat tuple of complex, row-major per tap
    label: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise FileFormatError(f"dim must be a positive integer, got {self.dim!r}")
        if not self.coeffs or len(self.coeffs) % (self.dim * self.dim):
            raise FileFormatError(
                f"{len(self.coeffs)} coefficients is not a positive multiple of dim**2 = {self.dim ** 2}"
            )

    def to_poly(self):
        c = np.array(self.coeffs, dtype=complex)
        if self.dim == 1:
            return Poly(c)
        return MatrixPoly(c.reshape(-1, self.dim, self.dim))

    @classmethod
    def from_poly(cls, p, label: Optional[str] = None) -> "FilterFile":
        dim = p.dim if isinstance(p, MatrixPoly) else 1
        return cls(dim, tuple(complex(v) for v in p.coeffs.reshape(-1)), label)


def _pair(z: complex) -> str:
    return f"[{json.dumps(float(z.real))}, {json.dumps(float(z.imag))}]"


def dumps_filter(ff: FilterFile) -> str:
    lines = ["{", f'  "dim": {ff.dim},']
    if ff.label is not None:
        lines.append(f'  "label": {json.dumps(ff.label)},')
    lines.append('  "coeffs": [')
    body = [f"    {_pair(z)}" for z in ff.coeffs]
    lines.append(",\n".join(body))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_filter(text: str) -> FilterFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "coeffs" not in data:
        raise FileFormatError("filter file must be an object with a 'coeffs' list")
    unknown = set(data) - {"dim", "label", "coeffs"}
    if unknown:
        raise FileFormatError(f"unknown keys {sorted(unknown)}")
    coeffs = []
    for entry in data["coeffs"]:
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
        ):
            raise FileFormatError(f"coefficient must be an [re, im] pair, got {entry!r}")
        coeffs.append(complex(entry[0], entry[1]))
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise FileFormatError("label must be a string")
    return FilterFile(data.get("dim", 1), tuple(coeffs), label)


def read_filter(path) -> FilterFile:
    return loads_filter(Path(path).read_text())


def write_filter(path, ff: FilterFile) -> None:
    Path(path).write_text(dumps_filter(ff))


@dataclass
class RunConfig:
    """Settings for a seeded property sweep.

    Tolerances are relative to the total energy of each case; zero is
    accepted to expose the floating-point noise floor.
    """

    grid_size: int = DEFAULT_GRID_SIZE
    scalar_tol: float = 1e-8
    matrix_tol: float = 1e-6
    seed: int = 0
    scalar_cases: int = 1000
    scalar_max_degree: int = 32
    matrix_cases: int = 200
    matrix_dims: list = field(default_factory=lambda: [2, 3])
    matrix_max_degree: int = 6
    matrix_max_factors: int = 3
    out: Optional[str] = None

    def __post_init__(self):
        M = self.grid_size
        if not isinstance(M, int) or M < 2 or M & (M - 1):
            raise FileFormatError(f"grid_size must be a power of two, got {M!r}")
        if self.scalar_tol < 0 or self.matrix_tol < 0:
            raise FileFormatError("tolerances must be nonnegative")
        if self.scalar_cases < 0 or self.matrix_cases < 0:
            raise FileFormatError("case counts must be nonnegative")
        if self.scalar_max_degree < 1:
            raise FileFormatError("scalar_max_degree must be at least 1")
        if not self.matrix_dims or any(not 1 <= d <= 4 for d in self.matrix_dims):
            raise FileFormatError("matrix_dims must be a nonempty list drawn from 1..4")
        if not 0 <= self.matrix_max_degree <= 8 or not 0 <= self.matrix_max_factors <= 4:
            raise FileFormatError("matrix degree must be in 0..8 and factors in 0..4")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise FileFormatError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)


def read_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"invalid config JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FileFormatError("config must be a JSON object")
    return RunConfig.from_dict(data)
