"""Loading degeneration configs from JSON or TOML.

Schema::

    rank      = 4
    pairing   = [[0, 0, 1, 0], ...]        # ints or "p/q" strings, skew
    cycles    = [[1, 0, 0, 0], ...]
    [frobenius] z = [re, im] | "re,im"
    [kdata]    chi_with_S, chi_S_with, euler_pairing, ch, spherical, node
    [cluster]  central_charges = [[re, im], ...], z = [re, im]
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .lattice import CycleConfig, InputError, IntersectionLattice, qmat, qvec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def parse_complex(v, field: str = "value") -> complex:
    if isinstance(v, bool):
        raise InputError(f"{field}: expected a complex number, got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        parts = v.split(",")
        if len(parts) == 2:
            try:
                return complex(float(parts[0]), float(parts[1]))
            except ValueError:
                pass
        raise InputError(f"{field}: expected 're,im', got {v!r}")
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise InputError(f"{field}: expected [re, im], got {v!r}")


@dataclass(frozen=True, eq=False)
class DegenerationConfig:
    cycles: CycleConfig
    z: complex = 1 + 0j
    kdata: dict | None = None
    cluster: dict | None = None
    raw: dict | None = None

    @property
    def digest(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _matrix(raw, field):
    try:
        return qmat(raw)
    except InputError as exc:
        raise InputError(f"field '{field}': {exc}") from exc
    except TypeError as exc:
        raise InputError(f"field '{field}': expected a list of rows") from exc


def from_mapping(raw: dict) -> DegenerationConfig:
    for key in ("rank", "pairing", "cycles"):
        if key not in raw:
            raise InputError(f"missing field '{key}'")
    n = raw["rank"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("field 'rank': expected a positive integer")
    pairing = _matrix(raw["pairing"], "pairing")
    if pairing.shape != (n, n):
        raise InputError(f"field 'pairing': expected {n}x{n}, got {pairing.shape[0]}x{pairing.shape[1] if pairing.ndim == 2 else 0}")
    lattice = IntersectionLattice(n, pairing)
    cycles = []
    for k, c in enumerate(raw["cycles"]):
        try:
            v = qvec(c)
        except (InputError, TypeError) as exc:
            raise InputError(f"field 'cycles[{k}]': {exc}") from exc
        if v.shape != (n,):
            raise InputError(f"field 'cycles[{k}]': length {v.shape[0]} != rank {n}")
        cycles.append(v)
    config = CycleConfig(lattice, tuple(cycles))

    z = parse_complex(raw.get("frobenius", {}).get("z", [1, 0]), "frobenius.z")
    if z == 0:
        raise InputError("field 'frobenius.z': must be nonzero")

    kdata = raw.get("kdata")
    if kdata is not None:
        for key in ("chi_with_S", "chi_S_with", "spherical"):
            if key in kdata and len(kdata[key]) not in (4, config.r):
                raise InputError(f"field 'kdata.{key}': length must be 4 or r")

    cluster = raw.get("cluster")
    if cluster is not None:
        charges = [parse_complex(v, f"cluster.central_charges[{i}]")
                   for i, v in enumerate(cluster.get("central_charges", []))]
        if len(charges) != config.r:
            raise InputError("field 'cluster.central_charges': need one per cycle")
        cluster = {"central_charges": charges, "z": parse_complex(cluster.get("z", [z.real, z.imag]), "cluster.z")}
    return DegenerationConfig(config, z, kdata, cluster, raw)


def load(path) -> DegenerationConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if path.suffix == ".toml":
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise InputError(f"{path}: {exc}") from exc
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise InputError(f"{path}: top level must be an object")
    return from_mapping(raw)


def bundled(name: str) -> Path:
    return Path(__file__).parent / "data" / name
