"""Loading codes by name, file path or construction spec.

A source string is one of:

* a builtin name (see ``BUILTIN``), e.g. ``wifi-r12`` or ``rootcheck-r12``;
* a path to an alist file (``.alist``) or a base-matrix file (anything else);
* a construction spec such as ``peg:m=48,n=96,dv=3,seed=0``,
  ``peg-ira:m=48,n=96,dv=3,seed=0`` or ``root-check:nb=16,mb=8,s=42,seed=0``.

Base-matrix files whose comment lines contain ``layout: root-check`` are
treated as QC-IRA root-check codes and use the accumulator encoder.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from . import codegen
from .encode import (GeneratorMatrix, IraStructure, derive_generator, encode_ira,
                     encode_systematic, ira_structure)
from .errors import ConfigError, StructureError
from .pcm import SparseBinaryMatrix, expand_base, load_alist, load_base_matrix

BUILTIN = {
    "wifi-r12": "wifi_r12.txt",
    "wifi-r58": "wifi_r58.txt",
    "wifi-r34": "wifi_r34.txt",
    "wifi-r1316": "wifi_r1316.txt",
    "rootcheck-r12": "rootcheck_r12.txt",
    "peg96": "peg96.alist",
    "ira96": "ira96.alist",
}

WIFI_RATES = {"1/2": "wifi-r12", "5/8": "wifi-r58", "3/4": "wifi-r34", "13/16": "wifi-r1316"}

ROOT_CHECK_TAG = "layout: root-check"


@dataclass(frozen=True, eq=False)
class Code:
    """A parity-check matrix plus everything needed to encode and score it."""

    name: str
    H: SparseBinaryMatrix
    info_positions: np.ndarray
    generator: GeneratorMatrix | None = None
    ira: IraStructure | None = None
    template: codegen.RootCheckTemplate | None = None

    @property
    def n(self):
        return self.H.n

    @property
    def k(self):
        return int(self.info_positions.size)

    @property
    def rate(self):
        return self.k / self.n

    def encode(self, messages):
        if self.ira is not None:
            return encode_ira(self.H, messages, structure=self.ira)
        return encode_systematic(self.generator, messages)

    def fingerprint(self):
        return self.H.fingerprint()


def from_matrix(H: SparseBinaryMatrix, name="custom", parity_positions=None, template=None):
    """Wrap H, preferring the accumulator encoder when the layout allows it."""
    try:
        ira = ira_structure(H, parity_positions)
    except StructureError:
        if parity_positions is not None:
            raise
        ira = None
    if ira is not None:
        return Code(name, H, ira.info_positions, ira=ira, template=template)
    G = derive_generator(H)
    return Code(name, H, G.info_positions, generator=G, template=template)


def root_check_code(base, name="root-check"):
    H, template = codegen.expand_root_check(base)
    return from_matrix(H, name, codegen.ira_parity_columns(base), template)


def _builtin_text(fname):
    return resources.files("ldpclab.data").joinpath(fname).read_text()


def _from_base_text(text, name):
    base = load_base_matrix(text)
    if ROOT_CHECK_TAG in text:
        return root_check_code(base, name)
    return from_matrix(expand_base(base), name)


def _parse_spec(spec):
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ConfigError(f"bad construction parameter {item!r}")
        params[key.strip()] = int(val)
    return kind, params


def _from_spec(spec):
    kind, p = _parse_spec(spec)
    try:
        if kind == "peg":
            H = codegen.peg_construct(p["m"], p["n"], [p.get("dv", 3)] * p["n"], p.get("seed", 0))
            return from_matrix(H, spec)
        if kind == "peg-ira":
            k = p["n"] - p["m"]
            H = codegen.peg_ira(p["m"], p["n"], [p.get("dv", 3)] * k, p.get("seed", 0))
            return from_matrix(H, spec)
        if kind == "root-check":
            base, _ = codegen.build_qc_ira_root_check(
                p.get("nb", 16), p.get("mb", 8), p.get("s", 42), p.get("F", 2), p.get("seed", 0),
                info_degree=p.get("dv", 3))
            return root_check_code(base, spec)
    except KeyError as exc:
        raise ConfigError(f"construction spec {spec!r} is missing {exc.args[0]!r}") from None
    raise ConfigError(f"unknown construction kind {kind!r}")


@lru_cache(maxsize=32)
def load_code(source: str) -> Code:
    """Resolve a source string to a :class:`Code` (cached per source)."""
    if source in BUILTIN:
        fname = BUILTIN[source]
        text = _builtin_text(fname)
        if fname.endswith(".alist"):
            return from_matrix(load_alist(text), source)
        return _from_base_text(text, source)
    if ":" in source and not Path(source).exists():
        return _from_spec(source)
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"no builtin code or file named {source!r}")
    text = path.read_text()
    if path.suffix == ".alist":
        return from_matrix(load_alist(text), path.stem)
    return _from_base_text(text, path.stem)
