# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Any, List, NamedTuple, Optional, Tuple

from ..const import DEFAULT_SEED, DEFAULT_WINDOW
from ..exporter import OutputFormat
from ..util import parse_pair


class CommandConfig(NamedTuple):
    window: int = DEFAULT_WINDOW
    fmt: OutputFormat = "text"
    seed: int = DEFAULT_SEED
    diagonal: Optional[Path] = None
    output: Optional[Path] = None

    @classmethod
    def from_namespace(cls, ns: Any) -> "CommandConfig":
        return cls(
            ns.window,
            ns.format,
            ns.seed,
            Path(ns.diagonal) if ns.diagonal else None,
            Path(ns.output) if ns.output else None,
        )


class FacesOptions(NamedTuple):
    n: int
    dim: Optional[int] = None

    @classmethod
    def from_namespace(cls, ns: Any) -> "FacesOptions":
        return cls(ns.n, ns.dim)


class RelationsOptions(NamedTuple):
    bidegree: Optional[Tuple[int, int]] = None
    omega: Optional[Path] = None

    @classmethod
    def from_namespace(cls, ns: Any) -> "RelationsOptions":
        return cls(parse_pair(ns.bidegree) if ns.bidegree else None,
                   Path(ns.omega) if ns.omega else None)


class CheckOptions(NamedTuple):
    input: str
    perturb: Optional[str] = None

    @classmethod
    def from_namespace(cls, ns: Any) -> "CheckOptions":
        return cls(ns.input, ns.perturb)


class SelfTestOptions(NamedTuple):
    cases: List[str]

    @classmethod
    def from_namespace(cls, ns: Any) -> "SelfTestOptions":
        return cls(list(ns.cases))
