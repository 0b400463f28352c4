# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import logging
import sys
from pathlib import Path
from typing import IO, Any, Dict, Iterator, List, Optional

from ..ainfty import (CLASSICAL_INPUTS, BialgebraInput, abstract_omega, check,
                      extract_relation, load_omega, perturb,
                      structure_relations)
from ..bider import (Region, coderivation_cochain, fixed_point, group_by_arrow,
                     project_sum, top_wedge)
from ..cochain import (DiagonalProvider, TableDiagonal, default_diagonal,
                       power_series, wedge_level)
from ..const import Color
from ..err import InvalidData, InvalidFace
from ..exporter import ReportExporter
from ..monomat import Arrow, MonomialSum
from ..permuta import OrderedPartition, enumerate_faces, level_coproduct
from ..selftest import SelfTest
from ..util import fraction_to_str
from .model import (CheckOptions, CommandConfig, FacesOptions,
                    RelationsOptions, SelfTestOptions)

logger = logging.getLogger("Main")


def _diagonal(cfg: CommandConfig) -> DiagonalProvider:
    if cfg.diagonal is not None:
        return TableDiagonal.load(cfg.diagonal)
    return default_diagonal(cfg.window)


def _exporter(name: str, cfg: CommandConfig) -> ReportExporter:
    return ReportExporter(name, cfg.fmt, cfg.output)


def _sum_as_json(s: MonomialSum) -> List[List[str]]:
    return [[fraction_to_str(s.coefficient(m)), m.render(ascii=True)] for m in s.monomials()]


def _arrow_text(key: Arrow) -> str:
    (a, b), (c, d) = key
    return f"({a},{b}) -> ({c},{d})"


def faces(cfg: CommandConfig, opts: FacesOptions) -> int:
    if opts.n < 1:
        raise InvalidFace(f"permutahedra are indexed from 1, got {opts.n}")

    with _exporter("faces", cfg) as out:
        for face in enumerate_faces(opts.n, opts.dim):
            out.save(str(face), {"face": str(face), "dimension": face.dimension,
                                 "levels": face.levels})
    return 0


def _face_queries(queries: List[str], stdin: IO[str]) -> Iterator[str]:
    for query in queries:
        if query == "-":
            for line in stdin:
                if line.strip():
                    yield line.strip()
        else:
            yield query


def coproduct(cfg: CommandConfig, queries: List[str], stdin: Optional[IO[str]] = None) -> int:
    with _exporter("coproduct", cfg) as out:
        for query in _face_queries(queries, stdin or sys.stdin):
            face = OrderedPartition.parse(query)
            result = level_coproduct(face)
            out.save(result.render(ascii=True), {
                "face": str(face),
                "terms": [[str(left), str(right), coef] for left, right, coef in result],
            })
    return 0


def cup_table(cfg: CommandConfig, omega_path: Path) -> int:
    omega = load_omega(omega_path)
    phi = top_wedge(project_sum(omega, {Region.U0_ROW}).truncate(cfg.window))
    series = power_series(coderivation_cochain(phi, cfg.window), wedge_level, cfg.window)
    logger.info(f"Series takes values on {Color.BOLD}{len(series)}{Color.NON_BOLD} faces")

    with _exporter("cup", cfg) as out:
        for face, value in series:
            if face.n >= cfg.window:
                continue
            out.save(f"{face}: {value.render(ascii=True)}",
                     {"face": str(face), "value": _sum_as_json(value)})
    return 0


def _arrow_groups(s: MonomialSum) -> List[Dict[str, Any]]:
    return [{"from": list(key[0]), "to": list(key[1]), "terms": _sum_as_json(group)}
            for key, group in group_by_arrow(s)]


def biderivative(cfg: CommandConfig, omega_path: Path, with_expansion: bool = False) -> int:
    omega = load_omega(omega_path)
    result = fixed_point(omega, cfg.window, _diagonal(cfg))

    lines = [f"{_arrow_text(key)}: {group.render(ascii=True)}" for key, group in result.by_arrow()]
    document: Dict[str, Any] = {
        "window": result.window,
        "iterations": result.iterations,
        "arrows": _arrow_groups(result.d_omega),
    }
    if with_expansion:
        lines.append("expansion:")
        lines.extend(f"  {_arrow_text(key)}: {group.render(ascii=True)}"
                     for key, group in group_by_arrow(result.expansion))
        document["expansion"] = _arrow_groups(result.expansion)

    with _exporter("biderivative", cfg) as out:
        out.save_document("\n".join(lines), document)
    return 0


def relations(cfg: CommandConfig, opts: RelationsOptions) -> int:
    omega = load_omega(opts.omega) if opts.omega else None
    diagonal = _diagonal(cfg)

    if opts.bidegree is not None:
        j, i = opts.bidegree
        found = [extract_relation(j, i, cfg.window, omega, diagonal)]
    else:
        all_relations = structure_relations(
            omega if omega is not None else abstract_omega(cfg.window), cfg.window, diagonal)
        found = [r for _, r in sorted(all_relations.items()) if r.lhs or r.rhs]

    with _exporter("relations", cfg) as out:
        for relation in found:
            out.save(relation.render(ascii=True), relation.as_json())
    return 0


def _load_input(name: str) -> BialgebraInput:
    path = Path(name)
    if path.exists():
        return BialgebraInput.load(path)
    if name in CLASSICAL_INPUTS:
        logger.debug(f"Using the built-in {name!r} bialgebra")
        return CLASSICAL_INPUTS[name]()
    raise InvalidData(f"{name}: no such file or built-in input "
                      f"({', '.join(CLASSICAL_INPUTS)})")


def check_input(cfg: CommandConfig, opts: CheckOptions) -> int:
    data = _load_input(opts.input)
    if opts.perturb is not None:
        if opts.perturb not in data.operations:
            raise InvalidData(f"cannot perturb {opts.perturb!r}: no such operation")
        data = perturb(data, opts.perturb, cfg.seed)
        logger.info(f"Perturbed {opts.perturb} with seed {cfg.seed}")

    report = check(data, cfg.window, _diagonal(cfg))
    with _exporter("check", cfg) as out:
        out.save_document(report.render(), report.as_json())
    return 0 if report.passed else 1


def selftest(cfg: CommandConfig, opts: SelfTestOptions) -> int:
    results = SelfTest(opts.cases).run()
    with _exporter("selftest", cfg) as out:
        for r in results:
            text = f"ok   {r.name}" if r.passed else f"FAIL {r.name}: {r.message}"
            out.save(text, r._asdict())
    return 0 if all(r.passed for r in results) else 1
