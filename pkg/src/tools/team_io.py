"""
Team and assumption files.

CSV teams: the first row names the variables, every other row is an
assignment; all values stay strings ("1.0" and "1" differ). JSON teams:
{"variables": [...], "rows": [[...], ...]}. Assumption files hold one atom
per line; blank lines and lines starting with '#' are skipped.
"""

import csv
import io
import json
import sys
from collections import Counter
from pathlib import Path
from typing import List, Optional, TextIO, Union

import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from engine.team import Team
from schema.errors import AtomSyntaxError, DuplicateHeader, EmptyHeader, RaggedRow, UnreadableInput
from schema.models import AssumptionSet, AtomKind
from tools.atom_parser import parse_atom
from utils.artifacts import atomic_write_json, atomic_write_text

Source = Union[str, Path, TextIO]


class TeamDocument(BaseModel):
    variables: List[str] = Field(..., description="变量名（列名）")
    rows: List[List[str]] = Field(default_factory=list, description="每行一个赋值，值均为字符串")


def _name(source: Source) -> str:
    if isinstance(source, (str, Path)):
        return str(source)
    return getattr(source, "name", "<stream>")


def infer_format(source: Source, fmt: Optional[str] = None) -> str:
    if fmt:
        return fmt.lower()
    return "json" if _name(source).lower().endswith(".json") else "csv"


def _open(source: Source) -> TextIO:
    if isinstance(source, (str, Path)):
        if str(source) == "-":
            return sys.stdin
        return open(source, "r", encoding="utf-8", newline="")
    return source


def _check_header(header: List[str], name: str) -> List[str]:
    header = [h.strip() for h in header]
    if not header or any(h == "" for h in header):
        raise EmptyHeader(f"{name}: header has an empty column name")
    duplicates = [h for h, c in Counter(header).items() if c > 1]
    if duplicates:
        raise DuplicateHeader(duplicates)
    return header


def _read_team_csv(source: Source, name: str) -> Team:
    handle = _open(source)
    try:
        reader = csv.reader(handle)
        # 空行跳过；记录物理行号用于报错
        records = [(reader.line_num, row) for row in reader if row]
    except csv.Error as e:
        raise UnreadableInput(name, str(e)) from e
    finally:
        if handle is not source and handle is not sys.stdin:
            handle.close()

    if not records:
        raise EmptyHeader(f"{name} is empty")
    header = _check_header(records[0][1], name)
    for line, row in records[1:]:
        if len(row) != len(header):
            raise RaggedRow(line, len(header), len(row))

    frame = pd.DataFrame([row for _, row in records[1:]], columns=header, dtype=str)
    team = Team.from_frame(frame)
    logger.debug(f"Read team {name}: {len(team)} rows over {len(header)} variables ({team.dropped} duplicates dropped)")
    return team


def _read_team_json(source: Source, name: str) -> Team:
    handle = _open(source)
    try:
        document = TeamDocument.model_validate(json.load(handle))
    except json.JSONDecodeError as e:
        raise UnreadableInput(name, f"invalid JSON: {e}") from e
    except ValidationError as e:
        raise UnreadableInput(name, f"not a team document: {e.errors()[0]['msg']}") from e
    finally:
        if handle is not source and handle is not sys.stdin:
            handle.close()
    header = _check_header(document.variables, name)
    return Team.from_rows(header, document.rows)


def read_team(source: Source, fmt: Optional[str] = None) -> Team:
    """Read a team from a CSV or JSON file, stream, or '-' for stdin."""
    name = _name(source)
    if infer_format(source, fmt) == "json":
        return _read_team_json(source, name)
    return _read_team_csv(source, name)


def team_to_dict(team: Team) -> dict:
    return {"variables": list(team.variables), "rows": [list(r) for r in team.sorted_rows()]}


def team_to_csv(team: Team) -> str:
    buffer = io.StringIO()
    team.to_frame().to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def write_team(team: Team, path: Union[str, Path], fmt: Optional[str] = None) -> None:
    """Write atomically; '-' writes to stdout."""
    fmt = infer_format(path, fmt)
    if fmt == "json":
        content = json.dumps(team_to_dict(team), ensure_ascii=False, indent=2) + "\n"
    else:
        content = team_to_csv(team)
    if str(path) == "-":
        sys.stdout.write(content)
        return
    atomic_write_text(str(path), content)
    logger.info(f"💾 Wrote {len(team)} rows to {path}")


def read_assumptions(source: Source, kind: Optional[AtomKind] = None) -> AssumptionSet:
    """One atom per line; the set must be homogeneous (and of `kind`, if given)."""
    handle = _open(source)
    try:
        lines = handle.read().splitlines()
    finally:
        if handle is not source and handle is not sys.stdin:
            handle.close()

    atoms = []
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            atoms.append(parse_atom(text))
        except AtomSyntaxError as e:
            raise AtomSyntaxError(f"line {number}: {e.text}", e.position, e.expected) from e
    sigma = AssumptionSet.of(atoms, kind)
    logger.debug(f"Read {len(sigma)} assumption(s) from {_name(source)}")
    return sigma


def write_json(path: Union[str, Path], data: dict) -> None:
    if str(path) == "-":
        sys.stdout.write(json.dumps(data, ensure_ascii=False, indent=2) + "\n")
        return
    atomic_write_json(str(path), data)
