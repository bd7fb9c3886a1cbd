# src/tools/__init__.py
"""
approxinc 输入输出工具层

- atom_parser: 原子语法解析与打印 (qinc / rinc / inc)
- team_io: 团队 CSV/JSON 与假设文件的读写
- reports: 推导与判定结果的文本/JSON 渲染
"""

from tools.atom_parser import format_atom, parse_atom
from tools.reports import derivation_to_dict, format_derivation, verdict_to_dict, write_derivation
from tools.team_io import read_assumptions, read_team, team_to_dict, write_team

__all__ = [
    "parse_atom",
    "format_atom",
    "read_team",
    "write_team",
    "team_to_dict",
    "read_assumptions",
    "derivation_to_dict",
    "format_derivation",
    "verdict_to_dict",
    "write_derivation",
]
