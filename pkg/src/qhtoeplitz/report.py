"""Structured command reports.

A report is a tree of string leaves under string keys (sequences use
zero-padded index keys), serialized to a stable indented key-value text
format that round-trips losslessly, to JSON, and to a looser human-readable
rendering.  Keys never contain ':' or newlines; leaves are single-line
strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA = "qhtoeplitz-report/1"


@dataclass
class Report:
    data: dict

    def __init__(self, command: str | None = None, data: dict | None = None):
        if data is not None:
            self.data = data
        else:
            self.data = {"schema": SCHEMA, "command": command or ""}

    def put(self, *path_and_value) -> "Report":
        *path, value = path_and_value
        node = self.data
        for key in path[:-1]:
            node = node.setdefault(key, {})
            if not isinstance(node, dict):
                raise ValueError(f"report path collision at {key!r}")
        node[path[-1]] = _coerce(value)
        return self

    def put_sequence(self, key: str, items) -> "Report":
        node = {}
        for i, item in enumerate(items):
            node[f"{i:04d}"] = _coerce(item)
        self.data[key] = node
        return self

    # -- serialization -------------------------------------------------------
    def to_text(self) -> str:
        lines: list[str] = []
        _emit(self.data, 0, lines)
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Report":
        root: dict = {}
        stack: list[tuple[int, dict]] = [(-1, root)]
        for lineno, raw in enumerate(text.splitlines(), start=1):
            if not raw.strip():
                continue
            indent = len(raw) - len(raw.lstrip(" "))
            if indent % 2:
                raise ValueError(f"odd indent on line {lineno}")
            level = indent // 2
            while stack and stack[-1][0] >= level:
                stack.pop()
            if not stack:
                raise ValueError(f"bad indentation on line {lineno}")
            parent = stack[-1][1]
            body = raw.strip()
            key, sep, value = body.partition(":")
            if not sep:
                raise ValueError(f"missing ':' on line {lineno}")
            key = key.strip()
            value = value.strip()
            if value:
                parent[key] = _decode(value)
            else:
                child: dict = {}
                parent[key] = child
                stack.append((level, child))
        return Report(data=root)

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2)

    def render(self) -> str:
        """Human rendering: same tree, but sequences flattened for reading."""
        lines: list[str] = []
        _render(self.data, 0, lines)
        return "\n".join(lines) + "\n"


def _coerce(value):
    if isinstance(value, dict):
        return {str(k): _coerce(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return {f"{i:04d}": _coerce(v) for i, v in enumerate(value)}
    return str(value)


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\n", "\\n")


def _decode(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        if value[i] == "\\" and i + 1 < len(value):
            out.append("\n" if value[i + 1] == "n" else value[i + 1])
            i += 2
        else:
            out.append(value[i])
            i += 1
    return "".join(out)


def _emit(node: dict, level: int, lines: list[str]) -> None:
    pad = "  " * level
    for key, value in node.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            _emit(value, level + 1, lines)
        else:
            lines.append(f"{pad}{key}: {_escape(str(value))}")


def _render(node: dict, level: int, lines: list[str]) -> None:
    pad = "  " * level
    for key, value in node.items():
        if isinstance(value, dict):
            keys = list(value.keys())
            if keys and all(k.isdigit() for k in keys) and all(
                not isinstance(v, dict) for v in value.values()
            ):
                lines.append(f"{pad}{key}:")
                for v in value.values():
                    lines.append(f"{pad}  - {v}")
            else:
                lines.append(f"{pad}{key}:")
                _render(value, level + 1, lines)
        else:
            lines.append(f"{pad}{key}: {value}")
