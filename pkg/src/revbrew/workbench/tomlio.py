"""Minimal TOML reading/writing for the workspace file schema.

Reading uses the stdlib parser (tomllib, or its tomli backport on 3.10).
Writing covers exactly what the workspace files need: tables and arrays of
tables holding strings, booleans, integers and floats. Values round-trip
losslessly, which the workspace serialization tests rely on.
"""

from __future__ import annotations

from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\b": "\\b",
    "\f": "\\f",
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def load_toml(path: Path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        # repr round-trips doubles exactly; force a float-looking literal
        text = repr(value)
        if "." not in text and "e" not in text and "inf" not in text and "nan" not in text:
            text += ".0"
        return text
    if isinstance(value, str):
        escaped = "".join(_ESCAPES.get(ch, ch) for ch in value)
        return f'"{escaped}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise TypeError(f"cannot write {type(value).__name__} to TOML")


def dumps_toml(document: dict) -> str:
    """Serialize {table: dict} / {table: [dict, ...]} documents."""
    lines: list[str] = []
    for key, value in document.items():
        if isinstance(value, list) and all(isinstance(v, dict) for v in value):
            if not value:
                lines.append(f"{key} = []")
                lines.append("")
                continue
            for entry in value:
                lines.append(f"[[{key}]]")
                for k, v in entry.items():
                    lines.append(f"{k} = {_format_value(v)}")
                lines.append("")
        elif isinstance(value, dict):
            lines.append(f"[{key}]")
            for k, v in value.items():
                lines.append(f"{k} = {_format_value(v)}")
            lines.append("")
        else:
            raise TypeError(f"top-level entry {key!r} must be a table or array of tables")
    return "\n".join(lines)


def dump_toml(document: dict, path: Path) -> None:
    Path(path).write_text(dumps_toml(document), encoding="utf-8")
