"""File formats and table rendering.

A game document is JSON with an integer ``players`` field and a ``values``
map keyed by brace-rendered coalitions (``"{1,3}"``, sorted ascending;
``"{}"`` is the empty coalition and must be absent or 0).  Omitted
coalitions default to 0.  A decomposition document mirrors it with one
values map per player.  Machine exports rely on JSON's shortest-round-trip
float rendering, so re-parsing reproduces tables bit for bit.
"""

from __future__ import annotations

import json
import re
from typing import Mapping

import numpy as np

from .bitsets import as_mask, check_player_count, coalition_label
from .decompose import Decomposition
from .errors import GameConstraintError, GameFormatError
from .games import Game

_LABEL_RE = re.compile(r"^\{(\d+(,\d+)*)?\}$")

FLOAT_DIGITS = 12  # significant digits in human-readable tables


def parse_coalition_label(label: str, n_players: int) -> int:
    """Strictly parse ``"{1,3}"`` into a mask; players must be sorted and
    unique."""
    if not isinstance(label, str) or not _LABEL_RE.match(label):
        raise GameFormatError(f"malformed coalition key {label!r}")
    inner = label[1:-1]
    if not inner:
        return 0
    players = [int(p) for p in inner.split(",")]
    if any(b <= a for a, b in zip(players, players[1:])):
        raise GameFormatError(f"coalition key {label!r} must be sorted and duplicate-free")
    try:
        return as_mask(players, n_players)
    except ValueError as exc:
        raise GameConstraintError(str(exc)) from None


def _values_from_map(raw: Mapping[str, object], n: int) -> np.ndarray:
    values = np.zeros(1 << n)
    seen = set()
    for label, value in raw.items():
        mask = parse_coalition_label(label, n)
        if mask in seen:
            raise GameFormatError(f"duplicate coalition key {label!r}")
        seen.add(mask)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise GameFormatError(f"value for {label!r} must be a number, got {value!r}")
        if mask == 0 and value != 0:
            raise GameConstraintError("the empty coalition must have value 0")
        values[mask] = float(value)
    return values


def _load_document(text: str) -> dict:
    def reject_duplicates(pairs):
        keys = [k for k, _ in pairs]
        if len(keys) != len(set(keys)):
            raise GameFormatError("duplicate keys in document")
        return dict(pairs)

    try:
        document = json.loads(text, object_pairs_hook=reject_duplicates)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise GameFormatError("document must be a JSON object")
    return document


def _player_count(document: Mapping[str, object]) -> int:
    if "players" not in document:
        raise GameFormatError('missing "players" field')
    n = document["players"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise GameFormatError('"players" must be an integer')
    try:
        return check_player_count(n)
    except (TypeError, ValueError) as exc:
        raise GameConstraintError(str(exc)) from None


def parse_game(text: str) -> Game:
    document = _load_document(text)
    n = _player_count(document)
    if "values" not in document:
        raise GameFormatError('missing "values" field')
    raw_values = document["values"]
    if not isinstance(raw_values, dict):
        raise GameFormatError('"values" must be an object')
    return Game(n, _values_from_map(raw_values, n))


def is_decomposition_document(text: str) -> bool:
    """True when the JSON document carries per-player component maps."""
    try:
        return "components" in _load_document(text)
    except GameFormatError:
        return False


def _values_map(values: np.ndarray, keep_zeros: bool = False) -> dict[str, float]:
    return {
        coalition_label(mask): float(value)
        for mask, value in enumerate(values)
        if keep_zeros or value != 0.0
    }


def format_game(game: Game) -> str:
    document = {"players": game.n_players, "values": _values_map(game.values)}
    return json.dumps(document, indent=2) + "\n"


def format_decomposition_machine(d: Decomposition) -> str:
    document = {
        "players": d.source.n_players,
        "source": _values_map(d.source.values),
        "components": {
            str(i): _values_map(d.component(i).values, keep_zeros=True)
            for i in range(1, d.source.n_players + 1)
        },
    }
    return json.dumps(document, indent=2) + "\n"


def parse_decomposition(text: str) -> Decomposition:
    document = _load_document(text)
    n = _player_count(document)
    source_map = document.get("source", {})
    components_map = document.get("components", {})
    if not isinstance(source_map, dict) or not isinstance(components_map, dict):
        raise GameFormatError('"source" and "components" must be objects')
    if set(components_map) != {str(i) for i in range(1, n + 1)}:
        raise GameFormatError(f'"components" must have exactly the keys 1..{n}')
    source = Game(n, _values_from_map(source_map, n))
    components = tuple(
        Game(n, _values_from_map(components_map[str(i)], n)) for i in range(1, n + 1)
    )
    return Decomposition(source, components, tuple(float("nan") for _ in range(n)))


def _fmt(x: float) -> str:
    return f"{x:.{FLOAT_DIGITS}g}"


def render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(h), *(len(r[c]) for r in rows)) if rows else len(h)
        for c, h in enumerate(headers)
    ]
    def line(cells):
        return "  ".join(cell.rjust(w) for cell, w in zip(cells, widths))
    out = [line(headers), line(["-" * w for w in widths])]
    out.extend(line(r) for r in rows)
    return "\n".join(out) + "\n"


def render_csv(headers: list[str], rows: list[list[str]]) -> str:
    import csv
    import io as stringio

    buffer = stringio.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buffer.getvalue()


def decomposition_rows(d: Decomposition) -> tuple[list[str], list[list[str]]]:
    """Header and rows: coalition, game value, per-player components, and the
    row's efficiency defect."""
    n = d.source.n_players
    headers = ["coalition", "v"] + [f"v{i}" for i in range(1, n + 1)] + ["sum_defect"]
    table = d.component_table()
    row_sums = np.sum(table, axis=0)
    rows = []
    for mask in range(1 << n):
        rows.append(
            [coalition_label(mask), _fmt(d.source.values[mask])]
            + [_fmt(table[b, mask]) for b in range(n)]
            + [_fmt(abs(row_sums[mask] - d.source.values[mask]))]
        )
    return headers, rows


def shapley_rows(n: int, phi: np.ndarray) -> tuple[list[str], list[list[str]]]:
    headers = ["player", "phi"]
    rows = [[str(i), _fmt(phi[i - 1])] for i in range(1, n + 1)]
    return headers, rows
