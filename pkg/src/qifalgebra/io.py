"""JSON and CSV formats for channels, priors and gain functions.

Labels are encoded as JSON values: atoms are strings, pairs are
``["pair", a, b]`` and tagged labels ``["tag", a, 1]``.  In CSV cells a
composite label is written as its JSON text.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Union

import numpy as np

from .channel import Channel, GainFunction, Pair, Prior, Tag
from .errors import DimensionMismatch


def encode_label(label):
    if isinstance(label, str):
        return label
    if isinstance(label, Pair):
        return ["pair", encode_label(label.left), encode_label(label.right)]
    if isinstance(label, Tag):
        return ["tag", encode_label(label.label), label.branch]
    raise TypeError(f"cannot encode label {label!r}")


def decode_label(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, list) and len(value) == 3:
        kind = value[0]
        if kind == "pair":
            return Pair(decode_label(value[1]), decode_label(value[2]))
        if kind == "tag":
            return Tag(decode_label(value[1]), int(value[2]))
    raise ValueError(f"malformed label {value!r}")


def channel_to_dict(c: Channel) -> dict:
    return {
        "inputs": [encode_label(x) for x in c.inputs],
        "outputs": [encode_label(y) for y in c.outputs],
        "rows": c.matrix.tolist(),
    }


def channel_from_dict(d: dict) -> Channel:
    try:
        inputs, outputs, rows = d["inputs"], d["outputs"], d["rows"]
    except KeyError as e:
        raise DimensionMismatch(f"channel JSON lacks field {e}") from None
    if len(rows) != len(inputs) or any(len(r) != len(outputs) for r in rows):
        raise DimensionMismatch("rows do not match the label lists")
    return Channel([decode_label(x) for x in inputs], [decode_label(y) for y in outputs], rows)


def prior_to_dict(pi: Prior) -> dict:
    return {"support": [encode_label(x) for x in pi.support], "probs": pi.probs.tolist()}


def prior_from_dict(d: dict) -> Prior:
    return Prior([decode_label(x) for x in d["support"]], d["probs"])


def gain_to_dict(g: GainFunction) -> dict:
    return {
        "actions": [encode_label(w) for w in g.actions],
        "inputs": [encode_label(x) for x in g.inputs],
        "rows": g.matrix.tolist(),
    }


def gain_from_dict(d: dict) -> GainFunction:
    return GainFunction(
        [decode_label(w) for w in d["actions"]], [decode_label(x) for x in d["inputs"]], d["rows"]
    )


def dumps_channel(c: Channel) -> str:
    return json.dumps(channel_to_dict(c))


def loads_channel(text: str) -> Channel:
    return channel_from_dict(json.loads(text))


def _cell(label) -> str:
    return label if isinstance(label, str) else json.dumps(encode_label(label))


def _uncell(text: str):
    text = text.strip()
    if text.startswith("["):
        return decode_label(json.loads(text))
    return text


def channel_to_csv(c: Channel) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + [_cell(y) for y in c.outputs])
    for x, row in zip(c.inputs, c.matrix):
        w.writerow([_cell(x)] + [repr(float(v)) for v in row])
    return buf.getvalue()


def channel_from_csv(text: str) -> Channel:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if len(rows) < 2:
        raise DimensionMismatch("CSV channel needs a header row and at least one data row")
    outputs = [_uncell(v) for v in rows[0][1:]]
    inputs = [_uncell(r[0]) for r in rows[1:]]
    body = []
    for r in rows[1:]:
        if len(r) - 1 != len(outputs):
            raise DimensionMismatch("CSV row length does not match the header")
        body.append([float(v) for v in r[1:]])
    return Channel(inputs, outputs, body)


def matrix_from_csv(text: str) -> np.ndarray:
    """Plain numeric matrix; a labeled channel CSV is accepted too."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    try:
        return np.array([[float(v) for v in r] for r in rows])
    except ValueError:
        return channel_from_csv(text).matrix.copy()


PathLike = Union[str, Path]


def read_channel(path: PathLike) -> Channel:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return channel_from_csv(text)
    return loads_channel(text)


def write_channel(c: Channel, path: PathLike) -> None:
    path = Path(path)
    path.write_text(channel_to_csv(c) if path.suffix.lower() == ".csv" else dumps_channel(c) + "\n")


def read_prior(path: PathLike) -> Prior:
    return prior_from_dict(json.loads(Path(path).read_text()))


def read_gain(path: PathLike) -> GainFunction:
    return gain_from_dict(json.loads(Path(path).read_text()))
