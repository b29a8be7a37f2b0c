"""JSON tuple files and the bundled corpus.

A tuple file is a JSON object::

    {"name": "quartic", "n": 1, "sets": [[[0], [1], [2], [3], [4]]]}

``sets`` is a list of sets, each a list of integer points of length ``n``.
``name`` is optional and ``n`` may be omitted when some set is nonempty.
Repeated points inside a set are dropped with a warning.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .lattice import LatticeSet, LatticeTuple


class TupleFileError(ValueError):
    pass


@dataclass
class TupleFile:
    n: int
    sets: list[list[tuple[int, ...]]]
    name: str | None = None
    warnings: list[str] = field(default_factory=list, compare=False)

    def to_tuple(self) -> LatticeTuple:
        return LatticeTuple([LatticeSet(s, self.n) for s in self.sets], self.n)

    def to_json(self) -> dict:
        out = {"n": self.n, "sets": [[list(p) for p in s] for s in self.sets]}
        if self.name is not None:
            out["name"] = self.name
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def parse(data, source: str = "<input>") -> TupleFile:
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise TupleFileError(f"{source}: not valid JSON ({e})") from e
    if not isinstance(data, dict) or "sets" not in data:
        raise TupleFileError(f"{source}: expected an object with a 'sets' field")
    raw_sets = data["sets"]
    if not isinstance(raw_sets, list) or not raw_sets:
        raise TupleFileError(f"{source}: 'sets' must be a nonempty list")
    n = data.get("n")
    if n is None:
        lens = {len(p) for s in raw_sets for p in s}
        if len(lens) != 1:
            raise TupleFileError(f"{source}: cannot infer n")
        n = lens.pop()
    if not isinstance(n, int) or n < 1:
        raise TupleFileError(f"{source}: n must be a positive integer")
    notes = []
    sets = []
    for i, s in enumerate(raw_sets):
        if not isinstance(s, list) or not s:
            raise TupleFileError(f"{source}: set {i} must be a nonempty list of points")
        pts = []
        seen = set()
        for p in s:
            if not isinstance(p, list) or len(p) != n or not all(isinstance(x, int) and not isinstance(x, bool) for x in p):
                raise TupleFileError(f"{source}: set {i} has a point that is not {n} integers: {p!r}")
            tp = tuple(p)
            if tp in seen:
                notes.append(f"set {i}: duplicate point {list(tp)} dropped")
                continue
            seen.add(tp)
            pts.append(tp)
        sets.append(sorted(pts))
    for msg in notes:
        warnings.warn(f"{source}: {msg}", stacklevel=2)
    name = data.get("name")
    return TupleFile(n, sets, name if isinstance(name, str) else None, notes)


def corpus_names() -> list[str]:
    root = resources.files("sparsegalois") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_corpus(name: str) -> TupleFile:
    root = resources.files("sparsegalois") / "corpus"
    f = root / f"{name}.json"
    if not f.is_file():
        raise TupleFileError(f"no corpus entry named {name!r}")
    return parse(f.read_text(), f"corpus:{name}")


def load(ref: str) -> TupleFile:
    """Load from a path; fall back to the corpus entry with the same stem."""
    path = Path(ref)
    if ref.startswith("corpus:"):
        return load_corpus(ref[len("corpus:"):])
    if path.is_file():
        return parse(path.read_text(), str(path))
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in corpus_names():
        return load_corpus(stem)
    raise TupleFileError(f"{ref}: no such file or corpus entry")
