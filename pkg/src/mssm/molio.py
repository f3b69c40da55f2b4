"""Loading, validation and serialization of molecular graph datasets.

Two on-disk formats are supported:

* the TU benchmark text format: ``<DS>_A.txt`` (1-based, comma separated,
  both edge directions listed), ``<DS>_graph_indicator.txt``,
  ``<DS>_graph_labels.txt`` and optionally ``<DS>_node_labels.txt``;
* a JSON format with 0-based indices, see :data:`JSON_SCHEMA`.

All indices are 0-based in memory and every edge is stored once with the
smaller endpoint first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

__all__ = [
    "ParseError",
    "MissingInputError",
    "MolecularGraph",
    "GraphDataset",
    "load_tudataset",
    "load_json_graphs",
    "dataset_to_json_dict",
    "write_json_graphs",
    "write_tudataset",
    "canonical_json",
]


class ParseError(ValueError):
    """Malformed dataset input; the message names the file (and line) at fault."""

    def __init__(self, message, file=None, line=None):
        where = ""
        if file is not None:
            where = f"{file}: " if line is None else f"{file}:{line}: "
        super().__init__(f"{where}{message}")
        self.file = None if file is None else str(file)
        self.line = line


class MissingInputError(ParseError):
    """A required dataset file is absent or unreadable."""


@dataclass(frozen=True)
class MolecularGraph:
    """Atom-labeled undirected graph with an optional class label.

    ``atom_labels[i]`` is the categorical label id of node ``i``; ``edges``
    holds each undirected pair once, smaller index first; ``bond_labels``,
    when present, is parallel to ``edges``.
    """

    atom_labels: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    bond_labels: tuple[int, ...] | None = None
    class_label: int | None = None

    @property
    def node_count(self):
        return len(self.atom_labels)

    def validate(self):
        n = self.node_count
        if n == 0:
            raise ValueError("graph has no nodes")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < v < n):
                raise ValueError(f"edge ({u},{v}) out of order or out of range (n={n})")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
        if self.bond_labels is not None and len(self.bond_labels) != len(self.edges):
            raise ValueError("bond_labels not parallel to edges")
        return self


@dataclass(frozen=True)
class GraphDataset:
    """A list of molecular graphs plus the label alphabets they draw from."""

    graphs: tuple[MolecularGraph, ...]
    atom_label_alphabet: dict[str, int] = field(default_factory=dict)
    bond_label_alphabet: dict[str, int] = field(default_factory=dict)
    class_alphabet: dict[str, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.graphs)

    def atom_names(self):
        """Label string for each atom label id, indexable by id."""
        return _names_by_id(self.atom_label_alphabet)

    def bond_names(self):
        return _names_by_id(self.bond_label_alphabet)

    def class_names(self):
        return _names_by_id(self.class_alphabet)

    def validate(self):
        if not self.graphs:
            raise ValueError("dataset is empty")
        atom_ids = set(self.atom_label_alphabet.values())
        bond_ids = set(self.bond_label_alphabet.values())
        class_ids = set(self.class_alphabet.values())
        for g in self.graphs:
            g.validate()
            if not set(g.atom_labels) <= atom_ids:
                raise ValueError("atom label id missing from alphabet")
            if g.bond_labels is not None and not set(g.bond_labels) <= bond_ids:
                raise ValueError("bond label id missing from alphabet")
            if g.class_label is not None and g.class_label not in class_ids:
                raise ValueError("class label id missing from alphabet")
        return self


def _names_by_id(alphabet):
    names = [None] * len(alphabet)
    for name, i in alphabet.items():
        names[i] = name
    return names


def _alphabet_key(s):
    # Numeric labels sort numerically ("2" before "10"), the rest lexically.
    try:
        return (0, int(s), "")
    except ValueError:
        return (1, 0, s)


def _make_alphabet(values):
    return {v: i for i, v in enumerate(sorted(set(values), key=_alphabet_key))}


# ---------------------------------------------------------------------------
# TU text format
# ---------------------------------------------------------------------------


def _read_lines(path):
    try:
        text = path.read_text(encoding="ascii")
    except FileNotFoundError:
        raise MissingInputError("required file is missing", file=path) from None
    except OSError as exc:
        raise MissingInputError(f"cannot read file: {exc}", file=path) from None
    # keep line numbers: skip blanks but remember their position
    return [(i + 1, line.strip()) for i, line in enumerate(text.splitlines()) if line.strip()]


def load_tudataset(directory_path):
    """Parse a TU-format dataset directory into a :class:`GraphDataset`.

    The dataset name is the directory basename; ``<name>_node_labels.txt``
    is optional (all nodes get label "0" when it is absent).
    """
    directory = Path(directory_path)
    if not directory.is_dir():
        raise MissingInputError("dataset directory does not exist", file=directory)
    name = directory.name
    indicator_path = directory / f"{name}_graph_indicator.txt"
    labels_path = directory / f"{name}_graph_labels.txt"
    edges_path = directory / f"{name}_A.txt"
    node_labels_path = directory / f"{name}_node_labels.txt"

    indicator = []
    for lineno, line in _read_lines(indicator_path):
        try:
            indicator.append(int(line))
        except ValueError:
            raise ParseError(f"not an integer: {line!r}", file=indicator_path, line=lineno) from None
    if not indicator:
        raise ParseError("no nodes listed", file=indicator_path)

    graph_count = max(indicator)
    if min(indicator) < 1 or set(indicator) != set(range(1, graph_count + 1)):
        raise ParseError("graph ids are not contiguous from 1", file=indicator_path)

    # global 1-based node id -> (graph index, local 0-based index)
    node_of = {}
    sizes = [0] * graph_count
    for node_id, graph_id in enumerate(indicator, start=1):
        g = graph_id - 1
        node_of[node_id] = (g, sizes[g])
        sizes[g] += 1

    class_strings = [line for _, line in _read_lines(labels_path)]
    if len(class_strings) != graph_count:
        raise ParseError(
            f"expected {graph_count} graph labels, found {len(class_strings)}",
            file=labels_path,
        )

    if node_labels_path.exists():
        node_label_strings = [line for _, line in _read_lines(node_labels_path)]
        if len(node_label_strings) != len(indicator):
            raise ParseError(
                f"expected {len(indicator)} node labels, found {len(node_label_strings)}",
                file=node_labels_path,
            )
    else:
        node_label_strings = ["0"] * len(indicator)

    directed = {}
    edge_lines = _read_lines(edges_path) if edges_path.exists() else []
    if not edges_path.exists():
        raise MissingInputError("required file is missing", file=edges_path)
    for lineno, line in edge_lines:
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ParseError(f"expected 'i, j', got {line!r}", file=edges_path, line=lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {line!r}", file=edges_path, line=lineno) from None
        if a not in node_of or b not in node_of:
            raise ParseError(
                f"edge ({a},{b}) references a node index outside the dataset",
                file=edges_path,
                line=lineno,
            )
        if node_of[a][0] != node_of[b][0]:
            raise ParseError(
                f"edge ({a},{b}) references a node index outside its graph",
                file=edges_path,
                line=lineno,
            )
        if a == b:
            raise ParseError(f"self-loop at node {a}", file=edges_path, line=lineno)
        if (a, b) in directed:
            raise ParseError(f"duplicate edge ({a},{b})", file=edges_path, line=lineno)
        directed[(a, b)] = lineno

    for (a, b), lineno in directed.items():
        if (b, a) not in directed:
            raise ParseError(
                f"edge ({a},{b}) has no reverse direction (asymmetric edge file)",
                file=edges_path,
                line=lineno,
            )

    atom_alphabet = _make_alphabet(node_label_strings)
    class_alphabet = _make_alphabet(class_strings)

    node_labels_per_graph = [[] for _ in range(graph_count)]
    for node_id, graph_id in enumerate(indicator, start=1):
        node_labels_per_graph[graph_id - 1].append(
            atom_alphabet[node_label_strings[node_id - 1]]
        )

    edges_per_graph = [[] for _ in range(graph_count)]
    for a, b in directed:
        if a < b:  # keep first-direction file order, one undirected copy
            g, la = node_of[a]
            _, lb = node_of[b]
            edges_per_graph[g].append((min(la, lb), max(la, lb)))

    graphs = []
    for g in range(graph_count):
        graphs.append(
            MolecularGraph(
                atom_labels=tuple(node_labels_per_graph[g]),
                edges=tuple(sorted(set(edges_per_graph[g]))),
                class_label=class_alphabet[class_strings[g]],
            )
        )
    return GraphDataset(
        graphs=tuple(graphs),
        atom_label_alphabet=atom_alphabet,
        bond_label_alphabet={},
        class_alphabet=class_alphabet,
    ).validate()


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------

JSON_SCHEMA = {
    "type": "object",
    "required": ["graphs"],
    "additionalProperties": False,
    "properties": {
        "graphs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["nodes", "edges"],
                "additionalProperties": False,
                "properties": {
                    "nodes": {
                        "type": "array",
                        "minItems": 1,
                        "items": {"type": "string"},
                    },
                    "edges": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "minItems": 2,
                            "maxItems": 2,
                            "items": {"type": "integer", "minimum": 0},
                        },
                    },
                    "bond_labels": {"type": "array", "items": {"type": "string"}},
                    "label": {"type": "integer"},
                },
            },
        },
    },
}


def load_json_graphs(file_path):
    """Parse a JSON dataset file into a :class:`GraphDataset`."""
    path = Path(file_path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise MissingInputError("required file is missing", file=path) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", file=path, line=exc.lineno) from None

    validator = jsonschema.Draft202012Validator(JSON_SCHEMA)
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ParseError(f"schema violation at {err.json_path}: {err.message}", file=path)

    records = []
    for gi, record in enumerate(payload["graphs"]):
        records.append(
            (
                record["nodes"],
                record["edges"],
                record.get("bond_labels"),
                record.get("label"),
                f"$.graphs[{gi}]",
            )
        )
    try:
        return dataset_from_records(records)
    except ValueError as exc:
        raise ParseError(str(exc), file=path) from None


def dataset_from_records(records):
    """Build a dataset from ``(nodes, edges, bond_labels, label, tag)`` tuples.

    ``nodes`` are atom label strings, ``edges`` 0-based pairs, ``bond_labels``
    an optional list of strings parallel to edges, ``label`` an optional
    integer class label, ``tag`` a location string used in error messages.
    """
    atom_strings = []
    bond_strings = []
    class_strings = []
    for nodes, edges, bond_labels, label, tag in records:
        n = len(nodes)
        atom_strings.extend(nodes)
        seen = set()
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"{tag}: self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"{tag}: edge ({u},{v}) out of range (n={n})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"{tag}: duplicate edge ({u},{v})")
            seen.add(key)
        if bond_labels is not None:
            if len(bond_labels) != len(edges):
                raise ValueError(f"{tag}: bond_labels not parallel to edges")
            bond_strings.extend(bond_labels)
        if label is not None:
            class_strings.append(str(label))

    atom_alphabet = _make_alphabet(atom_strings)
    bond_alphabet = _make_alphabet(bond_strings)
    class_alphabet = _make_alphabet(class_strings)

    graphs = []
    for nodes, edges, bond_labels, label, _ in records:
        normalized = [(min(u, v), max(u, v)) for u, v in edges]
        order = sorted(range(len(normalized)), key=lambda i: normalized[i])
        graphs.append(
            MolecularGraph(
                atom_labels=tuple(atom_alphabet[s] for s in nodes),
                edges=tuple(normalized[i] for i in order),
                bond_labels=(
                    None
                    if bond_labels is None
                    else tuple(bond_alphabet[bond_labels[i]] for i in order)
                ),
                class_label=None if label is None else class_alphabet[str(label)],
            )
        )
    return GraphDataset(
        graphs=tuple(graphs),
        atom_label_alphabet=atom_alphabet,
        bond_label_alphabet=bond_alphabet,
        class_alphabet=class_alphabet,
    ).validate()


def dataset_to_json_dict(dataset):
    """The JSON-format dict for a dataset; inverse of :func:`load_json_graphs`."""
    atom_names = dataset.atom_names()
    bond_names = dataset.bond_names()
    class_names = dataset.class_names()
    graphs = []
    for g in dataset.graphs:
        record = {
            "nodes": [atom_names[i] for i in g.atom_labels],
            "edges": [[u, v] for u, v in g.edges],
        }
        if g.bond_labels is not None:
            record["bond_labels"] = [bond_names[i] for i in g.bond_labels]
        if g.class_label is not None:
            record["label"] = int(class_names[g.class_label])
        graphs.append(record)
    return {"graphs": graphs}


def canonical_json(payload):
    """Deterministic JSON text used for all exports and round-trip checks."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_json_graphs(dataset, file_path):
    Path(file_path).write_text(canonical_json(dataset_to_json_dict(dataset)), encoding="utf-8")


def write_tudataset(dataset, directory_path):
    """Write a dataset as TU text files (both edge directions, 1-based)."""
    directory = Path(directory_path)
    directory.mkdir(parents=True, exist_ok=True)
    name = directory.name
    atom_names = dataset.atom_names()
    class_names = dataset.class_names()

    indicator = []
    node_labels = []
    edges = []
    offset = 0
    for gi, g in enumerate(dataset.graphs, start=1):
        indicator.extend([str(gi)] * g.node_count)
        node_labels.extend(atom_names[i] for i in g.atom_labels)
        for u, v in g.edges:
            edges.append(f"{offset + u + 1}, {offset + v + 1}")
            edges.append(f"{offset + v + 1}, {offset + u + 1}")
        offset += g.node_count

    (directory / f"{name}_graph_indicator.txt").write_text("\n".join(indicator) + "\n")
    (directory / f"{name}_node_labels.txt").write_text("\n".join(node_labels) + "\n")
    (directory / f"{name}_A.txt").write_text(("\n".join(edges) + "\n") if edges else "")
    labels = [
        "0" if g.class_label is None else class_names[g.class_label]
        for g in dataset.graphs
    ]
    (directory / f"{name}_graph_labels.txt").write_text("\n".join(labels) + "\n")
