"""Dataset loading: TU text format, JSON format, validation, round trips."""

import json

import pytest

from mssm.molio import (
    MissingInputError,
    ParseError,
    canonical_json,
    dataset_to_json_dict,
    load_json_graphs,
    load_tudataset,
    write_json_graphs,
    write_tudataset,
)

from conftest import write_tu_files


def test_tu_two_graphs(tmp_path):
    d = write_tu_files(
        tmp_path / "toy",
        indicator=[1, 1, 1, 2],
        edges=[(1, 2), (2, 1), (2, 3), (3, 2)],
        graph_labels=[0, 1],
    )
    ds = load_tudataset(d)
    assert len(ds) == 2
    assert ds.graphs[0].node_count == 3 and len(ds.graphs[0].edges) == 2
    assert ds.graphs[1].node_count == 1 and len(ds.graphs[1].edges) == 0
    assert ds.graphs[0].edges == ((0, 1), (1, 2))
    assert [g.class_label for g in ds.graphs] == [0, 1]


def test_tu_empty_edge_file(tmp_path):
    d = write_tu_files(tmp_path / "toy", indicator=[1], edges=[], graph_labels=[0])
    ds = load_tudataset(d)
    assert len(ds) == 1
    assert ds.graphs[0].node_count == 1
    assert ds.graphs[0].edges == ()


def test_tu_edge_out_of_range(tmp_path):
    d = write_tu_files(
        tmp_path / "toy",
        indicator=[1, 1, 1, 1],
        edges=[(1, 5), (5, 1)],
        graph_labels=[0],
    )
    with pytest.raises(ParseError, match="_A.txt"):
        load_tudataset(d)


def test_tu_edge_crossing_graphs(tmp_path):
    d = write_tu_files(
        tmp_path / "toy",
        indicator=[1, 1, 2],
        edges=[(2, 3), (3, 2)],
        graph_labels=[0, 1],
    )
    with pytest.raises(ParseError, match="outside its graph"):
        load_tudataset(d)


def test_tu_asymmetric_edges(tmp_path):
    d = write_tu_files(
        tmp_path / "toy", indicator=[1, 1], edges=[(1, 2)], graph_labels=[0]
    )
    with pytest.raises(ParseError, match="asymmetric"):
        load_tudataset(d)


def test_tu_indicator_gap(tmp_path):
    d = write_tu_files(tmp_path / "toy", indicator=[1, 3], edges=[], graph_labels=[0, 0, 0])
    with pytest.raises(ParseError, match="contiguous"):
        load_tudataset(d)


def test_tu_missing_file(tmp_path):
    d = tmp_path / "toy"
    d.mkdir()
    (d / "toy_graph_indicator.txt").write_text("1\n")
    with pytest.raises(MissingInputError, match="toy_graph_labels.txt"):
        load_tudataset(d)


def test_tu_node_labels_default_zero(tmp_path):
    d = write_tu_files(
        tmp_path / "toy", indicator=[1, 1], edges=[(1, 2), (2, 1)], graph_labels=[0]
    )
    ds = load_tudataset(d)
    assert set(ds.graphs[0].atom_labels) == {0}
    assert ds.atom_label_alphabet == {"0": 0}


def test_json_basic(tmp_path):
    path = tmp_path / "ds.json"
    path.write_text('{"graphs":[{"nodes":["C","O"],"edges":[[0,1]],"label":1}]}')
    ds = load_json_graphs(path)
    assert len(ds) == 1
    g = ds.graphs[0]
    assert g.node_count == 2 and g.edges == ((0, 1),)
    assert ds.atom_names() == ["C", "O"]
    assert ds.class_names() == ["1"]


def test_json_empty_nodes_is_schema_error(tmp_path):
    path = tmp_path / "ds.json"
    path.write_text('{"graphs":[{"nodes":[],"edges":[]}]}')
    with pytest.raises(ParseError, match=r"\$\.graphs\[0\]\.nodes"):
        load_json_graphs(path)


def test_json_self_loop(tmp_path):
    path = tmp_path / "ds.json"
    path.write_text('{"graphs":[{"nodes":["C"],"edges":[[0,0]]}]}')
    with pytest.raises(ParseError, match="self-loop"):
        load_json_graphs(path)


def test_json_duplicate_edge(tmp_path):
    path = tmp_path / "ds.json"
    path.write_text('{"graphs":[{"nodes":["C","O"],"edges":[[0,1],[1,0]]}]}')
    with pytest.raises(ParseError, match="duplicate edge"):
        load_json_graphs(path)


def test_json_edge_out_of_range(tmp_path):
    path = tmp_path / "ds.json"
    path.write_text('{"graphs":[{"nodes":["C","O"],"edges":[[0,5]]}]}')
    with pytest.raises(ParseError, match="out of range"):
        load_json_graphs(path)


def test_json_bond_labels_parallel(tmp_path):
    path = tmp_path / "ds.json"
    path.write_text(
        '{"graphs":[{"nodes":["C","O","N"],"edges":[[0,1],[1,2]],"bond_labels":["=","-"]}]}'
    )
    ds = load_json_graphs(path)
    g = ds.graphs[0]
    assert g.bond_labels is not None and len(g.bond_labels) == 2
    assert ds.bond_names() == ["-", "="]


def test_json_round_trip(tmp_path):
    src = tmp_path / "src.json"
    src.write_text(
        '{"graphs":[{"nodes":["C","O"],"edges":[[0,1]],"label":1},'
        '{"nodes":["N","N","O"],"edges":[[0,1],[1,2]],"label":-1}]}'
    )
    ds = load_json_graphs(src)
    out = tmp_path / "out.json"
    write_json_graphs(ds, out)
    again = load_json_graphs(out)
    assert again == ds
    out2 = tmp_path / "out2.json"
    write_json_graphs(again, out2)
    assert out.read_bytes() == out2.read_bytes()


def test_tu_round_trip_through_json(tmp_path):
    d = write_tu_files(
        tmp_path / "toy",
        indicator=[1, 1, 1, 2, 2],
        edges=[(1, 2), (2, 1), (2, 3), (3, 2), (4, 5), (5, 4)],
        graph_labels=[1, -1],
        node_labels=[0, 1, 2, 0, 0],
    )
    ds = load_tudataset(d)
    out = tmp_path / "ds.json"
    write_json_graphs(ds, out)
    assert load_json_graphs(out) == ds


def test_tu_write_read_round_trip(tmp_path):
    d = write_tu_files(
        tmp_path / "toy",
        indicator=[1, 1, 2, 2, 2],
        edges=[(1, 2), (2, 1), (3, 4), (4, 3), (4, 5), (5, 4)],
        graph_labels=[1, 2],
        node_labels=[3, 3, 1, 2, 1],
    )
    ds = load_tudataset(d)
    write_tudataset(ds, tmp_path / "copy")
    assert load_tudataset(tmp_path / "copy") == ds


def test_loading_is_deterministic(tmp_path):
    path = tmp_path / "ds.json"
    path.write_text('{"graphs":[{"nodes":["C","O"],"edges":[[0,1]],"label":1}]}')
    a = canonical_json(dataset_to_json_dict(load_json_graphs(path)))
    b = canonical_json(dataset_to_json_dict(load_json_graphs(path)))
    assert a.encode() == b.encode()


def test_json_rejects_malformed_json(tmp_path):
    path = tmp_path / "ds.json"
    path.write_text("{nope")
    with pytest.raises(ParseError, match="invalid JSON"):
        load_json_graphs(path)


def test_alphabets_sort_numerically(tmp_path):
    d = write_tu_files(
        tmp_path / "toy",
        indicator=[1, 1, 1],
        edges=[],
        graph_labels=[10],
        node_labels=[2, 10, 0],
    )
    ds = load_tudataset(d)
    assert list(ds.atom_label_alphabet) == ["0", "2", "10"]
    assert json.loads(canonical_json(dataset_to_json_dict(ds)))  # serializable
