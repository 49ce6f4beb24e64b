"""
Graph and vector exports.

Edge list: TSV "src_id<TAB>dst_id<TAB>weight", one undirected edge per line.
Node manifest: JSON with graph metadata and one record per node
(id, title, year, label).
"""

from pathlib import Path
from typing import Dict, List, Mapping, Optional

import numpy as np

from occnet.corpus_parser.io import read_json, write_json
from occnet.errors import DataError
from occnet.text_similarity.embeddings import DescriptionVector
from occnet.text_similarity.graph import SimilarityGraph
from occnet.text_similarity.similarity import parse_weighting


def write_graph(
    graph: SimilarityGraph,
    edges_path: Path,
    nodes_path: Path,
    labels: Optional[Mapping[str, str]] = None,
) -> None:
    edges_path = Path(edges_path)
    edges_path.parent.mkdir(parents=True, exist_ok=True)
    with edges_path.open("w", encoding="utf-8", newline="\n") as fh:
        for s, d, w in zip(graph.src.tolist(), graph.dst.tolist(), graph.weight.tolist()):
            fh.write(f"{graph.nodes[s]}\t{graph.nodes[d]}\t{w!r}\n")

    labels = labels or {}
    manifest = {
        "year": graph.year,
        "threshold": graph.threshold,
        "weighting": graph.weighting.value,
        "n_nodes": graph.n_nodes,
        "n_edges": graph.edge_count,
        "excluded": list(graph.excluded),
        "nodes": [
            {
                "id": node,
                "title": graph.titles[i] if i < len(graph.titles) else "",
                "year": graph.year,
                "label": labels.get(node),
            }
            for i, node in enumerate(graph.nodes)
        ],
    }
    write_json(manifest, nodes_path)


def read_graph(edges_path: Path, nodes_path: Path) -> SimilarityGraph:
    """
    Load a graph written by write_graph.

    Raises:
        DataError: If a file is missing or an edge names an unknown node.
    """
    manifest = read_json(nodes_path)
    nodes = [n["id"] for n in manifest["nodes"]]
    position = {node: i for i, node in enumerate(nodes)}

    src: List[int] = []
    dst: List[int] = []
    weight: List[float] = []
    edges_path = Path(edges_path)
    if not edges_path.exists():
        raise DataError(f"missing edge list: {edges_path}")
    with edges_path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                a, b, w = line.rstrip("\n").split("\t")
                i, j = position[a], position[b]
            except (ValueError, KeyError) as e:
                raise DataError(f"{edges_path}:{line_no}: bad edge line: {e}") from e
            if i > j:
                i, j = j, i
            src.append(i)
            dst.append(j)
            weight.append(float(w))

    order = np.lexsort((np.asarray(dst), np.asarray(src))) if src else np.zeros(0, dtype=np.int64)
    return SimilarityGraph(
        year=int(manifest["year"]),
        nodes=nodes,
        src=np.asarray(src, dtype=np.int64)[order],
        dst=np.asarray(dst, dtype=np.int64)[order],
        weight=np.asarray(weight, dtype=np.float64)[order],
        threshold=float(manifest["threshold"]),
        weighting=parse_weighting(manifest["weighting"]),
        titles=[n.get("title", "") for n in manifest["nodes"]],
        excluded=list(manifest.get("excluded", [])),
    )


def read_node_labels(nodes_path: Path) -> Dict[str, str]:
    manifest = read_json(nodes_path)
    return {n["id"]: n["label"] for n in manifest["nodes"] if n.get("label")}


def write_vectors(vectors: List[DescriptionVector], matrix_path: Path, ids_path: Path) -> None:
    """
    Store non-empty description vectors as a .npy matrix plus an ids/coverage JSON.
    """
    kept = [v for v in vectors if not v.is_empty]
    matrix_path = Path(matrix_path)
    matrix_path.parent.mkdir(parents=True, exist_ok=True)
    dim = kept[0].vector.shape[0] if kept else 0
    matrix = np.vstack([v.vector for v in kept]) if kept else np.zeros((0, dim))
    with matrix_path.open("wb") as fh:
        np.save(fh, matrix, allow_pickle=False)
    write_json(
        {
            "ids": [v.entry_id for v in kept],
            "coverage": [
                {"id": v.entry_id, "covered_tokens": v.covered_tokens, "total_tokens": v.total_tokens}
                for v in vectors
            ],
            "empty": [v.entry_id for v in vectors if v.is_empty],
        },
        ids_path,
    )


def read_vectors(matrix_path: Path, ids_path: Path) -> Dict[str, np.ndarray]:
    meta = read_json(ids_path)
    matrix = np.load(Path(matrix_path), allow_pickle=False)
    if matrix.shape[0] != len(meta["ids"]):
        raise DataError(f"{matrix_path}: {matrix.shape[0]} rows but {len(meta['ids'])} ids")
    return {node: matrix[i] for i, node in enumerate(meta["ids"])}

