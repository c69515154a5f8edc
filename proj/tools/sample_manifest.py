#!/usr/bin/env python3
"""Writes manifest.json for a nodes.tsv/edges.tsv pair.

The counts and the displaced-artwork rows are computed straight from the raw
rows (line counting and dictionary joins), without going through the C++
loader, so the manifest can be used to check it.

usage: sample_manifest.py DATA_DIR
"""
import collections
import json
import pathlib
import sys


def read_rows(path, width):
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    rows = []
    for line in lines[1:]:
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) < width:
            fields += [""] * (width - len(fields))
        rows.append(fields[:width])
    return rows


def main():
    data_dir = pathlib.Path(sys.argv[1])
    node_rows = read_rows(data_dir / "nodes.tsv", 3)
    edge_rows = read_rows(data_dir / "edges.tsv", 5)

    nodes = {(label, name) for label, name, _ in node_rows}
    edges = {tuple(e) for e in edge_rows}

    nodes_per_label = collections.Counter(label for label, _ in nodes)
    edges_per_type = collections.Counter(e[2] for e in edges)

    def targets(src_label, src_name, edge_type):
        return [(e[3], e[4]) for e in edge_rows
                if e[0] == src_label and e[1] == src_name and e[2] == edge_type]

    def city_country(city):
        found = [t for t in targets("City", city, "inCountry") if t[0] == "Country"]
        return found[0][1] if found else None

    displaced = []
    skipped = 0
    for label, name in sorted(nodes):
        if label != "Artwork":
            continue
        completed = None
        for dl, dn in targets("Artwork", name, "completedIn"):
            completed = dn if dl == "Country" else city_country(dn)
            if completed:
                break
        stored = None
        for _, gallery in targets("Artwork", name, "locatedInGallery"):
            cities = targets("Gallery", gallery, "inCity")
            if cities:
                stored = city_country(cities[0][1])
            if stored:
                break
        if completed is None or stored is None:
            skipped += 1
        elif completed != stored:
            displaced.append([name, completed, stored])

    manifest = {
        "total_nodes": len(nodes),
        "total_edges": len(edges),
        "nodes_per_label": dict(sorted(nodes_per_label.items())),
        "edges_per_type": dict(sorted(edges_per_type.items())),
        "displaced": sorted(displaced),
        "displaced_skipped": skipped,
    }
    with open(data_dir / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, ensure_ascii=False)
        f.write("\n")


if __name__ == "__main__":
    main()
