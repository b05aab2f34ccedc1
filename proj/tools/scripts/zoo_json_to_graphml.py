#!/usr/bin/env python3
"""Write Internet Topology Zoo graphs from the topohub package as GraphML.

topohub ships the Zoo topologies in NetworkX node-link JSON with node
positions as (longitude, latitude). This script writes them back out using
the Zoo's own GraphML attribute names (label, Latitude, Longitude) so the
importer sees the same conventions as the original .graphml downloads.

usage: zoo_json_to_graphml.py OUT_DIR NAME [NAME ...]
"""
import importlib.resources
import json
import sys

import networkx as nx


def convert(name: str, out_dir: str) -> None:
    src = importlib.resources.files("topohub") / "data" / "topozoo" / f"{name}.json"
    data = json.loads(src.read_text())
    g = nx.Graph(Network=name)
    for node in data["nodes"]:
        lon, lat = node["pos"]
        g.add_node(str(node["id"]), label=node["name"], Latitude=float(lat), Longitude=float(lon))
    for edge in data["edges"]:
        g.add_edge(str(edge["source"]), str(edge["target"]))
    nx.write_graphml(g, f"{out_dir}/{name}.graphml")
    print(f"{name}: {g.number_of_nodes()} nodes, {g.number_of_edges()} edges")


if __name__ == "__main__":
    if len(sys.argv) < 3:
        sys.exit(__doc__)
    for n in sys.argv[2:]:
        convert(n, sys.argv[1])
