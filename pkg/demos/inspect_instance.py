"""Load a bundled Solomon file and poke at what the parser produces.

Run:  python3 demos/inspect_instance.py [name]
"""

import sys

import numpy as np

from nrpa_vrptw import build_geometry, list_bundled_instances, load_instance, serialize_instance, parse_instance


def main():
    name = sys.argv[1] if len(sys.argv) > 1 else "c101"
    names = list_bundled_instances()
    print(f"{len(names)} bundled instances: {', '.join(names[:8])}, ...")

    inst = load_instance(name)
    depot = inst.nodes[0]
    print(f"\n{inst.name}: fleet {inst.fleet_size}, capacity {inst.capacity}")
    print(f"depot at ({depot.x:g}, {depot.y:g}), open [0, {depot.due:g}]")
    print(f"total demand {sum(n.demand for n in inst.nodes)}")

    widths = [n.due - n.ready for n in inst.nodes[1:]]
    print(f"customer window width: min {min(widths):g}, "
          f"median {sorted(widths)[50]:g}, max {max(widths):g}")

    geom = build_geometry(inst)
    print(f"\ndistance matrix {geom.dist.shape}, "
          f"longest arc {geom.max_dist:.2f}")
    print(f"widest window {geom.biggest_tw:g}, earliest opening {geom.ftw:g}")
    # the matrix is exact Euclidean geometry, so it is symmetric
    assert np.array_equal(geom.dist, geom.dist.T)

    # the serializer emits the same text layout the parser accepts
    text = serialize_instance(inst)
    assert parse_instance(text) == inst
    print(f"\nround-trip through text: {len(text.splitlines())} lines, exact")


if __name__ == "__main__":
    main()
