"""Write every built-in certificate to a .cert file (default: the package data directory)."""

import argparse
from pathlib import Path

from wflpebble.certificate import serialize_certificate
from wflpebble.heuristic import cube_certificate
from wflpebble.catalog import covered_targets, paper_certificate

DATA = Path(__file__).resolve().parents[1] / "src" / "wflpebble" / "data"

# (family, parameter, graph reference written into the file)
SETS = [
    ("petersen", None, "petersen"),
    ("blanusa2", None, "blanusa2"),
    ("blanusa1", None, "blanusa1"),
    ("flower", 3, "flower3"),
    ("flower", 5, "flower5"),
    ("flower", 7, "flower7"),
]


def fixture_name(ref: str, target: str) -> str:
    return f"{ref}_{target.replace(chr(39), 'p')}.cert"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DATA)
    ap.add_argument("--cube-max", type=int, default=4, help="also export cube certificates up to this d")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for family, param, ref in SETS:
        for t in covered_targets(family, param):
            path = args.out / fixture_name(ref, t)
            path.write_text(serialize_certificate(paper_certificate(family, param, t), ref))
            print(path)
    for d in range(2, args.cube_max + 1):
        path = args.out / f"cube{d}_{'0' * d}.cert"
        path.write_text(serialize_certificate(cube_certificate(d), f"cube{d}"))
        print(path)


if __name__ == "__main__":
    main()
