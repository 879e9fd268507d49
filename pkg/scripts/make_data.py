"""Write the reference networks and the quotient map into data/."""

from pathlib import Path

from hypernet.catalog import NETWORKS, running_quotient_map
from hypernet.fibration import format_map
from hypernet.model import dump

OUT = Path(__file__).resolve().parent.parent / "data"


def main():
    OUT.mkdir(exist_ok=True)
    for name, make in NETWORKS.items():
        dump(make(), OUT / f"{name}.hn")
    (OUT / "running_quotient.map").write_text(format_map(running_quotient_map()), encoding="utf-8")
    (OUT / "fig1_square.resp").write_text(
        "# one cubic term per hyperedge, symmetrized on load\n"
        "v: 0\n"
        "w: 3*E[hyp][0][0][0]*E[hyp][0][1][0]^2\n", encoding="utf-8")
    print(f"wrote {sorted(p.name for p in OUT.iterdir())}")


if __name__ == "__main__":
    main()
