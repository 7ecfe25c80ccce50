"""Figure output location shared by the demo scripts."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

OUT = Path(__file__).with_name("figures")
OUT.mkdir(exist_ok=True)


def save(fig, name):
    path = OUT / name
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"wrote {path}")
