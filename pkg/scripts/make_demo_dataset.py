"""Regenerate the bundled synthetic COCOMO-style demo dataset (93 projects)."""

from pathlib import Path

from nfseer.dataset import load_mapping, write_projects
from nfseer.registry import load_registry
from nfseer.synthetic import cocomo_records, target_bank

V, L, N, H, VH, XH = "Very Low", "Low", "Nominal", "High", "Very High", "Extra High"

# COCOMO 81 drivers with their defined rating ranges
DRIVERS = {
    "RELY": [V, L, N, H, VH],
    "DATA": [L, N, H, VH],
    "CPLX": [V, L, N, H, VH, XH],
    "TIME": [N, H, VH, XH],
    "STOR": [N, H, VH, XH],
    "VIRT": [L, N, H, VH],
    "TURN": [L, N, H, VH],
    "ACAP": [V, L, N, H, VH],
    "AEXP": [V, L, N, H, VH],
    "PCAP": [V, L, N, H, VH],
    "VEXP": [V, L, N, H],
    "LEXP": [V, L, N, H],
    "MODP": [V, L, N, H, VH],
    "TOOL": [V, L, N, H, VH],
    "SCED": [V, L, N, H, VH],
}


def main():
    reg = load_registry()
    mapping = load_mapping()
    records = cocomo_records(DRIVERS, mapping, reg, target_bank(reg, seed=93, level=(-0.02, 0.0)), n=93, seed=2009)
    out = Path(__file__).resolve().parents[1] / "src" / "nfseer" / "data" / "demo_cocomo93.csv"
    write_projects(records, out)


if __name__ == "__main__":
    main()
