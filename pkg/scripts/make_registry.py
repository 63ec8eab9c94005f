"""Regenerate the bundled placeholder registry (src/nfseer/data/registry.json).

Each table is 1.0 at Nom (r = 8) and moves geometrically toward its end
values at r = 1 and r = 18. Endpoints follow COCOMO-like multiplier ranges.
These are NOT the vendor's calibrated tables; replace the file to use real ones.
"""

import json
from pathlib import Path

INC, DEC = "MONOTONE_INCREASING", "MONOTONE_DECREASING"
CTBX, TURN, ADJ = "CTBX_FACTOR", "TURN_INPUT", "ADJUSTMENT_FACTOR"

# mnemonic, name, site, direction, value at VLo-, value at EHi+
PARAMETERS = [
    ("ACAP", "Analyst capabilities", CTBX, DEC, 1.50, 0.60),
    ("AEXP", "Analyst application experience", CTBX, DEC, 1.30, 0.75),
    ("MODP", "Modern development practices use", CTBX, DEC, 1.30, 0.75),
    ("PCAP", "Programmer capabilities", CTBX, DEC, 1.50, 0.65),
    ("TOOL", "Automated tools use", CTBX, DEC, 1.30, 0.75),
    ("TERM", "Terminal response time", CTBX, DEC, 1.15, 0.90),
    ("TURN", "Turnaround time", TURN, INC, 0.80, 1.40),
    ("LANG", "Language type complexity", ADJ, INC, 0.85, 1.30),
    ("LEXP", "Programmer's language experience", ADJ, DEC, 1.20, 0.90),
    ("TSYS", "Target system complexity", ADJ, INC, 0.85, 1.35),
    ("TEXP", "Target system experience", ADJ, DEC, 1.20, 0.90),
    ("DSYS", "Development system complexity", ADJ, INC, 0.85, 1.30),
    ("DEXP", "Development system experience", ADJ, DEC, 1.20, 0.90),
    ("PSYS", "Practices and methods complexity", ADJ, INC, 0.85, 1.30),
    ("PEXP", "Practices and methods experience", ADJ, DEC, 1.20, 0.90),
    ("SIBR", "Software impacted by reuse", ADJ, INC, 0.90, 1.30),
    ("REUS", "Reusability level required", ADJ, INC, 0.90, 1.50),
    ("MULT", "Multiple site development", ADJ, INC, 0.90, 1.40),
    ("RDED", "Resource dedication", ADJ, DEC, 1.20, 0.90),
    ("RLOC", "Resource and support location", ADJ, INC, 0.90, 1.30),
    ("DSVL", "Development system volatility", ADJ, INC, 0.90, 1.30),
    ("PSVL", "Practices and methods volatility", ADJ, INC, 0.90, 1.30),
    ("RVOL", "Requirements volatility", ADJ, INC, 0.90, 1.50),
    ("SPEC", "Specification level, reliability", ADJ, INC, 0.80, 1.50),
    ("TEST", "Test level", ADJ, INC, 0.85, 1.50),
    ("QUAL", "Quality assurance level", ADJ, INC, 0.90, 1.30),
    ("RHST", "Rehost from development to target", ADJ, INC, 0.95, 1.40),
    ("HOST", "Host development system difference", ADJ, INC, 0.95, 1.20),
    ("DISP", "Special display requirements", ADJ, INC, 0.95, 1.30),
    ("MEMC", "Memory constraints", ADJ, INC, 0.95, 1.50),
    ("TIMC", "Time constraints", ADJ, INC, 0.95, 1.60),
    ("RTIM", "Real-time code", ADJ, INC, 0.95, 1.30),
    ("SECR", "Security requirements", ADJ, INC, 0.95, 1.70),
    ("TSVL", "Target system volatility", ADJ, INC, 0.90, 1.30),
]

NOM = 8


def table(lo, hi):
    below = [round(lo ** ((NOM - r) / (NOM - 1)), 6) for r in range(1, NOM)]
    above = [round(hi ** ((r - NOM) / (18 - NOM)), 6) for r in range(NOM, 19)]
    return below + above


def main(out):
    lines = []
    for mnem, name, site, direction, lo, hi in PARAMETERS:
        rec = {"id": mnem, "mnemonic": mnem, "name": name, "site": site,
               "direction": direction, "values": table(lo, hi)}
        lines.append("    " + json.dumps(rec))
    header = (
        '{\n  "format": "nfseer-registry/1",\n'
        '  "note": "Placeholder tables: 1.0 at Nom, geometric toward COCOMO-like end values. Replace with calibrated tables when available.",\n'
        '  "parameters": [\n'
    )
    Path(out).write_text(header + ",\n".join(lines) + "\n  ]\n}\n")


if __name__ == "__main__":
    main(Path(__file__).resolve().parents[1] / "src" / "nfseer" / "data" / "registry.json")
