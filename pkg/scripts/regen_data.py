"""Regenerate the packaged concrete LIP-B vectors."""
from __future__ import annotations

from ksforge.gadgets.lip import PACKAGED_LIP_B, build_lip_b

if __name__ == "__main__":
    g = build_lip_b(packaged=False)
    PACKAGED_LIP_B.write_text(g.vectors.to_json(indent=1) + "\n")
    print(f"{PACKAGED_LIP_B}: {len(g.vectors)} rays, v2 in [{g.bounds.min}, {g.bounds.max}]")
