#!/usr/bin/env python3
"""Regenerate the committed golden files after an intentional format
change.  Run from the repository root; review the diff before
committing."""

import json
from pathlib import Path

import rcweights as rc
from rcweights import diagram as dg
from rcweights import suite

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main():
    ff = rc.parse_fact_file("weight w\nassume w in RC(-3,2) constant C\n")
    (GOLDEN / "single_arrow.svg").write_text(
        dg.render_svg(dg.layout(ff.base.facts())))

    ff = rc.parse_fact_file("weight w\nassume w in RCweak(1,2) constant C\n")
    (GOLDEN / "weak_arrow.svg").write_text(
        dg.render_svg(dg.layout(ff.base.facts())))

    (GOLDEN / "four_panel_proof.svg").write_text(
        dg.render_panels(dg.derivation_layouts(suite.combined_power_trace())))

    ff = rc.parse_fact_file(suite.HARNACK_FACTS)
    d = rc.derive(ff.base, ff.goals[0])
    (GOLDEN / "harnack_trace.json").write_text(
        json.dumps(d.to_dict(), indent=2) + "\n")
    print(f"rewrote goldens under {GOLDEN}")


if __name__ == "__main__":
    main()
