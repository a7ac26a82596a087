#!/usr/bin/env python3
"""Offline walk through the whole engine: ingest a demo CSV, ask for
suggestions, generate a chart from a hypothesis, revise it, and print the
resulting canvas with provenance.

Run: python scripts/demo_pipeline.py [path/to/data.csv]
"""

import json
import sys

from vizcanvas.canvas import create_note, create_visualization, lineage, new_document
from vizcanvas.charts import compile_spec
from vizcanvas.data import ingest_csv, summarize_dataset
from vizcanvas.generation import rule_based_generate, suggest_prompts

DEMO_CSV = b"""Country,Birth Rate,GDP per capita,Minimum wage,Life expectancy
Aland,22.1,1200,1.10,62.3
Borland,11.4,18100,5.60,78.9
Celand,9.8,43100,9.80,83.1
Dorland,31.2,800,0.70,58.2
Eland,15.0,9800,3.20,74.5
"""


def main() -> None:
    if len(sys.argv) > 1:
        with open(sys.argv[1], "rb") as fh:
            raw = fh.read()
        name = sys.argv[1]
    else:
        raw, name = DEMO_CSV, "demo.csv"

    dataset = ingest_csv(raw, name)
    print(f"== ingested {dataset.name}: {dataset.row_count} rows, "
          f"{len(dataset.columns)} columns")
    print(summarize_dataset(dataset).to_prompt_text())

    print("\n== prompt suggestions")
    for suggestion in suggest_prompts(dataset, 4):
        print(f"  - {suggestion}")

    goal = "How does GDP per capita influence the birth rate?"
    print(f"\n== generating for: {goal}")
    spec = rule_based_generate(goal, dataset)
    payload = compile_spec(spec, dataset)
    print(f"  mark={spec.mark}, data rows={len(payload.data.rows)}")
    print("  grammar:", json.dumps(json.loads(payload.grammar_json), indent=2)[:400], "...")

    doc = new_document(dataset.id)
    note = create_note(doc, (0, 0), goal)
    chart = create_visualization(doc, None, payload.spec, source=note,
                                 edge_kind="generated-from-note")

    print('\n== revising: "flip it and give me top and bottom 10%"')
    revised = rule_based_generate("flip it and give me top and bottom 10%",
                                  dataset, payload.spec)
    revised_payload = compile_spec(revised, dataset)
    child = create_visualization(doc, None, revised_payload.spec, source=chart,
                                 edge_kind="derived-from")
    print(f"  x={revised.encodings['x'].column}, y={revised.encodings['y'].column}, "
          f"labels={revised_payload.labels}")

    print("\n== canvas")
    for node in doc.nodes.values():
        print(f"  [{node.kind}] {node.id} at {node.position} z={node.z}")
    print(f"  lineage({child}) -> {lineage(doc, child)}")


if __name__ == "__main__":
    main()
