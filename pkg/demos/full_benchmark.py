#!/usr/bin/env python3
"""The whole benchmark loop in one script: corpus -> dataset -> report.

Equivalent to the CLI flow

    voxbench dataset synth --docs-dir demos/sample_docs --count 25 --out ...
    voxbench bench run --manifest ... --docs-dir demos/sample_docs --out-dir ...

but staying inside Python. 25 utterances at time_scale 0.05 finish in a
couple of seconds of wall time.
"""

from pathlib import Path

from voxbench import (
    PipelineConfig,
    build_index,
    render_table,
    run_dataset,
    synthesize_manifest,
)

DOCS = Path(__file__).parent / "sample_docs"

config = PipelineConfig(time_scale=0.05, jitter_frac=0.1, rng_seed=42)
index = build_index(DOCS, dim=config.embed_dim)
records = synthesize_manifest(count=25, mean_duration_s=6.36,
                              docs_dir=DOCS, seed=42)
print(f"running {len(records)} utterances against {len(index)} documents...")

results, summary = run_dataset(records, config, index)

failed = [r for r in results if r.failed]
print(f"done: {len(results) - len(failed)} ok, {len(failed)} failed\n")
print(render_table(summary), end="")

# a few individual rows for flavor
print("\nslowest three utterances by end-to-end time:")
ranked = sorted((r for r in results if not r.failed),
                key=lambda r: r.timings.total_s, reverse=True)
for r in ranked[:3]:
    t = r.timings
    print(f"  {t.utterance_id}: total {t.total_s:.3f}s "
          f"(llm {t.llm_s:.3f}s, tts {t.tts_s:.3f}s, "
          f"first audio {t.ttfa_s:.3f}s)")
