"""
Regression baselines of the slow acceptance runs.

Values are frozen in baselines.json. An entry stored as null is recorded from the first
successful run and compared against on every later run.
"""
import json
import os

import pytest

BASELINE_FILE = os.path.join(os.path.dirname(__file__), "baselines.json")


def _load():
    with open(BASELINE_FILE, encoding="utf-8") as handle:
        return json.load(handle)


def frozen(run, key, observed, rel=0.0):
    """Assert observed matches the frozen value of run[key], recording it when unset."""
    baselines = _load()
    entry = baselines.setdefault(run, {})
    expected = entry.get(key)
    if expected is None:
        entry[key] = observed
        with open(BASELINE_FILE, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(baselines, handle, indent=2, sort_keys=True)
            handle.write("\n")
        return
    if rel:
        assert observed == pytest.approx(expected, rel=rel), (run, key)
    else:
        assert observed == expected, (run, key)
