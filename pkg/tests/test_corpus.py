import csv
import io
import json

import pytest

from braidforge.braid import (
    detect_destabilization_form,
    detect_double_destabilization_form,
    enumerate_elementary_flype_forms,
    enumerate_exchange_forms,
    parse_word,
)
from braidforge.corpus import (
    CSV_COLUMNS,
    InstanceSpec,
    SpecIncompatible,
    random_obfuscated_instance,
    run_benchmark_suite,
    standard_specs,
)
from braidforge.garside import are_conjugate
from braidforge.recognize import INCONCLUSIVE, SearchBudget

DETECTORS = {
    "destab": detect_destabilization_form,
    "thinExchange": lambda w: [f for f in enumerate_exchange_forms(w) if f.thin] or None,
    "flype": lambda w: enumerate_elementary_flype_forms(w) or None,
    "doubleDestab": detect_double_destabilization_form,
}


def test_deterministic_per_seed():
    spec = InstanceSpec("destab", 4, 5, 3, 3, seed=42)
    assert random_obfuscated_instance(spec) == random_obfuscated_instance(spec)
    other = InstanceSpec("destab", 4, 5, 3, 3, seed=43)
    assert random_obfuscated_instance(spec)[0] != random_obfuscated_instance(other)[0]


@pytest.mark.parametrize("move,n", [("destab", 3), ("thinExchange", 4), ("flype", 3),
                                    ("doubleDestab", 4)])
def test_core_is_in_form_and_obfuscation_is_conjugation(move, n):
    for seed in range(5):
        word, witness = random_obfuscated_instance(InstanceSpec(move, n, 5, 4, 4, seed))
        core = parse_word(witness["core"])
        assert DETECTORS[move](core) is not None
        assert are_conjugate(core, word)


def test_incompatible_specs():
    with pytest.raises(SpecIncompatible):
        InstanceSpec("thinExchange", 3, 4)
    with pytest.raises(SpecIncompatible):
        InstanceSpec("destab", 3, -1)
    with pytest.raises(SpecIncompatible):
        InstanceSpec("teleport", 3, 4)


def test_empty_suite():
    rep = run_benchmark_suite([])
    assert rep.rows == [] and rep.summary()["instances"] == 0
    assert rep.to_csv().splitlines() == [",".join(CSV_COLUMNS)]


def test_capped_budget_keeps_inconclusive_rows():
    specs = standard_specs("destab", 8, seed=3)
    rep = run_benchmark_suite(specs, SearchBudget(1))
    assert len(rep.rows) == 8
    assert any(r.verdict == INCONCLUSIVE for r in rep.rows)
    assert rep.summary()["verdicts"].get(INCONCLUSIVE, 0) >= 1


def test_reports():
    rep = run_benchmark_suite(standard_specs("destab", 6, seed=1))
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert [r["id"] for r in rows] == sorted(r["id"] for r in rows)
    doc = json.loads(rep.to_json(timing=False))
    assert "millis" not in doc["rows"][0]
    assert doc["summary"]["instances"] == 6
    assert rep.to_csv(timing=False) == run_benchmark_suite(standard_specs("destab", 6, seed=1)).to_csv(timing=False)
