"""Acceptance suite.

Each criterion prints one ``PASS``/``FAIL`` line (visible with ``pytest -s``
or in the terminal summary) and asserts.  Tolerances are the stated ones;
nothing is relaxed.  Run one criterion with ``pytest -k criterion_4``.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import subprocess
import sys
import time
from collections import deque

import pytest

from braidforge import grid as G
from braidforge.braid import (
    BraidWord,
    apply_elementary_flype,
    apply_exchange_move,
    canonical_linking,
    closure_components,
    cyclic_reduce,
    detect_destabilization_form,
    detect_double_destabilization_form,
    enumerate_elementary_flype_forms,
    enumerate_exchange_forms,
    format_word,
    linking_matrix_of_word,
    parse_word,
)
from braidforge.corpus import (
    InstanceSpec,
    obfuscate,
    random_obfuscated_instance,
    run_benchmark_suite,
    standard_specs,
)
from braidforge.garside import BudgetExceeded, are_conjugate
from braidforge.recognize import (
    DESTAB,
    DOUBLE_DESTAB,
    FLYPE,
    FOUND,
    INCONCLUSIVE,
    NOT_ADMITTED,
    RECOGNIZERS,
    THIN_EXCHANGE,
    SearchBudget,
    recognize_destabilization,
    related_by_move,
    replay_certificate,
)
from braidforge.render import render_svg
from braidforge.transit import braid_to_grid, grid_to_braid

RESULTS: dict[str, str] = {}


@pytest.fixture
def report(capsys, request):
    lines = []

    def emit(ok: bool, text: str):
        line = f"{'PASS' if ok else 'FAIL'} {request.node.name}: {text}"
        lines.append(line)
        RESULTS[request.node.name] = line
        with capsys.disabled():
            print("\n" + line)

    yield emit


def random_word(rng: random.Random, max_n: int, max_len: int, min_n: int = 1) -> BraidWord:
    n = rng.randint(min_n, max_n)
    if n == 1:
        return BraidWord(1, ())
    return BraidWord(n, tuple(rng.choice((1, -1)) * rng.randint(1, n - 1)
                              for _ in range(rng.randint(0, max_len))))


# 1 ----------------------------------------------------------------- moves


def test_criterion_1_move_invariance(report):
    rng = random.Random(20261)
    bad = []
    t0 = time.perf_counter()
    for case in range(1000):
        w = random_word(rng, 6, 12)
        g, _ = braid_to_grid(w)
        g, sc, _ = rng.choice(G.place_shearing_intervals(g, rng.randint(0, 3)))
        want = G.grid_components_and_linking(g)
        level = G.sheared_complexity(g, sc)
        for _ in range(rng.randint(0, 30)):
            moves = G.enumerate_elementary_moves(g, sc)
            if not moves:
                break
            mv = rng.choice(moves)
            g, sc, _ = G.apply_elementary_move(g, sc, None, mv)
            new = G.sheared_complexity(g, sc)
            step = new - level
            expected = -1 if mv.kind in G.SIMPLIFY_KINDS else 0
            if step != expected:
                bad.append((case, format_word(w), mv, step))
                break
            level = new
        count, lk = G.grid_components_and_linking(g)
        if count != want[0] or canonical_linking(lk) != canonical_linking(want[1]):
            bad.append((case, format_word(w), "invariants"))
    secs = time.perf_counter() - t0
    ok = not bad and secs < 120
    report(ok, f"1000 diagrams, {len(bad)} violations, {secs:.1f}s (limit 120s)")
    assert not bad, bad[:5]
    assert secs < 120


# 2 ----------------------------------------------------------- dual oracle


def test_criterion_2_dual_oracle(report):
    rng = random.Random(20262)
    bad = []
    for _ in range(500):
        w = random_word(rng, 6, 12)
        g, _ = braid_to_grid(w)
        count, lk = G.grid_components_and_linking(g)
        if count != closure_components(w)[1] or lk != linking_matrix_of_word(w):
            bad.append(format_word(w))
    report(not bad, f"500 words, {len(bad)} mismatches (zero tolerance)")
    assert not bad, bad[:5]


# 3 ------------------------------------------------------------- roundtrip


def test_criterion_3_roundtrip(report):
    rng = random.Random(20263)
    bad_inv, bad_conj, checked, skipped = [], [], 0, 0
    for i in range(500):
        # the second half is drawn from the n <= 4, length <= 8 range
        w = random_word(rng, 6, 12) if i < 250 else random_word(rng, 4, 8)
        back, _ = grid_to_braid(braid_to_grid(w)[0])
        if (closure_components(back)[1] != closure_components(w)[1]
                or linking_matrix_of_word(back) != linking_matrix_of_word(w)):
            bad_inv.append(format_word(w))
        if w.strands <= 4 and len(w) <= 8:
            try:
                same = back.strands == w.strands and are_conjugate(back, w)
            except BudgetExceeded:
                skipped += 1
                continue
            checked += 1
            if not same:
                bad_conj.append(format_word(w))
    ok = not bad_inv and not bad_conj
    report(ok, f"500 words, {len(bad_inv)} invariant mismatches; conjugacy "
               f"{checked - len(bad_conj)}/{checked} (budget exceeded: {skipped})")
    assert ok, (bad_inv[:5], bad_conj[:5])


# 4 ---------------------------------------------------- seeded completeness


TERMINAL_DETECTORS = {
    DESTAB: detect_destabilization_form,
    THIN_EXCHANGE: lambda w: [f for f in enumerate_exchange_forms(w) if f.thin] or None,
    FLYPE: lambda w: enumerate_elementary_flype_forms(w) or None,
    DOUBLE_DESTAB: detect_double_destabilization_form,
}


def test_criterion_4_seeded_completeness(report):
    t0 = time.perf_counter()
    failures = []
    summary = []
    for move in (DESTAB, THIN_EXCHANGE, FLYPE, DOUBLE_DESTAB):
        specs = standard_specs(move, 100, seed=0)
        assert all(s.obf_conj_length <= 6 and s.obf_rewrites <= 6 for s in specs)
        found = 0
        for spec in specs:
            word, _ = random_obfuscated_instance(spec)
            v = RECOGNIZERS[move](word, SearchBudget())
            if not v.found:
                failures.append((move, format_word(word), v.outcome))
                continue
            cert = v.certificate
            try:
                replay_certificate(cert)
            except Exception as exc:  # any replay error is a failure here
                failures.append((move, format_word(word), f"replay: {exc}"))
                continue
            terminal = parse_word(cert.claim["terminalWord"])
            if TERMINAL_DETECTORS[move](terminal) is None:
                failures.append((move, format_word(word), "terminal word fails detector"))
                continue
            found += 1
        summary.append(f"{move} {found}/100")
    secs = time.perf_counter() - t0
    ok = not failures and secs < 600
    report(ok, f"{', '.join(summary)}; {secs:.0f}s (limit 600s)")
    assert not failures, failures[:5]
    assert secs < 600


# 5 ---------------------------------------------------- exhaustive oracle


def bfs_oracle(w: BraidWord, cap: int = 20_000_000):
    """Plain breadth-first search of the move graph.

    States are exact (diagram, interval sizes) pairs: no markings, no
    collapsing of interval contents, no ordering heuristic.  Every
    placement of the one destabilization interval is a root.  Diagrams
    larger than the input are not entered, which keeps the graph finite.
    Returns True / False, or None when ``cap`` states are exceeded.
    """
    g0, _ = braid_to_grid(w)
    limit = g0.size
    seen = set()
    queue = deque()
    for g, sc, _ in G.place_shearing_intervals(g0, 1):
        key = (g.xs, g.os, sc.sizes)
        if key not in seen:
            seen.add(key)
            queue.append((g, sc))
    tested: dict = {}
    while queue:
        g, sc = queue.popleft()
        hit = tested.get((g.xs, g.os))
        if hit is None:
            flat, _ = grid_to_braid(g)
            hit = tested[(g.xs, g.os)] = detect_destabilization_form(cyclic_reduce(flat)) is not None
        if hit:
            return True
        for mv in G.enumerate_elementary_moves(g, sc):
            g2, sc2, _ = G.apply_elementary_move(g, sc, None, mv, check=False)
            if g2.size > limit:
                continue
            key = (g2.xs, g2.os, sc2.sizes)
            if key not in seen:
                seen.add(key)
                queue.append((g2, sc2))
                if len(seen) > cap:
                    return None
    return False


def small_words() -> list[BraidWord]:
    out = set()
    for n in (1, 2, 3):
        gens = [s * i for i in range(1, n) for s in (1, -1)]
        for length in range(4):
            for letters in itertools.product(gens, repeat=length):
                w = BraidWord(n, letters)
                if braid_to_grid(w)[0].size <= 8:
                    out.add(w)
    return sorted(out, key=lambda w: (w.strands, len(w), w.letters))


def test_criterion_5_oracle_equivalence(report):
    words = small_words()
    disagree, undecided = [], []
    t0 = time.perf_counter()
    for w in words:
        expected = bfs_oracle(w)
        v = recognize_destabilization(w, SearchBudget(2_000_000))
        if expected is None or v.outcome not in (FOUND, NOT_ADMITTED):
            undecided.append((format_word(w), expected, v.outcome))
            continue
        if (v.outcome == FOUND) != expected:
            disagree.append((format_word(w), expected, v.outcome))
    secs = time.perf_counter() - t0
    agree = len(words) - len(disagree) - len(undecided)
    ok = not disagree and not undecided
    report(ok, f"{agree}/{len(words)} diagrams agree, {len(undecided)} undecided; {secs:.0f}s")
    assert ok, (disagree, undecided)


# 6 ----------------------------------------------------- negative controls


def test_criterion_6_negative_controls(report):
    v = recognize_destabilization(parse_word("n=2: 1 1 1"))
    trefoil_ok = v.outcome == NOT_ADMITTED
    rng = random.Random(20266)
    slow, wrong = [], []
    kinds = (THIN_EXCHANGE, FLYPE)
    for i in range(100):
        x = random_word(rng, 5, 10, min_n=4)
        y = random_word(rng, 5, 10, min_n=4)
        y = BraidWord(x.strands, tuple(a for a in y.letters if abs(a) < x.strands))
        if sum(1 if a > 0 else -1 for a in x.letters) == sum(1 if a > 0 else -1 for a in y.letters):
            y = BraidWord(y.strands, y.letters + (1,))
        kind = kinds[i % 2]
        t0 = time.perf_counter()
        r = related_by_move(x, y, kind)
        ms = (time.perf_counter() - t0) * 1000
        if r.outcome != NOT_ADMITTED or r.detail.get("reason") != "exponent sums differ":
            wrong.append((format_word(x), format_word(y), r.outcome))
        if ms >= 1.0:
            slow.append(round(ms, 3))
    ok = trefoil_ok and not slow and not wrong
    report(ok, f"trefoil {v.outcome} ({v.states_visited} states); 100 exponent-sum pairs: "
               f"{100 - len(wrong)} rejected by prefilter, {len(slow)} over 1 ms")
    assert trefoil_ok
    assert not wrong, wrong[:5]
    assert not slow, slow[:5]


# 7 ------------------------------------------------------- related pairs


PAIR_BUDGET = 1_000_000


def _exchange_pair(seed: int):
    rng = random.Random(seed)
    n = rng.choice((4, 5))
    # the core must mention every generator, so it needs at least n - 1 letters
    spec = InstanceSpec(THIN_EXCHANGE, n, rng.randint(n - 1, n + 1), 0, 0, seed)
    _, wit = random_obfuscated_instance(spec)
    x = parse_word(wit["core"])
    f = next(f for f in enumerate_exchange_forms(x) if f.thin)
    y = apply_exchange_move(x, f, rng.choice((1, -1)))
    return obfuscate(x, 3, 3, rng), obfuscate(y, 3, 3, rng)


def _flype_pair(seed: int):
    rng = random.Random(seed)
    spec = InstanceSpec(FLYPE, rng.choice((3, 4)), rng.randint(4, 6), 0, 0, seed)
    _, wit = random_obfuscated_instance(spec)
    x = parse_word(wit["core"])
    y = apply_elementary_flype(x, enumerate_elementary_flype_forms(x)[0])
    return obfuscate(x, 3, 3, rng), obfuscate(y, 3, 3, rng)


def test_criterion_7_related_pairs(report):
    results = {}
    failures = []
    escalated = 0
    ex = [_exchange_pair(1000 + i) for i in range(50)]
    fl = [_flype_pair(2000 + i) for i in range(50)]
    for name, pairs, kind in (("exchange", ex, THIN_EXCHANGE), ("flype", fl, FLYPE)):
        hits = 0
        for x, y in pairs:
            v = related_by_move(x, y, kind)
            if v.outcome == INCONCLUSIVE:
                # both sides are scrambled, so a few pairs need a longer search
                escalated += 1
                v = related_by_move(x, y, kind, SearchBudget(PAIR_BUDGET))
            if v.found:
                hits += 1
            else:
                failures.append((name, format_word(x), format_word(y), v.outcome))
        results[name] = hits
    # mismatched: x from one pair against a scrambled y from another
    rng = random.Random(7007)
    rejected = 0
    for i in range(50):
        pool, kind = (ex, THIN_EXCHANGE) if i % 2 == 0 else (fl, FLYPE)
        x = pool[i // 2][0]
        others = [p[1] for j, p in enumerate(pool) if j != i // 2 and p[1].strands == x.strands]
        y = obfuscate(rng.choice(others), 2, 2, rng)
        v = related_by_move(x, y, kind)
        if v.outcome == NOT_ADMITTED:
            rejected += 1
        else:
            failures.append(("mismatched", format_word(x), format_word(y), v.outcome))
    ok = not failures
    report(ok, f"exchange {results['exchange']}/50 Found, flype {results['flype']}/50 Found, "
               f"mismatched {rejected}/50 NotAdmitted; {escalated} pair(s) needed more than "
               f"the default budget (limit {PAIR_BUDGET} states)")
    assert ok, failures[:5]


# 8 ------------------------------------------------------------ determinism


_DETERMINISM_SCRIPT = r"""
import hashlib, json
from braidforge.braid import parse_word
from braidforge.corpus import run_benchmark_suite, standard_specs
from braidforge.recognize import RECOGNIZERS
from braidforge.render import render_svg
from braidforge.transit import braid_to_grid
out = {}
for move, text in (("destab", "n=3: 2 1 2 -1 -2 1"), ("thinExchange", "n=4: 2 1 3 -2"),
                   ("flype", "n=3: 2 1 2 2 1 2 -1"), ("doubleDestab", "n=4: 3 1 2 3 1 2 -3")):
    v = RECOGNIZERS[move](parse_word(text))
    doc = v.certificate.to_json() if v.certificate else {"outcome": v.outcome}
    out[move] = json.dumps(doc, sort_keys=True)
rep = run_benchmark_suite(standard_specs("flype", 6, seed=5))
out["csv"] = rep.to_csv(timing=False)
out["json"] = rep.to_json(timing=False)
out["svg"] = render_svg(braid_to_grid(parse_word("n=4: 1 -2 3 2 -1 3"))[0])
print(hashlib.sha256(json.dumps(out, sort_keys=True).encode()).hexdigest())
"""


def test_criterion_8_determinism(report):
    digests = []
    for hash_seed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hash_seed)
        res = subprocess.run([sys.executable, "-c", _DETERMINISM_SCRIPT], env=env,
                             capture_output=True, text=True, check=True)
        digests.append(res.stdout.strip())
    # and in-process, twice
    v1 = recognize_destabilization(parse_word("n=3: 1 2 1 -2 -1"))
    v2 = recognize_destabilization(parse_word("n=3: 1 2 1 -2 -1"))
    same_cert = json.dumps(v1.certificate.to_json()) == json.dumps(v2.certificate.to_json())
    g, _ = braid_to_grid(parse_word("n=3: 1 -2 1"))
    same_svg = render_svg(g) == render_svg(g)
    rep_a = run_benchmark_suite(standard_specs("destab", 5, seed=8))
    rep_b = run_benchmark_suite(standard_specs("destab", 5, seed=8))
    same_rep = (rep_a.to_csv(False) == rep_b.to_csv(False)
                and rep_a.to_json(False) == rep_b.to_json(False))
    ok = len(set(digests)) == 1 and same_cert and same_svg and same_rep
    report(ok, f"3 processes with different hash seeds -> {len(set(digests))} distinct digest(s); "
               f"in-process certificate/report/SVG identical: {same_cert and same_rep and same_svg}")
    assert ok
