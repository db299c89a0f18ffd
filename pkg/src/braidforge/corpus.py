"""Seeded instances and the benchmark harness.

An instance is a word built in the target form, then hidden by a random
conjugation, braid relation rewrites and free insertions.  Every draw comes
from a ``random.Random`` seeded by the spec, so generation is a pure
function of the spec.
"""

from __future__ import annotations

import csv
import io
import json
import random
import statistics
import time
from dataclasses import asdict, dataclass, field

from .braid import (
    SCHEMA_VERSION,
    BraidWord,
    detect_destabilization_form,
    detect_double_destabilization_form,
    double_destab_pattern,
    enumerate_elementary_flype_forms,
    enumerate_exchange_forms,
    format_word,
    free_reduce,
    relation_rewrites,
    trace_reduce,
)
from .recognize import (
    DESTAB,
    DOUBLE_DESTAB,
    FLYPE,
    RECOGNIZERS,
    TARGET_SPECS,
    THIN_EXCHANGE,
    SearchBudget,
    replay_certificate,
)

CSV_COLUMNS = ("id", "move", "n", "coreLength", "verdict", "states", "certLen", "millis")

MOVE_ALIASES = {
    "destab": DESTAB, "thin-exchange": THIN_EXCHANGE, "thinExchange": THIN_EXCHANGE,
    "flype": FLYPE, "double-destab": DOUBLE_DESTAB, "doubleDestab": DOUBLE_DESTAB,
}


class SpecIncompatible(ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    target_move: str
    n: int
    core_length: int
    obf_conj_length: int = 0
    obf_rewrites: int = 0
    seed: int = 0

    def __post_init__(self):
        move = MOVE_ALIASES.get(self.target_move, self.target_move)
        object.__setattr__(self, "target_move", move)
        if move not in TARGET_SPECS:
            raise SpecIncompatible(f"unknown move {self.target_move!r}")
        if min(self.core_length, self.obf_conj_length, self.obf_rewrites) < 0:
            raise SpecIncompatible("counts must be nonnegative")
        need = TARGET_SPECS[move].min_strands
        if self.n < need:
            raise SpecIncompatible(f"{move} needs n >= {need}, got n = {self.n}")

    @property
    def instance_id(self) -> str:
        return f"{self.target_move}-n{self.n}-L{self.core_length}-s{self.seed}"


def _letters(rng: random.Random, lo: int, hi: int, length: int) -> list[int]:
    return [rng.choice((1, -1)) * rng.randint(lo, hi) for _ in range(length)]


def _reduced_block(rng, lo, hi, length) -> tuple[int, ...]:
    while True:
        block = free_reduce(_letters(rng, lo, hi, max(length, 1)))
        if block:
            return block


def _covers(letters, n: int) -> bool:
    present = {abs(x) for x in trace_reduce(BraidWord(n, tuple(letters))).letters}
    return all(i in present for i in range(1, n))


def _core(spec: InstanceSpec, rng: random.Random) -> tuple[BraidWord, dict]:
    n, L = spec.n, spec.core_length
    move = spec.target_move
    for _ in range(1000):
        if move == DESTAB:
            e = rng.choice((1, -1))
            W = _letters(rng, 1, n - 2, max(L - 1, 0)) if n > 2 else []
            w = BraidWord(n, tuple(W) + (e * (n - 1),))
            res = detect_destabilization_form(w)
            if res is not None:
                return w, {"W": format_word(res), "sign": e}
        elif move == THIN_EXCHANGE:
            s = rng.randint(2, n - 2)
            t = rng.randint(s, n - 2)
            k = rng.randint(1, max(L - 1, 1))
            W = _reduced_block(rng, 1, t, k)
            U = _reduced_block(rng, s, n - 1, max(L - k, 1))
            w = BraidWord(n, W + U)
            if not _covers(w.letters, n):
                continue
            forms = [f for f in enumerate_exchange_forms(w) if f.thin]
            if forms:
                return w, {"exchange": forms[0].to_json()}
        elif move == FLYPE:
            p = rng.choice([v for v in (-3, -2, -1, 1, 2, 3)])
            delta = rng.choice((1, -1))
            if p == delta:
                continue
            rest = max(L - abs(p) - 1, 2)
            k = rng.randint(1, rest - 1)
            W1 = _reduced_block(rng, 1, n - 2, k)
            W2 = _reduced_block(rng, 1, n - 2, rest - k)
            sgn = 1 if p > 0 else -1
            w = BraidWord(n, W1 + (sgn * (n - 1),) * abs(p) + W2 + (delta * (n - 1),))
            if not _covers(w.letters, n):
                continue
            forms = enumerate_elementary_flype_forms(w)
            if forms:
                return w, {"flype": forms[0].to_json()}
        else:
            eps = rng.choice((1, -1))
            W = _letters(rng, 1, n - 3, max(L - 4, 0))
            w = BraidWord(n, tuple(W) + double_destab_pattern(n, eps))
            res = detect_double_destabilization_form(w)
            if res is not None:
                return w, {"W": format_word(res[0]), "eps": res[1]}
    raise SpecIncompatible(f"could not build a {move} core for {spec}")


def obfuscate(w: BraidWord, conj_length: int, rewrites: int, rng: random.Random) -> BraidWord:
    """Conjugate, then apply braid relation rewrites and free insertions."""
    n = w.strands
    g = _letters(rng, 1, n - 1, conj_length) if n > 1 else []
    word = g + list(w.letters) + [-x for x in reversed(g)]
    for _ in range(rewrites):
        options = relation_rewrites(word)
        if options and rng.random() < 0.7:
            word = list(rng.choice(options))
        elif n > 1:
            x = rng.choice((1, -1)) * rng.randint(1, n - 1)
            pos = rng.randint(0, len(word))
            word[pos:pos] = [x, -x]
    return BraidWord(n, tuple(word))


def random_obfuscated_instance(spec: InstanceSpec) -> tuple[BraidWord, dict]:
    rng = random.Random(spec.seed)
    core, witness = _core(spec, rng)
    word = obfuscate(core, spec.obf_conj_length, spec.obf_rewrites, rng)
    return word, {"move": spec.target_move, "core": format_word(core), **witness}


# ---------------------------------------------------------------- harness


@dataclass
class BenchmarkRow:
    id: str
    move: str
    n: int
    coreLength: int
    verdict: str
    states: int
    certLen: int
    millis: float
    replayed: bool = False
    word: str = ""


@dataclass
class BenchmarkReport:
    rows: list[BenchmarkRow] = field(default_factory=list)

    def summary(self) -> dict:
        out: dict = {"instances": len(self.rows)}
        counts: dict[str, int] = {}
        for r in self.rows:
            counts[r.verdict] = counts.get(r.verdict, 0) + 1
        out["verdicts"] = dict(sorted(counts.items()))
        for name in ("states", "millis", "certLen"):
            vals = [getattr(r, name) for r in self.rows]
            out[name] = _percentiles(vals)
        return out

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for r in self.rows:
            row = asdict(r)
            if not timing:
                row["millis"] = ""
            else:
                row["millis"] = f"{r.millis:.3f}"
            wr.writerow([row[c] for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_json(self, timing: bool = True) -> str:
        rows = []
        for r in self.rows:
            d = asdict(r)
            if timing:
                d["millis"] = round(r.millis, 3)
            else:
                d.pop("millis")
            rows.append(d)
        summary = self.summary()
        if not timing:
            summary.pop("millis")
        doc = {"schemaVersion": SCHEMA_VERSION, "summary": summary, "rows": rows}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _percentiles(vals) -> dict:
    if not vals:
        return {}
    if len(vals) == 1:
        v = vals[0]
        return {"p50": v, "p90": v, "p99": v, "max": v}
    q = statistics.quantiles(vals, n=100, method="inclusive")
    return {"p50": round(q[49], 3), "p90": round(q[89], 3), "p99": round(q[98], 3),
            "max": max(vals)}


def run_instance(spec: InstanceSpec, budget: SearchBudget) -> BenchmarkRow:
    word, _ = random_obfuscated_instance(spec)
    t0 = time.perf_counter()
    v = RECOGNIZERS[spec.target_move](word, budget)
    ms = (time.perf_counter() - t0) * 1000
    replayed = False
    cert_len = 0
    if v.certificate is not None:
        cert_len = len(v.certificate.moves)
        replayed = replay_certificate(v.certificate)
    return BenchmarkRow(spec.instance_id, spec.target_move, spec.n, spec.core_length,
                        v.outcome, v.states_visited, cert_len, ms, replayed, format_word(word))


def run_benchmark_suite(specs: list[InstanceSpec], budget: SearchBudget | None = None) -> BenchmarkReport:
    budget = budget or SearchBudget.default()
    rows = [run_instance(s, budget) for s in specs]
    rows.sort(key=lambda r: r.id)
    return BenchmarkReport(rows)


def standard_specs(move: str, count: int, seed: int = 0) -> list[InstanceSpec]:
    """The seeded mix used by the acceptance run and ``bench``."""
    move = MOVE_ALIASES.get(move, move)
    sizes = {DESTAB: (2, 3, 4, 5), THIN_EXCHANGE: (4, 5), FLYPE: (3, 4),
             DOUBLE_DESTAB: (4, 5)}[move]
    rng = random.Random(f"{move}:{seed}")
    out = []
    for i in range(count):
        n = sizes[i % len(sizes)]
        core = rng.randint(4, 6)
        out.append(InstanceSpec(move, n, core, rng.randint(0, 6), rng.randint(0, 6),
                                rng.getrandbits(63)))
    return out
