"""Recognizers for destabilization, thin exchange, elementary flype and
double destabilization, plus certificate replay and the move-relatedness
deciders.

Each recognizer converts the word to an arc presentation, opens shearing
intervals in every column gap, picks markings (a protected edge path E and
extra protected rows), and runs a memoized best-first search over elementary
moves.  A state succeeds when the flattened braid word of the full diagram,
cyclically reduced, exhibits the target move syntactically.  Moves never
increase the sheared complexity, so every root has finitely many states.
"""

from __future__ import annotations

import heapq
import os
import time
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Callable, Optional

from . import grid as G
from .braid import (
    SCHEMA_VERSION,
    BraidWord,
    apply_elementary_flype,
    apply_exchange_move,
    commute_to_double_destab,
    commute_to_flype,
    canonical_linking,
    closure_components,
    closure_polynomial,
    destabilize_word,
    double_destabilize_word,
    detect_destabilization_form,
    detect_double_destabilization_form,
    enumerate_elementary_flype_forms,
    enumerate_exchange_forms,
    exponent_sum,
    format_word,
    geometric_factor,
    linking_matrix_of_word,
    parse_word,
    poly_mul,
    trace_reduce,
)
from .garside import are_conjugate
from .transit import braid_to_grid, grid_to_braid

DEFAULT_MAX_STATES = 100_000
DEFAULT_MAX_MOVES = 10_000

DESTAB = "destab"
THIN_EXCHANGE = "thinExchange"
FLYPE = "flype"
DOUBLE_DESTAB = "doubleDestab"
TARGETS = (DESTAB, THIN_EXCHANGE, FLYPE, DOUBLE_DESTAB)

FOUND = "Found"
NOT_ADMITTED = "NotAdmitted"
INCONCLUSIVE = "Inconclusive"


class ReplayError(Exception):
    pass


class InvalidMoveAtStep(ReplayError):
    def __init__(self, step: int, detail: str = ""):
        self.step = step
        super().__init__(f"move {step} is not applicable{': ' + detail if detail else ''}")


class PatternMismatch(ReplayError):
    pass


class ComplexityIncreased(ReplayError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = DEFAULT_MAX_STATES
    max_moves: int = DEFAULT_MAX_MOVES

    def __post_init__(self):
        if self.max_states < 1 or self.max_moves < 1:
            raise ValueError("budgets must be positive")

    @classmethod
    def default(cls) -> "SearchBudget":
        env = os.environ.get("BRAIDFORGE_MAX_STATES")
        return cls(int(env)) if env else cls()


@dataclass(frozen=True)
class MoveCertificate:
    initial_word: BraidWord
    placement_gap: int
    initial_grid: G.ArcPresentation
    config: G.ShearingConfig
    initial_marking: G.Marking
    moves: tuple[G.ElementaryMove, ...]
    claim: dict

    def to_json(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "initialWord": format_word(self.initial_word),
            "placementGap": self.placement_gap,
            "initialGrid": G.presentation_to_json(self.initial_grid, self.config),
            "initialMarking": self.initial_marking.to_json(),
            "moves": [mv.to_json() for mv in self.moves],
            "claim": self.claim,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MoveCertificate":
        g, sc = G.presentation_from_json(doc["initialGrid"])
        return cls(
            initial_word=parse_word(doc["initialWord"]),
            placement_gap=int(doc["placementGap"]),
            initial_grid=g,
            config=sc,
            initial_marking=G.Marking.from_json(doc["initialMarking"]),
            moves=tuple(G.ElementaryMove.from_json(m) for m in doc["moves"]),
            claim=doc["claim"],
        )


@dataclass
class Verdict:
    outcome: str
    certificate: Optional[MoveCertificate] = None
    states_visited: int = 0
    wall_ms: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.outcome == FOUND

    def to_json(self) -> dict:
        doc = {"schemaVersion": SCHEMA_VERSION, "outcome": self.outcome,
               "statesVisited": self.states_visited, "wallMs": round(self.wall_ms, 3)}
        if self.detail:
            doc["detail"] = self.detail
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_json()
        return doc


# --------------------------------------------------------- target patterns


def reduced_with_origin(w: BraidWord) -> tuple[BraidWord, list[int]]:
    """Cyclic reduction keeping the original index of every surviving letter."""
    stack: list[tuple[int, int]] = []
    for idx, x in enumerate(w.letters):
        if stack and stack[-1][0] == -x:
            stack.pop()
        else:
            stack.append((x, idx))
    while len(stack) >= 2 and stack[0][0] == -stack[-1][0]:
        stack = stack[1:-1]
    return BraidWord(w.strands, tuple(x for x, _ in stack)), [i for _, i in stack]


def _top_runs(letters, top: int) -> list[int]:
    """Lengths of the maximal cyclic runs of index-``top`` letters."""
    flags = [abs(x) == top for x in letters]
    if not any(flags):
        return []
    if all(flags):
        return [len(flags)]
    start = flags.index(False)
    runs, cur = [], 0
    for k in range(len(flags)):
        if flags[(start + k) % len(flags)]:
            cur += 1
        elif cur:
            runs.append(cur)
            cur = 0
    if cur:
        runs.append(cur)
    return runs


def _class_runs(letters, lo: int, hi: int) -> int:
    """Cyclic runs of the sequence of index-lo / index-hi letters."""
    seq = [abs(x) == hi for x in letters if abs(x) in (lo, hi)]
    if not seq:
        return 0
    changes = sum(1 for k in range(len(seq)) if seq[k] != seq[k - 1])
    return max(changes, 1)


def _destab_witness(w: BraidWord):
    res = detect_destabilization_form(w)
    if res is None:
        return None
    k = next(i for i, x in enumerate(w.letters) if abs(x) == w.strands - 1)
    return {"form": "W s_(n-1)^e", "W": format_word(res), "letterPositions": [k],
            "sign": 1 if w.letters[k] > 0 else -1}


def _destab_distance(w: BraidWord) -> int:
    c = sum(1 for x in w.letters if abs(x) == w.strands - 1)
    return abs(c - 1)


def _exchange_witness(w: BraidWord):
    forms = [f for f in enumerate_exchange_forms(w) if f.thin]
    if not forms:
        return None
    f = forms[0]
    L = len(w.letters)
    return {"form": "W U", "exchange": f.to_json(), "formsFound": len(forms),
            "letterPositions": [(f.rotation + j) % L for j in range(L)]}


def _exchange_distance(w: BraidWord) -> int:
    return max(0, _class_runs(w.letters, 1, w.strands - 1) - 2)


def _flype_witness(w: BraidWord):
    word, origin = w, tuple(range(len(w.letters)))
    forms = enumerate_elementary_flype_forms(w)
    if not forms:
        res = commute_to_flype(w)
        if res is None:
            return None
        word, origin = res
        forms = enumerate_elementary_flype_forms(word)
    f = forms[0]
    L = len(word.letters)
    rot = word.rotate(f.rotation).letters
    top = [origin[(f.rotation + j) % L] for j in range(L) if abs(rot[j]) == w.strands - 1]
    return {"form": "W1 s^p W2 s^d", "flype": f.to_json(), "letterPositions": top,
            "word": format_word(word)}


def _flype_distance(w: BraidWord) -> int:
    runs = _top_runs(w.letters, w.strands - 1)
    return abs(len(runs) - 2) + (0 if 1 in runs else 1)


def _double_witness(w: BraidWord):
    if w.strands < 4:
        return None
    res = commute_to_double_destab(w)
    if res is None:
        return None
    word, origin = res
    W, eps = detect_double_destabilization_form(word)
    return {"form": "W s_(n-2) s_(n-1) s_(n-3) s_(n-2)", "W": format_word(W), "eps": eps,
            "letterPositions": list(origin[-4:]), "word": format_word(word)}


def _double_distance(w: BraidWord) -> int:
    n = w.strands
    c1 = sum(1 for x in w.letters if abs(x) == n - 1)
    c2 = sum(1 for x in w.letters if abs(x) == n - 2)
    return abs(c1 - 1) + abs(c2 - 2)


@dataclass(frozen=True)
class Target:
    name: str
    intervals: int
    min_strands: int
    witness: Callable[[BraidWord], Optional[dict]]
    distance: Callable[[BraidWord], int]


TARGET_SPECS = {
    DESTAB: Target(DESTAB, 1, 2, _destab_witness, _destab_distance),
    THIN_EXCHANGE: Target(THIN_EXCHANGE, 2, 4, _exchange_witness, _exchange_distance),
    FLYPE: Target(FLYPE, 3, 3, _flype_witness, _flype_distance),
    DOUBLE_DESTAB: Target(DOUBLE_DESTAB, 2, 4, _double_witness, _double_distance),
}


def terminal_witness(g: G.ArcPresentation, target: str) -> Optional[dict]:
    """The pattern witness of the flattened diagram, with arc references."""
    flat, trace = grid_to_braid(g)
    red, origin = reduced_with_origin(flat)
    wit = TARGET_SPECS[target].witness(red)
    if wit is None:
        return None
    col_of_letter = {}
    for c, idxs in enumerate(trace.column_to_letters):
        for i in idxs:
            col_of_letter[i] = c
    wit = dict(wit)
    wit["flattenedWord"] = format_word(red)
    wit["terminalWord"] = wit.pop("word", format_word(red))
    wit["arcs"] = sorted({col_of_letter[origin[p]] for p in wit.pop("letterPositions", [])})
    return wit


# ------------------------------------------------------------------- roots


def _edge_path_from(g: G.ArcPresentation, h1: int) -> tuple[tuple[tuple[str, int], ...], bool]:
    """Follow the component from seam row h1 to the next seam row.

    Returns (path, closed) where ``closed`` means the walk came back to h1,
    i.e. the component crosses the seam only once.
    """
    C = g.size
    path = [("h", h1)]
    r = h1
    while True:
        c = g.row_end[r]
        r = g.os[c]
        if r == h1:
            return tuple(path), True
        path.append(("v", c))
        path.append(("h", r))
        if g.covers_gap(r, C - 1):
            return tuple(path), False


def root_markings(g: G.ArcPresentation, target: str) -> list[G.Marking]:
    """Markings for a diagram whose intervals sit at the seam gap.

    E runs from a seam row to the next seam row of the same component.
    Protected rows are drawn from the seam rows off E; when there are too
    few of them the marking protects what is available.
    """
    C = g.size
    seam = g.rows_covering(C - 1)
    want = {DESTAB: 0, THIN_EXCHANGE: 1, DOUBLE_DESTAB: 1, FLYPE: 2}[target]
    out: list[G.Marking] = []
    seen = set()
    for h1 in seam:
        E, closed = _edge_path_from(g, h1)
        if target == DESTAB and closed:
            continue   # the component winds once
        rows = {i for kind, i in E if kind == "h"}
        free = [h for h in seam if h not in rows]
        for prot in combinations(free, min(want, len(free))):
            m = G.Marking(E, prot)
            if m not in seen:
                seen.add(m)
                out.append(m)
    return out


# ------------------------------------------------------------------ search


def _flat_reduced(g: G.ArcPresentation) -> BraidWord:
    flat, _ = grid_to_braid(g)
    red, _ = reduced_with_origin(flat)
    return red


@dataclass
class _Root:
    gap: int
    grid: G.ArcPresentation
    config: G.ShearingConfig
    marking: G.Marking


@dataclass
class SearchOutcome:
    status: str
    states: int
    root: Optional[_Root] = None
    moves: tuple = ()
    final: Optional[tuple] = None


def _roots(w: BraidWord, target: str) -> list[_Root]:
    g0, _ = braid_to_grid(w)
    k = TARGET_SPECS[target].intervals
    out = []
    for g, sc, gap in G.place_shearing_intervals(g0, k):
        for m in root_markings(g, target):
            out.append(_Root(gap, g, sc, m))
    return out


def _priority(g: G.ArcPresentation, dist: int, red: BraidWord) -> tuple:
    return (g.size, dist, len(red.letters))


def search(roots: list[_Root], accept: Callable[[BraidWord], bool],
           distance: Callable[[BraidWord], int], budget: SearchBudget,
           visit: Optional[Callable[[BraidWord], bool]] = None) -> SearchOutcome:
    """Memoized best-first search over (diagram, config, marking) states.

    All roots share one frontier and one memo table.  Priority is the
    complexity of the whole diagram, then ``distance`` of the flattened
    word, then its reduced length, then insertion order.  A state is tested
    with ``accept`` when it is generated.  ``visit``, if given, sees every
    accepted word and decides whether the search stops there.
    """
    parents: dict = {}
    heap: list = []
    counter = 0
    capped = False

    def hit(red: BraidWord) -> bool:
        if not accept(red):
            return False
        return visit(red) if visit is not None else True

    def trace(key) -> tuple[int, tuple]:
        path = []
        while True:
            parent, mv, _ = parents[key]
            if parent is None:
                path.reverse()
                return mv, tuple(path)
            path.append(mv)
            key = parent

    for idx, r in enumerate(roots):
        key = G.canonical_key(r.grid, r.config, r.marking)
        if key in parents:
            continue
        parents[key] = (None, idx, 0)
        red = _flat_reduced(r.grid)
        if hit(red):
            return SearchOutcome(FOUND, len(parents), r, (), (r.grid, r.config, r.marking))
        if len(parents) >= budget.max_states:
            return SearchOutcome(INCONCLUSIVE, len(parents))
        counter += 1
        heapq.heappush(heap, (_priority(r.grid, distance(red), red), counter,
                              key, r.grid, r.config, r.marking))
    while heap:
        _, _, key, g, sc, m = heapq.heappop(heap)
        depth = parents[key][2]
        if depth >= budget.max_moves:
            capped = True
            continue
        for mv in G.enumerate_elementary_moves(g, sc, m):
            try:
                g2, sc2, m2 = G.apply_elementary_move(g, sc, m, mv, check=False)
            except G.PreconditionViolated:
                continue
            k2 = G.canonical_key(g2, sc2, m2)
            if k2 in parents:
                continue
            parents[k2] = (key, mv, depth + 1)
            red2 = _flat_reduced(g2)
            if hit(red2):
                idx, path = trace(k2)
                return SearchOutcome(FOUND, len(parents), roots[idx], path, (g2, sc2, m2))
            if len(parents) >= budget.max_states:
                return SearchOutcome(INCONCLUSIVE, len(parents))
            counter += 1
            heapq.heappush(heap, (_priority(g2, distance(red2), red2), counter,
                                  k2, g2, sc2, m2))
    return SearchOutcome(INCONCLUSIVE if capped else NOT_ADMITTED, len(parents))


def visibly_split(w: BraidWord) -> bool:
    """Some generator is missing once the word is cyclically reduced up to
    far commutation, so the closure is a split link."""
    present = {abs(x) for x in trace_reduce(w).letters}
    return any(i not in present for i in range(1, w.strands))


def recognize(w: BraidWord, target: str, budget: SearchBudget | None = None) -> Verdict:
    budget = budget or SearchBudget.default()
    spec = TARGET_SPECS[target]
    t0 = time.perf_counter()
    if w.strands < spec.min_strands:
        return Verdict(NOT_ADMITTED, detail={"reason": f"needs at least {spec.min_strands} strands"})
    if target in (THIN_EXCHANGE, FLYPE) and visibly_split(w):
        red, _ = reduced_with_origin(w)
        if spec.witness(red) is None:
            return Verdict(NOT_ADMITTED, None, 0, (time.perf_counter() - t0) * 1000,
                           {"reason": "split closure: outside the algorithm's hypotheses"})
    roots = _roots(w, target)
    res = search(roots, lambda red: spec.witness(red) is not None, spec.distance, budget)
    ms = (time.perf_counter() - t0) * 1000
    if res.status != FOUND:
        return Verdict(res.status, None, res.states, ms, {"roots": len(roots)})
    r = res.root
    cert = MoveCertificate(w, r.gap, r.grid, r.config, r.marking, res.moves,
                           {"move": target, **terminal_witness(res.final[0], target)})
    return Verdict(FOUND, cert, res.states, ms, {"roots": len(roots)})


def recognize_destabilization(w: BraidWord, budget: SearchBudget | None = None) -> Verdict:
    return recognize(w, DESTAB, budget)


def recognize_thin_exchange(w: BraidWord, budget: SearchBudget | None = None) -> Verdict:
    return recognize(w, THIN_EXCHANGE, budget)


def recognize_elementary_flype(w: BraidWord, budget: SearchBudget | None = None) -> Verdict:
    return recognize(w, FLYPE, budget)


def _two_strand_residue_excluded(w: BraidWord) -> bool:
    """For n = 4 the residue W s_1^(2 eps) is a power of s_1 fixed by the exponent sum;
    if neither sign reproduces the closure, no double destabilization exists."""
    if w.strands != 4:
        return False
    e = exponent_sum(w)
    comps = closure_components(w)[1]
    lhs = poly_mul(closure_polynomial(w), geometric_factor(2))
    for eps in (1, -1):
        a = e - 2 * eps   # the residue W s_1^(2 eps) of W times the block
        W = BraidWord(2, (1 if a > 0 else -1,) * abs(a))
        if closure_components(W)[1] != comps:
            continue
        if poly_mul(closure_polynomial(W), geometric_factor(4)) == lhs:
            return False
    return True


def crossing_block_check(eps: int) -> tuple[list[str], bool]:
    """Destabilize the 4-strand crossing block twice and compare the result
    with the 2-strand crossing of the same sign."""
    cur = BraidWord(4, tuple(eps * i for i in double_destab_block()))
    steps = [format_word(cur)]
    for _ in range(2):
        sub = recognize_destabilization(cur, SearchBudget(10_000))
        if not sub.found:
            return steps, False
        cur = destabilize_word(parse_word(sub.certificate.claim["terminalWord"]))
        steps.append(format_word(cur))
    return steps, are_conjugate(cur, BraidWord(2, (eps, eps)))


def double_destab_block() -> tuple[int, ...]:
    return (2, 3, 1, 2)


def recognize_double_destabilization(w: BraidWord, budget: SearchBudget | None = None) -> Verdict:
    t0 = time.perf_counter()
    if w.strands < 4:
        return Verdict(NOT_ADMITTED, detail={"reason": "needs at least 4 strands"})
    if _two_strand_residue_excluded(w):
        return Verdict(NOT_ADMITTED, None, 0, (time.perf_counter() - t0) * 1000,
                       {"reason": "no two-strand residue has the same closure"})
    v = recognize(w, DOUBLE_DESTAB, budget)
    if not v.found:
        return v
    steps, ok = crossing_block_check(v.certificate.claim["eps"])
    if not ok:
        return Verdict(INCONCLUSIVE, None, v.states_visited, v.wall_ms,
                       {"reason": "crossing block check failed"})
    claim = dict(v.certificate.claim, blockDestabilizations=steps)
    cert = replace(v.certificate, claim=claim)
    return Verdict(FOUND, cert, v.states_visited, (time.perf_counter() - t0) * 1000, v.detail)


RECOGNIZERS = {
    DESTAB: recognize_destabilization,
    THIN_EXCHANGE: recognize_thin_exchange,
    FLYPE: recognize_elementary_flype,
    DOUBLE_DESTAB: recognize_double_destabilization,
}


# ------------------------------------------------------------------ replay


def replay_certificate(c: MoveCertificate) -> bool:
    """Re-run a certificate; raises a ReplayError subclass on failure."""
    g0, _ = braid_to_grid(c.initial_word)
    k = c.config.k
    if k:
        expected = G.rotate_columns(g0, -(c.placement_gap + 1))
    else:
        expected = g0
    if expected != c.initial_grid or c.config.resident != 0:
        raise PatternMismatch("initial grid does not encode the initial word")
    g, sc, m = c.initial_grid, c.config, c.initial_marking
    level = G.sheared_complexity(g, sc)
    for step, mv in enumerate(c.moves, start=1):
        if mv not in G.enumerate_elementary_moves(g, sc, m):
            raise InvalidMoveAtStep(step, str(mv))
        try:
            g, sc, m = G.apply_elementary_move(g, sc, m, mv, check=False)
        except G.PreconditionViolated as exc:
            raise InvalidMoveAtStep(step, str(exc)) from None
        new_level = G.sheared_complexity(g, sc)
        if new_level > level:
            raise ComplexityIncreased(f"step {step}: {level} -> {new_level}")
        level = new_level
    target = c.claim.get("move")
    if target not in TARGET_SPECS:
        raise PatternMismatch(f"unknown claim {target!r}")
    wit = terminal_witness(g, target)
    if wit is None:
        raise PatternMismatch(f"terminal diagram does not exhibit a {target} pattern")
    if wit["terminalWord"] != c.claim.get("terminalWord"):
        raise PatternMismatch("terminal word differs from the claim")
    return True


def replay_frames(c: MoveCertificate):
    """Yield (diagram, config) for the initial state and after every move."""
    g, sc, m = c.initial_grid, c.config, c.initial_marking
    yield g, sc
    for mv in c.moves:
        g, sc, m = G.apply_elementary_move(g, sc, m, mv)
        yield g, sc


# ------------------------------------------------------------- relatedness


def _linking_numbers(w: BraidWord) -> tuple:
    # the diagonal holds self-writhe, which flypes and exchanges may shift
    m = linking_matrix_of_word(w)
    return canonical_linking([[0 if a == b else v for b, v in enumerate(row)]
                              for a, row in enumerate(m)])


def _prefilter(x: BraidWord, y: BraidWord, kind: str) -> Optional[str]:
    if kind == DOUBLE_DESTAB:
        if y.strands != x.strands - 2:
            return "strand counts incompatible"
        if closure_components(x)[1] != closure_components(y)[1]:
            return "component counts differ"
        if not any(exponent_sum(y) == exponent_sum(x) - 2 * e for e in (1, -1)):
            return "exponent sums incompatible"
        lhs = poly_mul(closure_polynomial(x), geometric_factor(y.strands))
        rhs = poly_mul(closure_polynomial(y), geometric_factor(x.strands))
        if lhs != rhs:
            return "closure polynomials differ"
        return None
    if x.strands != y.strands:
        return "strand counts differ"
    if exponent_sum(x) != exponent_sum(y):
        return "exponent sums differ"
    # strands per component can change under a flype, only the count is invariant
    if closure_components(x)[1] != closure_components(y)[1]:
        return "component counts differ"
    if _linking_numbers(x) != _linking_numbers(y):
        return "linking numbers differ"
    if closure_polynomial(x) != closure_polynomial(y):
        return "closure polynomials differ"
    return None


def _images(w: BraidWord, kind: str):
    """(description, image word) for every syntactic move form of w."""
    if kind == THIN_EXCHANGE:
        for f in enumerate_exchange_forms(w):
            if not f.thin:
                continue
            for sgn in (1, -1):
                yield {"form": f.to_json(), "twistSign": sgn}, apply_exchange_move(w, f, sgn)
    elif kind == FLYPE:
        forms = enumerate_elementary_flype_forms(w)
        if not forms:
            res = commute_to_flype(w)
            if res is not None:
                w = res[0]
                forms = enumerate_elementary_flype_forms(w)
        for f in forms:
            yield {"form": f.to_json(), "word": format_word(w)}, apply_elementary_flype(w, f)
    elif kind == DOUBLE_DESTAB:
        res = commute_to_double_destab(w) if w.strands >= 4 else None
        if res is not None:
            word = res[0]
            W, eps = detect_double_destabilization_form(word)
            yield ({"W": format_word(W), "eps": eps, "word": format_word(word)},
                   double_destabilize_word(word))


def related_by_move(x: BraidWord, y: BraidWord, kind: str,
                    budget: SearchBudget | None = None) -> Verdict:
    """Decide whether y is obtained from (a braid isotopic copy of) x by one move."""
    budget = budget or SearchBudget.default()
    t0 = time.perf_counter()
    reason = _prefilter(x, y, kind)
    if reason is not None:
        return Verdict(NOT_ADMITTED, None, 0, (time.perf_counter() - t0) * 1000,
                       {"reason": reason})
    target = kind
    spec = TARGET_SPECS[target]
    if x.strands < spec.min_strands:
        return Verdict(NOT_ADMITTED, detail={"reason": "strand count too small"})
    tried: set = set()

    def check(word: BraidWord, source: str):
        red, _ = reduced_with_origin(word)
        if red in tried:
            return None
        tried.add(red)
        for desc, img in _images(red, kind):
            if are_conjugate(img, y):
                return {"source": source, "representative": format_word(red),
                        "image": format_word(img), **desc}
        return None

    hit = check(x, "input")
    if hit is not None:
        return Verdict(FOUND, None, 0, (time.perf_counter() - t0) * 1000, hit)
    found: list = []

    def visit(red: BraidWord) -> bool:
        h = check(red, "search")
        if h is not None:
            found.append(h)
            return True
        return False

    roots = _roots(x, target)
    res = search(roots, lambda red: spec.witness(red) is not None, spec.distance, budget, visit)
    ms = (time.perf_counter() - t0) * 1000
    if found:
        return Verdict(FOUND, None, res.states, ms, found[0])
    return Verdict(res.status, None, res.states, ms)
