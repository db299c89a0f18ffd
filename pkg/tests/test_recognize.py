import dataclasses

import pytest

from braidforge import grid as G
from braidforge.braid import (
    BraidWord,
    apply_exchange_move,
    detect_destabilization_form,
    enumerate_exchange_forms,
    parse_word,
)
from braidforge.recognize import (
    FOUND,
    INCONCLUSIVE,
    NOT_ADMITTED,
    InvalidMoveAtStep,
    MoveCertificate,
    PatternMismatch,
    SearchBudget,
    recognize_destabilization,
    recognize_double_destabilization,
    recognize_elementary_flype,
    recognize_thin_exchange,
    related_by_move,
    replay_certificate,
    replay_frames,
    DOUBLE_DESTAB,
    FLYPE,
    THIN_EXCHANGE,
)


def W(text):
    return parse_word(text)


def test_destab_in_form():
    v = recognize_destabilization(W("n=3: 1 2"))
    assert v.outcome == FOUND and v.certificate.moves == ()
    assert replay_certificate(v.certificate)


def test_destab_after_conjugation():
    g = [2, 1]
    w = BraidWord(3, tuple(g) + (1, 2) + tuple(-x for x in reversed(g)))
    v = recognize_destabilization(w)
    assert v.found
    assert replay_certificate(v.certificate)
    assert detect_destabilization_form(W("n=3: " + v.certificate.claim["terminalWord"].split(":")[1])) \
        is not None


def test_trefoil_is_not_destabilizable():
    assert recognize_destabilization(W("n=2: 1 1 1")).outcome == NOT_ADMITTED


def test_tiny_budget_is_inconclusive():
    v = recognize_destabilization(W("n=2: 1 1 1"), SearchBudget(1))
    assert v.outcome == INCONCLUSIVE


def test_thin_exchange():
    v = recognize_thin_exchange(W("n=4: 1 3"))
    assert v.found
    claim = v.certificate.claim
    assert (claim["exchange"]["s"], claim["exchange"]["t"]) == (2, 2)
    assert claim["exchange"]["thin"]
    assert recognize_thin_exchange(W("n=2: 1")).outcome == NOT_ADMITTED


def test_flype():
    assert recognize_elementary_flype(W("n=3: 1 2 2 1 2")).found
    assert recognize_elementary_flype(W("n=2: 1 1 1")).outcome == NOT_ADMITTED
    v = recognize_elementary_flype(W("n=3: 1"))
    assert v.outcome == NOT_ADMITTED and "split" in v.detail["reason"]


def test_double_destab():
    v = recognize_double_destabilization(W("n=4: 1 2 3 1 2"))
    assert v.found and v.certificate.claim["eps"] == 1
    assert v.certificate.claim["blockDestabilizations"][-1] == "n=2: 1 1"
    assert replay_certificate(v.certificate)
    assert recognize_double_destabilization(W("n=4: 1 2 -3 1 2")).outcome == NOT_ADMITTED


def test_certificate_json_roundtrip():
    v = recognize_destabilization(W("n=3: 2 1 2 -1 -2"))
    cert = v.certificate
    again = MoveCertificate.from_json(cert.to_json())
    assert again == cert
    assert replay_certificate(again)


def _with_moves(cert, moves):
    return dataclasses.replace(cert, moves=tuple(moves))


def test_perturbed_operand_fails_replay():
    v = recognize_destabilization(W("n=3: 1 2 1 -2 -1"))
    cert = v.certificate
    assert cert.moves, "need a non-trivial certificate"
    mv = cert.moves[0]
    bad = G.ElementaryMove(mv.kind, tuple(x + 17 for x in mv.operands))
    with pytest.raises(InvalidMoveAtStep):
        replay_certificate(_with_moves(cert, (bad,) + cert.moves[1:]))


def test_wrong_claim_fails_replay():
    v = recognize_elementary_flype(W("n=3: 1 2 2 1 2"))
    cert = dataclasses.replace(v.certificate, claim=dict(v.certificate.claim, move="destab"))
    with pytest.raises(PatternMismatch):
        replay_certificate(cert)


def test_frames_count():
    v = recognize_destabilization(W("n=3: 1 2 1 -2 -1"))
    assert len(list(replay_frames(v.certificate))) == len(v.certificate.moves) + 1


def test_related_exchange():
    x = W("n=4: 1 3")
    y = apply_exchange_move(x, enumerate_exchange_forms(x)[0], 1)
    assert related_by_move(x, y, THIN_EXCHANGE).found


def test_related_flype():
    assert related_by_move(W("n=3: 1 2 2 1 2"), W("n=3: 1 2 1 2 2"), FLYPE).found


def test_related_prefilter():
    v = related_by_move(W("n=3: 1 2 2 1 2"), W("n=3: 1 2 1 2"), FLYPE)
    assert v.outcome == NOT_ADMITTED and v.detail["reason"] == "exponent sums differ"


def test_related_double_destab():
    v = related_by_move(W("n=4: 1 2 3 1 2"), W("n=2: 1 1 1"), DOUBLE_DESTAB)
    assert v.found
