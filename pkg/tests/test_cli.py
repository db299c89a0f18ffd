import io
import json

import pytest

from braidforge import grid as G
from braidforge.cli import run_cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_recognize_found():
    code, out, _ = run("recognize", "--move", "destab", "--word", "n=3: 1 2")
    assert code == 0 and out.startswith("FOUND")


def test_recognize_not_admitted():
    code, out, _ = run("recognize", "--move", "destab", "--word", "n=2: 1 1 1")
    assert code == 1 and out.startswith("NOT ADMITTED")


def test_recognize_degenerate_flype():
    code, _, _ = run("recognize", "--move", "flype", "--word", "n=3: 1")
    assert code == 1


def test_inconclusive_exit():
    code, out, _ = run("recognize", "--move", "destab", "--word", "n=2: 1 1 1", "--max-states", "1")
    assert code == 2 and out.startswith("INCONCLUSIVE")


@pytest.mark.parametrize("argv", [
    (),
    ("recognize", "--word", "n=3: 1 2"),
    ("recognize", "--move", "teleport", "--word", "n=3: 1 2"),
    ("recognize", "--move", "destab", "--word", "n=3: 1 2", "--max-states", "0"),
    ("render", "--word", "n=2: 1", "--frames", "out"),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 64


def test_bad_word_is_a_data_error():
    code, _, err = run("recognize", "--move", "destab", "--word", "n=3: 7")
    assert code == 65 and "bad braid word" in err


def test_missing_file_is_io_error(tmp_path):
    assert run("replay", str(tmp_path / "absent.json"))[0] == 74


def test_trace_replay_and_frames(tmp_path):
    cert = tmp_path / "cert.json"
    code, _, _ = run("recognize", "--move", "destab", "--word", "n=3: 1 2 1 -2 -1",
                     "--trace", str(cert))
    assert code == 0
    doc = json.loads(cert.read_text())
    code, out, _ = run("replay", str(cert))
    assert code == 0 and out.startswith("OK")
    frames = tmp_path / "frames"
    code, _, _ = run("render", "--trace", str(cert), "--frames", str(frames))
    assert code == 0
    assert len(list(frames.glob("frame_*.svg"))) == len(doc["moves"]) + 1

    doc["moves"][0]["operands"] = [x + 13 for x in doc["moves"][0]["operands"]]
    cert.write_text(json.dumps(doc))
    code, out, _ = run("replay", "--trace", str(cert))
    assert code == 1 and "InvalidMoveAtStep" in out


def test_json_verdict():
    code, out, _ = run("recognize", "--move", "thin-exchange", "--word", "n=4: 1 3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["outcome"] == "Found" and "certificate" in doc


def test_related():
    code, out, _ = run("related", "--move", "flype", "--word-a", "n=3: 1 2 2 1 2",
                       "--word-b", "n=3: 1 2 1 2 2")
    assert code == 0 and out.startswith("FOUND")
    code, out, _ = run("related", "--move", "flype", "--word-a", "n=3: 1 2 2 1 2",
                       "--word-b", "n=3: 1 2")
    assert code == 1 and "exponent sums differ" in out


def test_convert_both_ways(tmp_path):
    path = tmp_path / "g.json"
    code, _, _ = run("convert", "--word", "n=2: 1 1", "--output", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert G.validate_presentation(doc) == []
    code, out, _ = run("convert", "--grid", str(path))
    assert code == 0 and out.startswith("n=2:")


def test_convert_rejects_bad_grid(tmp_path):
    path = tmp_path / "g.json"
    path.write_text("{not json")
    assert run("convert", "--grid", str(path))[0] == 65


def test_render_ascii_and_svg():
    code, out, _ = run("render", "--word", "n=2: 1 1")
    assert code == 0 and "│" in out
    code, out, _ = run("render", "--word", "n=2: 1 1", "--format", "svg")
    assert code == 0 and out.startswith("<svg")


def test_bench(tmp_path):
    csv_path, json_path = tmp_path / "r.csv", tmp_path / "r.json"
    code, out, _ = run("bench", "--move", "destab", "--count", "4", "--csv", str(csv_path),
                       "--json", str(json_path), "--no-timing")
    assert code == 0
    assert json.loads(out)["instances"] == 4
    assert csv_path.read_text().startswith("id,move,n,coreLength,verdict,states,certLen,millis")
    first = json_path.read_bytes()
    run("bench", "--move", "destab", "--count", "4", "--json", str(json_path), "--no-timing")
    assert json_path.read_bytes() == first
