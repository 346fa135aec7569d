import json
from pathlib import Path

import pytest

from conftest import CATALOG, CATALOG_IDS
from toric_contact.builders import fan_projective_space
from toric_contact.cli import main
from toric_contact.errors import FanSyntaxError, FanValidationError
from toric_contact.fanfile import load_fan, parse_fan, serialize_fan
from toric_contact.models import Fan

P2_TEXT = '{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}'


def _build(tmp_path, capsys, *args):
    path = tmp_path / f"{'_'.join(args).replace('-', '')}.json"
    assert main(["build", *args, "-o", str(path)]) == 0
    capsys.readouterr()
    return str(path)


# -- fan files --

def test_parse_fan_of_p2():
    fan = parse_fan(P2_TEXT)
    assert fan.rank == 2
    assert fan.rays == ((1, 0), (0, 1), (-1, -1))
    assert fan.max_cones == ((0, 1), (1, 2), (0, 2))


def test_parse_fan_reports_semantic_violations():
    with pytest.raises(FanValidationError, match="non-primitive ray 0"):
        parse_fan(P2_TEXT.replace("[[1,0]", "[[2,0]"))
    with pytest.raises(FanValidationError, match="index out of range"):
        parse_fan(P2_TEXT.replace("[2,0]]", "[9,0]]"))


def test_parse_fan_reports_syntax_position():
    with pytest.raises(FanSyntaxError) as excinfo:
        parse_fan('{"rank": 2,\n "rays": [[1, 0],,]}')
    assert excinfo.value.line == 2


def test_parse_fan_rejects_schema_errors():
    with pytest.raises(FanSyntaxError):
        parse_fan('{"rank": 1, "rays": [["1"]], "max_cones": [[0]]}')
    with pytest.raises(FanSyntaxError):
        parse_fan('{"rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]], "name": "P1"}')


def test_parse_fan_keeps_large_integers_exact():
    big = 10 ** 30 + 1
    fan = load_fan(f'{{"rank": 2, "rays": [[{big}, 1]], "max_cones": [[0]]}}')
    assert fan.rays[0][0] == big


def test_serialize_fan_is_canonical():
    assert serialize_fan(fan_projective_space(1)) == '{"rank":1,"rays":[[-1],[1]],"max_cones":[[0],[1]]}'
    permuted = Fan(rank=2, rays=((-1, -1), (0, 1), (1, 0)), max_cones=((1, 2), (0, 1), (0, 2)))
    assert serialize_fan(permuted) == serialize_fan(parse_fan(P2_TEXT))
    assert serialize_fan(parse_fan(serialize_fan(permuted))) == serialize_fan(permuted)


# -- commands --

def test_build_writes_canonical_fan(capsys):
    assert main(["build", "pn", "--dim", "1"]) == 0
    assert capsys.readouterr().out == '{"rank":1,"rays":[[-1],[1]],"max_cones":[[0],[1]]}\n'


def test_classify_projective_space(tmp_path, capsys):
    path = _build(tmp_path, capsys, "pn", "--dim", "3")
    assert main(["classify", path]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "CONTACT: P^3"
    assert "extremal_lengths: [4]" in out


def test_classify_p1_cube(tmp_path, capsys):
    path = _build(tmp_path, capsys, "p1pow", "--m", "3")
    assert main(["classify", path]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "NOT-CONTACT"


def test_classify_projectivized_tangent_as_json(tmp_path, capsys):
    path = _build(tmp_path, capsys, "ptangent", "--m", "2")
    assert main(["classify", "--json", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"]["kind"] == "ProjectivizedTangentOfP1Power"
    assert payload["verdict"]["line"] == "CONTACT: P(T_(P1)^2)"
    assert payload["evidence"]["isomorphism"] is not None


def test_analyze_hirzebruch(tmp_path, capsys):
    path = _build(tmp_path, capsys, "hirzebruch", "--a", "1")
    assert main(["analyze", path]) == 0
    out = capsys.readouterr().out
    assert "picard_rank: 2" in out
    assert "smooth: yes" in out
    assert "projective: yes" in out


def test_mori_lists_extremal_rays(tmp_path, capsys):
    path = _build(tmp_path, capsys, "hirzebruch", "--a", "1")
    assert main(["mori", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("wall:") for line in lines) == 4
    assert sum(line.startswith("extremal_ray:") for line in lines) == 2


def test_pbundle_over_p1(tmp_path, capsys):
    base = _build(tmp_path, capsys, "pn", "--dim", "1")
    # the base file is canonical: ray 0 is -1, ray 1 is +1
    assert main(["build", "pbundle", "--base", base, "--degrees", "0,0;0,2"]) == 0
    fan = parse_fan(capsys.readouterr().out)
    assert fan.rank == 2 and fan.num_rays == 4


def test_pbundle_rejects_bad_degrees(tmp_path, capsys):
    base = _build(tmp_path, capsys, "pn", "--dim", "1")
    assert main(["build", "pbundle", "--base", base, "--degrees", "0,x"]) == 64
    assert main(["build", "pbundle", "--base", base, "--degrees", "1,0;0,2"]) == 3


def test_validate_exit_codes(tmp_path, capsys):
    good = tmp_path / "p2.json"
    good.write_text(P2_TEXT)
    assert main(["validate", str(good)]) == 0
    assert capsys.readouterr().out == "valid: yes\n"

    bad = tmp_path / "bad.json"
    bad.write_text(P2_TEXT.replace("[[1,0]", "[[2,0]"))
    assert main(["validate", str(bad)]) == 3
    assert "non-primitive ray 0" in capsys.readouterr().out


def test_syntax_error_exit_code(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert main(["classify", str(broken)]) == 2


def test_failed_hypothesis_exit_code(tmp_path):
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text('{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2]]}')
    assert main(["classify", str(incomplete)]) == 3


def test_usage_and_io_exit_codes(tmp_path):
    assert main([]) == 64
    assert main(["classify", "--no-such-flag", "x.json"]) == 64
    assert main(["classify", str(tmp_path / "missing.json")]) == 74


def test_output_is_deterministic(tmp_path, capsys):
    path = _build(tmp_path, capsys, "ptangent", "--m", "2")
    outputs = []
    for _ in range(2):
        for command in ("analyze", "mori", "classify"):
            assert main([command, path]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_survey_classifies_each_distinct_fan(tmp_path, capsys):
    p3 = _build(tmp_path, capsys, "pn", "--dim", "3")
    cube = _build(tmp_path, capsys, "p1pow", "--m", "3")
    again = tmp_path / "p3_again.json"
    again.write_text(open(p3).read())

    assert main(["survey", p3, cube, str(again), "--images", "2", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["run_status"] == "FINISHED"
    assert payload["total_jobs"] == 2
    assert payload["summary"]["verdicts"] == {"CONTACT: P^3": 1, "NOT-CONTACT": 1}
    assert payload["summary"]["split_tangent_mismatches"] == 0
    assert payload["summary"]["image_disagreements"] == 0


# -- golden outputs --

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_COMMANDS = ("validate", "analyze", "mori", "classify")

# catalog id -> (golden directory, build arguments or None when there is no builder command)
GOLDEN_FANS = {
    "P1": ("p1", ["pn", "--dim", "1"]),
    "P2": ("p2", ["pn", "--dim", "2"]),
    "P3": ("p3", ["pn", "--dim", "3"]),
    "P1^2": ("p1_2", ["p1pow", "--m", "2"]),
    "P1^3": ("p1_3", ["p1pow", "--m", "3"]),
    "F0": ("f0", ["hirzebruch", "--a", "0"]),
    "F1": ("f1", ["hirzebruch", "--a", "1"]),
    "F2": ("f2", ["hirzebruch", "--a", "2"]),
    "F3": ("f3", ["hirzebruch", "--a", "3"]),
    "P1xP2": ("p1xp2", None),
    "P1xF1": ("p1xf1", None),
    "P(T_P1xP1)": ("ptangent_2", ["ptangent", "--m", "2"]),
}


def _golden(directory: str, name: str) -> str:
    return (GOLDEN / directory / name).read_text(encoding="utf-8")


def test_golden_files_cover_the_catalog():
    assert sorted(GOLDEN_FANS) == sorted(CATALOG_IDS)


@pytest.mark.parametrize("name, fan", CATALOG, ids=CATALOG_IDS)
def test_golden_fan_files(name, fan, capsys):
    directory, build_args = GOLDEN_FANS[name]
    expected = _golden(directory, "fan.json")
    assert serialize_fan(fan) + "\n" == expected
    if build_args is not None:
        assert main(["build", *build_args]) == 0
        assert capsys.readouterr().out == expected


@pytest.mark.parametrize("command", GOLDEN_COMMANDS)
@pytest.mark.parametrize("name", CATALOG_IDS)
def test_golden_command_output(name, command, capsys):
    directory, _ = GOLDEN_FANS[name]
    assert main([command, str(GOLDEN / directory / "fan.json")]) == 0
    assert capsys.readouterr().out == _golden(directory, f"{command}.txt")
