import json
import subprocess
import sys

import pytest
import yaml

from capelli.cli import CommandRequest, UsageError, main

from test_catalog import I2_DOC

I2 = ["--case", "I", "--n", "2", "--k", "r=1,s=1/2"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list_cases(capsys):
    code, out, _ = run(capsys, "list-cases")
    assert code == 0
    assert len(out.strip().splitlines()) == 9


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", *I2, "--degree", "3")
    assert code == 0
    for name in ("C11", "C1", "C2", "C3", "C4", "C5"):
        assert any(line.startswith(name) and "pass" in line for line in out.splitlines())
    assert "C0 verified to degree 3" in out


def test_interpolate_text_and_structured(capsys):
    code, out, _ = run(capsys, "interpolate", *I2, "--lambda", "1,0")
    assert code == 0
    assert out.strip() == "p_[1, 0] = z1 + z2 - 2"
    code, out, _ = run(capsys, "interpolate", *I2, "--lambda", "1,0", "--format", "structured")
    doc = json.loads(out)
    assert doc["ell"] == 1 and doc["lambda"] == [1, 0]


@pytest.mark.parametrize("argv", [
    ["eigencheck", *I2, "--degree", "2"],
    ["eigencheck", *I2, "--h-lambda", "0,1", "--lambda", "2,0"],
    ["pathsum", *I2, "--lambda", "1,0", "--mu", "0,1"],
    ["pieri", *I2, "--h-lambda", "1,0", "--mu", "1,0"],
    ["pieri", *I2, "--h-ell-power", "2", "--mu", "0,0", "--minus"],
    ["operator", *I2, "--h-lambda", "1,0"],
    ["dimension", *I2, "--lambda", "1,0"],
])
def test_subcommands_succeed_and_are_deterministic(capsys, argv):
    code, first, _ = run(capsys, *argv, "--format", "structured")
    assert code == 0
    code, second, _ = run(capsys, *argv, "--format", "structured")
    assert first == second
    doc = json.loads(first)
    assert doc.get("pass", True) is True


def test_dimension_value(capsys):
    code, out, _ = run(capsys, "dimension", *I2, "--lambda", "1,0")
    assert out.strip() == "d_[1, 0] = 4"


def test_pathsum_value(capsys):
    code, out, _ = run(capsys, "pathsum", *I2, "--lambda", "1,0", "--mu", "0,1", "--format", "structured")
    doc = json.loads(out)
    assert doc["paths"] == doc["interpolation"] == "2"


@pytest.mark.parametrize("argv", [
    ["interpolate", "--lambda", "1,0"],                                  # neither case nor file
    ["interpolate", *I2, "--lambda", "1,x"],                             # malformed tuple
    ["interpolate", *I2, "--lambda", "1,0,0"],                           # wrong rank
    ["interpolate", *I2, "--lambda", "-1,1"],                            # not dominant
    ["pieri", *I2, "--h-lambda", "1,0", "--h-ell-power", "1", "--mu", "0,0"],
    ["verify", *I2, "--degree", "-1"],
    ["interpolate", "--case", "I", "--n", "2", "--k", "r=1,s=1/0", "--lambda", "1,0"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_invalid_case_params_exit_2(capsys):
    code, _, err = run(capsys, "verify", "--case", "V", "--a", "1", "--b", "2")
    assert code == 2


def test_file_input(capsys, tmp_path):
    path = tmp_path / "i2.yaml"
    path.write_text(yaml.safe_dump(I2_DOC, allow_unicode=True))
    code, out, _ = run(capsys, "interpolate", "--file", str(path), "--lambda", "1,0")
    assert code == 0
    assert out.strip() == "p_[1, 0] = z1 + z2 - 2"
    path = tmp_path / "i2.json"
    path.write_text(json.dumps(I2_DOC))
    code, out2, _ = run(capsys, "interpolate", "--file", str(path), "--lambda", "1,0")
    assert out2 == out


def test_request_requires_exactly_one_source():
    with pytest.raises(UsageError):
        CommandRequest("verify")
    with pytest.raises(UsageError):
        CommandRequest("verify", case="I", file="x.yaml")
    CommandRequest("list-cases")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "capelli", "list-cases", "--format", "structured"],
                         capture_output=True, text=True, check=True)
    assert len(json.loads(res.stdout)["cases"]) == 9
