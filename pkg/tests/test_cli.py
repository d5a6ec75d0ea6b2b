import json
import math

import numpy as np
import pytest

from oracles import depolarizing_id_uniform
from qent import channels, cli, entangle, linalg, states

LN2 = math.log(2)


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    f = {
        "mixed": write(tmp_path / "mixed.json", states.state_to_json(states.maximally_mixed(2))),
        "pure": write(tmp_path / "pure.json", states.state_to_json(states.pure_state([0.6, 0.8]))),
        "quarter": write(
            tmp_path / "quarter.json", states.state_to_json(states.validate_density(np.diag([0.25, 0.75])))
        ),
        "qutrit": write(tmp_path / "qutrit.json", states.state_to_json(states.maximally_mixed(3))),
        "identity": write(tmp_path / "id.json", channels.channel_to_json(channels.identity_channel(2))),
        "depol": write(tmp_path / "depol.json", channels.channel_to_json(channels.depolarizing(0.5))),
    }
    faulty = channels.channel_to_json(channels.identity_channel(2))
    faulty["kraus"] = [linalg.matrix_to_json(np.diag([1.0, math.sqrt(1 + 1e-3)]))]
    f["faulty"] = write(tmp_path / "faulty.json", faulty)
    f["tmp"] = tmp_path
    return f


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def values(line):
    return {k: float(v) for k, v in (tok.split("=") for tok in line.split() if "=" in tok and
                                       not tok.startswith("converged"))}


def test_fmt():
    assert cli.fmt(LN2) == "0.693147180560"
    assert cli.fmt(-1e-15) == "0.000000000000"


def test_entropy_examples(capsys, files):
    code, out, _ = run(capsys, "entropy", "--state", files["mixed"])
    assert code == 0
    assert out.strip() == "S=0.693147180560 S_q=1.386294361120"
    _, out, _ = run(capsys, "entropy", "--state", files["pure"])
    assert out.strip() == "S=0.000000000000 S_q=0.000000000000"
    _, out, _ = run(capsys, "entropy", "--state", files["quarter"])
    v = values(out)
    assert v["S"] == pytest.approx(0.562335, abs=1e-6)
    assert v["S_q"] == pytest.approx(1.124671, abs=1e-6)


def test_entropy_errors(capsys, files, tmp_path):
    code, _, _ = run(capsys, "entropy", "--state", str(tmp_path / "missing.json"))
    assert code == 3
    (tmp_path / "junk.json").write_text("{not json")
    assert run(capsys, "entropy", "--state", str(tmp_path / "junk.json"))[0] == 3
    write(tmp_path / "nokey.json", {"kind": "density"})
    assert run(capsys, "entropy", "--state", str(tmp_path / "nokey.json"))[0] == 3
    bad = states.state_to_json(states.maximally_mixed(2))
    bad["matrix"] = linalg.matrix_to_json(np.diag([0.7, 0.7]))
    code, _, err = run(capsys, "entropy", "--state", write(tmp_path / "bad.json", bad))
    assert code == 1
    assert "TraceNotOne" in err


def test_usage_error_is_validation(capsys):
    assert run(capsys, "entropy")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


@pytest.mark.parametrize("kind", ["standard", "d", "o"])
def test_compound_and_mutual(capsys, files, kind):
    out_path = str(files["tmp"] / f"{kind}.json")
    code, out, _ = run(capsys, "compound", kind, "--state", files["mixed"], "-o", out_path)
    assert code == 0
    expected = 2 * LN2 if kind == "standard" else LN2
    assert values(out)["I"] == pytest.approx(expected, abs=1e-10)
    code, out, _ = run(capsys, "mutual", "--compound", out_path)
    assert code == 0
    v = values(out)
    assert v["I"] == pytest.approx(expected, abs=1e-10)
    if kind == "standard":
        assert v["D"] == pytest.approx(-LN2, abs=1e-10)


def test_compound_with_ensemble(capsys, files):
    e = states.make_ensemble([(0.5, np.diag([1, 0])), (0.5, states.pure_state([1, 1]))])
    ens = write(files["tmp"] / "ens.json", states.ensemble_to_json(e))
    out_path = str(files["tmp"] / "w.json")
    code, out, _ = run(capsys, "compound", "d", "--state", files["mixed"], "--ensemble", ens,
                       "-o", out_path)
    assert code == 0
    w = entangle.compound_from_json(json.loads(open(out_path).read()))
    assert w.dims == (2, 2)
    code, _, err = run(capsys, "compound", "o", "--state", files["mixed"], "--ensemble", ens,
                       "-o", out_path)
    assert code == 1
    assert "NotOrthogonal" in err


def test_channel_apply(capsys, files):
    out_path = str(files["tmp"] / "out.json")
    code, out, _ = run(capsys, "channel-apply", "--channel", files["depol"], "--state",
                       files["pure"], "-o", out_path)
    assert code == 0
    rho = states.state_from_json(json.loads(open(out_path).read()))
    assert np.trace(rho.matrix).real == pytest.approx(1, abs=1e-12)
    code, _, _ = run(capsys, "channel-apply", "--channel", files["depol"], "--state",
                     files["qutrit"], "-o", out_path)
    assert code == 1
    code, _, _ = run(capsys, "channel-apply", "--channel", files["depol"], "--state",
                     files["pure"], "-o", str(files["tmp"] / "nodir" / "x.json"))
    assert code == 3


def test_info_examples(capsys, files):
    base = ["info", "--state", files["mixed"], "--restarts", "2"]
    code, out, _ = run(capsys, *base, "--channel", files["identity"], "--kind", "q")
    assert code == 0 and values(out)["I_q"] == pytest.approx(2 * LN2, abs=1e-10)
    _, out, _ = run(capsys, *base, "--channel", files["identity"], "--kind", "d")
    assert values(out)["I_d"] == pytest.approx(LN2, abs=1e-6)
    dump = str(files["tmp"] / "dump.json")
    _, out, _ = run(capsys, *base, "--channel", files["depol"], "--kind", "d", "--dump", dump)
    assert values(out)["I_d"] == pytest.approx(depolarizing_id_uniform(0.5), abs=1e-6)
    report = json.loads(open(dump).read())
    assert report["argmax"]["kind"] == "ensemble"
    code, _, _ = run(capsys, "info", "--state", files["qutrit"], "--channel", files["identity"],
                     "--kind", "q")
    assert code == 1


def test_capacity_cmd(capsys, files):
    code, out, _ = run(capsys, "capacity", "--channel", files["identity"], "--kind", "q",
                       "--restarts", "1", "--tol", "1e-10")
    assert code == 0
    assert values(out)["C_q"] == pytest.approx(2 * LN2, abs=2e-3)
    assert "converged=" in out
    assert run(capsys, "capacity", "--channel", files["faulty"], "--kind", "q")[0] == 1
    assert run(capsys, "capacity", "--channel", files["identity"], "--kind", "q",
               "--restarts", "0")[0] == 1


def test_sweep_csv(capsys, files):
    out_path = files["tmp"] / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--family", "depolarizing", "--from", "0", "--to", "1",
                     "--step", "0.25", "--state", files["mixed"], "--out", str(out_path),
                     "--restarts", "1")
    assert code == 0
    raw = out_path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "param,I_q,I_d,I_o"
    rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
    assert [r[0] for r in rows] == [0, 0.25, 0.5, 0.75, 1.0]
    assert lines[1] == "0.000000000000,1.386294361120,0.693147180560,0.693147180560"
    assert rows[-1][1:] == [0, 0, 0]
    for _, i_q, i_d, i_o in rows:
        assert i_q >= i_d >= i_o - 1e-6


def test_sweep_errors(capsys, files):
    common = ["--state", files["mixed"], "--out", str(files["tmp"] / "s.csv")]
    assert run(capsys, "sweep", "--family", "erasure", "--from", "0", "--to", "1",
               "--step", "0.5", *common)[0] == 1
    assert run(capsys, "sweep", "--family", "depolarizing", "--from", "0", "--to", "1",
               "--step", "0", *common)[0] == 1
    assert run(capsys, "sweep", "--family", "depolarizing", "--from", "1", "--to", "0",
               "--step", "0.5", *common)[0] == 1
    assert run(capsys, "sweep", "--family", "depolarizing", "--from", "0", "--to", "1",
               "--step", "0.5", "--state", files["mixed"],
               "--out", str(files["tmp"] / "nodir" / "s.csv"))[0] == 3


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--dims", "2", "--trials", "5", "--opt-trials", "1")
    assert code == 0
    assert "all checks passed" in out


def test_verify_faulty_channel(capsys, files):
    code, out, _ = run(capsys, "verify", "--dims", "2", "--trials", "2", "--opt-trials", "0",
                       "--channel", files["faulty"])
    assert code == 2
    assert "IncompleteKraus" in out


def test_verify_good_extra_channel(capsys, files):
    code, _, _ = run(capsys, "verify", "--dims", "2", "--trials", "2", "--opt-trials", "0",
                     "--channel", files["depol"])
    assert code == 0


def test_verify_zero_trials(capsys, caplog):
    code, out, _ = run(capsys, "verify", "--trials", "0")
    assert code == 0
    assert "trials=0" in caplog.text


def test_verify_bad_dims(capsys):
    assert run(capsys, "verify", "--dims", "5")[0] == 1


def test_module_entry_point(files):
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "qent", "entropy", "--state", files["mixed"]],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "S=0.693147180560 S_q=1.386294361120"
