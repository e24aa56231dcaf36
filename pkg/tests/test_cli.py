import json

import pytest

from cyclic_mip.cli import run
from cyclic_mip.recover import Fingerprint


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_table1(capsys):
    code, out, _ = call(capsys, "table1", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["ok"] and len(d["rows"]) == 6
    vals = {(r["q"], r["r"]): (r["fh"], r["gh"]) for r in d["rows"]}
    assert vals[(4, 6)] == (2197504, 2000896)
    code, out, _ = call(capsys, "table1", "--csv")
    assert code == 0 and out.splitlines()[0].startswith("q,r,")


def test_table1_mismatch_exit(capsys, monkeypatch):
    import cyclic_mip.varieties as v

    monkeypatch.setitem(v.TABLE1, (4, 3), (737, 352))
    code, out, _ = call(capsys, "table1")
    assert code == 1 and "MISMATCH" in out


def test_verdict(capsys):
    code, out, _ = call(capsys, "verdict", "--a", "Q p=2 [(2,2)] []", "--b", "R p=2 n=2 []", "--field", "2")
    assert code == 0 and out.startswith("DistinguishedBy(arf_class)")
    code, out, _ = call(capsys, "verdict", "--a", "Q p=2 [] [1,1]", "--b", "R p=2 n=1 [1]", "--field", "4", "--json")
    assert json.loads(out)["invariant"] == "variety_cardinality"


def test_verify_lemma(capsys):
    code, out, _ = call(capsys, "verify-lemma", "--name", "3.2", "--spec", "Q p=3 [(3,1)] []")
    assert code == 0
    assert out.startswith("PASS 3.2") and "t_values=[1, 2, 3]" in out


def test_fingerprint_and_recover_from_file(capsys, tmp_path):
    code, out, _ = call(capsys, "fingerprint", "--spec", "R p=2 n=2 [1]", "--field", "2", "--json")
    assert code == 0
    fp = Fingerprint.from_json(out)
    assert fp.arf_class == 1
    path = tmp_path / "fp.json"
    path.write_text(out)
    code, out, _ = call(capsys, "recover", "--fingerprint", str(path), "--json")
    assert code == 0 and json.loads(out) == {"result": "spec", "spec": "R p=2 n=2 [1]"}
    code, out, _ = call(capsys, "recover", "--spec", "Q p=3 [(3,1)] []")
    assert code == 0 and "round trip: ok" in out


def test_group_info(capsys):
    code, out, _ = call(capsys, "group-info", "--spec", "Q p=2 [(3,1)] [2]", "--json", "--deep")
    d = json.loads(out)
    assert code == 0 and d["L"] == [2, 1] and d["enumeration_check"] == "agrees"


def test_count_varieties(capsys):
    code, out, _ = call(capsys, "count-varieties", "--q", "4", "--r", "3", "--pair", "gh", "--method", "brute", "--json")
    assert code == 0 and json.loads(out)["count"] == 352
    code, out, _ = call(capsys, "count-varieties", "--q", "16", "--r", "4")
    assert code == 0 and out.strip().endswith("19588096")


def test_arf_discriminate(capsys):
    code, out, _ = call(capsys, "arf-discriminate", "--spec", "R p=2 n=2 []", "--field", "2", "--json")
    d = json.loads(out)
    assert code == 0 and d["arf_class"] == 1 and d["predicted_form"] == "R"
    code, out, _ = call(capsys, "arf-discriminate", "--form", "sum{x1*y1,x2*y2}")
    assert code == 0 and "class: 0" in out


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["frobnicate"], "invalid choice"),
        (["group-info", "--spec", "Q p=2 [(2"], "malformed spec string"),
        (["group-info", "--spec", "Q p=2 [(2,1)] [1]"], "invalid group parameters"),
        (["count-varieties", "--q", "16", "--r", "6", "--method", "brute"], "bound exceeded"),
        (["verify-lemma", "--name", "9.9"], "unknown lemma"),
        (["recover"], "exactly one"),
        (["count-varieties", "--q", "6", "--r", "2"], "--field 6"),
    ],
)
def test_usage_errors(capsys, argv, needle):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert needle in err


def test_deterministic_output(capsys):
    argv = ["verify-lemma", "--name", "2.3", "--spec", "R p=2 n=2 [1]", "--seed", "7", "--json"]
    _, a, _ = call(capsys, *argv)
    _, b, _ = call(capsys, *argv)
    assert a == b
    _, a, _ = call(capsys, "fingerprint", "--spec", "Q p=2 [] [1,1]", "--field", "4", "--json")
    _, b, _ = call(capsys, "fingerprint", "--spec", "Q p=2 [] [1,1]", "--field", "4", "--json")
    assert a == b and json.loads(a)["variety_cardinality"] == 64
