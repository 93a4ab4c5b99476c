import json

import pytest

from congrel.cli import main
from congrel.corpus import builtin_names


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_corpus_list(capsys):
    code, out, err = run(capsys, "corpus", "list")
    assert code == 0
    assert out.split() == builtin_names()


def test_corpus_list_json(capsys):
    code, out, _ = run(capsys, "corpus", "list", "--json")
    assert code == 0
    assert json.loads(out) == builtin_names()


def test_verify_wtip_exhaust_json(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "wtip",
                       "--strategy", "exhaust", "builtin:z4", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == "holds"
    assert doc["theorem"] == "wtip"
    assert doc["instances_checked"] == 9
    assert doc["elapsed_ms"] == 0
    assert doc["violations"] == []


def test_json_output_is_byte_identical_across_runs(capsys):
    argv = ["verify", "--strategy", "sample", "--seed", "5", "--samples", "10",
            "builtin:z4", "--json", "--jobs", "1"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    assert len(out1.strip().splitlines()) == 4


def test_verify_all_streams_four_reports(capsys):
    code, out, _ = run(capsys, "verify", "builtin:z2")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("subrel on z2: holds")
    assert lines[-1].startswith("rr on z2: holds")


def test_verify_exhaust_guard_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--theorem", "subrel",
                       "--strategy", "exhaust", "builtin:z4")
    assert code == 2
    assert "exhaust" in err


def test_check_hypothesis_negative_control(capsys):
    code, out, _ = run(capsys, "check-hypothesis", "builtin:pureset4")
    assert code == 1
    assert "fails" in out
    assert "hypothesis_inclusion" in out


def test_check_hypothesis_json_schema(capsys):
    code, out, _ = run(capsys, "check-hypothesis", "builtin:pureset4", "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["result"] == "fails"
    assert len(doc["violations"]) == 1
    v = doc["violations"][0]
    assert set(v["binding"]) == {"generators", "subsquare", "beta", "gamma", "delta"}
    assert v["failed_claim"] == "hypothesis_inclusion"


def test_check_modularity_positive(capsys):
    code, out, _ = run(capsys, "check-modularity", "builtin:z2")
    assert code == 0
    assert "holds" in out


def test_check_hypothesis_seed_limit(capsys):
    code, out, _ = run(capsys, "check-hypothesis", "builtin:z4",
                       "--seed-limit", "5", "--json")
    assert code == 0
    assert json.loads(out)["result"] == "holds"


def test_witness_text_and_json(capsys):
    argv = ["witness", "builtin:z4", "--alpha", "1", "--abc", "0,1,2",
            "--R", "principal:0,1", "--S", "principal:1,2"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.startswith("chain of")
    assert "revalidation: ok" in out
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == "chain"
    assert doc["chain"][0] == [0, 0]
    assert doc["chain"][-1] == [2, 2]
    assert set(doc["tags"]) <= {"x", "y"}


def test_witness_alpha_specs(capsys):
    for alpha in ("blocks:0,2|1,3", "cg:0,2", '{"partition": [[0,2],[1,3]]}'):
        code, out, _ = run(capsys, "witness", "builtin:z4", "--alpha", alpha,
                           "--abc", "0,1,2", "--R", '{"size":4,"pairs":[[0,1]],"reflexive_close":true}',
                           "--S", "principal:1,2")
        assert code == 0, alpha


def test_witness_no_chain_exits_one(capsys):
    code, out, _ = run(capsys, "witness", "builtin:pureset4",
                       "--alpha", "blocks:0,2|1,3", "--abc", "0,1,2",
                       "--R", "principal:0,1", "--S", "principal:1,2")
    assert code == 1
    assert out.startswith("no chain")


def test_witness_bad_inputs_exit_two(capsys):
    base = ["witness", "builtin:z4", "--abc", "0,1,2",
            "--R", "principal:0,1", "--S", "principal:1,2"]
    for alpha in ("blocks:0,1|2,3", "blocks:oops", "cg:9,0", "{]"):
        code, _, err = run(capsys, *base, "--alpha", alpha)
        assert code == 2, alpha
        assert err.startswith("error:")
    code, _, err = run(capsys, "witness", "builtin:z4", "--alpha", "1",
                       "--abc", "0,1", "--R", "principal:0,1", "--S", "principal:1,2")
    assert code == 2
    code, _, err = run(capsys, "witness", "builtin:z4", "--alpha", "0",
                       "--abc", "0,1,2", "--R", "principal:0,1", "--S", "principal:1,2")
    assert code == 2
    assert "alpha-related" in err


def test_search_exit_codes(capsys):
    code, out, _ = run(capsys, "search", "builtin:pureset3",
                       "--budget", "300", "--seed", "2")
    assert code == 1
    assert "violation" in out
    code, out, _ = run(capsys, "search", "builtin:z2",
                       "--budget", "100", "--seed", "1")
    assert code == 0
    assert "no counterexample" in out


def test_search_json(capsys):
    code, out, _ = run(capsys, "search", "builtin:z2", "--budget", "50",
                       "--seed", "1", "--json")
    assert code == 0
    assert json.loads(out)["violation"] is None


def test_eval_statement(capsys):
    code, out, _ = run(capsys, "eval",
                       "forall a:Cong, T:Tol . a & T* = (a & T)*", "builtin:z4")
    assert code == 0
    assert "holds" in out
    code, out, _ = run(capsys, "eval",
                       "forall R:Refl, S:Refl . R ; S = S ; R",
                       "builtin:pureset3")
    assert code == 1
    assert "fails" in out


def test_eval_parse_error(capsys):
    code, _, err = run(capsys, "eval", "forall a:Cong . b <= a", "builtin:z2")
    assert code == 2
    assert "undeclared variable" in err


def test_algebra_argument_errors(capsys):
    code, _, err = run(capsys, "verify", "builtin:nosuch")
    assert code == 2
    assert "unknown builtin" in err
    code, _, err = run(capsys, "verify", "/nonexistent/path.json")
    assert code == 2
    assert "cannot read" in err


def test_algebra_from_file(tmp_path, capsys):
    doc = {"name": "k2", "size": 2,
           "operations": [{"name": "mul", "arity": 2, "table": [0, 1, 1, 0]}]}
    path = tmp_path / "k2.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(path), "--strategy", "exhaust")
    assert code == 0
    assert "on k2: holds" in out


def test_relation_spec_errors(capsys):
    base = ["witness", "builtin:z4", "--alpha", "1", "--abc", "0,1,2",
            "--S", "principal:1,2"]
    for rel in ("principal:9,0", "principal:x", '{"size":3,"pairs":[]}', "{]"):
        code, _, err = run(capsys, *base, "--R", rel)
        assert code == 2, rel


def test_jobs_flag_smoke(capsys):
    code, out, _ = run(capsys, "verify", "--strategy", "principal",
                       "builtin:z4", "--jobs", "2")
    assert code == 0
    assert out.count("holds") == 4


def test_timings_flag_populates_elapsed(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "wtip", "builtin:z2",
                       "--json", "--timings")
    assert code == 0
    doc = json.loads(out)
    assert "elapsed_ms" in doc and doc["elapsed_ms"] >= 0


def test_argparse_errors_map_to_exit_two(capsys):
    assert main([]) == 2
    assert main(["verify"]) == 2
    assert main(["--help"]) == 0
    capsys.readouterr()
