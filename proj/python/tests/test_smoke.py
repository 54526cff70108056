import json

import pytest

import structlaws


def test_bundles_listed():
    names = structlaws.bundle_names()
    assert names[0] == "peano"
    assert len(names) == 7


def test_peano_normalize():
    b = structlaws.Bundle("peano")
    t = "(aux mul () (op s (op s (op z))) ((op s (op s (op s (op z))))))"
    assert structlaws.peano_value(t) == 6
    assert b.normalize(t) == "(op s " * 6 + "(op z)" + ")" * 6


def test_layers():
    assert structlaws.Bundle("peano").layer_widths == [1, 1]
    assert structlaws.Bundle("difflambda").layer_widths[0] == 4
    assert not structlaws.Bundle("lambda-debruijn").scoped


def test_presheaf_substitution_under_binder():
    b = structlaws.Bundle("lambda-presheaf")
    t = "(aux subst () (op lam (var v 1)) ((env (var v 0))))"
    assert b.normalize(t, ctx=[1]) == "(op lam (var v 1))"


def test_enumerate_closed_peano():
    b = structlaws.Bundle("peano")
    assert b.enumerate("nat", 2) == ["(op z)", "(op s (op z))"]


def test_crosscheck_report():
    r = structlaws.Bundle("sharing").crosscheck(size=3)
    assert r["status"] == "pass"
    assert r["instances"] > 0


def test_errors_are_typed():
    b = structlaws.Bundle("peano")
    with pytest.raises(structlaws.ParseError):
        b.normalize("(op s")
    with pytest.raises(structlaws.Error):
        structlaws.Bundle("nope")


def test_cli_json():
    code, out, err = structlaws.run_cli(["check", "benign", "--bundle", "peano", "--size", "0", "--json"])
    assert code == 0, err
    report = json.loads(out)
    assert report["suite"] == "benign"
    assert report["instances"] == 0


def test_cli_stdin_term():
    code, out, _ = structlaws.run_cli(["eval", "--bundle", "peano", "--term", "-"],
                                      stdin="(aux add ()\n  (op s (op z))\n  ((op z)))\n")
    assert code == 0
    assert out == "(op s (op z))\n"
