import json

import pytest

from algred.cli import EXIT_INVALID, EXIT_OK, EXIT_PROPERTY, run
from algred.parsing import parse_poly, parse_scalar
from algred.scenario import ScenarioError, bundled, load_scenario, parse_scenario

FREE = """\
[space]
pairs = p q
[lie]
basis = t
[momentum]
t = p^2/2
[chart]
dp = q
[polarization]
span = q
"""


def write(tmp_path, text, name="s.scn"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def report(argv, capsys):
    rep, code = run(argv)
    out = capsys.readouterr()
    return rep, code, out


def test_bundled_scenarios_load():
    for name in ("free_particle", "shifted_orbit", "linear_momentum", "sl2_plane", "iso_two_halves",
                 "iso_spin1_half", "iso_singlet", "iso_trivial"):
        sc = load_scenario(bundled(name))
        assert sc.lie.dim >= 1
        assert sc.momentum is not None or sc.rep_H is not None


def test_parse_error_has_line_and_column():
    text = FREE.replace("t = p^2/2", "t = p^2 +* q")
    with pytest.raises(ScenarioError) as e:
        parse_scenario(text, "bad.scn")
    assert (e.value.line, e.value.col) == (6, 10)
    assert str(e.value).startswith("bad.scn:6:10:")


def test_wrong_curvature_rejected():
    with pytest.raises(ScenarioError, match="curvature convention"):
        parse_scenario(FREE.replace("dp = q", "dq = p"))


def test_empty_momentum_rejected():
    with pytest.raises(ScenarioError, match="momentum"):
        parse_scenario(FREE.replace("t = p^2/2\n", ""))


def test_equivariance_failure_named():
    text = """\
[space]
pairs = p q
[lie]
basis = a b
bracket(a, b) = a
[momentum]
a = p
b = q
"""
    with pytest.raises(ScenarioError, match=r"equivariance \{J_xi,J_zeta\}=J_\[xi,zeta\] fails for \(a,b\)"):
        parse_scenario(text)


def test_non_lagrangian_polarization_rejected():
    text = FREE.replace("pairs = p q", "pairs = p1 q1, p2 q2").replace("p^2/2", "p1^2/2") \
        .replace("dp = q", "dp1 = q1\ndp2 = q2").replace("span = q", "span = p1 q1")
    with pytest.raises(ScenarioError, match="Lagrangian"):
        parse_scenario(text)


def test_unknown_section_rejected():
    with pytest.raises(ScenarioError, match="section"):
        parse_scenario(FREE + "[extra]\nx = 1\n")


def test_missing_file_exit_code(capsys):
    rep, code, out = report(["reduce", "--scenario", "/nonexistent.scn"], capsys)
    assert code == EXIT_INVALID and rep is None
    assert "cannot read scenario" in out.err


def test_reduce_free_particle(capsys):
    rep, code, _ = report(["reduce", "--scenario", str(bundled("free_particle"))], capsys)
    assert code == EXIT_OK
    r = rep["result"]
    assert r["invariant_basis"] == ["1", "p", "p*q", "p*q^2"]
    assert r["quotient_identification"] == "h1(q) + p*h2(q)"
    assert r["ideal_basis"] == ["p^2"]


def test_reduce_shifted_orbit(capsys):
    rep, code, _ = report(["reduce", "--scenario", str(bundled("shifted_orbit"))], capsys)
    assert code == EXIT_OK
    r = rep["result"]
    assert r["invariant_basis"] == ["1", "p"]
    assert rep["checks"]["shifted_orbit_consistency"] is True


def test_reduce_trivial_momentum(tmp_path, capsys):
    path = write(tmp_path, FREE.replace("t = p^2/2", "t = 0"))
    rep, code, _ = report(["reduce", "--scenario", path, "--degree", "2"], capsys)
    assert code == EXIT_OK
    assert rep["result"]["ideal_basis"] == []
    assert rep["result"]["invariant_basis"] == ["1", "q", "p", "q^2", "p*q", "p^2"]


def test_quantize_classes(capsys):
    path = str(bundled("free_particle"))
    rep, code, _ = report(["quantize", "--scenario", path], capsys)
    assert code == EXIT_OK
    assert rep["result"]["symbolic_matrix"] == [["a", "0"], ["b", "a + i*hbar*c"]]
    assert any("reference_form" in c for c in rep["conventions"])
    rep, code, _ = report(["quantize", "--scenario", path, "--class", "1"], capsys)
    assert rep["result"]["class"]["matrix"] == [["1", "0"], ["0", "1"]]
    rep, code, _ = report(["quantize", "--scenario", path, "--class", "p + 5*p^2 + p^3*q"], capsys)
    assert rep["result"]["class"]["matrix"] == [["0", "0"], ["1", "0"]]
    rep, code, out = report(["quantize", "--scenario", path, "--class", "q"], capsys)
    assert code == EXIT_INVALID and "not invariant" in out.err


def test_kernel_reports(capsys):
    rep, code, _ = report(["kernel", "--scenario", str(bundled("free_particle"))], capsys)
    assert code == EXIT_OK
    assert rep["result"]["kernel"] == ["delta(p)", "delta'(p)"]
    assert rep["result"]["pairing_matrix"] == [["1", "0"], ["0", "-1"]]
    assert rep["result"]["actions"]["3*p + 2"]["matrix"] == [["2", "-3"], ["0", "2"]]
    rep, _, _ = report(["kernel", "--scenario", str(bundled("linear_momentum"))], capsys)
    assert rep["result"]["kernel"] == ["delta(p)"]
    rep, _, _ = report(["kernel", "--scenario", str(bundled("shifted_orbit"))], capsys)
    assert rep["result"]["kernel"] == ["delta(p + 1)", "delta(p - 1)"]


def test_kernel_rejects_leaf_dependent_momentum(tmp_path, capsys):
    path = write(tmp_path, FREE.replace("t = p^2/2", "t = p*q"))
    rep, code, out = report(["kernel", "--scenario", path], capsys)
    assert code == EXIT_INVALID and "constant along" in out.err


@pytest.mark.parametrize("name,mult", [("iso_two_halves", 2), ("iso_spin1_half", 0), ("iso_singlet", 1),
                                       ("iso_trivial", 1)])
def test_isotypic_reports(name, mult, capsys):
    rep, code, _ = report(["isotypic", "--scenario", str(bundled(name))], capsys)
    assert code == EXIT_OK
    assert rep["result"]["multiplicity"] == mult
    assert rep["checks"]["idempotent"] and rep["checks"]["commutes_with_generators"]


def test_isotypic_needs_reps(capsys):
    rep, code, out = report(["isotypic", "--scenario", str(bundled("free_particle"))], capsys)
    assert code == EXIT_INVALID


def test_verify_exit_code_and_unknown_suite(capsys):
    path = str(bundled("free_particle"))
    rep, code, _ = report(["verify", "--scenario", path, "--suite", "symplectic"], capsys)
    assert code == EXIT_OK
    rep, code, _ = report(["verify", "--scenario", path, "--suite", "quantization"], capsys)
    assert code == EXIT_PROPERTY
    props = {p["name"]: p for p in rep["result"]["properties"]["quantization"]}
    assert props["commutator_identity_plus_i_hbar"]["passed"]
    assert not props["commutator_zero_defect_minus_i_hbar"]["passed"]
    rep, code, _ = report(["verify", "--scenario", path, "--suite", "bogus"], capsys)
    assert code == EXIT_INVALID


@pytest.mark.parametrize("cmd", ["reduce", "quantize", "kernel"])
def test_reports_are_byte_identical(cmd, tmp_path, capsys):
    path = str(bundled("free_particle"))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run([cmd, "--scenario", path, "--out", str(a)])
    run([cmd, "--scenario", path, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def _strings(x):
    if isinstance(x, str):
        yield x
    elif isinstance(x, list):
        for y in x:
            yield from _strings(y)
    elif isinstance(x, dict):
        for y in x.values():
            yield from _strings(y)


def test_printed_polynomials_reparse(capsys):
    rep, _, _ = report(["reduce", "--scenario", str(bundled("free_particle"))], capsys)
    vars = ("p", "q")
    for key in ("invariant_basis", "normalizer_basis", "quotient_monomials", "ideal_basis"):
        for s in rep["result"][key]:
            assert str(parse_poly(s, vars)) == s
    for row in rep["result"]["bracket_table"]:
        for s in row.values():
            assert str(parse_poly(s, vars)) == s
    rep, _, _ = report(["quantize", "--scenario", str(bundled("free_particle"))], capsys)
    for row in rep["result"]["symbolic_matrix"]:
        for s in row:
            assert str(parse_poly(s, ("a", "b", "c"))) == s
    rep, _, _ = report(["isotypic", "--scenario", str(bundled("iso_singlet"))], capsys)
    for row in rep["result"]["projector"]:
        for s in row:
            assert str(parse_scalar(s)) == s


def test_console_output_is_sorted_json(capsys):
    run(["reduce", "--scenario", str(bundled("free_particle"))])
    text = capsys.readouterr().out
    data = json.loads(text)
    assert text == json.dumps(data, sort_keys=True, indent=2) + "\n"
