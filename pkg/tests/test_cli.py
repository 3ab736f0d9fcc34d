import io
import json

from bitblast.cli import main, render_report_json, render_report_text, run_file


def run_cli(args):
    out, err = io.StringIO(), io.StringIO()
    rc = main(args, out=out, err=err)
    return rc, out.getvalue(), err.getvalue()


def test_logcount_file_proves(corpus):
    rc, out, _ = run_cli([str(corpus / "fast_logcount_32.lisp")])
    assert rc == 0
    assert "PROVED" in out and "fast-logcount-32-correct" in out


def test_buggy_file_disproves_with_three_counterexamples(corpus):
    rc, out, _ = run_cli([str(corpus / "fast_logcount_32_buggy.lisp"),
                          "--seed", "12"])
    assert rc == 1
    assert "DISPROVED" in out
    assert out.count("[zeros]") == 1 and out.count("[ones]") == 1
    assert out.count("[random]") >= 1
    assert "#x80000000" in out and "#xffffffff" in out
    assert "UNVERIFIED" not in out


def test_coverage_failure_exit_2(corpus):
    rc, out, _ = run_cli([str(corpus / "fast_logcount_32_cov32.lisp")])
    assert rc == 2
    assert "COVERAGE FAILED" in out
    assert "2147483648" in out and "#x80000000" in out


def test_indeterminate_exit_2(corpus):
    rc, out, _ = run_cli([str(corpus / "integer_half.lisp")])
    assert rc == 2
    assert "INDETERMINATE" in out and "binary-*" in out


def test_empty_file(tmp_path):
    f = tmp_path / "empty.lisp"
    f.write_text("")
    rc, out, _ = run_cli([str(f)])
    assert rc == 0
    assert "exit status 0" in out


def test_parse_error_exit_3(tmp_path):
    f = tmp_path / "bad.lisp"
    f.write_text("(defun broken (x)")
    rc, _, err = run_cli([str(f)])
    assert rc == 3
    assert "parse error" in err
    f.write_text("(unknown-top-form 1)")
    rc, _, err = run_cli([str(f)])
    assert rc == 3
    rc, _, err = run_cli(["/nonexistent/file.lisp"])
    assert rc == 3
    rc, _, err = run_cli([])
    assert rc == 3


def test_keep_going(tmp_path, corpus):
    src = (corpus / "integer_half.lisp").read_text()
    src += "\n(def-gl-thm trailing :hyp (unsigned-byte-p 2 y)" \
           " :concl (equal y y) :g-bindings `((y ,(g-int 0 1 3))))\n"
    f = tmp_path / "two.lisp"
    f.write_text(src)
    rc, out, _ = run_cli([str(f)])
    assert rc == 2
    assert "trailing" not in out  # stopped at first failure
    rc, out, _ = run_cli([str(f), "--keep-going"])
    assert rc == 2
    assert "trailing" in out and "PROVED" in out


def test_json_report_round_trips(corpus):
    rc, out, _ = run_cli([str(corpus / "fast_logcount_32_buggy.lisp"),
                          "--json"])
    assert rc == 1
    doc = json.loads(out)
    assert doc["exit_status"] == 1
    thm = [e for e in doc["events"] if e["kind"] == "theorem"][0]
    assert thm["result"]["status"] == "disproved"
    cxs = thm["result"]["counterexamples"]
    assert cxs[0]["policy"] == "zeros"
    assert cxs[0]["values"]["x"]["decimal"] == 0x80000000
    assert cxs[0]["values"]["x"]["hex"] == "#x80000000"
    assert all(cx["verified"] for cx in cxs)
    assert thm["wall_time"] >= 0 and thm["steps"] > 0 and thm["nodes"] > 0


def test_mode_flag_and_directives(tmp_path):
    f = tmp_path / "mode.lisp"
    f.write_text("""
(gl-aig-mode)
(def-gl-thm tiny :hyp (unsigned-byte-p 3 x)
  :concl (equal (logand x x) x)
  :g-bindings `((x ,(g-int 0 1 4))))
(gl-bdd-mode)
(def-gl-thm tiny2 :hyp (unsigned-byte-p 3 x)
  :concl (equal (logior x 0) x)
  :g-bindings `((x ,(g-int 0 1 4))))
""")
    rc, out, _ = run_cli([str(f)])
    assert rc == 0
    assert out.count("PROVED") == 2
    rc, out, _ = run_cli([str(f), "--mode", "aig"])
    assert rc == 0


def test_coverage_only_flag(corpus):
    rc, out, _ = run_cli([str(corpus / "fast_logcount_32.lisp"),
                          "--coverage-only"])
    assert rc == 0
    assert "COVERAGE OK" in out and "PROVED" not in out
    rc, out, _ = run_cli([str(corpus / "fast_logcount_32_cov32.lisp"),
                          "--coverage-only"])
    assert rc == 2
    assert "COVERAGE FAILED" in out


def test_trace_flag(tmp_path, capsys):
    f = tmp_path / "t.lisp"
    f.write_text("""
(def-gl-thm traced :hyp (unsigned-byte-p 3 x)
  :concl (equal (logcount x) (logcount x))
  :g-bindings `((x ,(g-int 0 1 4))))
""")
    rc, out, _ = run_cli([str(f), "--trace"])
    assert rc == 0
    captured = capsys.readouterr()
    assert "sym>" in captured.err and "logcount" in captured.err


def test_max_steps_flag(corpus):
    rc, out, _ = run_cli([str(corpus / "fast_logcount_32.lisp"),
                          "--max-steps", "10"])
    assert rc == 2
    assert "RESOURCE LIMIT" in out


def test_bad_preferred_def_is_an_event_error(tmp_path):
    f = tmp_path / "bad_pref.lisp"
    f.write_text("""
(defun double (x) (* 2 x))
(set-preferred-def double (+ x 1))
""")
    rc, out, _ = run_cli([str(f)])
    assert rc == 2
    assert "ERROR" in out


def test_solve_dimacs_flag(tmp_path):
    f = tmp_path / "sat.cnf"
    f.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    rc, out, _ = run_cli(["--solve-dimacs", str(f)])
    assert rc == 0
    assert "s SATISFIABLE" in out and "v " in out
    f.write_text("p cnf 1 2\n1 0\n-1 0\n")
    rc, out, _ = run_cli(["--solve-dimacs", str(f)])
    assert rc == 0
    assert "s UNSATISFIABLE" in out


def test_run_file_api(corpus):
    report = run_file(str(corpus / "alu_mode.lisp"))
    assert report.exit_status == 0
    kinds = [e.kind for e in report.events]
    assert kinds == ["defun", "theorem", "theorem"]
    assert render_report_text(report)
    json.loads(render_report_json(report))
