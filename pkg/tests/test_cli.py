import importlib.resources as resources

import pytest

from bac import cli, serde
from bac.core import symbols

from _structures import SEG


@pytest.fixture
def seg_file(tmp_path):
    p = tmp_path / "seg.bac"
    p.write_text(serde.dumps(SEG) + "\n")
    return p


def data_path(name):
    return resources.files("bac").joinpath("data", name)


class TestValidate:
    def test_valid_file(self, seg_file, capsys):
        assert cli.main(["validate", str(seg_file)]) == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_law_failure(self, tmp_path, capsys):
        p = tmp_path / "broken.bac"
        p.write_text("[{0->1,1->2} [{0->1} [],{0->2} []]]\n")
        assert cli.main(["validate", str(p)]) == 1
        assert "Totality" in capsys.readouterr().out

    def test_syntax_failure(self, tmp_path, capsys):
        p = tmp_path / "broken.bac"
        p.write_text("[{0->} []]\n")
        assert cli.main(["validate", str(p)]) == 2
        assert "SyntaxError" in capsys.readouterr().out

    def test_bundled_fixtures_valid(self, capsys):
        for name in ("seg.bac", "cone.bac"):
            assert cli.main(["validate", str(data_path(name))]) == 0


class TestShowDraw:
    def test_show(self, seg_file, capsys):
        assert cli.main(["show", str(seg_file)]) == 0
        out = capsys.readouterr().out
        assert serde.dumps(SEG) in out
        assert "symbols {0,1,2,3}" in out

    def test_draw_seg(self, seg_file, tmp_path, capsys):
        out = tmp_path / "seg.dot"
        assert cli.main(["draw", str(seg_file), "-o", str(out)]) == 0
        dot = out.read_text()
        assert sum(1 for line in dot.splitlines() if "shape=box" in line) == 3
        assert sum(1 for line in dot.splitlines() if " -> " in line) == 3

    def test_draw_cone_seven_poles(self, tmp_path):
        out = tmp_path / "cone.dot"
        assert cli.main(["draw", str(data_path("cone.bac")), "-o", str(out)]) == 0
        dot = out.read_text()
        assert sum(1 for line in dot.splitlines() if "shape=box" in line) == 7


class TestApply:
    def run(self, tmp_path, capsys, text, extra=()):
        script = tmp_path / "s.bacs"
        script.write_text(text)
        code = cli.main(["apply", str(script), *extra])
        return code, capsys.readouterr().out

    def test_new_show(self, tmp_path, capsys):
        code, out = self.run(tmp_path, capsys, "new A empty\nshow A\n")
        assert code == 0
        assert "[]" in out
        assert "symbols {0}" in out

    def test_error_names_line_and_code(self, tmp_path, capsys):
        text = "load A seg.bac\nremove-nd A 0 2\n"
        (tmp_path / "seg.bac").write_text(serde.dumps(SEG) + "\n")
        code, out = self.run(tmp_path, capsys, text)
        assert code == 1
        assert "error line 2: NotNondecomposable" in out

    def test_stops_at_first_error(self, tmp_path, capsys):
        code, out = self.run(tmp_path, capsys, "new A empty\nremove-leaf A 7\nshow A\n")
        assert code == 1
        assert "show" not in out

    def test_keep_going(self, tmp_path, capsys):
        code, out = self.run(
            tmp_path, capsys, "new A empty\nremove-leaf A 7\nshow A\n", ["--keep-going"]
        )
        assert code == 1
        assert "ok line 3: show A" in out

    def test_syntax_exit_2(self, tmp_path, capsys):
        code, out = self.run(tmp_path, capsys, "frobnicate A\n")
        assert code == 2
        assert "SyntaxError" in out

    def test_transactional_line(self, tmp_path, capsys):
        # the failing line leaves the slot untouched
        text = "new A singleton 1\nremove-leaf A 7\nshow A\n"
        code, out = self.run(tmp_path, capsys, text, ["--keep-going"])
        assert code == 1
        assert "[{0->1} []]" in out

    def test_save_and_dry_run(self, tmp_path, capsys):
        text = "new A singleton 3\nsave A out.bac\n"
        code, _ = self.run(tmp_path, capsys, text)
        assert code == 0
        assert (tmp_path / "out.bac").read_text() == "[{0->3} []]\n"
        (tmp_path / "out.bac").unlink()
        code, _ = self.run(tmp_path, capsys, text, ["--dry-run"])
        assert code == 0
        assert not (tmp_path / "out.bac").exists()

    def test_aliases_expand(self, tmp_path, capsys):
        text = (
            "nullitope A\n"
            "introduce A 1\n"
            "introduce A 2\n"
            "incident A 1 2 1 --coangle 0,1:0,2\n"
            "unincident A 1 1\n"
            "connect A 0 1,2 1\n"
            "show A\n"
        )
        code, out = self.run(tmp_path, capsys, text)
        assert code == 0
        assert "[{0->1} []]" in out

    def test_candidates_and_partitions(self, tmp_path, capsys):
        (tmp_path / "seg.bac").write_text(serde.dumps(SEG) + "\n")
        text = (
            "new A singleton 1\n"
            "introduce A 2\n"
            "candidates A 1 2\n"
            "load S seg.bac\n"
            "partition-prefix S 2\n"
            "partition-syms S\n"
        )
        code, out = self.run(tmp_path, capsys, text)
        assert code == 0
        assert "coangle[0]: 0,1:0,2" in out
        assert "group: 1,1" in out
        assert "group: 1,2,3" in out

    def test_split_and_merge_commands(self, tmp_path, capsys):
        text = (
            "new A singleton 1\n"
            "duplicate-sym A 0 1 1,2\n"
            "split-root A B=1 C=2\n"
            "show B\n"
            "merge-roots B C\n"
            "merge-syms B 0 1,2 1\n"
            "show B\n"
        )
        code, out = self.run(tmp_path, capsys, text)
        assert code == 0
        assert "[{0->1} []]" in out

    def test_ball_intersection_script(self, capsys):
        code = cli.main(["apply", str(data_path("ball-intersection.bacs"))])
        out = capsys.readouterr().out
        assert code == 0
        assert "error" not in out
        # one volume, two caps, one circle
        final = out.strip().splitlines()[-2]
        node = serde.loads(final)
        assert len(symbols(node)) == 5
        caps = [s for s in symbols(node) if s in (7, 10)]
        assert caps == [7, 10]

    def test_determinism(self, capsys):
        code1 = cli.main(["apply", str(data_path("ball-intersection.bacs"))])
        out1 = capsys.readouterr().out
        code2 = cli.main(["apply", str(data_path("ball-intersection.bacs"))])
        out2 = capsys.readouterr().out
        assert (code1, out1) == (code2, out2)


class TestRepl:
    def test_reads_stdin(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO("new A singleton 2\nshow A\n"))
        code = cli.main(["repl"])
        out = capsys.readouterr().out
        assert code == 0
        assert "[{0->2} []]" in out

    def test_keeps_going_after_errors(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO("remove-leaf A 1\nnew A empty\nshow A\n"))
        code = cli.main(["repl"])
        out = capsys.readouterr().out
        assert code == 1
        assert "symbols {0}" in out
