"""Drives the postedit binary end to end in a scratch workspace."""
import io
import json
import os
import subprocess
import sys
import tempfile
import zipfile

BIN = sys.argv[1]


def bundle(path):
    manifest = {
        "format_version": 1,
        "project": {"id": "cli", "name": "cli", "source_lang": "en", "target_lang": "hi"},
        "page_count": 2,
        "pages": [
            {"index": 1, "source": "pages/001/source.txt", "target": "pages/001/target.txt"},
            {"index": 2, "source": "pages/002/source.txt", "target": "pages/002/target.txt"},
        ],
        "lexicons": [],
    }
    with zipfile.ZipFile(path, "w") as z:
        z.writestr("manifest.json", json.dumps(manifest))
        z.writestr("pages/001/source.txt", "The bank rate rose. It was high.")
        z.writestr("pages/001/target.txt", "बैंक दर बढ़ी। यह ऊँची थी।")
        z.writestr("pages/002/source.txt", "The bank closed.")
        z.writestr("pages/002/target.txt", "बैंक बंद हुआ।")


def run(ws, *args, rc=0):
    p = subprocess.run([BIN, "--workspace", ws, "--author", "cli", *args],
                       capture_output=True, text=True)
    assert p.returncode == rc, (args, p.returncode, p.stdout, p.stderr)
    return p.stdout


def main():
    with tempfile.TemporaryDirectory() as tmp:
        ws = os.path.join(tmp, "ws")
        zpath = os.path.join(tmp, "b.zip")
        bundle(zpath)

        assert run(ws, "ingest", zpath).strip() == "cli"
        run(ws, "ingest", zpath, rc=5)
        run(ws, "--project", "nope", "stats", rc=3)
        run(ws, "bogus-subcommand", rc=2)

        links = run(ws, "align", "1").splitlines()
        assert [l.split("\t")[:2] for l in links] == [["p1s1", "p1t1"], ["p1s2", "p1t2"]], links

        tm = os.path.join(tmp, "tm.tsv")
        with open(tm, "w", encoding="utf-8") as f:
            f.write("old\tnew\tproject\ttimestamp\nबैंक\tअधिकोष\tx\t1\n")
        assert run(ws, "apply-tm", tm).strip() == "2 replacements"

        out = os.path.join(tmp, "out.txt")
        run(ws, "export", "txt", out)
        with open(out, encoding="utf-8") as f:
            assert f.read() == "अधिकोष दर बढ़ी।\nयह ऊँची थी।\fअधिकोष बंद हुआ।"
        run(ws, "export", "docx", out, rc=2)

        run(ws, "export-tm", os.path.join(tmp, "tm-out.tsv"))
        stats = run(ws, "stats")
        assert stats.startswith("page\tedits\tactive_s\n"), stats

        head = run(ws, "snapshot", "-m", "first").strip()
        assert len(head) == 64
        remote = os.path.join(tmp, "remote")
        os.mkdir(remote)
        assert run(ws, "sync", "push", "--remote", remote).split() == ["fast-forward", head]
        assert run(ws, "sync", "pull", "--remote", remote).split() == ["up-to-date", head]
        run(ws, "sync", "pull", "--remote", os.path.join(tmp, "missing"), rc=6)

        assert run(ws, "slp1", "rAmaH", "vanam").strip() == "रामः वनम्"
    print("cli ok")


if __name__ == "__main__":
    main()
