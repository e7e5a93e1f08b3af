import io
import json
import zipfile

import pytest

import postedit


def bundle_bytes():
    manifest = {
        "format_version": 1,
        "project": {"id": "py", "name": "py", "source_lang": "en", "target_lang": "hi"},
        "page_count": 2,
        "pages": [
            {"index": 1, "source": "pages/001/source.txt", "target": "pages/001/target.txt"},
            {"index": 2, "source": "pages/002/source.txt", "target": "pages/002/target.txt"},
        ],
        "lexicons": ["lexicons/fin.tsv"],
    }
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as z:
        z.writestr("manifest.json", json.dumps(manifest))
        z.writestr("pages/001/source.txt", "The bank closed.")
        z.writestr("pages/001/target.txt", "बैंक बंद हुआ।")
        z.writestr("pages/002/source.txt", "Rates rose.")
        z.writestr("pages/002/target.txt", "दरें बढ़ीं।")
        z.writestr("lexicons/fin.tsv", "bank\tअधिकोष\n")
        z.writestr("alignments/p1s1.mat", "4 4\n0 0 0 0\n1 0 0 0\n0 1 0 0\n0 0 0 1\n")
    return buf.getvalue()


def test_text_helpers():
    assert postedit.slp1_to_devanagari("kfzRa") == "कृष्ण"
    assert [t[0] for t in postedit.tokenize("दर बढ़ी।")] == ["दर", "बढ़ी", "।"]
    assert postedit.split_sentences("Dr. Rao came. Go.", abbreviations=["Dr."]) == ["Dr. Rao came.", "Go."]
    with pytest.raises(postedit.Error):
        postedit.slp1_to_devanagari("$")


def test_alignment_and_diff():
    assert postedit.greedy_align([[0.9, 0.8], [0.8, 0.1]]) == [(0, 0), (1, 1)]
    assert postedit.intersect_align([[5, 0], [0, 5]], 0.5) == [(0, 0), (1, 1)]
    assert postedit.diff_patch("a b c", "a x c") == "a x c"
    assert postedit.diff("a b c", "a x c")[0]["old_text"] == "b"
    assert postedit.lexicon_matches("bank\tबैंक\nbank rate\tबैंक दर\n", "the bank rate") == [
        ("bank rate", ["बैंक दर"])]


def test_project_round_trip():
    p = postedit.Project.from_bundle(bundle_bytes())
    assert p.id == "py" and p.page_count == 2
    assert p.suggestions(1)[0]["proposed_text"] == "अधिकोष"
    p.set_text(2, "p2t1", "दर बढ़ीं।")
    rules = p.save_page(2)
    assert rules[0]["find"] == ["दरें"] and rules[0]["replace"] == "दर"
    assert p.preview_count([("बैंक", "अधिकोष")], "AllPages") == 1
    assert p.replace([("बैंक", "अधिकोष")], "AllPages") == 1
    p.advance(1, "Corrector")
    assert p.statuses() == ["Edited", "Unedited"]
    data = p.save()
    q = postedit.Project.from_archive(data)
    assert q == p and q.save() == data
    assert p.export("txt") == "अधिकोष बंद हुआ।\fदर बढ़ीं।"


def test_errors_carry_codes():
    p = postedit.Project.from_bundle(bundle_bytes())
    with pytest.raises(postedit.Error) as e:
        p.advance(1, "Verifier")
    assert e.value.args[0] == "IllegalTransition"
