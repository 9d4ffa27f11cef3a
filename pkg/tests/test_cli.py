import os
from pathlib import Path

import numpy as np
import pytest

from conftest import compose_page
from swogr.cli import main
from swogr.engine import RecognizerConfig, recognize_page
from swogr.imageio import load_gray, save_gray
from swogr.raster import GrayImage
from swogr.swml import swml_parse, swml_serialize
from swogr.templates import render_template


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture()
def fixture_page(catalog, tmp_path):
    items = [(m, 1.0, 1, m.code) for m in catalog
             if m.template.orientation_steps == 1]
    page, _ = compose_page(items, cols=3, cell=160)
    path = tmp_path / "page.png"
    save_gray(path, page)
    return path


def test_recognize_blank_page(tmp_path, capsys):
    path = tmp_path / "blank.pgm"
    save_gray(path, GrayImage.blank(100, 80))
    code, out, err = run(["recognize", str(path)], capsys)
    assert code == 0
    doc = swml_parse((tmp_path / "blank.swml").read_bytes())
    assert doc.signboxes == ()
    assert "0 glyphs" in out


def test_recognize_matches_library(fixture_page, catalog, capsys):
    code, out, _ = run(["recognize", str(fixture_page)], capsys)
    assert code == 0
    expected = swml_serialize(
        recognize_page(load_gray(fixture_page), catalog,
                       RecognizerConfig()).to_document(fixture_page.name))
    assert fixture_page.with_suffix(".swml").read_bytes() == expected


def test_recognize_missing_file(tmp_path, capsys):
    code, out, err = run(["recognize", str(tmp_path / "nope.png")], capsys)
    assert code == 2
    assert err != ""


def test_recognize_annotate_writes_png(fixture_page, capsys):
    code, _, _ = run(["recognize", str(fixture_page), "--annotate"], capsys)
    assert code == 0
    assert fixture_page.with_suffix(".ogr.png").exists()


def test_recognize_flag_overrides_config(fixture_page, tmp_path, capsys):
    conf = tmp_path / "swogr.conf"
    conf.write_text("min_area = 100000\n")  # suppresses every component
    code, out, _ = run(["recognize", str(fixture_page), "--config", str(conf)], capsys)
    assert code == 0
    assert "0 glyphs" in out
    code, out, _ = run(["recognize", str(fixture_page), "--config", str(conf),
                        "--min-area", "16"], capsys)
    assert code == 0
    assert "0 glyphs" not in out


def test_batch_empty_dir(tmp_path, capsys):
    code, out, _ = run(["batch", str(tmp_path)], capsys)
    assert code == 0
    assert "0 ok, 0 failed" in out


def test_batch_missing_dir(tmp_path, capsys):
    code, _, err = run(["batch", str(tmp_path / "missing")], capsys)
    assert code == 2


def test_batch_matches_single_runs(catalog, tmp_path, capsys):
    single = tmp_path / "single"
    batched = tmp_path / "batched"
    single.mkdir()
    batched.mkdir()
    metas = [m for m in catalog if m.template.orientation_steps == 1]
    for i, meta in enumerate(metas):
        page, _ = compose_page([(meta, 1.0, 1, meta.code)], cols=1, cell=160)
        for root in (single, batched):
            save_gray(root / f"p{i}.png", page)
    for i in range(len(metas)):
        assert run(["recognize", str(single / f"p{i}.png")], capsys)[0] == 0
    code, out, _ = run(["batch", str(batched)], capsys)
    assert code == 0
    assert f"{len(metas)} ok, 0 failed" in out
    for i in range(len(metas)):
        assert ((single / f"p{i}.swml").read_bytes()
                == (batched / f"p{i}.swml").read_bytes())


def test_batch_jobs_equivalent(catalog, tmp_path, capsys):
    seq = tmp_path / "seq"
    par = tmp_path / "par"
    seq.mkdir()
    par.mkdir()
    metas = list(catalog)
    for i, meta in enumerate(metas):
        page, _ = compose_page([(meta, 1.0, 1, meta.code)], cols=1, cell=160)
        save_gray(seq / f"p{i}.png", page)
        save_gray(par / f"p{i}.png", page)
    code_a, out_a, _ = run(["batch", str(seq)], capsys)
    code_b, out_b, _ = run(["batch", str(par), "--jobs", "4"], capsys)
    assert code_a == code_b == 0
    assert out_a.replace(str(seq), "") == out_b.replace(str(par), "")
    for i in range(len(metas)):
        assert ((seq / f"p{i}.swml").read_bytes()
                == (par / f"p{i}.swml").read_bytes())


def test_batch_partial_failure(catalog, tmp_path, capsys):
    for i, meta in enumerate(list(catalog)[:4]):
        page, _ = compose_page([(meta, 1.0, 1, meta.code)], cols=1, cell=160)
        save_gray(tmp_path / f"p{i}.png", page)
    (tmp_path / "broken.png").write_bytes(b"not a png at all")
    code, out, err = run(["batch", str(tmp_path)], capsys)
    assert code == 1
    assert "4 ok, 1 failed" in out
    assert "broken.png" in err


def test_eval_identical_files(fixture_page, tmp_path, capsys):
    run(["recognize", str(fixture_page)], capsys)
    swml = fixture_page.with_suffix(".swml")
    code, out, _ = run(["eval", str(swml), str(swml)], capsys)
    assert code == 0
    assert "EVAL\t" in out
    machine = [l for l in out.splitlines() if l.startswith("EVAL\t")][0]
    assert "precision=1.0000" in machine
    assert "recall=1.0000" in machine


def test_eval_parse_failure(tmp_path, capsys):
    bad = tmp_path / "bad.swml"
    bad.write_text("<swml")
    code, _, err = run(["eval", str(bad), str(bad)], capsys)
    assert code == 2


def test_render_then_recognize_round_trip(catalog, tmp_path, capsys):
    out_path = tmp_path / "head.png"
    code, out, _ = run(["render", "04-01-001-01-01-01", str(out_path)], capsys)
    assert code == 0
    outcome = recognize_page(load_gray(out_path), catalog, RecognizerConfig())
    assert len(outcome.glyphs) == 1
    assert str(outcome.glyphs[0].code) == "04-01-001-01-01-01"


def test_render_rotated_arrow(catalog, tmp_path, capsys):
    out_path = tmp_path / "arrow.png"
    code, _, _ = run(["render", "02-01-001-01-02-04", str(out_path)], capsys)
    assert code == 0
    outcome = recognize_page(load_gray(out_path), catalog, RecognizerConfig())
    assert str(outcome.glyphs[0].code) == "02-01-001-01-02-04"


def test_render_unknown_symbol(tmp_path, capsys):
    code, _, err = run(["render", "07-07-007-01-01-01", str(tmp_path / "x.png")], capsys)
    assert code == 4


def test_render_malformed_code(tmp_path, capsys):
    code, _, err = run(["render", "not-a-code", str(tmp_path / "x.png")], capsys)
    assert code == 2


def test_catalog_lookup(capsys):
    code, out, _ = run(["catalog", "lookup", "04-01-001-01-01-01"], capsys)
    assert code == 0
    assert "category_name: head/faces" in out


def test_catalog_lookup_unknown(capsys):
    code, _, _ = run(["catalog", "lookup", "07-07-007-01-01-01"], capsys)
    assert code == 4


def test_catalog_list_filters(capsys):
    code, out, _ = run(["catalog", "list", "--category", "1"], capsys)
    assert code == 0
    lines = [l for l in out.splitlines() if l]
    assert len(lines) == 3
    assert all(l.startswith("01-") for l in lines)


def test_catalog_list_bad_category(capsys):
    code, _, err = run(["catalog", "list", "--category", "9"], capsys)
    assert code == 2


def test_env_catalog_override(catalog, tmp_path, capsys, monkeypatch):
    custom = tmp_path / "tiny.txt"
    custom.write_text("04-01-001-01-01-01|noggin|head/faces|circle_outline|60|1\n")
    monkeypatch.setenv("SWOGR_CATALOG", str(custom))
    code, out, _ = run(["catalog", "lookup", "04-01-001-01-01-01"], capsys)
    assert code == 0
    assert "name: noggin" in out
