import random

import pytest

from swogr.codes import FIELD_MAX, IswaCode
from swogr.errors import SchemaViolation, SwmlParseError
from swogr.swml import (Glyph, SignBox, Source, SwmlDocument,
                        document_from_json, document_to_json, swml_parse,
                        swml_serialize)


def random_document(rng: random.Random) -> SwmlDocument:
    width = rng.randint(200, 2000)
    height = rng.randint(200, 2000)
    boxes = []
    for box_id in range(1, rng.randint(0, 6) + 1):
        bw = rng.randint(40, 200)
        bh = rng.randint(40, 200)
        bx = rng.randint(0, width - bw)
        by = rng.randint(0, height - bh)
        glyphs = []
        for _ in range(rng.randint(1, 5)):
            gw = rng.randint(1, bw)
            gh = rng.randint(1, bh)
            gx = rng.randint(0, bw - gw)
            gy = rng.randint(0, bh - gh)
            code = IswaCode(*(rng.randint(1, upper) for upper in FIELD_MAX))
            glyphs.append(Glyph(code, (gx, gy, gw, gh), rng.random()))
        boxes.append(SignBox(box_id, (bx, by, bw, bh), tuple(glyphs)))
    unrecognized = []
    for _ in range(rng.randint(0, 4)):
        uw = rng.randint(1, 50)
        uh = rng.randint(1, 50)
        unrecognized.append((rng.randint(0, width - uw), rng.randint(0, height - uh), uw, uh))
    name = rng.choice(["page.png", "scan 7.pgm", 'odd"name&<>.png'])
    return SwmlDocument(Source(name, width, height), tuple(boxes), tuple(unrecognized))


def small_doc():
    glyph = Glyph(IswaCode(4, 1, 1, 1, 1, 1), (10, 0, 64, 64), 0.92)
    box = SignBox(1, (40, 32, 120, 180), (glyph,))
    return SwmlDocument(Source("page.png", 800, 600), (box,), ((500, 410, 22, 19),))


def test_empty_document_serializes_to_source_only():
    doc = SwmlDocument(Source("blank.png", 100, 80))
    data = swml_serialize(doc)
    assert data == (b'<swml version="1.0">\n'
                    b'  <source image="blank.png" width="100" height="80"/>\n'
                    b'</swml>\n')
    assert swml_parse(data) == doc


def test_single_glyph_round_trip():
    doc = small_doc()
    assert swml_parse(swml_serialize(doc)) == doc


def test_canonical_layout():
    text = swml_serialize(small_doc()).decode()
    assert '  <signbox id="1" x="40" y="32" w="120" h="180">' in text
    assert ('    <glyph code="04-01-001-01-01-01" x="10" y="0" w="64" h="64" '
            'confidence="0.92"/>') in text
    assert '  <unrecognized x="500" y="410" w="22" h="19"/>' in text
    assert "\r" not in text


def test_confidence_two_decimals():
    glyph = Glyph(IswaCode(1, 1, 1, 1, 1, 1), (0, 0, 5, 5), 0.8712)
    assert glyph.confidence == 0.87
    doc = SwmlDocument(Source("a.png", 10, 10),
                       (SignBox(1, (0, 0, 5, 5), (glyph,)),))
    assert b'confidence="0.87"' in swml_serialize(doc)


def test_parse_liberal_whitespace_and_attr_order():
    data = (b'<?xml version="1.0"?>\n<swml  version="1.0" >'
            b'<source height="600" image="page.png" width="800" />'
            b'<signbox h="180" id="1" w="120" x="40" y="32">'
            b'  <glyph confidence="0.92" h="64" w="64" x="10" y="0" '
            b'code="04-01-001-01-01-01"/></signbox>'
            b'<unrecognized y="410" x="500" h="19" w="22"/></swml>')
    assert swml_parse(data) == small_doc()


def test_round_trip_random_documents():
    rng = random.Random(77)
    for _ in range(100):
        doc = random_document(rng)
        data = swml_serialize(doc)
        parsed = swml_parse(data)
        assert parsed == doc
        assert swml_serialize(parsed) == data


def test_glyph_outside_signbox_rejected():
    data = (b'<swml version="1.0"><source image="p" width="800" height="600"/>'
            b'<signbox id="1" x="0" y="0" w="50" h="50">'
            b'<glyph code="01-01-001-01-01-01" x="40" y="40" w="20" h="20" '
            b'confidence="1.00"/></signbox></swml>')
    with pytest.raises(SchemaViolation):
        swml_parse(data)


def test_signbox_outside_page_rejected():
    with pytest.raises(SchemaViolation):
        SwmlDocument(Source("p", 100, 100),
                     (SignBox(1, (90, 90, 20, 20)),))


def test_bad_xml_reports_position():
    with pytest.raises(SwmlParseError) as err:
        swml_parse(b'<swml version="1.0">\n  <source image="p" width="1"\n')
    assert err.value.line >= 2


def test_missing_attribute_rejected():
    data = b'<swml version="1.0"><source image="p" width="800"/></swml>'
    with pytest.raises(SchemaViolation) as err:
        swml_parse(data)
    assert "height" in str(err.value)


def test_non_integer_geometry_rejected():
    data = (b'<swml version="1.0">'
            b'<source image="p" width="8.5" height="600"/></swml>')
    with pytest.raises(SchemaViolation):
        swml_parse(data)


def test_non_contiguous_ids_rejected():
    src = Source("p", 500, 500)
    with pytest.raises(SchemaViolation):
        SwmlDocument(src, (SignBox(1, (0, 0, 10, 10)), SignBox(3, (100, 0, 10, 10))))


def test_glyphs_sorted_within_box():
    a = Glyph(IswaCode(1, 1, 1, 1, 1, 1), (5, 20, 4, 4))
    b = Glyph(IswaCode(1, 1, 1, 1, 1, 1), (9, 3, 4, 4))
    box = SignBox(1, (0, 0, 40, 40), (a, b))
    assert [g.bbox[1] for g in box.glyphs] == [3, 20]


def test_json_mirror_round_trip():
    rng = random.Random(123)
    for _ in range(25):
        doc = random_document(rng)
        assert document_from_json(document_to_json(doc)) == doc


def test_json_mirror_field_names():
    payload = document_to_json(small_doc())
    assert payload["source"] == {"image": "page.png", "width": 800, "height": 600}
    glyph = payload["signboxes"][0]["glyphs"][0]
    assert set(glyph) == {"code", "x", "y", "w", "h", "confidence"}


def test_json_bad_shape_rejected():
    with pytest.raises(SchemaViolation):
        document_from_json({"source": {"image": "x", "width": 10}})
    with pytest.raises(SchemaViolation):
        document_from_json([1, 2])
