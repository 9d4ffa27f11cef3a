"""swogr: optical glyph recognition for handwritten SignWriting.

Converts raster pages (or live pen strokes) of SignWriting into
13-digit-coded symbol transcriptions grouped into signs, serialized as
SWML documents. Ships a batch CLI, an HTTP service for interactive
transcription, and a synthetic-template catalog for testing.
"""

from .catalog import (GlyphTemplate, Primitive, SymbolCatalog, SymbolMeta,
                      catalog_load, default_catalog)
from .codes import IswaCode, format_code, parse_code
from .embed import AnnotatedResult, embed
from .engine import (ClassifierRule, RecognitionOutcome, RecognizerConfig,
                     StrokeSet, classify_component, default_cascade,
                     detect_arrow, detect_head, rasterize_strokes,
                     recognize_page, recognize_strokes, rotation_octant,
                     segment_signs)
from .evaluate import EvalReport, evaluate
from .raster import (BinaryImage, Component, FeatureVector, GrayImage,
                     binarize_otsu, connected_components, features,
                     trace_boundary)
from .swml import (Glyph, SignBox, Source, SwmlDocument, document_from_json,
                   document_to_json, swml_parse, swml_serialize)
from .templates import render_template

__version__ = "0.1.0"

__all__ = [
    "AnnotatedResult", "BinaryImage", "ClassifierRule", "Component",
    "EvalReport", "FeatureVector", "Glyph", "GlyphTemplate", "GrayImage",
    "IswaCode", "Primitive", "RecognitionOutcome", "RecognizerConfig",
    "SignBox", "Source", "StrokeSet", "SwmlDocument", "SymbolCatalog",
    "SymbolMeta", "binarize_otsu", "catalog_load", "classify_component",
    "connected_components", "default_cascade", "default_catalog",
    "detect_arrow", "detect_head", "document_from_json", "document_to_json",
    "embed", "evaluate", "features", "format_code", "parse_code",
    "rasterize_strokes", "recognize_page", "recognize_strokes",
    "render_template", "rotation_octant", "segment_signs", "swml_parse",
    "swml_serialize", "trace_boundary",
]
