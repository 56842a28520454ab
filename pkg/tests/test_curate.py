import numpy as np

from layerdepth import curate, parse_svg, rasterize_color, rasterize_index
from layerdepth.svg.curate import merge_consecutive_layers

SVG = '<svg xmlns="http://www.w3.org/2000/svg" width="24" height="24">{}</svg>'

RED = 'fill="#cc0000"'
BLUE = 'fill="#0000cc"'


def _rect(x, y, w, h, fill):
    return f'<rect x="{x}" y="{y}" width="{w}" height="{h}" {fill}/>'


def test_consecutive_same_color_merged():
    doc = parse_svg(
        SVG.format(
            _rect(0, 0, 8, 8, RED) + _rect(10, 10, 8, 8, RED) + _rect(0, 16, 4, 4, BLUE)
        )
    )
    result = curate(doc)
    assert result.accepted
    assert len(result.curated.layers) == 2
    assert result.merged_layers == 1
    assert result.curated.layers[0].fill == (204, 0, 0)
    assert len(result.curated.layers[0].subpaths) == 2


def test_disjoint_nonconsecutive_same_color_accepted():
    doc = parse_svg(
        SVG.format(
            _rect(0, 0, 6, 6, RED) + _rect(8, 8, 6, 6, BLUE) + _rect(16, 16, 6, 6, RED)
        )
    )
    result = curate(doc)
    assert result.accepted
    assert len(result.curated.layers) == 3


def test_overlapping_nonconsecutive_same_color_rejected():
    # top red overlaps the bottom red's visible region
    doc = parse_svg(
        SVG.format(
            _rect(0, 0, 10, 10, RED) + _rect(12, 12, 6, 6, BLUE) + _rect(4, 4, 10, 10, RED)
        )
    )
    # confirm with the index-raster oracle that the overlap is real
    idx_without_top = rasterize_index(
        parse_svg(SVG.format(_rect(0, 0, 10, 10, RED) + _rect(12, 12, 6, 6, BLUE)))
    ).indices
    top_only = rasterize_index(parse_svg(SVG.format(_rect(4, 4, 10, 10, RED)))).indices
    assert np.any((idx_without_top == 1) & (top_only == 1))

    result = curate(doc)
    assert not result.accepted
    assert result.reason == "ambiguous same-color overlap"
    assert result.curated is None


def test_fully_occluded_lower_layer_not_ambiguous():
    # the top red fully covers the bottom red, so the lower one never survives
    # in the rendered result and the pair is not checked
    doc = parse_svg(
        SVG.format(
            _rect(4, 4, 4, 4, RED) + _rect(0, 12, 6, 6, BLUE) + _rect(2, 2, 10, 10, RED)
        )
    )
    result = curate(doc)
    assert result.accepted


def test_overlap_only_where_middle_layer_hides_lower():
    # the top red only covers spots where blue already hides the lower red,
    # so in a render without the top layer nothing red shows there
    doc = parse_svg(
        SVG.format(
            _rect(0, 0, 10, 10, RED) + _rect(0, 0, 10, 6, BLUE) + _rect(0, 0, 8, 4, RED)
        )
    )
    result = curate(doc)
    assert result.accepted


def test_invisible_lower_layer_skips_pair():
    # lower red is hidden by blue entirely, so the pair cannot be ambiguous
    doc = parse_svg(
        SVG.format(
            _rect(4, 4, 4, 4, RED) + _rect(0, 0, 24, 24, BLUE) + _rect(2, 2, 10, 10, RED)
        )
    )
    result = curate(doc)
    assert result.accepted


def test_color_render_identical_after_merge():
    for body in [
        _rect(0, 0, 12, 12, RED) + _rect(6, 6, 12, 12, RED) + _rect(0, 16, 6, 6, BLUE),
        # ring + disk inside its hole, same color, merged by concatenation
        '<path d="M2 2 L20 2 L20 20 L2 20 Z M6 6 L16 6 L16 16 L6 16 Z" fill="#cc0000" fill-rule="evenodd"/>'
        + _rect(8, 8, 4, 4, RED),
        # nonzero ring drawn with an explicit reversed inner loop
        '<path d="M2 2 L20 2 L20 20 L2 20 Z M6 16 L16 16 L16 6 L6 6 Z" fill="#cc0000"/>'
        + _rect(7, 7, 2, 2, RED),
    ]:
        doc = parse_svg(SVG.format(body))
        merged, removed = merge_consecutive_layers(doc)
        assert removed >= 1
        before = rasterize_color(doc).pixels
        after = rasterize_color(merged).pixels
        assert np.array_equal(before, after)


def test_curation_idempotent():
    doc = parse_svg(
        SVG.format(
            _rect(0, 0, 8, 8, RED)
            + _rect(4, 4, 8, 8, RED)
            + _rect(0, 16, 6, 6, BLUE)
            + _rect(16, 0, 6, 6, BLUE)
        )
    )
    once = curate(doc)
    assert once.accepted
    twice = curate(once.curated)
    assert twice.accepted
    assert twice.merged_layers == 0
    assert twice.curated == once.curated


def test_single_layer_untouched():
    doc = parse_svg(SVG.format(_rect(0, 0, 8, 8, RED)))
    result = curate(doc)
    assert result.accepted
    assert result.curated.layers == doc.layers
