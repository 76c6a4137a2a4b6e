//! Display-environment layout: measurement passes, column assembly,
//! equation-tag placement, matrices and cases.

use crate::ast::{
    AlignatSpread, Cell, ColumnAlign, DisplayEnv, DisplayKind, DisplayRow, MathList, Node,
    RowBreak, Table, TableKind, TagContent, VPos,
};
use crate::boxes::{hpack_natural, hpack_to, llap, rlap, vcenter, BoxKind, BoxNode, GlueSpec};
use crate::config::TagsSide;
use crate::constants::parse_dimension;
use crate::dim::{Dim, Mu};
use crate::error::LayoutError;
use crate::layout::{layout_list, layout_text, sized_delim, Ctx};
use crate::metrics::{Family, GlyphId};
use crate::style::Style;

/// Per-row and aggregate widths of a two-column alignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowMeasure {
    pub lwidth: Vec<Dim>,
    pub rwidth: Vec<Dim>,
    pub line_height: Vec<Dim>,
    pub maxl: Dim,
    pub maxr: Dim,
    pub tot: Dim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagMode {
    Inline,
    StackedAbove,
    StackedBelow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TagPlacement {
    pub mode: TagMode,
    pub x: Dim,
}

/// The centering tabskip: no natural width, a finite 1000pt of stretch at
/// each end of a display row.
fn centering_glue() -> BoxNode {
    BoxNode::glue(GlueSpec::stretchy(Dim::ZERO, Dim::from_pt(1000)))
}

/// Measures align-style rows: the left part right-aligned, the right part
/// laid out with a leading empty atom for correct relation spacing.
pub fn measure_align(ctx: &Ctx, rows: &[(MathList, MathList)]) -> Result<RowMeasure, LayoutError> {
    let mut m = RowMeasure {
        lwidth: Vec::new(),
        rwidth: Vec::new(),
        line_height: Vec::new(),
        maxl: Dim::ZERO,
        maxr: Dim::ZERO,
        tot: Dim::ZERO,
    };
    for (lhs, rhs) in rows {
        let lbox = layout_list(ctx, lhs, Style::DISPLAY)?;
        let rbox = layout_list(ctx, &with_leading_empty(rhs), Style::DISPLAY)?;
        m.maxl = m.maxl.max(lbox.width);
        m.maxr = m.maxr.max(rbox.width);
        m.line_height.push(lbox.height.max(rbox.height));
        m.lwidth.push(lbox.width);
        m.rwidth.push(rbox.width);
    }
    m.tot = m.maxl + m.maxr;
    Ok(m)
}

fn with_leading_empty(list: &MathList) -> MathList {
    let mut nodes = vec![Node::Atom(crate::ast::Atom::new(
        crate::symbols::AtomClass::Ord,
        crate::ast::Nucleus::List(MathList::default()),
    ))];
    nodes.extend(list.0.iter().cloned());
    MathList(nodes)
}

/// Right-tag placement: inline at the right margin when the row's slack
/// strictly exceeds twice the tag width, stacked below otherwise.
pub fn place_tag_right(
    measure: &RowMeasure,
    row: usize,
    tag_width: Dim,
    display_width: Dim,
) -> TagPlacement {
    let slack =
        (display_width - measure.tot).divide(2) + measure.maxr - measure.rwidth[row];
    let mode = if slack > tag_width.scale_int(2) {
        TagMode::Inline
    } else {
        TagMode::StackedBelow
    };
    TagPlacement {
        mode,
        x: display_width - tag_width,
    }
}

/// Left-tag placement, the mirror image; stacking goes above the row.
pub fn place_tag_left(
    measure: &RowMeasure,
    row: usize,
    tag_width: Dim,
    display_width: Dim,
) -> TagPlacement {
    let slack =
        (display_width - measure.tot).divide(2) + measure.maxl - measure.lwidth[row];
    let mode = if slack > tag_width.scale_int(2) {
        TagMode::Inline
    } else {
        TagMode::StackedAbove
    };
    TagPlacement {
        mode,
        x: Dim::ZERO,
    }
}

/// Gather rows use the full slack of the centered row against the same
/// doubled-width threshold.
pub fn gather_tag_placement(
    display_width: Dim,
    gwidth: Dim,
    tag_width: Dim,
    side: TagsSide,
) -> TagPlacement {
    let slack = display_width - gwidth;
    let inline = slack > tag_width.scale_int(2);
    match side {
        TagsSide::Right => TagPlacement {
            mode: if inline {
                TagMode::Inline
            } else {
                TagMode::StackedBelow
            },
            x: display_width - tag_width,
        },
        TagsSide::Left => TagPlacement {
            mode: if inline {
                TagMode::Inline
            } else {
                TagMode::StackedAbove
            },
            x: Dim::ZERO,
        },
    }
}

/// Builds a tag box: upright parenthesized text, the literal form as-is, or
/// math content inside the parentheses. A display strut rides along.
pub fn make_tag(ctx: &Ctx, tag: &TagContent) -> Result<BoxNode, LayoutError> {
    let body = match tag {
        TagContent::Literal(text) => layout_text(ctx, text, Style::TEXT),
        TagContent::Text(text) => {
            let inner = layout_text(ctx, text, Style::TEXT);
            parenthesize(ctx, inner)
        }
        TagContent::Math(list) => {
            let inner = layout_list(ctx, list, Style::TEXT)?;
            parenthesize(ctx, inner)
        }
    };
    Ok(hpack_natural(vec![ctx.strut(), body]))
}

fn parenthesize(ctx: &Ctx, inner: BoxNode) -> BoxNode {
    let open = crate::layout::glyph_box(ctx, GlyphId::new(Family::Roman, b'('), '(', Style::TEXT);
    let close = crate::layout::glyph_box(ctx, GlyphId::new(Family::Roman, b')'), ')', Style::TEXT);
    hpack_natural(vec![open, inner, close])
}

/// A stacked-below tag: the tag hangs entirely under the row baseline.
fn stacked_below(tag: BoxNode) -> BoxNode {
    let total = tag.height + tag.depth;
    let mut b = hpack_natural(vec![tag.raised(-total)]);
    b.height = Dim::ZERO;
    b.depth = total;
    b
}

/// A stacked-above tag: the tag a full line height above the row baseline.
fn stacked_above(ctx: &Ctx, tag: BoxNode, line_height: Dim) -> BoxNode {
    let bls = ctx.constants.baselineskip;
    let gap = (bls - tag.depth - line_height).max(ctx.constants.lineskip);
    let rise = line_height + gap + tag.depth;
    let h = rise + tag.height;
    let mut b = hpack_natural(vec![tag.raised(rise)]);
    b.height = h;
    b.depth = Dim::ZERO;
    b
}

// ---------------------------------------------------------------------
// Display environments
// ---------------------------------------------------------------------

struct EqRow<'a> {
    cells: Vec<&'a MathList>,
    tag: Option<&'a TagContent>,
    shove: Option<ColumnAlign>,
    break_after: Option<RowBreak>,
}

enum PreparedRow<'a> {
    Eq(EqRow<'a>),
    Intertext(&'a str),
}

fn prepare_rows(rows: &[DisplayRow]) -> Vec<PreparedRow<'_>> {
    rows.iter()
        .map(|r| match r {
            DisplayRow::Intertext(t) => PreparedRow::Intertext(t),
            DisplayRow::Eq {
                cells,
                tag,
                shove,
                break_after,
            } => PreparedRow::Eq(EqRow {
                cells: cells.iter().collect(),
                tag: tag.as_ref(),
                shove: *shove,
                break_after: *break_after,
            }),
        })
        .collect()
}

/// Lays out a display environment into a vertical block.
pub fn layout_display(ctx: &Ctx, env: &DisplayEnv) -> Result<BoxNode, LayoutError> {
    match env.kind {
        DisplayKind::Align => layout_align_env(ctx, &env.rows),
        DisplayKind::Split => layout_split(ctx, env),
        DisplayKind::Gather | DisplayKind::Plain => layout_gather(ctx, &env.rows),
        DisplayKind::Alignat { pairs, spread } => {
            layout_alignat(ctx, pairs, &env.rows, spread)
        }
        DisplayKind::Multline => layout_multline(ctx, &env.rows),
    }
}

/// An `\align` whose rows may contain spliced `\split` blocks.
fn layout_align_env(ctx: &Ctx, rows: &[DisplayRow]) -> Result<BoxNode, LayoutError> {
    // a row whose single cell is a split environment contributes its rows
    let mut expanded: Vec<DisplayRow> = Vec::new();
    for row in rows {
        match row {
            DisplayRow::Eq { cells, tag, shove, break_after } => {
                let split_env = cells.iter().find_map(|c| match c.0.as_slice() {
                    [Node::DisplayEnv(env)] if env.kind == DisplayKind::Split => Some(env),
                    _ => None,
                });
                match split_env {
                    Some(env) => {
                        if contains_split(&env.rows) {
                            return Err(LayoutError::NestedSplit);
                        }
                        let inner_tag = env.rows.iter().find_map(|r| match r {
                            DisplayRow::Eq { tag: Some(t), .. } => Some(t.clone()),
                            _ => None,
                        });
                        let tag = tag.clone().or(inner_tag);
                        let inner = strip_tags(&env.rows);
                        let n = inner.len();
                        for (k, mut r) in inner.into_iter().enumerate() {
                            // the containing row's tag attaches per side
                            if let DisplayRow::Eq { tag: t, .. } = &mut r {
                                let here = match ctx.display.tags_side {
                                    TagsSide::Left => k == 0,
                                    TagsSide::Right => k + 1 == n,
                                };
                                if here {
                                    *t = tag.clone();
                                }
                            }
                            expanded.push(r);
                        }
                    }
                    None => expanded.push(DisplayRow::Eq {
                        cells: cells.clone(),
                        tag: tag.clone(),
                        shove: *shove,
                        break_after: *break_after,
                    }),
                }
            }
            other => expanded.push(other.clone()),
        }
    }
    layout_align_like(ctx, &expanded)
}

fn contains_split(rows: &[DisplayRow]) -> bool {
    rows.iter().any(|r| match r {
        DisplayRow::Eq { cells, .. } => cells.iter().any(|c| {
            c.0.iter()
                .any(|n| matches!(n, Node::DisplayEnv(e) if e.kind == DisplayKind::Split))
        }),
        _ => false,
    })
}

/// Stacks display rows with the opened-up baseline discipline, recording
/// break penalties between rows when present.
fn stack_display_rows(ctx: &Ctx, rows: Vec<(BoxNode, Option<RowBreak>)>) -> BoxNode {
    let open = ctx.constants.jot + ctx.constants.spread_lines;
    let bls = ctx.constants.baselineskip + open;
    let ls = ctx.constants.lineskip + open;
    let limit = ctx.constants.lineskiplimit + open;
    let mut items: Vec<BoxNode> = vec![BoxNode::kern(-limit)];
    let mut prev_depth: Option<Dim> = None;
    let total = rows.len();
    for (i, (row, brk)) in rows.into_iter().enumerate() {
        if let Some(pd) = prev_depth {
            let gap = bls - pd - row.height;
            if gap >= limit {
                items.push(BoxNode::kern(gap));
            } else {
                items.push(BoxNode::kern(ls));
            }
        }
        prev_depth = Some(row.depth);
        items.push(row);
        let last = i + 1 == total;
        if let Some(brk) = brk {
            let value = match brk {
                RowBreak::Allow => 0,
                RowBreak::Force => -10000,
            };
            items.push(BoxNode::kern_note(Dim::ZERO, &format!("penalty={value}")));
        } else if ctx.display.allow_display_breaks && !last {
            items.push(BoxNode::kern_note(Dim::ZERO, "penalty=0"));
        }
    }
    crate::boxes::vpack(items, crate::boxes::VBaseline::Last, crate::boxes::XAlign::Left)
}

fn split_cells(row: &EqRow<'_>, max: usize) -> Result<(MathList, MathList), LayoutError> {
    if row.cells.len() > max {
        return Err(LayoutError::TooManyColumns {
            found: row.cells.len(),
            max,
        });
    }
    let lhs = row.cells.first().cloned().cloned().unwrap_or_default();
    let rhs = row.cells.get(1).cloned().cloned().unwrap_or_default();
    Ok((lhs, rhs))
}

fn layout_align_like(ctx: &Ctx, rows: &[DisplayRow]) -> Result<BoxNode, LayoutError> {
    let prepared = prepare_rows(rows);
    let mut eq_pairs: Vec<(MathList, MathList)> = Vec::new();
    for row in prepared.iter() {
        if let PreparedRow::Eq(eq) = row {
            let (lhs, rhs) = split_cells(eq, 2)?;
            eq_pairs.push((lhs, rhs));
        }
    }
    let measure = measure_align(ctx, &eq_pairs)?;
    let dw = ctx.display.display_width;
    let side = ctx.display.tags_side;
    let mut out_rows: Vec<(BoxNode, Option<RowBreak>)> = Vec::new();
    let mut eq_index = 0usize;
    for row in prepared.iter() {
        match row {
            PreparedRow::Intertext(text) => {
                out_rows.push((intertext_row(ctx, text, dw), None));
            }
            PreparedRow::Eq(eq) => {
                let i = eq_index;
                eq_index += 1;
                let (lhs, rhs) = &eq_pairs[i];
                let lbox = layout_list(ctx, lhs, Style::DISPLAY)?;
                let rbox = layout_list(ctx, &with_leading_empty(rhs), Style::DISPLAY)?;
                let row_box = align_row(ctx, &measure, i, lbox, rbox, eq.tag, dw, side)?;
                out_rows.push((row_box, eq.break_after));
            }
        }
    }
    Ok(stack_display_rows(ctx, out_rows))
}

#[allow(clippy::too_many_arguments)]
fn align_row(
    ctx: &Ctx,
    measure: &RowMeasure,
    i: usize,
    lbox: BoxNode,
    rbox: BoxNode,
    tag: Option<&TagContent>,
    dw: Dim,
    side: TagsSide,
) -> Result<BoxNode, LayoutError> {
    let mut items = vec![
        centering_glue(),
        BoxNode::kern(measure.maxl - measure.lwidth[i]),
        ctx.strut(),
        lbox,
        rbox,
        BoxNode::kern(measure.maxr - measure.rwidth[i]),
        centering_glue(),
    ];
    if let Some(tag) = tag {
        let tag_box = make_tag(ctx, tag)?;
        let tag_width = tag_box.width;
        match side {
            TagsSide::Right => {
                let placement = place_tag_right(measure, i, tag_width, dw);
                match placement.mode {
                    TagMode::Inline => items.push(llap(tag_box)),
                    _ => items.push(llap(stacked_below(tag_box))),
                }
            }
            TagsSide::Left => {
                let placement = place_tag_left(measure, i, tag_width, dw);
                let dw_eff = if measure.tot > dw { measure.tot } else { dw };
                items.push(BoxNode::kern(-dw_eff));
                match placement.mode {
                    TagMode::Inline => items.push(rlap(tag_box)),
                    _ => items.push(rlap(stacked_above(
                        ctx,
                        tag_box,
                        measure.line_height[i],
                    ))),
                }
                items.push(BoxNode::glue(GlueSpec::fixed(dw_eff)));
            }
        }
    }
    Ok(hpack_to(dw, items))
}

fn intertext_row(ctx: &Ctx, text: &str, dw: Dim) -> BoxNode {
    let body = layout_text(ctx, text, Style::TEXT);
    hpack_to(dw, vec![body, BoxNode::glue(GlueSpec::fil())])
}

fn layout_gather(ctx: &Ctx, rows: &[DisplayRow]) -> Result<BoxNode, LayoutError> {
    let prepared = prepare_rows(rows);
    let dw = ctx.display.display_width;
    let side = ctx.display.tags_side;
    let mut gmax = Dim::ZERO;
    let mut measured: Vec<Option<BoxNode>> = Vec::new();
    for row in &prepared {
        match row {
            PreparedRow::Intertext(_) => measured.push(None),
            PreparedRow::Eq(eq) => {
                let (content, _) = split_cells(eq, 1)?;
                let b = layout_list(ctx, &content, Style::DISPLAY)?;
                gmax = gmax.max(b.width);
                measured.push(Some(b));
            }
        }
    }
    let gdisplaywidth = if gmax > dw { gmax } else { dw };
    let mut out_rows = Vec::new();
    for (row, built) in prepared.iter().zip(measured) {
        match row {
            PreparedRow::Intertext(text) => {
                out_rows.push((intertext_row(ctx, text, dw), None));
            }
            PreparedRow::Eq(eq) => {
                let b = built.expect("eq row measured");
                let gwidth = b.width;
                let line_height = b.height;
                let mut items =
                    vec![centering_glue(), ctx.strut(), b, centering_glue()];
                if let Some(tag) = eq.tag {
                    let tag_box = make_tag(ctx, tag)?;
                    let placement = gather_tag_placement(dw, gwidth, tag_box.width, side);
                    match (side, placement.mode) {
                        (TagsSide::Right, TagMode::Inline) => items.push(llap(tag_box)),
                        (TagsSide::Right, _) => items.push(llap(stacked_below(tag_box))),
                        (TagsSide::Left, mode) => {
                            items.push(BoxNode::kern(-gdisplaywidth));
                            if mode == TagMode::Inline {
                                items.push(rlap(tag_box));
                            } else {
                                items.push(rlap(stacked_above(ctx, tag_box, line_height)));
                            }
                            items.push(BoxNode::glue(GlueSpec::fixed(gdisplaywidth)));
                        }
                    }
                }
                out_rows.push((hpack_to(dw, items), eq.break_after));
            }
        }
    }
    Ok(stack_display_rows(ctx, out_rows))
}

fn layout_alignat(
    ctx: &Ctx,
    pairs: usize,
    rows: &[DisplayRow],
    spread: AlignatSpread,
) -> Result<BoxNode, LayoutError> {
    let prepared = prepare_rows(rows);
    let dw = ctx.display.display_width;
    let side = ctx.display.tags_side;
    let max_cells = pairs * 2;
    let mut col_widths = vec![Dim::ZERO; max_cells];
    let mut built: Vec<Option<Vec<BoxNode>>> = Vec::new();
    for row in &prepared {
        match row {
            PreparedRow::Intertext(_) => built.push(None),
            PreparedRow::Eq(eq) => {
                if eq.tag.is_some() && spread == AlignatSpread::XX {
                    return Err(LayoutError::TagInXXAlignat);
                }
                if eq.cells.len() > max_cells {
                    return Err(LayoutError::TooManyColumns {
                        found: eq.cells.len(),
                        max: max_cells,
                    });
                }
                let mut cells = Vec::new();
                for (j, cell) in eq.cells.iter().enumerate() {
                    let list = if j % 2 == 1 {
                        with_leading_empty(cell)
                    } else {
                        (*cell).clone()
                    };
                    let b = layout_list(ctx, &list, Style::DISPLAY)?;
                    col_widths[j] = col_widths[j].max(b.width);
                    cells.push(b);
                }
                built.push(Some(cells));
            }
        }
    }
    let mut out_rows = Vec::new();
    for (row, cells) in prepared.iter().zip(built) {
        match row {
            PreparedRow::Intertext(text) => {
                out_rows.push((intertext_row(ctx, text, dw), None));
            }
            PreparedRow::Eq(eq) => {
                let cells = cells.expect("built row");
                let mut items: Vec<BoxNode> = Vec::new();
                if spread != AlignatSpread::XX {
                    items.push(centering_glue());
                }
                for (j, cell) in cells.into_iter().enumerate() {
                    if j % 2 == 0 {
                        if j > 0 && spread != AlignatSpread::None {
                            items.push(centering_glue());
                        }
                        items.push(BoxNode::kern(col_widths[j] - cell.width));
                        items.push(ctx.strut());
                        items.push(cell);
                    } else {
                        let w = cell.width;
                        items.push(cell);
                        items.push(BoxNode::kern(col_widths[j] - w));
                    }
                }
                if spread != AlignatSpread::XX {
                    items.push(centering_glue());
                }
                if let Some(tag) = eq.tag {
                    let tag_box = make_tag(ctx, tag)?;
                    match side {
                        TagsSide::Right => items.push(llap(tag_box)),
                        TagsSide::Left => {
                            items.push(BoxNode::kern(-dw));
                            items.push(rlap(tag_box));
                            items.push(BoxNode::glue(GlueSpec::fixed(dw)));
                        }
                    }
                }
                out_rows.push((hpack_to(dw, items), eq.break_after));
            }
        }
    }
    Ok(stack_display_rows(ctx, out_rows))
}

/// `\split`: contributes align rows; the tag attaches to the first row
/// (left tags), the last row (right tags), or the vertical center.
fn layout_split(ctx: &Ctx, env: &DisplayEnv) -> Result<BoxNode, LayoutError> {
    if contains_split(&env.rows) {
        return Err(LayoutError::NestedSplit);
    }
    let tag = env.rows.iter().find_map(|r| match r {
        DisplayRow::Eq { tag: Some(t), .. } => Some(t.clone()),
        _ => None,
    });
    if ctx.display.centered_split_tags {
        let block = layout_align_like(ctx, &strip_tags(&env.rows))?;
        let axis = ctx.metrics.axis_height(Style::DISPLAY);
        let centered = vcenter(block, axis);
        let dw = ctx.display.display_width;
        let mut items = vec![centering_glue(), centered, centering_glue()];
        if let Some(tag) = &tag {
            let tag_box = make_tag(ctx, tag)?;
            match ctx.display.tags_side {
                TagsSide::Right => items.push(llap(tag_box)),
                TagsSide::Left => {
                    items.push(BoxNode::kern(-dw));
                    items.push(rlap(tag_box));
                    items.push(BoxNode::glue(GlueSpec::fixed(dw)));
                }
            }
        }
        return Ok(hpack_to(dw, items));
    }
    let mut rows = strip_tags(&env.rows);
    if let Some(tag) = tag {
        let n = rows.len();
        let at = match ctx.display.tags_side {
            TagsSide::Left => 0,
            TagsSide::Right => n.saturating_sub(1),
        };
        if let Some(DisplayRow::Eq { tag: t, .. }) = rows.get_mut(at) {
            *t = Some(tag);
        }
    }
    layout_align_like(ctx, &rows)
}

fn strip_tags(rows: &[DisplayRow]) -> Vec<DisplayRow> {
    rows.iter()
        .map(|r| match r {
            DisplayRow::Eq {
                cells,
                shove,
                break_after,
                ..
            } => DisplayRow::Eq {
                cells: cells.clone(),
                tag: None,
                shove: *shove,
                break_after: *break_after,
            },
            other => other.clone(),
        })
        .collect()
}

/// `\multline`: first row indented left, last row indented right, middle
/// rows centered; tags sit at the margin when they fit, else stack.
fn layout_multline(ctx: &Ctx, rows: &[DisplayRow]) -> Result<BoxNode, LayoutError> {
    let prepared = prepare_rows(rows);
    let dw = ctx.display.display_width;
    let side = ctx.display.tags_side;
    let gap = ctx.constants.multline_gap;
    let tag_gap = ctx.constants.multline_tag_gap;
    let tag = prepared.iter().find_map(|r| match r {
        PreparedRow::Eq(eq) => eq.tag,
        _ => None,
    });
    let tag_box = tag.map(|t| make_tag(ctx, t)).transpose()?;
    let mut row_boxes = Vec::new();
    for row in &prepared {
        if let PreparedRow::Eq(eq) = row {
            let (content, _) = split_cells(eq, 1)?;
            let with_empty = with_leading_empty(&content);
            let b = layout_list(ctx, &with_empty, Style::DISPLAY)?;
            let plain = layout_list(ctx, &content, Style::DISPLAY)?;
            row_boxes.push((b, plain.width, eq.shove, eq.break_after));
        }
    }
    let n = row_boxes.len();
    if n == 0 {
        return Ok(hpack_to(dw, vec![centering_glue(), centering_glue()]));
    }
    let measured_width = match side {
        TagsSide::Left => row_boxes.first().map(|r| r.0.width).unwrap_or(Dim::ZERO),
        TagsSide::Right => row_boxes.last().map(|r| r.0.width).unwrap_or(Dim::ZERO),
    };
    let fits = match &tag_box {
        Some(tb) => measured_width + tb.width + tag_gap <= dw,
        None => false,
    };
    let first_line_height = row_boxes.first().map(|r| r.0.height).unwrap_or(Dim::ZERO);
    let mut out_rows = Vec::new();
    for (i, (b, plain_width, shove, break_after)) in row_boxes.into_iter().enumerate() {
        let first = i == 0;
        let last = i + 1 == n;
        let mut items: Vec<BoxNode> = Vec::new();
        items.push(ctx.strut());
        let mut centered_left = true;
        if shove == Some(ColumnAlign::Left) {
            centered_left = false;
            match (side, &tag_box) {
                (TagsSide::Left, Some(tb)) if fits => {
                    items.push(BoxNode::kern(tb.width + tag_gap));
                }
                (TagsSide::Left, Some(_)) => {}
                _ => items.push(BoxNode::kern(gap)),
            }
            let correction = plain_width.divide(2) - b.width.divide(2);
            items.push(BoxNode::kern(correction));
        }
        if centered_left {
            match (first, side, &tag_box) {
                (true, TagsSide::Left, Some(tb)) if fits => {
                    centered_left = false;
                    items.push(tb.clone());
                    items.push(BoxNode::kern(tag_gap));
                }
                (true, TagsSide::Left, Some(tb)) => {
                    centered_left = false;
                    items.push(rlap(stacked_above(ctx, tb.clone(), first_line_height)));
                }
                (true, _, _) => {
                    centered_left = false;
                    items.push(BoxNode::kern(gap));
                }
                _ => {}
            }
        }
        if centered_left {
            items.push(centering_glue());
        }
        items.push(b);
        let mut centered_right = true;
        if shove == Some(ColumnAlign::Right) {
            centered_right = false;
            match (side, &tag_box) {
                (TagsSide::Right, Some(tb)) if fits => {
                    items.push(BoxNode::kern(tb.width + tag_gap));
                }
                (TagsSide::Right, Some(_)) => {}
                _ => items.push(BoxNode::kern(gap)),
            }
        }
        if centered_right {
            match (last, side, &tag_box) {
                (true, TagsSide::Right, Some(tb)) if fits => {
                    centered_right = false;
                    items.push(BoxNode::kern(tag_gap));
                    items.push(tb.clone());
                }
                (true, TagsSide::Right, Some(tb)) => {
                    centered_right = false;
                    items.push(llap(stacked_below(tb.clone())));
                }
                (true, _, _) => {
                    centered_right = false;
                    items.push(BoxNode::kern(gap));
                }
                _ => {}
            }
        }
        if centered_right {
            items.push(centering_glue());
        }
        out_rows.push((hpack_to(dw, items), break_after));
    }
    Ok(stack_display_rows(ctx, out_rows))
}

// ---------------------------------------------------------------------
// Tables: matrices, cases, aligned and gathered blocks
// ---------------------------------------------------------------------

/// Lays out an inline table construct, vertically centered on the axis
/// (or top/bottom aligned), with its thin-space wrappers.
pub fn layout_table(ctx: &Ctx, table: &Table, style: Style) -> Result<BoxNode, LayoutError> {
    let inner = match &table.kind {
        TableKind::Matrix { delims } => {
            let body = matrix_body(ctx, table, style, MatrixFlavor::Plain)?;
            match delims {
                None => body,
                Some((l, r)) => wrap_fences(ctx, body, Some(*l), Some(*r), style),
            }
        }
        TableKind::SmallMatrix => matrix_body(ctx, table, style, MatrixFlavor::Small)?,
        TableKind::Cases => {
            let body = matrix_body(ctx, table, style, MatrixFlavor::Cases)?;
            wrap_fences(
                ctx,
                body,
                Some(crate::ast::Delim::Symbol("lbrace")),
                None,
                style,
            )
        }
        TableKind::Aligned(vpos) => aligned_body(ctx, table, *vpos, usize::MAX)?,
        TableKind::AlignedAt { pairs } => aligned_body(ctx, table, VPos::Center, *pairs)?,
        TableKind::Gathered => gathered_body(ctx, table)?,
        TableKind::CD => crate::cd::layout_cd(ctx, table)?,
    };
    Ok(inner)
}

enum MatrixFlavor {
    Plain,
    Small,
    Cases,
}

fn wrap_fences(
    ctx: &Ctx,
    body: BoxNode,
    left: Option<crate::ast::Delim>,
    right: Option<crate::ast::Delim>,
    style: Style,
) -> BoxNode {
    let axis = ctx.metrics.axis_height(style);
    let delta = (body.height - axis).max(body.depth + axis);
    let target = delta
        .scale_frac(901, 500)
        .max(delta.scale_int(2) - Dim::from_pt(5));
    let mut items = Vec::new();
    if let Some(l) = left {
        if let Some(b) = sized_delim(ctx, l, target, style) {
            items.push(b);
        }
    }
    items.push(body);
    if let Some(r) = right {
        if let Some(b) = sized_delim(ctx, r, target, style) {
            items.push(b);
        }
    }
    hpack_natural(items)
}

/// The shared matrix grid: centered (or formatted) columns with quad
/// gutters, phantom-parenthesis struts merged into the first and last rows,
/// stacked with the matrix baseline geometry and vertically centered.
fn matrix_body(
    ctx: &Ctx,
    table: &Table,
    style: Style,
    flavor: MatrixFlavor,
) -> Result<BoxNode, LayoutError> {
    let cell_style = match flavor {
        MatrixFlavor::Small => Style::SCRIPT,
        _ => Style::TEXT,
    };
    let spread = ctx.constants.spread_mlines
        + match flavor {
            MatrixFlavor::Cases => ctx.constants.jot,
            _ => Dim::ZERO,
        };
    let (bls, ls, limit) = match flavor {
        MatrixFlavor::Small => (
            ctx.constants.ex.scale_int(9),
            ctx.constants.ex,
            Dim::ZERO,
        ),
        _ => (
            ctx.constants.baselineskip + spread,
            ctx.constants.lineskip + spread,
            ctx.constants.lineskiplimit + spread,
        ),
    };
    let ncols = table
        .rows
        .iter()
        .map(|r| {
            r.cells
                .iter()
                .map(|c| match c {
                    Cell::Math(_) => 1,
                    Cell::HdotsFor { span, .. } => *span,
                })
                .sum::<usize>()
        })
        .max()
        .unwrap_or(1)
        .max(table.format.as_ref().map(|f| f.len()).unwrap_or(0));
    if let Some(format) = &table.format {
        for row in &table.rows {
            let cells: usize = row
                .cells
                .iter()
                .map(|c| match c {
                    Cell::Math(_) => 1,
                    Cell::HdotsFor { span, .. } => *span,
                })
                .sum();
            if cells > format.len() {
                return Err(LayoutError::FormatArityMismatch {
                    declared: format.len(),
                    found: cells,
                });
            }
        }
    }
    struct GridCell {
        content: Option<BoxNode>,
        hdots: Option<(i64, usize, Option<BoxNode>)>,
    }
    let mut grid: Vec<Vec<GridCell>> = Vec::new();
    let mut col_widths = vec![Dim::ZERO; ncols];
    for row in &table.rows {
        let mut cells: Vec<GridCell> = Vec::new();
        let mut col = 0usize;
        for cell in &row.cells {
            match cell {
                Cell::Math(list) => {
                    let b = layout_list(ctx, list, cell_style)?;
                    if col < ncols {
                        col_widths[col] = col_widths[col].max(b.width);
                    }
                    cells.push(GridCell {
                        content: Some(b),
                        hdots: None,
                    });
                    col += 1;
                }
                Cell::HdotsFor {
                    multiplier_milli,
                    span,
                    after,
                } => {
                    if col + span > ncols {
                        return Err(LayoutError::HdotsforSpanTooWide {
                            span: *span,
                            cols: ncols - col.min(ncols),
                        });
                    }
                    let after_box = after
                        .as_ref()
                        .map(|l| layout_list(ctx, l, cell_style))
                        .transpose()?;
                    cells.push(GridCell {
                        content: None,
                        hdots: Some((*multiplier_milli, *span, after_box)),
                    });
                    col += span;
                }
            }
        }
        grid.push(cells);
    }
    let format = table.format.as_ref();
    let gutter = |col: usize| -> Dim {
        if let Some(format) = format {
            let mut total = Dim::ZERO;
            if let Some(spec) = format.get(col) {
                for s in &spec.pre_space {
                    for b in crate::spacing::explicit_space(*s, cell_style, ctx.metrics) {
                        total += b.width;
                    }
                }
            }
            total
        } else if col == 0 {
            Dim::ZERO
        } else if matches!(flavor, MatrixFlavor::Small) {
            ctx.mu_dim(crate::spacing::thick_mu(), cell_style)
        } else {
            ctx.quad(Style::TEXT)
        }
    };
    let col_align = |col: usize| -> ColumnAlign {
        match format {
            Some(f) => f.get(col).map(|s| s.align).unwrap_or(ColumnAlign::Center),
            None => ColumnAlign::Center,
        }
    };
    let mut row_boxes: Vec<BoxNode> = Vec::new();
    let mut vspaces: Vec<Option<Dim>> = Vec::new();
    for (r, row) in grid.into_iter().enumerate() {
        let mut items: Vec<BoxNode> = Vec::new();
        let mut col = 0usize;
        for cell in row {
            match cell.hdots {
                None => {
                    let b = cell.content.unwrap();
                    items.push(BoxNode::kern(gutter(col)));
                    let cw = col_widths[col];
                    let slack = cw - b.width;
                    let (before, after) = match col_align(col) {
                        ColumnAlign::Left => (Dim::ZERO, slack),
                        ColumnAlign::Center => {
                            let l = slack.divide(2);
                            (l, slack - l)
                        }
                        ColumnAlign::Right => (slack, Dim::ZERO),
                    };
                    items.push(BoxNode::kern(before));
                    items.push(b);
                    items.push(BoxNode::kern(after));
                    col += 1;
                }
                Some((mult, span, after_box)) => {
                    items.push(BoxNode::kern(gutter(col)));
                    let mut width = Dim::ZERO;
                    for k in 0..span {
                        width += col_widths[col + k];
                        if k > 0 {
                            width += gutter(col + k);
                        }
                    }
                    items.push(hdots_leader(ctx, width, mult, after_box, cell_style));
                    col += span;
                }
            }
        }
        while col < ncols {
            items.push(BoxNode::kern(gutter(col)));
            items.push(BoxNode::kern(col_widths[col]));
            col += 1;
        }
        row_boxes.push(hpack_natural(items));
        vspaces.push(
            table.rows[r]
                .vspace
                .as_ref()
                .and_then(|t| parse_dimension(t, ctx.metrics).ok()),
        );
    }
    let strutted = !matches!(flavor, MatrixFlavor::Small);
    let mut items: Vec<BoxNode> = Vec::new();
    let mut prev_depth: Option<Dim> = None;
    let paren = ctx
        .metrics
        .glyph(GlyphId::new(Family::Roman, b'('), cell_style);
    let strut_row = BoxNode::phantom(Dim::ZERO, paren.height, paren.depth);
    fn push_row(
        items: &mut Vec<BoxNode>,
        prev_depth: &mut Option<Dim>,
        row: BoxNode,
        bls: Dim,
        ls: Dim,
        limit: Dim,
    ) {
        if let Some(pd) = *prev_depth {
            let gap = bls - pd - row.height;
            if gap >= limit {
                items.push(BoxNode::kern(gap));
            } else {
                items.push(BoxNode::kern(ls));
            }
        }
        *prev_depth = Some(row.depth);
        items.push(row);
    }
    if strutted {
        push_row(&mut items, &mut prev_depth, strut_row.clone(), bls, ls, limit);
        items.push(BoxNode::kern(-bls));
    }
    for (row, vspace) in row_boxes.into_iter().zip(vspaces.iter()) {
        push_row(&mut items, &mut prev_depth, row, bls, ls, limit);
        if let Some(v) = vspace {
            items.push(BoxNode::kern(*v));
        }
    }
    if strutted {
        push_row(&mut items, &mut prev_depth, strut_row, bls, ls, limit);
        items.push(BoxNode::kern(-bls));
    }
    let stack = crate::boxes::vpack(
        items,
        crate::boxes::VBaseline::Last,
        crate::boxes::XAlign::Left,
    );
    let axis = ctx.metrics.axis_height(style);
    let thin = ctx.mu_dim(Mu::from_units(3), style);
    Ok(hpack_natural(vec![
        BoxNode::kern(thin),
        vcenter(stack, axis),
        BoxNode::kern(thin),
    ]))
}

/// `\hdotsfor` leaders: dot boxes `(mkern m·1.5mu . mkern m·1.5mu)`
/// repeated to fill, the slack distributed evenly with the remainder
/// trailing.
fn hdots_leader(
    ctx: &Ctx,
    width: Dim,
    multiplier_milli: i64,
    after: Option<BoxNode>,
    style: Style,
) -> BoxNode {
    let gap_mu = Mu(ctx.constants.dots_space.0 * multiplier_milli / 1000);
    let gap = ctx.mu_dim(gap_mu, style);
    let dot = crate::layout::glyph_box(ctx, GlyphId::new(Family::Italic, 0x3A), '.', style);
    let seg = gap + dot.width + gap;
    let mut items = Vec::new();
    let mut avail = width;
    if let Some(a) = after {
        avail -= a.width;
        items.push(a);
    }
    let n = if seg > Dim::ZERO {
        (avail.sp() / seg.sp()).max(0)
    } else {
        0
    };
    let leftover = avail - Dim(n * seg.sp());
    let lead = if n > 0 {
        Dim(leftover.sp() / (n + 1))
    } else {
        leftover
    };
    let mut used = Dim::ZERO;
    for _ in 0..n {
        items.push(BoxNode::kern(lead));
        used += lead;
        items.push(BoxNode::kern(gap));
        items.push(dot.clone());
        items.push(BoxNode::kern(gap));
        used += seg;
    }
    items.push(BoxNode::kern(avail - used));
    hpack_natural(items)
}

/// `\aligned`-family blocks: display-style rl pairs, opened up a jot,
/// vertically positioned by flavor.
fn aligned_body(
    ctx: &Ctx,
    table: &Table,
    vpos: VPos,
    pairs: usize,
) -> Result<BoxNode, LayoutError> {
    let max_cells = pairs.saturating_mul(2);
    let ncols = table
        .rows
        .iter()
        .map(|r| r.cells.len())
        .max()
        .unwrap_or(2)
        .min(max_cells.max(2));
    let mut col_widths = vec![Dim::ZERO; ncols];
    let mut rows: Vec<Vec<BoxNode>> = Vec::new();
    for row in &table.rows {
        if row.cells.len() > max_cells {
            return Err(LayoutError::TooManyColumns {
                found: row.cells.len(),
                max: max_cells,
            });
        }
        let mut cells = Vec::new();
        for (j, cell) in row.cells.iter().enumerate() {
            let Cell::Math(list) = cell else {
                continue;
            };
            let list = if j % 2 == 1 {
                with_leading_empty(list)
            } else {
                list.clone()
            };
            let b = layout_list(ctx, &list, Style::DISPLAY)?;
            if j < ncols {
                col_widths[j] = col_widths[j].max(b.width);
            }
            cells.push(b);
        }
        rows.push(cells);
    }
    let open = ctx.constants.jot;
    let bls = ctx.constants.baselineskip + open;
    let ls = ctx.constants.lineskip + open;
    let limit = ctx.constants.lineskiplimit + open;
    let mut row_boxes = Vec::new();
    for cells in rows {
        let mut items = vec![ctx.strut()];
        for (j, cell) in cells.into_iter().enumerate() {
            if j % 2 == 0 {
                items.push(BoxNode::kern(col_widths[j] - cell.width));
                items.push(cell);
            } else {
                let w = cell.width;
                items.push(cell);
                items.push(BoxNode::kern(col_widths[j] - w));
            }
        }
        row_boxes.push(hpack_natural(items));
    }
    let stack = crate::layout::scripts::stack_with_baselines(row_boxes, bls, ls, limit);
    let stack = realign_left(stack);
    let thin = ctx.mu_dim(Mu::from_units(3), Style::TEXT);
    let axis = ctx.metrics.axis_height(Style::TEXT);
    let positioned = match vpos {
        VPos::Center => vcenter(stack, axis),
        VPos::Top => to_vtop(stack),
        VPos::Bottom => stack,
    };
    Ok(hpack_natural(vec![
        BoxNode::kern(thin),
        positioned,
        BoxNode::kern(thin),
    ]))
}

fn realign_left(mut stack: BoxNode) -> BoxNode {
    for child in &mut stack.children {
        child.dx = Dim::ZERO;
    }
    stack
}

/// Rebases a stack so its baseline is the first row's.
fn to_vtop(stack: BoxNode) -> BoxNode {
    let first_baseline = stack
        .children
        .iter()
        .filter(|c| !matches!(c.node.kind, BoxKind::Kern | BoxKind::Glue))
        .map(|c| c.dy)
        .next()
        .unwrap_or(Dim::ZERO);
    let shift = -first_baseline;
    let mut out = stack;
    for child in &mut out.children {
        child.dy += shift;
    }
    out.height += shift;
    out.depth -= shift;
    out
}

fn gathered_body(ctx: &Ctx, table: &Table) -> Result<BoxNode, LayoutError> {
    let mut rows = Vec::new();
    for row in &table.rows {
        if row.cells.len() > 1 {
            return Err(LayoutError::TooManyColumns {
                found: row.cells.len(),
                max: 1,
            });
        }
        let Some(Cell::Math(list)) = row.cells.first() else {
            rows.push(hpack_natural(vec![ctx.strut()]));
            continue;
        };
        let b = layout_list(ctx, list, Style::DISPLAY)?;
        rows.push(hpack_natural(vec![ctx.strut(), b]));
    }
    let open = ctx.constants.jot;
    let stack = crate::layout::scripts::stack_with_baselines(
        rows,
        ctx.constants.baselineskip + open,
        ctx.constants.lineskip + open,
        ctx.constants.lineskiplimit + open,
    );
    let thin = ctx.mu_dim(Mu::from_units(3), Style::TEXT);
    let axis = ctx.metrics.axis_height(Style::TEXT);
    Ok(hpack_natural(vec![
        BoxNode::kern(thin),
        vcenter(stack, axis),
        BoxNode::kern(thin),
    ]))
}
