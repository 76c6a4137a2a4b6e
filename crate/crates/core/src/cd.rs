//! Commutative-diagram grid layout and the extensible arrows, usable both
//! inside diagrams and inline.

use crate::ast::{Arrow, ArrowDir, Cell, MathList, Table};
use crate::boxes::{hpack_natural, llap, rlap, vcenter, vpack, BoxNode, VBaseline, XAlign};
use crate::dim::{Dim, Mu};
use crate::error::LayoutError;
use crate::layout::{layout_list, Ctx};
use crate::spacing::thick_mu;
use crate::style::Style;

/// The arrow width: the configured minimum (diagram or inline), raised to
/// the padded script-size width of either label.
pub fn arrow_width(
    ctx: &Ctx,
    top: &MathList,
    bottom: &MathList,
    in_cd: bool,
) -> Result<Dim, LayoutError> {
    let top_w = padded_label_width(ctx, top)?;
    let bottom_w = padded_label_width(ctx, bottom)?;
    Ok(arrow_width_from_widths(ctx, top_w, bottom_w, in_cd))
}

/// The same computation from already-padded label widths, for sweeps.
pub fn arrow_width_from_widths(ctx: &Ctx, top: Dim, bottom: Dim, in_cd: bool) -> Dim {
    let min = if in_cd {
        ctx.constants.min_cd_arrow
    } else {
        ctx.constants.min_arrow
    };
    min.max(top).max(bottom)
}

/// Labels measure at script size padded by one thick space on one side and
/// two on the other.
fn padded_label_width(ctx: &Ctx, label: &MathList) -> Result<Dim, LayoutError> {
    if label.is_empty() {
        return Ok(Dim::ZERO);
    }
    let b = layout_list(ctx, label, Style::SCRIPT)?;
    let thick = ctx.mu_dim(thick_mu(), Style::SCRIPT);
    Ok(b.width + thick.scale_int(3))
}

/// Lays out any arrow construct (`@>>>`, `@<<<`, `@AAA`, `@VVV`, `@=`,
/// `@|`), with the 0.5em pads when inside a diagram.
pub fn layout_arrow(ctx: &Ctx, arrow: &Arrow, in_cd: bool) -> Result<BoxNode, LayoutError> {
    match arrow.dir {
        ArrowDir::Right | ArrowDir::Left => layout_harrow(ctx, arrow, in_cd),
        ArrowDir::Up | ArrowDir::Down => layout_varrow(ctx, arrow),
        ArrowDir::Equals => Ok(equals_cell(ctx, in_cd)),
        ArrowDir::VertLine => Ok(big_vert(ctx)),
        ArrowDir::Blank => Ok(hpack_natural(vec![])),
    }
}

/// A horizontal extensible arrow with its labels as limits above and below.
pub fn layout_harrow(ctx: &Ctx, arrow: &Arrow, in_cd: bool) -> Result<BoxNode, LayoutError> {
    let bigaw = arrow_width(ctx, &arrow.top, &arrow.bottom, in_cd)?;
    let (left_head, right_head) = match arrow.dir {
        ArrowDir::Left => (Some("leftarrow"), None),
        _ => (None, Some("rightarrow")),
    };
    let fill = arrow_fill(ctx, bigaw, left_head, right_head, Style::TEXT);
    let top = layout_list(ctx, &arrow.top, Style::SCRIPT)?;
    let bottom = layout_list(ctx, &arrow.bottom, Style::SCRIPT)?;
    let sup = Some(top);
    let sub = if bottom.width > Dim::ZERO {
        Some(bottom)
    } else {
        None
    };
    let stacked =
        crate::layout::scripts::stack_limits(ctx, fill, sup, sub, Style::TEXT, Dim::ZERO);
    if in_cd {
        let pad = ctx.quad(Style::TEXT).divide(2);
        Ok(hpack_natural(vec![
            BoxNode::kern(pad),
            stacked,
            BoxNode::kern(pad),
        ]))
    } else {
        Ok(stacked)
    }
}

/// The arrow fill: end glyphs joined by minus-sign leaders, exactly `width`
/// wide (plain arrowfill with 7mu head overlaps and 2mu segment overlaps).
pub fn arrow_fill(
    ctx: &Ctx,
    width: Dim,
    left_head: Option<&str>,
    right_head: Option<&str>,
    style: Style,
) -> BoxNode {
    let glyph = |name: &str| -> BoxNode {
        let mut delta = Dim::ZERO;
        crate::layout::symbol_box(ctx, name, style, &mut delta)
            .unwrap_or_else(|_| BoxNode::kern(Dim::ZERO))
    };
    let minus = glyph("relbar");
    let m7 = ctx.mu_dim(Mu::from_units(7), style);
    let m2 = ctx.mu_dim(Mu::from_units(2), style);
    let left = left_head.map(glyph).unwrap_or_else(|| minus.clone());
    let right = right_head.map(glyph).unwrap_or_else(|| minus.clone());
    let rigid = left.width + right.width - m7 - m7;
    let fill = (width - rigid).max(Dim::ZERO);
    let seg_w = (minus.width - m2 - m2).max(Dim(1));
    let n = fill.sp() / seg_w.sp();
    let slack = fill - Dim(n * seg_w.sp());
    let front = slack.divide(2);
    let mut items = vec![left, BoxNode::kern(-m7), BoxNode::kern(front)];
    for _ in 0..n {
        items.push(BoxNode::kern(-m2));
        items.push(minus.clone());
        items.push(BoxNode::kern(-m2));
    }
    items.push(BoxNode::kern(slack - front));
    items.push(BoxNode::kern(-m7));
    items.push(right);
    hpack_natural(items)
}

/// A vertical arrow: a Big delimiter-size arrow glyph; the left label laps
/// left, the right label laps right, both vertically centered, adding no
/// width.
pub fn layout_varrow(ctx: &Ctx, arrow: &Arrow) -> Result<BoxNode, LayoutError> {
    let axis = ctx.metrics.axis_height(Style::TEXT);
    let name = if arrow.dir == ArrowDir::Up {
        "uparrow"
    } else {
        "downarrow"
    };
    let info = crate::symbols::registry().lookup(name)?;
    let g = ctx.metrics.glyph(info.glyph, Style::TEXT);
    let total = Dim::from_pt_decimal(11, 5, 10);
    let h = total.divide(2) + axis;
    let shaft = BoxNode::glyph(
        info.glyph,
        info.unicode.unwrap_or('\u{2191}'),
        g.width,
        h,
        total - h,
    );
    let mut items = Vec::new();
    if !arrow.top.is_empty() {
        let label = layout_list(ctx, &arrow.top, Style::SCRIPT)?;
        items.push(llap(vcenter(label, axis)));
    }
    items.push(shaft);
    if !arrow.bottom.is_empty() {
        let label = layout_list(ctx, &arrow.bottom, Style::SCRIPT)?;
        items.push(rlap(vcenter(label, axis)));
    }
    Ok(hpack_natural(items))
}

/// `@=`: a double rule of the minimum diagram arrow width with 0.5em pads.
fn equals_cell(ctx: &Ctx, in_cd: bool) -> BoxNode {
    let w = ctx.constants.min_cd_arrow;
    let ex = ctx.constants.ex;
    let theta = ctx.metrics.rule_thickness(Style::TEXT);
    let rules = vpack(
        vec![
            BoxNode::rule(w, theta, Dim::ZERO),
            BoxNode::kern(ex.scale_int(3)),
            BoxNode::rule(w, theta, Dim::ZERO),
        ],
        VBaseline::Last,
        XAlign::Left,
    );
    let axis = ctx.metrics.axis_height(Style::TEXT);
    let body = vcenter(rules, axis);
    if in_cd {
        let pad = ctx.quad(Style::TEXT).divide(2);
        hpack_natural(vec![BoxNode::kern(pad), body, BoxNode::kern(pad)])
    } else {
        body
    }
}

/// `@|`: a Big double vertical line.
fn big_vert(ctx: &Ctx) -> BoxNode {
    let axis = ctx.metrics.axis_height(Style::TEXT);
    let info = crate::symbols::registry()
        .lookup("Vert")
        .expect("Vert registered");
    let g = ctx.metrics.glyph(info.glyph, Style::TEXT);
    let total = Dim::from_pt_decimal(11, 5, 10);
    let h = total.divide(2) + axis;
    BoxNode::glyph(info.glyph, '\u{2016}', g.width, h, total - h)
}

/// Lays out the diagram grid: every column centered, the tall baseline
/// geometry of the original (20ex baselines, 3ex lineskip), vertically
/// centered on the axis.
pub fn layout_cd(ctx: &Ctx, table: &Table) -> Result<BoxNode, LayoutError> {
    if table.rows.is_empty() || table.rows.iter().all(|r| r.cells.is_empty()) {
        return Err(LayoutError::RaggedGrid);
    }
    let ncols = table
        .rows
        .iter()
        .map(|r| r.cells.len())
        .max()
        .unwrap_or(0);
    // lay out cells; arrows inside diagram cells get their pads
    let mut grid: Vec<Vec<BoxNode>> = Vec::new();
    for row in &table.rows {
        let mut cells = Vec::new();
        for cell in &row.cells {
            let Cell::Math(list) = cell else {
                cells.push(hpack_natural(vec![]));
                continue;
            };
            cells.push(layout_cd_cell(ctx, list)?);
        }
        while cells.len() < ncols {
            cells.push(hpack_natural(vec![]));
        }
        grid.push(cells);
    }
    let mut col_widths = vec![Dim::ZERO; ncols];
    for row in &grid {
        for (j, cell) in row.iter().enumerate() {
            col_widths[j] = col_widths[j].max(cell.width);
        }
    }
    let ex = ctx.constants.ex;
    let bls = ex.scale_int(20);
    let ls = ex.scale_int(3);
    let limit = ex.scale_int(3);
    let mut items: Vec<BoxNode> = Vec::new();
    let mut prev_depth: Option<Dim> = None;
    for row in grid {
        let mut row_items = Vec::new();
        for (j, cell) in row.into_iter().enumerate() {
            let slack = col_widths[j] - cell.width;
            let before = slack.divide(2);
            row_items.push(BoxNode::kern(before));
            row_items.push(cell);
            row_items.push(BoxNode::kern(slack - before));
        }
        let row_box = hpack_natural(row_items);
        if let Some(pd) = prev_depth {
            let gap = bls - pd - row_box.height;
            if gap >= limit {
                items.push(BoxNode::kern(gap));
            } else {
                items.push(BoxNode::kern(ls));
            }
        }
        prev_depth = Some(row_box.depth);
        items.push(row_box);
    }
    let stack = vpack(items, VBaseline::Last, XAlign::Left);
    let axis = ctx.metrics.axis_height(Style::TEXT);
    Ok(vcenter(stack, axis))
}

/// One diagram cell: object content at text style, or an arrow construct
/// with its in-diagram padding.
fn layout_cd_cell(ctx: &Ctx, list: &MathList) -> Result<BoxNode, LayoutError> {
    use crate::ast::Node;
    // a cell that is purely one arrow gets the diagram treatment
    if list.0.len() == 1 {
        if let Node::Arrow(a) = &list.0[0] {
            return layout_arrow(ctx, a, true);
        }
    }
    // vertical arrows embedded after object content keep zero extra width
    let mut items = Vec::new();
    for node in &list.0 {
        match node {
            Node::Arrow(a) => items.push(crate::layout::Item::atom(
                layout_arrow(ctx, a, true)?,
                crate::symbols::AtomClass::Rel,
                Style::TEXT,
            )),
            other => {
                let single = MathList(vec![other.clone()]);
                let sub = crate::layout::translate_list(ctx, &single, Style::TEXT, None)?;
                items.extend(sub);
            }
        }
    }
    Ok(crate::layout::assemble(ctx, items))
}
