//! Script and limit attachment.

use crate::ast::{Atom, LimitsRequest, MathList};
use crate::boxes::{hpack_natural, BoxKind, BoxNode, Child};
use crate::dim::Dim;
use crate::error::LayoutError;
use crate::metrics::FontParams;
use crate::style::Style;
use crate::symbols::{AtomClass, LimitsDefault, Variant};

use super::{layout_list_with_variant, Ctx};

/// Whether limit placement stacks for this atom here.
fn limits_resolved(
    request: LimitsRequest,
    default: LimitsDefault,
    style: Style,
) -> bool {
    match request {
        LimitsRequest::Limits => true,
        LimitsRequest::NoLimits => false,
        LimitsRequest::Auto => match default {
            LimitsDefault::Limits => true,
            LimitsDefault::NoLimits => false,
            LimitsDefault::DisplayLimits => style.is_display(),
        },
    }
}

/// Attaches scripts (side or stacked) and multiline script rows to a
/// nucleus box.
#[allow(clippy::too_many_arguments)]
pub fn attach_scripts(
    ctx: &Ctx,
    nucleus: BoxNode,
    atom: &Atom,
    style: Style,
    class: AtomClass,
    limits_default: LimitsDefault,
    delta: Dim,
    variant: Option<Variant>,
) -> Result<BoxNode, LayoutError> {
    if atom.multi_sup.is_some() || atom.multi_sub.is_some() {
        if class != AtomClass::Op {
            return Err(LayoutError::MultilineOnNonOp);
        }
        return multiline_scripts(ctx, nucleus, atom, style);
    }
    if !atom.has_scripts() {
        return Ok(nucleus);
    }
    let stacked = class == AtomClass::Op
        && limits_resolved(atom.limits, limits_default, style);
    let sup = atom
        .sup
        .as_ref()
        .map(|l| layout_list_with_variant(ctx, l, style.sup_style(), variant))
        .transpose()?;
    let sub = atom
        .sub
        .as_ref()
        .map(|l| layout_list_with_variant(ctx, l, style.sub_style(), variant))
        .transpose()?;
    if stacked {
        Ok(stack_limits(ctx, nucleus, sup, sub, style, delta))
    } else {
        Ok(side_scripts(ctx, nucleus, sup, sub, style, delta))
    }
}

/// Side scripts, following the classic shift rules: minimum raises per
/// style, clash resolution against four rule thicknesses, and the
/// superscript shifted right by the italic correction.
pub fn side_scripts(
    ctx: &Ctx,
    nucleus: BoxNode,
    sup: Option<BoxNode>,
    sub: Option<BoxNode>,
    style: Style,
    delta: Dim,
) -> BoxNode {
    let m = ctx.metrics;
    let script_space = Dim::from_pt_decimal(0, 5, 10);
    let x_height = m.x_height(style);
    let is_char = nucleus.kind == BoxKind::Glyph;
    let (u0, v0) = if is_char {
        (Dim::ZERO, Dim::ZERO)
    } else {
        let sup_drop = m.param(|p: &FontParams| p.sup_drop, style.sup_style());
        let sub_drop = m.param(|p: &FontParams| p.sub_drop, style.sub_style());
        (nucleus.height - sup_drop, nucleus.depth + sub_drop)
    };
    let pad = |b: BoxNode| {
        let w = b.width;
        let _ = w;
        let mut items = vec![b];
        items.push(BoxNode::kern(script_space));
        hpack_natural(items)
    };
    match (sup, sub) {
        (None, None) => nucleus,
        (None, Some(sub_box)) => {
            let sub_box = pad(sub_box);
            let sub1 = m.param(|p| p.sub1, style);
            let v = v0
                .max(sub1)
                .max(sub_box.height - x_height.scale_frac(4, 5));
            hpack_natural(vec![nucleus, sub_box.raised(-v)])
        }
        (Some(sup_box), None) => {
            let sup_box = pad(sup_box);
            let p = sup_std(ctx, style);
            let u = u0
                .max(p)
                .max(sup_box.depth + x_height.scale_frac(1, 4));
            hpack_natural(vec![
                nucleus,
                BoxNode::kern(delta),
                sup_box.raised(u),
                BoxNode::kern(-delta),
            ])
        }
        (Some(sup_box), Some(sub_box)) => {
            let sup_box = pad(sup_box);
            let sub_box = pad(sub_box);
            let theta = m.rule_thickness(style);
            let p = sup_std(ctx, style);
            let mut u = u0
                .max(p)
                .max(sup_box.depth + x_height.scale_frac(1, 4));
            let mut v = v0.max(m.param(|p| p.sub2, style));
            let gap = (u - sup_box.depth) - (sub_box.height - v);
            if gap < theta.scale_int(4) {
                v = theta.scale_int(4) + sub_box.height - (u - sup_box.depth);
                let psi = x_height.scale_frac(4, 5) - (u - sup_box.depth);
                if psi > Dim::ZERO {
                    u += psi;
                    v -= psi;
                }
            }
            // both scripts occupy one column; the superscript is shifted
            // right by delta
            let sup_w = delta + sup_box.width;
            let sub_w = sub_box.width;
            let col_w = sup_w.max(sub_w);
            let sup_row = hpack_natural(vec![
                BoxNode::kern(delta),
                sup_box,
                BoxNode::kern(col_w - sup_w),
            ]);
            let sub_row = hpack_natural(vec![sub_box, BoxNode::kern(col_w - sub_w)]);
            let sup_h = sup_row.height;
            let sup_d = sup_row.depth;
            let sub_h = sub_row.height;
            let sub_d = sub_row.depth;
            let column = BoxNode {
                kind: BoxKind::VBox,
                width: col_w,
                height: u + sup_h,
                depth: v + sub_d,
                children: vec![
                    Child {
                        dx: Dim::ZERO,
                        dy: u,
                        node: sup_row,
                    },
                    Child {
                        dx: Dim::ZERO,
                        dy: -v,
                        node: sub_row,
                    },
                ],
                glue: None,
                glyph: None,
                note: None,
            };
            let _ = (sup_d, sub_h);
            hpack_natural(vec![nucleus, column])
        }
    }
}

fn sup_std(ctx: &Ctx, style: Style) -> Dim {
    let m = ctx.metrics;
    if style.cramped {
        m.param(|p| p.sup3, style)
    } else if style.is_display() {
        m.param(|p| p.sup1, style)
    } else {
        m.param(|p| p.sup2, style)
    }
}

/// Stacked limits over and under an operator, centered, with the extension
/// font's spacing and the buffer padding outside both limits.
pub fn stack_limits(
    ctx: &Ctx,
    nucleus: BoxNode,
    sup: Option<BoxNode>,
    sub: Option<BoxNode>,
    style: Style,
    delta: Dim,
) -> BoxNode {
    let m = ctx.metrics;
    let bos = |i: usize| m.big_op_spacing(i, style);
    let buffer = ctx.op_buffer(style);
    let width = nucleus
        .width
        .max(sup.as_ref().map(|b| b.width).unwrap_or(Dim::ZERO))
        .max(sub.as_ref().map(|b| b.width).unwrap_or(Dim::ZERO));
    let center =
        |b: BoxNode, shift: Dim| -> BoxNode {
            let dx = (width - b.width).divide(2) + shift;
            let w = b.width;
            hpack_natural(vec![BoxNode::kern(dx), b, BoxNode::kern(width - dx - w)])
        };
    let nucleus_row = center(nucleus, Dim::ZERO);
    let mut height = nucleus_row.height;
    let mut depth = nucleus_row.depth;
    let mut children = vec![];
    if let Some(sup_box) = sup {
        let sup_row = center(sup_box, delta.divide(2));
        let gap = bos(0).max(bos(2) - sup_row.depth);
        let base = height + gap + sup_row.depth;
        children.push(Child {
            dx: Dim::ZERO,
            dy: base,
            node: sup_row.clone(),
        });
        height = base + sup_row.height + buffer;
    }
    let nucleus_child = Child {
        dx: Dim::ZERO,
        dy: Dim::ZERO,
        node: nucleus_row,
    };
    children.push(nucleus_child);
    if let Some(sub_box) = sub {
        let sub_row = center(sub_box, -delta.divide(2));
        let gap = bos(1).max(bos(3) - sub_row.height);
        let base = depth + gap + sub_row.height;
        children.push(Child {
            dx: Dim::ZERO,
            dy: -base,
            node: sub_row.clone(),
        });
        depth = base + sub_row.depth + buffer;
    }
    BoxNode {
        kind: BoxKind::VBox,
        width,
        height,
        depth,
        children,
        glue: None,
        glyph: None,
        note: None,
    }
}

/// `\Sb`/`\Sp` rows: a script-style stack whose baseline geometry comes
/// from the script fonts' numerator/denominator parameters.
fn multiline_scripts(
    ctx: &Ctx,
    nucleus: BoxNode,
    atom: &Atom,
    style: Style,
) -> Result<BoxNode, LayoutError> {
    let script = style.sup_style();
    let m = ctx.metrics;
    let baselineskip =
        m.param(|p| p.num3, script) + m.param(|p| p.denom2, script);
    let lineskip = m.rule_thickness(style.sub_style()).scale_int(3);
    let build = |rows: &[MathList]| -> Result<BoxNode, LayoutError> {
        let mut boxes = Vec::new();
        for row in rows {
            boxes.push(super::layout_list(ctx, row, script)?);
        }
        Ok(stack_with_baselines(
            boxes,
            baselineskip,
            lineskip,
            lineskip,
        ))
    };
    let sup = atom.multi_sup.as_ref().map(|r| build(r)).transpose()?;
    let sub = atom.multi_sub.as_ref().map(|r| build(r)).transpose()?;
    let single_sup = atom
        .sup
        .as_ref()
        .map(|l| super::layout_list(ctx, l, style.sup_style()))
        .transpose()?;
    let single_sub = atom
        .sub
        .as_ref()
        .map(|l| super::layout_list(ctx, l, style.sub_style()))
        .transpose()?;
    let sup = sup.or(single_sup);
    let sub = sub.or(single_sub);
    if style.is_display() {
        Ok(stack_limits(ctx, nucleus, sup, sub, style, Dim::ZERO))
    } else {
        Ok(side_scripts(ctx, nucleus, sup, sub, style, Dim::ZERO))
    }
}

/// Stacks row boxes with a baselineskip/lineskip discipline (centered), the
/// way alignment displays do.
pub fn stack_with_baselines(
    rows: Vec<BoxNode>,
    baselineskip: Dim,
    lineskip: Dim,
    lineskiplimit: Dim,
) -> BoxNode {
    let mut items = Vec::new();
    let mut prev_depth: Option<Dim> = None;
    for row in rows {
        if let Some(pd) = prev_depth {
            let gap = baselineskip - pd - row.height;
            if gap >= lineskiplimit {
                items.push(BoxNode::kern(gap));
            } else {
                items.push(BoxNode::kern(lineskip));
            }
        }
        prev_depth = Some(row.depth);
        items.push(row);
    }
    crate::boxes::vpack(
        items,
        crate::boxes::VBaseline::Last,
        crate::boxes::XAlign::Center,
    )
}
