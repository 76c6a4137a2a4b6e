//! Box decorations: frames, poor man's bold, smashes, struts, phantoms,
//! width pretenders and the shave family.

use crate::ast::{Decoration, DecorationKind, MathList, Node};
use crate::boxes::{hpack_natural, vpack, BoxNode, VBaseline, XAlign};
use crate::dim::{Dim, Mu};
use crate::error::LayoutError;
use crate::metrics::{Family, GlyphId};
use crate::style::{Style, StyleLevel};
use crate::symbols::AtomClass;

use super::{glyph_box, layout_list, upright_word, Ctx};

/// Lays out a decoration; returns the box and its atom class (poor man's
/// bold keeps the class of its body).
pub fn layout_decoration(
    ctx: &Ctx,
    d: &Decoration,
    style: Style,
) -> Result<(BoxNode, AtomClass), LayoutError> {
    let b = match d.kind {
        DecorationKind::Boxed => boxed(ctx, &d.body, style)?,
        DecorationKind::Pmb => return pmb(ctx, &d.body, style),
        DecorationKind::Smash => smash(ctx, &d.body, style, true, true)?,
        DecorationKind::TopSmash => smash(ctx, &d.body, style, true, false)?,
        DecorationKind::BotSmash => smash(ctx, &d.body, style, false, true)?,
        DecorationKind::PretendWidth => pretend_width(ctx, d)?,
        DecorationKind::Shave => return Ok((shave(ctx, &d.body, false, false)?, AtomClass::Op)),
        DecorationKind::TopShave => shave(ctx, &d.body, true, false)?,
        DecorationKind::BotShave => shave(ctx, &d.body, false, true)?,
        DecorationKind::Underline => underline(ctx, &d.body, style, false)?,
        DecorationKind::Overline => underline(ctx, &d.body, style, true)?,
        DecorationKind::VPhantom => {
            let inner = layout_list(ctx, &d.body, style)?;
            BoxNode::phantom(Dim::ZERO, inner.height, inner.depth)
        }
        DecorationKind::HPhantom => {
            let inner = layout_list(ctx, &d.body, style)?;
            BoxNode::phantom(inner.width, Dim::ZERO, Dim::ZERO)
        }
        DecorationKind::Phantom => {
            let inner = layout_list(ctx, &d.body, style)?;
            BoxNode::phantom(inner.width, inner.height, inner.depth)
        }
        DecorationKind::Dddot => dotted_op(ctx, &d.body, style, 3)?,
        DecorationKind::Ddddot => dotted_op(ctx, &d.body, style, 4)?,
        _ => sp_accent(ctx, d.kind, style)?,
    };
    Ok((b, AtomClass::Ord))
}

/// `\boxed`: 0.4ex rules and 3ex padding around a display-style body, the
/// whole lowered by the 0.4ex + 3ex + depth chain so the frame straddles
/// the line symmetrically.
fn boxed(ctx: &Ctx, body: &MathList, _style: Style) -> Result<BoxNode, LayoutError> {
    let ex = ctx.constants.ex;
    let rule_w = ex.scale_frac(4, 10);
    let pad = ex.scale_int(3);
    let inner = layout_list(ctx, body, Style::DISPLAY)?;
    let inner_depth = inner.depth;
    let col_h = inner.height + pad;
    let col_d = inner.depth + pad;
    let row = hpack_natural(vec![
        BoxNode::rule(rule_w, col_h, col_d),
        BoxNode::kern(pad),
        inner,
        BoxNode::kern(pad),
        BoxNode::rule(rule_w, col_h, col_d),
    ]);
    let row_width = row.width;
    let stack = vpack(
        vec![
            BoxNode::rule(row_width, rule_w, Dim::ZERO),
            row,
            BoxNode::rule(row_width, rule_w, Dim::ZERO),
        ],
        VBaseline::Last,
        XAlign::Left,
    );
    Ok(stack.raised(-(rule_w + pad + inner_depth)))
}

/// Poor man's bold: three overstruck copies with the quoted kern ledger and
/// the third copy raised by width(0.7794mu)/18.
fn pmb(ctx: &Ctx, body: &MathList, style: Style) -> Result<(BoxNode, AtomClass), LayoutError> {
    let class = body_class(body);
    if let Some(text) = text_only(body) {
        // text-mode ledger: em kerns and a fixed raise
        let quad = ctx.quad(style);
        let copy = super::text::layout_text(ctx, &text, style);
        let w = copy.width;
        let raise = quad.scale_frac(433, 10000);
        let b = hpack_natural(vec![
            BoxNode::kern(-quad.scale_frac(25, 1000)),
            copy.clone(),
            BoxNode::kern(-w),
            BoxNode::kern(-quad.scale_frac(5, 100)),
            copy.clone(),
            BoxNode::kern(-w),
            BoxNode::kern(-quad.scale_frac(25, 1000)),
            copy.raised(raise),
        ]);
        return Ok((b, class));
    }
    let copy = layout_list(ctx, body, style)?;
    let w = copy.width;
    let raise = ctx.mu_dim(Mu::from_frac(7794, 10000), style).divide(18);
    let k045 = ctx.mu_dim(Mu::from_frac(-45, 100), style);
    let k090 = ctx.mu_dim(Mu::from_frac(-9, 10), style);
    let b = hpack_natural(vec![
        BoxNode::kern(k045),
        copy.clone(),
        BoxNode::kern(-w),
        BoxNode::kern(k090),
        copy.clone(),
        BoxNode::kern(-w),
        BoxNode::kern(k045),
        copy.raised(raise),
    ]);
    Ok((b, class))
}

fn body_class(body: &MathList) -> AtomClass {
    match body.0.first() {
        Some(Node::Atom(a)) if body.0.len() == 1 => match a.class {
            AtomClass::Bin | AtomClass::Rel => a.class,
            _ => AtomClass::Ord,
        },
        _ => AtomClass::Ord,
    }
}

fn text_only(body: &MathList) -> Option<String> {
    match body.0.as_slice() {
        [Node::Text(t)] => Some(t.clone()),
        _ => None,
    }
}

/// Smash variants zero height and/or depth while keeping content.
fn smash(
    ctx: &Ctx,
    body: &MathList,
    style: Style,
    top: bool,
    bottom: bool,
) -> Result<BoxNode, LayoutError> {
    let mut inner = layout_list(ctx, body, style)?;
    if top {
        inner.height = Dim::ZERO;
    }
    if bottom {
        inner.depth = Dim::ZERO;
    }
    Ok(inner)
}

/// `\pretend .. \haswidth ..`: the body centered in a box with the width of
/// the script-style reference.
fn pretend_width(ctx: &Ctx, d: &Decoration) -> Result<BoxNode, LayoutError> {
    let reference = d
        .reference
        .as_ref()
        .ok_or_else(|| LayoutError::UnknownDecoration("pretend".into()))?;
    let body = layout_list(ctx, &d.body, Style::SCRIPT)?;
    let target = layout_list(ctx, reference, Style::SCRIPT)?.width;
    let w = body.width;
    let slack = target - w;
    let left = slack.divide(2);
    Ok(hpack_natural(vec![
        BoxNode::kern(left),
        body,
        BoxNode::kern(slack - left),
    ]))
}

/// `\shave`: the body at display style with the operator vertical buffer
/// treated as zero. The top/bottom variants smash one side of the body and
/// pair it with a zero-width phantom keeping the shaved extent.
fn shave(ctx: &Ctx, body: &MathList, top: bool, bottom: bool) -> Result<BoxNode, LayoutError> {
    let constants = {
        let mut c = ctx.constants.clone();
        c.op_buffer_override = Some(Dim::ZERO);
        c
    };
    let shaved_ctx = Ctx {
        metrics: ctx.metrics,
        constants: &constants,
        display: ctx.display,
        limits: ctx.limits,
        display_mode: ctx.display_mode,
    };
    let shaved = layout_list(&shaved_ctx, body, Style::DISPLAY)?;
    if !top && !bottom {
        return Ok(shaved);
    }
    // One side of the normally-buffered body is smashed; the phantom
    // carries the shaved extent, trimming the buffer off that side.
    let phantom = BoxNode::phantom(Dim::ZERO, shaved.height, shaved.depth);
    let mut smashed = layout_list(ctx, body, Style::DISPLAY)?;
    if top {
        smashed.height = Dim::ZERO;
    }
    if bottom {
        smashed.depth = Dim::ZERO;
    }
    Ok(hpack_natural(vec![smashed, phantom]))
}

fn underline(
    ctx: &Ctx,
    body: &MathList,
    style: Style,
    over: bool,
) -> Result<BoxNode, LayoutError> {
    let theta = ctx.metrics.rule_thickness(style);
    let inner = layout_list(ctx, body, if over { style.cramp() } else { style })?;
    let w = inner.width;
    let rule = BoxNode::rule(w, theta, Dim::ZERO);
    if over {
        let rise = inner.height + theta.scale_int(3);
        let h = rise + theta + theta;
        let mut b = hpack_natural(vec![rule.raised(rise), BoxNode::kern(-w), inner]);
        b.height = h;
        Ok(b)
    } else {
        let drop = inner.depth + theta.scale_int(3);
        let mut b = hpack_natural(vec![
            rule.raised(-drop),
            BoxNode::kern(-w),
            inner,
        ]);
        b.depth = drop + theta;
        Ok(b)
    }
}

/// `\dddot`/`\ddddot`: a tight row of roman periods stacked over the body.
fn dotted_op(ctx: &Ctx, body: &MathList, style: Style, n: usize) -> Result<BoxNode, LayoutError> {
    let inner = layout_list(ctx, body, style)?;
    let dots = upright_word(ctx, &".".repeat(n), style);
    let ex = ctx.constants.ex;
    let rise = inner.height + ex.scale_int(2) - ex.scale_frac(14, 10);
    let dx = (inner.width - dots.width).divide(2);
    let w = dots.width;
    let h = (rise + dots.height).max(inner.height);
    let mut b = hpack_natural(vec![
        BoxNode::kern(dx),
        dots.raised(rise),
        BoxNode::kern(-dx - w),
        inner,
    ]);
    b.height = h;
    Ok(b)
}

/// The postfix script decorations (`\sphat` etc.): small smashed accent
/// shapes chosen by the script style in force.
fn sp_accent(ctx: &Ctx, kind: DecorationKind, style: Style) -> Result<BoxNode, LayoutError> {
    let ex = ctx.constants.ex;
    let small = !matches!(style.level, StyleLevel::ScriptScript);
    let b = match kind {
        DecorationKind::SpHat => {
            let id = if small {
                GlyphId::new(Family::Ex, 0x62)
            } else {
                GlyphId::new(Family::Roman, 0x5E)
            };
            let g = glyph_box(ctx, id, '\u{0302}', style);
            let lower = if small {
                ex.scale_int(4)
            } else {
                ex.scale_int(3)
            };
            let mut v = g.raised(-lower);
            v.depth = Dim::ZERO;
            let lead = ctx.mu_dim(Mu::from_units(if small { 6 } else { 3 }), style);
            hpack_natural(vec![BoxNode::kern(lead), v])
        }
        DecorationKind::SpCheck => symbol_sp(ctx, "vee", style)?,
        DecorationKind::SpTilde => symbol_sp(ctx, "sim", style)?,
        DecorationKind::SpAcute => lowered_accent(ctx, 0x13, '\u{0301}', style),
        DecorationKind::SpGrave => lowered_accent(ctx, 0x12, '\u{0300}', style),
        DecorationKind::SpDot => raised_dots(ctx, 1, style),
        DecorationKind::SpDdot => raised_dots(ctx, 2, style),
        DecorationKind::SpDddot => raised_dots(ctx, 3, style),
        DecorationKind::SpDdddot => raised_dots(ctx, 4, style),
        DecorationKind::SpBreve => lowered_accent(ctx, 0x15, '\u{0306}', style),
        DecorationKind::SpBar => {
            let g = glyph_box(ctx, GlyphId::new(Family::Sy, 0x00), '\u{2212}', style);
            g
        }
        DecorationKind::SpVec => symbol_sp(ctx, "rightarrow", style)?,
        other => return Err(LayoutError::UnknownDecoration(other.command().into())),
    };
    Ok(b)
}

fn symbol_sp(ctx: &Ctx, name: &str, style: Style) -> Result<BoxNode, LayoutError> {
    let mut delta = Dim::ZERO;
    super::symbol_box(ctx, name, style, &mut delta)
}

fn lowered_accent(ctx: &Ctx, slot: u8, ch: char, style: Style) -> BoxNode {
    let g = glyph_box(ctx, GlyphId::new(Family::Roman, slot), ch, style);
    let lower = ctx.metrics.x_height(style);
    let neg = ctx.mu_dim(Mu::from_units(-3), style);
    let mut v = g.raised(-lower);
    v.depth = Dim::ZERO;
    hpack_natural(vec![BoxNode::kern(neg), v])
}

fn raised_dots(ctx: &Ctx, n: usize, style: Style) -> BoxNode {
    let dots = upright_word(ctx, &".".repeat(n), style);
    dots.raised(ctx.constants.ex)
}
