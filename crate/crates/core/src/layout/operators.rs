//! Named operators, `\operatorname`, the limit-word constructions, and
//! multiple integrals.

use crate::ast::{LimitsRequest, MultInt, MultIntKind, VarLimKind};
use crate::boxes::{hpack_natural, BoxNode};
use crate::dim::{Dim, Mu};
use crate::dots::{DotsDecision, DotsKind};
use crate::error::LayoutError;
use crate::metrics::{Family, GlyphId};
use crate::style::{Style, StyleLevel};
use crate::symbols::{operator_info, registry, AtomClass, LimitsDefault};

use super::{glyph_box, upright_word, Ctx, Item};

/// The limits default an operator-name nucleus carries.
pub fn opname_limits(name: Option<&str>, with_limits: bool, ctx: &Ctx) -> LimitsDefault {
    match name {
        Some(n) => operator_info(n, &ctx.limits)
            .map(|(_, l, _)| l)
            .unwrap_or(LimitsDefault::NoLimits),
        None if with_limits => ctx.limits.names,
        None => LimitsDefault::NoLimits,
    }
}

/// Upright operator text. The re-coded punctuation of the original renders
/// as text-style glyphs; `\,` inside the name is a text thin space.
pub fn layout_operatorname(ctx: &Ctx, text: &str, style: Style) -> BoxNode {
    let resolved = match registry().lookup(text) {
        _ => text,
    };
    let _ = resolved;
    let display_text = operator_info(text, &ctx.limits)
        .map(|(t, _, _)| t)
        .unwrap_or_else(|_| text.to_string());
    let mut items = Vec::new();
    let mut chars = display_text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some(',') => {
                    items.push(BoxNode::kern(ctx.quad(style).scale_frac(16667, 100000)));
                }
                Some(other) => {
                    items.push(glyph_box(
                        ctx,
                        GlyphId::new(Family::Roman, other as u8),
                        other,
                        style,
                    ));
                }
                None => {}
            },
            ' ' => items.push(BoxNode::kern(ctx.quad(style).scale_frac(1, 3))),
            '.' => items.push(glyph_box(
                ctx,
                GlyphId::new(Family::Italic, 0x3A),
                '.',
                style,
            )),
            '-' => items.push(glyph_box(
                ctx,
                GlyphId::new(Family::Roman, 0x2D),
                '-',
                style,
            )),
            c => items.push(glyph_box(
                ctx,
                GlyphId::new(Family::Roman, c as u8),
                c,
                style,
            )),
        }
    }
    hpack_natural(items)
}

/// `\varinjlim` and friends: "lim" joined to an under-arrow or under/over
/// line built from the leader machinery.
pub fn layout_varlim(ctx: &Ctx, kind: VarLimKind, style: Style) -> Result<BoxNode, LayoutError> {
    let word = upright_word(ctx, "lim", style);
    let w = word.width;
    let b = match kind {
        VarLimKind::Inj => {
            let arrow = super::overunder::arrow_leader(ctx, w, None, Some("rightarrow"), style);
            under_stack(ctx, word, arrow)
        }
        VarLimKind::Proj => {
            let arrow = super::overunder::arrow_leader(ctx, w, Some("leftarrow"), None, style);
            under_stack(ctx, word, arrow)
        }
        VarLimKind::LimInf => {
            let theta = ctx.metrics.rule_thickness(style);
            let rule = BoxNode::rule(w, theta, Dim::ZERO);
            let drop = ctx.metrics.x_height(style).scale_frac(2, 10)
                + word.depth;
            under_stack(ctx, word, rule.raised(-drop + theta))
        }
        VarLimKind::LimSup => {
            let theta = ctx.metrics.rule_thickness(style);
            let rule = BoxNode::rule(w, theta, Dim::ZERO);
            let rise = word.height + theta.scale_int(3);
            let mut b = hpack_natural(vec![rule.raised(rise), BoxNode::kern(-w), word]);
            b.height = rise + theta;
            b
        }
    };
    Ok(b)
}

fn under_stack(ctx: &Ctx, word: BoxNode, under: BoxNode) -> BoxNode {
    let w = word.width.max(under.width);
    let center = |b: BoxNode| {
        let dx = (w - b.width).divide(2);
        let bw = b.width;
        hpack_natural(vec![BoxNode::kern(dx), b, BoxNode::kern(w - dx - bw)])
    };
    let word = center(word);
    let under = center(under);
    let pull = ctx.constants.ex;
    let under_base = word.depth - pull + under.height;
    let depth = under_base + under.depth;
    crate::boxes::BoxNode {
        kind: crate::boxes::BoxKind::VBox,
        width: w,
        height: word.height,
        depth,
        children: vec![
            crate::boxes::Child {
                dx: Dim::ZERO,
                dy: Dim::ZERO,
                node: word,
            },
            crate::boxes::Child {
                dx: Dim::ZERO,
                dy: -under_base,
                node: under,
            },
        ],
        glue: None,
        glyph: None,
        note: None,
    }
}

/// Multiple integrals: glyph clusters with negative inter-kerns, the
/// dotted form, and the intic wrap when shared limits stack.
pub fn layout_multint(
    ctx: &Ctx,
    m: &MultInt,
    style: Style,
    items: &mut Vec<Item>,
) -> Result<(), LayoutError> {
    let display = style.is_display();
    let int_glyph = |ctx: &Ctx| -> BoxNode {
        let mut id = GlyphId::new(Family::Ex, 0x52);
        if display {
            let big = GlyphId::new(Family::Ex, 0x52 + 0x80);
            if ctx.metrics.has_glyph(big) {
                id = big;
            }
        }
        let g = ctx.metrics.glyph(id, style);
        let b = BoxNode::glyph(id, '\u{222B}', g.width, g.height, g.depth);
        let shift = ctx.metrics.axis_height(style) - (g.height - g.depth).divide(2);
        b.raised(shift)
    };
    let intkern = ctx.mu_dim(Mu::from_units(if display { -9 } else { -6 }), style);
    let n = m.kind.count();
    let limits = match m.limits {
        LimitsRequest::Limits => true,
        LimitsRequest::NoLimits => false,
        LimitsRequest::Auto => {
            ctx.limits.ints == LimitsDefault::DisplayLimits && !is_inner(ctx)
        }
    };
    let intic = intic_amount(ctx, style);
    if limits {
        // the cluster is one operator: limits center over cluster + intic
        let mut cluster = vec![BoxNode::kern(intic)];
        push_cluster(ctx, &mut cluster, m.kind, n, intkern, style, &int_glyph);
        let nucleus = hpack_natural(cluster);
        let sup = m
            .sup
            .as_ref()
            .map(|l| super::layout_list(ctx, l, style.sup_style()))
            .transpose()?;
        let sub = m
            .sub
            .as_ref()
            .map(|l| super::layout_list(ctx, l, style.sub_style()))
            .transpose()?;
        let stacked = super::scripts::stack_limits(ctx, nucleus, sup, sub, style, Dim::ZERO);
        items.push(Item::transparent(BoxNode::kern(-intic), style));
        items.push(Item::atom(stacked, AtomClass::Op, style));
    } else {
        // separate operator atoms; scripts attach to the last one
        let mut cluster: Vec<BoxNode> = vec![];
        push_cluster(ctx, &mut cluster, m.kind, n, intkern, style, &int_glyph);
        let last = cluster.pop().expect("at least one integral");
        for b in cluster {
            if b.kind == crate::boxes::BoxKind::Kern || b.glyph.is_none() {
                // kerns and dot groups pass through transparently
                if b.kind == crate::boxes::BoxKind::Kern {
                    items.push(Item::transparent(b, style));
                } else {
                    items.push(Item::atom(b, AtomClass::Inner, style));
                }
            } else {
                items.push(Item::atom(b, AtomClass::Op, style));
            }
        }
        let id = ctx.metrics.glyph(GlyphId::new(Family::Ex, 0x52), style);
        let delta = id.italic;
        let sup = m
            .sup
            .as_ref()
            .map(|l| super::layout_list(ctx, l, style.sup_style()))
            .transpose()?;
        let sub = m
            .sub
            .as_ref()
            .map(|l| super::layout_list(ctx, l, style.sub_style()))
            .transpose()?;
        let with_scripts =
            super::scripts::side_scripts(ctx, last, sup, sub, style, delta);
        items.push(Item::atom(with_scripts, AtomClass::Op, style));
    }
    Ok(())
}

fn is_inner(ctx: &Ctx) -> bool {
    !ctx.display_mode
}

fn intic_amount(ctx: &Ctx, style: Style) -> Dim {
    let quad = ctx.quad(style);
    if style.is_display() {
        quad.scale_frac(1, 2)
    } else {
        quad.scale_frac(4, 10)
    }
}

fn push_cluster(
    ctx: &Ctx,
    out: &mut Vec<BoxNode>,
    kind: MultIntKind,
    n: usize,
    intkern: Dim,
    style: Style,
    int_glyph: &dyn Fn(&Ctx) -> BoxNode,
) {
    out.push(int_glyph(ctx));
    if kind == MultIntKind::IDotsInt {
        out.push(int_dots(ctx, style));
    } else {
        out.push(BoxNode::kern(intkern));
    }
    for _ in 2..n {
        out.push(int_glyph(ctx));
        out.push(BoxNode::kern(intkern));
    }
    out.push(int_glyph(ctx));
}

/// The dots between dotted integrals: centered dots with 1.5mu gaps at text
/// size, 1mu in scripts, the plain inner form in display.
fn int_dots(ctx: &Ctx, style: Style) -> BoxNode {
    match style.level {
        StyleLevel::Display => crate::dots::dots_box(
            DotsDecision {
                kind: DotsKind::Centered,
                leading_thin: false,
                trailing_thin: false,
            },
            style,
            ctx.metrics,
            ctx.constants,
        ),
        level => {
            let gap = if level == StyleLevel::Text {
                ctx.mu_dim(Mu::from_frac(3, 2), style)
            } else {
                ctx.mu_dim(Mu::from_units(1), style)
            };
            let dot = glyph_box(ctx, GlyphId::new(Family::Sy, 0x01), '\u{22C5}', style);
            hpack_natural(vec![
                dot.clone(),
                BoxNode::kern(gap),
                dot.clone(),
                BoxNode::kern(gap),
                dot,
            ])
        }
    }
}
