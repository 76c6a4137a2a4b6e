//! Stacked annotations, extensible over/under arrows and braces, side
//! scripts on big operators, and the mod family.

use crate::ast::{MathList, ModKind, ModOp, Node, OverUnder, OverUnderKind, SideSet};
use crate::boxes::{hpack_natural, BoxKind, BoxNode, Child};
use crate::dim::{Dim, Mu};
use crate::error::LayoutError;
use crate::metrics::{Family, GlyphId};
use crate::spacing::med_mu;
use crate::style::Style;
use crate::symbols::AtomClass;

use super::{glyph_box, layout_list, upright_word, Ctx, Item};

/// The class the stacked forms take: Bin over Bin, Rel over Rel, Ord
/// otherwise (the declarative form of the width-trick test).
fn binrel_class(base: &MathList) -> AtomClass {
    match base.0.as_slice() {
        [Node::Atom(a)] => match a.class {
            AtomClass::Bin | AtomClass::Rel => a.class,
            _ => AtomClass::Ord,
        },
        _ => AtomClass::Ord,
    }
}

pub fn layout_overunder(
    ctx: &Ctx,
    ou: &OverUnder,
    style: Style,
) -> Result<(BoxNode, AtomClass), LayoutError> {
    match ou.kind {
        OverUnderKind::Overset | OverUnderKind::Underset => {
            let class = binrel_class(&ou.base);
            let base = layout_list(ctx, &ou.base, style)?;
            let script = layout_list(ctx, &ou.annotation, style.sup_style())?;
            let over = ou.kind == OverUnderKind::Overset;
            Ok((stack_annotation(ctx, base, script, over, style), class))
        }
        OverUnderKind::OversetBrace | OverUnderKind::UndersetBrace => {
            let over = ou.kind == OverUnderKind::OversetBrace;
            let base = layout_list(ctx, &ou.base, style)?;
            let brace = brace_fill(ctx, base.width, over, style);
            let with_brace = if over {
                stack_annotation(ctx, base, brace, true, style)
            } else {
                stack_annotation(ctx, base, brace, false, style)
            };
            let script = layout_list(ctx, &ou.annotation, style.sup_style())?;
            Ok((
                stack_annotation(ctx, with_brace, script, over, style),
                AtomClass::Op,
            ))
        }
        OverUnderKind::OverRightArrow
        | OverUnderKind::OverLeftArrow
        | OverUnderKind::OverLeftRightArrow
        | OverUnderKind::UnderRightArrow
        | OverUnderKind::UnderLeftArrow
        | OverUnderKind::UnderLeftRightArrow => {
            let over = ou.kind.is_over();
            let base = layout_list(ctx, &ou.base, style)?;
            let (left_head, right_head) = arrow_heads(ou.kind);
            let arrow = arrow_leader(ctx, base.width, left_head, right_head, style);
            Ok((arrow_stack(ctx, base, arrow, over), AtomClass::Ord))
        }
    }
}

fn arrow_heads(kind: OverUnderKind) -> (Option<&'static str>, Option<&'static str>) {
    match kind {
        OverUnderKind::OverRightArrow | OverUnderKind::UnderRightArrow => {
            (None, Some("rightarrow"))
        }
        OverUnderKind::OverLeftArrow | OverUnderKind::UnderLeftArrow => {
            (Some("leftarrow"), None)
        }
        _ => (Some("leftarrow"), Some("rightarrow")),
    }
}

/// An annotation stacked over/under an operator-like base with the limit
/// machinery (zero-kerned `\mathop` with `\limits`).
fn stack_annotation(
    ctx: &Ctx,
    base: BoxNode,
    annotation: BoxNode,
    over: bool,
    style: Style,
) -> BoxNode {
    let (sup, sub) = if over {
        (Some(annotation), None)
    } else {
        (None, Some(annotation))
    };
    super::scripts::stack_limits(ctx, base, sup, sub, style, Dim::ZERO)
}

/// The minus-sign leader: end glyph(s) plus repeated `-` segments
/// overlapped 2mu, stretched to the content width.
pub fn arrow_leader(
    ctx: &Ctx,
    content_width: Dim,
    left_head: Option<&str>,
    right_head: Option<&str>,
    style: Style,
) -> BoxNode {
    let minus = glyph_box(ctx, GlyphId::new(Family::Sy, 0x00), '\u{2212}', style);
    let m2 = ctx.mu_dim(Mu::from_units(2), style);
    let m6 = ctx.mu_dim(Mu::from_units(6), style);
    let left = match left_head {
        Some(name) => head_glyph(ctx, name, style),
        None => minus.clone(),
    };
    let right = match right_head {
        Some(name) => head_glyph(ctx, name, style),
        None => minus.clone(),
    };
    // natural width of the rigid parts
    let rigid = left.width + right.width - m6 - m6;
    let fill = (content_width - rigid).max(Dim::ZERO);
    // segments of (-2mu, minus, -2mu)
    let seg_w = (minus.width - m2 - m2).max(Dim(1));
    let n = (fill.sp() / seg_w.sp()).max(0);
    let mut items = vec![left, BoxNode::kern(-m6)];
    let lead_slack = fill - Dim(n * seg_w.sp());
    let front = lead_slack.divide(2);
    items.push(BoxNode::kern(front));
    for _ in 0..n {
        items.push(BoxNode::kern(-m2));
        items.push(minus.clone());
        items.push(BoxNode::kern(-m2));
    }
    items.push(BoxNode::kern(lead_slack - front));
    items.push(BoxNode::kern(-m6));
    items.push(right);
    hpack_natural(items)
}

fn head_glyph(ctx: &Ctx, name: &str, style: Style) -> BoxNode {
    let mut delta = Dim::ZERO;
    super::symbol_box(ctx, name, style, &mut delta)
        .unwrap_or_else(|_| BoxNode::kern(Dim::ZERO))
}

/// Content and arrow pulled together by an `ex` constant, no interline gap.
fn arrow_stack(ctx: &Ctx, base: BoxNode, arrow: BoxNode, over: bool) -> BoxNode {
    let w = base.width.max(arrow.width);
    let center = |b: BoxNode| -> BoxNode {
        let dx = (w - b.width).divide(2);
        let bw = b.width;
        hpack_natural(vec![BoxNode::kern(dx), b, BoxNode::kern(w - dx - bw)])
    };
    let base = center(base);
    let arrow = center(arrow);
    let pull = ctx.constants.ex;
    if over {
        let gap = -pull;
        let arrow_base = base.height + gap + arrow.depth + arrow.height;
        let height = arrow_base;
        let b = BoxNode {
            kind: BoxKind::VBox,
            width: w,
            height,
            depth: base.depth,
            children: vec![
                Child {
                    dx: Dim::ZERO,
                    dy: base.height + gap + arrow.depth,
                    node: arrow,
                },
                Child {
                    dx: Dim::ZERO,
                    dy: Dim::ZERO,
                    node: base,
                },
            ],
            glue: None,
            glyph: None,
            note: None,
        };
        b
    } else {
        let gap = -pull;
        let arrow_base = base.depth + gap + arrow.height;
        let depth = arrow_base + arrow.depth;
        BoxNode {
            kind: BoxKind::VBox,
            width: w,
            height: base.height,
            depth,
            children: vec![
                Child {
                    dx: Dim::ZERO,
                    dy: Dim::ZERO,
                    node: base,
                },
                Child {
                    dx: Dim::ZERO,
                    dy: -arrow_base,
                    node: arrow,
                },
            ],
            glue: None,
            glyph: None,
            note: None,
        }
    }
}

/// An extensible brace: end pieces and two rule-leader segments.
pub fn brace_fill(ctx: &Ctx, width: Dim, down: bool, style: Style) -> BoxNode {
    let (a, b, c, d) = if down {
        (0x7A, 0x7B, 0x7C, 0x7D) // braceld braceru bracelu bracerd
    } else {
        (0x7C, 0x7D, 0x7A, 0x7B)
    };
    let g = |slot: u8| glyph_box(ctx, GlyphId::new(Family::Ex, slot), '\u{23AF}', style);
    let left = g(a);
    let mid_r = g(b);
    let mid_l = g(c);
    let right = g(d);
    let rule_h = left.height;
    let rigid = left.width + mid_r.width + mid_l.width + right.width;
    let fill = (width - rigid).max(Dim::ZERO);
    let half = fill.divide(2);
    hpack_natural(vec![
        left,
        BoxNode::rule(half, rule_h, Dim::ZERO),
        mid_r,
        mid_l,
        BoxNode::rule(fill - half, rule_h, Dim::ZERO),
        right,
    ])
}

/// `\sideset`: pre-scripts and post-scripts attached to a big operator with
/// the width bookkeeping of the quoted kern sequence.
pub fn layout_sideset(ctx: &Ctx, s: &SideSet, style: Style) -> Result<BoxNode, LayoutError> {
    // box1: phantom(base) carrying the pre-scripts; box2: base carrying the
    // post-scripts
    let base_plain = layout_list(ctx, &s.base, Style::DISPLAY)?;
    let phantom = BoxNode::phantom(Dim::ZERO, base_plain.height, base_plain.depth);
    let pre = scripts_on(ctx, phantom.clone(), &s.pre, style)?;
    let post = scripts_on(ctx, base_plain.clone(), &s.post, style)?;
    let w1 = pre.width + base_plain.width;
    let w2 = post.width;
    // kern w1, kern −w2, op{hskip w2, hskip −w1, pre base post}
    let inner = hpack_natural(vec![
        BoxNode::kern(w2),
        BoxNode::kern(-w1),
        pre,
        base_plain,
        post_minus_base(post),
    ]);
    Ok(hpack_natural(vec![
        BoxNode::kern(w1),
        BoxNode::kern(-w2),
        inner,
    ]))
}

fn post_minus_base(post: BoxNode) -> BoxNode {
    post
}

/// Attaches the script list of a sideset operand (`_i^j` forms) to a box.
fn scripts_on(ctx: &Ctx, nucleus: BoxNode, scripts: &MathList, style: Style) -> Result<BoxNode, LayoutError> {
    // the operand list holds one atom with scripts and an empty nucleus
    match scripts.0.as_slice() {
        [Node::Atom(a)] if matches!(&a.nucleus, crate::ast::Nucleus::List(l) if l.is_empty()) => {
            let sup = a
                .sup
                .as_ref()
                .map(|l| layout_list(ctx, l, style.sup_style()))
                .transpose()?;
            let sub = a
                .sub
                .as_ref()
                .map(|l| layout_list(ctx, l, style.sub_style()))
                .transpose()?;
            Ok(super::scripts::side_scripts(
                ctx,
                nucleus,
                sup,
                sub,
                style,
                Dim::ZERO,
            ))
        }
        _ => {
            let extra = layout_list(ctx, scripts, style)?;
            Ok(hpack_natural(vec![nucleus, extra]))
        }
    }
}

/// The mod family: upright "mod" with the quoted kern ledgers.
pub fn layout_mod(
    ctx: &Ctx,
    m: &ModOp,
    style: Style,
    items: &mut Vec<Item>,
) -> Result<(), LayoutError> {
    let word = upright_word(ctx, "mod", style);
    let inner = !ctx.display_mode;
    match m.kind {
        ModKind::Bmod => {
            // −medmuskip 5mu [Bin mod] penalty 5mu −medmuskip
            let med = ctx.mu_dim(med_mu(), style);
            let five = ctx.mu_dim(Mu::from_units(5), style);
            items.push(Item::transparent(BoxNode::kern(-med), style));
            items.push(Item::transparent(BoxNode::kern(five), style));
            items.push(Item::atom(word, AtomClass::Bin, style));
            items.push(Item::transparent(
                BoxNode::kern_note(Dim::ZERO, "penalty=900"),
                style,
            ));
            items.push(Item::transparent(BoxNode::kern(five), style));
            items.push(Item::transparent(BoxNode::kern(-med), style));
        }
        ModKind::Mod => {
            let lead = ctx.mu_dim(Mu::from_units(if inner { 12 } else { 18 }), style);
            items.push(Item::transparent(BoxNode::kern(lead), style));
            items.push(Item::atom(word, AtomClass::Ord, style));
            let thin2 = ctx.mu_dim(Mu::from_units(6), style);
            items.push(Item::transparent(BoxNode::kern(thin2), style));
            if let Some(arg) = &m.arg {
                let b = layout_list(ctx, arg, style)?;
                items.push(Item::atom(b, AtomClass::Ord, style));
            }
        }
        ModKind::Pod | ModKind::Pmod => {
            let lead = ctx.mu_dim(Mu::from_units(if inner { 8 } else { 18 }), style);
            items.push(Item::transparent(BoxNode::kern(lead), style));
            let mut seq = vec![glyph_box(
                ctx,
                GlyphId::new(Family::Roman, b'('),
                '(',
                style,
            )];
            if m.kind == ModKind::Pmod {
                seq.push(word);
                seq.push(BoxNode::kern(ctx.mu_dim(Mu::from_units(6), style)));
            }
            if let Some(arg) = &m.arg {
                seq.push(layout_list(ctx, arg, style)?);
            }
            seq.push(glyph_box(
                ctx,
                GlyphId::new(Family::Roman, b')'),
                ')',
                style,
            ));
            items.push(Item::atom(hpack_natural(seq), AtomClass::Ord, style));
        }
    }
    Ok(())
}
