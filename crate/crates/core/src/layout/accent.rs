//! Math accents with the skew-correction ledger.

use crate::ast::{Accent, MathList, Node, Nucleus};
use crate::boxes::{hpack_natural, BoxKind, BoxNode, Child};
use crate::dim::{dim_to_mu_units, Dim, Mu};
use crate::error::LayoutError;
use crate::metrics::{Family, GlyphId};
use crate::style::Style;
use crate::symbols::registry;

use super::{char_glyph, layout_list, Ctx};

/// Accent glyph slots, from the accent table.
fn accent_glyph(name: &str) -> Option<(GlyphId, char)> {
    Some(match name {
        "hat" => (GlyphId::new(Family::Roman, 0x5E), '\u{0302}'),
        "check" => (GlyphId::new(Family::Roman, 0x14), '\u{030C}'),
        "tilde" => (GlyphId::new(Family::Roman, 0x7E), '\u{0303}'),
        "acute" => (GlyphId::new(Family::Roman, 0x13), '\u{0301}'),
        "grave" => (GlyphId::new(Family::Roman, 0x12), '\u{0300}'),
        "dot" => (GlyphId::new(Family::Roman, 0x5F), '\u{0307}'),
        "ddot" => (GlyphId::new(Family::Roman, 0x7F), '\u{0308}'),
        "breve" => (GlyphId::new(Family::Roman, 0x15), '\u{0306}'),
        "bar" => (GlyphId::new(Family::Roman, 0x16), '\u{0304}'),
        "vec" => (GlyphId::new(Family::Italic, 0x7E), '\u{20D7}'),
        "widehat" => (GlyphId::new(Family::Ex, 0x62), '\u{0302}'),
        "widetilde" => (GlyphId::new(Family::Ex, 0x65), '\u{0303}'),
        _ => return None,
    })
}

/// The skew of a base: the skew metric of its final glyph, doubled per the
/// accent ledger. A base that ends in anything but a glyph has no skew.
fn base_skew(ctx: &Ctx, list: &MathList, style: Style) -> Dim {
    let Some(node) = list.0.last() else {
        return Dim::ZERO;
    };
    let glyph = match node {
        Node::Atom(a) => match &a.nucleus {
            Nucleus::Char(c) => char_glyph(*c, None).ok().map(|(id, _)| id),
            Nucleus::Symbol(name) => registry().lookup(name).ok().map(|i| i.glyph),
            Nucleus::List(inner) => return base_skew(ctx, inner, style),
            _ => None,
        },
        Node::Accent(inner) => return base_skew(ctx, &inner.base, style),
        _ => None,
    };
    match glyph {
        Some(id) => ctx.metrics.glyph(id, style).skew,
        None => Dim::ZERO,
    }
}

/// Whether the base is itself an exact accent, which leaves its skew ledger
/// for the outer accent to consume (the stacked-accents path).
fn nested_exact(list: &MathList) -> Option<&Accent> {
    match list.0.last() {
        Some(Node::Accent(a)) if a.exact => Some(a),
        Some(Node::Atom(atom)) => match &atom.nucleus {
            Nucleus::List(inner) => nested_exact(inner),
            _ => None,
        },
        _ => None,
    }
}

pub fn layout_accent(ctx: &Ctx, a: &Accent, style: Style) -> Result<BoxNode, LayoutError> {
    let (id, ch) =
        accent_glyph(&a.slot).ok_or_else(|| LayoutError::UnknownAccent(a.slot.clone()))?;
    let base = layout_list(ctx, &a.base, style.cramp())?;
    let skew = base_skew(ctx, &a.base, style);
    // ledger: s = 2 * skew, m = dimentomu(s) + 1
    let s = skew.scale_int(2);
    let shift_mu = dim_to_mu_units(s) + 1;
    let inner_is_exact = nested_exact(&a.base).is_some();
    if a.exact && inner_is_exact {
        // widen the base by m mu, accent the widened box, pull back
        let m_kern = ctx.mu_dim(Mu::from_units(shift_mu), style);
        let widened = hpack_natural(vec![base, BoxNode::kern(m_kern)]);
        let accented = plain_accent(ctx, widened, id, ch, Dim::ZERO, style);
        return Ok(hpack_natural(vec![accented, BoxNode::kern(-m_kern)]));
    }
    Ok(plain_accent(ctx, base, id, ch, skew, style))
}

/// The plain accent path: the accent glyph centered over the base,
/// shifted right by the skew, dropped to hug short bases.
pub fn plain_accent(
    ctx: &Ctx,
    base: BoxNode,
    id: GlyphId,
    ch: char,
    skew: Dim,
    style: Style,
) -> BoxNode {
    let g = ctx.metrics.glyph(id, style);
    let accent = BoxNode::glyph(id, ch, g.width, g.height, g.depth);
    let x_height = ctx.metrics.x_height(style);
    let delta = base.height.min(x_height);
    // the accent baseline rides at base height, lowered by the unused
    // x-height clearance
    let rise = base.height - delta + x_height;
    let dx = (base.width - accent.width).divide(2) + skew;
    let height = (rise + accent.height).max(base.height);
    let width = base.width;
    let depth = base.depth;
    BoxNode {
        kind: BoxKind::HBox,
        width,
        height,
        depth,
        children: vec![
            Child {
                dx: Dim::ZERO,
                dy: Dim::ZERO,
                node: zero_advance_overlay(accent, dx, rise),
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
    }
}

/// Wraps a box so it renders at (dx, rise) but advances nothing.
fn zero_advance_overlay(node: BoxNode, dx: Dim, rise: Dim) -> BoxNode {
    let w = node.width;
    let mut overlay = hpack_natural(vec![
        BoxNode::kern(dx),
        node.raised(rise),
        BoxNode::kern(-dx - w),
    ]);
    overlay.height = Dim::ZERO.max(overlay.height);
    overlay
}
