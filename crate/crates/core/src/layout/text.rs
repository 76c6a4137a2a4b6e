//! Opaque text fragments inside math, sized by the surrounding style.

use crate::boxes::{hpack_natural, BoxNode};
use crate::dim::Dim;
use crate::metrics::{Family, GlyphId};
use crate::style::Style;

use super::{glyph_box, Ctx};

/// Lays out a `\text{..}` fragment: roman glyphs at the style's size, with
/// interword spaces and the text-mode spacing escapes honored.
pub fn layout_text(ctx: &Ctx, text: &str, style: Style) -> BoxNode {
    let quad = ctx.quad(style);
    let mut items = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            ' ' => items.push(BoxNode::kern(quad.scale_frac(1, 3))),
            '\\' => match chars.next() {
                Some(',') => items.push(BoxNode::kern(quad.scale_frac(16667, 100000))),
                Some('!') => items.push(BoxNode::kern(-quad.scale_frac(16667, 100000))),
                Some(';') => items.push(BoxNode::kern(quad.scale_frac(27777, 100000))),
                Some('>') => items.push(BoxNode::kern(quad.scale_frac(222222, 1000000))),
                Some(other) if other.is_ascii_alphabetic() => {
                    // an unknown control word renders as its letters
                    items.push(glyph_box(
                        ctx,
                        GlyphId::new(Family::Roman, other as u8),
                        other,
                        style,
                    ));
                    while let Some(&n) = chars.peek() {
                        if n.is_ascii_alphabetic() {
                            chars.next();
                            items.push(glyph_box(
                                ctx,
                                GlyphId::new(Family::Roman, n as u8),
                                n,
                                style,
                            ));
                        } else {
                            break;
                        }
                    }
                }
                Some(other) => items.push(glyph_box(
                    ctx,
                    GlyphId::new(Family::Roman, other as u8),
                    other,
                    style,
                )),
                None => {}
            },
            c if (c as u32) < 0x80 => items.push(glyph_box(
                ctx,
                GlyphId::new(Family::Roman, c as u8),
                c,
                style,
            )),
            c => items.push(glyph_box(ctx, GlyphId::new(Family::Roman, b'?'), c, style)),
        }
    }
    hpack_natural(items)
}

/// The width a text fragment would take, for measurement passes.
pub fn text_width(ctx: &Ctx, text: &str, style: Style) -> Dim {
    layout_text(ctx, text, style).width
}
