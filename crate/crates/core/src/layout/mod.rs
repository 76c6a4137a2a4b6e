//! Layout of math lists to box trees: atom translation, the spacing pass,
//! scripts and limits, and the inline constructs.

mod accent;
mod decoration;
pub mod scripts;
mod frac;
mod operators;
mod overunder;
mod radical;
mod text;

pub use accent::layout_accent;
pub use decoration::layout_decoration;
pub use frac::{layout_cfrac, layout_fraction};
pub use operators::{layout_multint, layout_operatorname};
pub use overunder::{layout_mod, layout_overunder, layout_sideset};
pub use radical::layout_radical;
pub use text::{layout_text, text_width};

use crate::ast::{
    Atom, Delim, MathList, Node, Nucleus, SpaceCommand,
};
use crate::boxes::{hpack_natural, BoxNode, Child};
use crate::config::DisplayConfig;
use crate::constants::LayoutConstants;
use crate::dim::{mu_to_dim, Dim, Mu};
use crate::dots::dots_box;
use crate::error::LayoutError;
use crate::metrics::{Family, GlyphId, Metrics};
use crate::spacing::{explicit_space, pair_glue, pair_glue_box, thin_mu};
use crate::style::{Style, StyleLevel};
use crate::symbols::{
    registry, variant_map, variant_unicode, AtomClass, LimitsDefault, LimitsConfig, Variant,
};

/// Everything the layout rules read; immutable during a layout run.
pub struct Ctx<'a> {
    pub metrics: &'a Metrics,
    pub constants: &'a LayoutConstants,
    pub display: &'a DisplayConfig,
    pub limits: LimitsConfig,
    /// Whether the expression is a display (`$$`) rather than inline.
    pub display_mode: bool,
}

impl<'a> Ctx<'a> {
    pub fn new(
        metrics: &'a Metrics,
        constants: &'a LayoutConstants,
        display: &'a DisplayConfig,
    ) -> Ctx<'a> {
        Ctx {
            metrics,
            constants,
            display,
            limits: LimitsConfig::default(),
            display_mode: true,
        }
    }

    pub fn quad(&self, style: Style) -> Dim {
        self.metrics.quad(style)
    }

    pub fn mu_dim(&self, mu: Mu, style: Style) -> Dim {
        mu_to_dim(mu, self.quad(style))
    }

    /// The operator vertical buffer (extension fontdimen 13), honoring a
    /// `\ChangeBuffer` override at the text size.
    pub fn op_buffer(&self, style: Style) -> Dim {
        match self.constants.op_buffer_override {
            Some(d) => {
                let (num, den) = match style.level {
                    StyleLevel::Display | StyleLevel::Text => (1, 1),
                    StyleLevel::Script => (7, 10),
                    StyleLevel::ScriptScript => (1, 2),
                };
                d.scale_frac(num, den)
            }
            None => self.metrics.big_op_spacing(4, style),
        }
    }

    pub fn strut(&self) -> BoxNode {
        BoxNode::rule(
            Dim::ZERO,
            self.constants.strut_height,
            self.constants.strut_depth,
        )
    }

    /// An invisible box with the height and depth of `(` at the style.
    pub fn math_strut(&self, style: Style) -> BoxNode {
        let g = self
            .metrics
            .glyph(GlyphId::new(Family::Roman, b'('), style);
        BoxNode::phantom(Dim::ZERO, g.height, g.depth)
    }
}

/// One translated element: its box, its spacing class (`None` for
/// transparent kerns/glue/penalties), and the style it was set in.
pub struct Item {
    pub node: BoxNode,
    pub class: Option<AtomClass>,
    pub style: Style,
}

impl Item {
    pub fn atom(node: BoxNode, class: AtomClass, style: Style) -> Item {
        Item {
            node,
            class: Some(class),
            style,
        }
    }

    pub fn transparent(node: BoxNode, style: Style) -> Item {
        Item {
            node,
            class: None,
            style,
        }
    }
}

/// Lays out a math list at a style into a single hbox.
pub fn layout_list(ctx: &Ctx, list: &MathList, style: Style) -> Result<BoxNode, LayoutError> {
    layout_list_with_variant(ctx, list, style, None)
}

/// Same, under an alphabet override.
pub fn layout_list_with_variant(
    ctx: &Ctx,
    list: &MathList,
    style: Style,
    variant: Option<Variant>,
) -> Result<BoxNode, LayoutError> {
    let items = translate_list(ctx, list, style, variant)?;
    Ok(assemble(ctx, items))
}

/// Inserts pair glue between classed items and packs. Bin atoms demote to
/// Ord at list edges and next to operators/relations first.
pub fn assemble(ctx: &Ctx, mut items: Vec<Item>) -> BoxNode {
    demote_bins(&mut items);
    let mut out: Vec<BoxNode> = Vec::with_capacity(items.len() * 2);
    let mut last_class: Option<AtomClass> = None;
    for item in items {
        if let Some(class) = item.class {
            if let Some(prev) = last_class {
                if let Some(space) = pair_glue(prev, class, item.style) {
                    out.push(pair_glue_box(space, item.style, ctx.metrics));
                }
            }
            last_class = Some(class);
        }
        out.push(item.node);
    }
    hpack_natural(out)
}

fn demote_bins(items: &mut [Item]) {
    let mut prev: Option<usize> = None;
    for i in 0..items.len() {
        let Some(class) = items[i].class else { continue };
        match class {
            AtomClass::Bin => {
                let demote = match prev {
                    None => true,
                    Some(p) => matches!(
                        items[p].class,
                        Some(
                            AtomClass::Bin
                                | AtomClass::Op
                                | AtomClass::Rel
                                | AtomClass::Open
                                | AtomClass::Punct
                        )
                    ),
                };
                if demote {
                    items[i].class = Some(AtomClass::Ord);
                }
            }
            AtomClass::Rel | AtomClass::Close | AtomClass::Punct => {
                if let Some(p) = prev {
                    if items[p].class == Some(AtomClass::Bin) {
                        items[p].class = Some(AtomClass::Ord);
                    }
                }
            }
            _ => {}
        }
        prev = Some(i);
    }
    if let Some(p) = prev {
        if items[p].class == Some(AtomClass::Bin) {
            items[p].class = Some(AtomClass::Ord);
        }
    }
}

/// Translates a list into classed items. `variant` is the active alphabet
/// override (`\Cal` etc). Style switches take effect for the rest of the
/// list.
pub fn translate_list(
    ctx: &Ctx,
    list: &MathList,
    style: Style,
    variant: Option<Variant>,
) -> Result<Vec<Item>, LayoutError> {
    let mut items = Vec::new();
    let mut style = style;
    for node in &list.0 {
        translate_node(ctx, node, &mut style, variant, &mut items)?;
    }
    Ok(items)
}

fn translate_node(
    ctx: &Ctx,
    node: &Node,
    style: &mut Style,
    variant: Option<Variant>,
    items: &mut Vec<Item>,
) -> Result<(), LayoutError> {
    match node {
        Node::Style(level) => {
            *style = style.with_level(*level);
        }
        Node::Space(SpaceCommand::Colon) => {
            // \: — the ratio colon: fixed kerns around a punct/colon pair.
            let quad = ctx.quad(*style);
            items.push(Item::transparent(
                BoxNode::kern(quad.scale_frac(1111, 10000)),
                *style,
            ));
            items.push(Item::atom(
                BoxNode::phantom(Dim::ZERO, Dim::ZERO, Dim::ZERO),
                AtomClass::Punct,
                *style,
            ));
            if style.is_full_size() {
                items.push(Item::transparent(
                    BoxNode::kern(-ctx.mu_dim(thin_mu(), *style)),
                    *style,
                ));
            }
            let colon = glyph_box(ctx, GlyphId::new(Family::Roman, 0x3A), ':', *style);
            items.push(Item::atom(colon, AtomClass::Ord, *style));
            items.push(Item::transparent(
                BoxNode::glue(crate::boxes::GlueSpec::stretchy(
                    quad.scale_frac(3333, 10000),
                    quad.scale_frac(555, 10000),
                )),
                *style,
            ));
        }
        Node::Space(cmd) => {
            for b in explicit_space(*cmd, *style, ctx.metrics) {
                items.push(Item::transparent(b, *style));
            }
        }
        Node::Penalty(p) => {
            items.push(Item::transparent(
                BoxNode::kern_note(Dim::ZERO, &format!("penalty={}", p.value())),
                *style,
            ));
        }
        Node::Strut => {
            items.push(Item::transparent(ctx.strut(), *style));
        }
        Node::MathStrut => {
            items.push(Item::atom(ctx.math_strut(*style), AtomClass::Ord, *style));
        }
        Node::Atom(atom) => {
            let item = translate_atom(ctx, atom, *style, variant)?;
            items.push(item);
        }
        Node::Fraction(f) => {
            let b = frac::layout_fraction(ctx, f, *style)?;
            items.push(Item::atom(b, AtomClass::Inner, *style));
        }
        Node::ContinuedFraction(c) => {
            let b = frac::layout_cfrac(ctx, c, *style)?;
            items.push(Item::atom(b, AtomClass::Inner, *style));
        }
        Node::Radical(r) => {
            let b = radical::layout_radical(ctx, r, *style)?;
            items.push(Item::atom(b, AtomClass::Ord, *style));
        }
        Node::Accent(a) => {
            let b = accent::layout_accent(ctx, a, *style)?;
            items.push(Item::atom(b, AtomClass::Ord, *style));
        }
        Node::Dots(d) => {
            let b = dots_box(d.decision, *style, ctx.metrics, ctx.constants);
            items.push(Item::atom(b, AtomClass::Inner, *style));
        }
        Node::Decoration(d) => {
            let (b, class) = decoration::layout_decoration(ctx, d, *style)?;
            items.push(Item::atom(b, class, *style));
        }
        Node::OverUnder(ou) => {
            let (b, class) = overunder::layout_overunder(ctx, ou, *style)?;
            items.push(Item::atom(b, class, *style));
        }
        Node::SideSet(s) => {
            let b = overunder::layout_sideset(ctx, s, *style)?;
            items.push(Item::atom(b, AtomClass::Op, *style));
        }
        Node::ModOp(m) => {
            overunder::layout_mod(ctx, m, *style, items)?;
        }
        Node::MultInt(m) => {
            operators::layout_multint(ctx, m, *style, items)?;
        }
        Node::Fenced(f) => {
            let b = layout_fenced(ctx, f, *style, variant)?;
            items.push(Item::atom(b, AtomClass::Inner, *style));
        }
        Node::BigDelim(b) => {
            let node = big_delim_box(ctx, b.delim, b.size, *style);
            items.push(Item::atom(node, b.class, *style));
        }
        Node::FontVariant(v) => {
            let inner = translate_list(ctx, &v.body, *style, Some(v.variant))?;
            let b = assemble(ctx, inner);
            items.push(Item::atom(b, AtomClass::Ord, *style));
        }
        Node::Text(t) => {
            let b = text::layout_text(ctx, t, *style);
            items.push(Item::atom(b, AtomClass::Ord, *style));
        }
        Node::Table(t) => {
            let b = crate::display::layout_table(ctx, t, *style)?;
            items.push(Item::atom(b, AtomClass::Inner, *style));
        }
        Node::DisplayEnv(env) => {
            if !ctx.display_mode {
                return Err(LayoutError::DisplayOnly(format!("{:?}", env.kind)));
            }
            let b = crate::display::layout_display(ctx, env)?;
            items.push(Item::atom(b, AtomClass::Inner, *style));
        }
        Node::Arrow(a) => {
            let b = crate::cd::layout_arrow(ctx, a, false)?;
            items.push(Item::atom(b, AtomClass::Rel, *style));
        }
        Node::PendingTag(_) => {}
    }
    Ok(())
}

/// Translates one atom: nucleus, then scripts.
fn translate_atom(
    ctx: &Ctx,
    atom: &Atom,
    style: Style,
    variant: Option<Variant>,
) -> Result<Item, LayoutError> {
    let mut class = atom.class;
    let mut delta = Dim::ZERO; // italic correction for script placement
    let mut limits_default = LimitsDefault::NoLimits;
    let nucleus = match &atom.nucleus {
        Nucleus::Char(c) => {
            let (id, ch) = char_glyph(*c, variant)?;
            let g = ctx.metrics.glyph(id, style);
            delta = g.italic;
            BoxNode::glyph(id, ch, g.width, g.height, g.depth)
        }
        Nucleus::Symbol(name) => {
            let info = registry().lookup(name)?;
            limits_default = info.limits_default;
            class = info.class;
            symbol_box(ctx, name, style, &mut delta)?
        }
        Nucleus::List(list) => {
            let inner = translate_list(ctx, list, style, variant)?;
            assemble(ctx, inner)
        }
        Nucleus::OpName { text, name, with_limits } => {
            limits_default = operators::opname_limits(name.as_deref(), *with_limits, ctx);
            operators::layout_operatorname(ctx, text, style)
        }
        Nucleus::VarLim(kind) => {
            limits_default = LimitsDefault::DisplayLimits;
            operators::layout_varlim(ctx, *kind, style)?
        }
        Nucleus::Empty => BoxNode::phantom(Dim::ZERO, Dim::ZERO, Dim::ZERO),
    };
    // Operators sit on the axis, in their display-size variant when shown
    // in display style.
    let nucleus = if class == AtomClass::Op {
        let h = nucleus.height;
        let d = nucleus.depth;
        let shift = ctx.metrics.axis_height(style) - (h - d).divide(2);
        if shift.is_zero() {
            nucleus
        } else {
            nucleus.raised(shift)
        }
    } else {
        nucleus
    };
    let boxed = scripts::attach_scripts(
        ctx,
        nucleus,
        atom,
        style,
        class,
        limits_default,
        delta,
        variant,
    )?;
    Ok(Item::atom(boxed, class, style))
}

/// Builds the box for a registry symbol, handling composed arrow macros and
/// display-size operator variants.
pub fn symbol_box(
    ctx: &Ctx,
    name: &str,
    style: Style,
    delta: &mut Dim,
) -> Result<BoxNode, LayoutError> {
    if let Some(b) = composed_symbol(ctx, name, style)? {
        return Ok(b);
    }
    let info = registry().lookup(name)?;
    let mut id = info.glyph;
    if info.class == AtomClass::Op
        && style.is_display()
        && id.family == Family::Ex
        && id.slot < 0x80
    {
        let display_id = GlyphId::new(id.family, id.slot + 0x80);
        if ctx.metrics.has_glyph(display_id) {
            id = display_id;
        }
    }
    let g = ctx.metrics.glyph(id, style);
    *delta = g.italic;
    let ch = info.unicode.unwrap_or('\u{FFFD}');
    Ok(BoxNode::glyph(id, ch, g.width, g.height, g.depth))
}

/// Long arrows, hooks and implications are compositions of relation glyphs
/// joined with negative kerns.
fn composed_symbol(ctx: &Ctx, name: &str, style: Style) -> Result<Option<BoxNode>, LayoutError> {
    let join = -ctx.mu_dim(thin_mu(), style);
    let part = |n: &str| -> Result<BoxNode, LayoutError> {
        let mut d = Dim::ZERO;
        symbol_box(ctx, n, style, &mut d)
    };
    let seq: Vec<BoxNode> = match name {
        "longrightarrow" => vec![part("relbar")?, BoxNode::kern(join), part("rightarrow")?],
        "Longrightarrow" => vec![part("Relbar")?, BoxNode::kern(join), part("Rightarrow")?],
        "longleftarrow" => vec![part("leftarrow")?, BoxNode::kern(join), part("relbar")?],
        "Longleftarrow" => vec![part("Leftarrow")?, BoxNode::kern(join), part("Relbar")?],
        "longleftrightarrow" => vec![
            part("leftarrow")?,
            BoxNode::kern(join),
            part("rightarrow")?,
        ],
        "Longleftrightarrow" => vec![
            part("Leftarrow")?,
            BoxNode::kern(join),
            part("Rightarrow")?,
        ],
        "mapsto" => vec![part("mapstochar")?, part("rightarrow")?],
        "longmapsto" => vec![
            part("mapstochar")?,
            part("relbar")?,
            BoxNode::kern(join),
            part("rightarrow")?,
        ],
        "hookrightarrow" => vec![part("lhook")?, BoxNode::kern(join), part("rightarrow")?],
        "hookleftarrow" => vec![part("leftarrow")?, BoxNode::kern(join), part("rhook")?],
        "implies" | "impliedby" | "iff" => {
            let thick = ctx.mu_dim(crate::spacing::thick_mu(), style);
            let inner = match name {
                "implies" => composed_symbol(ctx, "Longrightarrow", style)?.unwrap(),
                "impliedby" => composed_symbol(ctx, "Longleftarrow", style)?.unwrap(),
                _ => composed_symbol(ctx, "Longleftrightarrow", style)?.unwrap(),
            };
            vec![BoxNode::kern(thick), inner, BoxNode::kern(thick)]
        }
        "doteq" => {
            // a dot centered over the equals sign
            let eq = part("Relbar")?;
            let dot = part("ldotp")?;
            let w = eq.width;
            let dx = (w - dot.width).divide(2);
            let raise = eq.height + ctx.mu_dim(Mu::from_units(1), style);
            let dot_over = hpack_natural(vec![
                BoxNode::kern(dx),
                dot.raised(raise),
                BoxNode::kern(Dim::ZERO),
            ]);
            let lap = hpack_natural(vec![BoxNode::kern(-w + dx), dot_over.clone()]);
            let _ = lap;
            let mut over = crate::boxes::rlap(dot_over);
            over.width = Dim::ZERO;
            vec![{
                let mut h = hpack_natural(vec![eq]);
                h.children.insert(
                    0,
                    Child {
                        dx: Dim::ZERO,
                        dy: Dim::ZERO,
                        node: over,
                    },
                );
                h
            }]
        }
        _ => return Ok(None),
    };
    if seq.len() == 1 {
        return Ok(Some(seq.into_iter().next().unwrap()));
    }
    Ok(Some(hpack_natural(seq)))
}

/// Maps a raw character to its glyph, honoring the active alphabet.
pub fn char_glyph(c: char, variant: Option<Variant>) -> Result<(GlyphId, char), LayoutError> {
    if let Some(v) = variant {
        if c.is_ascii_alphanumeric() {
            let id = variant_map(v, c)?;
            return Ok((id, variant_unicode(v, c)));
        }
    }
    Ok(match c {
        'a'..='z' | 'A'..='Z' => (
            GlyphId::new(Family::Italic, c as u8),
            variant_unicode(Variant::Italic, c),
        ),
        '0'..='9' => (GlyphId::new(Family::Roman, c as u8), c),
        '-' => (GlyphId::new(Family::Sy, 0x00), '\u{2212}'),
        '*' => (GlyphId::new(Family::Sy, 0x03), '\u{2217}'),
        '|' => (GlyphId::new(Family::Sy, 0x6A), '\u{2223}'),
        '<' | '>' | '/' | '.' | ',' => (GlyphId::new(Family::Italic, c as u8), c),
        _ => (GlyphId::new(Family::Roman, c as u8), c),
    })
}

pub fn glyph_box(ctx: &Ctx, id: GlyphId, ch: char, style: Style) -> BoxNode {
    let g = ctx.metrics.glyph(id, style);
    BoxNode::glyph(id, ch, g.width, g.height, g.depth)
}

/// `\left..\right` fences: delimiters grow to cover the body.
fn layout_fenced(
    ctx: &Ctx,
    f: &crate::ast::Fenced,
    style: Style,
    variant: Option<Variant>,
) -> Result<BoxNode, LayoutError> {
    let body_items = translate_list(ctx, &f.body, style, variant)?;
    let axis = ctx.metrics.axis_height(style);
    let (h, d) = body_items.iter().fold((Dim::ZERO, Dim::ZERO), |(h, d), item| {
        (h.max(item.node.height), d.max(item.node.depth))
    });
    let delta = (h - axis).max(d + axis);
    // plain defaults: \delimiterfactor 901, \delimitershortfall 5pt
    let target = delta
        .scale_frac(901, 500)
        .max(delta.scale_int(2) - Dim::from_pt(5));
    let mut items = Vec::new();
    if let Some(b) = sized_delim(ctx, f.left, target, style) {
        items.push(Item::atom(b, AtomClass::Open, style));
    } else {
        items.push(Item::transparent(
            BoxNode::kern(ctx.constants.null_delimiter_space),
            style,
        ));
    }
    items.extend(body_items);
    if let Some(b) = sized_delim(ctx, f.right, target, style) {
        items.push(Item::atom(b, AtomClass::Close, style));
    } else {
        items.push(Item::transparent(
            BoxNode::kern(ctx.constants.null_delimiter_space),
            style,
        ));
    }
    Ok(assemble(ctx, items))
}

/// A delimiter glyph grown to at least `target` total size, centered on the
/// axis. Returns `None` for the null delimiter.
pub fn sized_delim(ctx: &Ctx, delim: Delim, target: Dim, style: Style) -> Option<BoxNode> {
    let (id, ch) = delim_glyph(delim)?;
    let g = ctx.metrics.glyph(id, style);
    let natural = g.height + g.depth;
    let total = natural.max(target);
    let axis = ctx.metrics.axis_height(style);
    let h = total.divide(2) + axis;
    let d = total - h;
    Some(BoxNode::glyph(id, ch, g.width, h, d))
}

/// A `\big`..`\Bigg` delimiter: fixed total sizes of 8.5pt/11.5pt/14.5pt/
/// 17.5pt at the text size, axis-centered.
pub fn big_delim_box(ctx: &Ctx, delim: Delim, size: u8, style: Style) -> BoxNode {
    let total = match size {
        1 => Dim::from_pt_decimal(8, 5, 10),
        2 => Dim::from_pt_decimal(11, 5, 10),
        3 => Dim::from_pt_decimal(14, 5, 10),
        _ => Dim::from_pt_decimal(17, 5, 10),
    };
    match sized_delim(ctx, delim, total, style) {
        Some(mut b) => {
            let axis = ctx.metrics.axis_height(style);
            let h = total.divide(2) + axis;
            b.height = h;
            b.depth = total - h;
            b
        }
        None => BoxNode::kern(ctx.constants.null_delimiter_space),
    }
}

fn delim_glyph(delim: Delim) -> Option<(GlyphId, char)> {
    match delim {
        Delim::Null => None,
        Delim::Char(c) => Some(match c {
            '(' => (GlyphId::new(Family::Roman, 0x28), '('),
            ')' => (GlyphId::new(Family::Roman, 0x29), ')'),
            '[' => (GlyphId::new(Family::Roman, 0x5B), '['),
            ']' => (GlyphId::new(Family::Roman, 0x5D), ']'),
            '|' => (GlyphId::new(Family::Sy, 0x6A), '\u{2223}'),
            '/' => (GlyphId::new(Family::Roman, 0x2F), '/'),
            '<' => (GlyphId::new(Family::Sy, 0x68), '\u{27E8}'),
            '>' => (GlyphId::new(Family::Sy, 0x69), '\u{27E9}'),
            _ => return None,
        }),
        Delim::Symbol(name) => {
            let info = registry().lookup(name).ok()?;
            Some((info.glyph, info.unicode.unwrap_or('\u{FFFD}')))
        }
    }
}

/// The box a `\varinjlim`-style under/over-arrow "lim" uses for its label
/// row, shared with the display module.
pub fn upright_word(ctx: &Ctx, word: &str, style: Style) -> BoxNode {
    let mut items = Vec::new();
    for c in word.chars() {
        let id = GlyphId::new(Family::Roman, c as u8);
        items.push(glyph_box(ctx, id, c, style));
    }
    hpack_natural(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;

    fn ctx_fixtures() -> (Metrics, LayoutConstants, DisplayConfig) {
        let m = Metrics::builtin();
        let c = LayoutConstants::new(&m);
        (m, c, DisplayConfig::default())
    }

    fn layout(input: &str, style: Style) -> BoxNode {
        let (m, c, d) = ctx_fixtures();
        let ctx = Ctx::new(&m, &c, &d);
        let (list, _) = parse_expression(input).expect(input);
        layout_list(&ctx, &list, style).expect(input)
    }

    #[test]
    fn ord_ord_packs_without_glue() {
        let b = layout("xy", Style::TEXT);
        assert_eq!(b.children.len(), 2);
    }

    #[test]
    fn bin_gets_medium_spaces() {
        let (m, c, d) = ctx_fixtures();
        let ctx = Ctx::new(&m, &c, &d);
        let b = layout("a+b", Style::TEXT);
        // glyph, med glue, glyph, med glue, glyph
        assert_eq!(b.children.len(), 5);
        let med = ctx.mu_dim(Mu::from_units(4), Style::TEXT);
        assert_eq!(b.children[1].node.width, med);
        assert_eq!(b.children[3].node.width, med);
    }

    #[test]
    fn leading_bin_demotes_to_ord() {
        let b = layout("+b", Style::TEXT);
        assert_eq!(b.children.len(), 2); // no glue inserted
    }

    #[test]
    fn script_styles_shrink_widths() {
        let text = layout("x+y", Style::TEXT).width;
        let script = layout("x+y", Style::SCRIPT).width;
        let ss = layout("x+y", Style::SCRIPT_SCRIPT).width;
        assert!(ss < script && script < text);
    }

    #[test]
    fn hbox_width_is_sum_of_children_recursively() {
        fn check(b: &BoxNode) {
            if b.kind == BoxKind::HBox {
                let sum: i64 = b.children.iter().map(|c| c.node.width.sp()).sum();
                assert_eq!(b.width.sp(), sum, "hbox width mismatch");
            }
            for c in &b.children {
                check(&c.node);
            }
        }
        for input in ["a+b", r"\sum_{i=1}^n i", r"\frac{a}{b}", r"\sqrt{x}"] {
            check(&layout(input, Style::DISPLAY));
        }
    }
}
