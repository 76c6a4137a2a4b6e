//! The laid-out box tree: glyphs, rules, kerns, glue, and boxes, plus the
//! packing helpers and the deterministic box-dump text format.
//!
//! Horizontal boxes are strictly sequential: every child advances the cursor
//! by its own width, so an hbox's width is exactly the sum of its children's
//! widths. Zero-width overlaps (`\llap`/`\rlap`) are expressed with negative
//! kerns inside a zero-width hbox, never with out-of-band offsets.

use std::fmt::Write as _;

use crate::dim::Dim;
use crate::metrics::{Family, GlyphId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxKind {
    Glyph,
    Rule,
    Kern,
    Glue,
    HBox,
    VBox,
    Raise,
}

impl BoxKind {
    pub fn tag(self) -> &'static str {
        match self {
            BoxKind::Glyph => "GLYPH",
            BoxKind::Rule => "RULE",
            BoxKind::Kern => "KERN",
            BoxKind::Glue => "GLUE",
            BoxKind::HBox => "HBOX",
            BoxKind::VBox => "VBOX",
            BoxKind::Raise => "RAISE",
        }
    }

    fn from_tag(tag: &str) -> Option<BoxKind> {
        Some(match tag {
            "GLYPH" => BoxKind::Glyph,
            "RULE" => BoxKind::Rule,
            "KERN" => BoxKind::Kern,
            "GLUE" => BoxKind::Glue,
            "HBOX" => BoxKind::HBox,
            "VBOX" => BoxKind::VBox,
            "RAISE" => BoxKind::Raise,
            _ => return None,
        })
    }
}

/// Stretch/shrink orders: 0 finite, 1 fil, 2 fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GlueSpec {
    pub natural: Dim,
    pub stretch: Dim,
    pub stretch_order: u8,
    pub shrink: Dim,
    pub shrink_order: u8,
}

impl GlueSpec {
    pub fn fixed(natural: Dim) -> GlueSpec {
        GlueSpec {
            natural,
            ..GlueSpec::default()
        }
    }

    pub fn fil() -> GlueSpec {
        GlueSpec {
            natural: Dim::ZERO,
            stretch: Dim::from_pt(1),
            stretch_order: 1,
            shrink: Dim::ZERO,
            shrink_order: 0,
        }
    }

    pub fn stretchy(natural: Dim, stretch: Dim) -> GlueSpec {
        GlueSpec {
            natural,
            stretch,
            stretch_order: 0,
            shrink: Dim::ZERO,
            shrink_order: 0,
        }
    }
}

/// One child of a box, positioned relative to the parent's reference point
/// (left edge, baseline). `dy` is positive upward.
#[derive(Debug, Clone, PartialEq)]
pub struct Child {
    pub dx: Dim,
    pub dy: Dim,
    pub node: BoxNode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxNode {
    pub kind: BoxKind,
    pub width: Dim,
    pub height: Dim,
    pub depth: Dim,
    pub children: Vec<Child>,
    /// Unset glue keeps its specification here until a `hpack_to` resolves it.
    pub glue: Option<GlueSpec>,
    /// Glyph identity, when the node is a glyph.
    pub glyph: Option<(GlyphId, char)>,
    /// Free-form annotation carried into the dump payload.
    pub note: Option<String>,
}

impl BoxNode {
    fn bare(kind: BoxKind) -> BoxNode {
        BoxNode {
            kind,
            width: Dim::ZERO,
            height: Dim::ZERO,
            depth: Dim::ZERO,
            children: Vec::new(),
            glue: None,
            glyph: None,
            note: None,
        }
    }

    pub fn glyph(id: GlyphId, ch: char, width: Dim, height: Dim, depth: Dim) -> BoxNode {
        BoxNode {
            width,
            height,
            depth,
            glyph: Some((id, ch)),
            ..BoxNode::bare(BoxKind::Glyph)
        }
    }

    pub fn rule(width: Dim, height: Dim, depth: Dim) -> BoxNode {
        BoxNode {
            width,
            height,
            depth,
            ..BoxNode::bare(BoxKind::Rule)
        }
    }

    pub fn kern(amount: Dim) -> BoxNode {
        BoxNode {
            width: amount,
            ..BoxNode::bare(BoxKind::Kern)
        }
    }

    pub fn kern_note(amount: Dim, note: &str) -> BoxNode {
        BoxNode {
            width: amount,
            note: Some(note.to_string()),
            ..BoxNode::bare(BoxKind::Kern)
        }
    }

    pub fn glue(spec: GlueSpec) -> BoxNode {
        BoxNode {
            width: spec.natural,
            glue: Some(spec),
            ..BoxNode::bare(BoxKind::Glue)
        }
    }

    /// An empty box with forced dimensions (struts, phantoms).
    pub fn phantom(width: Dim, height: Dim, depth: Dim) -> BoxNode {
        BoxNode {
            width,
            height,
            depth,
            ..BoxNode::bare(BoxKind::HBox)
        }
    }

    pub fn with_note(mut self, note: &str) -> BoxNode {
        self.note = Some(note.to_string());
        self
    }

    pub fn is_empty_hbox(&self) -> bool {
        self.kind == BoxKind::HBox && self.children.is_empty() && self.width.is_zero()
    }

    /// Raises the box by `up` (negative lowers it).
    pub fn raised(self, up: Dim) -> BoxNode {
        if up.is_zero() {
            return self;
        }
        BoxNode {
            kind: BoxKind::Raise,
            width: self.width,
            height: self.height + up,
            depth: self.depth - up,
            children: vec![Child {
                dx: Dim::ZERO,
                dy: up,
                node: self,
            }],
            glue: None,
            glyph: None,
            note: None,
        }
    }

    /// Structural equality of metrics: kinds, dimensions and child offsets.
    pub fn metrics_eq(&self, other: &BoxNode) -> bool {
        self.kind == other.kind
            && self.width == other.width
            && self.height == other.height
            && self.depth == other.depth
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.dx == b.dx && a.dy == b.dy && a.node.metrics_eq(&b.node))
    }

    /// Serializes to the deterministic dump format: one node per line,
    /// `KIND w=.. h=.. d=..` with ` dx=.. dy=..` on children, two-space
    /// indent per depth, LF endings, integers only.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.dump_into(&mut out, 0, None);
        out
    }

    fn dump_into(&self, out: &mut String, depth: usize, offset: Option<(Dim, Dim)>) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        let _ = write!(
            out,
            "{} w={} h={} d={}",
            self.kind.tag(),
            self.width.sp(),
            self.height.sp(),
            self.depth.sp()
        );
        if let Some((dx, dy)) = offset {
            let _ = write!(out, " dx={} dy={}", dx.sp(), dy.sp());
        }
        if let Some((id, ch)) = self.glyph {
            let _ = write!(out, " glyph={} char={}", id, ch as u32);
        }
        if let Some(note) = &self.note {
            let _ = write!(out, " {note}");
        }
        out.push('\n');
        for child in &self.children {
            child.node.dump_into(out, depth + 1, Some((child.dx, child.dy)));
        }
    }

    /// Parses a dump back into a tree; inverse of [`BoxNode::dump`] up to
    /// metrics equality.
    pub fn parse_dump(text: &str) -> Result<BoxNode, String> {
        let mut stack: Vec<(usize, BoxNode)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let indent_chars = line.len() - line.trim_start().len();
            if indent_chars % 2 != 0 {
                return Err(format!("line {}: odd indent", lineno + 1));
            }
            let depth = indent_chars / 2;
            let (node, offset) = parse_dump_line(line.trim_start())
                .map_err(|e| format!("line {}: {}", lineno + 1, e))?;
            while let Some((d, _)) = stack.last() {
                if *d >= depth {
                    let (_, done) = stack.pop().unwrap();
                    match stack.last_mut() {
                        Some((_, parent)) => {
                            let last = parent.children.last_mut().unwrap();
                            last.node = done;
                        }
                        None => return Err("multiple roots".into()),
                    }
                } else {
                    break;
                }
            }
            match stack.last_mut() {
                Some((d, parent)) if depth == *d + 1 => {
                    let (dx, dy) = offset.unwrap_or((Dim::ZERO, Dim::ZERO));
                    parent.children.push(Child {
                        dx,
                        dy,
                        node: BoxNode::bare(BoxKind::Kern),
                    });
                    stack.push((depth, node));
                }
                None if depth == 0 => stack.push((0, node)),
                _ => return Err(format!("line {}: bad nesting", lineno + 1)),
            }
        }
        while stack.len() > 1 {
            let (_, done) = stack.pop().unwrap();
            let (_, parent) = stack.last_mut().unwrap();
            parent.children.last_mut().unwrap().node = done;
        }
        stack
            .pop()
            .map(|(_, n)| n)
            .ok_or_else(|| "empty dump".into())
    }
}

type ParsedLine = (BoxNode, Option<(Dim, Dim)>);

fn parse_dump_line(line: &str) -> Result<ParsedLine, String> {
    let mut parts = line.split_whitespace();
    let kind = parts
        .next()
        .and_then(BoxKind::from_tag)
        .ok_or("unknown kind")?;
    let mut node = BoxNode::bare(kind);
    let mut dx = None;
    let mut dy = None;
    let mut glyph_id = None;
    let mut glyph_char = None;
    let mut extra = Vec::new();
    for part in parts {
        let Some((key, value)) = part.split_once('=') else {
            extra.push(part.to_string());
            continue;
        };
        let dim = || -> Result<Dim, String> {
            value
                .parse::<i64>()
                .map(Dim)
                .map_err(|_| format!("bad integer `{value}`"))
        };
        match key {
            "w" => node.width = dim()?,
            "h" => node.height = dim()?,
            "d" => node.depth = dim()?,
            "dx" => dx = Some(dim()?),
            "dy" => dy = Some(dim()?),
            "glyph" => {
                let (fam, slot) = value.split_once(':').ok_or("bad glyph id")?;
                let fam: u8 = fam.parse().map_err(|_| "bad glyph family")?;
                let slot: u8 = slot.parse().map_err(|_| "bad glyph slot")?;
                glyph_id = Some(GlyphId::new(
                    Family::from_id(fam).ok_or("bad glyph family")?,
                    slot,
                ));
            }
            "char" => {
                let code: u32 = value.parse().map_err(|_| "bad char code")?;
                glyph_char = char::from_u32(code);
            }
            _ => extra.push(part.to_string()),
        }
    }
    if let (Some(id), Some(ch)) = (glyph_id, glyph_char) {
        node.glyph = Some((id, ch));
    }
    if !extra.is_empty() {
        node.note = Some(extra.join(" "));
    }
    let offset = match (dx, dy) {
        (Some(dx), Some(dy)) => Some((dx, dy)),
        _ => None,
    };
    Ok((node, offset))
}

/// Packs children sequentially at their natural widths.
pub fn hpack_natural(items: Vec<BoxNode>) -> BoxNode {
    hpack_inner(items, None)
}

/// Packs children into exactly `target`, setting glue. Excess stretch is
/// distributed over the highest stretch order present, proportionally, with
/// the integer remainder assigned to the last stretchable glue so widths
/// stay exact.
pub fn hpack_to(target: Dim, items: Vec<BoxNode>) -> BoxNode {
    hpack_inner(items, Some(target))
}

fn hpack_inner(mut items: Vec<BoxNode>, target: Option<Dim>) -> BoxNode {
    let natural: Dim = items.iter().fold(Dim::ZERO, |acc, b| acc + b.width);
    if let Some(target) = target {
        let excess = target - natural;
        if !excess.is_zero() {
            set_glue(&mut items, excess);
        }
    }
    let mut x = Dim::ZERO;
    let mut height = Dim::ZERO;
    let mut depth = Dim::ZERO;
    let mut children = Vec::with_capacity(items.len());
    for node in items {
        let w = node.width;
        if node.kind != BoxKind::Kern || node.note.is_some() {
            height = height.max(node.height);
            depth = depth.max(node.depth);
        }
        children.push(Child {
            dx: x,
            dy: Dim::ZERO,
            node,
        });
        x += w;
    }
    BoxNode {
        kind: BoxKind::HBox,
        width: x,
        height,
        depth,
        children,
        glue: None,
        glyph: None,
        note: None,
    }
}

fn set_glue(items: &mut [BoxNode], excess: Dim) {
    let stretching = excess > Dim::ZERO;
    let order = items
        .iter()
        .filter_map(|b| b.glue.as_ref())
        .filter(|g| {
            if stretching {
                !g.stretch.is_zero()
            } else {
                !g.shrink.is_zero()
            }
        })
        .map(|g| if stretching { g.stretch_order } else { g.shrink_order })
        .max();
    let Some(order) = order else {
        return; // rigid list: leave it overfull/underfull
    };
    let total: i64 = items
        .iter()
        .filter_map(|b| b.glue.as_ref())
        .filter(|g| {
            if stretching {
                g.stretch_order == order && !g.stretch.is_zero()
            } else {
                g.shrink_order == order && !g.shrink.is_zero()
            }
        })
        .map(|g| if stretching { g.stretch.sp() } else { g.shrink.sp() })
        .sum();
    if total == 0 {
        return;
    }
    let mut assigned = Dim::ZERO;
    let mut last_index = None;
    for (i, b) in items.iter().enumerate() {
        if let Some(g) = &b.glue {
            let amount = if stretching { g.stretch } else { g.shrink };
            let ord = if stretching { g.stretch_order } else { g.shrink_order };
            if ord == order && !amount.is_zero() {
                last_index = Some(i);
            }
        }
    }
    for (i, b) in items.iter_mut().enumerate() {
        let Some(g) = &b.glue else { continue };
        let amount = if stretching { g.stretch } else { g.shrink };
        let ord = if stretching { g.stretch_order } else { g.shrink_order };
        if ord != order || amount.is_zero() {
            continue;
        }
        let share = if Some(i) == last_index {
            excess - assigned
        } else {
            excess.scale_frac(amount.sp(), total)
        };
        // Finite shrink never exceeds the specified amount.
        let share = if !stretching && ord == 0 {
            share.max(-amount)
        } else {
            share
        };
        assigned += share;
        b.width = g.natural + share;
    }
}

/// How a vertical stack chooses its baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VBaseline {
    /// `\vbox`: reference is the last box's baseline.
    Last,
    /// `\vtop`: reference is the first box's baseline.
    First,
}

/// Stacks items top-to-bottom. Boxes sit flush under each other (interline
/// glue, when wanted, must be supplied as explicit kern/glue items).
/// Horizontal placement is by `x_align` applied to the stack width.
pub fn vpack(items: Vec<BoxNode>, baseline: VBaseline, x_align: XAlign) -> BoxNode {
    let width = items.iter().fold(Dim::ZERO, |acc, b| match b.kind {
        BoxKind::Kern | BoxKind::Glue => acc,
        _ => acc.max(b.width),
    });
    let mut cursor = Dim::ZERO; // distance from the top edge, downward
    let mut placed: Vec<(Dim, BoxNode)> = Vec::new(); // (baseline pos from top, node)
    let mut first_baseline = None;
    let mut last_baseline = None;
    for node in items {
        match node.kind {
            BoxKind::Kern | BoxKind::Glue => {
                placed.push((cursor, node.clone()));
                cursor += node.width;
            }
            _ => {
                let b = cursor + node.height;
                first_baseline.get_or_insert(b);
                last_baseline = Some(b);
                cursor += node.height + node.depth;
                placed.push((b, node));
            }
        }
    }
    let total = cursor;
    let reference = match baseline {
        VBaseline::Last => last_baseline.unwrap_or(total),
        VBaseline::First => first_baseline.unwrap_or(Dim::ZERO),
    };
    let height = reference;
    let depth = total - reference;
    let children = placed
        .into_iter()
        .map(|(pos, node)| {
            let dx = match x_align {
                _ if matches!(node.kind, BoxKind::Kern | BoxKind::Glue) => Dim::ZERO,
                XAlign::Left => Dim::ZERO,
                XAlign::Center => (width - node.width).divide(2),
                XAlign::Right => width - node.width,
            };
            let dy = match node.kind {
                // Vertical kerns/glue are recorded at their top position.
                BoxKind::Kern | BoxKind::Glue => reference - pos,
                _ => reference - pos,
            };
            Child { dx, dy, node }
        })
        .collect();
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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAlign {
    Left,
    Center,
    Right,
}

/// Re-centers a finished stack on the math axis (`\vcenter`).
pub fn vcenter(mut node: BoxNode, axis: Dim) -> BoxNode {
    let total = node.height + node.depth;
    let new_height = total.divide(2) + axis;
    let shift = new_height - node.height;
    for child in &mut node.children {
        child.dy += shift;
    }
    node.height = new_height;
    node.depth = total - new_height;
    node
}

/// Zero-width box whose content sticks out to the left.
pub fn llap(inner: BoxNode) -> BoxNode {
    let w = inner.width;
    hpack_natural(vec![BoxNode::kern(-w), inner])
}

/// Zero-width box whose content sticks out to the right.
pub fn rlap(inner: BoxNode) -> BoxNode {
    let w = inner.width;
    hpack_natural(vec![inner, BoxNode::kern(-w)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_glyph(w: i64, h: i64, d: i64) -> BoxNode {
        BoxNode::glyph(
            GlyphId::new(Family::Roman, 0x41),
            'A',
            Dim(w),
            Dim(h),
            Dim(d),
        )
    }

    #[test]
    fn hbox_width_is_sum_of_children() {
        let b = hpack_natural(vec![
            sample_glyph(100, 50, 10),
            BoxNode::kern(Dim(-30)),
            sample_glyph(70, 40, 0),
        ]);
        assert_eq!(b.width, Dim(140));
        assert_eq!(b.height, Dim(50));
        assert_eq!(b.depth, Dim(10));
    }

    #[test]
    fn laps_are_zero_width() {
        let b = llap(sample_glyph(100, 50, 10));
        assert_eq!(b.width, Dim::ZERO);
        assert_eq!(b.children[0].node.width, Dim(-100));
        let r = rlap(sample_glyph(100, 50, 10));
        assert_eq!(r.width, Dim::ZERO);
    }

    #[test]
    fn glue_setting_is_exact() {
        let items = vec![
            BoxNode::glue(GlueSpec::stretchy(Dim::ZERO, Dim::from_pt(1000))),
            sample_glyph(100, 10, 0),
            BoxNode::glue(GlueSpec::stretchy(Dim::ZERO, Dim::from_pt(1000))),
        ];
        let b = hpack_to(Dim(1001), items);
        assert_eq!(b.width, Dim(1001));
        let total: i64 = b.children.iter().map(|c| c.node.width.sp()).sum();
        assert_eq!(total, 1001);
        // left glue gets the truncated share, right glue the remainder
        assert_eq!(b.children[0].node.width, Dim(450));
        assert_eq!(b.children[2].node.width, Dim(451));
    }

    #[test]
    fn vbox_baselines() {
        let rows = vec![sample_glyph(50, 30, 5), BoxNode::kern(Dim(7)), sample_glyph(80, 20, 4)];
        let vb = vpack(rows.clone(), VBaseline::Last, XAlign::Left);
        assert_eq!(vb.width, Dim(80));
        assert_eq!(vb.height, Dim(30 + 5 + 7 + 20));
        assert_eq!(vb.depth, Dim(4));
        let vt = vpack(rows, VBaseline::First, XAlign::Left);
        assert_eq!(vt.height, Dim(30));
        assert_eq!(vt.depth, Dim(5 + 7 + 20 + 4));
    }

    #[test]
    fn dump_roundtrip_metrics_equal() {
        let b = hpack_natural(vec![
            sample_glyph(100, 50, 10).raised(Dim(12)),
            BoxNode::kern_note(Dim::ZERO, "penalty=900"),
            vpack(
                vec![sample_glyph(10, 5, 1), sample_glyph(20, 6, 2)],
                VBaseline::Last,
                XAlign::Center,
            ),
        ]);
        let text = b.dump();
        assert!(text.ends_with('\n'));
        assert!(!text.contains('.'));
        let parsed = BoxNode::parse_dump(&text).unwrap();
        assert!(parsed.metrics_eq(&b));
    }

    #[test]
    fn dump_examples() {
        let empty = hpack_natural(vec![]);
        assert_eq!(empty.dump(), "HBOX w=0 h=0 d=0\n");
        let kern = BoxNode::kern(Dim(109226));
        assert_eq!(kern.dump(), "KERN w=109226 h=0 d=0\n");
    }
}
