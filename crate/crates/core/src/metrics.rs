//! Font metrics: per-glyph boxes and the font-wide parameters the layout
//! rules consume. The glyph table ships as a plain-text data file; the
//! font-wide parameters are built in, approximating Computer Modern at a
//! 10pt design size. Script and scriptscript sizes are uniform scalings
//! (7/10 and 1/2) of the text size.

use std::collections::HashMap;
use std::fmt;

use crate::dim::Dim;
use crate::error::MetricsError;
use crate::style::{Style, StyleLevel};

/// Font families, matching the numeric `family` column of the metrics and
/// symbol data files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Roman = 0,
    Italic = 1,
    Sy = 2,
    Ex = 3,
    MsX = 4,
    MsY = 5,
    Bold = 6,
    Slanted = 7,
}

impl Family {
    pub fn from_id(id: u8) -> Option<Family> {
        Some(match id {
            0 => Family::Roman,
            1 => Family::Italic,
            2 => Family::Sy,
            3 => Family::Ex,
            4 => Family::MsX,
            5 => Family::MsY,
            6 => Family::Bold,
            7 => Family::Slanted,
            _ => return None,
        })
    }

    pub fn id(self) -> u8 {
        self as u8
    }
}

/// An abstract glyph id: family plus slot. Slots 0x80.. are synthetic
/// display-size variants of the 0x00..0x7F base slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GlyphId {
    pub family: Family,
    pub slot: u8,
}

impl GlyphId {
    pub fn new(family: Family, slot: u8) -> GlyphId {
        GlyphId { family, slot }
    }
}

impl fmt::Display for GlyphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family.id(), self.slot)
    }
}

/// Metrics for one glyph at one size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GlyphMetrics {
    pub width: Dim,
    pub height: Dim,
    pub depth: Dim,
    pub italic: Dim,
    pub skew: Dim,
}

impl GlyphMetrics {
    fn scaled(self, num: i64, den: i64) -> GlyphMetrics {
        GlyphMetrics {
            width: self.width.scale_frac(num, den),
            height: self.height.scale_frac(num, den),
            depth: self.depth.scale_frac(num, den),
            italic: self.italic.scale_frac(num, den),
            skew: self.skew.scale_frac(num, den),
        }
    }
}

/// The font-wide parameters at the 10pt design size.
#[derive(Debug, Clone)]
pub struct FontParams {
    pub quad: Dim,
    pub x_height: Dim,
    pub axis_height: Dim,
    pub rule_thickness: Dim,
    /// Numerator/denominator shifts for generalized fractions.
    pub num1: Dim,
    pub num2: Dim,
    pub num3: Dim,
    pub denom1: Dim,
    pub denom2: Dim,
    /// Script shifts.
    pub sup1: Dim,
    pub sup2: Dim,
    pub sup3: Dim,
    pub sub1: Dim,
    pub sub2: Dim,
    pub sup_drop: Dim,
    pub sub_drop: Dim,
    /// Generalized-fraction delimiter sizes.
    pub delim1: Dim,
    pub delim2: Dim,
    /// Big-operator limit spacing (extension-font dimens 9..13); the last is
    /// the operator vertical buffer.
    pub big_op_spacing: [Dim; 5],
}

impl Default for FontParams {
    fn default() -> FontParams {
        let pt = |i, n, d| Dim::from_pt_decimal(i, n, d);
        FontParams {
            quad: Dim::from_pt(10),
            x_height: pt(4, 3055, 10000),
            axis_height: pt(2, 5, 10),
            rule_thickness: pt(0, 4, 10),
            num1: pt(6, 76508, 100000),
            num2: pt(3, 93732, 100000),
            num3: pt(4, 43611, 100000),
            denom1: pt(6, 85951, 100000),
            denom2: pt(3, 44841, 100000),
            sup1: pt(4, 12892, 100000),
            sup2: pt(3, 62893, 100000),
            sup3: pt(2, 88889, 100000),
            sub1: pt(1, 49998, 100000),
            sub2: pt(2, 47217, 100000),
            sup_drop: pt(3, 86108, 100000),
            sub_drop: pt(0, 5, 10),
            delim1: pt(23, 9, 10),
            delim2: pt(10, 2, 100000),
            big_op_spacing: [
                pt(1, 11112, 100000),
                pt(1, 66667, 100000),
                Dim::from_pt(2),
                Dim::from_pt(6),
                Dim::from_pt(1),
            ],
        }
    }
}

fn size_ratio(level: StyleLevel) -> (i64, i64) {
    match level {
        StyleLevel::Display | StyleLevel::Text => (1, 1),
        StyleLevel::Script => (7, 10),
        StyleLevel::ScriptScript => (1, 2),
    }
}

/// The complete metrics set: glyph table plus font parameters, immutable
/// after construction.
#[derive(Debug, Clone)]
pub struct Metrics {
    glyphs: HashMap<(u8, u8), GlyphMetrics>,
    params: FontParams,
}

pub const BUILTIN_METRICS: &str = include_str!("../data/metrics.txt");

impl Metrics {
    /// Loads the built-in glyph table.
    pub fn builtin() -> Metrics {
        Metrics::parse(BUILTIN_METRICS).expect("built-in metrics table is valid")
    }

    /// Parses a metrics data file: one record per line,
    /// `slot family width height depth italic skew`, all lengths in scaled
    /// points at the 10pt design size. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Metrics, MetricsError> {
        let mut glyphs = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(MetricsError::BadRecord {
                    line: lineno + 1,
                    reason: format!("expected 7 fields, found {}", fields.len()),
                });
            }
            let num = |s: &str| -> Result<i64, MetricsError> {
                s.parse().map_err(|_| MetricsError::BadRecord {
                    line: lineno + 1,
                    reason: format!("bad number `{s}`"),
                })
            };
            let slot = num(fields[0])?;
            let family = num(fields[1])?;
            if !(0..=255).contains(&slot) || Family::from_id(family as u8).is_none() {
                return Err(MetricsError::BadRecord {
                    line: lineno + 1,
                    reason: format!("bad slot/family {slot}/{family}"),
                });
            }
            glyphs.insert(
                (family as u8, slot as u8),
                GlyphMetrics {
                    width: Dim(num(fields[2])?),
                    height: Dim(num(fields[3])?),
                    depth: Dim(num(fields[4])?),
                    italic: Dim(num(fields[5])?),
                    skew: Dim(num(fields[6])?),
                },
            );
        }
        Ok(Metrics {
            glyphs,
            params: FontParams::default(),
        })
    }

    pub fn params(&self) -> &FontParams {
        &self.params
    }

    /// Glyph metrics at the given style's size. Missing glyphs fall back to
    /// a half-quad box so layout stays total; the registry coverage test
    /// guarantees every registered slot is present.
    pub fn glyph(&self, id: GlyphId, style: Style) -> GlyphMetrics {
        let (num, den) = size_ratio(style.level);
        self.glyph_raw(id).scaled(num, den)
    }

    fn glyph_raw(&self, id: GlyphId) -> GlyphMetrics {
        match self.glyphs.get(&(id.family.id(), id.slot)) {
            Some(g) => *g,
            None => GlyphMetrics {
                width: self.params.quad.scale_frac(1, 2),
                height: self.params.x_height,
                depth: Dim::ZERO,
                italic: Dim::ZERO,
                skew: Dim::ZERO,
            },
        }
    }

    pub fn has_glyph(&self, id: GlyphId) -> bool {
        self.glyphs.contains_key(&(id.family.id(), id.slot))
    }

    pub fn quad(&self, style: Style) -> Dim {
        let (num, den) = size_ratio(style.level);
        self.params.quad.scale_frac(num, den)
    }

    pub fn x_height(&self, style: Style) -> Dim {
        let (num, den) = size_ratio(style.level);
        self.params.x_height.scale_frac(num, den)
    }

    pub fn axis_height(&self, style: Style) -> Dim {
        let (num, den) = size_ratio(style.level);
        self.params.axis_height.scale_frac(num, den)
    }

    pub fn rule_thickness(&self, style: Style) -> Dim {
        let (num, den) = size_ratio(style.level);
        self.params.rule_thickness.scale_frac(num, den)
    }

    /// A fraction/script parameter scaled to the style size.
    pub fn param(&self, f: impl Fn(&FontParams) -> Dim, style: Style) -> Dim {
        let (num, den) = size_ratio(style.level);
        f(&self.params).scale_frac(num, den)
    }

    pub fn big_op_spacing(&self, index: usize, style: Style) -> Dim {
        let (num, den) = size_ratio(style.level);
        self.params.big_op_spacing[index].scale_frac(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses_and_pins_core_values() {
        let m = Metrics::builtin();
        assert_eq!(m.quad(Style::TEXT), Dim(655360));
        assert_eq!(m.x_height(Style::TEXT), Dim(282165));
        assert_eq!(m.axis_height(Style::TEXT), Dim(163840));
        assert_eq!(m.rule_thickness(Style::TEXT), Dim(26214));
    }

    #[test]
    fn script_sizes_scale_down() {
        let m = Metrics::builtin();
        assert_eq!(m.quad(Style::SCRIPT), Dim(655360 * 7 / 10));
        assert_eq!(m.quad(Style::SCRIPT_SCRIPT), Dim(655360 / 2));
        assert!(m.x_height(Style::SCRIPT) < m.x_height(Style::TEXT));
    }
}
