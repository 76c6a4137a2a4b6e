//! Named layout constants and their configuration-file surface.

use crate::dim::{Dim, Mu};
use crate::error::ConfigError;
use crate::metrics::Metrics;
use crate::style::Style;

/// The named constants driving the layout rules. Defaults reproduce the
/// original values; everything is mutable only before layout starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutConstants {
    /// 0.2326 of the text-size ex; the base unit of the ruled constructs.
    pub ex: Dim,
    /// Leader dot spacing, 1.5mu.
    pub dots_space: Mu,
    /// First/last-line indent of multline, 1em.
    pub multline_gap: Dim,
    /// Gap between a multline row and its fitted tag, 1em.
    pub multline_tag_gap: Dim,
    /// Minimum extensible-arrow width outside diagrams, 11.11128 ex.
    pub min_arrow: Dim,
    /// Minimum arrow width inside a commutative diagram, 2.5pc.
    pub min_cd_arrow: Dim,
    /// Display-row strut.
    pub strut_height: Dim,
    pub strut_depth: Dim,
    /// Extra opening for multi-row displays, 3pt.
    pub jot: Dim,
    /// Extra matrix-row opening, defaults to zero.
    pub spread_mlines: Dim,
    /// Extra display-row opening from `\spreadlines`, defaults to zero.
    pub spread_lines: Dim,
    /// Override for the operator vertical buffer (`\ChangeBuffer`).
    pub op_buffer_override: Option<Dim>,
    /// Padding a generalized fraction inherits when no delimiter is set.
    pub null_delimiter_space: Dim,
    /// Baseline geometry for stacked rows (plain `\normalbaselines`).
    pub baselineskip: Dim,
    pub lineskip: Dim,
    pub lineskiplimit: Dim,
}

impl LayoutConstants {
    /// Defaults derived from the given metrics (only `ex`-based values need
    /// them).
    pub fn new(metrics: &Metrics) -> LayoutConstants {
        let ex = metrics.x_height(Style::TEXT).scale_frac(2326, 10000);
        LayoutConstants {
            ex,
            dots_space: Mu::from_frac(3, 2),
            multline_gap: metrics.quad(Style::TEXT),
            multline_tag_gap: metrics.quad(Style::TEXT),
            min_arrow: ex.scale_frac(1111128, 100000),
            min_cd_arrow: Dim::from_pt_decimal(30, 0, 1),
            strut_height: Dim::from_pt(8),
            strut_depth: Dim::from_pt(3),
            jot: Dim::from_pt(3),
            spread_mlines: Dim::ZERO,
            spread_lines: Dim::ZERO,
            op_buffer_override: None,
            null_delimiter_space: Dim::from_pt_decimal(1, 2, 10),
            baselineskip: Dim::from_pt(12),
            lineskip: Dim::from_pt(1),
            lineskiplimit: Dim::ZERO,
        }
    }

    /// Applies `key = value` overrides from a constants file. Recognized
    /// keys are the field names; values take pt/pc/sp/em/ex/mu suffixes.
    pub fn apply_config(
        &mut self,
        text: &str,
        metrics: &Metrics,
    ) -> Result<(), ConfigError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::BadEntry {
                line: lineno + 1,
                reason: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let dim = |v: &str| parse_dimension(v, metrics).map_err(|reason| {
                ConfigError::BadEntry {
                    line: lineno + 1,
                    reason,
                }
            });
            match key {
                "ex" => self.ex = dim(value)?,
                "dots_space" => {
                    self.dots_space = parse_mu(value).map_err(|reason| {
                        ConfigError::BadEntry {
                            line: lineno + 1,
                            reason,
                        }
                    })?
                }
                "multline_gap" => self.multline_gap = dim(value)?,
                "multline_tag_gap" => self.multline_tag_gap = dim(value)?,
                "min_arrow" => self.min_arrow = dim(value)?,
                "min_cd_arrow" => self.min_cd_arrow = dim(value)?,
                "strut_height" => self.strut_height = dim(value)?,
                "strut_depth" => self.strut_depth = dim(value)?,
                "jot" => self.jot = dim(value)?,
                "spread_mlines" => self.spread_mlines = dim(value)?,
                "spread_lines" => self.spread_lines = dim(value)?,
                "op_buffer" => self.op_buffer_override = Some(dim(value)?),
                _ => {
                    return Err(ConfigError::BadEntry {
                        line: lineno + 1,
                        reason: format!("unknown key `{key}`"),
                    })
                }
            }
        }
        Ok(())
    }
}

/// Parses `2.5pc`, `390pt`, `-3mu`-style dimension text. em/ex resolve at
/// the text size; mu at 18 per em.
pub fn parse_dimension(text: &str, metrics: &Metrics) -> Result<Dim, String> {
    let (value, unit) = split_number_unit(text)?;
    let (int_part, frac_num, frac_den, negative) = value;
    let total_num = int_part
        .checked_mul(frac_den)
        .and_then(|v| v.checked_add(frac_num))
        .ok_or("value too large")?;
    let signed = if negative { -total_num } else { total_num };
    let from_unit = |unit_sp: Dim, extra_den: i64| unit_sp.scale_frac(signed, frac_den * extra_den);
    match unit {
        "pt" => Ok(from_unit(Dim::from_pt(1), 1)),
        "pc" => Ok(from_unit(Dim::from_pt(12), 1)),
        "sp" => {
            if frac_num != 0 {
                return Err("sp values must be integers".into());
            }
            Ok(Dim(if negative { -int_part } else { int_part }))
        }
        "em" => Ok(from_unit(metrics.quad(Style::TEXT), 1)),
        "ex" => Ok(from_unit(metrics.x_height(Style::TEXT), 1)),
        "mu" => Ok(from_unit(metrics.quad(Style::TEXT), 18)),
        other => Err(format!("unknown unit `{other}`")),
    }
}

/// Parses a mu quantity like `1.5mu`.
pub fn parse_mu(text: &str) -> Result<Mu, String> {
    let (value, unit) = split_number_unit(text)?;
    if unit != "mu" {
        return Err(format!("expected a mu value, got unit `{unit}`"));
    }
    let (int_part, frac_num, frac_den, negative) = value;
    let m = Mu::from_units(int_part) + Mu::from_frac(frac_num, frac_den);
    Ok(if negative { -m } else { m })
}

type DecimalParts = (i64, i64, i64, bool);

fn split_number_unit(text: &str) -> Result<(DecimalParts, &str), String> {
    let text = text.trim();
    let split = text
        .find(|c: char| c.is_ascii_alphabetic())
        .ok_or_else(|| format!("missing unit in `{text}`"))?;
    let (num, unit) = text.split_at(split);
    let mut num = num.trim();
    let negative = num.starts_with('-');
    if negative || num.starts_with('+') {
        num = &num[1..];
    }
    let (int_str, frac_str) = match num.split_once('.') {
        Some((i, f)) => (i, f),
        None => (num, ""),
    };
    let int_part: i64 = if int_str.is_empty() {
        0
    } else {
        int_str.parse().map_err(|_| format!("bad number `{text}`"))?
    };
    let (frac_num, frac_den) = if frac_str.is_empty() {
        (0, 1)
    } else {
        let den = 10i64.checked_pow(frac_str.len() as u32).ok_or("fraction too long")?;
        let num: i64 = frac_str.parse().map_err(|_| format!("bad number `{text}`"))?;
        (num, den)
    };
    Ok(((int_part, frac_num, frac_den, negative), unit.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constants() -> (Metrics, LayoutConstants) {
        let m = Metrics::builtin();
        let c = LayoutConstants::new(&m);
        (m, c)
    }

    #[test]
    fn default_values() {
        let (_, c) = constants();
        // trunc(282165 * 2326 / 10000)
        assert_eq!(c.ex, Dim(65631));
        assert_eq!(c.dots_space, Mu(98304));
        assert_eq!(c.multline_gap, Dim(655360));
        assert_eq!(c.multline_tag_gap, Dim(655360));
        assert_eq!(c.min_cd_arrow, Dim(1966080));
        assert_eq!(c.min_arrow, Dim(65631).scale_frac(1111128, 100000));
        assert_eq!(c.strut_height, Dim::from_pt(8));
        assert_eq!(c.strut_depth, Dim::from_pt(3));
        assert_eq!(c.jot, Dim::from_pt(3));
        assert_eq!(c.spread_mlines, Dim::ZERO);
    }

    #[test]
    fn config_overrides() {
        let (m, mut c) = constants();
        c.apply_config("min_cd_arrow = 3pc\njot = 4pt\ndots_space = 2mu", &m)
            .unwrap();
        assert_eq!(c.min_cd_arrow, Dim::from_pt(36));
        assert_eq!(c.jot, Dim::from_pt(4));
        assert_eq!(c.dots_space, Mu::from_units(2));
    }

    #[test]
    fn dimension_parsing() {
        let m = Metrics::builtin();
        assert_eq!(parse_dimension("390pt", &m).unwrap(), Dim::from_pt(390));
        assert_eq!(parse_dimension("2.5pc", &m).unwrap(), Dim::from_pt(30));
        assert_eq!(parse_dimension("-3mu", &m).unwrap(), Dim(-109226));
        assert_eq!(parse_dimension("1em", &m).unwrap(), Dim(655360));
        assert_eq!(parse_dimension("655360sp", &m).unwrap(), Dim(655360));
    }
}
