//! Context-sensitive resolution of `\dots` and its explicit variants.
//!
//! The original inspects the meaning of the next token; here the registry's
//! class and marker fields encode the same facts declaratively, so the
//! decision is a pure function of the lookahead context.

use crate::boxes::{hpack_natural, BoxNode};
use crate::constants::LayoutConstants;
use crate::dim::{mu_to_dim, Mu};
use crate::metrics::{Family, GlyphId, Metrics};
use crate::style::Style;
use crate::symbols::{registry, AtomClass, DotsMarker};

/// What the writer asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotsHint {
    Auto,
    Dotsb,
    Dotsc,
    Dotsi,
    Dotsm,
    Dotso,
    Ldots,
    Cdots,
}

impl DotsHint {
    pub fn command_name(self) -> &'static str {
        match self {
            DotsHint::Auto => "dots",
            DotsHint::Dotsb => "dotsb",
            DotsHint::Dotsc => "dotsc",
            DotsHint::Dotsi => "dotsi",
            DotsHint::Dotsm => "dotsm",
            DotsHint::Dotso => "dotso",
            DotsHint::Ldots => "ldots",
            DotsHint::Cdots => "cdots",
        }
    }
}

/// The token to the right of the dots, reduced to what the rules inspect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeighborContext {
    /// End of the math expression.
    End,
    Char(char),
    /// A control word, by name (aliases like `\}` normalize to `rbrace`).
    Command(String),
    /// Groups, alignment tabs, anything else.
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotsKind {
    Low,
    Centered,
}

/// The resolved form: low or centered dots, with optional thin-space
/// attachments. Centered dots never carry a trailing thin space, and the
/// leading space (the integral-dots form) is a negative thin kern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DotsDecision {
    pub kind: DotsKind,
    pub leading_thin: bool,
    pub trailing_thin: bool,
}

impl DotsDecision {
    fn low(trailing: bool) -> DotsDecision {
        DotsDecision {
            kind: DotsKind::Low,
            leading_thin: false,
            trailing_thin: trailing,
        }
    }

    fn centered() -> DotsDecision {
        DotsDecision {
            kind: DotsKind::Centered,
            leading_thin: false,
            trailing_thin: false,
        }
    }

    fn centered_integral() -> DotsDecision {
        DotsDecision {
            kind: DotsKind::Centered,
            leading_thin: true,
            trailing_thin: false,
        }
    }
}

/// The right-delimiter tokens that pull a thin space after low dots.
const RIGHT_DELIMS: &[&str] = &[
    "rbrack",
    "rbrace",
    "rangle",
    "rceil",
    "rfloor",
    "rgroup",
    "rmoustache",
    "right",
    "bigr",
    "biggr",
    "Bigr",
    "Biggr",
];

/// Does the context fire the trailing-space test: a right delimiter, the end
/// of math, or a symbol carrying the X marker.
fn extra(right: &NeighborContext) -> bool {
    match right {
        NeighborContext::End => true,
        NeighborContext::Char(')') | NeighborContext::Char(']') => true,
        NeighborContext::Command(name) => {
            RIGHT_DELIMS.contains(&name.as_str())
                || registry()
                    .lookup(name)
                    .map(|s| s.dots_marker == DotsMarker::Dotsx)
                    .unwrap_or(false)
        }
        _ => false,
    }
}

/// The seven literal characters that force centered dots.
fn is_key_bin_char(c: char) -> bool {
    matches!(c, '+' | '=' | '<' | '>' | '-' | '*' | ':')
}

/// Resolves a dots command against its right context. The left context is
/// unused by the rules and kept only for renderer hints.
pub fn resolve_dots(
    _left: Option<&NeighborContext>,
    right: &NeighborContext,
    explicit: DotsHint,
) -> DotsDecision {
    match explicit {
        DotsHint::Cdots | DotsHint::Dotsb | DotsHint::Dotsm => DotsDecision::centered(),
        DotsHint::Dotsi => DotsDecision::centered_integral(),
        DotsHint::Ldots | DotsHint::Dotso => DotsDecision::low(
            matches!(right, NeighborContext::Char(',' | ';' | '.')) || extra(right),
        ),
        DotsHint::Dotsc => DotsDecision::low(
            matches!(right, NeighborContext::Char(';' | '.')) || extra(right),
        ),
        DotsHint::Auto => match right {
            // A following comma selects the comma form, whose own trailing
            // rules exclude the comma itself.
            NeighborContext::Char(',') => DotsDecision::low(false),
            NeighborContext::Char(c) if is_key_bin_char(*c) => DotsDecision::centered(),
            NeighborContext::Command(name) if name == "not" => DotsDecision::centered(),
            NeighborContext::Command(name) => match registry().lookup(name) {
                Ok(info) => {
                    if matches!(info.class, AtomClass::Bin | AtomClass::Rel)
                        || info.dots_marker == DotsMarker::Dotsb
                    {
                        DotsDecision::centered()
                    } else if info.dots_marker == DotsMarker::Dotsi {
                        DotsDecision::centered_integral()
                    } else {
                        DotsDecision::low(extra(right))
                    }
                }
                Err(_) => DotsDecision::low(extra(right)),
            },
            _ => DotsDecision::low(extra(right)),
        },
    }
}

/// Builds the dots box: three period glyphs at the baseline (low) or three
/// centered dots on the axis, with inter-dot thin spaces in full-size styles
/// and the decision's thin-space attachments.
pub fn dots_box(
    decision: DotsDecision,
    style: Style,
    metrics: &Metrics,
    _constants: &LayoutConstants,
) -> BoxNode {
    let glyph_id = match decision.kind {
        DotsKind::Low => GlyphId::new(Family::Italic, 0x3A),
        DotsKind::Centered => GlyphId::new(Family::Sy, 0x01),
    };
    let ch = match decision.kind {
        DotsKind::Low => '.',
        DotsKind::Centered => '\u{22C5}',
    };
    let g = metrics.glyph(glyph_id, style);
    let dot = || BoxNode::glyph(glyph_id, ch, g.width, g.height, g.depth);
    let thin = mu_to_dim(Mu::from_units(3), metrics.quad(style));
    let mut items = Vec::new();
    if decision.leading_thin {
        items.push(BoxNode::kern(-thin));
    }
    items.push(dot());
    // Punct-Punct spacing: thin in display and text, nothing in scripts.
    let gap = if style.is_full_size() { thin } else { crate::dim::Dim::ZERO };
    if !gap.is_zero() {
        items.push(BoxNode::kern(gap));
    }
    items.push(dot());
    if !gap.is_zero() {
        items.push(BoxNode::kern(gap));
    }
    items.push(dot());
    if decision.trailing_thin {
        items.push(BoxNode::kern(thin));
    }
    hpack_natural(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::registry;

    fn auto(right: NeighborContext) -> DotsDecision {
        resolve_dots(None, &right, DotsHint::Auto)
    }

    #[test]
    fn key_characters_center() {
        assert_eq!(auto(NeighborContext::Char('+')).kind, DotsKind::Centered);
        assert_eq!(auto(NeighborContext::Char('=')).kind, DotsKind::Centered);
        assert_eq!(auto(NeighborContext::Char('<')).kind, DotsKind::Centered);
        assert_eq!(auto(NeighborContext::Char(':')).kind, DotsKind::Centered);
    }

    #[test]
    fn comma_goes_low_without_trailing_space() {
        let d = auto(NeighborContext::Char(','));
        assert_eq!(d.kind, DotsKind::Low);
        assert!(!d.trailing_thin);
    }

    #[test]
    fn registry_classes_drive_the_decision() {
        assert_eq!(
            auto(NeighborContext::Command("cup".into())).kind,
            DotsKind::Centered
        );
        assert_eq!(
            auto(NeighborContext::Command("leq".into())).kind,
            DotsKind::Centered
        );
        assert_eq!(
            auto(NeighborContext::Command("alpha".into())).kind,
            DotsKind::Low
        );
        assert_eq!(
            auto(NeighborContext::Command("not".into())).kind,
            DotsKind::Centered
        );
    }

    #[test]
    fn markers() {
        assert_eq!(
            auto(NeighborContext::Command("sum".into())).kind,
            DotsKind::Centered
        );
        let d = auto(NeighborContext::Command("int".into()));
        assert_eq!(d.kind, DotsKind::Centered);
        assert!(d.leading_thin);
    }

    #[test]
    fn trailing_space_on_right_delimiters() {
        let d = resolve_dots(None, &NeighborContext::Char(')'), DotsHint::Dotso);
        assert_eq!(d.kind, DotsKind::Low);
        assert!(d.trailing_thin);
        let d = auto(NeighborContext::Command("rangle".into()));
        assert!(d.trailing_thin);
        let d = auto(NeighborContext::End);
        assert!(d.trailing_thin);
        let d = auto(NeighborContext::Other);
        assert!(!d.trailing_thin);
    }

    #[test]
    fn dotsc_excludes_comma() {
        let d = resolve_dots(None, &NeighborContext::Char(','), DotsHint::Dotsc);
        assert!(!d.trailing_thin);
        let d = resolve_dots(None, &NeighborContext::Char(';'), DotsHint::Dotsc);
        assert!(d.trailing_thin);
        let d = resolve_dots(None, &NeighborContext::Char('.'), DotsHint::Dotsc);
        assert!(d.trailing_thin);
    }

    #[test]
    fn explicit_leading_forms_get_punct_spaces() {
        for hint in [DotsHint::Ldots, DotsHint::Dotso] {
            for c in [',', ';', '.'] {
                let d = resolve_dots(None, &NeighborContext::Char(c), hint);
                assert_eq!(d.kind, DotsKind::Low);
                assert!(d.trailing_thin, "{hint:?} before {c}");
            }
        }
    }

    #[test]
    fn centered_never_trails() {
        for hint in [DotsHint::Cdots, DotsHint::Dotsb, DotsHint::Dotsm] {
            for right in [
                NeighborContext::Char(','),
                NeighborContext::Char(')'),
                NeighborContext::End,
            ] {
                let d = resolve_dots(None, &right, hint);
                assert_eq!(d.kind, DotsKind::Centered);
                assert!(!d.trailing_thin);
            }
        }
    }

    #[test]
    fn exhaustive_registry_sweep_matches_class_digit_oracle() {
        for info in registry().iter() {
            let d = auto(NeighborContext::Command(info.name.clone()));
            let expect_centered = matches!(info.class, AtomClass::Bin | AtomClass::Rel)
                || matches!(info.dots_marker, DotsMarker::Dotsb | DotsMarker::Dotsi);
            assert_eq!(
                d.kind == DotsKind::Centered,
                expect_centered,
                "symbol {}",
                info.name
            );
        }
    }
}
