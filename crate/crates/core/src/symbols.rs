//! The immutable math symbol registry plus the named-operator table and
//! alphabet variant mapping. Built once at startup, read-only afterwards.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::RegistryError;
use crate::metrics::{Family, GlyphId};

/// TeX's eight atom classes, in their numeric order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomClass {
    Ord = 0,
    Op = 1,
    Bin = 2,
    Rel = 3,
    Open = 4,
    Close = 5,
    Punct = 6,
    Inner = 7,
}

impl AtomClass {
    pub fn from_digit(d: u8) -> Option<AtomClass> {
        Some(match d {
            0 => AtomClass::Ord,
            1 => AtomClass::Op,
            2 => AtomClass::Bin,
            3 => AtomClass::Rel,
            4 => AtomClass::Open,
            5 => AtomClass::Close,
            6 => AtomClass::Punct,
            7 => AtomClass::Inner,
            _ => return None,
        })
    }

    pub fn digit(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Roman,
    Italic,
    Cal,
    Bold,
    Slanted,
    Bbb,
    MsX,
    MsY,
}

impl Variant {
    fn parse(s: &str) -> Option<Variant> {
        Some(match s {
            "roman" => Variant::Roman,
            "italic" => Variant::Italic,
            "cal" => Variant::Cal,
            "bold" => Variant::Bold,
            "slanted" => Variant::Slanted,
            "bbb" => Variant::Bbb,
            "msx" => Variant::MsX,
            "msy" => Variant::MsY,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Roman => "roman",
            Variant::Italic => "italic",
            Variant::Cal => "cal",
            Variant::Bold => "bold",
            Variant::Slanted => "slanted",
            Variant::Bbb => "bbb",
            Variant::MsX => "msx",
            Variant::MsY => "msy",
        }
    }
}

/// Default limit placement for operator atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitsDefault {
    /// Limits above/below in display style, at the side otherwise.
    DisplayLimits,
    NoLimits,
    Limits,
}

/// Markers steering the smart-dots classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotsMarker {
    None,
    Dotsb,
    Dotsi,
    Dotsx,
}

#[derive(Debug, Clone)]
pub struct SymbolInfo {
    pub name: String,
    pub class: AtomClass,
    pub glyph: GlyphId,
    pub variant: Variant,
    pub limits_default: LimitsDefault,
    pub dots_marker: DotsMarker,
    pub unicode: Option<char>,
}

pub const BUILTIN_SYMBOLS: &str = include_str!("../data/symbols.txt");

#[derive(Debug)]
pub struct Registry {
    map: HashMap<String, SymbolInfo>,
}

impl Registry {
    pub fn parse(text: &str) -> Result<Registry, RegistryError> {
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 8 {
                return Err(RegistryError::BadRecord {
                    line: lineno + 1,
                    reason: format!("expected 8 fields, found {}", f.len()),
                });
            }
            let bad = |reason: String| RegistryError::BadRecord {
                line: lineno + 1,
                reason,
            };
            let class = f[1]
                .parse::<u8>()
                .ok()
                .and_then(AtomClass::from_digit)
                .ok_or_else(|| bad(format!("bad class `{}`", f[1])))?;
            let family = f[2]
                .parse::<u8>()
                .ok()
                .and_then(Family::from_id)
                .ok_or_else(|| bad(format!("bad family `{}`", f[2])))?;
            let slot = u8::from_str_radix(f[3], 16)
                .map_err(|_| bad(format!("bad slot `{}`", f[3])))?;
            let variant =
                Variant::parse(f[4]).ok_or_else(|| bad(format!("bad variant `{}`", f[4])))?;
            let limits_default = match f[5] {
                "display" => LimitsDefault::DisplayLimits,
                "nolimits" | "-" => LimitsDefault::NoLimits,
                "limits" => LimitsDefault::Limits,
                other => return Err(bad(format!("bad limits `{other}`"))),
            };
            let dots_marker = match f[6] {
                "-" => DotsMarker::None,
                "B" => DotsMarker::Dotsb,
                "I" => DotsMarker::Dotsi,
                "X" => DotsMarker::Dotsx,
                other => return Err(bad(format!("bad marker `{other}`"))),
            };
            let unicode = match f[7] {
                "-" => None,
                hex => Some(
                    u32::from_str_radix(hex, 16)
                        .ok()
                        .and_then(char::from_u32)
                        .ok_or_else(|| bad(format!("bad unicode `{hex}`")))?,
                ),
            };
            let name = f[0].to_string();
            if map.contains_key(&name) {
                return Err(bad(format!("duplicate symbol `{name}`")));
            }
            map.insert(
                name.clone(),
                SymbolInfo {
                    name,
                    class,
                    glyph: GlyphId::new(family, slot),
                    variant,
                    limits_default,
                    dots_marker,
                    unicode,
                },
            );
        }
        Ok(Registry { map })
    }

    pub fn lookup(&self, name: &str) -> Result<&SymbolInfo, RegistryError> {
        self.map
            .get(name)
            .ok_or_else(|| RegistryError::NotFound(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SymbolInfo> {
        self.map.values()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// The process-wide registry built from the shipped table.
pub fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(|| Registry::parse(BUILTIN_SYMBOLS).expect("built-in registry is valid"))
}

/// Runtime limit-convention switches; these live in a config object, never
/// in global state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitsConfig {
    pub sums: LimitsDefault,
    pub ints: LimitsDefault,
    pub names: LimitsDefault,
}

impl Default for LimitsConfig {
    fn default() -> LimitsConfig {
        LimitsConfig {
            sums: LimitsDefault::DisplayLimits,
            ints: LimitsDefault::NoLimits,
            names: LimitsDefault::DisplayLimits,
        }
    }
}

/// Operators that always attach their scripts at the side.
const QOPNAME: &[&str] = &[
    "arccos", "arcsin", "arctan", "arg", "cos", "cosh", "cot", "coth", "csc", "deg", "dim",
    "exp", "hom", "ker", "lg", "ln", "log", "sec", "sin", "sinh", "tan", "tanh",
];

/// Operators whose limits stack in display style; the middle column is the
/// rendered text (`\,` marks a thin space).
const QOPNAMEWL: &[(&str, &str)] = &[
    ("det", "det"),
    ("gcd", "gcd"),
    ("inf", "inf"),
    ("injlim", "inj\\,lim"),
    ("lim", "lim"),
    ("liminf", "lim\\,inf"),
    ("limsup", "lim\\,sup"),
    ("max", "max"),
    ("min", "min"),
    ("Pr", "Pr"),
    ("projlim", "proj\\,lim"),
    ("sup", "sup"),
];

/// Resolves a named operator: its upright text, limit default under the
/// given conventions, and whether MathML should mark the limits movable.
pub fn operator_info(
    name: &str,
    config: &LimitsConfig,
) -> Result<(String, LimitsDefault, bool), RegistryError> {
    if QOPNAME.contains(&name) {
        return Ok((name.to_string(), LimitsDefault::NoLimits, false));
    }
    if let Some((_, text)) = QOPNAMEWL.iter().find(|(n, _)| *n == name) {
        let limits = config.names;
        return Ok((
            text.to_string(),
            limits,
            limits == LimitsDefault::DisplayLimits,
        ));
    }
    Err(RegistryError::NotFound(name.to_string()))
}

pub fn is_operator_name(name: &str) -> bool {
    QOPNAME.contains(&name) || QOPNAMEWL.iter().any(|(n, _)| *n == name)
}

/// Maps a letter into a font-variant alphabet. Cal and Bbb accept capital
/// letters only.
pub fn variant_map(variant: Variant, letter: char) -> Result<GlyphId, RegistryError> {
    let out_of_domain = || RegistryError::OutOfDomain {
        variant: variant.name().to_string(),
        letter,
    };
    let slot = letter as u32;
    if slot > 0x7F {
        return Err(out_of_domain());
    }
    let slot = slot as u8;
    match variant {
        Variant::Cal => {
            if letter.is_ascii_uppercase() {
                Ok(GlyphId::new(Family::Sy, slot))
            } else {
                Err(out_of_domain())
            }
        }
        Variant::Bbb => {
            if letter.is_ascii_uppercase() {
                Ok(GlyphId::new(Family::MsY, slot))
            } else {
                Err(out_of_domain())
            }
        }
        Variant::Bold => {
            if letter.is_ascii_alphanumeric() {
                Ok(GlyphId::new(Family::Bold, slot))
            } else {
                Err(out_of_domain())
            }
        }
        Variant::Roman => {
            if letter.is_ascii_alphanumeric() {
                Ok(GlyphId::new(Family::Roman, slot))
            } else {
                Err(out_of_domain())
            }
        }
        Variant::Italic => {
            if letter.is_ascii_alphabetic() {
                Ok(GlyphId::new(Family::Italic, slot))
            } else {
                Err(out_of_domain())
            }
        }
        Variant::Slanted => {
            if letter.is_ascii_alphabetic() {
                Ok(GlyphId::new(Family::Slanted, slot))
            } else {
                Err(out_of_domain())
            }
        }
        Variant::MsX | Variant::MsY => Err(out_of_domain()),
    }
}

/// Unicode for a variant letter, with the letterlike exceptions.
pub fn variant_unicode(variant: Variant, letter: char) -> char {
    fn offset(base: u32, from: char, letter: char) -> char {
        char::from_u32(base + (letter as u32 - from as u32)).unwrap_or(letter)
    }
    match variant {
        Variant::Roman => letter,
        Variant::Italic | Variant::Slanted => match letter {
            'h' => '\u{210E}',
            'A'..='Z' => offset(0x1D434, 'A', letter),
            'a'..='z' => offset(0x1D44E, 'a', letter),
            _ => letter,
        },
        Variant::Bold => match letter {
            'A'..='Z' => offset(0x1D400, 'A', letter),
            'a'..='z' => offset(0x1D41A, 'a', letter),
            '0'..='9' => offset(0x1D7CE, '0', letter),
            _ => letter,
        },
        Variant::Cal => match letter {
            'B' => '\u{212C}',
            'E' => '\u{2130}',
            'F' => '\u{2131}',
            'H' => '\u{210B}',
            'I' => '\u{2110}',
            'L' => '\u{2112}',
            'M' => '\u{2133}',
            'R' => '\u{211B}',
            'A'..='Z' => offset(0x1D49C, 'A', letter),
            _ => letter,
        },
        Variant::Bbb => match letter {
            'C' => '\u{2102}',
            'H' => '\u{210D}',
            'N' => '\u{2115}',
            'P' => '\u{2119}',
            'Q' => '\u{211A}',
            'R' => '\u{211D}',
            'Z' => '\u{2124}',
            'A'..='Z' => offset(0x1D538, 'A', letter),
            _ => letter,
        },
        Variant::MsX | Variant::MsY => letter,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_classes_match_source_table() {
        let r = registry();
        assert_eq!(r.lookup("vartriangleleft").unwrap().class, AtomClass::Rel);
        assert_eq!(r.lookup("dotplus").unwrap().class, AtomClass::Bin);
        assert_eq!(r.lookup("varnothing").unwrap().class, AtomClass::Ord);
        assert_eq!(r.lookup("lesssim").unwrap().class, AtomClass::Rel);
        assert_eq!(r.lookup("veebar").unwrap().class, AtomClass::Bin);
        assert_eq!(r.lookup("square").unwrap().class, AtomClass::Ord);
        assert!(r.lookup("nosuchsymbol").is_err());
    }

    #[test]
    fn dots_markers() {
        let r = registry();
        assert_eq!(r.lookup("implies").unwrap().dots_marker, DotsMarker::Dotsb);
        assert_eq!(r.lookup("int").unwrap().dots_marker, DotsMarker::Dotsi);
        assert_eq!(r.lookup("sum").unwrap().dots_marker, DotsMarker::Dotsb);
        assert_eq!(r.lookup("cup").unwrap().dots_marker, DotsMarker::None);
    }

    #[test]
    fn operator_defaults() {
        let cfg = LimitsConfig::default();
        let (_, lim, movable) = operator_info("lim", &cfg).unwrap();
        assert_eq!(lim, LimitsDefault::DisplayLimits);
        assert!(movable);
        let (_, lim, movable) = operator_info("sin", &cfg).unwrap();
        assert_eq!(lim, LimitsDefault::NoLimits);
        assert!(!movable);
        let flipped = LimitsConfig {
            names: LimitsDefault::NoLimits,
            ..cfg
        };
        let (_, lim, _) = operator_info("lim", &flipped).unwrap();
        assert_eq!(lim, LimitsDefault::NoLimits);
        assert!(operator_info("notanop", &cfg).is_err());
    }

    #[test]
    fn variant_domains() {
        assert_eq!(
            variant_map(Variant::Bbb, 'R').unwrap(),
            GlyphId::new(Family::MsY, b'R')
        );
        assert_eq!(
            variant_map(Variant::Cal, 'F').unwrap(),
            GlyphId::new(Family::Sy, b'F')
        );
        assert!(variant_map(Variant::Bbb, '1').is_err());
        assert!(variant_map(Variant::Cal, 'a').is_err());
        assert_eq!(variant_unicode(Variant::Bbb, 'R'), '\u{211D}');
        assert_eq!(variant_unicode(Variant::Cal, 'F'), '\u{2131}');
    }

    #[test]
    fn int_defaults_to_nolimits() {
        let r = registry();
        assert_eq!(
            r.lookup("int").unwrap().limits_default,
            LimitsDefault::NoLimits
        );
        assert_eq!(
            r.lookup("sum").unwrap().limits_default,
            LimitsDefault::DisplayLimits
        );
    }
}
