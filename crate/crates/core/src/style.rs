//! Math styles: the four sizes plus cramping.

/// The four math style levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StyleLevel {
    Display,
    Text,
    Script,
    ScriptScript,
}

/// A style is a level plus a cramped flag. Cramping lowers superscripts but
/// never changes metrics sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Style {
    pub level: StyleLevel,
    pub cramped: bool,
}

impl Style {
    pub const DISPLAY: Style = Style {
        level: StyleLevel::Display,
        cramped: false,
    };
    pub const TEXT: Style = Style {
        level: StyleLevel::Text,
        cramped: false,
    };
    pub const SCRIPT: Style = Style {
        level: StyleLevel::Script,
        cramped: false,
    };
    pub const SCRIPT_SCRIPT: Style = Style {
        level: StyleLevel::ScriptScript,
        cramped: false,
    };

    pub fn new(level: StyleLevel, cramped: bool) -> Style {
        Style { level, cramped }
    }

    pub fn cramp(self) -> Style {
        Style {
            cramped: true,
            ..self
        }
    }

    pub fn with_level(self, level: StyleLevel) -> Style {
        Style { level, ..self }
    }

    pub fn is_display(self) -> bool {
        self.level == StyleLevel::Display
    }

    /// True for Display and Text; the spacing table drops medium and thick
    /// glue in script styles.
    pub fn is_full_size(self) -> bool {
        matches!(self.level, StyleLevel::Display | StyleLevel::Text)
    }

    /// Script-of: Display and Text drop to Script, Script and smaller to
    /// ScriptScript.
    pub fn script_level(self) -> StyleLevel {
        match self.level {
            StyleLevel::Display | StyleLevel::Text => StyleLevel::Script,
            StyleLevel::Script | StyleLevel::ScriptScript => StyleLevel::ScriptScript,
        }
    }

    pub fn sup_style(self) -> Style {
        Style {
            level: self.script_level(),
            cramped: self.cramped,
        }
    }

    pub fn sub_style(self) -> Style {
        Style {
            level: self.script_level(),
            cramped: true,
        }
    }

    /// Numerator style: one step smaller, cramping preserved.
    pub fn num_style(self) -> Style {
        Style {
            level: match self.level {
                StyleLevel::Display => StyleLevel::Text,
                StyleLevel::Text => StyleLevel::Script,
                _ => StyleLevel::ScriptScript,
            },
            cramped: self.cramped,
        }
    }

    /// Denominator style: one step smaller, always cramped.
    pub fn denom_style(self) -> Style {
        Style {
            level: match self.level {
                StyleLevel::Display => StyleLevel::Text,
                StyleLevel::Text => StyleLevel::Script,
                _ => StyleLevel::ScriptScript,
            },
            cramped: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn script_of_levels() {
        assert_eq!(Style::DISPLAY.script_level(), StyleLevel::Script);
        assert_eq!(Style::TEXT.script_level(), StyleLevel::Script);
        assert_eq!(Style::SCRIPT.script_level(), StyleLevel::ScriptScript);
        assert_eq!(Style::SCRIPT_SCRIPT.script_level(), StyleLevel::ScriptScript);
    }

    #[test]
    fn denominators_are_cramped() {
        assert!(Style::DISPLAY.denom_style().cramped);
        assert_eq!(Style::DISPLAY.denom_style().level, StyleLevel::Text);
        assert_eq!(Style::SCRIPT.num_style().level, StyleLevel::ScriptScript);
    }
}
