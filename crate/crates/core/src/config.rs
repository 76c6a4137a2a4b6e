//! Run-level configuration: display geometry, tag conventions, and the
//! configuration deltas parsed out of the input itself.

use crate::constants::{parse_dimension, LayoutConstants};
use crate:: dim::Dim;
use crate::error::ConfigError;
use crate::metrics::Metrics;
use crate::symbols::LimitsConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagsSide {
    Left,
    Right,
}

/// Display-level configuration.
#[derive(Debug, Clone)]
pub struct DisplayConfig {
    pub display_width: Dim,
    pub tags_side: TagsSide,
    pub math_tags: bool,
    pub centered_split_tags: bool,
    /// `\allowdisplaybreaks`: recorded between rows, no page model exists.
    pub allow_display_breaks: bool,
}

impl Default for DisplayConfig {
    fn default() -> DisplayConfig {
        DisplayConfig {
            display_width: Dim::from_pt(390),
            tags_side: TagsSide::Left,
            math_tags: false,
            centered_split_tags: false,
            allow_display_breaks: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BufferChange {
    Set(String),
    Restore,
}

/// Configuration commands collected while parsing one expression. Dimension
/// arguments stay as written until metrics are available.
#[derive(Debug, Clone, Default)]
pub struct EnvConfig {
    pub limits: LimitsConfig,
    pub tags_side: Option<TagsSide>,
    pub math_tags: Option<bool>,
    pub centered_split_tags: Option<bool>,
    pub multline_gap: Option<String>,
    pub min_cd_arrow: Option<String>,
    pub spread_lines: Option<String>,
    pub spread_matrix_lines: Option<String>,
    pub op_buffer: Option<BufferChange>,
    pub allow_display_breaks: bool,
}

impl EnvConfig {
    /// Applies the parsed deltas onto the run configuration.
    pub fn apply(
        &self,
        display: &mut DisplayConfig,
        constants: &mut LayoutConstants,
        metrics: &Metrics,
    ) -> Result<(), ConfigError> {
        let dim = |text: &str| {
            parse_dimension(text, metrics).map_err(|reason| ConfigError::BadEntry {
                line: 0,
                reason,
            })
        };
        if let Some(side) = self.tags_side {
            display.tags_side = side;
        }
        if let Some(v) = self.math_tags {
            display.math_tags = v;
        }
        if let Some(v) = self.centered_split_tags {
            display.centered_split_tags = v;
        }
        if self.allow_display_breaks {
            display.allow_display_breaks = true;
        }
        if let Some(text) = &self.multline_gap {
            constants.multline_gap = dim(text)?;
        }
        if let Some(text) = &self.min_cd_arrow {
            constants.min_cd_arrow = dim(text)?;
        }
        if let Some(text) = &self.spread_lines {
            constants.spread_lines = dim(text)?;
        }
        if let Some(text) = &self.spread_matrix_lines {
            constants.spread_mlines = dim(text)?;
        }
        match &self.op_buffer {
            Some(BufferChange::Set(text)) => constants.op_buffer_override = Some(dim(text)?),
            Some(BufferChange::Restore) => constants.op_buffer_override = None,
            None => {}
        }
        Ok(())
    }
}
